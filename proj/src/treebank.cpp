#include "tgram/treebank.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace tgram {

namespace {

constexpr std::string_view kCollinsTable = R"(# Collins (1999) head table, Magerman-style directions.
# left  = scan from the left,  right = scan from the right.
# *-any = first child matching any listed label.
TOP left
ADJP left NNS QP NN $ ADVP JJ VBN VBG ADJP JJR NP JJS DT DET FW RBR RBS SBAR RB
ADVP right RB RBR RBS FW ADVP TO CD JJR JJ IN NP JJS NN
CONJP right CC RB IN
FRAG right
INTJ left
LST right LS :
NAC left NN NNS NNP NNPS NP NAC EX $ CD QP PRP VBG JJ JJS JJR ADJP FW
NP right-any NN NNP NNPS NNS NX POS JJR
NP left NP
NP right-any $ ADJP PRN
NP right-any CD
NP right-any JJ JJS RB QP
NX right-any NN NNP NNPS NNS NX POS JJR
NX left NP NX
PP right IN TO VBG VBN RP FW
PRN left
PRT right RP
QP left $ IN NNS NN JJ RB DT DET CD NCD QP JJR JJS
RRC right VP NP ADVP ADJP PP
S left TO IN VP S SBAR ADJP UCP NP
SBAR left WHNP WHPP WHADVP WHADJP IN DT DET S SQ SINV SBAR FRAG
SBARQ left SQ S SINV SBARQ FRAG
SINV left VBZ VBD VBP VB MD VP S SINV ADJP NP
SQ left VBZ VBD VBP VB MD VP SQ
UCP right
VP left TO VBD VBN MD VBZ VB VBG VBP VP ADJP NN NNS NP
WHADJP left CC WRB JJ ADJP
WHADVP right CC WRB
WHNP left WDT WP WP$ WHADJP WHPP WHNP
WHPP right IN TO FW
* left
)";

constexpr std::string_view kComplementTable = R"(# A non-head child is a complement iff its parent label is listed under
# `parents`, its own label under `children`, and it carries none of the
# `exclude-tags` function tags.
parents S VP SBAR
children NP SBAR S
exclude-tags ADV VOC BNF DIR EXT LOC MNR TMP CLR PRP
)";

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename Fn>
void for_each_rule_line(std::string_view text, Fn fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto fields = split_ws(line);
    if (!fields.empty()) fn(fields, line_no);
    start = end + 1;
  }
}

// Order of an index sequence for a scan direction.
std::vector<int> scan_order(HeadRule::Scan scan, int n) {
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = scan == HeadRule::Scan::LeftToRight ? i : n - 1 - i;
  return order;
}

std::string head_pos_of(const ParseTree& t) {
  const ParseTree* node = &t;
  while (!node->is_pos()) node = &node->head();
  return node->label;
}

// Label of the node immediately dominating the head POS tag.
std::string head_pos_mother_of(const ParseTree& t) {
  const ParseTree* node = &t;
  while (!node->head().is_pos()) node = &node->head();
  return node->label;
}

}  // namespace

// ---------------------------------------------------------------- head rules

HeadRuleSet HeadRuleSet::parse(std::string_view text) {
  HeadRuleSet set;
  for_each_rule_line(text, [&](const std::vector<std::string>& f, std::size_t line_no) {
    if (f.size() < 2)
      throw std::runtime_error("head rules line " + std::to_string(line_no) + ": missing direction");
    HeadRule rule;
    const auto& dir = f[1];
    if (dir == "left" || dir == "left-any") {
      rule.scan = HeadRule::Scan::LeftToRight;
    } else if (dir == "right" || dir == "right-any") {
      rule.scan = HeadRule::Scan::RightToLeft;
    } else {
      throw std::runtime_error("head rules line " + std::to_string(line_no) +
                               ": unknown direction '" + dir + "'");
    }
    rule.any_of = dir.ends_with("-any");
    rule.labels.assign(f.begin() + 2, f.end());
    if (f[0] == "*")
      set.fallback_.push_back(std::move(rule));
    else
      set.rules_[f[0]].push_back(std::move(rule));
  });
  return set;
}

HeadRuleSet HeadRuleSet::load(const std::string& path) { return parse(read_file(path)); }

const HeadRuleSet& HeadRuleSet::collins() {
  static const HeadRuleSet rules = parse(kCollinsTable);
  return rules;
}

std::string_view HeadRuleSet::collins_text() { return kCollinsTable; }

int HeadRuleSet::find_head(const std::string& parent, std::span<const std::string> children) const {
  const int n = static_cast<int>(children.size());
  if (n <= 1) return 1;
  auto it = rules_.find(parent);
  const std::vector<HeadRule>& rules = it != rules_.end() ? it->second : fallback_;
  for (const auto& rule : rules) {
    const auto order = scan_order(rule.scan, n);
    if (rule.any_of) {
      for (int i : order)
        if (std::find(rule.labels.begin(), rule.labels.end(), children[static_cast<std::size_t>(i)]) !=
            rule.labels.end())
          return i + 1;
    } else {
      for (const auto& want : rule.labels)
        for (int i : order)
          if (children[static_cast<std::size_t>(i)] == want) return i + 1;
    }
  }
  if (rules.empty()) return 1;
  return rules.front().scan == HeadRule::Scan::LeftToRight ? 1 : n;
}

// ------------------------------------------------------------- complements

ComplementRules ComplementRules::parse(std::string_view text) {
  ComplementRules rules;
  for_each_rule_line(text, [&](const std::vector<std::string>& f, std::size_t line_no) {
    std::set<std::string>* target = nullptr;
    if (f[0] == "parents")
      target = &rules.parents_;
    else if (f[0] == "children")
      target = &rules.children_;
    else if (f[0] == "exclude-tags")
      target = &rules.excluded_tags_;
    else
      throw std::runtime_error("complement rules line " + std::to_string(line_no) +
                               ": unknown key '" + f[0] + "'");
    target->insert(f.begin() + 1, f.end());
  });
  return rules;
}

ComplementRules ComplementRules::load(const std::string& path) { return parse(read_file(path)); }

const ComplementRules& ComplementRules::standard() {
  static const ComplementRules rules = parse(kComplementTable);
  return rules;
}

std::string_view ComplementRules::standard_text() { return kComplementTable; }

bool ComplementRules::is_complement(const std::string& parent, const ParseTree& child) const {
  if (!parents_.count(parent) || !children_.count(child.label)) return false;
  for (const auto& tag : child.function_tags)
    if (excluded_tags_.count(tag)) return false;
  return true;
}

// ------------------------------------------------------------- tree passes

ParseTree mark_heads(const ParseTree& tree, const HeadRuleSet& rules) {
  ParseTree out = tree;
  std::function<void(ParseTree&)> walk = [&](ParseTree& t) {
    if (t.is_word()) return;
    if (t.children.empty()) return;
    if (t.label == kTopLabel || t.is_pos()) {
      t.head_child = 1;
    } else {
      std::vector<std::string> labels;
      labels.reserve(t.children.size());
      for (const auto& c : t.children) labels.push_back(c.label);
      t.head_child = rules.find_head(t.label, labels);
    }
    for (auto& c : t.children) walk(c);
  };
  walk(out);
  return out;
}

ParseTree enrich_preheads(const ParseTree& tree, int order) {
  if (order < 0 || order > 2) throw std::invalid_argument("pre-head order must be 0, 1 or 2");
  ParseTree out = tree;
  std::function<void(ParseTree&)> walk = [&](ParseTree& t) {
    if (t.children.empty()) return;
    for (auto& c : t.children) walk(c);
    if (!t.is_phrasal() || t.label == kTopLabel) return;
    PreHead ph;
    ph.order = order;
    if (order >= 1) ph.head_pos = head_pos_of(t);
    if (order == 2) ph.head_pos_mother = head_pos_mother_of(t);
    t.prehead = ph;
  };
  walk(out);
  return out;
}

void compute_subcat_frames(ParseTree& t) {
  t.sc_left.clear();
  t.sc_right.clear();
  if (t.is_phrasal() && t.head_child > 0) {
    for (std::size_t i = 0; i < t.children.size(); ++i) {
      const auto& c = t.children[i];
      if (!c.complement) continue;
      if (static_cast<int>(i) + 1 < t.head_child) t.sc_left.push_back(c.label);
      if (static_cast<int>(i) + 1 > t.head_child) t.sc_right.push_back(c.label);
    }
    std::sort(t.sc_left.begin(), t.sc_left.end());
    std::sort(t.sc_right.begin(), t.sc_right.end());
  }
  for (auto& c : t.children) compute_subcat_frames(c);
}

ParseTree mark_complements(const ParseTree& tree, const ComplementRules& rules) {
  ParseTree out = tree;
  std::function<void(ParseTree&)> walk = [&](ParseTree& t) {
    if (t.is_phrasal()) {
      for (std::size_t i = 0; i < t.children.size(); ++i) {
        auto& c = t.children[i];
        c.complement = static_cast<int>(i) + 1 != t.head_child && rules.is_complement(t.label, c);
      }
    }
    for (auto& c : t.children) walk(c);
  };
  walk(out);
  compute_subcat_frames(out);
  return out;
}

// ------------------------------------------------------------ unknown words

std::string unknown_signature(std::string_view word) {
  static const std::vector<std::string> kSuffixes = {"ing", "ed", "ion", "er", "est", "ly", "ity", "s"};
  const bool cap = !word.empty() && std::isupper(static_cast<unsigned char>(word.front()));
  std::string lower(word);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  std::string suffix;
  for (const auto& s : kSuffixes)
    if (lower.ends_with(s) && s.size() > suffix.size()) suffix = s;
  if (suffix.empty() && !lower.empty()) suffix = lower.substr(lower.size() - 1);
  return std::string(cap ? "1" : "0") + "+UNKNOWN+" + suffix;
}

std::vector<ParseTree> rename_unknown_words(const std::vector<ParseTree>& treebank,
                                            std::uint64_t threshold) {
  if (threshold == 0) return treebank;
  std::map<std::string, std::uint64_t> counts;
  for (const auto& t : treebank)
    for (const auto& w : yield(t)) ++counts[w];
  std::vector<ParseTree> out = treebank;
  std::function<void(ParseTree&)> walk = [&](ParseTree& t) {
    if (t.is_word()) {
      if (counts[t.word] < threshold) t.word = unknown_signature(t.word);
      return;
    }
    for (auto& c : t.children) walk(c);
  };
  for (auto& t : out) walk(t);
  return out;
}

// ------------------------------------------------------------------ lexicon

void TagLexicon::add(const std::string& word, const std::string& pos, std::uint64_t count) {
  words_[word][pos] += count;
}

std::map<std::string, std::uint64_t> TagLexicon::lookup(const std::string& word) const {
  if (auto it = words_.find(word); it != words_.end()) return it->second;
  if (auto it = words_.find(unknown_signature(word)); it != words_.end()) return it->second;
  return {};
}

std::string TagLexicon::normalize(const std::string& word) const {
  return contains(word) ? word : unknown_signature(word);
}

std::string TagLexicon::to_text() const {
  std::string out;
  for (const auto& [word, tags] : words_) {
    out += word;
    out += '\t';
    bool first = true;
    for (const auto& [pos, count] : tags) {
      if (!first) out += ',';
      first = false;
      out += pos + ":" + std::to_string(count);
    }
    out += '\n';
  }
  return out;
}

TagLexicon TagLexicon::from_text(std::string_view text) {
  TagLexicon lex;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw std::runtime_error("lexicon line without TAB");
    std::string word(line.substr(0, tab));
    std::string_view rest = line.substr(tab + 1);
    // Tags such as "," and ":" collide with the separators, so an entry ends
    // at the first ":<digits>" that is followed by ',' or the end of line.
    std::size_t p = 0;
    while (p < rest.size()) {
      bool found = false;
      for (std::size_t j = p + 1; j < rest.size(); ++j) {
        if (rest[j] != ':') continue;
        std::size_t k = j + 1;
        while (k < rest.size() && std::isdigit(static_cast<unsigned char>(rest[k]))) ++k;
        if (k == j + 1 || (k < rest.size() && rest[k] != ',')) continue;
        lex.add(word, std::string(rest.substr(p, j - p)), std::stoull(std::string(rest.substr(j + 1, k - j - 1))));
        p = k + 1;
        found = true;
        break;
      }
      if (!found) throw std::runtime_error("malformed lexicon entry for '" + word + "'");
    }
  }
  return lex;
}

TagLexicon build_tag_lexicon(const std::vector<ParseTree>& treebank) {
  TagLexicon lex;
  std::function<void(const ParseTree&)> walk = [&](const ParseTree& t) {
    if (t.is_pos()) {
      lex.add(t.children[0].word, t.label);
      return;
    }
    for (const auto& c : t.children) walk(c);
  };
  for (const auto& t : treebank) walk(t);
  return lex;
}

}  // namespace tgram
