#include "tgram/fragment.hpp"

#include <algorithm>
#include <stdexcept>

namespace tgram {

namespace {

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::string render_child(const FragNode& child, bool is_head) {
  if (child.kind == FragNode::Kind::Word) return escape_word(child.label);
  std::string out = is_head ? "*(" : "(";
  if (child.kind == FragNode::Kind::Open) {
    out += child.label;
    if (child.complement) out += "-C";
  } else {
    out += child.token();
    if (child.complement) out += "-C";
    out += child.tail();
  }
  out += ')';
  return out;
}

class TGramReader {
 public:
  explicit TGramReader(std::string_view text) : s_(text) {}

  TGram read() {
    if (s_.size() < 4 || s_[1] != ':' || s_[2] != ' ') fail("expected 'ROLE: '");
    TGram t;
    t.role = role_from_code(s_[0]);
    pos_ = 3;
    FragNode root;
    read_token(root, /*allow_complement=*/false);
    root.kind = FragNode::Kind::Inner;
    read_children(root);
    if (pos_ != s_.size()) fail("trailing characters");
    if (t.role == Role::Head && root.head < 0) fail("head T-gram without a marked head child");
    t.root = make_inner(std::move(root));
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("malformed T-gram at column " + std::to_string(pos_) + ": " + what +
                             " in '" + std::string(s_) + "'");
  }

  void read_token(FragNode& node, bool allow_complement) {
    std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ' ' && s_[pos_] != ')') ++pos_;
    std::string_view tok = s_.substr(start, pos_ - start);
    if (tok.empty()) fail("empty token");
    if (allow_complement && tok.size() > 2 && tok.ends_with("-C")) {
      node.complement = true;
      tok.remove_suffix(2);
    }
    if (tok.ends_with('}')) {
      auto brace = tok.rfind('{');
      if (brace == std::string_view::npos) fail("unterminated frame");
      for (const auto& part : split(tok.substr(brace + 1, tok.size() - brace - 2), ';')) {
        if (part.size() < 3 || part[1] != ':') fail("bad frame '" + part + "'");
        auto labels = split(std::string_view(part).substr(2), ',');
        if (part[0] == 'L')
          node.frame_left = labels;
        else if (part[0] == 'R')
          node.frame_right = labels;
        else
          fail("bad frame side");
      }
      tok = tok.substr(0, brace);
    }
    if (tok.starts_with('[')) {
      node.left_complete = true;
      tok.remove_prefix(1);
    }
    if (tok.ends_with(']')) {
      node.right_complete = true;
      tok.remove_suffix(1);
    }
    if (tok.empty()) fail("empty label");
    node.label = std::string(tok);
    node.wsj = wsj_label(node.label);
  }

  void read_children(FragNode& node) {
    while (pos_ < s_.size() && s_[pos_] == ' ') {
      ++pos_;
      const bool is_head = pos_ < s_.size() && s_[pos_] == '*';
      if (is_head) {
        ++pos_;
        if (pos_ >= s_.size() || s_[pos_] != '(') fail("head mark must precede '('");
      }
      if (is_head) node.head = static_cast<int>(node.children.size());
      if (pos_ < s_.size() && s_[pos_] == '(') {
        node.children.push_back(read_node());
      } else {
        node.children.push_back(make_word(read_word()));
        if (node.head < 0) node.head = 0;
      }
    }
    if (node.children.empty()) fail("inner node without children");
  }

  FragPtr read_node() {
    ++pos_;  // '('
    FragNode node;
    read_token(node, /*allow_complement=*/true);
    if (pos_ < s_.size() && s_[pos_] == ')') {
      ++pos_;
      return make_open(node.label, node.wsj, node.complement);
    }
    node.kind = FragNode::Kind::Inner;
    read_children(node);
    if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
    ++pos_;
    if (node.head < 0) fail("inner node without a head child");
    return make_inner(std::move(node));
  }

  std::string read_word() {
    std::string w;
    while (pos_ < s_.size() && s_[pos_] != ' ' && s_[pos_] != ')') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
      w += s_[pos_++];
    }
    if (w.empty()) fail("empty word");
    return w;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

char role_code(Role role) {
  switch (role) {
    case Role::Head: return 'H';
    case Role::Left: return 'L';
    case Role::Right: return 'R';
  }
  return '?';
}

Role role_from_code(char code) {
  switch (code) {
    case 'H': return Role::Head;
    case 'L': return Role::Left;
    case 'R': return Role::Right;
    default: throw std::invalid_argument(std::string("unknown role '") + code + "'");
  }
}

std::string_view to_string(Completeness c) {
  switch (c) {
    case Completeness::Open: return "open";
    case Completeness::LeftComplete: return "left-complete";
    case Completeness::RightComplete: return "right-complete";
    case Completeness::Complete: return "complete";
  }
  return "?";
}

Completeness FragNode::completeness() const {
  if (left_complete && right_complete) return Completeness::Complete;
  if (left_complete) return Completeness::LeftComplete;
  if (right_complete) return Completeness::RightComplete;
  return Completeness::Open;
}

std::string FragNode::as_child() const { return render_child(*this, false); }

void FragNode::finalize() {
  token_.clear();
  tail_.clear();
  if (kind != Kind::Inner) return;
  if (left_complete) token_ += '[';
  token_ += label;
  if (right_complete) token_ += ']';
  if (!frame_left.empty() || !frame_right.empty()) {
    token_ += '{';
    if (!frame_left.empty()) token_ += "L:" + join(frame_left, ',');
    if (!frame_left.empty() && !frame_right.empty()) token_ += ';';
    if (!frame_right.empty()) token_ += "R:" + join(frame_right, ',');
    token_ += '}';
  }
  for (std::size_t i = 0; i < children.size(); ++i) {
    tail_ += ' ';
    tail_ += render_child(*children[i], static_cast<int>(i) == head);
  }
}

FragPtr make_word(const std::string& word) {
  auto n = std::make_shared<FragNode>();
  n->kind = FragNode::Kind::Word;
  n->label = word;
  return n;
}

FragPtr make_open(const std::string& label, const std::string& wsj, bool complement) {
  auto n = std::make_shared<FragNode>();
  n->kind = FragNode::Kind::Open;
  n->label = label;
  n->wsj = wsj;
  n->complement = complement;
  return n;
}

FragPtr make_inner(FragNode node) {
  node.kind = FragNode::Kind::Inner;
  node.finalize();
  return std::make_shared<const FragNode>(std::move(node));
}

std::string TGram::text() const {
  std::string out;
  out += role_code(role);
  out += ": ";
  out += root->token();
  out += root->tail();
  return out;
}

TGram parse_tgram(std::string_view line) { return TGramReader(line).read(); }

FragPtr make_open_leaf(const ParseTree& child) {
  return make_open(child.model_label(), child.label, child.complement);
}

FragPtr make_window(const ParseTree& node, Role role, int lo, int hi, std::span<const FragPtr> filled) {
  FragNode f;
  f.label = node.model_label();
  f.wsj = node.label;
  if (node.is_pos()) {
    f.complement = node.complement;
    f.left_complete = f.right_complete = true;
    f.head = 0;
    f.children.push_back(make_word(node.children[0].word));
    return make_inner(std::move(f));
  }
  const int n = static_cast<int>(node.children.size());
  const int h = node.head_child - 1;
  if (lo < 0 || hi >= n || lo > hi || static_cast<int>(filled.size()) != hi - lo + 1)
    throw std::invalid_argument("bad window");
  switch (role) {
    case Role::Head:
      if (lo > h || hi < h) throw std::invalid_argument("head window must contain the head child");
      f.complement = node.complement;
      f.head = h - lo;
      f.left_complete = lo == 0;
      f.right_complete = hi == n - 1;
      for (int i = 0; i < n; ++i) {
        const auto& c = node.children[static_cast<std::size_t>(i)];
        if (!c.complement) continue;
        if (i < lo) f.frame_left.push_back(c.label);
        if (i > hi) f.frame_right.push_back(c.label);
      }
      std::sort(f.frame_left.begin(), f.frame_left.end());
      std::sort(f.frame_right.begin(), f.frame_right.end());
      break;
    case Role::Left:
      if (hi >= h) throw std::invalid_argument("left window must lie left of the head");
      f.left_complete = lo == 0;
      break;
    case Role::Right:
      if (lo <= h) throw std::invalid_argument("right window must lie right of the head");
      f.right_complete = hi == n - 1;
      break;
  }
  for (int i = lo; i <= hi; ++i) {
    const auto& slot = filled[static_cast<std::size_t>(i - lo)];
    f.children.push_back(slot ? slot : make_open_leaf(node.children[static_cast<std::size_t>(i)]));
  }
  return make_inner(std::move(f));
}

int fragment_depth(const FragNode& node, DepthMode mode) {
  if (node.kind != FragNode::Kind::Inner) return 0;
  const int n = static_cast<int>(node.children.size());
  int best = 0;
  for (int i = 0; i < n; ++i) {
    int edges = 1;
    if (mode == DepthMode::HeadOutward) {
      if (node.head >= 0)
        edges += std::abs(i - node.head);
      else if (node.left_complete || !node.right_complete)
        edges += n - i;  // left-dependent window: the head lies to the right
      else
        edges += i + 1;
    }
    best = std::max(best, edges + fragment_depth(*node.children[static_cast<std::size_t>(i)], mode));
  }
  return best;
}

int tgram_depth(const TGram& t, DepthMode mode) {
  if (mode == DepthMode::HeadOutward && t.root->head < 0) {
    // Dependent roots: distance is measured towards the (absent) head.
    const auto& node = *t.root;
    const int n = static_cast<int>(node.children.size());
    int best = 0;
    for (int i = 0; i < n; ++i) {
      const int dist = t.role == Role::Left ? n - i : i + 1;
      best = std::max(best, 1 + dist + fragment_depth(*node.children[static_cast<std::size_t>(i)], mode));
    }
    return best;
  }
  return fragment_depth(*t.root, mode);
}

Completeness completeness_of(const FragNode& node) {
  if (node.kind != FragNode::Kind::Inner) throw std::invalid_argument("completeness of a leaf");
  return node.completeness();
}

int fragment_open_budget(const FragNode& node) {
  switch (node.kind) {
    case FragNode::Kind::Word: return 0;
    case FragNode::Kind::Open: return 1;
    case FragNode::Kind::Inner: break;
  }
  int total = (node.left_complete ? 0 : 1) + (node.right_complete ? 0 : 1);
  for (const auto& c : node.children) total += fragment_open_budget(*c);
  return total;
}

int open_budget(const TGram& t) { return fragment_open_budget(*t.root); }

int word_count(const FragNode& node) {
  if (node.kind == FragNode::Kind::Word) return 1;
  int total = 0;
  for (const auto& c : node.children) total += word_count(*c);
  return total;
}

int max_branching(const FragNode& node) {
  int best = static_cast<int>(node.children.size());
  for (const auto& c : node.children) best = std::max(best, max_branching(*c));
  return best;
}

std::string escape_word(std::string_view word) {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    const char c = word[i];
    if (c == '(' || c == ')' || c == '\\' || c == ' ' || (i == 0 && c == '*')) out += '\\';
    out += c;
  }
  return out;
}

std::string wsj_label(std::string_view enriched) {
  auto caret = enriched.find('^');
  return std::string(enriched.substr(0, caret));
}

}  // namespace tgram
