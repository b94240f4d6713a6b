#include "tgram/tree.hpp"

#include <cctype>
#include <functional>

namespace tgram {

namespace {

struct Token {
  enum class Kind { Open, Close, Atom, End } kind;
  std::string_view text;
  std::size_t offset;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token peek() {
    if (!peeked_) {
      next_ = scan();
      peeked_ = true;
    }
    return next_;
  }

  Token take() {
    Token t = peek();
    peeked_ = false;
    return t;
  }

 private:
  Token scan() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ >= text_.size()) return {Token::Kind::End, {}, text_.size()};
    const std::size_t start = pos_;
    if (text_[pos_] == '(') {
      ++pos_;
      return {Token::Kind::Open, text_.substr(start, 1), start};
    }
    if (text_[pos_] == ')') {
      ++pos_;
      return {Token::Kind::Close, text_.substr(start, 1), start};
    }
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    return {Token::Kind::Atom, text_.substr(start, pos_ - start), start};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  bool peeked_ = false;
  Token next_{Token::Kind::End, {}, 0};
};

ParseTree read_node(Lexer& lex, bool outermost) {
  const Token open = lex.take();
  if (open.kind == Token::Kind::End) throw ParseError("unbalanced parentheses", open.offset);
  if (open.kind != Token::Kind::Open) throw ParseError("expected '('", open.offset);

  ParseTree node;
  Token t = lex.peek();
  if (t.kind == Token::Kind::Atom) {
    lex.take();
    split_label(t.text, node.label, node.function_tags, node.index);
    if (node.label.empty()) throw ParseError("empty label", t.offset);
  } else if (!outermost) {
    throw ParseError("empty label", open.offset);
  }

  bool has_word = false;
  for (;;) {
    t = lex.peek();
    if (t.kind == Token::Kind::End) throw ParseError("unbalanced parentheses", t.offset);
    if (t.kind == Token::Kind::Close) {
      lex.take();
      break;
    }
    if (t.kind == Token::Kind::Open) {
      node.children.push_back(read_node(lex, false));
    } else {
      lex.take();
      ParseTree leaf;
      leaf.word = std::string(t.text);
      node.children.push_back(std::move(leaf));
      has_word = true;
    }
  }
  if (node.children.empty()) throw ParseError("empty constituent", open.offset);
  if (has_word && node.children.size() > 1)
    throw ParseError("a word must be the only child of its preterminal", open.offset);
  if (has_word && node.label.empty()) throw ParseError("empty label", open.offset);
  return node;
}

bool is_failed_literal(Lexer& lex) {
  // "(())" is the conventional failed-parse line.
  Lexer probe = lex;
  return probe.take().kind == Token::Kind::Open && probe.take().kind == Token::Kind::Open &&
         probe.take().kind == Token::Kind::Close && probe.take().kind == Token::Kind::Close;
}

void print(const ParseTree& t, const PrintOptions& opt, std::string& out) {
  if (t.is_word()) {
    out += t.word;
    return;
  }
  if (t.children.empty()) {
    out += "(())";
    return;
  }
  out += '(';
  out += opt.preheads ? t.model_label() : t.label;
  if (opt.function_tags) {
    for (const auto& tag : t.function_tags) out += "-" + tag;
    if (!t.index.empty()) out += "-" + t.index;
  }
  for (const auto& c : t.children) {
    out += ' ';
    print(c, opt, out);
  }
  out += ')';
}

int assign_spans(ParseTree& t, int start) {
  if (t.is_word()) {
    t.span = {start, start + 1};
    return start + 1;
  }
  int pos = start;
  for (auto& c : t.children) pos = assign_spans(c, pos);
  t.span = {start, pos};
  return pos;
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t offset)
    : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

std::string ParseTree::model_label() const {
  if (!prehead || prehead->order == 0) return label;
  std::string out = label + "^" + prehead->head_pos;
  if (prehead->order == 2) out += "/" + prehead->head_pos_mother;
  return out;
}

void set_model_label(ParseTree& node, std::string_view enriched) {
  const auto caret = enriched.find('^');
  node.label = std::string(enriched.substr(0, caret));
  if (caret == std::string_view::npos) {
    node.prehead.reset();
    return;
  }
  PreHead ph;
  auto rest = enriched.substr(caret + 1);
  const auto slash = rest.find('/');
  ph.head_pos = std::string(rest.substr(0, slash));
  ph.order = 1;
  if (slash != std::string_view::npos) {
    ph.head_pos_mother = std::string(rest.substr(slash + 1));
    ph.order = 2;
  }
  node.prehead = ph;
}

ParseTree failed_parse() {
  ParseTree t;
  t.label = kTopLabel;
  return t;
}

bool is_failed_parse(const ParseTree& tree) { return !tree.label.empty() && tree.children.empty(); }

void split_label(std::string_view raw, std::string& label, std::vector<std::string>& tags,
                 std::string& index) {
  tags.clear();
  index.clear();
  if (raw.empty() || raw.front() == '-') {
    label = std::string(raw);
    return;
  }
  if (auto bar = raw.find('|'); bar != std::string_view::npos && bar > 0) raw = raw.substr(0, bar);
  std::vector<std::string_view> pieces;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= raw.size(); ++i) {
    if (i == raw.size() || raw[i] == '-' || raw[i] == '=') {
      pieces.push_back(raw.substr(start, i - start));
      start = i + 1;
    }
  }
  label = std::string(pieces.front());
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    auto p = pieces[i];
    if (p.empty()) continue;
    bool digits = true;
    for (char c : p) digits = digits && std::isdigit(static_cast<unsigned char>(c));
    if (digits)
      index = std::string(p);
    else
      tags.emplace_back(p);
  }
}

std::vector<ParseTree> parse_bracketed(std::string_view text) {
  Lexer lex(text);
  std::vector<ParseTree> trees;
  for (;;) {
    Token t = lex.peek();
    if (t.kind == Token::Kind::End) break;
    if (t.kind == Token::Kind::Close) throw ParseError("unbalanced parentheses", t.offset);
    if (t.kind == Token::Kind::Atom) throw ParseError("text outside brackets", t.offset);
    if (is_failed_literal(lex)) {
      for (int i = 0; i < 4; ++i) lex.take();
      trees.push_back(failed_parse());
      continue;
    }
    ParseTree tree = read_node(lex, true);
    if (tree.label.empty()) {
      tree.label = kTopLabel;
    } else if (tree.label != kTopLabel) {
      ParseTree top;
      top.label = kTopLabel;
      top.children.push_back(std::move(tree));
      tree = std::move(top);
    }
    compute_spans(tree);
    trees.push_back(std::move(tree));
  }
  return trees;
}

ParseTree parse_tree(std::string_view text) {
  auto trees = parse_bracketed(text);
  if (trees.size() != 1)
    throw ParseError("expected exactly one tree, found " + std::to_string(trees.size()), 0);
  return std::move(trees.front());
}

std::string to_bracketed(const ParseTree& tree, const PrintOptions& options) {
  std::string out;
  print(tree, options, out);
  return out;
}

void compute_spans(ParseTree& tree) { assign_spans(tree, 0); }

std::vector<std::string> yield(const ParseTree& tree) {
  std::vector<std::string> words;
  std::function<void(const ParseTree&)> walk = [&](const ParseTree& t) {
    if (t.is_word()) words.push_back(t.word);
    for (const auto& c : t.children) walk(c);
  };
  walk(tree);
  return words;
}

std::vector<std::string> pos_tags(const ParseTree& tree) {
  std::vector<std::string> tags;
  std::function<void(const ParseTree&)> walk = [&](const ParseTree& t) {
    if (t.is_pos()) {
      tags.push_back(t.label);
      return;
    }
    for (const auto& c : t.children) walk(c);
  };
  walk(tree);
  return tags;
}

ParseTree strip_empty_elements(const ParseTree& tree) {
  std::function<std::optional<ParseTree>(const ParseTree&)> strip =
      [&](const ParseTree& t) -> std::optional<ParseTree> {
    if (t.is_word()) return t;
    if (t.label == "-NONE-") return std::nullopt;
    ParseTree out = t;
    out.children.clear();
    for (const auto& c : t.children)
      if (auto s = strip(c)) out.children.push_back(std::move(*s));
    if (out.children.empty()) return std::nullopt;
    if (out.children.size() != t.children.size()) out.head_child = 0;
    return out;
  };
  auto result = strip(tree);
  if (!result) return failed_parse();
  compute_spans(*result);
  return std::move(*result);
}

ParseTree strip_decorations(const ParseTree& tree) {
  ParseTree out = tree;
  std::function<void(ParseTree&)> walk = [&](ParseTree& t) {
    t.prehead.reset();
    t.complement = false;
    t.sc_left.clear();
    t.sc_right.clear();
    for (auto& c : t.children) walk(c);
  };
  walk(out);
  return out;
}

const ParseTree& node_at(const ParseTree& root, const NodeAddress& address) {
  const ParseTree* node = &root;
  for (auto i : address) node = &node->children.at(i);
  return *node;
}

std::string to_string(const NodeAddress& address) {
  std::string out;
  for (std::size_t i = 0; i < address.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(address[i]);
  }
  return out.empty() ? "." : out;
}

}  // namespace tgram
