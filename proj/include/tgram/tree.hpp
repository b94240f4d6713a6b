#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tgram {

inline constexpr const char* kTopLabel = "TOP";

/// Half-open word interval [start, end).
struct Span {
  int start = 0;
  int end = 0;

  int length() const { return end - start; }
  auto operator<=>(const Span&) const = default;
};

/// Structural stand-in for the head word attached to phrasal labels.
/// order 0: nothing; order 1: head POS; order 2: head POS plus its mother label.
struct PreHead {
  int order = 0;
  std::string head_pos;
  std::string head_pos_mother;

  bool operator==(const PreHead&) const = default;
};

/// Ordered labeled constituency tree.
///
/// Leaves hold a word and no label. A node whose only child is a leaf is a
/// preterminal (POS node). `head_child` is 1-based; 0 means "not marked".
struct ParseTree {
  std::string label;
  std::vector<std::string> function_tags;
  std::string index;
  std::string word;
  std::vector<ParseTree> children;

  int head_child = 0;
  Span span;
  bool complement = false;
  std::vector<std::string> sc_left;
  std::vector<std::string> sc_right;
  std::optional<PreHead> prehead;

  bool is_leaf() const { return children.empty(); }
  bool is_word() const { return children.empty() && label.empty(); }
  bool is_pos() const { return children.size() == 1 && children[0].is_word(); }
  bool is_phrasal() const { return !children.empty() && !is_pos(); }

  const ParseTree& head() const { return children.at(static_cast<std::size_t>(head_child - 1)); }

  /// Label used for modeling: the WSJ label plus any pre-head decoration.
  std::string model_label() const;

  bool operator==(const ParseTree&) const = default;
};

/// Inverse of model_label: sets label and pre-head from "S^VBD/VP".
void set_model_label(ParseTree& node, std::string_view enriched);

/// A failed parse, printed as "(())".
ParseTree failed_parse();
bool is_failed_parse(const ParseTree& tree);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Reads Penn-Treebank bracketed text. Each tree gets an explicit TOP root
/// unless its outermost label already is TOP; an empty outermost label is
/// read as TOP. Function tags and indices are split off the labels.
std::vector<ParseTree> parse_bracketed(std::string_view text);

/// Parses exactly one tree.
ParseTree parse_tree(std::string_view text);

struct PrintOptions {
  bool function_tags = true;
  bool preheads = false;
};

/// Single-line canonical bracketed form.
std::string to_bracketed(const ParseTree& tree, const PrintOptions& options = {});

/// Splits "NP-SBJ-1" into label, tags and index. Labels starting with '-'
/// (e.g. -NONE-, -LRB-) are kept whole.
void split_label(std::string_view raw, std::string& label, std::vector<std::string>& tags,
                 std::string& index);

void compute_spans(ParseTree& tree);
std::vector<std::string> yield(const ParseTree& tree);
std::vector<std::string> pos_tags(const ParseTree& tree);

/// Removes -NONE- subtrees and any constituent left without words.
ParseTree strip_empty_elements(const ParseTree& tree);

/// Copy of the tree with pre-heads, complement flags and subcat frames removed.
ParseTree strip_decorations(const ParseTree& tree);

/// Address of a node: child indices (0-based) from the root.
using NodeAddress = std::vector<std::size_t>;

const ParseTree& node_at(const ParseTree& root, const NodeAddress& address);
std::string to_string(const NodeAddress& address);

}  // namespace tgram
