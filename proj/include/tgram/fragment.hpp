#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tgram/tree.hpp"

namespace tgram {

enum class Role { Head, Left, Right };

char role_code(Role role);
Role role_from_code(char code);

/// Which sides of a node are closed by a stop symbol.
enum class Completeness { Open, LeftComplete, RightComplete, Complete };

std::string_view to_string(Completeness c);

/// How tgram_depth measures a fragment.
///  Flat: longest root-to-leaf edge count with dependent windows kept flat.
///  HeadOutward: a child k positions away from its head sits k+1 edges down,
///  as in a head-outward binarization of every window.
enum class DepthMode { Flat, HeadOutward };

/// A node of a T-gram fragment.
///
/// Word and Open nodes are leaves (a terminal, or a nonterminal left for a
/// later head step). Inner nodes carry boundary flags, the position of their
/// head child within the fragment (-1 for the root of a dependent T-gram),
/// and the residual subcat frames of the source node.
struct FragNode {
  enum class Kind { Word, Open, Inner };

  Kind kind = Kind::Inner;
  std::string label;  // enriched label; the word itself for Kind::Word
  std::string wsj;    // label without pre-head
  bool complement = false;
  bool left_complete = false;
  bool right_complete = false;
  int head = -1;
  std::vector<std::string> frame_left;
  std::vector<std::string> frame_right;
  std::vector<std::shared_ptr<const FragNode>> children;

  Completeness completeness() const;

  /// Marker, label and frames, without the complement mark.
  const std::string& token() const { return token_; }
  /// Rendered children, each preceded by a space.
  const std::string& tail() const { return tail_; }
  /// Rendering as a child of another node (head mark excluded).
  std::string as_child() const;

  /// Recomputes the cached renderings; call after filling the fields.
  void finalize();

 private:
  std::string token_;
  std::string tail_;
};

using FragPtr = std::shared_ptr<const FragNode>;

FragPtr make_word(const std::string& word);
FragPtr make_open(const std::string& label, const std::string& wsj, bool complement);
FragPtr make_inner(FragNode node);

/// A role-tagged tree fragment.
///
/// Text form (one line, bit-exact):
///
///     ROLE ": " TOKEN (" " CHILD)+
///     TOKEN := ["["] LABEL ["]"] ["{" ["L:" labels] [";"] ["R:" labels] "}"]
///     CHILD := WORD | ["*"] "(" LABEL ["-C"] ")"
///            | ["*"] "(" TOKEN ["-C"] (" " CHILD)+ ")"
///
/// "[" / "]" mark left/right completeness, "{...}" lists non-empty residual
/// subcat frames, "-C" marks a complement child and "*" the head child of a
/// node (words, the only child of a POS node, are never marked). Example:
///
///     L: [S (NP)
///     H: [NP] ([DET] a) *([NN] deal)
struct TGram {
  Role role = Role::Head;
  FragPtr root;

  std::string text() const;
  bool operator==(const TGram& other) const { return role == other.role && text() == other.text(); }
};

TGram parse_tgram(std::string_view line);

/// Fragment node from the children window [lo, hi] (0-based, inclusive) of
/// a tree node. `filled[i]` substitutes child lo+i; null leaves it open.
/// Head windows must contain the head child; dependent windows must lie
/// strictly on one side of it. POS nodes yield `pt -> word` (complete).
FragPtr make_window(const ParseTree& node, Role role, int lo, int hi, std::span<const FragPtr> filled);
FragPtr make_open_leaf(const ParseTree& child);

int tgram_depth(const TGram& t, DepthMode mode = DepthMode::Flat);
int fragment_depth(const FragNode& node, DepthMode mode = DepthMode::Flat);
Completeness completeness_of(const FragNode& node);
/// Nonterminal leaves plus open sides of inner nodes (an open node counts twice).
int open_budget(const TGram& t);
int fragment_open_budget(const FragNode& node);
int word_count(const FragNode& node);
int max_branching(const FragNode& node);

/// Escapes characters that would break the text form of a word.
std::string escape_word(std::string_view word);

/// Strips a pre-head decoration: "S^VBD/VP" -> "S".
std::string wsj_label(std::string_view enriched);

}  // namespace tgram
