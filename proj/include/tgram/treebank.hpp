#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tgram/tree.hpp"

namespace tgram {

/// One line of a head-rule table.
struct HeadRule {
  enum class Scan { LeftToRight, RightToLeft };
  Scan scan = Scan::LeftToRight;
  /// true: first child (in scan order) whose label is in `labels`;
  /// false: for each label in priority order, first child with that label.
  bool any_of = false;
  std::vector<std::string> labels;
};

/// Per-parent head identification rules, tried in file order.
///
/// Table format, one rule per line, '#' starts a comment:
///
///     PARENT DIRECTION LABEL...
///
/// DIRECTION is `left`/`right` (priority over labels, scanning from that end)
/// or `left-any`/`right-any` (first child from that end matching any label).
/// A parent may have several lines. When no line matches, the first child in
/// the direction of the parent's first line is the head. `*` gives the rule
/// for parents without an entry.
class HeadRuleSet {
 public:
  static HeadRuleSet parse(std::string_view text);
  static HeadRuleSet load(const std::string& path);
  /// Collins/Magerman table, with DET accepted alongside DT.
  static const HeadRuleSet& collins();
  static std::string_view collins_text();

  /// 1-based head index; always in [1, |children|] for non-empty children.
  int find_head(const std::string& parent, std::span<const std::string> child_labels) const;

 private:
  std::map<std::string, std::vector<HeadRule>> rules_;
  std::vector<HeadRule> fallback_;
};

/// Which non-head children count as complements.
///
/// Table format:
///
///     parents S VP SBAR
///     children NP SBAR S
///     exclude-tags ADV VOC BNF DIR EXT LOC MNR TMP CLR PRP
class ComplementRules {
 public:
  static ComplementRules parse(std::string_view text);
  static ComplementRules load(const std::string& path);
  static const ComplementRules& standard();
  static std::string_view standard_text();

  bool is_complement(const std::string& parent, const ParseTree& child) const;

 private:
  std::set<std::string> parents_;
  std::set<std::string> children_;
  std::set<std::string> excluded_tags_;
};

/// Sets head_child on every non-leaf node. TOP always heads on its first child.
ParseTree mark_heads(const ParseTree& tree, const HeadRuleSet& rules = HeadRuleSet::collins());

/// Attaches a pre-head of the given order to every phrasal node except TOP.
ParseTree enrich_preheads(const ParseTree& tree, int order);

/// Flags complement children and fills sc_left/sc_right. Requires heads.
ParseTree mark_complements(const ParseTree& tree,
                           const ComplementRules& rules = ComplementRules::standard());

/// Recomputes sc_left/sc_right from the children's complement flags.
void compute_subcat_frames(ParseTree& tree);

/// CAP+UNKNOWN+SUFF signature of a word.
std::string unknown_signature(std::string_view word);

/// Replaces every word seen fewer than `threshold` times by its signature.
std::vector<ParseTree> rename_unknown_words(const std::vector<ParseTree>& treebank,
                                            std::uint64_t threshold);

class TagLexicon {
 public:
  void add(const std::string& word, const std::string& pos, std::uint64_t count = 1);

  bool contains(const std::string& word) const { return words_.count(word) != 0; }
  /// Tags of the word, or of its signature when the word itself is unseen.
  std::map<std::string, std::uint64_t> lookup(const std::string& word) const;
  /// The word itself if known, else its signature.
  std::string normalize(const std::string& word) const;

  const std::map<std::string, std::map<std::string, std::uint64_t>>& entries() const {
    return words_;
  }
  std::size_t size() const { return words_.size(); }

  /// `word TAB pos:count[,pos:count]*`, one line per word, sorted.
  std::string to_text() const;
  static TagLexicon from_text(std::string_view text);

  bool operator==(const TagLexicon&) const = default;

 private:
  std::map<std::string, std::map<std::string, std::uint64_t>> words_;
};

TagLexicon build_tag_lexicon(const std::vector<ParseTree>& treebank);

}  // namespace tgram
