#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tgram/grammar.hpp"
#include "tgram/model.hpp"
#include "tgram/tree.hpp"

namespace tgram {

// ---------------------------------------------------------------------------
// Single derivation steps over readable node states.

/// The derivation-relevant view of one node of a partial parse tree.
struct NodeState {
  std::string label;     // enriched
  std::string head_wsj;  // WSJ label of the head child
  bool left_complete = false;
  bool right_complete = false;
  std::vector<std::string> frame_left;
  std::vector<std::string> frame_right;
  std::vector<std::string> children;  // WSJ labels, left to right
  int head = 0;                       // index of the head child in `children`
  double log_prob = 0.0;

  Completeness completeness() const;
};

enum class StepError { None, LabelMismatch, WrongRole, SideComplete, ZeroProbability, FrameUnderflow, FrameNotEmpty };

std::string_view to_string(StepError e);

struct StepOutcome {
  std::optional<NodeState> state;
  StepError error = StepError::None;
  History history;  // as looked up (projected)
  double log_prob = 0.0;
};

/// State of an inner fragment node, before any dependent is attached.
NodeState state_of_fragment(const FragNode& node);

/// Expands a nonterminal leaf `label` whose parent has WSJ label `parent`
/// with a head T-gram.
StepOutcome apply_head(const std::string& label, const std::string& parent, const TGram& t,
                       const CountTable& table);

/// Attaches a left or right dependent T-gram to a node.
StepOutcome apply_dep(const NodeState& state, const TGram& t, const CountTable& table, bool markov);

// ---------------------------------------------------------------------------
// Sentence parsing.

class UntaggableWord : public std::runtime_error {
 public:
  UntaggableWord(std::size_t position, const std::string& word);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// POS tags per position; unknown words are looked up through their
/// signature. Throws UntaggableWord.
std::vector<std::set<std::string>> tag_lattice(const std::vector<std::string>& sentence, const TagLexicon& lexicon);

struct ParserConfig {
  bool two_pass = true;
  int beam_width = 0;         // 0: off
  double beam_margin = 0.0;   // 0: off; otherwise keep items within margin of the best in a cell
  bool fallback_right_branch = false;
  std::size_t max_items = 20'000'000;
};

/// One rewrite step of a derivation.
struct DerivationStep {
  std::string node;  // address of the rewritten node in the output tree ("." is TOP)
  Role role = Role::Head;
  std::string tgram;
  History history;
  double log_prob = 0.0;

  bool operator==(const DerivationStep&) const = default;
};

struct Derivation {
  std::vector<DerivationStep> steps;
  double log_prob = 0.0;
};

struct ParseResult {
  bool ok = false;
  ParseTree tree;       // stripped output tree, or failed_parse()
  ParseTree decorated;  // with heads, complements and pre-heads
  double log_prob = 0.0;
  Derivation derivation;
  std::string failure;  // reason when !ok
  bool fallback = false;
  std::size_t items = 0;
  /// (span start, end, WSJ label) of constituents reachable in pass 1.
  std::set<std::tuple<int, int, std::string>> pass1_cells;
  bool pruned = false;  // whether pass 2 was restricted to pass-1 cells
};

/// A compiled model ready for parsing. Immutable; safe to share.
class Parser {
 public:
  Parser(const Model& model, ParserConfig config = {});

  ParseResult parse(const std::vector<std::string>& sentence) const;

  const Grammar& grammar() const { return full_; }
  const Grammar& pass1_grammar() const { return pass1_; }
  const Model& model() const { return model_; }

 private:
  const Model& model_;
  ParserConfig config_;
  Grammar full_;
  Grammar pass1_;
};

/// Most Probable Derivation parse of one sentence.
ParseResult parse_mpd(const std::vector<std::string>& sentence, const Model& model, const ParserConfig& config = {});

/// Right-branching tree used by --fallback-rightbranch.
ParseTree right_branching_tree(const std::vector<std::string>& sentence, const std::vector<std::string>& tags);

}  // namespace tgram
