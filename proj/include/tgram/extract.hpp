#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "tgram/fragment.hpp"
#include "tgram/history.hpp"
#include "tgram/tree.hpp"

namespace tgram {

/// Size constraints on extracted T-grams. Negative limits mean unlimited.
struct ExtractionConfig {
  static constexpr int kUnlimited = -1;

  int max_depth = kUnlimited;      // d
  int max_branching = kUnlimited;  // b
  int max_open = 4;                // n
  int max_words = 3;               // w
  std::uint64_t min_frequency = 1; // f
  DepthMode depth_mode = DepthMode::Flat;

  static ExtractionConfig unlimited();
  bool operator==(const ExtractionConfig&) const = default;
};

/// The three role sets of one node, each sorted by text and duplicate-free.
struct NodeExtraction {
  std::vector<TGram> head;
  std::vector<TGram> left;
  std::vector<TGram> right;
};

/// Requires a head-marked, complement-marked (and optionally pre-head
/// enriched) tree. Throws std::invalid_argument on a leaf address.
NodeExtraction extract_node(const ParseTree& tree, const NodeAddress& node, const ExtractionConfig& cfg);

/// One training event: a T-gram in its role with the history observed at
/// the source node. The history keeps the adjacent sibling; the model
/// decides whether to condition on it.
struct Event {
  History history;
  std::string tgram;

  auto operator<=>(const Event&) const = default;
};

using EventCounts = std::map<Event, std::uint64_t>;

/// All events of all non-leaf nodes, with occurrence counts. T-grams whose
/// total count is below cfg.min_frequency are dropped afterwards.
EventCounts extract_treebank(const std::vector<ParseTree>& treebank, const ExtractionConfig& cfg);

/// Events of a single tree, without frequency thresholding.
void extract_tree(const ParseTree& tree, const ExtractionConfig& cfg, EventCounts& out);

void apply_min_frequency(EventCounts& events, std::uint64_t min_frequency);

}  // namespace tgram
