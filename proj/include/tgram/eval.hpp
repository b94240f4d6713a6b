#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tgram/tree.hpp"

namespace tgram {

/// evalb-style options (COLLINS.prm defaults).
struct EvalOptions {
  /// POS tags whose words are deleted before spans are computed.
  std::set<std::string> punctuation{",", ":", "``", "''", "."};
  /// Treat ADVP and PRT as the same label.
  bool advp_equals_prt = true;
};

/// A labeled constituent over word positions with punctuation deleted.
struct Bracket {
  int start = 0;
  int end = 0;
  std::string label;
  auto operator<=>(const Bracket&) const = default;
};

/// Labeled brackets of a tree: TOP and POS nodes excluded, constituents left
/// without words after punctuation deletion dropped. `keep` filters nodes
/// (it sees the node as it stands in the full tree).
std::vector<Bracket> brackets(const ParseTree& tree, const EvalOptions& options = {},
                              const std::function<bool(const ParseTree&)>& keep = {});

struct SentenceScore {
  std::size_t id = 0;
  std::size_t length = 0;  // words, punctuation included
  std::uint64_t matched = 0;
  std::uint64_t gold = 0;
  std::uint64_t test = 0;
  std::uint64_t crossing = 0;
  bool failed = false;

  double recall() const { return gold ? static_cast<double>(matched) / static_cast<double>(gold) : 1.0; }
  double precision() const { return test ? static_cast<double>(matched) / static_cast<double>(test) : (gold ? 0.0 : 1.0); }
};

struct Scorecard {
  std::vector<SentenceScore> sentences;
  std::uint64_t matched = 0;
  std::uint64_t gold = 0;
  std::uint64_t test = 0;
  std::uint64_t crossing = 0;

  double recall() const;
  double precision() const;
  double f_score() const;
  /// Mean crossing brackets per sentence.
  double crossing_brackets() const;
  /// Percentage of sentences with no / at most two crossing brackets.
  double zero_cb() const;
  double two_cb() const;
};

class AlignmentError : public std::runtime_error {
 public:
  AlignmentError(std::size_t sentence, const std::string& what);
  std::size_t sentence() const { return sentence_; }

 private:
  std::size_t sentence_;
};

/// Per-sentence and corpus PARSEVAL scores. A failed parse "(())" matches
/// nothing and proposes nothing.
Scorecard score(const std::vector<ParseTree>& gold, const std::vector<ParseTree>& test, const EvalOptions& options = {});

double f_score(double precision, double recall);

/// Mean number of edges from `node` down to the words it dominates.
double node_height(const ParseTree& node);

struct HeightPoint {
  double threshold = 0.0;
  double f = 0.0;
};

/// F-score over constituents whose node height is at most each threshold,
/// filtering gold and test independently.
std::vector<HeightPoint> height_curve(const std::vector<ParseTree>& gold, const std::vector<ParseTree>& test,
                                      const std::vector<double>& thresholds, const EvalOptions& options = {});

/// `sentence_id,LR,LP,CB` rows (no header) plus a `total,LR,LP,meanCB` footer.
std::string scorecard_csv(const Scorecard& card);
/// `threshold,F` rows, one per threshold, no header.
std::string height_csv(const std::vector<HeightPoint>& curve);
/// Human-readable summary lines (percentages with one decimal).
std::string scorecard_summary(const Scorecard& card);

}  // namespace tgram
