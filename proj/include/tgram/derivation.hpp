#pragma once

#include <stdexcept>
#include <vector>

#include "tgram/model.hpp"
#include "tgram/parser.hpp"

namespace tgram {

class DerivationGuard : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Every T-gram decomposition of a decorated tree (heads, complements and
/// pre-heads marked, TOP root) with a non-zero probability under `table`.
///
/// Steps are listed in the parser's order: nodes in preorder, and per node
/// the head step, then left dependents inside-out, then right dependents
/// inside-out. Throws DerivationGuard above `max_words` words.
std::vector<Derivation> enumerate_derivations(const ParseTree& tree, const CountTable& table, bool markov,
                                              std::size_t max_words = 12);

/// log of the sum of the derivation probabilities (the tree probability).
double tree_log_prob(const std::vector<Derivation>& derivations);

}  // namespace tgram
