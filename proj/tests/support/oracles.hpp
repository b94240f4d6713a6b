#pragma once

// Reference implementations used only by the tests. They favour the most
// literal reading of the definitions over speed.

#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "tgram/model.hpp"
#include "tgram/parser.hpp"
#include "tgram/tree.hpp"

namespace oracle {

std::string data_path(const std::string& name);
std::string read_file(const std::string& path);
std::vector<std::string> words(const std::string& sentence);
std::vector<tgram::ParseTree> read_treebank(const std::string& name);

// Random bracketed tree with at most `max_nodes` constituent and POS nodes.
std::string random_tree_text(std::mt19937& rng, int max_nodes);

// Role sets of one node as T-gram texts, by plain enumeration of every
// window and every open/expanded choice per child. No size limits.
struct RoleSets {
  std::set<std::string> head, left, right;
};
RoleSets brute_force_extract(const tgram::ParseTree& tree, const tgram::NodeAddress& node);

// All non-word node addresses of a tree, preorder.
std::vector<tgram::NodeAddress> node_addresses(const tgram::ParseTree& tree);

// Every complete derivation from TOP whose yield has at most `max_words`
// words, generated top-down with apply_head / apply_dep. Each result carries
// the decorated tree it builds.
struct Generated {
  std::vector<std::string> words;
  double log_prob = 0.0;
  tgram::ParseTree tree;
};

class DerivationGenerator {
 public:
  DerivationGenerator(const tgram::Model& model, int max_words);
  std::vector<Generated> run();

 private:
  struct Partial {
    std::vector<tgram::ParseTree> nodes;
    std::vector<std::string> words;
    double log_prob = 0.0;
  };

  std::vector<Generated> expand(const std::string& label, const std::string& parent, int budget, int depth);
  std::vector<Partial> fill(const tgram::FragNode& parent, int budget, int depth);
  std::vector<Generated> complete(const tgram::FragNode& node, const tgram::NodeState& state, int budget, int depth);
  void attach(const tgram::FragNode& node, const tgram::NodeState& state, bool left_side, Partial acc,
              int head_index, int budget, int depth, std::vector<Generated>& out);

  const tgram::Model& model_;
  int max_words_;
  std::vector<tgram::TGram> heads_, lefts_, rights_;
  std::map<std::tuple<std::string, std::string, int>, std::vector<Generated>> memo_;
};

}  // namespace oracle
