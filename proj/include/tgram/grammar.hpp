#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tgram/fragment.hpp"
#include "tgram/model.hpp"

namespace tgram {

/// A CountTable compiled into integer form for chart parsing.
///
/// Every distinct inner fragment node becomes a CNode, every distinct child
/// sequence a Seq. A head T-gram's root CNode carries P_H per parent label;
/// a dependent T-gram becomes a DepRule whose Seq is its root window.
class Grammar {
 public:
  struct Slot {
    enum class Kind { Word, Site, Node };
    Kind kind = Kind::Site;
    int ref = -1;  // word symbol, label symbol (Site) or CNode id (Node)
    int wsj = -1;  // WSJ label symbol of the slot's constituent
    bool complement = false;
  };

  struct Seq {
    int parent_wsj = -1;  // WSJ label of the node owning the sequence
    std::vector<Slot> slots;
  };

  struct CNode {
    int label = -1;
    int wsj = -1;
    bool left_complete = false;
    bool right_complete = false;
    int head = 0;
    int frame_left = 0;  // frame ids
    int frame_right = 0;
    int seq = -1;
    std::string head_text;                     // "H: ..." when a head T-gram root
    std::vector<std::pair<int, double>> head_log_probs;  // parent symbol -> log P_H
  };

  struct DepKey {
    int head = -1;
    int frame = 0;
    bool adjacent = false;
    int sibling = -1;
    auto operator<=>(const DepKey&) const = default;
  };

  struct DepRule {
    Role side = Role::Left;
    int label = -1;
    bool closes = false;
    int seq = -1;
    int comps = 0;  // frame id of the complements in the window
    std::string text;
    std::map<DepKey, double> log_probs;
  };

  /// `keep` filters T-grams (by parsed form) before compilation.
  static Grammar compile(const CountTable& table, bool markov,
                         const std::function<bool(const TGram&)>& keep = {});

  int symbol(std::string_view s) const;  // -1 when unknown
  int intern(std::string_view s);
  const std::string& name(int sym) const { return names_[static_cast<std::size_t>(sym)]; }

  int frame_id(std::vector<int> labels);  // sorts
  const std::vector<int>& frame(int id) const { return frames_[static_cast<std::size_t>(id)]; }
  /// Multiset difference a - b, or -1 when b is not contained in a.
  int frame_minus(int a, int b) const;

  bool markov() const { return markov_; }
  int empty_symbol() const { return empty_sym_; }
  int top_symbol() const { return top_sym_; }

  const std::vector<CNode>& cnodes() const { return cnodes_; }
  const std::vector<Seq>& seqs() const { return seqs_; }
  const std::vector<DepRule>& dep_rules() const { return deps_; }

  const std::vector<int>& cnodes_of_seq(int seq) const { return at(cnodes_of_seq_, seq); }
  const std::vector<int>& dep_rules_of_seq(int seq) const { return at(deps_of_seq_, seq); }
  const std::vector<int>& seqs_starting_with_node(int cnode) const { return at(seqs_by_node_, cnode); }
  const std::vector<int>& seqs_starting_with_site(int label, int parent) const;
  /// POS CNodes whose only child is the given word symbol.
  const std::vector<int>& pos_nodes_of_word(int word) const;

  int head_wsj(int cnode) const;
  std::size_t size() const { return cnodes_.size() + deps_.size(); }

 private:
  static const std::vector<int>& at(const std::vector<std::vector<int>>& v, int i);
  int add_cnode(const FragNode& node);
  int add_seq(const FragNode& owner);
  Slot make_slot(const FragNode& child);

  bool markov_ = false;
  int empty_sym_ = -1;
  int top_sym_ = -1;
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> symbols_;
  std::vector<std::vector<int>> frames_;
  std::map<std::vector<int>, int> frame_ids_;
  mutable std::map<std::pair<int, int>, int> minus_memo_;

  std::vector<CNode> cnodes_;
  std::unordered_map<std::string, int> cnode_ids_;
  std::vector<Seq> seqs_;
  std::map<std::pair<int, std::vector<std::tuple<int, int, int, bool>>>, int> seq_ids_;
  std::vector<DepRule> deps_;
  std::unordered_map<std::string, int> dep_ids_;

  std::vector<std::vector<int>> cnodes_of_seq_;
  std::vector<std::vector<int>> deps_of_seq_;
  std::vector<std::vector<int>> seqs_by_node_;
  std::map<std::pair<int, int>, std::vector<int>> seqs_by_site_;
  std::unordered_map<int, std::vector<int>> pos_by_word_;
};

}  // namespace tgram
