#include "tgram/grammar.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace tgram {

const std::vector<int>& Grammar::at(const std::vector<std::vector<int>>& v, int i) {
  static const std::vector<int> kNone;
  if (i < 0 || static_cast<std::size_t>(i) >= v.size()) return kNone;
  return v[static_cast<std::size_t>(i)];
}

int Grammar::symbol(std::string_view s) const {
  auto it = symbols_.find(std::string(s));
  return it == symbols_.end() ? -1 : it->second;
}

int Grammar::intern(std::string_view s) {
  auto [it, inserted] = symbols_.emplace(std::string(s), static_cast<int>(names_.size()));
  if (inserted) names_.emplace_back(s);
  return it->second;
}

int Grammar::frame_id(std::vector<int> labels) {
  std::sort(labels.begin(), labels.end());
  auto [it, inserted] = frame_ids_.emplace(labels, static_cast<int>(frames_.size()));
  if (inserted) frames_.push_back(std::move(labels));
  return it->second;
}

int Grammar::frame_minus(int a, int b) const {
  if (b == 0) return a;
  auto key = std::make_pair(a, b);
  if (auto it = minus_memo_.find(key); it != minus_memo_.end()) return it->second;
  const auto& fa = frame(a);
  const auto& fb = frame(b);
  std::vector<int> rest;
  int result = -1;
  if (std::includes(fa.begin(), fa.end(), fb.begin(), fb.end())) {
    std::set_difference(fa.begin(), fa.end(), fb.begin(), fb.end(), std::back_inserter(rest));
    auto it = frame_ids_.find(rest);
    // Every sub-multiset of a stored frame is registered at compile time.
    result = it == frame_ids_.end() ? -2 : it->second;
  }
  minus_memo_.emplace(key, result);
  return result;
}

const std::vector<int>& Grammar::seqs_starting_with_site(int label, int parent) const {
  static const std::vector<int> kNone;
  auto it = seqs_by_site_.find({label, parent});
  return it == seqs_by_site_.end() ? kNone : it->second;
}

const std::vector<int>& Grammar::pos_nodes_of_word(int word) const {
  static const std::vector<int> kNone;
  auto it = pos_by_word_.find(word);
  return it == pos_by_word_.end() ? kNone : it->second;
}

int Grammar::head_wsj(int cnode) const {
  const auto& c = cnodes_[static_cast<std::size_t>(cnode)];
  return seqs_[static_cast<std::size_t>(c.seq)].slots[static_cast<std::size_t>(c.head)].wsj;
}

Grammar::Slot Grammar::make_slot(const FragNode& child) {
  Slot s;
  s.complement = child.complement;
  switch (child.kind) {
    case FragNode::Kind::Word:
      s.kind = Slot::Kind::Word;
      s.ref = intern(child.label);
      break;
    case FragNode::Kind::Open:
      s.kind = Slot::Kind::Site;
      s.ref = intern(child.label);
      s.wsj = intern(child.wsj);
      break;
    case FragNode::Kind::Inner:
      s.kind = Slot::Kind::Node;
      s.ref = add_cnode(child);
      s.wsj = intern(child.wsj);
      break;
  }
  return s;
}

int Grammar::add_seq(const FragNode& owner) {
  Seq seq;
  seq.parent_wsj = intern(owner.wsj);
  for (const auto& c : owner.children) seq.slots.push_back(make_slot(*c));
  std::vector<std::tuple<int, int, int, bool>> key;
  for (const auto& s : seq.slots) key.emplace_back(static_cast<int>(s.kind), s.ref, s.wsj, s.complement);
  auto [it, inserted] = seq_ids_.emplace(std::make_pair(seq.parent_wsj, key), static_cast<int>(seqs_.size()));
  if (!inserted) return it->second;
  const int id = it->second;
  const Slot first = seq.slots.front();
  seqs_.push_back(std::move(seq));
  cnodes_of_seq_.emplace_back();
  deps_of_seq_.emplace_back();
  if (first.kind == Slot::Kind::Node) {
    if (seqs_by_node_.size() <= static_cast<std::size_t>(first.ref)) seqs_by_node_.resize(first.ref + 1);
    seqs_by_node_[static_cast<std::size_t>(first.ref)].push_back(id);
  } else if (first.kind == Slot::Kind::Site) {
    seqs_by_site_[{first.ref, seqs_.back().parent_wsj}].push_back(id);
  }
  return id;
}

int Grammar::add_cnode(const FragNode& node) {
  const std::string key = node.token() + node.tail();
  if (auto it = cnode_ids_.find(key); it != cnode_ids_.end()) return it->second;
  CNode c;
  c.label = intern(node.label);
  c.wsj = intern(node.wsj);
  c.left_complete = node.left_complete;
  c.right_complete = node.right_complete;
  c.head = node.head;
  std::vector<int> fl, fr;
  for (const auto& l : node.frame_left) fl.push_back(intern(l));
  for (const auto& r : node.frame_right) fr.push_back(intern(r));
  // Register every sub-multiset reachable by removing complements.
  for (auto* f : {&fl, &fr}) {
    std::sort(f->begin(), f->end());
    const std::size_t n = f->size();
    if (n > 16) throw std::runtime_error("subcat frame too large");
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<int> sub;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) sub.push_back((*f)[i]);
      frame_id(sub);
    }
  }
  c.frame_left = frame_id(fl);
  c.frame_right = frame_id(fr);
  c.seq = add_seq(node);
  const int id = static_cast<int>(cnodes_.size());
  cnodes_.push_back(std::move(c));
  cnode_ids_.emplace(key, id);
  cnodes_of_seq_[static_cast<std::size_t>(cnodes_.back().seq)].push_back(id);
  const auto& seq = seqs_[static_cast<std::size_t>(cnodes_.back().seq)];
  if (seq.slots.size() == 1 && seq.slots[0].kind == Slot::Kind::Word) pos_by_word_[seq.slots[0].ref].push_back(id);
  return id;
}

Grammar Grammar::compile(const CountTable& table, bool markov, const std::function<bool(const TGram&)>& keep) {
  Grammar g;
  g.markov_ = markov;
  g.frame_id({});
  g.empty_sym_ = g.intern("");
  g.top_sym_ = g.intern(kTopLabel);
  std::unordered_map<std::string, std::optional<TGram>> parsed;

  for (const auto& [history, entry] : table.entries()) {
    const double log_total = std::log(static_cast<double>(entry.total));
    for (const auto& [text, count] : entry.counts) {
      auto it = parsed.find(text);
      if (it == parsed.end()) {
        TGram t = parse_tgram(text);
        it = parsed.emplace(text, keep && !keep(t) ? std::nullopt : std::optional<TGram>(std::move(t))).first;
      }
      if (!it->second) continue;
      const TGram& t = *it->second;
      const double lp = std::log(static_cast<double>(count)) - log_total;
      if (t.role == Role::Head) {
        const int id = g.add_cnode(*t.root);
        auto& c = g.cnodes_[static_cast<std::size_t>(id)];
        c.head_text = text;
        c.head_log_probs.emplace_back(g.intern(history.parent), lp);
        continue;
      }
      auto dit = g.dep_ids_.find(text);
      if (dit == g.dep_ids_.end()) {
        DepRule r;
        r.side = t.role;
        r.label = g.intern(t.root->label);
        r.closes = t.role == Role::Left ? t.root->left_complete : t.root->right_complete;
        r.seq = g.add_seq(*t.root);
        std::vector<int> comps;
        for (const auto& c : t.root->children)
          if (c->complement) comps.push_back(g.intern(c->wsj));
        r.comps = g.frame_id(comps);
        r.text = text;
        dit = g.dep_ids_.emplace(text, static_cast<int>(g.deps_.size())).first;
        g.deps_of_seq_[static_cast<std::size_t>(r.seq)].push_back(dit->second);
        g.deps_.push_back(std::move(r));
      }
      std::vector<int> frame;
      for (const auto& f : history.frame) frame.push_back(g.intern(f));
      DepKey key{g.intern(history.head), g.frame_id(frame), history.adjacent,
                 history.sibling.empty() ? -1 : g.intern(history.sibling)};
      g.deps_[static_cast<std::size_t>(dit->second)].log_probs[key] = lp;
    }
  }
  return g;
}

}  // namespace tgram
