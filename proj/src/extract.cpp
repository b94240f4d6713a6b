#include "tgram/extract.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace tgram {

namespace {

bool within(int value, int limit) { return limit < 0 || value <= limit; }

// A fragment for a child slot, with the sizes that matter for the limits.
struct Candidate {
  FragPtr frag;  // null: open nonterminal leaf
  int depth = 0;
  int words = 0;
  int open = 1;
  int branching = 0;
};

using Emit = std::function<void(Role, int lo, int hi, const FragPtr&)>;

class Extractor {
 public:
  explicit Extractor(const ExtractionConfig& cfg) : cfg_(cfg) {}

  // Head-role fragments rooted at `node` that satisfy every limit.
  const std::vector<Candidate>& head_set(const ParseTree& node) {
    if (auto it = memo_.find(&node); it != memo_.end()) return it->second;
    std::vector<Candidate> out;
    if (node.is_pos()) {
      auto frag = make_window(node, Role::Head, 0, 0, {});
      if (within(1, cfg_.max_depth) && within(1, cfg_.max_words) && within(1, cfg_.max_branching))
        out.push_back({frag, 1, 1, 0, 1});
    } else {
      windows(node, [&](Role role, int, int, const FragPtr& f) {
        if (role != Role::Head) return;
        out.push_back({f, fragment_depth(*f, cfg_.depth_mode), word_count(*f), fragment_open_budget(*f),
                       max_branching(*f)});
      }, /*heads_only=*/true);
    }
    return memo_.emplace(&node, std::move(out)).first->second;
  }

  // Every fragment of every role rooted at `node`.
  void all(const ParseTree& node, const Emit& emit) {
    if (node.is_pos()) {
      for (const auto& c : head_set(node)) emit(Role::Head, 0, 0, c.frag);
      return;
    }
    windows(node, emit, false);
  }

 private:
  void windows(const ParseTree& node, const Emit& emit, bool heads_only) {
    const int n = static_cast<int>(node.children.size());
    const int h = node.head_child - 1;
    if (h < 0 || h >= n) throw std::invalid_argument("node without a head child: " + node.label);
    for (int lo = 0; lo <= h; ++lo)
      for (int hi = h; hi < n; ++hi) window(node, Role::Head, lo, hi, emit);
    if (heads_only) return;
    for (int hi = 0; hi < h; ++hi)
      for (int lo = 0; lo <= hi; ++lo) window(node, Role::Left, lo, hi, emit);
    for (int lo = h + 1; lo < n; ++lo)
      for (int hi = lo; hi < n; ++hi) window(node, Role::Right, lo, hi, emit);
  }

  void window(const ParseTree& node, Role role, int lo, int hi, const Emit& emit) {
    const int n = static_cast<int>(node.children.size());
    const int size = hi - lo + 1;
    if (!within(size, cfg_.max_branching)) return;
    int root_open = 0;
    if (role == Role::Head) {
      root_open = (lo > 0 ? 1 : 0) + (hi < n - 1 ? 1 : 0);
    } else if (role == Role::Left) {
      root_open = 1 + (lo > 0 ? 1 : 0);
    } else {
      root_open = 1 + (hi < n - 1 ? 1 : 0);
    }
    if (!within(root_open, cfg_.max_open)) return;

    const int h = node.head_child - 1;
    std::vector<const std::vector<Candidate>*> options;
    for (int i = lo; i <= hi; ++i) options.push_back(&head_set(node.children[static_cast<std::size_t>(i)]));
    std::vector<FragPtr> chosen(static_cast<std::size_t>(size));

    auto edges = [&](int i) {
      if (cfg_.depth_mode == DepthMode::Flat) return 1;
      if (role == Role::Head) return 1 + std::abs(i - h);
      if (role == Role::Left) return 1 + (hi - i + 1);
      return 1 + (i - lo + 1);
    };

    std::function<void(int, int, int, int)> rec = [&](int k, int depth, int words, int open) {
      if (k == size) {
        emit(role, lo, hi, make_window(node, role, lo, hi, chosen));
        return;
      }
      const int i = lo + k;
      // Open leaf.
      if (within(std::max(depth, edges(i)), cfg_.max_depth) && within(open + 1, cfg_.max_open)) {
        chosen[static_cast<std::size_t>(k)] = nullptr;
        rec(k + 1, std::max(depth, edges(i)), words, open + 1);
      }
      for (const auto& c : *options[static_cast<std::size_t>(k)]) {
        const int d = std::max(depth, edges(i) + c.depth);
        if (!within(d, cfg_.max_depth) || !within(words + c.words, cfg_.max_words) ||
            !within(open + c.open, cfg_.max_open))
          continue;
        chosen[static_cast<std::size_t>(k)] = c.frag;
        rec(k + 1, d, words + c.words, open + c.open);
      }
    };
    rec(0, 0, 0, root_open);
  }

  ExtractionConfig cfg_;
  std::unordered_map<const ParseTree*, std::vector<Candidate>> memo_;
};

std::vector<std::string> complements_in(const ParseTree& node, int lo, int hi) {
  std::vector<std::string> out;
  for (int i = lo; i <= hi; ++i) {
    const auto& c = node.children[static_cast<std::size_t>(i)];
    if (c.complement) out.push_back(c.label);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void sort_unique(std::vector<TGram>& v) {
  std::vector<std::pair<std::string, TGram>> keyed;
  for (auto& t : v) keyed.emplace_back(t.text(), std::move(t));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  v.clear();
  for (auto& [k, t] : keyed) v.push_back(std::move(t));
}

}  // namespace

ExtractionConfig ExtractionConfig::unlimited() {
  ExtractionConfig cfg;
  cfg.max_depth = cfg.max_branching = cfg.max_open = cfg.max_words = kUnlimited;
  cfg.min_frequency = 1;
  return cfg;
}

NodeExtraction extract_node(const ParseTree& tree, const NodeAddress& address, const ExtractionConfig& cfg) {
  const ParseTree& node = node_at(tree, address);
  if (node.children.empty()) throw std::invalid_argument("extract_node on a leaf");
  Extractor ex(cfg);
  NodeExtraction out;
  ex.all(node, [&](Role role, int, int, const FragPtr& f) {
    TGram t{role, f};
    switch (role) {
      case Role::Head: out.head.push_back(std::move(t)); break;
      case Role::Left: out.left.push_back(std::move(t)); break;
      case Role::Right: out.right.push_back(std::move(t)); break;
    }
  });
  sort_unique(out.head);
  sort_unique(out.left);
  sort_unique(out.right);
  return out;
}

void extract_tree(const ParseTree& tree, const ExtractionConfig& cfg, EventCounts& out) {
  Extractor ex(cfg);
  std::function<void(const ParseTree&, const std::string&)> walk = [&](const ParseTree& node,
                                                                        const std::string& parent) {
    if (node.children.empty() || node.is_word()) return;
    const std::string label = node.model_label();
    const int h = node.head_child - 1;
    const int n = static_cast<int>(node.children.size());
    ex.all(node, [&](Role role, int lo, int hi, const FragPtr& f) {
      Event ev;
      ev.tgram = TGram{role, f}.text();
      if (role == Role::Head) {
        ev.history = head_history(label, parent);
      } else if (role == Role::Left) {
        ev.history = dep_history(Role::Left, label, node.head().label, complements_in(node, 0, hi),
                                 hi == h - 1, node.children[static_cast<std::size_t>(hi + 1)].label);
      } else {
        ev.history = dep_history(Role::Right, label, node.head().label, complements_in(node, lo, n - 1),
                                 lo == h + 1, node.children[static_cast<std::size_t>(lo - 1)].label);
      }
      ++out[ev];
    });
    if (node.is_pos()) return;
    for (const auto& c : node.children) walk(c, node.label);
  };
  walk(tree, "");
}

void apply_min_frequency(EventCounts& events, std::uint64_t min_frequency) {
  if (min_frequency <= 1) return;
  std::map<std::string, std::uint64_t> totals;
  for (const auto& [ev, count] : events) totals[ev.tgram] += count;
  std::erase_if(events, [&](const auto& entry) { return totals[entry.first.tgram] < min_frequency; });
}

EventCounts extract_treebank(const std::vector<ParseTree>& treebank, const ExtractionConfig& cfg) {
  EventCounts events;
  for (const auto& tree : treebank) extract_tree(tree, cfg, events);
  apply_min_frequency(events, cfg.min_frequency);
  return events;
}

}  // namespace tgram
