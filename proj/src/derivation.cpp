#include "tgram/derivation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

namespace tgram {

namespace {

struct Step {
  NodeAddress addr;
  int order = 0;  // 0 head; 1 + k: k-th left dependent; 1000 + k: k-th right dependent
  DerivationStep step;
};

struct Partial {
  std::vector<Step> steps;
  double log_prob = 0.0;
};

struct Fragment {
  FragPtr frag;  // null: the child is left open
  Partial partial;
};

Partial join(const Partial& a, const Partial& b) {
  Partial out = a;
  out.steps.insert(out.steps.end(), b.steps.begin(), b.steps.end());
  out.log_prob += b.log_prob;
  return out;
}

std::vector<Partial> product(const std::vector<Partial>& a, const std::vector<Partial>& b) {
  std::vector<Partial> out;
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(join(x, y));
  return out;
}

std::vector<std::string> complements_between(const ParseTree& node, int lo, int hi) {
  std::vector<std::string> out;
  for (int i = lo; i <= hi; ++i)
    if (node.children[static_cast<std::size_t>(i)].complement) out.push_back(node.children[static_cast<std::size_t>(i)].label);
  std::sort(out.begin(), out.end());
  return out;
}

class Enumerator {
 public:
  Enumerator(const CountTable& table, bool markov) : table_(table), markov_(markov) {
    // Inner nodes that occur below the root of some stored T-gram. Anything
    // else can only lead to zero-probability steps.
    std::set<std::string> texts;
    for (const auto& [h, e] : table.entries())
      for (const auto& [t, c] : e.counts) texts.insert(t);
    std::function<void(const FragNode&)> walk = [&](const FragNode& f) {
      for (const auto& c : f.children)
        if (c->kind == FragNode::Kind::Inner && embedded_.insert(c->as_child()).second) walk(*c);
    };
    for (const auto& t : texts) walk(*parse_tgram(t).root);
  }

  // Expansions of `node` as a nonterminal leaf under a parent with WSJ label `parent`.
  std::vector<Partial> site(const ParseTree& node, const NodeAddress& addr, const std::string& parent) {
    if (auto it = sites_.find(addr); it != sites_.end()) return it->second;
    std::vector<Partial> out;
    const History h = head_history(node.model_label(), parent);
    heads(node, addr, [&](const FragPtr& frag, int lo, int hi, const Partial& inner) {
      const std::string text = TGram{Role::Head, frag}.text();
      const double lp = table_.log_prob(h, text);
      if (std::isinf(lp)) return;
      Partial p;
      p.steps.push_back({addr, 0, {to_string(addr), Role::Head, text, h, lp}});
      p.log_prob = lp;
      p = join(p, inner);
      for (auto& e : extensions(node, addr, lo, hi)) out.push_back(join(p, e));
    });
    sites_[addr] = out;
    return out;
  }

  // Ways to materialize `node` inside a parent fragment.
  std::vector<Fragment> fragments(const ParseTree& node, const NodeAddress& addr) {
    if (auto it = fragments_.find(addr); it != fragments_.end()) return it->second;
    std::vector<Fragment> out;
    heads(node, addr, [&](const FragPtr& frag, int lo, int hi, const Partial& inner) {
      if (!embedded_.count(frag->as_child())) return;
      for (auto& e : extensions(node, addr, lo, hi)) out.push_back({frag, join(inner, e)});
    });
    fragments_[addr] = out;
    return out;
  }

 private:
  using HeadFn = std::function<void(const FragPtr&, int, int, const Partial&)>;

  void heads(const ParseTree& node, const NodeAddress& addr, const HeadFn& fn) {
    if (node.is_pos()) {
      fn(make_window(node, Role::Head, 0, 0, {}), 0, 0, Partial{});
      return;
    }
    const int n = static_cast<int>(node.children.size());
    const int h = node.head_child - 1;
    for (int lo = 0; lo <= h; ++lo)
      for (int hi = h; hi < n; ++hi)
        windows(node, addr, Role::Head, lo, hi, [&](const FragPtr& f, const Partial& p) { fn(f, lo, hi, p); });
  }

  void windows(const ParseTree& node, const NodeAddress& addr, Role role, int lo, int hi,
               const std::function<void(const FragPtr&, const Partial&)>& fn) {
    std::vector<std::vector<Fragment>> options;
    for (int i = lo; i <= hi; ++i) {
      const auto& child = node.children[static_cast<std::size_t>(i)];
      NodeAddress ca = addr;
      ca.push_back(static_cast<std::size_t>(i));
      std::vector<Fragment> opts;
      for (auto& p : site(child, ca, node.label)) opts.push_back({nullptr, std::move(p)});
      for (auto& f : fragments(child, ca)) opts.push_back(std::move(f));
      if (opts.empty()) return;
      options.push_back(std::move(opts));
    }
    std::vector<FragPtr> chosen(options.size());
    std::function<void(std::size_t, const Partial&)> rec = [&](std::size_t k, const Partial& acc) {
      if (k == options.size()) {
        fn(make_window(node, role, lo, hi, chosen), acc);
        return;
      }
      for (const auto& o : options[k]) {
        chosen[k] = o.frag;
        rec(k + 1, join(acc, o.partial));
      }
    };
    rec(0, Partial{});
  }

  std::vector<Partial> extensions(const ParseTree& node, const NodeAddress& addr, int lo, int hi) {
    if (node.is_pos()) return {Partial{}};
    return product(lefts(node, addr, lo, 0), rights(node, addr, hi, 0));
  }

  // Left dependents covering children [0, lo), the next one being the k-th.
  std::vector<Partial> lefts(const ParseTree& node, const NodeAddress& addr, int lo, int k) {
    if (lo == 0) return {Partial{}};
    std::vector<Partial> out;
    const int h = node.head_child - 1;
    const int hi = lo - 1;
    const History hist = project(dep_history(Role::Left, node.model_label(), node.head().label,
                                             complements_between(node, 0, hi), hi == h - 1,
                                             node.children[static_cast<std::size_t>(lo)].label),
                                 markov_);
    for (int start = 0; start <= hi; ++start) {
      auto rest = lefts(node, addr, start, k + 1);
      if (rest.empty()) continue;
      windows(node, addr, Role::Left, start, hi, [&](const FragPtr& f, const Partial& inner) {
        const std::string text = TGram{Role::Left, f}.text();
        const double lp = table_.log_prob(hist, text);
        if (std::isinf(lp)) return;
        Partial p;
        p.steps.push_back({addr, 1 + k, {to_string(addr), Role::Left, text, hist, lp}});
        p.log_prob = lp;
        p = join(p, inner);
        for (const auto& r : rest) out.push_back(join(p, r));
      });
    }
    return out;
  }

  std::vector<Partial> rights(const ParseTree& node, const NodeAddress& addr, int hi, int k) {
    const int n = static_cast<int>(node.children.size());
    if (hi == n - 1) return {Partial{}};
    std::vector<Partial> out;
    const int h = node.head_child - 1;
    const int lo = hi + 1;
    const History hist = project(dep_history(Role::Right, node.model_label(), node.head().label,
                                             complements_between(node, lo, n - 1), lo == h + 1,
                                             node.children[static_cast<std::size_t>(hi)].label),
                                 markov_);
    for (int end = lo; end < n; ++end) {
      auto rest = rights(node, addr, end, k + 1);
      if (rest.empty()) continue;
      windows(node, addr, Role::Right, lo, end, [&](const FragPtr& f, const Partial& inner) {
        const std::string text = TGram{Role::Right, f}.text();
        const double lp = table_.log_prob(hist, text);
        if (std::isinf(lp)) return;
        Partial p;
        p.steps.push_back({addr, 1000 + k, {to_string(addr), Role::Right, text, hist, lp}});
        p.log_prob = lp;
        p = join(p, inner);
        for (const auto& r : rest) out.push_back(join(p, r));
      });
    }
    return out;
  }

  const CountTable& table_;
  bool markov_;
  std::set<std::string> embedded_;
  std::map<NodeAddress, std::vector<Partial>> sites_;
  std::map<NodeAddress, std::vector<Fragment>> fragments_;
};

}  // namespace

std::vector<Derivation> enumerate_derivations(const ParseTree& tree, const CountTable& table, bool markov,
                                              std::size_t max_words) {
  const std::size_t words = yield(tree).size();
  if (words > max_words)
    throw DerivationGuard("derivation enumeration is limited to " + std::to_string(max_words) + " words, tree has " +
                          std::to_string(words));
  if (is_failed_parse(tree)) return {};
  Enumerator e(table, markov);
  std::vector<Derivation> out;
  for (auto& p : e.site(tree, {}, "")) {
    std::stable_sort(p.steps.begin(), p.steps.end(), [](const Step& a, const Step& b) {
      if (a.addr != b.addr) return a.addr < b.addr;
      return a.order < b.order;
    });
    Derivation d;
    d.log_prob = p.log_prob;
    for (auto& s : p.steps) d.steps.push_back(std::move(s.step));
    out.push_back(std::move(d));
  }
  return out;
}

double tree_log_prob(const std::vector<Derivation>& derivations) {
  if (derivations.empty()) return -std::numeric_limits<double>::infinity();
  double best = derivations.front().log_prob;
  for (const auto& d : derivations) best = std::max(best, d.log_prob);
  double sum = 0.0;
  for (const auto& d : derivations) sum += std::exp(d.log_prob - best);
  return best + std::log(sum);
}

}  // namespace tgram
