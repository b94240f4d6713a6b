#include "tgram/parser.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_set>

namespace tgram {

// ---------------------------------------------------------------------------
// Readable single steps

Completeness NodeState::completeness() const {
  if (left_complete && right_complete) return Completeness::Complete;
  if (left_complete) return Completeness::LeftComplete;
  if (right_complete) return Completeness::RightComplete;
  return Completeness::Open;
}

std::string_view to_string(StepError e) {
  switch (e) {
    case StepError::None: return "ok";
    case StepError::LabelMismatch: return "label mismatch";
    case StepError::WrongRole: return "wrong role";
    case StepError::SideComplete: return "side already complete";
    case StepError::ZeroProbability: return "zero probability";
    case StepError::FrameUnderflow: return "complement not in subcat frame";
    case StepError::FrameNotEmpty: return "side closed with a non-empty subcat frame";
  }
  return "?";
}

NodeState state_of_fragment(const FragNode& node) {
  if (node.kind != FragNode::Kind::Inner || node.head < 0)
    throw std::invalid_argument("node state needs an inner node with a head child");
  NodeState s;
  s.label = node.label;
  s.left_complete = node.left_complete;
  s.right_complete = node.right_complete;
  s.frame_left = node.frame_left;
  s.frame_right = node.frame_right;
  s.head = node.head;
  for (const auto& c : node.children) s.children.push_back(c->kind == FragNode::Kind::Word ? c->label : c->wsj);
  s.head_wsj = s.children[static_cast<std::size_t>(s.head)];
  return s;
}

StepOutcome apply_head(const std::string& label, const std::string& parent, const TGram& t,
                       const CountTable& table) {
  StepOutcome out;
  out.history = head_history(label, parent);
  if (t.role != Role::Head) {
    out.error = StepError::WrongRole;
    return out;
  }
  if (t.root->label != label) {
    out.error = StepError::LabelMismatch;
    return out;
  }
  out.log_prob = table.log_prob(out.history, t.text());
  if (std::isinf(out.log_prob)) {
    out.error = StepError::ZeroProbability;
    return out;
  }
  out.state = state_of_fragment(*t.root);
  out.state->log_prob = out.log_prob;
  return out;
}

StepOutcome apply_dep(const NodeState& state, const TGram& t, const CountTable& table, bool markov) {
  StepOutcome out;
  if (t.role == Role::Head) {
    out.error = StepError::WrongRole;
    return out;
  }
  const bool left = t.role == Role::Left;
  const auto& frame = left ? state.frame_left : state.frame_right;
  const bool adjacent = left ? state.head == 0 : state.head + 1 == static_cast<int>(state.children.size());
  const std::string& sibling = left ? state.children.front() : state.children.back();
  out.history = project(dep_history(t.role, state.label, state.head_wsj, frame, adjacent, sibling), markov);
  if (t.root->label != state.label) {
    out.error = StepError::LabelMismatch;
    return out;
  }
  if (left ? state.left_complete : state.right_complete) {
    out.error = StepError::SideComplete;
    return out;
  }
  std::vector<std::string> comps;
  for (const auto& c : t.root->children)
    if (c->complement) comps.push_back(c->wsj);
  std::sort(comps.begin(), comps.end());
  if (!std::includes(frame.begin(), frame.end(), comps.begin(), comps.end())) {
    out.error = StepError::FrameUnderflow;
    return out;
  }
  std::vector<std::string> rest;
  std::set_difference(frame.begin(), frame.end(), comps.begin(), comps.end(), std::back_inserter(rest));
  const bool closes = left ? t.root->left_complete : t.root->right_complete;
  if (closes && !rest.empty()) {
    out.error = StepError::FrameNotEmpty;
    return out;
  }
  out.log_prob = table.log_prob(out.history, t.text());
  if (std::isinf(out.log_prob)) {
    out.error = StepError::ZeroProbability;
    return out;
  }
  NodeState s = state;
  std::vector<std::string> added;
  for (const auto& c : t.root->children) added.push_back(c->wsj);
  if (left) {
    s.children.insert(s.children.begin(), added.begin(), added.end());
    s.head += static_cast<int>(added.size());
    s.frame_left = rest;
    s.left_complete = closes;
  } else {
    s.children.insert(s.children.end(), added.begin(), added.end());
    s.frame_right = rest;
    s.right_complete = closes;
  }
  s.log_prob += out.log_prob;
  out.state = std::move(s);
  return out;
}

// ---------------------------------------------------------------------------
// Tagging

UntaggableWord::UntaggableWord(std::size_t position, const std::string& word)
    : std::runtime_error("untaggable word '" + word + "' at position " + std::to_string(position)),
      position_(position) {}

std::vector<std::set<std::string>> tag_lattice(const std::vector<std::string>& sentence, const TagLexicon& lexicon) {
  std::vector<std::set<std::string>> out;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    std::set<std::string> tags;
    for (const auto& [pos, count] : lexicon.lookup(sentence[i])) tags.insert(pos);
    if (tags.empty()) throw UntaggableWord(i, sentence[i]);
    out.push_back(std::move(tags));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Chart

namespace {

enum class Kind : std::uint8_t { Prefix, State, Done, Site };
enum class How : std::uint8_t { Word, Start, Extend, Initial, LeftExt, RightExt, Close, Head };

struct Item {
  Kind kind = Kind::Prefix;
  int start = 0;
  int end = 0;
  int a = -1;  // Prefix: seq. State/Done: cnode. Site: label.
  int b = -1;  // Prefix: dot. Site: parent.
  int fl = 0;
  int fr = 0;
  bool lc = false;
  bool rc = false;
  bool lm_head = false;
  bool rm_head = false;
  int lm = -1;
  int rm = -1;

  double score = 0.0;
  int steps = 0;
  How how = How::Word;
  int left = -1;
  int right = -1;
  int rule = -1;
  double step = 0.0;
  bool closed = false;
};

using Key = std::array<int, 8>;

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::size_t h = 1469598103934665603ull;
    for (int v : k) h = (h ^ static_cast<std::size_t>(v + 7)) * 1099511628211ull;
    return h;
  }
};

Key key_of(const Item& it) {
  return {static_cast<int>(it.kind), it.a, it.b, it.fl, it.fr,
          (it.lc ? 1 : 0) | (it.rc ? 2 : 0) | (it.lm_head ? 4 : 0) | (it.rm_head ? 8 : 0), it.lm, it.rm};
}

bool better(double s1, int n1, double s2, int n2) { return s1 > s2 || (s1 == s2 && n1 < n2); }

struct Cell {
  std::unordered_map<Key, int, KeyHash> index;
  std::vector<int> prefixes;                                          // incomplete
  std::unordered_map<int, std::vector<std::pair<int, int>>> dep_left;   // label -> (rule, window item)
  std::unordered_map<int, std::vector<std::pair<int, int>>> dep_right;
  std::unordered_map<int, std::vector<int>> left_open;                // label -> states open on the left
  std::vector<int> right_open;                                        // left-complete, right-open states
  std::unordered_map<int, int> done;                                  // cnode -> item
  std::map<std::pair<int, int>, int> sites;                           // (label, parent) -> item
};

class ChartLimit : public std::runtime_error {
 public:
  ChartLimit() : std::runtime_error("chart item limit exceeded") {}
};

class Chart {
 public:
  // `allowed`: per cell, WSJ label symbols a constituent may carry (null: no restriction).
  Chart(const Grammar& g, std::vector<int> words, const ParserConfig& cfg, bool scored,
        const std::vector<std::unordered_set<int>>* allowed)
      : g_(g), words_(std::move(words)), cfg_(cfg), scored_(scored), markov_(scored && g.markov()),
        allowed_(allowed), n_(static_cast<int>(words_.size())),
        cells_(static_cast<std::size_t>((n_ + 1) * (n_ + 1))) {}

  void run() {
    for (int len = 1; len <= n_; ++len)
      for (int s = 0; s + len <= n_; ++s) fill(s, s + len);
  }

  int goal() const {
    if (n_ == 0) return -1;
    const auto& c = cell(0, n_);
    auto it = c.sites.find({g_.top_symbol(), g_.empty_symbol()});
    return it == c.sites.end() ? -1 : it->second;
  }

  const std::vector<Item>& items() const { return items_; }
  const Grammar& grammar() const { return g_; }

 private:
  Cell& cell(int s, int e) { return cells_[static_cast<std::size_t>(s * (n_ + 1) + e)]; }
  const Cell& cell(int s, int e) const { return cells_[static_cast<std::size_t>(s * (n_ + 1) + e)]; }

  bool permitted(int s, int e, int wsj) const {
    if (!allowed_) return true;
    const auto& set = (*allowed_)[static_cast<std::size_t>(s * (n_ + 1) + e)];
    return set.count(wsj) != 0;
  }

  struct AgendaEntry {
    double score;
    int steps;
    int id;
    bool operator<(const AgendaEntry& o) const {
      if (score != o.score) return score < o.score;
      if (steps != o.steps) return steps > o.steps;
      return id > o.id;
    }
  };

  void add(Cell& c, Item it) {
    const Key k = key_of(it);
    auto found = c.index.find(k);
    if (found != c.index.end()) {
      Item& old = items_[static_cast<std::size_t>(found->second)];
      if (old.closed || !better(it.score, it.steps, old.score, old.steps)) return;
      old = it;
      agenda_.push({it.score, it.steps, found->second});
      return;
    }
    if (items_.size() >= cfg_.max_items) throw ChartLimit();
    const int id = static_cast<int>(items_.size());
    items_.push_back(it);
    c.index.emplace(k, id);
    agenda_.push({it.score, it.steps, id});
  }

  Item make(Kind kind, int s, int e) {
    Item it;
    it.kind = kind;
    it.start = s;
    it.end = e;
    return it;
  }

  void fill(int s, int e) {
    Cell& c = cell(s, e);
    if (e - s == 1) {
      const int w = words_[static_cast<std::size_t>(s)];
      if (w >= 0)
        for (int cn : g_.pos_nodes_of_word(w)) {
          Item it = make(Kind::Prefix, s, e);
          it.a = g_.cnodes()[static_cast<std::size_t>(cn)].seq;
          it.b = 1;
          it.how = How::Word;
          add(c, it);
        }
    }
    for (int m = s + 1; m < e; ++m) combine(c, cell(s, m), cell(m, e), s, e);

    while (!agenda_.empty()) {
      const AgendaEntry top = agenda_.top();
      agenda_.pop();
      Item& it = items_[static_cast<std::size_t>(top.id)];
      if (it.closed || it.score != top.score || it.steps != top.steps) continue;
      it.closed = true;
      finalize(c, top.id);
    }
    index_cell(c, s, e);
  }

  void combine(Cell& out, const Cell& l, const Cell& r, int s, int e) {
    const auto& seqs = g_.seqs();
    // Sequence extension.
    for (int pid : l.prefixes) {
      const Item& p = items_[static_cast<std::size_t>(pid)];
      const auto& seq = seqs[static_cast<std::size_t>(p.a)];
      const auto& slot = seq.slots[static_cast<std::size_t>(p.b)];
      int rid = -1;
      if (slot.kind == Grammar::Slot::Kind::Site) {
        auto it = r.sites.find({slot.ref, seq.parent_wsj});
        if (it != r.sites.end()) rid = it->second;
      } else if (slot.kind == Grammar::Slot::Kind::Node) {
        auto it = r.done.find(slot.ref);
        if (it != r.done.end()) rid = it->second;
      }
      if (rid < 0) continue;
      const Item& x = items_[static_cast<std::size_t>(rid)];
      Item it = make(Kind::Prefix, s, e);
      it.a = p.a;
      it.b = p.b + 1;
      it.score = p.score + x.score;
      it.steps = p.steps + x.steps;
      it.how = How::Extend;
      it.left = pid;
      it.right = rid;
      add(out, it);
    }
    // Left dependents: window over [s,m), node over [m,e).
    for (const auto& [label, windows] : l.dep_left) {
      auto st = r.left_open.find(label);
      if (st == r.left_open.end()) continue;
      for (const auto& [rule, wid] : windows)
        for (int sid : st->second) attach(out, rule, wid, sid, s, e);
    }
    // Right dependents: node over [s,m), window over [m,e).
    for (int sid : l.right_open) {
      const int label = g_.cnodes()[static_cast<std::size_t>(items_[static_cast<std::size_t>(sid)].a)].label;
      auto ws = r.dep_right.find(label);
      if (ws == r.dep_right.end()) continue;
      for (const auto& [rule, wid] : ws->second) attach(out, rule, wid, sid, s, e);
    }
  }

  void attach(Cell& out, int rule_id, int wid, int sid, int s, int e) {
    const auto& rule = g_.dep_rules()[static_cast<std::size_t>(rule_id)];
    const Item& w = items_[static_cast<std::size_t>(wid)];
    const Item& st = items_[static_cast<std::size_t>(sid)];
    const bool left = rule.side == Role::Left;
    const int frame = left ? st.fl : st.fr;
    double lp = 0.0;
    if (scored_) {
      Grammar::DepKey key{g_.head_wsj(st.a), frame, left ? st.lm_head : st.rm_head,
                          markov_ && frame == 0 ? (left ? st.lm : st.rm) : -1};
      auto it = rule.log_probs.find(key);
      if (it == rule.log_probs.end()) return;
      lp = it->second;
    }
    const int rest = g_.frame_minus(frame, rule.comps);
    if (rest < 0) return;
    if (rule.closes && rest != 0) return;
    const auto& wseq = g_.seqs()[static_cast<std::size_t>(rule.seq)];
    Item it = st;
    it.start = s;
    it.end = e;
    it.closed = false;
    it.score = st.score + w.score + lp;
    it.steps = st.steps + w.steps + 1;
    it.rule = rule_id;
    it.step = lp;
    if (left) {
      it.fl = rest;
      it.lc = rule.closes;
      it.lm_head = false;
      it.lm = markov_ ? wseq.slots.front().wsj : -1;
      it.how = How::LeftExt;
      it.left = wid;
      it.right = sid;
    } else {
      it.fr = rest;
      it.rc = rule.closes;
      it.rm_head = false;
      it.rm = markov_ ? wseq.slots.back().wsj : -1;
      it.how = How::RightExt;
      it.left = sid;
      it.right = wid;
    }
    add(out, it);
  }

  void finalize(Cell& c, int id) {
    const Item x = items_[static_cast<std::size_t>(id)];
    const auto& seqs = g_.seqs();
    const auto& cnodes = g_.cnodes();
    switch (x.kind) {
      case Kind::Prefix: {
        const auto& seq = seqs[static_cast<std::size_t>(x.a)];
        if (x.b != static_cast<int>(seq.slots.size())) return;
        for (int cn : g_.cnodes_of_seq(x.a)) {
          const auto& node = cnodes[static_cast<std::size_t>(cn)];
          Item it = make(Kind::State, x.start, x.end);
          it.a = cn;
          it.lc = node.left_complete;
          it.rc = node.right_complete;
          it.fl = node.frame_left;
          it.fr = node.frame_right;
          it.lm_head = node.head == 0;
          it.rm_head = node.head + 1 == static_cast<int>(seq.slots.size());
          if (markov_) {
            it.lm = seq.slots.front().wsj;
            it.rm = seq.slots.back().wsj;
          }
          it.score = x.score;
          it.steps = x.steps;
          it.how = How::Initial;
          it.left = id;
          add(c, it);
        }
        return;
      }
      case Kind::State: {
        if (!x.lc || !x.rc) return;
        if (x.fl != 0 || x.fr != 0) return;
        if (!permitted(x.start, x.end, cnodes[static_cast<std::size_t>(x.a)].wsj)) return;
        Item it = make(Kind::Done, x.start, x.end);
        it.a = x.a;
        it.score = x.score;
        it.steps = x.steps;
        it.how = How::Close;
        it.left = id;
        add(c, it);
        return;
      }
      case Kind::Done: {
        const auto& node = cnodes[static_cast<std::size_t>(x.a)];
        for (const auto& [parent, lp] : node.head_log_probs) {
          Item it = make(Kind::Site, x.start, x.end);
          it.a = node.label;
          it.b = parent;
          it.score = x.score + (scored_ ? lp : 0.0);
          it.steps = x.steps + 1;
          it.how = How::Head;
          it.left = id;
          it.step = scored_ ? lp : 0.0;
          add(c, it);
        }
        for (int seq : g_.seqs_starting_with_node(x.a)) start_seq(c, seq, id, x);
        return;
      }
      case Kind::Site:
        for (int seq : g_.seqs_starting_with_site(x.a, x.b)) start_seq(c, seq, id, x);
        return;
    }
  }

  void start_seq(Cell& c, int seq, int id, const Item& x) {
    Item it = make(Kind::Prefix, x.start, x.end);
    it.a = seq;
    it.b = 1;
    it.score = x.score;
    it.steps = x.steps;
    it.how = How::Start;
    it.right = id;
    add(c, it);
  }

  void index_cell(Cell& c, int s, int e) {
    std::vector<int> ids;
    ids.reserve(c.index.size());
    for (const auto& [k, id] : c.index)
      if (items_[static_cast<std::size_t>(id)].closed) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    if ((cfg_.beam_width > 0 || cfg_.beam_margin > 0) && !(s == 0 && e == n_)) {
      std::vector<int> order = ids;
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const Item& x = items_[static_cast<std::size_t>(a)];
        const Item& y = items_[static_cast<std::size_t>(b)];
        return better(x.score, x.steps, y.score, y.steps);
      });
      std::unordered_set<int> keep;
      const double best = order.empty() ? 0.0 : items_[static_cast<std::size_t>(order.front())].score;
      for (std::size_t i = 0; i < order.size(); ++i) {
        if (cfg_.beam_width > 0 && static_cast<int>(i) >= cfg_.beam_width) break;
        if (cfg_.beam_margin > 0 && items_[static_cast<std::size_t>(order[i])].score < best - cfg_.beam_margin) break;
        keep.insert(order[i]);
      }
      std::erase_if(ids, [&](int id) { return keep.count(id) == 0; });
    }
    const auto& seqs = g_.seqs();
    const auto& cnodes = g_.cnodes();
    for (int id : ids) {
      const Item& it = items_[static_cast<std::size_t>(id)];
      switch (it.kind) {
        case Kind::Prefix: {
          const auto& seq = seqs[static_cast<std::size_t>(it.a)];
          if (it.b < static_cast<int>(seq.slots.size())) {
            c.prefixes.push_back(id);
            break;
          }
          for (int r : g_.dep_rules_of_seq(it.a)) {
            const auto& rule = g_.dep_rules()[static_cast<std::size_t>(r)];
            (rule.side == Role::Left ? c.dep_left : c.dep_right)[rule.label].emplace_back(r, id);
          }
          break;
        }
        case Kind::State:
          if (!it.lc)
            c.left_open[cnodes[static_cast<std::size_t>(it.a)].label].push_back(id);
          else if (!it.rc)
            c.right_open.push_back(id);
          break;
        case Kind::Done: c.done.emplace(it.a, id); break;
        case Kind::Site: c.sites.emplace(std::make_pair(it.a, it.b), id); break;
      }
    }
  }

  const Grammar& g_;
  std::vector<int> words_;
  const ParserConfig& cfg_;
  bool scored_;
  bool markov_;
  const std::vector<std::unordered_set<int>>* allowed_;
  int n_;
  std::vector<Cell> cells_;
  std::vector<Item> items_;
  std::priority_queue<AgendaEntry> agenda_;
};

// ---------------------------------------------------------------------------
// Tree and derivation reconstruction

class Builder {
 public:
  Builder(const Grammar& g, const std::vector<Item>& items, const std::vector<std::string>& words)
      : g_(g), items_(items), words_(words) {}

  ParseTree build(int goal) {
    const Item& site = items_[static_cast<std::size_t>(goal)];
    ParseTree root = node(site.left, {}, &site);
    return root;
  }

  std::vector<DerivationStep> steps;

 private:
  struct ChildRef {
    int item = -1;  // Site or Done item; -1 for a word
    int position = -1;
    bool complement = false;
  };

  const Item& at(int id) const { return items_[static_cast<std::size_t>(id)]; }

  void prefix_children(int id, std::vector<ChildRef>& out) {
    const Item& p = at(id);
    const auto& seq = g_.seqs()[static_cast<std::size_t>(p.a)];
    if (p.how == How::Word) {
      out.push_back({-1, p.start, false});
      return;
    }
    if (p.how == How::Extend) prefix_children(p.left, out);
    const auto& slot = seq.slots[static_cast<std::size_t>(p.b - 1)];
    out.push_back({p.right, -1, slot.complement});
  }

  std::vector<std::string> frame_names(int frame) const {
    std::vector<std::string> out;
    for (int s : g_.frame(frame)) out.push_back(g_.name(s));
    std::sort(out.begin(), out.end());
    return out;
  }

  // Children of the node and its dependent steps, inside-out per side.
  int collect(int sid, std::vector<ChildRef>& kids, std::vector<DerivationStep>& own) {
    const Item& st = at(sid);
    const auto& cn = g_.cnodes()[static_cast<std::size_t>(st.a)];
    switch (st.how) {
      case How::Initial:
        prefix_children(st.left, kids);
        return cn.head;
      case How::LeftExt: {
        const Item& inner = at(st.right);
        const int head = collect(st.right, kids, own);
        std::vector<ChildRef> window;
        prefix_children(st.left, window);
        kids.insert(kids.begin(), window.begin(), window.end());
        own.push_back(dep_step(Role::Left, inner, st));
        return head + static_cast<int>(window.size());
      }
      case How::RightExt: {
        const Item& inner = at(st.left);
        const int head = collect(st.left, kids, own);
        std::vector<ChildRef> window;
        prefix_children(st.right, window);
        kids.insert(kids.end(), window.begin(), window.end());
        own.push_back(dep_step(Role::Right, inner, st));
        return head;
      }
      default: throw std::logic_error("unexpected state backpointer");
    }
  }

  DerivationStep dep_step(Role side, const Item& inner, const Item& result) {
    const auto& cn = g_.cnodes()[static_cast<std::size_t>(inner.a)];
    const bool left = side == Role::Left;
    const int sib = left ? inner.lm : inner.rm;
    DerivationStep d;
    d.role = side;
    d.tgram = g_.dep_rules()[static_cast<std::size_t>(result.rule)].text;
    d.history = project(dep_history(side, g_.name(cn.label), g_.name(g_.head_wsj(inner.a)),
                                    frame_names(left ? inner.fl : inner.fr), left ? inner.lm_head : inner.rm_head,
                                    sib < 0 ? std::string() : g_.name(sib)),
                        g_.markov());
    d.log_prob = result.step;
    return d;
  }

  ParseTree node(int done_id, const NodeAddress& addr, const Item* site) {
    const Item& done = at(done_id);
    const auto& cn = g_.cnodes()[static_cast<std::size_t>(done.a)];
    std::vector<ChildRef> kids;
    std::vector<DerivationStep> own;
    const int head = collect(done.left, kids, own);
    const std::string where = to_string(addr);
    if (site) {
      DerivationStep h;
      h.node = where;
      h.role = Role::Head;
      h.tgram = cn.head_text;
      h.history = head_history(g_.name(cn.label), g_.name(site->b));
      h.log_prob = site->step;
      steps.push_back(h);
    }
    for (auto& d : own) {
      d.node = where;
      steps.push_back(std::move(d));
    }
    ParseTree t;
    set_model_label(t, g_.name(cn.label));
    t.head_child = head + 1;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const auto& k = kids[i];
      if (k.item < 0) {
        ParseTree leaf;
        leaf.word = words_[static_cast<std::size_t>(k.position)];
        t.children.push_back(std::move(leaf));
        continue;
      }
      NodeAddress child_addr = addr;
      child_addr.push_back(i);
      const Item& x = at(k.item);
      ParseTree child = x.kind == Kind::Site ? node(x.left, child_addr, &x) : node(k.item, child_addr, nullptr);
      child.complement = k.complement;
      t.children.push_back(std::move(child));
    }
    return t;
  }

  const Grammar& g_;
  const std::vector<Item>& items_;
  const std::vector<std::string>& words_;
};

bool flat_depth_one(const TGram& t) { return tgram_depth(t, DepthMode::Flat) <= 1; }

std::vector<int> word_symbols(const Grammar& g, const std::vector<std::string>& sentence, const TagLexicon& lex) {
  std::vector<int> out;
  for (const auto& w : sentence) out.push_back(g.symbol(lex.normalize(w)));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

Parser::Parser(const Model& model, ParserConfig config)
    : model_(model),
      config_(config),
      full_(Grammar::compile(model.table, model.settings.markov)),
      pass1_(config.two_pass ? Grammar::compile(model.table, model.settings.markov, flat_depth_one) : Grammar()) {}

ParseResult Parser::parse(const std::vector<std::string>& sentence) const {
  ParseResult r;
  r.tree = failed_parse();
  r.decorated = failed_parse();
  if (sentence.empty()) {
    r.failure = "empty sentence";
    return r;
  }
  std::vector<std::set<std::string>> lattice;
  try {
    lattice = tag_lattice(sentence, model_.lexicon);
  } catch (const UntaggableWord& e) {
    r.failure = e.what();
    return r;
  }
  const int n = static_cast<int>(sentence.size());

  try {
    std::vector<std::unordered_set<int>> allowed;
    bool use_allowed = false;
    if (config_.two_pass) {
      Chart pass1(pass1_, word_symbols(pass1_, sentence, model_.lexicon), config_, false, nullptr);
      pass1.run();
      if (pass1.goal() >= 0) {
        allowed.resize(static_cast<std::size_t>((n + 1) * (n + 1)));
        for (const auto& it : pass1.items()) {
          if (!it.closed) continue;
          int wsj = -1;
          if (it.kind == Kind::Done)
            wsj = pass1_.cnodes()[static_cast<std::size_t>(it.a)].wsj;
          else if (it.kind == Kind::Site)
            wsj = pass1_.symbol(wsj_label(pass1_.name(it.a)));
          else
            continue;
          const std::string& name = pass1_.name(wsj);
          r.pass1_cells.emplace(it.start, it.end, name);
          const int sym = full_.symbol(name);
          if (sym >= 0) allowed[static_cast<std::size_t>(it.start * (n + 1) + it.end)].insert(sym);
        }
        use_allowed = true;
      }
    }
    r.pruned = use_allowed;
    Chart pass2(full_, word_symbols(full_, sentence, model_.lexicon), config_, true,
                use_allowed ? &allowed : nullptr);
    pass2.run();
    r.items = pass2.items().size();
    const int goal = pass2.goal();
    if (goal >= 0) {
      Builder b(full_, pass2.items(), sentence);
      r.decorated = b.build(goal);
      compute_spans(r.decorated);
      r.tree = strip_decorations(r.decorated);
      r.log_prob = pass2.items()[static_cast<std::size_t>(goal)].score;
      r.derivation.steps = std::move(b.steps);
      r.derivation.log_prob = r.log_prob;
      r.ok = true;
      return r;
    }
    r.failure = "no derivation covers the sentence";
  } catch (const ChartLimit& e) {
    r.failure = e.what();
  }
  if (config_.fallback_right_branch) {
    std::vector<std::string> tags;
    for (const auto& w : sentence) {
      std::string best;
      std::uint64_t best_count = 0;
      for (const auto& [pos, count] : model_.lexicon.lookup(w))
        if (count > best_count) {
          best = pos;
          best_count = count;
        }
      tags.push_back(best);
    }
    r.tree = right_branching_tree(sentence, tags);
    r.fallback = true;
  }
  return r;
}

ParseResult parse_mpd(const std::vector<std::string>& sentence, const Model& model, const ParserConfig& config) {
  return Parser(model, config).parse(sentence);
}

ParseTree right_branching_tree(const std::vector<std::string>& sentence, const std::vector<std::string>& tags) {
  if (sentence.empty()) return failed_parse();
  ParseTree inner;
  for (std::size_t i = sentence.size(); i-- > 0;) {
    ParseTree pos;
    pos.label = tags[i];
    ParseTree leaf;
    leaf.word = sentence[i];
    pos.children.push_back(std::move(leaf));
    ParseTree s;
    s.label = "S";
    s.children.push_back(std::move(pos));
    if (i + 1 < sentence.size()) s.children.push_back(std::move(inner));
    inner = std::move(s);
  }
  ParseTree top;
  top.label = kTopLabel;
  top.children.push_back(std::move(inner));
  compute_spans(top);
  return top;
}

}  // namespace tgram
