#include "tgram/model.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace tgram {

void CountTable::add(const History& history, const std::string& tgram, std::uint64_t count) {
  if (count == 0) return;
  auto& e = entries_[history];
  e.total += count;
  e.counts[tgram] += count;
}

std::uint64_t CountTable::count(const History& history, const std::string& tgram) const {
  auto it = entries_.find(history);
  if (it == entries_.end()) return 0;
  auto jt = it->second.counts.find(tgram);
  return jt == it->second.counts.end() ? 0 : jt->second;
}

std::uint64_t CountTable::total(const History& history) const {
  auto it = entries_.find(history);
  return it == entries_.end() ? 0 : it->second.total;
}

double CountTable::prob(const History& history, const std::string& tgram) const {
  auto it = entries_.find(history);
  if (it == entries_.end()) return 0.0;
  auto jt = it->second.counts.find(tgram);
  if (jt == it->second.counts.end()) return 0.0;
  return static_cast<double>(jt->second) / static_cast<double>(it->second.total);
}

double CountTable::log_prob(const History& history, const std::string& tgram) const {
  auto it = entries_.find(history);
  if (it == entries_.end()) return -std::numeric_limits<double>::infinity();
  auto jt = it->second.counts.find(tgram);
  if (jt == it->second.counts.end()) return -std::numeric_limits<double>::infinity();
  return std::log(static_cast<double>(jt->second)) - std::log(static_cast<double>(it->second.total));
}

CountTable observe_corpus(const EventCounts& events, bool markov) {
  CountTable table;
  for (const auto& [ev, count] : events) table.add(project(ev.history, markov), ev.tgram, count);
  return table;
}

bool adjacency_flag(Role role, bool head_is_outermost) {
  if (role == Role::Head) throw std::invalid_argument("adjacency is defined for dependents only");
  return head_is_outermost;
}

ParseTree prepare_tree(const ParseTree& raw, int prehead_order, const HeadRuleSet& heads,
                       const ComplementRules& complements) {
  ParseTree t = strip_empty_elements(raw);
  t = mark_heads(t, heads);
  t = mark_complements(t, complements);
  return enrich_preheads(t, prehead_order);
}

std::vector<ParseTree> prepare_treebank(const std::vector<ParseTree>& raw, const ModelSettings& settings,
                                        const HeadRuleSet& heads, const ComplementRules& complements) {
  std::vector<ParseTree> out;
  out.reserve(raw.size());
  for (const auto& t : raw) {
    if (is_failed_parse(t)) continue;
    out.push_back(prepare_tree(t, settings.prehead_order, heads, complements));
  }
  return rename_unknown_words(out, settings.unknown_threshold);
}

Model train_model(const std::vector<ParseTree>& prepared, const ModelSettings& settings) {
  Model m;
  m.settings = settings;
  m.table = observe_corpus(extract_treebank(prepared, settings.extraction), settings.markov);
  m.lexicon = build_tag_lexicon(prepared);
  return m;
}

// ---------------------------------------------------------------------------
// Binary container

namespace {

constexpr char kMagic[8] = {'T', 'G', 'R', 'A', 'M', 'M', 'D', 'L'};

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
  }
  void raw(const char* p, std::size_t n) { out_.append(p, n); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(in_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  std::string_view raw(std::size_t n) {
    need(n);
    auto s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw ModelError("truncated model at byte " + std::to_string(pos_));
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

void write_history(Writer& w, const History& h) {
  w.u8(static_cast<std::uint8_t>(role_code(h.role)));
  w.str(h.label);
  w.str(h.parent);
  w.str(h.head);
  w.u32(static_cast<std::uint32_t>(h.frame.size()));
  for (const auto& f : h.frame) w.str(f);
  w.u8(h.adjacent ? 1 : 0);
  w.str(h.sibling);
}

History read_history(Reader& r) {
  History h;
  try {
    h.role = role_from_code(static_cast<char>(r.u8()));
  } catch (const std::invalid_argument& e) {
    throw ModelError(std::string("corrupt history: ") + e.what());
  }
  h.label = r.str();
  h.parent = r.str();
  h.head = r.str();
  const std::uint32_t n = r.u32();
  for (std::uint32_t i = 0; i < n; ++i) h.frame.push_back(r.str());
  h.adjacent = r.u8() != 0;
  h.sibling = r.str();
  return h;
}

}  // namespace

std::string save_model(const Model& model) {
  Writer w;
  w.raw(kMagic, sizeof kMagic);
  w.u32(kModelVersion);

  const auto& s = model.settings;
  w.i64(s.extraction.max_depth);
  w.i64(s.extraction.max_branching);
  w.i64(s.extraction.max_open);
  w.i64(s.extraction.max_words);
  w.u64(s.extraction.min_frequency);
  w.u8(s.extraction.depth_mode == DepthMode::HeadOutward ? 1 : 0);
  w.u8(static_cast<std::uint8_t>(s.prehead_order));
  w.u8(s.markov ? 1 : 0);
  w.u64(s.unknown_threshold);

  w.u64(model.table.entries().size());
  for (const auto& [h, e] : model.table.entries()) {
    write_history(w, h);
    w.u64(e.counts.size());
    for (const auto& [t, c] : e.counts) {
      w.str(t);
      w.u64(c);
    }
  }

  w.u64(model.lexicon.entries().size());
  for (const auto& [word, tags] : model.lexicon.entries()) {
    w.str(word);
    w.u32(static_cast<std::uint32_t>(tags.size()));
    for (const auto& [pos, c] : tags) {
      w.str(pos);
      w.u64(c);
    }
  }
  return w.take();
}

Model load_model(std::string_view bytes) {
  Reader r(bytes);
  if (bytes.size() < sizeof kMagic || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
    throw ModelError("not a T-gram model file (bad magic)");
  r.raw(sizeof kMagic);
  const std::uint32_t version = r.u32();
  if (version != kModelVersion)
    throw ModelError("model version " + std::to_string(version) + " is not supported (expected " +
                     std::to_string(kModelVersion) + ")");

  Model m;
  auto& s = m.settings;
  s.extraction.max_depth = static_cast<int>(r.i64());
  s.extraction.max_branching = static_cast<int>(r.i64());
  s.extraction.max_open = static_cast<int>(r.i64());
  s.extraction.max_words = static_cast<int>(r.i64());
  s.extraction.min_frequency = r.u64();
  s.extraction.depth_mode = r.u8() ? DepthMode::HeadOutward : DepthMode::Flat;
  s.prehead_order = r.u8();
  s.markov = r.u8() != 0;
  s.unknown_threshold = r.u64();

  const std::uint64_t keys = r.u64();
  for (std::uint64_t k = 0; k < keys; ++k) {
    const History h = read_history(r);
    const std::uint64_t n = r.u64();
    for (std::uint64_t i = 0; i < n; ++i) {
      std::string t = r.str();
      const std::uint64_t c = r.u64();
      if (c == 0) throw ModelError("zero count in model");
      m.table.add(h, t, c);
    }
  }

  const std::uint64_t words = r.u64();
  for (std::uint64_t k = 0; k < words; ++k) {
    std::string word = r.str();
    const std::uint32_t n = r.u32();
    for (std::uint32_t i = 0; i < n; ++i) {
      std::string pos = r.str();
      m.lexicon.add(word, pos, r.u64());
    }
  }
  if (!r.done()) throw ModelError("trailing bytes after model");
  return m;
}

void write_model_file(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  const std::string bytes = save_model(model);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

Model read_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_model(ss.str());
}

std::string dump_table(const CountTable& table) {
  std::string out;
  for (const auto& [h, e] : table.entries())
    for (const auto& [t, c] : e.counts) {
      out += role_code(h.role);
      out += '\t';
      out += h.to_string();
      out += '\t';
      out += t;
      out += '\t';
      out += std::to_string(c);
      out += '\n';
    }
  return out;
}

}  // namespace tgram
