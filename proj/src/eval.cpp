#include "tgram/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace tgram {

namespace {

std::string eval_label(const std::string& label, const EvalOptions& options) {
  if (options.advp_equals_prt && label == "PRT") return "ADVP";
  return label;
}

// Returns the number of non-punctuation words under t.
int collect(const ParseTree& t, int start, const EvalOptions& options,
            const std::function<bool(const ParseTree&)>& keep, std::vector<Bracket>& out) {
  if (t.is_pos()) return options.punctuation.count(t.label) ? 0 : 1;
  if (t.is_word()) return 1;
  int width = 0;
  for (const auto& c : t.children) width += collect(c, start + width, options, keep, out);
  if (width > 0 && t.label != kTopLabel && (!keep || keep(t))) out.push_back({start, start + width, eval_label(t.label, options)});
  return width;
}

bool crosses(const Bracket& a, const Bracket& b) {
  return (a.start < b.start && b.start < a.end && a.end < b.end) ||
         (b.start < a.start && a.start < b.end && b.end < a.end);
}

std::uint64_t matched_count(std::vector<Bracket> gold, std::vector<Bracket> test) {
  std::sort(gold.begin(), gold.end());
  std::sort(test.begin(), test.end());
  std::vector<Bracket> common;
  std::set_intersection(gold.begin(), gold.end(), test.begin(), test.end(), std::back_inserter(common));
  return common.size();
}

}  // namespace

std::vector<Bracket> brackets(const ParseTree& tree, const EvalOptions& options,
                              const std::function<bool(const ParseTree&)>& keep) {
  std::vector<Bracket> out;
  if (is_failed_parse(tree)) return out;
  collect(tree, 0, options, keep, out);
  return out;
}

double f_score(double precision, double recall) {
  return precision + recall > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

double Scorecard::recall() const { return gold ? static_cast<double>(matched) / static_cast<double>(gold) : 0.0; }
double Scorecard::precision() const { return test ? static_cast<double>(matched) / static_cast<double>(test) : 0.0; }
double Scorecard::f_score() const { return tgram::f_score(precision(), recall()); }

double Scorecard::crossing_brackets() const {
  return sentences.empty() ? 0.0 : static_cast<double>(crossing) / static_cast<double>(sentences.size());
}

double Scorecard::zero_cb() const {
  if (sentences.empty()) return 0.0;
  const auto n = std::count_if(sentences.begin(), sentences.end(), [](const auto& s) { return s.crossing == 0; });
  return 100.0 * static_cast<double>(n) / static_cast<double>(sentences.size());
}

double Scorecard::two_cb() const {
  if (sentences.empty()) return 0.0;
  const auto n = std::count_if(sentences.begin(), sentences.end(), [](const auto& s) { return s.crossing <= 2; });
  return 100.0 * static_cast<double>(n) / static_cast<double>(sentences.size());
}

AlignmentError::AlignmentError(std::size_t sentence, const std::string& what)
    : std::runtime_error("sentence " + std::to_string(sentence + 1) + ": " + what), sentence_(sentence) {}

Scorecard score(const std::vector<ParseTree>& gold, const std::vector<ParseTree>& test, const EvalOptions& options) {
  if (gold.size() != test.size())
    throw AlignmentError(std::min(gold.size(), test.size()), "gold has " + std::to_string(gold.size()) +
                                                                   " trees, test has " + std::to_string(test.size()));
  Scorecard card;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const ParseTree g = strip_empty_elements(gold[i]);
    SentenceScore s;
    s.id = i + 1;
    s.length = yield(g).size();
    const auto gb = brackets(g, options);
    s.gold = gb.size();
    if (is_failed_parse(test[i])) {
      s.failed = true;
    } else {
      const ParseTree t = strip_empty_elements(test[i]);
      if (yield(t) != yield(g)) throw AlignmentError(i, "test yield differs from gold yield");
      const auto tb = brackets(t, options);
      s.test = tb.size();
      s.matched = matched_count(gb, tb);
      for (const auto& b : tb)
        if (std::any_of(gb.begin(), gb.end(), [&](const Bracket& x) { return crosses(b, x); })) ++s.crossing;
    }
    card.matched += s.matched;
    card.gold += s.gold;
    card.test += s.test;
    card.crossing += s.crossing;
    card.sentences.push_back(s);
  }
  return card;
}

double node_height(const ParseTree& node) {
  if (node.is_leaf()) throw std::invalid_argument("node height of a leaf");
  double total = 0.0;
  int words = 0;
  std::function<void(const ParseTree&, int)> walk = [&](const ParseTree& t, int depth) {
    if (t.is_leaf()) {
      total += depth;
      ++words;
      return;
    }
    for (const auto& c : t.children) walk(c, depth + 1);
  };
  walk(node, 0);
  return total / words;
}

std::vector<HeightPoint> height_curve(const std::vector<ParseTree>& gold, const std::vector<ParseTree>& test,
                                      const std::vector<double>& thresholds, const EvalOptions& options) {
  if (thresholds.empty()) throw std::invalid_argument("height curve needs at least one threshold");
  if (gold.size() != test.size()) throw AlignmentError(0, "gold and test differ in length");
  std::vector<HeightPoint> out;
  for (double h : thresholds) {
    auto keep = [h](const ParseTree& t) { return node_height(t) <= h; };
    std::uint64_t matched = 0, ng = 0, nt = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      const ParseTree g = strip_empty_elements(gold[i]);
      const auto gb = brackets(g, options, keep);
      ng += gb.size();
      if (is_failed_parse(test[i])) continue;
      const ParseTree t = strip_empty_elements(test[i]);
      if (yield(t) != yield(g)) throw AlignmentError(i, "test yield differs from gold yield");
      const auto tb = brackets(t, options, keep);
      nt += tb.size();
      matched += matched_count(gb, tb);
    }
    const double r = ng ? static_cast<double>(matched) / static_cast<double>(ng) : 0.0;
    const double p = nt ? static_cast<double>(matched) / static_cast<double>(nt) : 0.0;
    out.push_back({h, f_score(p, r)});
  }
  return out;
}

std::string scorecard_csv(const Scorecard& card) {
  std::string out;
  char buf[128];
  for (const auto& s : card.sentences) {
    std::snprintf(buf, sizeof buf, "%zu,%.4f,%.4f,%llu\n", s.id, 100.0 * s.recall(), 100.0 * s.precision(),
                  static_cast<unsigned long long>(s.crossing));
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "total,%.4f,%.4f,%.4f\n", 100.0 * card.recall(), 100.0 * card.precision(),
                card.crossing_brackets());
  out += buf;
  return out;
}

std::string height_csv(const std::vector<HeightPoint>& curve) {
  std::string out;
  char buf[96];
  for (const auto& p : curve) {
    if (std::isinf(p.threshold))
      std::snprintf(buf, sizeof buf, "inf,%.6f\n", p.f);
    else
      std::snprintf(buf, sizeof buf, "%g,%.6f\n", p.threshold, p.f);
    out += buf;
  }
  return out;
}

std::string scorecard_summary(const Scorecard& card) {
  std::size_t failed = 0;
  for (const auto& s : card.sentences) failed += s.failed ? 1 : 0;
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "sentences=%zu failed=%zu\nLR=%.1f LP=%.1f F=%.1f\nCB=%.2f 0CB=%.1f 2CB=%.1f\n"
                "matched=%llu gold=%llu test=%llu\n",
                card.sentences.size(), failed, 100.0 * card.recall(), 100.0 * card.precision(),
                100.0 * card.f_score(), card.crossing_brackets(), card.zero_cb(), card.two_cb(),
                static_cast<unsigned long long>(card.matched), static_cast<unsigned long long>(card.gold),
                static_cast<unsigned long long>(card.test));
  return buf;
}

}  // namespace tgram
