#include <doctest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "tgram/derivation.hpp"
#include "tgram/eval.hpp"
#include "tgram/parser.hpp"

using namespace tgram;

namespace {

Model train_on(const std::vector<ParseTree>& raw, ModelSettings s = {}) {
  return train_model(prepare_treebank(raw, s), s);
}

ModelSettings unlimited() {
  ModelSettings s;
  s.extraction = ExtractionConfig::unlimited();
  return s;
}

std::string plain(const ParseTree& t) { return to_bracketed(t, {false, false}); }

}  // namespace

TEST_CASE("tag lattice") {
  const Model m = train_on(oracle::read_treebank("figure2.mrg"));
  const auto lattice = tag_lattice(oracle::words("a deal was sealed"), m.lexicon);
  CHECK(lattice == std::vector<std::set<std::string>>{{"DET"}, {"NN"}, {"VBD"}, {"VBN"}});
  CHECK(tag_lattice({}, m.lexicon).empty());
  try {
    tag_lattice(oracle::words("a Zorp"), m.lexicon);
    FAIL("no error");
  } catch (const UntaggableWord& e) {
    CHECK(e.position() == 1);
  }
  TagLexicon lex;
  lex.add("1+UNKNOWN+p", "NNP");
  CHECK(tag_lattice({"Zorp"}, lex) == std::vector<std::set<std::string>>{{"NNP"}});
}

TEST_CASE("apply_head") {
  const Model m = train_on(oracle::read_treebank("figure2.mrg"), unlimited());
  const TGram e = parse_tgram("H: S]{L:NP} *([VP] *([VBD] was) ([VP] *([VBN] sealed)))");
  const StepOutcome s = apply_head("S", "TOP", e, m.table);
  REQUIRE(s.state);
  CHECK(s.state->completeness() == Completeness::RightComplete);
  CHECK(s.state->frame_left == std::vector<std::string>{"NP"});
  CHECK(s.state->frame_right.empty());
  CHECK(s.log_prob < 0.0);

  const StepOutcome pos = apply_head("VBN", "VP", parse_tgram("H: [VBN] sealed"), m.table);
  REQUIRE(pos.state);
  CHECK(pos.state->completeness() == Completeness::Complete);
  CHECK(pos.log_prob == 0.0);

  CHECK(apply_head("S", "VP", e, m.table).error == StepError::ZeroProbability);
  CHECK(apply_head("NP", "TOP", e, m.table).error == StepError::LabelMismatch);
  CHECK(apply_head("S", "TOP", parse_tgram("L: [S (NP)"), m.table).error == StepError::WrongRole);
}

TEST_CASE("apply_dep") {
  const Model m = train_on(oracle::read_treebank("figure4.mrg"), unlimited());
  const TGram top = parse_tgram("H: [TOP] *(S]{L:NP} *([VP] *([VBD] was) ([VP] *([VBN] sealed))))");
  const NodeState s = state_of_fragment(*top.root->children[0]);
  const StepOutcome step = apply_dep(s, parse_tgram("L: [S (NP-C)"), m.table, false);
  REQUIRE(step.state);
  CHECK(step.state->frame_left.empty());
  CHECK(step.state->completeness() == Completeness::Complete);
  CHECK(step.state->children == std::vector<std::string>{"NP", "VP"});
  CHECK(step.state->head == 1);
  CHECK(step.history.adjacent);

  CHECK(apply_dep(*step.state, parse_tgram("L: [S (NP-C)"), m.table, false).error == StepError::SideComplete);
  CHECK(apply_dep(s, parse_tgram("L: [S (NP-C) (NP-C)"), m.table, false).error == StepError::FrameUnderflow);
  CHECK(apply_dep(s, parse_tgram("L: [S (ADVP)"), m.table, false).error == StepError::FrameNotEmpty);
  CHECK(apply_dep(s, parse_tgram("H: [S (NP-C) *(VP)"), m.table, false).error == StepError::WrongRole);
}

TEST_CASE("a non-complement dependent leaves the frame alone") {
  const Model m = train_on({parse_tree("(S (NP-SBJ (NNS we)) (ADVP (RB now)) (VP (VBP go)))")}, unlimited());
  NodeState s;
  s.label = "S";
  s.head_wsj = "VP";
  s.children = {"VP"};
  s.right_complete = true;
  s.frame_left = {"NP"};
  const StepOutcome advp = apply_dep(s, parse_tgram("L: S (ADVP)"), m.table, false);
  REQUIRE(advp.state);
  CHECK(advp.state->frame_left == std::vector<std::string>{"NP"});
  CHECK(advp.state->children == std::vector<std::string>{"ADVP", "VP"});
  CHECK(advp.history.adjacent);
  CHECK(apply_dep(s, parse_tgram("L: [S (ADVP)"), m.table, false).error == StepError::FrameNotEmpty);

  const StepOutcome subj = apply_dep(*advp.state, parse_tgram("L: [S (NP-C)"), m.table, false);
  REQUIRE(subj.state);
  CHECK(subj.state->frame_left.empty());
  CHECK_FALSE(subj.history.adjacent);
  CHECK(subj.state->completeness() == Completeness::Complete);
}

TEST_CASE("memorization of the sample tree") {
  const auto bank = oracle::read_treebank("figure2.mrg");
  for (int d : {1, 2, 5, -1}) {
    ModelSettings s = unlimited();
    s.extraction.max_depth = d;
    const Model m = train_on(bank, s);
    const ParseResult r = parse_mpd(yield(bank[0]), m);
    REQUIRE(r.ok);
    CHECK(plain(r.tree) == "(TOP (S (NP (JJ last) (NN week)) (NP (DET a) (NN deal)) (VP (VBD was) (VP (VBN sealed)))))");
    CHECK(r.log_prob <= 0.0);
    // The parser's derivation is one of the enumerated ones.
    bool found = false;
    for (const auto& der : enumerate_derivations(r.decorated, m.table, s.markov)) {
      if (der.steps == r.derivation.steps) {
        found = true;
        CHECK(der.log_prob == doctest::Approx(r.log_prob).epsilon(1e-12));
      }
      CHECK(der.log_prob <= r.log_prob + 1e-12);
    }
    CHECK(found);
  }
}

TEST_CASE("one-word sentence") {
  const Model m = train_on({parse_tree("(NP (NN deal))")});
  const ParseResult r = parse_mpd({"deal"}, m);
  REQUIRE(r.ok);
  CHECK(plain(r.tree) == "(TOP (NP (NN deal)))");
  // Three head T-grams of growing depth compete under TOP; the rest is forced.
  CHECK(r.log_prob == doctest::Approx(-std::log(3.0)));
}

TEST_CASE("failures") {
  const Model m = train_on(oracle::read_treebank("figure2.mrg"));
  const ParseResult untaggable = parse_mpd(oracle::words("a Zorp was sealed"), m);
  CHECK_FALSE(untaggable.ok);
  CHECK(is_failed_parse(untaggable.tree));
  CHECK(to_bracketed(untaggable.tree) == "(())");
  CHECK_FALSE(parse_mpd(oracle::words("sealed was deal a"), m).ok);
  CHECK_FALSE(parse_mpd({}, m).ok);

  ParserConfig fallback;
  fallback.fallback_right_branch = true;
  const ParseResult r = parse_mpd(oracle::words("sealed was deal a"), m, fallback);
  CHECK_FALSE(r.ok);
  CHECK(r.fallback);
  CHECK(yield(r.tree) == oracle::words("sealed was deal a"));
}

TEST_CASE("derivation enumeration") {
  ModelSettings s;
  s.extraction.max_depth = 1;
  const auto bank = oracle::read_treebank("figure4.mrg");
  const Model m = train_on(bank, s);
  const ParseTree tree = prepare_treebank(bank, s).at(0);
  const auto ders = enumerate_derivations(tree, m.table, false);
  REQUIRE_FALSE(ders.empty());
  double best = -INFINITY, total = 0.0;
  for (const auto& d : ders) {
    double sum = 0.0;
    for (const auto& st : d.steps) sum += st.log_prob;
    CHECK(sum == doctest::Approx(d.log_prob).epsilon(1e-12));
    CHECK(d.steps.front().node == ".");
    best = std::max(best, d.log_prob);
    total += std::exp(d.log_prob);
  }
  CHECK(tree_log_prob(ders) == doctest::Approx(std::log(total)));
  CHECK(tree_log_prob(ders) >= best);

  const ParseTree big = parse_tree("(S (NP (NN a) (NN b) (NN c) (NN d) (NN e) (NN f) (NN g)) (VP (VB h) (VB i) (VB j) (VB k) (VB l) (VB m)))");
  CHECK_THROWS_AS(enumerate_derivations(big, m.table, false), DerivationGuard);
}

TEST_CASE("a three-step derivation probability is the product of its three steps") {
  const auto bank = oracle::read_treebank("figure4.mrg");
  const Model m = train_on(bank, unlimited());
  const ParseTree tree = prepare_treebank(bank, unlimited()).at(0);
  const std::vector<std::string> want{"H: [TOP] *(S]{L:NP} *([VP] *([VBD] was) ([VP] *([VBN] sealed))))",
                                      "L: [S (NP-C)", "H: [NP] ([DET] a) *([NN] deal)"};
  int hits = 0;
  for (const auto& d : enumerate_derivations(tree, m.table, false)) {
    if (d.steps.size() != 3) continue;
    if (d.steps[0].tgram != want[0] || d.steps[1].tgram != want[1] || d.steps[2].tgram != want[2]) continue;
    ++hits;
    const double p = m.table.prob(head_history("TOP", ""), want[0]) *
                     m.table.prob(dep_history(Role::Left, "S", "VP", {"NP"}, true, ""), want[1]) *
                     m.table.prob(head_history("NP", "S"), want[2]);
    CHECK(std::abs(d.log_prob - std::log(p)) < 1e-12);
    CHECK(d.steps[1].node == "0");
    CHECK(d.steps[2].node == "0.0");
  }
  CHECK(hits == 1);
}

TEST_CASE("parser invariants on the toy corpus") {
  const auto bank = oracle::read_treebank("toy20.mrg");
  const Model m = train_on(bank);
  const Parser two(m);
  ParserConfig single_cfg;
  single_cfg.two_pass = false;
  const Parser single(m, single_cfg);
  std::mt19937 rng(31);
  for (const auto& g : bank) {
    const auto words = yield(g);
    const ParseResult r = two.parse(words);
    REQUIRE(r.ok);
    CHECK(yield(r.tree) == words);
    CHECK(plain(two.parse(words).tree) == plain(r.tree));  // deterministic
    const ParseResult s = single.parse(words);
    CHECK(s.log_prob == doctest::Approx(r.log_prob).epsilon(1e-12));
    // The derivation's log-probability is the sum of its steps.
    double sum = 0.0;
    for (const auto& st : r.derivation.steps) {
      sum += st.log_prob;
      CHECK(st.log_prob <= 0.0);
    }
    CHECK(sum == doctest::Approx(r.log_prob).epsilon(1e-12));
    // Every constituent of the answer was reachable in pass 1.
    if (r.pruned)
      for (const auto& b : brackets(r.tree, EvalOptions{{}, false}))
        CHECK(r.pass1_cells.count({b.start, b.end, b.label}));
  }
}

TEST_CASE("beam settings keep the parser sound") {
  const auto bank = oracle::read_treebank("toy20.mrg");
  const Model m = train_on(bank);
  ParserConfig tight;
  tight.beam_width = 2;
  tight.beam_margin = 3.0;
  const Parser exact(m), beamed(m, tight);
  for (const auto& g : bank) {
    const ParseResult a = exact.parse(yield(g)), b = beamed.parse(yield(g));
    if (!b.ok) continue;
    CHECK(b.log_prob <= a.log_prob + 1e-12);
    CHECK(yield(b.tree) == yield(g));
  }
}

TEST_CASE("Markov and pre-head models still parse their training data") {
  const auto bank = oracle::read_treebank("toy20.mrg");
  for (int prehead : {1, 2}) {
    ModelSettings s;
    s.prehead_order = prehead;
    s.markov = true;
    const Model m = train_on(bank, s);
    const Parser p(m);
    int ok = 0;
    for (const auto& g : bank) {
      const ParseResult r = p.parse(yield(g));
      if (r.ok && plain(r.tree) == plain(strip_empty_elements(g))) ++ok;
      CHECK(plain(r.tree).find('^') == std::string::npos);
    }
    CHECK(ok == static_cast<int>(bank.size()));
  }
}

TEST_CASE("right-branching fallback tree") {
  const ParseTree t = right_branching_tree(oracle::words("a b c"), {"X", "Y", "Z"});
  CHECK(to_bracketed(t) == "(TOP (S (X a) (S (Y b) (S (Z c)))))");
}
