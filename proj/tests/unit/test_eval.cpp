#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "tgram/eval.hpp"

using namespace tgram;

TEST_CASE("crossing example") {
  const auto gold = oracle::read_treebank("crossing_gold.mrg");
  const auto test = oracle::read_treebank("crossing_test.mrg");
  const Scorecard c = score(gold, test);
  CHECK(c.matched == 1);
  CHECK(c.gold == 3);
  CHECK(c.test == 3);
  CHECK(c.recall() == doctest::Approx(1.0 / 3));
  CHECK(c.precision() == doctest::Approx(1.0 / 3));
  CHECK(c.crossing_brackets() == 1.0);
  CHECK(c.zero_cb() == 0.0);
  CHECK(c.two_cb() == 100.0);
}

TEST_CASE("identity and swap symmetry") {
  const auto bank = oracle::read_treebank("toy20.mrg");
  const Scorecard self = score(bank, bank);
  CHECK(self.recall() == 1.0);
  CHECK(self.precision() == 1.0);
  CHECK(self.crossing == 0);

  std::vector<ParseTree> shifted;
  std::mt19937 rng(41);
  for (const auto& t : bank) {
    // Flatten one random phrasal node into its parent.
    ParseTree copy = t;
    std::vector<ParseTree*> parents;
    std::function<void(ParseTree&)> walk = [&](ParseTree& n) {
      for (auto& c : n.children)
        if (c.is_phrasal()) parents.push_back(&n);
      for (auto& c : n.children) walk(c);
    };
    walk(copy.children[0]);
    if (!parents.empty()) {
      ParseTree& p = *parents[rng() % parents.size()];
      for (std::size_t k = 0; k < p.children.size(); ++k)
        if (p.children[k].is_phrasal()) {
          auto kids = p.children[k].children;
          p.children.erase(p.children.begin() + static_cast<long>(k));
          p.children.insert(p.children.begin() + static_cast<long>(k), kids.begin(), kids.end());
          break;
        }
    }
    shifted.push_back(copy);
  }
  const Scorecard ab = score(bank, shifted), ba = score(shifted, bank);
  CHECK(ab.recall() == doctest::Approx(ba.precision()));
  CHECK(ab.precision() == doctest::Approx(ba.recall()));
  CHECK(ab.f_score() == doctest::Approx(ba.f_score()));
  CHECK(ab.precision() == 1.0);  // flattening only removes brackets

  // Corpus scores do not depend on sentence order.
  auto g = bank, t = shifted;
  std::reverse(g.begin(), g.end());
  std::reverse(t.begin(), t.end());
  const Scorecard rev = score(g, t);
  CHECK(rev.matched == ab.matched);
  CHECK(rev.crossing == ab.crossing);
}

TEST_CASE("punctuation and label equivalence") {
  const ParseTree g = parse_tree("(S (NP (NN a)) (, ,) (VP (VB b) (PRT (RP up))) (. .))");
  const ParseTree t = parse_tree("(S (NP (NN a)) (, ,) (VP (VB b) (ADVP (RP up))) (. .))");
  const auto b = brackets(g);
  CHECK(b == std::vector<Bracket>{{0, 1, "NP"}, {2, 3, "ADVP"}, {1, 3, "VP"}, {0, 3, "S"}});
  CHECK(score({g}, {t}).matched == 4);
  EvalOptions strict;
  strict.advp_equals_prt = false;
  CHECK(score({g}, {t}, strict).matched == 3);
}

TEST_CASE("failed parses count against recall") {
  const auto gold = oracle::read_treebank("crossing_gold.mrg");
  const Scorecard c = score(gold, {failed_parse()});
  CHECK(c.sentences[0].failed);
  CHECK(c.matched == 0);
  CHECK(c.test == 0);
  CHECK(c.recall() == 0.0);
  CHECK(scorecard_summary(c).find("failed=1") != std::string::npos);
}

TEST_CASE("alignment errors") {
  const auto gold = oracle::read_treebank("crossing_gold.mrg");
  CHECK_THROWS_AS(score(gold, {}), AlignmentError);
  try {
    score(gold, {parse_tree("(S (X a) (X b) (X d))")});
    FAIL("no error");
  } catch (const AlignmentError& e) {
    CHECK(e.sentence() == 0);
  }
}

TEST_CASE("node height") {
  const ParseTree t = parse_tree("(S (NP-TMP (JJ last) (NN week)) (NP-SBJ (DET a) (NN deal)) (VP (VBD was) (VP (VBN sealed))))");
  const ParseTree& s = t.children[0];
  CHECK(node_height(s.children[0].children[0]) == 1.0);
  CHECK(node_height(s.children[0]) == 2.0);
  CHECK(node_height(s) == doctest::Approx(19.0 / 6));
  CHECK_THROWS(node_height(s.children[0].children[0].children[0]));
}

TEST_CASE("height curve") {
  const auto gold = oracle::read_treebank("crossing_gold.mrg");
  const auto test = oracle::read_treebank("crossing_test.mrg");
  const auto curve = height_curve(gold, test, {1, 2, 3, INFINITY});
  REQUIRE(curve.size() == 4);
  // Height 1 leaves nothing phrasal; both NP and VP have height 2; S is 3.
  CHECK(curve[0].f == 0.0);
  CHECK(curve[1].f == 0.0);
  CHECK(curve[2].f == doctest::Approx(1.0 / 3));
  CHECK(curve[3].f == doctest::Approx(score(gold, test).f_score()));
  CHECK(height_csv(curve) == "1,0.000000\n2,0.000000\n3,0.333333\ninf,0.333333\n");
  CHECK_THROWS(height_curve(gold, test, {}));

  const auto bank = oracle::read_treebank("toy20.mrg");
  double prev = -1.0;
  for (const auto& p : height_curve(bank, bank, {2, 3, 4, 5})) {
    CHECK(p.f == 1.0);
    CHECK(p.threshold > prev);
    prev = p.threshold;
  }
}

TEST_CASE("CSV output") {
  const auto gold = oracle::read_treebank("crossing_gold.mrg");
  const auto test = oracle::read_treebank("crossing_test.mrg");
  CHECK(scorecard_csv(score(gold, test)) == "1,33.3333,33.3333,1\ntotal,33.3333,33.3333,1.0000\n");
  CHECK(f_score(0.0, 0.0) == 0.0);
  CHECK(f_score(0.5, 1.0) == doctest::Approx(2.0 / 3));
}
