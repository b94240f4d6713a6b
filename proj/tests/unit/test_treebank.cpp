#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "support/oracles.hpp"
#include "tgram/treebank.hpp"

using namespace tgram;

namespace {

const char* kFigure2 = "(S (NP-TMP (JJ last) (NN week)) (NP-SBJ (DET a) (NN deal)) (VP (VBD was) (VP (VBN sealed))))";

void each_node(const ParseTree& t, const std::function<void(const ParseTree&)>& fn) {
  fn(t);
  for (const auto& c : t.children) each_node(c, fn);
}

}  // namespace

TEST_CASE("parse_bracketed reads trees under an implicit TOP") {
  const auto trees = parse_bracketed("(S (NP (DET a) (NN deal)) (VP (VBD was)))");
  REQUIRE(trees.size() == 1);
  const ParseTree& t = trees[0];
  CHECK(t.label == "TOP");
  CHECK(t.children.at(0).label == "S");
  CHECK(yield(t) == std::vector<std::string>{"a", "deal", "was"});
  CHECK(t.span.start == 0);
  CHECK(t.span.end == 3);
}

TEST_CASE("sample tree text") {
  const ParseTree t = parse_tree(kFigure2);
  CHECK(yield(t) == oracle::words("last week a deal was sealed"));
  const ParseTree& s = t.children[0];
  REQUIRE(s.children.size() == 3);
  CHECK(s.children[0].label == "NP");
  CHECK(s.children[0].function_tags == std::vector<std::string>{"TMP"});
  CHECK(s.children[1].label == "NP");
  CHECK(s.children[2].label == "VP");
}

TEST_CASE("malformed input reports a byte offset") {
  try {
    parse_bracketed("((S");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 3);
  }
  CHECK_THROWS_AS(parse_bracketed("(S (NP a)) )"), ParseError);
  CHECK_THROWS_AS(parse_bracketed("(S ( (NN a)))"), ParseError);
}

TEST_CASE("wrapped treebank files with an empty outer bracket") {
  const auto trees = parse_bracketed("( (S (NP (NN a)) (VP (VB b))) )\n((S (NP (NN c)) (VP (VB d))))");
  REQUIRE(trees.size() == 2);
  CHECK(trees[0].children[0].label == "S");
  CHECK(yield(trees[1]) == oracle::words("c d"));
}

TEST_CASE("spans of children partition the parent span") {
  std::mt19937 rng(3);
  for (int i = 0; i < 100; ++i) {
    const ParseTree t = parse_tree(oracle::random_tree_text(rng, 12));
    each_node(t, [](const ParseTree& n) {
      if (n.children.empty()) return;
      int at = n.span.start;
      for (const auto& c : n.children) {
        CHECK(c.span.start == at);
        at = c.span.end;
      }
      CHECK(at == n.span.end);
    });
  }
}

TEST_CASE("print and parse round-trip") {
  const char* text = "(TOP (S (NP-SBJ-1 (NNP John)) (VP (VBD left) (NP (-NONE- *T*-1)))))";
  const ParseTree t = parse_tree(text);
  CHECK(to_bracketed(t) == text);
  CHECK(parse_tree(to_bracketed(t)) == t);
  CHECK(to_bracketed(parse_tree("  (S\n  (NP (NN a))\n (VP (VB b)))")) == "(TOP (S (NP (NN a)) (VP (VB b))))");
}

TEST_CASE("empty elements are removed with their emptied ancestors") {
  const ParseTree t = strip_empty_elements(parse_tree("(S (NP-SBJ (-NONE- *)) (VP (VB go) (NP (-NONE- *T*))))"));
  CHECK(to_bracketed(t) == "(TOP (S (VP (VB go))))");
}

TEST_CASE("mark_heads on the sample tree") {
  const ParseTree t = mark_heads(parse_tree(kFigure2));
  const ParseTree& s = t.children[0];
  CHECK(t.head_child == 1);
  CHECK(s.head_child == 3);
  CHECK(s.children[0].head_child == 2);
  CHECK(s.children[1].head_child == 2);
  CHECK(s.children[2].head_child == 1);
  CHECK(s.children[2].children[1].head_child == 1);
}

TEST_CASE("mark_heads: single child and the shipped VP rule") {
  CHECK(mark_heads(parse_tree("(FOO (NN a))")).children[0].head_child == 1);
  const ParseTree vp = mark_heads(parse_tree("(VP (VBD saw) (NP (NN it)) (PP (IN on) (NP (NN tv))))"));
  CHECK(vp.children[0].head_child == 1);
}

TEST_CASE("mark_heads is idempotent and total") {
  std::mt19937 rng(11);
  for (int i = 0; i < 100; ++i) {
    const ParseTree once = mark_heads(parse_tree(oracle::random_tree_text(rng, 12)));
    CHECK(mark_heads(once) == once);
    each_node(once, [](const ParseTree& n) {
      if (n.is_leaf()) return;
      CHECK(n.head_child >= 1);
      CHECK(n.head_child <= static_cast<int>(n.children.size()));
    });
  }
}

TEST_CASE("head rules load from text") {
  const auto rules = HeadRuleSet::parse("# comment\nXP right B A\n");
  const std::vector<std::string> kids{"A", "B", "A"};
  CHECK(rules.find_head("XP", kids) == 2);
  const auto shipped = HeadRuleSet::parse(HeadRuleSet::collins_text());
  const std::vector<std::string> vp{"VBD", "NP", "PP"};
  CHECK(shipped.find_head("VP", vp) == HeadRuleSet::collins().find_head("VP", vp));
  CHECK_THROWS(HeadRuleSet::parse("XP sideways A\n"));
}

TEST_CASE("pre-heads of order 1 and 2") {
  const ParseTree marked = mark_heads(parse_tree(kFigure2));
  const ParseTree one = enrich_preheads(marked, 1);
  const ParseTree& np = one.children[0].children[1];
  REQUIRE(np.prehead.has_value());
  CHECK(np.prehead->head_pos == "NN");
  CHECK(np.model_label() == "NP^NN");

  const ParseTree two = enrich_preheads(marked, 2);
  const ParseTree& s = two.children[0];
  REQUIRE(s.prehead.has_value());
  CHECK(s.prehead->head_pos == "VBD");
  CHECK(s.prehead->head_pos_mother == "VP");
  CHECK(s.model_label() == "S^VBD/VP");
  CHECK_FALSE(two.prehead.has_value());                          // TOP
  CHECK_FALSE(two.children[0].children[0].children[0].prehead);  // POS
}

TEST_CASE("order 0 is the identity and order 2 refines order 1") {
  std::mt19937 rng(5);
  for (int i = 0; i < 50; ++i) {
    const ParseTree marked = mark_heads(parse_tree(oracle::random_tree_text(rng, 12)));
    CHECK(to_bracketed(enrich_preheads(marked, 0), {true, true}) == to_bracketed(marked, {true, true}));
    std::function<void(const ParseTree&, const ParseTree&)> cmp = [&](const ParseTree& a, const ParseTree& b) {
      CHECK(a.prehead.has_value() == b.prehead.has_value());
      if (a.prehead && b.prehead) {
        CHECK(a.prehead->head_pos == b.prehead->head_pos);
        CHECK(a.prehead->head_pos_mother.empty());
      }
      for (std::size_t k = 0; k < a.children.size(); ++k) cmp(a.children[k], b.children[k]);
    };
    cmp(enrich_preheads(marked, 1), enrich_preheads(marked, 2));
  }
}

TEST_CASE("complement marking") {
  const ParseTree fig4 =
      mark_complements(mark_heads(parse_tree("(S (NP-SBJ (DET a) (NN deal)) (VP (VBD was) (VP (VBN sealed))))")));
  const ParseTree& s = fig4.children[0];
  CHECK(s.sc_left == std::vector<std::string>{"NP"});
  CHECK(s.sc_right.empty());
  CHECK(s.children[0].children[0].sc_left.empty());

  const ParseTree vp =
      mark_complements(mark_heads(parse_tree("(VP (VBD put) (NP-obj (NN it)) (ADVP (RB there)))"))).children[0];
  CHECK(vp.sc_right == std::vector<std::string>{"NP"});
  CHECK(vp.sc_left.empty());

  const ParseTree tmp = mark_complements(mark_heads(parse_tree(kFigure2))).children[0];
  CHECK_FALSE(tmp.children[0].complement);  // NP-TMP
  CHECK(tmp.children[1].complement);        // NP-SBJ
  CHECK_FALSE(tmp.children[2].complement);  // head
}

TEST_CASE("frames are sub-multisets of the non-head children") {
  std::mt19937 rng(17);
  for (int i = 0; i < 100; ++i) {
    const ParseTree t = mark_complements(mark_heads(parse_tree(oracle::random_tree_text(rng, 12))));
    each_node(t, [](const ParseTree& n) {
      if (n.is_leaf()) return;
      std::vector<std::string> frames = n.sc_left, others;
      frames.insert(frames.end(), n.sc_right.begin(), n.sc_right.end());
      for (std::size_t k = 0; k < n.children.size(); ++k)
        if (static_cast<int>(k) + 1 != n.head_child) others.push_back(n.children[k].label);
      std::sort(frames.begin(), frames.end());
      std::sort(others.begin(), others.end());
      CHECK(std::includes(others.begin(), others.end(), frames.begin(), frames.end()));
      CHECK_FALSE(n.children.at(static_cast<std::size_t>(n.head_child - 1)).complement);
    });
  }
}

TEST_CASE("unknown-word signatures") {
  CHECK(unknown_signature("Gargantuan") == "1+UNKNOWN+n");
  CHECK(unknown_signature("walking") == "0+UNKNOWN+ing");
  CHECK(unknown_signature("Zorp") == "1+UNKNOWN+p");
  CHECK(unknown_signature("quickly") == "0+UNKNOWN+ly");
  CHECK(unknown_signature("dogs") == "0+UNKNOWN+s");
}

TEST_CASE("rename_unknown_words") {
  std::vector<ParseTree> bank;
  for (int i = 0; i < 5; ++i) bank.push_back(parse_tree("(NP (DT a) (NN deal))"));
  bank.push_back(parse_tree("(NP (JJ Gargantuan) (NN deal))"));
  bank.push_back(parse_tree("(NP (JJ Gargantuan) (NN deal))"));
  const auto renamed = rename_unknown_words(bank, 5);
  CHECK(yield(renamed[5]) == std::vector<std::string>{"1+UNKNOWN+n", "deal"});
  CHECK(yield(renamed[0]) == std::vector<std::string>{"a", "deal"});  // exactly at the threshold
  CHECK(rename_unknown_words(bank, 0) == bank);
  CHECK(rename_unknown_words(bank, 5) == renamed);
}

TEST_CASE("tag lexicon") {
  const TagLexicon fig2 = build_tag_lexicon({parse_tree(kFigure2)});
  CHECK(fig2.lookup("deal") == std::map<std::string, std::uint64_t>{{"NN", 1}});

  const TagLexicon both =
      build_tag_lexicon({parse_tree("(S (NP (NN run)) (VP (VB stop)))"), parse_tree("(VP (VB run))")});
  CHECK(both.lookup("run") == std::map<std::string, std::uint64_t>{{"NN", 1}, {"VB", 1}});

  TagLexicon lex;
  lex.add("1+UNKNOWN+p", "NNP", 3);
  CHECK(lex.lookup("Zorp") == std::map<std::string, std::uint64_t>{{"NNP", 3}});
  CHECK(lex.lookup("zorp").empty());
  CHECK(lex.normalize("Zorp") == "1+UNKNOWN+p");

  TagLexicon punct;
  punct.add(",", ",", 2);
  punct.add(":", ":", 1);
  punct.add("deal", "NN", 4);
  punct.add("deal", "VB", 1);
  CHECK(TagLexicon::from_text(punct.to_text()) == punct);
  CHECK(punct.to_text().find("deal\tNN:4,VB:1\n") != std::string::npos);
}
