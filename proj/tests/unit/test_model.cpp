#include <doctest.h>

#include <cmath>
#include <set>

#include "support/oracles.hpp"
#include "tgram/derivation.hpp"
#include "tgram/model.hpp"

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

}  // namespace

TEST_CASE("direct estimate on the sample tree") {
  const Model m = train_on(oracle::read_treebank("figure2.mrg"), unlimited());
  const History np = head_history("NN", "NP");
  CHECK(m.table.prob(np, "H: [NN] deal") == doctest::Approx(0.5));
  CHECK(m.table.prob(np, "H: [NN] week") == doctest::Approx(0.5));
  CHECK(m.table.count(np, "H: [NN] deal") == 1);
  CHECK(m.table.total(np) == 2);
}

TEST_CASE("unary chains give probability one everywhere") {
  ModelSettings s;
  s.extraction.max_depth = 1;
  const Model m = train_on({parse_tree("(NP (NN dogs))")}, s);
  CHECK(m.table.size() == 3);
  for (const auto& [h, e] : m.table.entries())
    for (const auto& [t, c] : e.counts) CHECK(m.table.prob(h, t) == 1.0);
}

TEST_CASE("unseen keys and T-grams have probability zero") {
  const Model m = train_on(oracle::read_treebank("figure2.mrg"));
  CHECK(m.table.prob(head_history("NN", "VP"), "H: [NN] deal") == 0.0);
  CHECK(m.table.prob(head_history("NN", "NP"), "H: [NN] dogs") == 0.0);
  CHECK(std::isinf(m.table.log_prob(head_history("XX", "YY"), "H: [XX] x")));
}

TEST_CASE("relative frequencies are scale invariant") {
  const auto bank = oracle::read_treebank("toy20.mrg");
  auto tripled = bank;
  tripled.insert(tripled.end(), bank.begin(), bank.end());
  tripled.insert(tripled.end(), bank.begin(), bank.end());
  const Model one = train_on(bank), three = train_on(tripled);
  REQUIRE(one.table.size() == three.table.size());
  for (const auto& [h, e] : one.table.entries()) {
    CHECK(three.table.total(h) == 3 * e.total);
    for (const auto& [t, c] : e.counts) CHECK(three.table.prob(h, t) == doctest::Approx(one.table.prob(h, t)));
  }
}

TEST_CASE("normalization holds under every conditioning variant") {
  const auto bank = oracle::read_treebank("toy20.mrg");
  for (int prehead : {0, 1, 2})
    for (bool markov : {false, true}) {
      ModelSettings s;
      s.prehead_order = prehead;
      s.markov = markov;
      const Model m = train_on(bank, s);
      for (const auto& [h, e] : m.table.entries()) {
        double sum = 0.0;
        std::uint64_t total = 0;
        for (const auto& [t, c] : e.counts) {
          sum += m.table.prob(h, t);
          total += c;
          CHECK(c > 0);
        }
        CHECK(total == e.total);
        CHECK(std::abs(sum - 1.0) < 1e-9);
        if (!markov || !h.frame.empty()) CHECK(h.sibling.empty());
      }
    }
}

TEST_CASE("history projection") {
  const History h = dep_history(Role::Left, "S", "VP", {}, false, "NP");
  CHECK(project(h, false).sibling.empty());
  CHECK(project(h, true).sibling == "NP");
  CHECK(project(dep_history(Role::Left, "S", "VP", {"NP"}, true, "VP"), true).sibling.empty());
  CHECK_THROWS(dep_history(Role::Head, "S", "VP", {}, true, ""));
  for (const History& x : {h, head_history("NP", "S"), head_history("S", ""),
                           dep_history(Role::Right, "VP", "VB", {"NP", "S"}, true, "")})
    CHECK(History::parse(x.role, x.to_string()) == x);
}

TEST_CASE("adjacency flag") {
  CHECK(adjacency_flag(Role::Left, true));
  CHECK_FALSE(adjacency_flag(Role::Left, false));
  CHECK(adjacency_flag(Role::Right, true));
  CHECK_THROWS(adjacency_flag(Role::Head, true));
  // Figure 4: the subject is generated first, next to the head VP.
  const Model m = train_on(oracle::read_treebank("figure4.mrg"), unlimited());
  CHECK(m.table.count(dep_history(Role::Left, "S", "VP", {"NP"}, true, ""), "L: [S (NP-C)") == 1);
}

TEST_CASE("training histories match the ones replayed on the source tree") {
  // Every step of every derivation of a training tree is a training event of
  // that tree, and every event is used by some derivation.
  for (const char* name : {"figure2.mrg", "figure4.mrg", "mpd_toy.mrg"})
    for (bool markov : {false, true}) {
      ModelSettings s;
      s.extraction.max_depth = 2;
      s.markov = markov;
      for (const auto& tree : prepare_treebank(oracle::read_treebank(name), s)) {
        EventCounts events;
        extract_tree(tree, s.extraction, events);
        const CountTable table = observe_corpus(events, markov);
        std::set<std::pair<std::string, std::string>> expected, used;
        for (const auto& [e, n] : events) expected.insert({project(e.history, markov).to_string(), e.tgram});
        for (const auto& d : enumerate_derivations(tree, table, markov))
          for (const auto& st : d.steps) used.insert({st.history.to_string(), st.tgram});
        CHECK(used == expected);
      }
    }
}

TEST_CASE("model serialization") {
  const Model m = train_on(oracle::read_treebank("toy20.mrg"));
  const std::string bytes = save_model(m);
  CHECK(load_model(bytes) == m);
  CHECK(save_model(load_model(bytes)) == bytes);

  const Model empty;
  CHECK(load_model(save_model(empty)) == empty);

  std::string bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(load_model(bad), ModelError);
  std::string version = bytes;
  version[8] = static_cast<char>(kModelVersion + 1);
  CHECK_THROWS_AS(load_model(version), ModelError);
  CHECK_THROWS_AS(load_model(bytes.substr(0, bytes.size() / 2)), ModelError);
  CHECK_THROWS_AS(load_model(bytes + "x"), ModelError);
  CHECK_THROWS_AS(load_model(""), ModelError);
}

TEST_CASE("text dump") {
  ModelSettings s;
  s.extraction.max_depth = 1;
  const Model m = train_on({parse_tree("(NP (NN dogs))")}, s);
  CHECK(dump_table(m.table) == "H\tA=NN P=NP\tH: [NN] dogs\t1\n"
                               "H\tA=NP P=TOP\tH: [NP] *(NN)\t1\n"
                               "H\tA=TOP P=-\tH: [TOP] *(NP)\t1\n");
  CHECK(dump_table(CountTable{}).empty());
}

TEST_CASE("unknown-word threshold feeds the lexicon") {
  ModelSettings s;
  s.unknown_threshold = 2;
  const Model m = train_on(oracle::read_treebank("toy20.mrg"), s);
  CHECK(m.lexicon.contains("the"));
  CHECK_FALSE(m.lexicon.contains("barked"));
  CHECK(m.lexicon.contains("0+UNKNOWN+ed"));
  CHECK(m.lexicon.lookup("jumped").count("VBD"));
}
