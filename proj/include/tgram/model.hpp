#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tgram/extract.hpp"
#include "tgram/history.hpp"
#include "tgram/treebank.hpp"

namespace tgram {

/// Direct-estimate counts: history -> T-gram text -> count.
///
/// Histories are stored already projected (see `project`), so a lookup
/// must use the same projection as training. Counts are kept as integers;
/// division happens at query time.
class CountTable {
 public:
  struct Entry {
    std::uint64_t total = 0;
    std::map<std::string, std::uint64_t> counts;

    bool operator==(const Entry&) const = default;
  };

  void add(const History& history, const std::string& tgram, std::uint64_t count = 1);

  std::uint64_t count(const History& history, const std::string& tgram) const;
  std::uint64_t total(const History& history) const;
  /// Relative frequency; 0 for an unseen history or T-gram.
  double prob(const History& history, const std::string& tgram) const;
  /// -infinity when prob is 0.
  double log_prob(const History& history, const std::string& tgram) const;

  const std::map<History, Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  bool operator==(const CountTable&) const = default;

 private:
  std::map<History, Entry> entries_;
};

/// Counts every event under its history projected for `markov`.
CountTable observe_corpus(const EventCounts& events, bool markov);

/// True iff nothing lies between the dependent and the head child on the
/// dependent's side. `head_is_outermost` is whether the head child is still
/// the outermost child on that side before attachment.
bool adjacency_flag(Role role, bool head_is_outermost);

struct ModelSettings {
  ExtractionConfig extraction;
  int prehead_order = 0;
  bool markov = false;
  std::uint64_t unknown_threshold = 0;

  bool operator==(const ModelSettings&) const = default;
};

struct Model {
  ModelSettings settings;
  CountTable table;
  TagLexicon lexicon;

  bool operator==(const Model&) const = default;
};

/// Tree preparation shared by training and evaluation: empty elements
/// removed, heads and complements marked, pre-heads attached.
ParseTree prepare_tree(const ParseTree& raw, int prehead_order, const HeadRuleSet& heads,
                       const ComplementRules& complements);

/// prepare_tree on every tree, then unknown-word renaming.
std::vector<ParseTree> prepare_treebank(const std::vector<ParseTree>& raw, const ModelSettings& settings,
                                        const HeadRuleSet& heads = HeadRuleSet::collins(),
                                        const ComplementRules& complements = ComplementRules::standard());

/// Trains on an already prepared treebank.
Model train_model(const std::vector<ParseTree>& prepared, const ModelSettings& settings);

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kModelVersion = 1;

/// Versioned little-endian binary container. Deterministic: equal models
/// give equal bytes.
std::string save_model(const Model& model);
/// Throws ModelError on a bad magic, version mismatch or truncated input.
Model load_model(std::string_view bytes);

void write_model_file(const Model& model, const std::string& path);
Model read_model_file(const std::string& path);

/// One line per (history, T-gram): `ROLE TAB history TAB tgram TAB count`.
std::string dump_table(const CountTable& table);

}  // namespace tgram
