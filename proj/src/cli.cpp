#include "tgram/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include "tgram/config.hpp"
#include "tgram/eval.hpp"
#include "tgram/model.hpp"
#include "tgram/parser.hpp"

namespace tgram {

namespace {

// I/O and usage problems; mapped to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
  if (!out) throw UsageError("write failed: " + path);
}

std::vector<ParseTree> read_trees(const std::string& path) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    for (const auto& e : fs::directory_iterator(path))
      if (e.is_regular_file()) files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  std::vector<ParseTree> out;
  for (const auto& f : files) {
    const std::string text = read_text(f);
    try {
      auto trees = parse_bracketed(text);
      out.insert(out.end(), std::make_move_iterator(trees.begin()), std::make_move_iterator(trees.end()));
    } catch (const ParseError& e) {
      throw UsageError(f + ": " + e.what() + " (byte " + std::to_string(e.offset()) + ")");
    }
  }
  return out;
}

std::vector<std::vector<std::string>> read_sentences(std::istream& in) {
  std::vector<std::vector<std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::vector<std::string> words;
    std::string w;
    while (ss >> w) words.push_back(w);
    out.push_back(std::move(words));
  }
  return out;
}

struct Rules {
  HeadRuleSet heads = HeadRuleSet::collins();
  ComplementRules complements = ComplementRules::standard();
};

Rules load_rules(const std::string& head_path, const std::string& comp_path) {
  namespace fs = std::filesystem;
  Rules r;
  std::string heads = head_path;
  std::string comps = comp_path;
  if (const char* dir = std::getenv("TGRAM_RULES_DIR"); dir && *dir) {
    if (heads.empty() && fs::exists(fs::path(dir) / "headrules.txt")) heads = (fs::path(dir) / "headrules.txt").string();
    if (comps.empty() && fs::exists(fs::path(dir) / "complements.txt"))
      comps = (fs::path(dir) / "complements.txt").string();
  }
  try {
    if (!heads.empty()) r.heads = HeadRuleSet::parse(read_text(heads));
    if (!comps.empty()) r.complements = ComplementRules::parse(read_text(comps));
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(std::string("rule table: ") + e.what());
  }
  return r;
}

// Command-line values that override the config file only when given.
struct Overrides {
  std::optional<int> prehead_order, max_depth, max_branching, max_open, max_words, beam_width;
  std::optional<std::uint64_t> min_freq, unknown_threshold;
  std::optional<std::string> depth_mode, treebank, model, input, output;
  std::optional<double> beam_margin;
  bool markov = false;
  bool single_pass = false;
  std::string config_path;

  RunConfig resolve() const {
    RunConfig c;
    if (!config_path.empty()) {
      try {
        c = load_config(config_path);
      } catch (const ConfigError& e) {
        throw UsageError(config_path + ": " + e.what());
      } catch (const std::runtime_error& e) {
        throw UsageError(e.what());
      }
    }
    auto limit = [](int v) { return v < 0 ? -1 : v; };
    if (prehead_order) c.prehead_order = *prehead_order;
    if (max_depth) c.max_depth = limit(*max_depth);
    if (max_branching) c.max_branching = limit(*max_branching);
    if (max_open) c.max_open = limit(*max_open);
    if (max_words) c.max_words = limit(*max_words);
    if (beam_width) c.beam_width = *beam_width;
    if (min_freq) c.min_freq = *min_freq;
    if (unknown_threshold) c.unknown_threshold = *unknown_threshold;
    if (beam_margin) c.beam_margin = *beam_margin;
    if (depth_mode) {
      try {
        set_config_value(c, "depth_mode", *depth_mode);
      } catch (const ConfigError& e) {
        throw UsageError(e.what());
      }
    }
    if (treebank) c.treebank = *treebank;
    if (model) c.model = *model;
    if (input) c.input = *input;
    if (output) c.output = *output;
    if (markov) c.markov = true;
    if (single_pass) c.two_pass = false;
    if (c.prehead_order < 0 || c.prehead_order > 2) throw UsageError("--prehead must be 0, 1 or 2");
    return c;
  }
};

bool is_phrasal(const TGram& t) {
  for (const auto& c : t.root->children)
    if (c->kind != FragNode::Kind::Word) return true;
  return false;
}

int cmd_train(const Overrides& o, const std::string& head_rules, const std::string& comp_rules,
              const std::string& dump_path, std::ostream& out, std::ostream& err) {
  const RunConfig c = o.resolve();
  if (c.treebank.empty()) throw UsageError("train: no treebank given (--treebank or config key treebank)");
  if (c.model.empty()) throw UsageError("train: no model path given (--model or config key model)");
  const Rules rules = load_rules(head_rules, comp_rules);
  const auto raw = read_trees(c.treebank);
  const ModelSettings settings = c.model_settings();
  const auto prepared = prepare_treebank(raw, settings, rules.heads, rules.complements);
  const Model model = train_model(prepared, settings);
  write_model_file(model, c.model);
  if (!dump_path.empty()) write_text(dump_path, dump_table(model.table));

  std::map<Role, std::set<std::string>> distinct;
  std::map<Role, std::uint64_t> events;
  std::size_t phrasal = 0;
  for (const auto& [h, e] : model.table.entries())
    for (const auto& [t, count] : e.counts) {
      if (distinct[h.role].insert(t).second && is_phrasal(parse_tgram(t))) ++phrasal;
      events[h.role] += count;
    }
  std::set<std::string> tags;
  for (const auto& [w, ts] : model.lexicon.entries())
    for (const auto& [pos, n] : ts) tags.insert(pos);
  out << "trees " << prepared.size() << "\n";
  for (Role r : {Role::Head, Role::Left, Role::Right})
    out << "tgrams " << role_code(r) << " distinct=" << distinct[r].size() << " events=" << events[r] << "\n";
  out << "histories " << model.table.size() << "\n";
  out << "vocabulary " << model.lexicon.size() << "\n";
  out << "pos_tags " << tags.size() << "\n";
  if (phrasal == 0)
    err << "warning: no phrasal T-grams in the model (min_freq=" << c.min_freq << " on " << prepared.size()
        << " trees)\n";
  return kExitOk;
}

int cmd_parse(const Overrides& o, int jobs, const std::string& report_path, bool fallback, std::ostream& out,
              std::ostream& err) {
  const RunConfig c = o.resolve();
  if (c.model.empty()) throw UsageError("parse: no model given (--model or config key model)");
  Model model;
  try {
    model = read_model_file(c.model);
  } catch (const ModelError& e) {
    throw UsageError(c.model + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
  std::vector<std::vector<std::string>> sentences;
  if (c.input.empty() || c.input == "-") {
    sentences = read_sentences(std::cin);
  } else {
    std::ifstream in(c.input);
    if (!in) throw UsageError("cannot open " + c.input);
    sentences = read_sentences(in);
  }
  ParserConfig pc = c.parser_config();
  pc.fallback_right_branch = fallback;
  const Parser parser(model, pc);

  std::vector<ParseResult> results(sentences.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < sentences.size(); i = next++) results[i] = parser.parse(sentences[i]);
  };
  const int n = std::max(1, jobs);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < n; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::string text;
  std::string report;
  std::size_t failures = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    text += to_bracketed(r.tree) + "\n";
    if (!r.ok) ++failures;
    if (report_path.empty()) continue;
    char lp[64];
    std::snprintf(lp, sizeof lp, "%.17g", r.log_prob);
    report += std::to_string(i + 1) + "\t" + (r.ok ? std::string(lp) : std::string("fail")) + "\t" +
              std::to_string(r.derivation.steps.size()) + (r.ok ? "" : "\t" + r.failure) + "\n";
    for (const auto& s : r.derivation.steps) {
      std::snprintf(lp, sizeof lp, "%.17g", s.log_prob);
      report += "\t" + s.node + "\t" + s.tgram + "\t" + s.history.to_string() + "\t" + lp + "\n";
    }
  }
  if (c.output.empty() || c.output == "-")
    out << text;
  else
    write_text(c.output, text);
  if (!report_path.empty()) write_text(report_path, report);
  err << "parsed " << results.size() << " sentences, " << failures << " failures\n";
  return kExitOk;
}

std::vector<double> parse_thresholds(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "inf" || item == "infinity") {
      out.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError("bad height threshold '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("--heights needs at least one threshold");
  return out;
}

int cmd_eval(const std::string& gold_path, const std::string& test_path, int len_cutoff, const std::string& csv_path,
             const std::string& heights, const std::string& heights_path, std::ostream& out) {
  auto gold = read_trees(gold_path);
  auto test = read_trees(test_path);
  if (gold.size() != test.size())
    throw UsageError("gold has " + std::to_string(gold.size()) + " trees, test has " + std::to_string(test.size()));
  if (len_cutoff > 0) {
    std::vector<ParseTree> g2, t2;
    for (std::size_t i = 0; i < gold.size(); ++i)
      if (yield(strip_empty_elements(gold[i])).size() <= static_cast<std::size_t>(len_cutoff)) {
        g2.push_back(std::move(gold[i]));
        t2.push_back(std::move(test[i]));
      }
    gold = std::move(g2);
    test = std::move(t2);
  }
  Scorecard card;
  try {
    card = score(gold, test);
  } catch (const AlignmentError& e) {
    throw UsageError(std::string("alignment error: ") + e.what());
  }
  out << scorecard_summary(card);
  if (!csv_path.empty()) write_text(csv_path, scorecard_csv(card));
  if (!heights.empty()) {
    const std::string csv = height_csv(height_curve(gold, test, parse_thresholds(heights)));
    if (heights_path.empty() || heights_path == "-")
      out << csv;
    else
      write_text(heights_path, csv);
  }
  return kExitOk;
}

int cmd_inspect(const std::string& model_path, const std::string& role, const std::string& label, int depth,
                bool counts, bool dump, std::ostream& out) {
  Model model;
  try {
    model = read_model_file(model_path);
  } catch (const ModelError& e) {
    throw UsageError(model_path + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
  if (dump) {
    out << dump_table(model.table);
    return kExitOk;
  }
  std::optional<Role> want;
  if (!role.empty()) {
    if (role.size() != 1) throw UsageError("--role must be H, L or R");
    try {
      want = role_from_code(role[0]);
    } catch (const std::invalid_argument&) {
      throw UsageError("--role must be H, L or R");
    }
  }
  std::map<std::string, std::uint64_t> totals;
  for (const auto& [h, e] : model.table.entries()) {
    if (want && h.role != *want) continue;
    for (const auto& [text, count] : e.counts) totals[text] += count;
  }
  for (const auto& [text, count] : totals) {
    const TGram t = parse_tgram(text);
    if (!label.empty() && t.root->label != label && t.root->wsj != label) continue;
    if (depth >= 0 && tgram_depth(t, model.settings.extraction.depth_mode) != depth) continue;
    out << text;
    if (counts) out << '\t' << count;
    out << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tree-gram parsing toolkit", "tgram"};
  app.require_subcommand(1);

  Overrides o;
  auto add_model_flags = [&o](CLI::App* cmd) {
    cmd->add_option("-c,--config", o.config_path, "key = value config file");
    cmd->add_option("-d,--max-depth", o.max_depth, "maximum T-gram depth d (-1: unlimited)");
    cmd->add_option("-b,--max-branching", o.max_branching, "maximum branching b (-1: unlimited)");
    cmd->add_option("-n,--max-open", o.max_open, "maximum open budget n (-1: unlimited)");
    cmd->add_option("-w,--max-words", o.max_words, "maximum words per T-gram w (-1: unlimited)");
    cmd->add_option("-f,--min-freq", o.min_freq, "minimum T-gram frequency f");
    cmd->add_option("--prehead", o.prehead_order, "pre-head order 0, 1 or 2");
    cmd->add_option("--depth-mode", o.depth_mode, "flat or head-outward");
    cmd->add_option("--unknown-threshold", o.unknown_threshold, "rename words seen fewer times");
    cmd->add_flag("--markov", o.markov, "condition dependents on the adjacent sibling");
    cmd->add_option("-t,--treebank", o.treebank, "bracketed treebank file or directory");
    cmd->add_option("-m,--model", o.model, "model file");
  };

  std::string head_rules, comp_rules, dump_path;
  auto* train = app.add_subcommand("train", "extract T-grams and write a model");
  add_model_flags(train);
  train->add_option("--head-rules", head_rules, "head rule table");
  train->add_option("--complement-rules", comp_rules, "complement rule table");
  train->add_option("--dump", dump_path, "also write the count table as text");

  int jobs = 1;
  std::string report_path;
  bool fallback = false;
  auto* parse = app.add_subcommand("parse", "parse one sentence per line");
  parse->add_option("-c,--config", o.config_path, "key = value config file");
  parse->add_option("-m,--model", o.model, "model file");
  parse->add_option("-i,--input", o.input, "input sentences (default stdin)");
  parse->add_option("-o,--output", o.output, "output trees (default stdout)");
  parse->add_option("--beam-width", o.beam_width, "per-cell beam width (0: off)");
  parse->add_option("--beam-margin", o.beam_margin, "per-cell log-probability margin (0: off)");
  parse->add_flag("--single-pass", o.single_pass, "skip the depth-1 pruning pass");
  parse->add_flag("--fallback-rightbranch", fallback, "emit a right-branching tree on failure");
  parse->add_option("-j,--jobs", jobs, "parallel sentences")->check(CLI::PositiveNumber);
  parse->add_option("--report", report_path, "log-probability and derivation sidecar");

  std::string gold_path, test_path, csv_path, heights, heights_path;
  int len_cutoff = 0;
  auto* eval = app.add_subcommand("eval", "PARSEVAL scores of test trees against gold trees");
  eval->add_option("gold", gold_path, "gold trees")->required();
  eval->add_option("test", test_path, "test trees")->required();
  eval->add_option("--len-cutoff", len_cutoff, "only sentences with at most this many words");
  eval->add_option("--csv", csv_path, "per-sentence CSV");
  eval->add_option("--heights", heights, "comma-separated node-height thresholds");
  eval->add_option("--heights-csv", heights_path, "height curve CSV (default stdout)");

  std::string inspect_model, role, label;
  int depth = -1;
  bool counts = false, dump = false;
  auto* inspect = app.add_subcommand("inspect", "list T-grams of a model");
  inspect->add_option("model", inspect_model, "model file")->required();
  inspect->add_option("--role", role, "H, L or R");
  inspect->add_option("--label", label, "root label (WSJ or enriched)");
  inspect->add_option("--depth", depth, "exact T-gram depth");
  inspect->add_flag("--counts", counts, "append total counts");
  inspect->add_flag("--dump", dump, "full table with histories");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*train) return cmd_train(o, head_rules, comp_rules, dump_path, out, err);
    if (*parse) return cmd_parse(o, jobs, report_path, fallback, out, err);
    if (*eval) return cmd_eval(gold_path, test_path, len_cutoff, csv_path, heights, heights_path, out);
    if (*inspect) return cmd_inspect(inspect_model, role, label, depth, counts, dump, out);
  } catch (const UsageError& e) {
    err << "tgram: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "tgram: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace tgram
