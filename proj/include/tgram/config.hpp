#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "tgram/model.hpp"
#include "tgram/parser.hpp"

namespace tgram {

/// Everything a train/parse run needs.
///
/// File format: one `key = value` per line, `#` starts a comment, blank
/// lines ignored. Keys are the field names below; `max_*` limits accept
/// `-1` or `unlimited`; booleans accept true/false, 1/0, yes/no, on/off.
struct RunConfig {
  int prehead_order = 0;
  int max_depth = 5;
  int max_branching = -1;
  int max_open = 4;
  int max_words = 3;
  std::uint64_t min_freq = 1;
  DepthMode depth_mode = DepthMode::Flat;
  bool markov = false;
  std::uint64_t unknown_threshold = 0;
  int beam_width = 0;
  double beam_margin = 0.0;
  bool two_pass = true;
  std::string treebank;
  std::string model;
  std::string input;
  std::string output;

  ModelSettings model_settings() const;
  ParserConfig parser_config() const;

  bool operator==(const RunConfig&) const = default;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);
/// Canonical form: every key, fixed order, one per line.
std::string serialize_config(const RunConfig& config);
/// Sets one field from its textual value. Throws ConfigError.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);

}  // namespace tgram
