#include "tgram/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tgram {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || p != value.data() + value.size())
    throw ConfigError("bad value '" + value + "' for " + key);
  return out;
}

int parse_limit(const std::string& key, const std::string& value) {
  if (value == "unlimited") return -1;
  const int v = parse_number<int>(key, value);
  if (v < -1) throw ConfigError(key + " must be -1 (unlimited) or non-negative");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("bad boolean '" + value + "' for " + key);
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw ConfigError("bad value '" + value + "' for " + key);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("bad value '" + value + "' for " + key);
  }
}

}  // namespace

ModelSettings RunConfig::model_settings() const {
  ModelSettings s;
  s.extraction.max_depth = max_depth;
  s.extraction.max_branching = max_branching;
  s.extraction.max_open = max_open;
  s.extraction.max_words = max_words;
  s.extraction.min_frequency = min_freq;
  s.extraction.depth_mode = depth_mode;
  s.prehead_order = prehead_order;
  s.markov = markov;
  s.unknown_threshold = unknown_threshold;
  return s;
}

ParserConfig RunConfig::parser_config() const {
  ParserConfig p;
  p.two_pass = two_pass;
  p.beam_width = beam_width;
  p.beam_margin = beam_margin;
  return p;
}

void set_config_value(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "prehead_order") {
    c.prehead_order = parse_number<int>(key, value);
    if (c.prehead_order < 0 || c.prehead_order > 2) throw ConfigError("prehead_order must be 0, 1 or 2");
  } else if (key == "max_depth") {
    c.max_depth = parse_limit(key, value);
  } else if (key == "max_branching") {
    c.max_branching = parse_limit(key, value);
  } else if (key == "max_open") {
    c.max_open = parse_limit(key, value);
  } else if (key == "max_words") {
    c.max_words = parse_limit(key, value);
  } else if (key == "min_freq") {
    c.min_freq = parse_number<std::uint64_t>(key, value);
  } else if (key == "depth_mode") {
    if (value == "flat")
      c.depth_mode = DepthMode::Flat;
    else if (value == "head-outward")
      c.depth_mode = DepthMode::HeadOutward;
    else
      throw ConfigError("depth_mode must be flat or head-outward");
  } else if (key == "markov") {
    c.markov = parse_bool(key, value);
  } else if (key == "unknown_threshold") {
    c.unknown_threshold = parse_number<std::uint64_t>(key, value);
  } else if (key == "beam_width") {
    c.beam_width = parse_number<int>(key, value);
    if (c.beam_width < 0) throw ConfigError("beam_width must be non-negative");
  } else if (key == "beam_margin") {
    c.beam_margin = parse_real(key, value);
    if (c.beam_margin < 0) throw ConfigError("beam_margin must be non-negative");
  } else if (key == "two_pass") {
    c.two_pass = parse_bool(key, value);
  } else if (key == "treebank") {
    c.treebank = value;
  } else if (key == "model") {
    c.model = value;
  } else if (key == "input") {
    c.input = value;
  } else if (key == "output") {
    c.output = value;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    try {
      set_config_value(c, trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  auto limit = [](int v) { return v < 0 ? std::string("unlimited") : std::to_string(v); };
  char margin[64];
  std::snprintf(margin, sizeof margin, "%.17g", c.beam_margin);
  std::string out;
  out += "prehead_order = " + std::to_string(c.prehead_order) + "\n";
  out += "max_depth = " + limit(c.max_depth) + "\n";
  out += "max_branching = " + limit(c.max_branching) + "\n";
  out += "max_open = " + limit(c.max_open) + "\n";
  out += "max_words = " + limit(c.max_words) + "\n";
  out += "min_freq = " + std::to_string(c.min_freq) + "\n";
  out += std::string("depth_mode = ") + (c.depth_mode == DepthMode::Flat ? "flat" : "head-outward") + "\n";
  out += std::string("markov = ") + (c.markov ? "true" : "false") + "\n";
  out += "unknown_threshold = " + std::to_string(c.unknown_threshold) + "\n";
  out += "beam_width = " + std::to_string(c.beam_width) + "\n";
  out += std::string("beam_margin = ") + margin + "\n";
  out += std::string("two_pass = ") + (c.two_pass ? "true" : "false") + "\n";
  out += "treebank = " + c.treebank + "\n";
  out += "model = " + c.model + "\n";
  out += "input = " + c.input + "\n";
  out += "output = " + c.output + "\n";
  return out;
}

}  // namespace tgram
