#include "tgram/history.hpp"

#include <sstream>
#include <stdexcept>

namespace tgram {

namespace {

std::string or_dash(const std::string& s) { return s.empty() ? "-" : s; }

std::string undash(std::string_view s) { return s == "-" ? std::string() : std::string(s); }

}  // namespace

std::string History::to_string() const {
  if (role == Role::Head) return "A=" + label + " P=" + or_dash(parent);
  std::string sc;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if (i) sc += ',';
    sc += frame[i];
  }
  return "A=" + label + " H=" + head + " SC=" + or_dash(sc) + " F=" + (adjacent ? "1" : "0") +
         " M=" + or_dash(sibling);
}

History History::parse(Role role, std::string_view text) {
  History h;
  h.role = role;
  std::istringstream in{std::string(text)};
  std::string field;
  while (in >> field) {
    auto eq = field.find('=');
    if (eq == std::string::npos) throw std::runtime_error("malformed history field '" + field + "'");
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (key == "A") {
      h.label = value;
    } else if (key == "P") {
      h.parent = undash(value);
    } else if (key == "H") {
      h.head = value;
    } else if (key == "SC") {
      if (value != "-") {
        std::size_t start = 0;
        for (std::size_t i = 0; i <= value.size(); ++i)
          if (i == value.size() || value[i] == ',') {
            h.frame.push_back(value.substr(start, i - start));
            start = i + 1;
          }
      }
    } else if (key == "F") {
      h.adjacent = value == "1";
    } else if (key == "M") {
      h.sibling = undash(value);
    } else {
      throw std::runtime_error("unknown history field '" + key + "'");
    }
  }
  return h;
}

History head_history(std::string label, std::string parent) {
  History h;
  h.role = Role::Head;
  h.label = std::move(label);
  h.parent = std::move(parent);
  return h;
}

History dep_history(Role side, std::string label, std::string head, std::vector<std::string> frame,
                    bool adjacent, std::string sibling) {
  if (side == Role::Head) throw std::invalid_argument("dependent history needs a side");
  History h;
  h.role = side;
  h.label = std::move(label);
  h.head = std::move(head);
  h.frame = std::move(frame);
  h.adjacent = adjacent;
  h.sibling = std::move(sibling);
  return h;
}

History project(History history, bool markov) {
  if (history.role != Role::Head && (!markov || !history.frame.empty())) history.sibling.clear();
  return history;
}

}  // namespace tgram
