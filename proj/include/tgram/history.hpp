#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tgram/fragment.hpp"

namespace tgram {

/// Conditioning context of one derivation step.
///
/// Head steps condition on (label, parent WSJ label). Dependent steps
/// condition on (label, head child WSJ label, remaining same-side subcat
/// frame, adjacency flag, adjacent sibling). `sibling` is empty when absent.
struct History {
  Role role = Role::Head;
  std::string label;
  std::string parent;
  std::string head;
  std::vector<std::string> frame;
  bool adjacent = false;
  std::string sibling;

  auto operator<=>(const History&) const = default;

  /// "A=NP P=S" or "A=S H=VP SC=NP F=1 M=-" (role is carried separately).
  std::string to_string() const;
  static History parse(Role role, std::string_view text);
};

History head_history(std::string label, std::string parent);
History dep_history(Role side, std::string label, std::string head, std::vector<std::string> frame,
                    bool adjacent, std::string sibling);

/// Keeps the adjacent-sibling label only under Markov conditioning and an
/// empty same-side frame.
History project(History history, bool markov);

}  // namespace tgram
