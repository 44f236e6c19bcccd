#pragma once

#include <map>
#include <string>
#include <vector>

#include "bienforce/values.hpp"

namespace bienforce {

/// A finite labelled transition system over Act ∪ {tau}. States carry their
/// canonical term text as a label; transitions are kept sorted and deduped.
struct Lts {
  int initial = 0;
  std::vector<std::string> labels;
  std::vector<std::vector<std::pair<ExplicitAction, int>>> succ;

  int state_count() const { return static_cast<int>(labels.size()); }
  int transition_count() const {
    int n = 0;
    for (const auto& s : succ) n += static_cast<int>(s.size());
    return n;
  }
};

}  // namespace bienforce
