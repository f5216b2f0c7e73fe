#include "td/evaluate.hpp"

#include <algorithm>

namespace td {

int permutation_sign(const std::vector<int>& seq, int n) {
  if (static_cast<int>(seq.size()) != n)
    throw std::invalid_argument("permutation_sign: length " + std::to_string(seq.size()) +
                                " != n = " + std::to_string(n));
  for (int v : seq)
    if (v < 1 || v > n)
      throw std::invalid_argument("permutation_sign: entry " + std::to_string(v) +
                                  " out of 1.." + std::to_string(n));
  int inversions = 0;
  for (size_t i = 0; i < seq.size(); ++i)
    for (size_t j = i + 1; j < seq.size(); ++j) {
      if (seq[i] == seq[j]) return 0;
      if (seq[i] > seq[j]) ++inversions;
    }
  return inversions % 2 ? -1 : 1;
}

ContractionPlan contraction_plan(const DiagramGraph& g) {
  SegmentModel m = build_segments(g);
  ContractionPlan plan;

  for (const auto& ports : m.node_ports) plan.component_legs.push_back(ports);
  for (const auto& mk : m.markings) plan.component_legs.push_back({mk.out_seg, mk.in_seg});
  for (const auto& v : m.vectors) plan.component_legs.push_back({v.seg});
  for (const auto& pin : m.basis_pins) plan.component_legs.push_back({pin.first});

  // working copies; self-traces first
  std::vector<std::vector<int>> legs = plan.component_legs;
  std::vector<bool> alive(legs.size(), true);
  for (size_t i = 0; i < legs.size(); ++i) {
    std::vector<int> dups, once;
    for (int s : legs[i]) {
      if (std::count(legs[i].begin(), legs[i].end(), s) > 1) {
        if (std::find(dups.begin(), dups.end(), s) == dups.end()) dups.push_back(s);
      } else {
        once.push_back(s);
      }
    }
    int arity = static_cast<int>(legs[i].size());
    for (int s : dups) {
      arity -= 2;
      plan.steps.push_back({s, static_cast<int>(i), static_cast<int>(i), arity});
    }
    legs[i] = once;
    plan.max_intermediate_arity =
        std::max(plan.max_intermediate_arity, static_cast<int>(legs[i].size()));
  }

  auto shared_of = [&](size_t a, size_t b) {
    std::vector<int> sh;
    for (int s : legs[a])
      if (std::find(legs[b].begin(), legs[b].end(), s) != legs[b].end()) sh.push_back(s);
    return sh;
  };

  int alive_count = static_cast<int>(std::count(alive.begin(), alive.end(), true));
  while (alive_count >= 2) {
    int best_a = -1, best_b = -1, best_arity = INT32_MAX;
    for (size_t a = 0; a < legs.size(); ++a) {
      if (!alive[a]) continue;
      for (size_t b = a + 1; b < legs.size(); ++b) {
        if (!alive[b]) continue;
        int shared = static_cast<int>(shared_of(a, b).size());
        int arity = static_cast<int>(legs[a].size() + legs[b].size()) - 2 * shared;
        if (arity < best_arity) {
          best_arity = arity;
          best_a = static_cast<int>(a);
          best_b = static_cast<int>(b);
        }
      }
    }
    std::vector<int> sh = shared_of(best_a, best_b);
    std::sort(sh.begin(), sh.end());
    int arity = static_cast<int>(legs[best_a].size() + legs[best_b].size());
    if (sh.empty()) {
      plan.steps.push_back({-1, best_a, best_b, arity});
    } else {
      for (int s : sh) {
        arity -= 2;
        plan.steps.push_back({s, best_a, best_b, arity});
      }
    }
    std::vector<int> merged;
    for (int s : legs[best_a])
      if (std::find(sh.begin(), sh.end(), s) == sh.end()) merged.push_back(s);
    for (int s : legs[best_b])
      if (std::find(sh.begin(), sh.end(), s) == sh.end()) merged.push_back(s);
    alive[best_a] = alive[best_b] = false;
    legs.push_back(std::move(merged));
    alive.push_back(true);
    --alive_count;
    plan.max_intermediate_arity =
        std::max(plan.max_intermediate_arity, static_cast<int>(legs.back().size()));
  }
  return plan;
}

}  // namespace td
