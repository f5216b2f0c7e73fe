#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "td/environment.hpp"
#include "td/expression.hpp"
#include "td/graph.hpp"
#include "td/segments.hpp"
#include "td/tensor.hpp"

namespace td {

// Sign of the permutation i -> seq[i], or 0 when a value repeats.
// Entries must lie in 1..n with seq.size() == n.
int permutation_sign(const std::vector<int>& seq, int n);

// Levi-Civita tensor in ciliation order: entry (l_1..l_n) is
// permutation_sign(l_1..l_n).
template <class S>
Tensor<S> node_tensor(int n) {
  Tensor<S> t(n, n);
  std::vector<int> idx(n, 1);
  size_t off = 0;
  do {
    int sg = permutation_sign(idx, n);
    if (sg == 1)
      t.entries()[off] = Field<S>::one();
    else if (sg == -1)
      t.entries()[off] = -Field<S>::one();
    ++off;
  } while (Tensor<S>::next_index(idx, n));
  return t;
}

enum class Evaluator { kEnumerative, kContracted };

namespace detail {

template <class S>
void require_bindings(const DiagramGraph& g, const Environment<S>& env) {
  if (env.dim != g.dim)
    throw BindingError("environment dimension " + std::to_string(env.dim) +
                       " does not match diagram dimension " + std::to_string(g.dim));
  for (const Edge& e : g.edges) {
    for (const Marking& m : e.markings) env.matrix(m.matrix);
    if (e.closed) continue;
    for (const Attachment* a : {&e.end1, &e.end2})
      if (const auto* vi = std::get_if<VectorInput>(a)) env.vector(vi->name);
  }
}

// labels: 0 = free, else fixed 1..n. Returns false when pins conflict.
inline bool merge_pins(const SegmentModel& m, std::vector<int>& labels) {
  labels.assign(m.count, 0);
  for (auto& [seg, lab] : m.basis_pins) {
    if (labels[seg] != 0 && labels[seg] != lab) return false;
    labels[seg] = lab;
  }
  return true;
}

// Sum over all labelings of the free segments (odometer in segment-id
// order) of the signed product of matrix, vector and node factors.
template <class S>
S labeling_sum(const SegmentModel& m, const Environment<S>& env, std::vector<int>& labels,
               const std::vector<int>& free_segs, int first_lo, int first_hi) {
  const int n = m.dim;
  S total = Field<S>::zero();
  if (!free_segs.empty()) {
    for (int s : free_segs) labels[s] = 1;
    labels[free_segs[0]] = first_lo;
  } else if (first_lo > 1) {
    return total;  // no free segments: the single labeling belongs to chunk 1
  }
  while (true) {
    S term = Field<S>::one();
    bool dead = false;
    for (const auto& ports : m.node_ports) {
      int sg;
      {
        // inline sign of the port labels
        int inv = 0;
        bool rep = false;
        for (size_t i = 0; i < ports.size() && !rep; ++i) {
          for (size_t j = i + 1; j < ports.size(); ++j) {
            int a = labels[ports[i]], b = labels[ports[j]];
            if (a == b) {
              rep = true;
              break;
            }
            if (a > b) ++inv;
          }
        }
        sg = rep ? 0 : (inv % 2 ? -1 : 1);
      }
      if (sg == 0) {
        dead = true;
        break;
      }
      if (sg < 0) term = -term;
    }
    if (!dead) {
      for (const auto& mk : m.markings) {
        term *= env.matrix(mk.matrix)[labels[mk.out_seg] - 1][labels[mk.in_seg] - 1];
        if (Field<S>::is_zero(term)) {
          dead = true;
          break;
        }
      }
    }
    if (!dead) {
      for (const auto& v : m.vectors) {
        term *= env.vector(v.name)[labels[v.seg] - 1];
        if (Field<S>::is_zero(term)) break;
      }
      total += term;
    }
    // advance odometer; the first free segment only runs first_lo..first_hi
    int i = static_cast<int>(free_segs.size()) - 1;
    for (; i >= 0; --i) {
      int s = free_segs[i];
      int hi = (i == 0) ? first_hi : n;
      if (labels[s] < hi) {
        ++labels[s];
        break;
      }
      labels[s] = (i == 0) ? first_lo : 1;
    }
    if (i < 0) break;
  }
  return total;
}

template <class S>
S enumerate_cell(const SegmentModel& m, const Environment<S>& env,
                 const std::vector<int>& pinned, const std::vector<int>& out_idx, int workers) {
  std::vector<int> labels = pinned;
  for (size_t slot = 0; slot < m.outputs.size(); ++slot) {
    int s = m.outputs[slot];
    if (labels[s] != 0 && labels[s] != out_idx[slot]) return Field<S>::zero();
    labels[s] = out_idx[slot];
  }
  std::vector<int> free_segs;
  for (int s = 0; s < m.count; ++s)
    if (labels[s] == 0) free_segs.push_back(s);

  if (workers <= 1 || free_segs.empty() || m.dim == 1) {
    std::vector<int> work = labels;
    return labeling_sum(m, env, work, free_segs, 1, m.dim);
  }
  // split the first free segment's range across workers, reduce in order
  int w = std::min(workers, m.dim);
  std::vector<S> partial(w, Field<S>::zero());
  std::vector<std::thread> threads;
  for (int t = 0; t < w; ++t) {
    int lo = 1 + t * m.dim / w, hi = (t + 1) * m.dim / w;
    threads.emplace_back([&, t, lo, hi] {
      std::vector<int> work = labels;
      partial[t] = labeling_sum(m, env, work, free_segs, lo, hi);
    });
  }
  for (auto& th : threads) th.join();
  S total = Field<S>::zero();
  for (S& p : partial) total += p;
  return total;
}

}  // namespace detail

// Direct implementation of the two-step basis-diagram process: sum over
// labelings of every internal segment, each labeling contributing the
// signed product of matrix entries, vector entries and node signs. Cost is
// dim^(free segments) per output cell.
template <class S>
Tensor<S> evaluate_enumerative(const DiagramGraph& g, const Environment<S>& env, int workers = 1) {
  detail::require_bindings(g, env);
  SegmentModel m = build_segments(g);
  const int d = static_cast<int>(m.outputs.size());
  Tensor<S> result(g.dim, d);
  std::vector<int> pinned;
  if (!detail::merge_pins(m, pinned)) return result;  // contradictory labels: zero

  const S loop_factor = Field<S>::from_int(g.dim);
  auto apply_loops = [&](S v) {
    for (int i = 0; i < m.bare_loops; ++i) v *= loop_factor;
    return v;
  };

  if (d == 0) {
    result.entries()[0] = apply_loops(detail::enumerate_cell(m, env, pinned, {}, workers));
    return result;
  }
  const size_t cells = result.entries().size();
  if (workers <= 1 || cells == 1) {
    std::vector<int> idx(d, 1);
    size_t off = 0;
    do {
      result.entries()[off++] = apply_loops(detail::enumerate_cell(m, env, pinned, idx, 1));
    } while (Tensor<S>::next_index(idx, g.dim));
    return result;
  }
  // one chunk of output cells per worker; entries land at fixed offsets
  int w = static_cast<int>(std::min<size_t>(workers, cells));
  std::vector<std::thread> threads;
  for (int t = 0; t < w; ++t) {
    size_t lo = t * cells / w, hi = (t + 1) * cells / w;
    threads.emplace_back([&, lo, hi] {
      std::vector<int> idx(d, 1);
      // position the odometer at cell `lo`
      size_t rem = lo;
      for (int i = d - 1; i >= 0; --i) {
        idx[i] = 1 + static_cast<int>(rem % g.dim);
        rem /= g.dim;
      }
      for (size_t off = lo; off < hi; ++off) {
        result.entries()[off] = apply_loops(detail::enumerate_cell(m, env, pinned, idx, 1));
        Tensor<S>::next_index(idx, g.dim);
      }
    });
  }
  for (auto& th : threads) th.join();
  return result;
}

// One per-segment contraction step; a == b marks a self-trace on a single
// component (a node or marking touching the same segment twice).
struct ContractionStep {
  int seg = -1;  // -1: disconnected-piece product
  int a = 0;
  int b = 0;
  int arity_after = 0;
};

struct ContractionPlan {
  std::vector<std::vector<int>> component_legs;  // initial components, duplicates included
  std::vector<ContractionStep> steps;
  int max_intermediate_arity = 0;
};

// Greedy pairwise plan: repeatedly contract the pair of incident tensors
// minimizing the arity of the intermediate result, ties broken by lowest
// component id. Every internal segment is contracted exactly once.
ContractionPlan contraction_plan(const DiagramGraph& g);

namespace detail {

template <class S>
struct Component {
  Tensor<S> t;
  std::vector<int> legs;
};

// contracts legs that appear twice within one component (self-loops)
template <class S>
Component<S> self_trace(const Component<S>& c, int dim) {
  std::vector<int> keep;  // legs appearing exactly once, in order
  for (int s : c.legs)
    if (std::count(c.legs.begin(), c.legs.end(), s) == 1) keep.push_back(s);
  if (keep.size() == c.legs.size()) return c;
  Component<S> r{Tensor<S>(dim, static_cast<int>(keep.size())), keep};
  std::vector<int> idx(c.legs.size(), 1);
  do {
    bool diag = true;
    for (size_t i = 0; i < c.legs.size() && diag; ++i)
      for (size_t j = i + 1; j < c.legs.size(); ++j)
        if (c.legs[i] == c.legs[j] && idx[i] != idx[j]) {
          diag = false;
          break;
        }
    if (diag) {
      std::vector<int> ridx(keep.size());
      for (size_t i = 0; i < keep.size(); ++i) {
        for (size_t j = 0; j < c.legs.size(); ++j)
          if (c.legs[j] == keep[i]) {
            ridx[i] = idx[j];
            break;
          }
      }
      r.t.at(ridx) += c.t.at(idx);
    }
  } while (Tensor<S>::next_index(idx, dim));
  return r;
}

// contracts all legs shared between a and b
template <class S>
Component<S> contract_pair(const Component<S>& a, const Component<S>& b, int dim) {
  std::vector<int> shared;
  for (int s : a.legs)
    if (std::find(b.legs.begin(), b.legs.end(), s) != b.legs.end()) shared.push_back(s);
  std::vector<int> out_legs;
  for (int s : a.legs)
    if (std::find(shared.begin(), shared.end(), s) == shared.end()) out_legs.push_back(s);
  for (int s : b.legs)
    if (std::find(shared.begin(), shared.end(), s) == shared.end()) out_legs.push_back(s);

  Component<S> r{Tensor<S>(dim, static_cast<int>(out_legs.size())), out_legs};
  std::vector<int> oidx(out_legs.size(), 1), sidx(shared.size(), 1);
  auto leg_value = [&](int leg) {
    for (size_t i = 0; i < shared.size(); ++i)
      if (shared[i] == leg) return sidx[i];
    for (size_t i = 0; i < out_legs.size(); ++i)
      if (out_legs[i] == leg) return oidx[i];
    return 1;
  };
  std::vector<int> aidx(a.legs.size()), bidx(b.legs.size());
  bool more_out = true;
  while (more_out) {
    S acc = Field<S>::zero();
    bool more_shared = true;
    for (auto& v : sidx) v = 1;
    while (more_shared) {
      for (size_t i = 0; i < a.legs.size(); ++i) aidx[i] = leg_value(a.legs[i]);
      for (size_t i = 0; i < b.legs.size(); ++i) bidx[i] = leg_value(b.legs[i]);
      acc += a.t.at(aidx) * b.t.at(bidx);
      more_shared = !shared.empty() && Tensor<S>::next_index(sidx, dim);
    }
    r.t.at(oidx) = acc;
    more_out = !out_legs.empty() && Tensor<S>::next_index(oidx, dim);
  }
  return r;
}

template <class S>
std::vector<Component<S>> build_components(const SegmentModel& m, const Environment<S>& env) {
  std::vector<Component<S>> comps;
  for (const auto& ports : m.node_ports)
    comps.push_back({node_tensor<S>(m.dim), ports});
  for (const auto& mk : m.markings) {
    Component<S> c{Tensor<S>(m.dim, 2), {mk.out_seg, mk.in_seg}};
    const auto& a = env.matrix(mk.matrix);
    std::vector<int> idx(2);
    for (idx[0] = 1; idx[0] <= m.dim; ++idx[0])
      for (idx[1] = 1; idx[1] <= m.dim; ++idx[1]) c.t.at(idx) = a[idx[0] - 1][idx[1] - 1];
    comps.push_back(std::move(c));
  }
  for (const auto& v : m.vectors) {
    Component<S> c{Tensor<S>(m.dim, 1), {v.seg}};
    const auto& vec = env.vector(v.name);
    for (int i = 1; i <= m.dim; ++i) c.t.at({i}) = vec[i - 1];
    comps.push_back(std::move(c));
  }
  for (auto& [seg, label] : m.basis_pins) {
    Component<S> c{Tensor<S>(m.dim, 1), {seg}};
    c.t.at({label}) = Field<S>::one();
    comps.push_back(std::move(c));
  }
  return comps;
}

}  // namespace detail

// Same semantics as evaluate_enumerative, via component tensors and the
// greedy contraction plan; exact on the rational backend.
template <class S>
Tensor<S> evaluate_contracted(const DiagramGraph& g, const Environment<S>& env) {
  detail::require_bindings(g, env);
  SegmentModel m = build_segments(g);
  ContractionPlan plan = contraction_plan(g);

  std::vector<std::optional<detail::Component<S>>> comps;
  for (auto& c : detail::build_components(m, env))
    comps.emplace_back(detail::self_trace(c, g.dim));

  // execute pair steps; consecutive steps over one pair collapse into a
  // single contraction over all their shared legs
  size_t i = 0;
  while (i < plan.steps.size()) {
    const auto& st = plan.steps[i];
    if (st.a == st.b) {  // self-trace already applied at build time
      ++i;
      continue;
    }
    size_t j = i;
    while (j < plan.steps.size() && plan.steps[j].a == st.a && plan.steps[j].b == st.b) ++j;
    auto merged = detail::contract_pair(*comps[st.a], *comps[st.b], g.dim);
    comps[st.a].reset();
    comps[st.b].reset();
    comps.emplace_back(std::move(merged));
    i = j;
  }

  detail::Component<S> final_c{Tensor<S>::scalar(g.dim, Field<S>::one()), {}};
  for (auto& c : comps)
    if (c.has_value()) final_c = detail::contract_pair(final_c, *c, g.dim);

  S scale = Field<S>::one();
  for (int l = 0; l < m.bare_loops; ++l) scale *= Field<S>::from_int(g.dim);

  const int d = static_cast<int>(m.outputs.size());
  Tensor<S> result(g.dim, d);
  if (d == 0) {
    result.entries()[0] = final_c.t.value() * scale;
    return result;
  }
  std::vector<int> idx(d, 1);
  do {
    // repeated segments across output slots act as deltas
    bool consistent = true;
    for (int s1 = 0; s1 < d && consistent; ++s1)
      for (int s2 = s1 + 1; s2 < d; ++s2)
        if (m.outputs[s1] == m.outputs[s2] && idx[s1] != idx[s2]) {
          consistent = false;
          break;
        }
    if (consistent) {
      std::vector<int> fidx(final_c.legs.size(), 1);
      for (size_t li = 0; li < final_c.legs.size(); ++li)
        for (int s = 0; s < d; ++s)
          if (m.outputs[s] == final_c.legs[li]) {
            fidx[li] = idx[s];
            break;
          }
      result.at(idx) = final_c.t.at(fidx) * scale;
    }
  } while (Tensor<S>::next_index(idx, g.dim));
  return result;
}

template <class S>
Tensor<S> evaluate(const DiagramGraph& g, const Environment<S>& env,
                   Evaluator which = Evaluator::kContracted, int workers = 1) {
  return which == Evaluator::kEnumerative ? evaluate_enumerative(g, env, workers)
                                          : evaluate_contracted(g, env);
}

// Coefficient-weighted sum of term evaluations; the empty expression is
// the zero tensor of the declared arity.
template <class S>
Tensor<S> evaluate_expression(const DiagramExpression& e, const Environment<S>& env,
                              Evaluator which = Evaluator::kContracted, int workers = 1) {
  int dim = e.dim > 0 ? e.dim : env.dim;
  Tensor<S> acc(dim, e.arity);
  for (const auto& [coeff, g] : e.terms) {
    Tensor<S> t = evaluate(g, env, which, workers);
    const S c = Field<S>::from_rational(coeff);
    for (size_t i = 0; i < acc.entries().size(); ++i) acc.entries()[i] += c * t.entries()[i];
  }
  return acc;
}

}  // namespace td
