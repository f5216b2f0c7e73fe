#include "td/segments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace td {

SegmentModel build_segments(const DiagramGraph& g) {
  ValidationReport rep = validate(g);
  if (!rep.ok)
    throw std::invalid_argument("build_segments on invalid diagram: " + rep.faults[0].kind);

  SegmentModel m;
  m.dim = g.dim;
  m.node_ports.assign(g.node_count, std::vector<int>(g.dim, -1));
  m.outputs.assign(output_arity(g), -1);

  auto attach = [&](const Attachment& a, int seg) {
    if (const auto* np = std::get_if<NodePort>(&a)) {
      m.node_ports[np->node][np->slot] = seg;
    } else if (const auto* vi = std::get_if<VectorInput>(&a)) {
      m.vectors.push_back({vi->name, vi->slot, seg});
    } else if (const auto* bl = std::get_if<BasisLabel>(&a)) {
      m.basis_pins.emplace_back(seg, bl->label);
    } else if (const auto* fo = std::get_if<FreeOutput>(&a)) {
      m.outputs[fo->slot - 1] = seg;
    }
  };

  for (const Edge& e : g.edges) {
    const int k = static_cast<int>(e.markings.size());
    if (e.closed) {
      if (k == 0) {
        ++m.bare_loops;
        continue;
      }
      // segment i lies between marking i and marking i+1 (cyclically)
      int first = m.count;
      m.count += k;
      for (int i = 0; i < k; ++i) {
        int prev = first + ((i - 1 + k) % k);
        int next = first + i;
        const Marking& mk = e.markings[i];
        if (mk.input_at_end1)
          m.markings.push_back({mk.matrix, next, prev});
        else
          m.markings.push_back({mk.matrix, prev, next});
      }
    } else {
      // k+1 segments from end1 to end2; marking i sits between i and i+1
      int first = m.count;
      m.count += k + 1;
      attach(e.end1, first);
      attach(e.end2, first + k);
      for (int i = 0; i < k; ++i) {
        const Marking& mk = e.markings[i];
        if (mk.input_at_end1)
          m.markings.push_back({mk.matrix, first + i + 1, first + i});
        else
          m.markings.push_back({mk.matrix, first + i, first + i + 1});
      }
    }
  }
  std::sort(m.vectors.begin(), m.vectors.end(),
            [](const SegmentModel::Vec& a, const SegmentModel::Vec& b) { return a.slot < b.slot; });
  return m;
}

double enumerative_cost(const DiagramGraph& g) {
  SegmentModel m = build_segments(g);
  std::vector<bool> external(m.count, false);
  for (int s : m.outputs) external[s] = true;
  int internal = m.bare_loops;
  for (int s = 0; s < m.count; ++s)
    if (!external[s]) ++internal;
  return std::pow(static_cast<double>(g.dim), internal);
}

}  // namespace td
