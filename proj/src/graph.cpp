#include "td/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

namespace td {

namespace {

std::string edge_where(int idx, int end) {
  return "edge " + std::to_string(idx) + (end == 0 ? " end1" : " end2");
}

void check_attachment(const DiagramGraph& g, const Attachment& a, int edge_idx, int end,
                      ValidationReport& rep) {
  if (const auto* np = std::get_if<NodePort>(&a)) {
    if (np->node < 0 || np->node >= g.node_count)
      rep.faults.push_back({"unknown node", edge_where(edge_idx, end)});
    else if (np->slot < 0 || np->slot >= g.dim)
      rep.faults.push_back({"port slot out of range", edge_where(edge_idx, end)});
  } else if (const auto* bl = std::get_if<BasisLabel>(&a)) {
    if (bl->label < 1 || bl->label > g.dim)
      rep.faults.push_back({"basis label out of range", edge_where(edge_idx, end)});
  } else if (const auto* fo = std::get_if<FreeOutput>(&a)) {
    if (fo->slot < 1) rep.faults.push_back({"output slot out of range", edge_where(edge_idx, end)});
  } else if (const auto* vi = std::get_if<VectorInput>(&a)) {
    if (vi->slot < 1) rep.faults.push_back({"input slot out of range", edge_where(edge_idx, end)});
    else if (vi->name.empty())
      rep.faults.push_back({"empty vector name", edge_where(edge_idx, end)});
  }
}

void check_slot_set(const std::multiset<int>& slots, const char* kind_dup, const char* kind_gap,
                    ValidationReport& rep, const char* what) {
  int expect = 1;
  for (int s : slots) {
    if (slots.count(s) > 1) {
      rep.faults.push_back({kind_dup, std::string(what) + " slot " + std::to_string(s)});
      return;
    }
    if (s != expect) {
      rep.faults.push_back({kind_gap, std::string(what) + " slot " + std::to_string(s)});
      return;
    }
    ++expect;
  }
}

}  // namespace

ValidationReport validate(const DiagramGraph& g) {
  ValidationReport rep;
  if (g.dim < 1) {
    rep.faults.push_back({"bad dimension", "dim = " + std::to_string(g.dim)});
    rep.ok = false;
    return rep;
  }
  // port occupancy: node -> slot -> use count
  std::vector<std::vector<int>> uses(g.node_count, std::vector<int>(g.dim, 0));
  std::multiset<int> out_slots;
  std::multiset<int> in_slots;
  for (size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    if (e.closed) continue;
    const Attachment* ends[2] = {&e.end1, &e.end2};
    for (int k = 0; k < 2; ++k) {
      check_attachment(g, *ends[k], static_cast<int>(i), k, rep);
      if (const auto* np = std::get_if<NodePort>(ends[k])) {
        if (np->node >= 0 && np->node < g.node_count && np->slot >= 0 && np->slot < g.dim)
          ++uses[np->node][np->slot];
      } else if (const auto* fo = std::get_if<FreeOutput>(ends[k])) {
        out_slots.insert(fo->slot);
      } else if (const auto* vi = std::get_if<VectorInput>(ends[k])) {
        in_slots.insert(vi->slot);
      }
    }
  }
  for (int nd = 0; nd < g.node_count; ++nd) {
    for (int s = 0; s < g.dim; ++s) {
      if (uses[nd][s] == 0)
        rep.faults.push_back(
            {"degree mismatch", "node " + std::to_string(nd) + " slot " + std::to_string(s)});
      else if (uses[nd][s] > 1)
        rep.faults.push_back(
            {"port multiply used", "node " + std::to_string(nd) + " slot " + std::to_string(s)});
    }
  }
  check_slot_set(out_slots, "duplicate output slot", "output slots not contiguous", rep, "output");
  check_slot_set(in_slots, "duplicate input slot", "input slots not contiguous", rep, "input");
  rep.ok = rep.faults.empty();
  return rep;
}

int output_arity(const DiagramGraph& g) {
  int d = 0;
  for (const Edge& e : g.edges) {
    if (e.closed) continue;
    for (const Attachment* a : {&e.end1, &e.end2})
      if (const auto* fo = std::get_if<FreeOutput>(a)) d = std::max(d, fo->slot);
  }
  return d;
}

DiagramGraph GraphBuilder::build() const {
  ValidationReport rep = validate(g_);
  if (!rep.ok)
    throw std::invalid_argument("invalid diagram: " + rep.faults[0].kind + " at " +
                                rep.faults[0].where);
  return g_;
}

namespace {

// reversal of an open edge (or reflection of a loop)
Edge flipped(const Edge& e) {
  Edge r = e;
  if (!e.closed) std::swap(r.end1, r.end2);
  std::reverse(r.markings.begin(), r.markings.end());
  for (Marking& m : r.markings) m.input_at_end1 = !m.input_at_end1;
  return r;
}

Edge rotated_loop(const Edge& e, int start) {
  Edge r = e;
  std::rotate(r.markings.begin(), r.markings.begin() + start, r.markings.end());
  return r;
}

// loops carry no anchor, so pick the least representation over all
// rotations and both orientations; the unused end fields are reset
Edge normalize_loop(const Edge& e) {
  Edge scrubbed = e;
  scrubbed.end1 = {};
  scrubbed.end2 = {};
  Edge best = scrubbed;
  auto key = [](const Edge& x) {
    std::vector<std::pair<std::string, bool>> k;
    for (const Marking& m : x.markings) k.emplace_back(m.matrix, m.input_at_end1);
    return k;
  };
  auto best_key = key(best);
  const size_t cnt = e.markings.size();
  for (int refl = 0; refl < 2; ++refl) {
    Edge base = refl ? flipped(scrubbed) : scrubbed;
    for (size_t s = 0; s < std::max<size_t>(cnt, 1); ++s) {
      Edge cand = cnt ? rotated_loop(base, static_cast<int>(s)) : base;
      auto ck = key(cand);
      if (ck < best_key) {
        best = cand;
        best_key = ck;
      }
    }
  }
  return best;
}

struct EndRef {
  int edge;
  int end;  // 0 = end1, 1 = end2
};

// Deterministic traversal engine. Given visited flags and a seed dart it
// discovers edges/nodes in a fixed order: an entered edge is oriented by
// its entry end, nodes expand their ports in slot order.
struct Traverser {
  const DiagramGraph& g;
  const std::vector<std::vector<EndRef>>& ports;
  std::vector<int>& edge_pos;  // -1 = unvisited; else visit index
  std::vector<int>& node_pos;
  std::vector<int>& edge_entry;
  std::vector<int> edge_order, node_order;

  std::deque<EndRef> pending;
  std::deque<int> pending_nodes;
  int next_node = 0;  // next node id to hand out

  void reach_node(int nd) {
    if (nd < 0 || nd >= g.node_count || node_pos[nd] != -1) return;
    node_pos[nd] = next_node++;
    node_order.push_back(nd);
    pending_nodes.push_back(nd);
  }

  void visit_edge(EndRef entry) {
    if (entry.edge < 0 || edge_pos[entry.edge] != -1) return;
    edge_pos[entry.edge] = static_cast<int>(edge_order.size());
    edge_order.push_back(entry.edge);
    edge_entry[entry.edge] = entry.end;
    const Edge& e = g.edges[entry.edge];
    if (e.closed) return;
    const Attachment* near = (entry.end == 0) ? &e.end1 : &e.end2;
    const Attachment* far = (entry.end == 0) ? &e.end2 : &e.end1;
    if (const auto* np = std::get_if<NodePort>(near)) reach_node(np->node);
    if (const auto* np = std::get_if<NodePort>(far)) reach_node(np->node);
  }

  void drain() {
    while (!pending.empty() || !pending_nodes.empty()) {
      if (!pending.empty()) {
        EndRef er = pending.front();
        pending.pop_front();
        visit_edge(er);
        continue;
      }
      int nd = pending_nodes.front();
      pending_nodes.pop_front();
      for (int s = 0; s < g.dim; ++s)
        if (ports[nd][s].edge >= 0) pending.push_back(ports[nd][s]);
    }
  }

  void run_from(EndRef seed) {
    visit_edge(seed);
    drain();
  }
};

std::string attachment_key(const Attachment& a, const std::vector<int>& node_pos) {
  if (const auto* np = std::get_if<NodePort>(&a))
    return "N" + std::to_string(node_pos[np->node]) + "." + std::to_string(np->slot);
  if (const auto* vi = std::get_if<VectorInput>(&a))
    return "V" + std::to_string(vi->slot) + "." + vi->name;
  if (const auto* bl = std::get_if<BasisLabel>(&a)) return "B" + std::to_string(bl->label);
  const auto* fo = std::get_if<FreeOutput>(&a);
  return "O" + std::to_string(fo->slot);
}

// entries[i] orients edge_order[i] (1 = entered at end2)
std::string edge_list_key(const DiagramGraph& g, const std::vector<int>& edge_order,
                          const std::vector<int>& entries, const std::vector<int>& node_pos) {
  std::string key;
  for (size_t i = 0; i < edge_order.size(); ++i) {
    int idx = edge_order[i];
    Edge e = (entries[i] == 1) ? flipped(g.edges[idx]) : g.edges[idx];
    if (e.closed) e = normalize_loop(e);
    key += e.closed ? "L" : ("E" + attachment_key(e.end1, node_pos) + ">" +
                             attachment_key(e.end2, node_pos));
    for (const Marking& m : e.markings)
      key += ";" + m.matrix + (m.input_at_end1 ? "+" : "-");
    key += "|";
  }
  return key;
}

}  // namespace

DiagramGraph canonicalize(const DiagramGraph& g) {
  const int ne = static_cast<int>(g.edges.size());
  std::vector<int> edge_pos(ne, -1), edge_entry(ne, 0), node_pos(g.node_count, -1);

  std::vector<std::vector<EndRef>> ports(g.node_count, std::vector<EndRef>(g.dim, {-1, -1}));
  for (int i = 0; i < ne; ++i) {
    const Edge& e = g.edges[i];
    if (e.closed) continue;
    const Attachment* ends[2] = {&e.end1, &e.end2};
    for (int k = 0; k < 2; ++k)
      if (const auto* np = std::get_if<NodePort>(ends[k]))
        if (np->node >= 0 && np->node < g.node_count && np->slot >= 0 && np->slot < g.dim)
          ports[np->node][np->slot] = {i, k};
  }

  Traverser tr{g, ports, edge_pos, node_pos, edge_entry, {}, {}, {}, {}, 0};

  // terminal-anchored part: outputs by slot, inputs by slot, then basis
  // terminals by label. Equal labels carry no intrinsic order, so within
  // a label the seed whose traversal encoding is least runs first; this
  // keeps the result independent of edge insertion order.
  std::map<int, EndRef> out_seeds, in_seeds;
  std::map<int, std::vector<EndRef>> basis_groups;
  for (int i = 0; i < ne; ++i) {
    const Edge& e = g.edges[i];
    if (e.closed) continue;
    const Attachment* ends[2] = {&e.end1, &e.end2};
    for (int k = 0; k < 2; ++k) {
      if (const auto* fo = std::get_if<FreeOutput>(ends[k]))
        out_seeds.emplace(fo->slot, EndRef{i, k});
      if (const auto* vi = std::get_if<VectorInput>(ends[k]))
        in_seeds.emplace(vi->slot, EndRef{i, k});
      if (const auto* bl = std::get_if<BasisLabel>(ends[k]))
        basis_groups[bl->label].push_back({i, k});
    }
  }
  for (auto& [slot, er] : out_seeds) tr.run_from(er);
  for (auto& [slot, er] : in_seeds) tr.run_from(er);
  for (auto& [label, seeds] : basis_groups) {
    while (true) {
      bool have = false;
      EndRef best{-1, -1};
      std::string best_key;
      for (EndRef er : seeds) {
        if (edge_pos[er.edge] != -1) continue;
        std::vector<int> cand_edge_pos = edge_pos, cand_node_pos = node_pos,
                         cand_entry = edge_entry;
        Traverser cand{g,  ports, cand_edge_pos, cand_node_pos, cand_entry,
                       {}, {},    {},            {},            tr.next_node};
        cand.run_from(er);
        std::vector<int> aligned;
        for (int eo : cand.edge_order) aligned.push_back(cand_entry[eo]);
        std::string key = edge_list_key(g, cand.edge_order, aligned, cand_node_pos);
        if (!have || key < best_key) {
          best = er;
          best_key = key;
          have = true;
        }
      }
      if (!have) break;
      tr.run_from(best);
    }
  }

  // terminal-free leftovers: each connected component is oriented by the
  // dart whose traversal encoding is least, then components are appended
  // in encoding order (relabeling-invariant structural equality)
  struct Piece {
    std::string key;
    std::vector<int> edge_order, node_order;
    std::vector<int> entry;  // per edge in edge_order
  };
  std::vector<Piece> pieces;
  std::vector<bool> in_piece(ne, false);
  for (int i = 0; i < ne; ++i) {
    if (edge_pos[i] != -1 || in_piece[i]) continue;
    if (g.edges[i].closed) {
      Piece p;
      p.edge_order = {i};
      p.entry = {0};
      p.key = edge_list_key(g, p.edge_order, {0}, node_pos);
      in_piece[i] = true;
      pieces.push_back(std::move(p));
      continue;
    }
    // discover component membership with a scratch traversal
    std::vector<int> probe_edge_pos = edge_pos, probe_node_pos = node_pos,
                     probe_entry = edge_entry;
    Traverser probe{g,  ports, probe_edge_pos, probe_node_pos, probe_entry,
                    {}, {},    {},             {},             tr.next_node};
    probe.run_from({i, 0});
    std::vector<int> members = probe.edge_order;
    for (int m : members) in_piece[m] = true;

    Piece best;
    bool have = false;
    for (int member : members) {
      for (int end = 0; end < 2; ++end) {
        std::vector<int> cand_edge_pos = edge_pos, cand_node_pos = node_pos,
                         cand_entry = edge_entry;
        Traverser cand{g,  ports, cand_edge_pos, cand_node_pos, cand_entry,
                       {}, {},    {},            {},            tr.next_node};
        cand.run_from({member, end});
        std::vector<int> aligned;
        for (int eo : cand.edge_order) aligned.push_back(cand_entry[eo]);
        std::string key = edge_list_key(g, cand.edge_order, aligned, cand_node_pos);
        if (!have || key < best.key) {
          best.key = key;
          best.edge_order = cand.edge_order;
          best.node_order = cand.node_order;
          best.entry.clear();
          for (int eo : cand.edge_order) best.entry.push_back(cand_entry[eo]);
          have = true;
        }
      }
    }
    pieces.push_back(std::move(best));
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& a, const Piece& b) { return a.key < b.key; });

  // commit pieces after the anchored part
  std::vector<int> final_edges;
  std::vector<int> final_entry;
  for (int i = 0; i < ne; ++i)
    if (edge_pos[i] != -1) final_edges.push_back(i);
  std::sort(final_edges.begin(), final_edges.end(),
            [&](int a, int b) { return edge_pos[a] < edge_pos[b]; });
  for (int e : final_edges) final_entry.push_back(edge_entry[e]);
  for (const Piece& p : pieces) {
    for (size_t i = 0; i < p.edge_order.size(); ++i) {
      final_edges.push_back(p.edge_order[i]);
      final_entry.push_back(p.entry[i]);
    }
    for (int nd : p.node_order)
      if (node_pos[nd] == -1) node_pos[nd] = tr.next_node++;
  }

  DiagramGraph out;
  out.dim = g.dim;
  out.node_count = g.node_count;
  out.edges.reserve(g.edges.size());
  for (size_t i = 0; i < final_edges.size(); ++i) {
    Edge e = (final_entry[i] == 1) ? flipped(g.edges[final_edges[i]]) : g.edges[final_edges[i]];
    if (e.closed) {
      out.edges.push_back(normalize_loop(e));
      continue;
    }
    for (Attachment* a : {&e.end1, &e.end2})
      if (auto* np = std::get_if<NodePort>(a))
        if (np->node >= 0 && np->node < g.node_count && node_pos[np->node] != -1)
          np->node = node_pos[np->node];
    out.edges.push_back(std::move(e));
  }
  return out;
}

bool canonical_equal(const DiagramGraph& a, const DiagramGraph& b) {
  return canonicalize(a) == canonicalize(b);
}

DiagramGraph disjoint_union(const DiagramGraph& g1, const DiagramGraph& g2) {
  if (g1.dim != g2.dim) throw std::invalid_argument("disjoint_union: dimension mismatch");
  int d1 = output_arity(g1);
  int v1 = 0;
  for (const Edge& e : g1.edges) {
    if (e.closed) continue;
    for (const Attachment* a : {&e.end1, &e.end2})
      if (const auto* vi = std::get_if<VectorInput>(a)) v1 = std::max(v1, vi->slot);
  }
  DiagramGraph out = g1;
  out.node_count = g1.node_count + g2.node_count;
  for (Edge e : g2.edges) {
    if (!e.closed) {
      for (Attachment* a : {&e.end1, &e.end2}) {
        if (auto* np = std::get_if<NodePort>(a)) np->node += g1.node_count;
        if (auto* fo = std::get_if<FreeOutput>(a)) fo->slot += d1;
        if (auto* vi = std::get_if<VectorInput>(a)) vi->slot += v1;
      }
    }
    out.edges.push_back(std::move(e));
  }
  return out;
}

DiagramGraph shuffle_ids(const DiagramGraph& g, uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto rnd = [&](int bound) { return static_cast<int>(rng() % static_cast<uint64_t>(bound)); };

  std::vector<int> node_perm(g.node_count);
  for (int i = 0; i < g.node_count; ++i) node_perm[i] = i;
  for (int i = g.node_count - 1; i > 0; --i) std::swap(node_perm[i], node_perm[rnd(i + 1)]);

  std::vector<int> edge_perm(g.edges.size());
  for (size_t i = 0; i < edge_perm.size(); ++i) edge_perm[i] = static_cast<int>(i);
  for (int i = static_cast<int>(edge_perm.size()) - 1; i > 0; --i)
    std::swap(edge_perm[i], edge_perm[rnd(i + 1)]);

  DiagramGraph out;
  out.dim = g.dim;
  out.node_count = g.node_count;
  for (int old_idx : edge_perm) {
    Edge e = g.edges[old_idx];
    if (e.closed) {
      if (!e.markings.empty())
        e = rotated_loop(e, rnd(static_cast<int>(e.markings.size())));
      if (rng() & 1) e = flipped(e);
      out.edges.push_back(std::move(e));
      continue;
    }
    if (rng() & 1) e = flipped(e);
    for (Attachment* a : {&e.end1, &e.end2})
      if (auto* np = std::get_if<NodePort>(a)) np->node = node_perm[np->node];
    out.edges.push_back(std::move(e));
  }
  return out;
}

DiagramGraph at_dim(const DiagramGraph& g, int n) {
  if (g.dim == n) return g;
  if (g.node_count > 0)
    throw std::invalid_argument("at_dim: diagram has nodes, dimension is fixed at " +
                                std::to_string(g.dim));
  for (const Edge& e : g.edges) {
    if (e.closed) continue;
    for (const Attachment* a : {&e.end1, &e.end2})
      if (const auto* bl = std::get_if<BasisLabel>(a))
        if (bl->label > n)
          throw std::invalid_argument("at_dim: basis label " + std::to_string(bl->label) +
                                      " exceeds dimension " + std::to_string(n));
  }
  DiagramGraph out = g;
  out.dim = n;
  return out;
}

DiagramGraph rotate_ciliation(const DiagramGraph& g, int node, int steps) {
  if (node < 0 || node >= g.node_count)
    throw std::invalid_argument("rotate_ciliation: unknown node id " + std::to_string(node));
  DiagramGraph out = g;
  int n = g.dim;
  int shift = ((steps % n) + n) % n;
  for (Edge& e : out.edges) {
    if (e.closed) continue;
    for (Attachment* a : {&e.end1, &e.end2})
      if (auto* np = std::get_if<NodePort>(a))
        if (np->node == node) np->slot = ((np->slot - shift) % n + n) % n;
  }
  return out;
}

}  // namespace td
