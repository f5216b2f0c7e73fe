#include "td/wiring.hpp"

#include <algorithm>
#include <stdexcept>

#include "td/evaluate.hpp"

namespace td::wiring {

namespace {

struct Chain {
  Attachment bottom;
  std::vector<Marking> markings;  // bottom to top; input_at_end1 relative to bottom
};

struct Compiler {
  DiagramGraph g;
  std::vector<Chain> cur;
  int bottom_width;

  explicit Compiler(int width) : bottom_width(width) {
    g.dim = 2;
    for (int i = 0; i < width; ++i) cur.push_back({out(i + 1), {}});
  }

  void check_pos(int pos, int need) const {
    if (pos < 0 || pos + need > static_cast<int>(cur.size()))
      throw std::invalid_argument("wiring layer position out of range");
  }

  void finish_chain(Chain&& ch, Attachment top) {
    Edge e;
    e.end1 = std::move(ch.bottom);
    e.end2 = std::move(top);
    e.markings = std::move(ch.markings);
    g.edges.push_back(std::move(e));
  }

  void apply_swap_wiring(int pos) {
    check_pos(pos, 2);
    std::swap(cur[pos], cur[pos + 1]);
  }

  void apply_cap(int pos, CiliumSide side) {
    check_pos(pos, 2);
    int nd = g.node_count++;
    int slot_left = side == CiliumSide::kFirst ? 0 : 1;
    finish_chain(std::move(cur[pos]), port(nd, slot_left));
    finish_chain(std::move(cur[pos + 1]), port(nd, 1 - slot_left));
    cur.erase(cur.begin() + pos, cur.begin() + pos + 2);
  }

  void apply_cup(int pos, CiliumSide side) {
    if (pos < 0 || pos > static_cast<int>(cur.size()))
      throw std::invalid_argument("wiring layer position out of range");
    int nd = g.node_count++;
    int slot_left = side == CiliumSide::kFirst ? 0 : 1;
    Chain a{port(nd, slot_left), {}};
    Chain b{port(nd, 1 - slot_left), {}};
    cur.insert(cur.begin() + pos, {std::move(a), std::move(b)});
  }

  void apply_mat(const Mat& m) {
    check_pos(m.pos, 1);
    // chain bottom is end1, so an upward chevron feeds from end1
    cur[m.pos].markings.push_back({m.name, m.up});
  }

  // glue top strand i to bottom strand i (free outputs 1..w at both)
  void close() {
    const int w = bottom_width;
    if (static_cast<int>(cur.size()) != w)
      throw std::invalid_argument("closure requires equal top and bottom widths");
    for (int i = 0; i < w; ++i) finish_chain(std::move(cur[i]), out(w + i + 1));
    cur.clear();
    // repeatedly splice the edge ending at out(i) with the one at out(w+i)
    for (int i = 1; i <= w; ++i) {
      auto find_end = [&](int slot) -> std::pair<int, int> {
        for (size_t e = 0; e < g.edges.size(); ++e) {
          if (g.edges[e].closed) continue;
          if (const auto* fo = std::get_if<FreeOutput>(&g.edges[e].end1))
            if (fo->slot == slot) return {static_cast<int>(e), 0};
          if (const auto* fo = std::get_if<FreeOutput>(&g.edges[e].end2))
            if (fo->slot == slot) return {static_cast<int>(e), 1};
        }
        throw std::logic_error("closure: boundary strand missing");
      };
      auto [e1, k1] = find_end(i);
      auto [e2, k2] = find_end(w + i);
      if (e1 == e2) {
        // both ends of one edge meet: it becomes a loop
        Edge& e = g.edges[e1];
        e.closed = true;
        e.end1 = {};
        e.end2 = {};
        continue;
      }
      // orient e1 with the splice point at end2 and e2 with it at end1
      Edge a = g.edges[e1], b = g.edges[e2];
      if (k1 == 0) a = flipped_edge(a);
      if (k2 == 1) b = flipped_edge(b);
      Edge merged;
      merged.end1 = a.end1;
      merged.end2 = b.end2;
      merged.markings = a.markings;
      merged.markings.insert(merged.markings.end(), b.markings.begin(), b.markings.end());
      g.edges[e1] = std::move(merged);
      g.edges.erase(g.edges.begin() + e2);
    }
  }

  static Edge flipped_edge(const Edge& e) {
    Edge r = e;
    std::swap(r.end1, r.end2);
    std::reverse(r.markings.begin(), r.markings.end());
    for (Marking& m : r.markings) m.input_at_end1 = !m.input_at_end1;
    return r;
  }

  DiagramGraph finish(bool closed, int width) {
    if (closed) {
      close();
    } else {
      int base = bottom_width;
      for (size_t i = 0; i < cur.size(); ++i)
        finish_chain(std::move(cur[i]), out(base + static_cast<int>(i) + 1));
      cur.clear();
    }
    (void)width;
    return g;
  }
};

int width_after(const WiringTerm& t) {
  int w = t.bottom_width;
  if (w < 0) throw std::invalid_argument("negative wiring width");
  for (const Layer& layer : t.layers) {
    if (const auto* s = std::get_if<Swap>(&layer)) {
      if (s->pos < 0 || s->pos + 2 > w) throw std::invalid_argument("swap position out of range");
    } else if (const auto* c = std::get_if<Cap>(&layer)) {
      if (c->pos < 0 || c->pos + 2 > w) throw std::invalid_argument("cap position out of range");
      w -= 2;
    } else if (const auto* u = std::get_if<Cup>(&layer)) {
      if (u->pos < 0 || u->pos > w) throw std::invalid_argument("cup position out of range");
      w += 2;
    } else if (const auto* m = std::get_if<Mat>(&layer)) {
      if (m->pos < 0 || m->pos + 1 > w) throw std::invalid_argument("mat position out of range");
    }
  }
  if (t.closed && w != t.bottom_width)
    throw std::invalid_argument("closure requires equal top and bottom widths");
  return w;
}

DiagramGraph compile_impl(const WiringTerm& t, const std::vector<int>* resolution) {
  width_after(t);
  Compiler comp(t.bottom_width);
  const BinorConvention* conv = resolution ? &binor_convention() : nullptr;
  size_t swap_idx = 0;
  for (const Layer& layer : t.layers) {
    if (const auto* s = std::get_if<Swap>(&layer)) {
      if (resolution == nullptr) {
        comp.apply_swap_wiring(s->pos);
      } else {
        int mode = swap_idx < resolution->size() ? (*resolution)[swap_idx] : 0;
        ++swap_idx;
        if (mode == 0) {
          // parallel: nothing to do
        } else {
          comp.apply_cap(s->pos, conv->cap);
          comp.apply_cup(s->pos, conv->cup);
        }
      }
    } else if (const auto* c = std::get_if<Cap>(&layer)) {
      comp.apply_cap(c->pos, c->side);
    } else if (const auto* u = std::get_if<Cup>(&layer)) {
      comp.apply_cup(u->pos, u->side);
    } else if (const auto* m = std::get_if<Mat>(&layer)) {
      comp.apply_mat(*m);
    }
  }
  return comp.finish(t.closed, t.bottom_width);
}

int count_swaps(const WiringTerm& t) {
  int k = 0;
  for (const Layer& layer : t.layers)
    if (std::holds_alternative<Swap>(layer)) ++k;
  return k;
}

}  // namespace

int top_width(const WiringTerm& t) { return width_after(t); }

DiagramGraph compile_wiring(const WiringTerm& t) { return compile_impl(t, nullptr); }

DiagramGraph compile_resolved(const WiringTerm& t, const std::vector<int>& resolution) {
  return compile_impl(t, &resolution);
}

DiagramExpression binor_expand(const WiringTerm& t) {
  const int k = count_swaps(t);
  DiagramExpression expr;
  for (uint64_t bits = 0; bits < (1ull << k); ++bits) {
    std::vector<int> res(k);
    for (int i = 0; i < k; ++i) res[i] = (bits >> i) & 1;
    expr.add_term(Rational(1), compile_resolved(t, res));
  }
  return expr;
}

namespace {

// crossing = parallel + gadget must hold as a 16-entry tensor at n = 2
bool convention_works(CiliumSide cap, CiliumSide cup) {
  Environment<Rational> env(2);
  WiringTerm crossing{2, {Swap{0}}, false};
  DiagramGraph x = compile_wiring(crossing);
  WiringTerm parallel{2, {}, false};
  DiagramGraph p = compile_wiring(parallel);

  WiringTerm gadget{2, {Cap{0, cap}, Cup{0, cup}}, false};
  DiagramGraph gd = compile_wiring(gadget);

  Tensor<Rational> tx = evaluate_contracted(x, env);
  Tensor<Rational> tp = evaluate_contracted(p, env);
  Tensor<Rational> tg = evaluate_contracted(gd, env);
  for (size_t i = 0; i < tx.entries().size(); ++i)
    if (tx.entries()[i] != tp.entries()[i] + tg.entries()[i]) return false;
  return true;
}

BinorConvention calibrate() {
  for (CiliumSide cap : {CiliumSide::kFirst, CiliumSide::kSecond})
    for (CiliumSide cup : {CiliumSide::kFirst, CiliumSide::kSecond})
      if (convention_works(cap, cup)) return {cap, cup};
  throw std::logic_error("no cup/cap ciliation convention satisfies the binor identity");
}

}  // namespace

const BinorConvention& binor_convention() {
  static const BinorConvention conv = calibrate();
  return conv;
}

std::string binor_convention_description() {
  const BinorConvention& c = binor_convention();
  auto side = [](CiliumSide s) { return s == CiliumSide::kFirst ? "first" : "second"; };
  return std::string("cap cilium on ") + side(c.cap) + " strand, cup cilium on " + side(c.cup) +
         " strand";
}

WiringTerm ladder_with_sides(const std::vector<std::string>& names,
                             const std::vector<int>& sides) {
  const int k = static_cast<int>(names.size());
  if (static_cast<int>(sides.size()) != k)
    throw std::invalid_argument("ladder needs one side per matrix");
  WiringTerm t;
  t.bottom_width = 2;
  t.closed = true;
  for (int j = k - 1; j >= 0; --j) {
    t.layers.push_back(Mat{names[j], sides[j], true});
    t.layers.push_back(Swap{0});
  }
  return t;
}

WiringTerm ladder(const std::vector<std::string>& names) {
  const int k = static_cast<int>(names.size());
  std::vector<int> sides(k, 0);
  if (k >= 4)
    for (int j = 0; j < k; ++j) sides[j] = j % 2;  // alternate, topmost on the left
  return ladder_with_sides(names, sides);
}

std::optional<TraceProduct> read_trace_product(const DiagramGraph& g) {
  if (g.node_count > 0) return std::nullopt;
  TraceProduct out;
  for (const Edge& e : g.edges) {
    if (!e.closed) return std::nullopt;
    if (e.markings.empty()) {
      ++out.bare_loops;
      continue;
    }
    // one orientation must make every marking forward
    bool all_fwd = true, all_rev = true;
    for (const Marking& m : e.markings) {
      all_fwd = all_fwd && !m.input_at_end1;
      all_rev = all_rev && m.input_at_end1;
    }
    std::vector<std::string> word;
    if (all_fwd) {
      for (const Marking& m : e.markings) word.push_back(m.matrix);
    } else if (all_rev) {
      for (auto it = e.markings.rbegin(); it != e.markings.rend(); ++it)
        word.push_back(it->matrix);
    } else {
      return std::nullopt;  // mixed directions: transposed factors
    }
    out.words.push_back(std::move(word));
  }
  return out;
}

}  // namespace td::wiring
