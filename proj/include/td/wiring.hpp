#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "td/expression.hpp"
#include "td/graph.hpp"

namespace td::wiring {

// Which of a 2-valent node's two strands sits at slot 0 (the cilium side).
enum class CiliumSide { kFirst, kSecond };

struct Swap {
  int pos = 0;  // crosses strands pos and pos+1 (0-based)
};
struct Cap {
  int pos = 0;  // joins strands pos and pos+1 from below
  CiliumSide side = CiliumSide::kFirst;
};
struct Cup {
  int pos = 0;  // inserts two new strands at position pos
  CiliumSide side = CiliumSide::kFirst;
};
struct Mat {
  std::string name;
  int pos = 0;
  bool up = true;  // chevron direction; up means the input is below
};
using Layer = std::variant<Swap, Cap, Cup, Mat>;

// Sliced presentation of a dimension-2 diagram: layers applied bottom to
// top. Closure glues top boundary strands to bottom ones in order.
struct WiringTerm {
  int bottom_width = 0;
  std::vector<Layer> layers;
  bool closed = false;
};

// Width after all layers; throws std::invalid_argument on width underflow
// or position errors.
int top_width(const WiringTerm& t);

// Compiles to a combinatorial diagram at dim 2. Swaps are pure wiring;
// caps and cups become ciliated 2-valent nodes; boundary strands become
// free outputs (bottom slots first) unless closed.
DiagramGraph compile_wiring(const WiringTerm& t);

// As compile_wiring, but each swap is resolved: 0 keeps the strands
// parallel, 1 replaces the crossing with the calibrated cap/cup gadget.
DiagramGraph compile_resolved(const WiringTerm& t, const std::vector<int>& resolution);

// Distributes every swap over (parallel) + (gadget); exactly 2^k terms,
// evaluation preserved exactly.
DiagramExpression binor_expand(const WiringTerm& t);

struct BinorConvention {
  CiliumSide cap = CiliumSide::kFirst;
  CiliumSide cup = CiliumSide::kFirst;
};

// The cup/cap ciliation convention under which the binor identity holds as
// an exact 16-entry tensor equation; selected once by enumeration.
const BinorConvention& binor_convention();
std::string binor_convention_description();

// Closed k-crossing ladder carrying names[0..k-1] top to bottom. Matrices
// sit on the left strand for k <= 3; for k >= 4 they alternate sides so
// the closure is a single traced word (times one bare circle).
WiringTerm ladder(const std::vector<std::string>& names);
WiringTerm ladder_with_sides(const std::vector<std::string>& names, const std::vector<int>& sides);

// Reads a closed, node-free diagram as a product of traced words (and
// bare circles). Fails when the diagram is open, has nodes, or mixes
// marking directions along one loop.
struct TraceProduct {
  std::vector<std::vector<std::string>> words;
  int bare_loops = 0;
};
std::optional<TraceProduct> read_trace_product(const DiagramGraph& g);

}  // namespace td::wiring
