#pragma once

#include <string>
#include <vector>

#include "td/graph.hpp"

namespace td {

// Edge-segment incidence extracted from a diagram. A segment is a maximal
// stretch of an edge between two attachment points; markings count as
// attachment points, so a marked edge splits around each chevron. Segment
// ids are assigned edge by edge in end1->end2 order, which also fixes the
// labeling enumeration order.
struct SegmentModel {
  int dim = 0;
  int count = 0;

  std::vector<std::vector<int>> node_ports;  // node -> segment per port slot

  struct Mark {
    std::string matrix;
    int out_seg = -1;
    int in_seg = -1;
  };
  std::vector<Mark> markings;

  struct Vec {
    std::string name;
    int slot = 0;
    int seg = -1;
  };
  std::vector<Vec> vectors;  // sorted by input slot

  std::vector<std::pair<int, int>> basis_pins;  // (segment, label)
  std::vector<int> outputs;                     // slot-1 -> segment
  int bare_loops = 0;                           // unmarked closed circles, factor dim each
};

// Requires a valid graph (throws std::invalid_argument otherwise).
SegmentModel build_segments(const DiagramGraph& g);

// dim^(free segments): cost of one enumerative output cell.
double enumerative_cost(const DiagramGraph& g);

}  // namespace td
