#pragma once

// Dynamics of a self-map of a finite set: functional graph and cycles.

#include <cstddef>
#include <vector>

#include "padyn/models.hpp"

namespace padyn {

struct FunctionalGraph {
  std::vector<Point> nodes;  // canonical order
  std::vector<std::size_t> successor;
  /// Sorted by (length, smallest node); each cycle starts at its smallest node.
  std::vector<std::vector<std::size_t>> cycles;
  std::vector<std::size_t> tail_length;
  std::vector<std::size_t> eventual_period;
  std::vector<std::size_t> cycle_of;  // index into cycles of the cycle each node enters

  std::size_t index_of(const Point& pt) const;
};

/// Builds the graph from nodes (sorted) and a successor index map.
FunctionalGraph build_graph(std::vector<Point> nodes, std::vector<std::size_t> successor);

/// Graph of the reduced map on the special fiber.
FunctionalGraph build_functional_graph(const Model& model);

struct CycleInfo {
  std::vector<Point> points;
  std::size_t length;
};
std::vector<CycleInfo> cycle_decomposition(const FunctionalGraph& g);

struct ResidualData {
  std::size_t tail_length;
  std::size_t n0;
};
ResidualData residual_data(const FunctionalGraph& g, const Point& q);

}  // namespace padyn
