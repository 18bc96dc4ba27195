#pragma once
#include <compare>
#include <cstdint>
#include <vector>

namespace fedpne {

// Cell identity in the infinitely deep k-nary partition tree. Indices are
// 1-based per depth: the root is (0,1) and depth h holds indices 1..k^h.
struct NodeId {
  int depth = 0;
  uint64_t index = 1;
  bool operator==(const NodeId&) const = default;
  auto operator<=>(const NodeId&) const = default;  // (depth, index) lexicographic
};

struct Box {
  std::vector<double> lo, hi;
  int dim() const { return (int)lo.size(); }
};

// Axis-aligned k-nary partition of a box domain. A node's cell splits into k
// equal slabs along one axis; the split axis rotates round-robin with depth so
// every axis gets refined. Child j (j = (index-1) mod k) takes the j-th slab
// from the low edge.
struct PartitionSpec {
  int k = 2;
  Box domain;
  int max_depth() const;  // deepest level whose indices still fit in uint64
};

std::vector<NodeId> children(const NodeId& n, int k);
NodeId parent(const NodeId& n, int k);

Box cell_bounds(const NodeId& n, const PartitionSpec& spec);
std::vector<double> representative_point(const NodeId& n, const PartitionSpec& spec);

// Node at `depth` whose cell contains x. Slabs are half-open [lo, hi) with the
// last slab closed, so every point of the domain belongs to exactly one cell.
NodeId node_containing(const std::vector<double>& x, int depth, const PartitionSpec& spec);

} // namespace fedpne
