#include "fedpne/partition.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fedpne {

namespace {

void check_spec(const PartitionSpec& spec) {
  if (spec.k < 2) throw std::invalid_argument("partition arity k must be >= 2");
  if (spec.domain.dim() < 1 || (int)spec.domain.hi.size() != spec.domain.dim())
    throw std::invalid_argument("partition domain must have matching lo/hi of dim >= 1");
  for (int d = 0; d < spec.domain.dim(); ++d)
    if (!(spec.domain.lo[d] < spec.domain.hi[d]))
      throw std::invalid_argument("partition domain must have lo < hi on every axis");
}

// k^e, throwing if it cannot be represented
uint64_t upow(int k, int e) {
  uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > std::numeric_limits<uint64_t>::max() / (uint64_t)k)
      throw std::invalid_argument("node depth too large for this arity");
    r *= (uint64_t)k;
  }
  return r;
}

uint64_t ceil_div(uint64_t a, uint64_t b) { return a / b + (a % b != 0 ? 1 : 0); }

void check_node(const NodeId& n, const PartitionSpec& spec) {
  if (n.depth < 0) throw std::invalid_argument("node depth must be >= 0");
  if (n.depth > spec.max_depth()) throw std::invalid_argument("node depth exceeds index capacity");
  uint64_t count = upow(spec.k, n.depth);
  if (n.index < 1 || n.index > count)
    throw std::invalid_argument("node index " + std::to_string(n.index) +
                                " out of range at depth " + std::to_string(n.depth));
}

// slab edges: child s of k keeps the parent's edges exactly at the rim so
// sibling cells share bit-identical boundaries and tile without gaps
double slab_lo(double lo, double hi, int s, int k) {
  return s == 0 ? lo : lo + (hi - lo) * ((double)s / (double)k);
}
double slab_hi(double lo, double hi, int s, int k) {
  return s == k - 1 ? hi : lo + (hi - lo) * ((double)(s + 1) / (double)k);
}

} // namespace

int PartitionSpec::max_depth() const {
  int d = 0;
  uint64_t r = 1;
  while (r <= std::numeric_limits<uint64_t>::max() / (uint64_t)k) {
    r *= (uint64_t)k;
    ++d;
  }
  return d;
}

std::vector<NodeId> children(const NodeId& n, int k) {
  if (k < 2) throw std::invalid_argument("partition arity k must be >= 2");
  std::vector<NodeId> out;
  out.reserve(k);
  uint64_t first = (uint64_t)k * (n.index - 1) + 1;
  for (int j = 0; j < k; ++j) out.push_back({n.depth + 1, first + (uint64_t)j});
  return out;
}

NodeId parent(const NodeId& n, int k) {
  if (k < 2) throw std::invalid_argument("partition arity k must be >= 2");
  if (n.depth <= 0) throw std::invalid_argument("the root node has no parent");
  return {n.depth - 1, ceil_div(n.index, (uint64_t)k)};
}

Box cell_bounds(const NodeId& n, const PartitionSpec& spec) {
  check_spec(spec);
  check_node(n, spec);
  Box box = spec.domain;
  if (n.depth == 0) return box;
  int D = box.dim();
  uint64_t p = upow(spec.k, n.depth - 1);  // k^(depth-level) for level = 1
  for (int level = 1; level <= n.depth; ++level) {
    uint64_t anc = ceil_div(n.index, p);
    int s = (int)((anc - 1) % (uint64_t)spec.k);
    int axis = (level - 1) % D;
    double lo = box.lo[axis], hi = box.hi[axis];
    box.lo[axis] = slab_lo(lo, hi, s, spec.k);
    box.hi[axis] = slab_hi(lo, hi, s, spec.k);
    p /= (uint64_t)spec.k;
  }
  return box;
}

std::vector<double> representative_point(const NodeId& n, const PartitionSpec& spec) {
  Box box = cell_bounds(n, spec);
  std::vector<double> x(box.dim());
  for (int d = 0; d < box.dim(); ++d) x[d] = 0.5 * (box.lo[d] + box.hi[d]);
  return x;
}

NodeId node_containing(const std::vector<double>& x, int depth, const PartitionSpec& spec) {
  check_spec(spec);
  if ((int)x.size() != spec.domain.dim())
    throw std::invalid_argument("point dimension does not match the domain");
  if (depth < 0 || depth > spec.max_depth())
    throw std::invalid_argument("depth out of range for this arity");
  Box box = spec.domain;
  int D = box.dim();
  uint64_t index = 1;
  for (int level = 0; level < depth; ++level) {
    int axis = level % D;
    double lo = box.lo[axis], hi = box.hi[axis];
    int s = (int)std::floor((x[axis] - lo) / (hi - lo) * (double)spec.k);
    if (s < 0) s = 0;
    if (s > spec.k - 1) s = spec.k - 1;
    index = (uint64_t)spec.k * (index - 1) + 1 + (uint64_t)s;
    box.lo[axis] = slab_lo(lo, hi, s, spec.k);
    box.hi[axis] = slab_hi(lo, hi, s, spec.k);
  }
  return {depth, index};
}

} // namespace fedpne
