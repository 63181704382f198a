// Finite slab {0 <= s(x) <= h} of the hard-walled half-space, carved out of a
// sampling box: lateral coordinates x_1..x_{d-1} range over (-w, w] and the
// height s(x) = x_1 + ... + x_d over [0, h]; x_d is then determined by (y, s).
// Every nearest-neighbour step changes s by exactly 1; edges leaving the slab
// do not exist (hard walls).
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "perclab/geometry.hpp"
#include "perclab/percolation.hpp"
#include "perclab/topology.hpp"

namespace perclab {

struct SlabSpec {
  int d = 3;
  int w = 4;  // lateral half-width: x_i in (-w, w] for i < d-1
  int h = 4;  // height: s(x) in [0, h]

  // Smallest box radius whose box contains every slab vertex.
  int required_box_radius() const;
  std::uint64_t vertex_count() const;  // (2w)^(d-1) * (h+1)
  bool contains(const Vertex& v) const;
  // Index over (s, lateral) in lexicographic order.
  std::uint64_t index(const Vertex& v) const;
  Vertex vertex_at(std::uint64_t idx) const;
};

// Vertices reachable from the base layer {s = 0} by paths inside the slab
// where every s-increasing step crosses an open edge and s-decreasing steps
// are unconstrained. Mask is indexed by SlabSpec::index.
std::vector<std::uint8_t> climb_reachable_mask(const Configuration& c, const SlabSpec& slab);
VertexSet climb_reachable(const Configuration& c, const SlabSpec& slab);

struct InterfaceResult {
  PlaquetteSet plaquettes;    // duals of the ascending edges leaving the reachable set
  bool censored_top = false;  // reachable set touches the top layer {s = h}
  std::uint64_t reach_size = 0;
};

// Duals of edges <u,v> with u reachable, v in the slab but not reachable and
// s(u) < s(v). Every such edge is closed, so every returned plaquette is open
// (asserted). If the reachable set touches the top layer the interface is not
// closed off there and the result is flagged censored.
InterfaceResult ascending_interface(const Configuration& c, const SlabSpec& slab, const std::vector<std::uint8_t>& reach);

// Projection z - mean(z) * ones onto the zero-sum hyperplane, exact: the
// input is a doubled point (e.g. facet_center2), numerators are over the
// common denominator 2d, and the numerator sum is identically 0.
struct ZeroSumPoint {
  std::array<std::int64_t, kMaxDim> num{};
  std::int64_t den = 1;
  int8_t d = 0;

  friend bool operator==(const ZeroSumPoint&, const ZeroSumPoint&) = default;
  auto operator<=>(const ZeroSumPoint&) const = default;
};

ZeroSumPoint project_zero_sum(const Coords& point2, int d);

// Facet centre at margin >= 1 from the walls and half a layer from top and
// bottom: lateral doubled coordinates within [-2w+3, 2w-1] and doubled height
// within [1, 2h-1]. Boundary-parity and injectivity assertions are restricted
// to facets passing this test, since the hard walls truncate incidence at the
// rim.
bool slab_interior_facet(const SlabSpec& slab, const FacetKey& f);

}  // namespace perclab
