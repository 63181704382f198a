// Facets of the hypercubic lattice and of its shifted dual, in dimensions
// 2..8. A k-facet is a product of d intervals, k of which have unit length
// and the rest are points. Facets are keyed by the minimal corner and a
// bitmask of extended axes. All corner coordinates are stored DOUBLED so the
// primal lattice (even values) and the dual lattice, shifted by (1/2,...,1/2)
// (odd values), share one exact integer representation.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "perclab/rng.hpp"

namespace perclab {

inline constexpr int kMaxDim = 8;
using Coords = std::array<std::int32_t, kMaxDim>;  // axes >= d stay zero

struct Vertex {
  Coords x{};
  std::int8_t d = 0;

  friend bool operator==(const Vertex&, const Vertex&) = default;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

Vertex make_vertex(const std::vector<int>& coords);
Vertex translate(const Vertex& v, const Vertex& by);
int l1_dist(const Vertex& a, const Vertex& b);
int linf_dist(const Vertex& a, const Vertex& b);
int linf_norm(const Vertex& a);
int coord_sum(const Vertex& a);  // s(x) = x_1 + ... + x_d
std::string to_string(const Vertex& v);

enum class Lattice : std::uint8_t { kPrimal = 0, kDual = 1 };

struct FacetKey {
  Coords base2{};  // doubled coordinates of the minimal corner
  std::uint8_t axes = 0;
  Lattice lattice = Lattice::kPrimal;
  std::int8_t d = 0;

  friend bool operator==(const FacetKey&, const FacetKey&) = default;
  friend auto operator<=>(const FacetKey&, const FacetKey&) = default;
};

int facet_dim(const FacetKey& f);
Coords facet_center2(const FacetKey& f);        // doubled centre of mass
int facet_coord_sum2(const FacetKey& f);        // 2 * s(centre)
std::string to_string(const FacetKey& f);

// Constructors / validators.
FacetKey vertex_facet(const Vertex& v);                              // 0-facet
FacetKey edge_between(const Vertex& a, const Vertex& b);             // nearest-neighbour 1-facet
FacetKey facet_at(const Vertex& corner, std::uint8_t axes, Lattice l);
bool is_plaquette(const FacetKey& f);                                // (d-1)-facet of the dual

// The 2^dim corner points of a facet, as doubled coordinate vectors.
std::vector<Coords> facet_points2(const FacetKey& f);

// Orthogonal dual: each unit interval collapses to its midpoint, each point
// expands to the unit interval of the other lattice centred on it. An
// involution that preserves the centre of mass and flips the lattice tag.
FacetKey dual_facet(const FacetKey& f);

// Plaquette crossed by a primal nearest-neighbour edge (the dual of the edge).
FacetKey edge_dual_plaquette(const FacetKey& edge);

// All k-facets contained in f (k <= dim f); same lattice.
std::vector<FacetKey> incident_subfacets(const FacetKey& f, int k);

// Plaquette adjacency: sharing a (d-2)-facet, resp. sharing a 1-facet.
bool plaquettes_adjacent(const FacetKey& p, const FacetKey& q);
bool plaquettes_adjacent1(const FacetKey& p, const FacetKey& q);

// Neighbours of x: the 2d nearest neighbours when S = 0, otherwise all y with
// 0 < |y - x|_inf <= S.
std::vector<Vertex> spread_out_neighbors(const Vertex& x, int S);

// The box (-n, n]^d with its boundary layer (vertices outside (-n+1, n-1]^d).
struct Box {
  int n = 1;
  int d = 2;

  std::uint64_t size() const;  // (2n)^d
  bool contains(const Vertex& v) const;
  bool on_boundary(const Vertex& v) const;
  std::uint64_t index(const Vertex& v) const;  // lexicographic rank
  Vertex vertex_at(std::uint64_t idx) const;
};

// Arbitrary axis-aligned window {lo <= x <= hi}; the finite stand-in for the
// whole lattice: "joined to infinity" means "joined to the window boundary".
struct Window {
  Coords lo{};
  Coords hi{};
  std::int8_t d = 0;

  static Window centered(int d, int radius);  // the box (-radius, radius]^d
  static Window around(const std::vector<Vertex>& pts, int margin);

  std::uint64_t size() const;
  bool contains(const Vertex& v) const;
  bool on_boundary(const Vertex& v) const;
  // Every vertex at least `margin` layers away from the boundary.
  bool interior_with_margin(const Vertex& v, int margin) const;
  std::uint64_t index(const Vertex& v) const;
  Vertex vertex_at(std::uint64_t idx) const;
};

struct VertexHash {
  std::size_t operator()(const Vertex& v) const {
    std::uint64_t h = rng::combine(0x56u, static_cast<std::uint64_t>(v.d));
    for (int i = 0; i < v.d; ++i) h = rng::combine(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(v.x[i])));
    return static_cast<std::size_t>(h);
  }
};

struct FacetHash {
  std::size_t operator()(const FacetKey& f) const {
    std::uint64_t h = rng::combine(0xFAu, (static_cast<std::uint64_t>(f.axes) << 8) |
                                              (static_cast<std::uint64_t>(f.lattice) << 1) |
                                              static_cast<std::uint64_t>(f.d));
    for (int i = 0; i < f.d; ++i) h = rng::combine(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(f.base2[i])));
    return static_cast<std::size_t>(h);
  }
};

}  // namespace perclab
