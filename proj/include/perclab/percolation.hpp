// Bond configurations on boxes, cluster labeling, and the derived vertex
// sets: the escape set of a block (vertices near clusters that leave the
// doubled box) and the finite complement X^F (vertices far from every
// cluster treated as infinite).
//
// Randomness is keyed on the geometric identity of each edge, so two
// configurations with the same seed agree edge-for-edge across different p
// and across different box sizes (exact monotone coupling).
#pragma once

#include <cstdint>
#include <vector>

#include "perclab/disjoint_sets.hpp"
#include "perclab/geometry.hpp"
#include "perclab/topology.hpp"

namespace perclab {

struct ModelParams {
  int d = 2;
  double p = 0.5;
  int S = 0;  // edge range: 0 = nearest neighbour, else |x-y|_inf <= S
  int F = 0;  // fattening distance for the finite complement
};

// Canonical offset list for edges out of a base vertex: unit vectors in axis
// order when S = 0, else all lexicographically positive offsets with
// |o|_inf <= S in lexicographic order. Each unordered edge appears once, at
// its lexicographically smaller endpoint.
std::vector<Coords> edge_offsets(int d, int S);

// Uniform in [0,1) attached to the edge (base, base + offsets[rank]).
double edge_uniform(std::uint64_t seed, std::uint64_t rng_id, const Coords& base, int d, int offset_rank);

// Openness of an arbitrary edge (a, b) without materializing a configuration;
// agrees bit-for-bit with Configuration::sample at the same (seed, rng_id, p).
bool open_edge_lazy(std::uint64_t seed, std::uint64_t rng_id, double p, const Vertex& a, const Vertex& b, int S);

class Configuration {
 public:
  static Configuration sample(const ModelParams& params, const Box& box, std::uint64_t seed,
                              std::uint64_t rng_id = 0);
  // Explicit bits in enumeration order (one per edge); for hand-built cases
  // and deserialization.
  static Configuration from_bits(const ModelParams& params, const Box& box, const std::vector<std::uint8_t>& open,
                                 std::uint64_t seed = 0, std::uint64_t rng_id = 0);

  const ModelParams& params() const { return params_; }
  const Box& box() const { return box_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t rng_id() const { return rng_id_; }
  std::uint64_t edge_count() const { return edge_count_; }
  const std::vector<std::uint64_t>& words() const { return bits_; }

  bool open(std::uint64_t e) const { return (bits_[e >> 6] >> (e & 63)) & 1u; }
  double open_fraction() const;

  // Random access by endpoints; both must lie in the box.
  bool open_between(const Vertex& a, const Vertex& b) const;

  // fn(edge_index, a_box_index, b_box_index) over the canonical enumeration:
  // lexicographic base vertex, then offset rank.
  template <class Fn>
  void for_each_edge(Fn&& fn) const {
    const auto& offs = offsets_;
    const int d = box_.d;
    const int n = box_.n;
    std::int64_t delta[64];
    for (std::size_t r = 0; r < offs.size(); ++r) {
      std::int64_t dd = 0;
      std::int64_t stride = 1;
      for (int i = d - 1; i >= 0; --i) {
        dd += offs[r][static_cast<std::size_t>(i)] * stride;
        stride *= 2 * n;
      }
      delta[r] = dd;
    }
    Coords v{};
    for (int i = 0; i < d; ++i) v[i] = -n + 1;
    std::uint64_t e = 0;
    const std::uint64_t total = box_.size();
    for (std::uint64_t vi = 0; vi < total; ++vi) {
      for (std::size_t r = 0; r < offs.size(); ++r) {
        bool in = true;
        for (int i = 0; i < d; ++i) {
          const int c = v[i] + offs[r][static_cast<std::size_t>(i)];
          if (c <= -n || c > n) {
            in = false;
            break;
          }
        }
        if (in) {
          fn(e, vi, vi + static_cast<std::uint64_t>(delta[r]));
          ++e;
        }
      }
      int i = d - 1;
      while (i >= 0 && v[i] == n) v[i--] = -n + 1;
      if (i >= 0) ++v[i];
    }
  }

  template <class Fn>
  void for_each_open_edge(Fn&& fn) const {
    for_each_edge([&](std::uint64_t e, std::uint64_t a, std::uint64_t b) {
      if (open(e)) fn(a, b);
    });
  }

 private:
  Configuration(const ModelParams& params, const Box& box, std::uint64_t seed, std::uint64_t rng_id);

  ModelParams params_;
  Box box_;
  std::uint64_t seed_ = 0;
  std::uint64_t rng_id_ = 0;
  std::vector<Coords> offsets_;
  std::vector<std::uint64_t> bits_;
  std::uint64_t edge_count_ = 0;
  std::vector<std::uint64_t> edge_start_;  // first edge index per base vertex
};

struct ClusterInfo {
  std::uint64_t size = 0;
  bool touches_boundary = false;  // has a vertex on the box boundary layer
  bool wired_infinite = false;    // touches the boundary AND has an interior vertex
  Coords bb_lo{};
  Coords bb_hi{};
};

struct ClusterLabeling {
  Box box;
  std::vector<std::uint32_t> label;  // per box vertex index, compact ids
  std::vector<ClusterInfo> clusters;

  std::uint32_t label_of(const Vertex& v) const { return label[box.index(v)]; }
};

ClusterLabeling cluster_labels(const Configuration& c);

struct RadiusResult {
  int value = 0;      // max |x - origin|_inf over the origin's cluster
  bool censored = false;  // cluster touches the box boundary; value is a lower bound
};

RadiusResult cluster_radius(const ClusterLabeling& labeling, const Vertex& origin);

// Vertices x of B_n + n*z within distance F of a cluster that leaves the box
// of radius 2n+2F-1 around the block (or touches the sampling-box boundary).
// Mask is indexed by Box{n, d} local coordinates (x - n*z).
std::vector<std::uint8_t> escaping_mask_at(const Configuration& c, const ClusterLabeling& labeling, int n,
                                           const Vertex& z);
VertexSet escaping_vertices(const Configuration& c, const ClusterLabeling& labeling, int n);

// X^F: vertices at L_inf distance > F from every wired-infinite cluster.
std::vector<std::uint8_t> finite_complement_mask(const ClusterLabeling& labeling, int F);
VertexSet finite_complement(const ClusterLabeling& labeling, int F);

// All 2d plaquettes bounding a dual unit cube are open (their primal edges
// closed). The cube is a full-dimensional dual facet.
bool cube_faces_all_open(const Configuration& c, const FacetKey& dual_cube);

}  // namespace perclab
