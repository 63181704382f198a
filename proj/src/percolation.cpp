#include "perclab/percolation.hpp"

#include <algorithm>
#include <stdexcept>

namespace perclab {

std::vector<std::uint32_t> compact_labels(DisjointSets& ds) {
  const std::uint32_t n = ds.count();
  std::vector<std::uint32_t> label(n);
  std::vector<std::uint32_t> remap(n, UINT32_MAX);
  std::uint32_t next = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t r = ds.find(i);
    if (remap[r] == UINT32_MAX) remap[r] = next++;
    label[i] = remap[r];
  }
  return label;
}

std::vector<Coords> edge_offsets(int d, int S) {
  if (d < 2 || d > kMaxDim) throw std::invalid_argument("edge_offsets: dimension must be in [2, 8]");
  if (S < 0) throw std::invalid_argument("edge_offsets: S must be >= 0");
  std::vector<Coords> out;
  if (S == 0) {
    for (int i = 0; i < d; ++i) {
      Coords o{};
      o[i] = 1;
      out.push_back(o);
    }
    return out;
  }
  Coords o{};
  for (int i = 0; i < d; ++i) o[i] = -S;
  while (true) {
    // keep lexicographically positive offsets: first nonzero coordinate > 0
    for (int i = 0; i < d; ++i) {
      if (o[i] > 0) {
        out.push_back(o);
        break;
      }
      if (o[i] < 0) break;
    }
    int i = d - 1;
    while (i >= 0 && o[i] == S) o[i--] = -S;
    if (i < 0) break;
    ++o[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

constexpr std::uint64_t kEdgeStream = 0xED6E5ULL;

std::uint64_t sign_extend(std::int32_t v) { return static_cast<std::uint64_t>(static_cast<std::int64_t>(v)); }

}  // namespace

double edge_uniform(std::uint64_t seed, std::uint64_t rng_id, const Coords& base, int d, int offset_rank) {
  std::uint64_t h = rng::combine(seed, kEdgeStream);
  h = rng::combine(h, rng_id);
  for (int i = 0; i < d; ++i) h = rng::combine(h, sign_extend(base[i]));
  h = rng::combine(h, static_cast<std::uint64_t>(offset_rank));
  return rng::to_unit(h);
}

bool open_edge_lazy(std::uint64_t seed, std::uint64_t rng_id, double p, const Vertex& a, const Vertex& b, int S) {
  const auto offs = edge_offsets(a.d, S);
  // Canonical form: the base is the endpoint making the offset positive.
  Coords o{};
  bool positive = false;
  for (int i = 0; i < a.d; ++i) o[i] = b.x[i] - a.x[i];
  for (int i = 0; i < a.d; ++i) {
    if (o[i] > 0) {
      positive = true;
      break;
    }
    if (o[i] < 0) break;
  }
  const Vertex& base = positive ? a : b;
  if (!positive)
    for (int i = 0; i < a.d; ++i) o[i] = -o[i];
  // The offset list is in enumeration order (axis order for S = 0), not
  // sorted; ranks must match that order, so scan linearly.
  const auto it = std::find(offs.begin(), offs.end(), o);
  if (it == offs.end()) throw std::invalid_argument("open_edge_lazy: not an edge of the model");
  const int rank = static_cast<int>(it - offs.begin());
  return edge_uniform(seed, rng_id, base.x, a.d, rank) < p;
}

Configuration::Configuration(const ModelParams& params, const Box& box, std::uint64_t seed, std::uint64_t rng_id)
    : params_(params), box_(box), seed_(seed), rng_id_(rng_id), offsets_(edge_offsets(box.d, params.S)) {
  if (params.d != box.d) throw std::invalid_argument("Configuration: params/box dimension mismatch");
  if (params.p < 0.0 || params.p > 1.0) throw std::invalid_argument("Configuration: p must be in [0, 1]");
  if (params.F < 0) throw std::invalid_argument("Configuration: F must be >= 0");
  // Edges with offset o: prod_i (2n - |o_i|) base choices.
  edge_count_ = 0;
  for (const auto& o : offsets_) {
    std::uint64_t cnt = 1;
    for (int i = 0; i < box.d; ++i) cnt *= static_cast<std::uint64_t>(2 * box.n - std::abs(o[i]));
    edge_count_ += cnt;
  }
  bits_.assign((edge_count_ + 63) / 64, 0);
}

Configuration Configuration::sample(const ModelParams& params, const Box& box, std::uint64_t seed,
                                    std::uint64_t rng_id) {
  Configuration c(params, box, seed, rng_id);
  c.edge_start_.assign(box.size() + 1, 0);
  const int d = box.d;
  const int n = box.n;
  Coords v{};
  for (int i = 0; i < d; ++i) v[i] = -n + 1;
  std::uint64_t e = 0;
  const std::uint64_t total = box.size();
  for (std::uint64_t vi = 0; vi < total; ++vi) {
    c.edge_start_[vi] = e;
    for (std::size_t r = 0; r < c.offsets_.size(); ++r) {
      bool in = true;
      for (int i = 0; i < d; ++i) {
        const int cc = v[i] + c.offsets_[r][static_cast<std::size_t>(i)];
        if (cc <= -n || cc > n) {
          in = false;
          break;
        }
      }
      if (!in) continue;
      if (edge_uniform(seed, rng_id, v, d, static_cast<int>(r)) < params.p) c.bits_[e >> 6] |= 1ULL << (e & 63);
      ++e;
    }
    int i = d - 1;
    while (i >= 0 && v[i] == n) v[i--] = -n + 1;
    if (i >= 0) ++v[i];
  }
  c.edge_start_[total] = e;
  return c;
}

Configuration Configuration::from_bits(const ModelParams& params, const Box& box,
                                       const std::vector<std::uint8_t>& open, std::uint64_t seed,
                                       std::uint64_t rng_id) {
  Configuration c(params, box, seed, rng_id);
  if (open.size() != c.edge_count_) throw std::invalid_argument("Configuration::from_bits: wrong bit count");
  c.edge_start_.assign(box.size() + 1, 0);
  std::uint64_t e = 0;
  c.for_each_edge([&](std::uint64_t idx, std::uint64_t a, std::uint64_t) {
    while (e <= a) c.edge_start_[e++] = idx;  // first edge at or after each base vertex
    if (open[idx]) c.bits_[idx >> 6] |= 1ULL << (idx & 63);
  });
  while (e <= box.size()) c.edge_start_[e++] = c.edge_count_;
  return c;
}

double Configuration::open_fraction() const {
  if (edge_count_ == 0) return 0.0;
  std::uint64_t cnt = 0;
  for (std::uint64_t e = 0; e < edge_count_; ++e) cnt += open(e) ? 1 : 0;
  return static_cast<double>(cnt) / static_cast<double>(edge_count_);
}

bool Configuration::open_between(const Vertex& a, const Vertex& b) const {
  if (!box_.contains(a) || !box_.contains(b)) throw std::invalid_argument("open_between: endpoint outside box");
  Coords o{};
  bool positive = false;
  for (int i = 0; i < box_.d; ++i) o[i] = b.x[i] - a.x[i];
  for (int i = 0; i < box_.d; ++i) {
    if (o[i] > 0) {
      positive = true;
      break;
    }
    if (o[i] < 0) break;
  }
  const Vertex& base = positive ? a : b;
  if (!positive)
    for (int i = 0; i < box_.d; ++i) o[i] = -o[i];
  // Edge index = first edge of the base vertex + rank among its valid offsets.
  std::uint64_t e = edge_start_[box_.index(base)];
  for (const auto& cand : offsets_) {
    bool in = true;
    for (int i = 0; i < box_.d; ++i) {
      const int cc = base.x[i] + cand[static_cast<std::size_t>(i)];
      if (cc <= -box_.n || cc > box_.n) {
        in = false;
        break;
      }
    }
    if (cand == o) {
      if (!in) throw std::invalid_argument("open_between: not an edge of the model");
      return open(e);
    }
    if (in) ++e;
  }
  throw std::invalid_argument("open_between: not an edge of the model");
}

ClusterLabeling cluster_labels(const Configuration& c) {
  const Box& box = c.box();
  DisjointSets ds(static_cast<std::uint32_t>(box.size()));
  c.for_each_open_edge([&](std::uint64_t a, std::uint64_t b) {
    ds.unite(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
  });

  ClusterLabeling out;
  out.box = box;
  out.label = compact_labels(ds);
  std::uint32_t k = 0;
  for (const auto l : out.label) k = std::max(k, l + 1);
  out.clusters.assign(k, ClusterInfo{});

  std::vector<std::uint8_t> has_interior(k, 0);
  const std::uint64_t total = box.size();
  for (std::uint64_t vi = 0; vi < total; ++vi) {
    const Vertex v = box.vertex_at(vi);
    ClusterInfo& ci = out.clusters[out.label[vi]];
    if (ci.size == 0) {
      ci.bb_lo = v.x;
      ci.bb_hi = v.x;
    } else {
      for (int i = 0; i < box.d; ++i) {
        ci.bb_lo[i] = std::min(ci.bb_lo[i], v.x[i]);
        ci.bb_hi[i] = std::max(ci.bb_hi[i], v.x[i]);
      }
    }
    ++ci.size;
    if (box.on_boundary(v))
      ci.touches_boundary = true;
    else
      has_interior[out.label[vi]] = 1;
  }
  for (std::uint32_t l = 0; l < k; ++l)
    out.clusters[l].wired_infinite = out.clusters[l].touches_boundary && has_interior[l];
  return out;
}

RadiusResult cluster_radius(const ClusterLabeling& labeling, const Vertex& origin) {
  if (!labeling.box.contains(origin)) throw std::invalid_argument("cluster_radius: origin outside box");
  const ClusterInfo& ci = labeling.clusters[labeling.label_of(origin)];
  int r = 0;
  for (int i = 0; i < labeling.box.d; ++i)
    r = std::max({r, ci.bb_hi[i] - origin.x[i], origin.x[i] - ci.bb_lo[i]});
  return RadiusResult{r, ci.touches_boundary};
}

namespace {

// Separable L_inf dilation by F over a window-shaped mask (in place).
void dilate_linf(const Window& w, std::vector<std::uint8_t>& mask, int F) {
  if (F <= 0) return;
  std::vector<std::uint8_t> tmp(mask.size());
  for (int axis = 0; axis < w.d; ++axis) {
    const std::uint64_t total = w.size();
    for (std::uint64_t i = 0; i < total; ++i) {
      if (!mask[i]) {
        tmp[i] = 0;
        continue;
      }
      tmp[i] = 1;
    }
    for (std::uint64_t i = 0; i < total; ++i) {
      if (tmp[i]) {
        mask[i] = 1;
        continue;
      }
      const Vertex v = w.vertex_at(i);
      std::uint8_t hit = 0;
      for (int k = -F; k <= F && !hit; ++k) {
        if (k == 0) continue;
        Vertex u = v;
        u.x[axis] += k;
        if (w.contains(u) && tmp[w.index(u)]) hit = 1;
      }
      mask[i] = hit;
    }
  }
}

bool bbox_escapes(const ClusterInfo& ci, int d, int r, const Vertex& shift) {
  // Has the cluster a vertex outside the box of radius r around shift?
  for (int i = 0; i < d; ++i) {
    if (ci.bb_hi[i] > shift.x[i] + r) return true;
    if (ci.bb_lo[i] <= shift.x[i] - r) return true;
  }
  return false;
}

}  // namespace

std::vector<std::uint8_t> escaping_mask_at(const Configuration& c, const ClusterLabeling& labeling, int n,
                                           const Vertex& z) {
  const Box& box = c.box();
  const int d = box.d;
  const int F = c.params().F;
  if (z.d != d) throw std::invalid_argument("escaping_mask_at: dimension mismatch");
  if (n < 1) throw std::invalid_argument("escaping_mask_at: n must be >= 1");
  const int r_far = 2 * n + 2 * F - 1;
  Vertex shift;
  shift.d = static_cast<std::int8_t>(d);
  for (int i = 0; i < d; ++i) {
    shift.x[i] = n * z.x[i];
    if (std::abs(shift.x[i]) + r_far > box.n)
      throw std::invalid_argument("escaping_mask_at: configuration box does not cover the block's far box");
  }
  // Escape radius capped at the sampling box: beyond that, touching the box
  // boundary is the wired stand-in for reaching infinity.
  const int r = std::min(r_far, box.n - 1);

  // Mark near-escaping vertices on the fattened block, then dilate by F.
  Window w;
  w.d = static_cast<std::int8_t>(d);
  for (int i = 0; i < d; ++i) {
    w.lo[i] = shift.x[i] - (n + F) + 1;
    w.hi[i] = shift.x[i] + (n + F);
  }
  std::vector<std::uint8_t> mask(w.size(), 0);
  const std::uint64_t total = w.size();
  for (std::uint64_t i = 0; i < total; ++i) {
    const Vertex v = w.vertex_at(i);
    const ClusterInfo& ci = labeling.clusters[labeling.label_of(v)];
    mask[i] = (bbox_escapes(ci, d, r, shift) || ci.touches_boundary) ? 1 : 0;
  }
  dilate_linf(w, mask, F);

  const Box inner{n, d};
  std::vector<std::uint8_t> out(inner.size(), 0);
  const std::uint64_t isz = inner.size();
  for (std::uint64_t i = 0; i < isz; ++i) {
    Vertex v = inner.vertex_at(i);
    for (int k = 0; k < d; ++k) v.x[k] += shift.x[k];
    out[i] = mask[w.index(v)];
  }
  return out;
}

VertexSet escaping_vertices(const Configuration& c, const ClusterLabeling& labeling, int n) {
  Vertex z;
  z.d = static_cast<std::int8_t>(c.box().d);
  const auto mask = escaping_mask_at(c, labeling, n, z);
  const Box inner{n, c.box().d};
  std::vector<Vertex> out;
  for (std::uint64_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out.push_back(inner.vertex_at(i));
  return VertexSet::of(std::move(out));
}

std::vector<std::uint8_t> finite_complement_mask(const ClusterLabeling& labeling, int F) {
  if (F < 0) throw std::invalid_argument("finite_complement_mask: F must be >= 0");
  const Box& box = labeling.box;
  std::vector<std::uint8_t> inf_mask(box.size(), 0);
  for (std::uint64_t i = 0; i < inf_mask.size(); ++i)
    inf_mask[i] = labeling.clusters[labeling.label[i]].wired_infinite ? 1 : 0;
  Window w = Window::centered(box.d, box.n);
  dilate_linf(w, inf_mask, F);
  for (auto& b : inf_mask) b = b ? 0 : 1;
  return inf_mask;
}

VertexSet finite_complement(const ClusterLabeling& labeling, int F) {
  const auto mask = finite_complement_mask(labeling, F);
  std::vector<Vertex> out;
  for (std::uint64_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out.push_back(labeling.box.vertex_at(i));
  return VertexSet::of(std::move(out));
}

bool cube_faces_all_open(const Configuration& c, const FacetKey& dual_cube) {
  if (dual_cube.lattice != Lattice::kDual || facet_dim(dual_cube) != dual_cube.d)
    throw std::invalid_argument("cube_faces_all_open: expected a full-dimensional dual facet");
  if (c.params().S != 0)
    throw std::invalid_argument("cube_faces_all_open: defined for nearest-neighbour configurations");
  for (const auto& face : incident_subfacets(dual_cube, dual_cube.d - 1)) {
    const FacetKey edge = dual_facet(face);
    const auto pts = facet_points2(edge);
    Vertex a, b;
    a.d = b.d = edge.d;
    for (int i = 0; i < edge.d; ++i) {
      a.x[i] = pts[0][static_cast<std::size_t>(i)] / 2;
      b.x[i] = pts[1][static_cast<std::size_t>(i)] / 2;
    }
    // A plaquette is open iff its primal edge is closed.
    if (c.open_between(a, b)) return false;
  }
  return true;
}

}  // namespace perclab
