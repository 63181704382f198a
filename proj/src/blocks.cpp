#include "perclab/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "perclab/disjoint_sets.hpp"
#include "perclab/parallel.hpp"

namespace perclab {

namespace {

constexpr std::uint32_t kEscape = std::numeric_limits<std::uint32_t>::max();

}  // namespace

BlockEntry analyze_block(const Configuration& c, const Coords& z, int n) {
  const ClusterLabeling labeling = cluster_labels(c);
  return analyze_block(c, labeling, z, n);
}

BlockEntry analyze_block(const Configuration& c, const ClusterLabeling& labeling, const Coords& z, int n) {
  const int d = c.params().d;
  BlockEntry out;
  out.z = z;
  out.n = n;
  out.d = d;
  const std::vector<std::uint8_t> rn = escaping_mask_at(c, labeling, n, Vertex{z, static_cast<std::int8_t>(d)});
  const Box blk{n, d};
  const std::uint64_t total = blk.size();

  // Components of the block minus R_n under plain lattice adjacency.
  DisjointSets sets(total);
  for (std::uint64_t vi = 0; vi < total; ++vi) {
    if (rn[vi]) continue;
    const Vertex v = blk.vertex_at(vi);
    for (int i = 0; i < d; ++i) {
      Vertex u = v;
      u.x[i] += 1;
      if (u.x[i] > n) continue;
      const std::uint64_t ui = blk.index(u);
      if (!rn[ui]) sets.unite(vi, ui);
    }
  }
  // Compact labels in lexicographic first-visit order, so a component's label
  // ranks by its minimal vertex.
  out.comp_label.assign(total, kEscape);
  std::vector<std::uint32_t> root_label(total, kEscape);
  std::vector<std::uint64_t> sizes;
  for (std::uint64_t vi = 0; vi < total; ++vi) {
    if (rn[vi]) {
      ++out.rn_size;
      continue;
    }
    const std::uint64_t root = sets.find(vi);
    if (root_label[root] == kEscape) {
      root_label[root] = static_cast<std::uint32_t>(sizes.size());
      sizes.push_back(0);
    }
    out.comp_label[vi] = root_label[root];
    ++sizes[root_label[root]];
  }

  std::uint64_t best = 0;
  std::uint32_t best_label = 0;
  for (std::uint32_t lab = 0; lab < sizes.size(); ++lab) {
    if (sizes[lab] > best) {
      best = sizes[lab];
      best_label = lab;  // labels are in lexicographic-first order, so the tie-break is the first maximum
    }
  }
  out.component_sizes = sizes;
  std::sort(out.component_sizes.begin(), out.component_sizes.end(), std::greater<>());
  out.large_component = !sizes.empty() && 5 * best >= 4 * total;
  if (out.large_component) {
    out.green.assign(total, 0);
    for (std::uint64_t vi = 0; vi < total; ++vi)
      if (out.comp_label[vi] == best_label) out.green[vi] = 1;
  }
  return out;
}

std::uint64_t edge_boundary_internal(const VertexSet& c_set, int n) {
  if (c_set.items.empty()) return 0;
  const int d = c_set.items.front().d;
  const Box blk{n, d};
  std::vector<std::uint8_t> in(blk.size(), 0), seen(blk.size(), 0);
  for (const auto& v : c_set.items) {
    if (!blk.contains(v)) throw std::invalid_argument("set is not contained in the block");
    in[blk.index(v)] = 1;
  }
  std::uint64_t count = 0;
  for (const auto& v : c_set.items) {
    for (int i = 0; i < d; ++i) {
      for (int dir : {+1, -1}) {
        Vertex u = v;
        u.x[i] += dir;
        if (!blk.contains(u)) continue;
        const std::uint64_t ui = blk.index(u);
        if (!in[ui] && !seen[ui]) {
          seen[ui] = 1;
          ++count;
        }
      }
    }
  }
  return count;
}

bool isoperimetric_check(const VertexSet& c_set, int n, double K) {
  if (c_set.items.empty()) throw std::domain_error("isoperimetric check needs a nonempty connected set");
  const int d = c_set.items.front().d;
  const Box blk{n, d};
  // Connectivity under lattice adjacency.
  std::vector<std::uint8_t> visited(c_set.items.size(), 0);
  std::vector<std::size_t> stack{0};
  visited[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const Vertex v = c_set.items[stack.back()];
    stack.pop_back();
    for (int i = 0; i < d; ++i) {
      for (int dir : {+1, -1}) {
        Vertex u = v;
        u.x[i] += dir;
        const auto it = std::lower_bound(c_set.items.begin(), c_set.items.end(), u);
        if (it == c_set.items.end() || !(*it == u)) continue;
        const std::size_t j = static_cast<std::size_t>(it - c_set.items.begin());
        if (!visited[j]) {
          visited[j] = 1;
          ++reached;
          stack.push_back(j);
        }
      }
    }
  }
  if (reached != c_set.items.size()) throw std::domain_error("isoperimetric check needs a connected set");
  if (5 * c_set.items.size() > 4 * blk.size()) throw std::domain_error("isoperimetric check applies only to sets of at most 4/5 of the block");
  const double boundary = static_cast<double>(edge_boundary_internal(c_set, n));
  const double rhs = K * std::pow(static_cast<double>(c_set.items.size()), (static_cast<double>(d) - 1.0) / static_cast<double>(d));
  return boundary >= rhs;
}

bool counting_identity_check(const Configuration& c, const BlockEntry& entry) {
  const int d = c.params().d;
  const Box blk{entry.n, d};
  const std::uint64_t total = blk.size();
  if (entry.comp_label.size() != total) throw std::invalid_argument("block entry does not match the block size");
  std::uint64_t comp_total = 0;
  for (const auto s : entry.component_sizes) comp_total += s;
  if (comp_total + entry.rn_size != total) throw std::logic_error("block partition identity violated");

  // Every vertex adjacent to a component but outside it lies in R_n, so the
  // per-component boundary sum counts (escape vertex, adjacent component)
  // pairs; each escape vertex contributes at most 2d.
  std::uint64_t boundary_sum = 0;
  std::vector<std::uint32_t> labs;
  for (std::uint64_t vi = 0; vi < total; ++vi) {
    if (entry.comp_label[vi] != kEscape) continue;
    labs.clear();
    const Vertex v = blk.vertex_at(vi);
    for (int i = 0; i < d; ++i) {
      for (int dir : {+1, -1}) {
        Vertex u = v;
        u.x[i] += dir;
        if (!blk.contains(u)) continue;
        const std::uint32_t lab = entry.comp_label[blk.index(u)];
        if (lab != kEscape && std::find(labs.begin(), labs.end(), lab) == labs.end()) labs.push_back(lab);
      }
    }
    boundary_sum += labs.size();
  }
  if (2 * static_cast<std::uint64_t>(d) * entry.rn_size < boundary_sum)
    throw std::logic_error("escape-count inequality violated");
  return true;
}

Estimate estimate_large_component_probability(const ModelParams& params, int n, std::uint64_t samples, std::uint64_t seed, unsigned jobs) {
  if (samples == 0) throw std::invalid_argument("need at least one sample");
  // One layer beyond the far box, so the boundary-touching stand-in fires
  // only for clusters that really left the escape radius.
  const Box box{2 * n + 2 * params.F, params.d};
  const auto flags = map_indexed<std::uint8_t>(samples, jobs, [&](std::uint64_t i) -> std::uint8_t {
    const Configuration c = Configuration::sample(params, box, seed, i);
    const BlockEntry entry = analyze_block(c, Coords{}, n);
    return entry.large_component ? 1 : 0;
  });
  std::uint64_t hits = 0;
  for (const auto f : flags) hits += f;
  return binomial_estimate(hits, samples, seed);
}

BlockGrid BlockGrid::sample(const ModelParams& params, int n, int z_radius, std::uint64_t seed, std::uint64_t rng_id) {
  if (n < 1 || z_radius < 1) throw std::invalid_argument("block scale and grid radius must be positive");
  const int box_r = n * z_radius + 2 * n + 2 * params.F - 1;
  BlockGrid g{Configuration::sample(params, Box{box_r, params.d}, seed, rng_id), n, Box{z_radius, params.d}};
  return g;
}

BlockFieldReport good_block_field(const BlockGrid& grid, unsigned jobs) {
  const int d = grid.config.params().d;
  const ClusterLabeling labeling = cluster_labels(grid.config);
  const std::uint64_t count = grid.z_range.size();
  BlockFieldReport report;
  report.entries = map_indexed<BlockEntry>(count, jobs, [&](std::uint64_t i) {
    return analyze_block(grid.config, labeling, grid.z_range.vertex_at(i).x, grid.n);
  });
  report.good.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) report.good[i] = report.entries[i].large_component ? 1 : 0;

  // Spanning of the good-block field along axis 0; blocks are adjacent when
  // their indices are at L-inf distance 1 (nonempty block intersection).
  std::vector<Coords> offsets;
  {
    Coords o{};
    for (int i2 = 0; i2 < d; ++i2) o[i2] = -1;
    for (;;) {
      bool all_zero = true;
      for (int i2 = 0; i2 < d; ++i2)
        if (o[i2] != 0) all_zero = false;
      if (!all_zero) offsets.push_back(o);
      int k = d - 1;
      while (k >= 0 && o[k] == 1) o[k--] = -1;
      if (k < 0) break;
      ++o[k];
    }
  }
  DisjointSets sets(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    if (!report.good[i]) continue;
    const Vertex z = grid.z_range.vertex_at(i);
    for (const auto& off : offsets) {
      Vertex u = z;
      for (int i2 = 0; i2 < d; ++i2) u.x[i2] += off[i2];
      if (!grid.z_range.contains(u)) continue;
      const std::uint64_t ui = grid.z_range.index(u);
      if (report.good[ui]) sets.unite(i, ui);
    }
  }
  const int zr = grid.z_range.n;
  std::vector<std::uint8_t> lo_face(count, 0), hi_face(count, 0);
  for (std::uint64_t i = 0; i < count; ++i) {
    if (!report.good[i]) continue;
    const Vertex z = grid.z_range.vertex_at(i);
    const std::uint64_t root = sets.find(i);
    if (z.x[0] == -zr + 1) lo_face[root] = 1;
    if (z.x[0] == zr) hi_face[root] = 1;
  }
  for (std::uint64_t i = 0; i < count; ++i) {
    if (lo_face[i] && hi_face[i]) {
      report.spanning = true;
      break;
    }
  }
  return report;
}

OverlapReport green_overlap_check(const BlockEntry& a, const BlockEntry& b) {
  if (a.n != b.n || a.d != b.d) throw std::invalid_argument("block shapes differ");
  if (a.green.empty() || b.green.empty()) throw std::invalid_argument("overlap check requires two green-bearing blocks");
  const int n = a.n;
  const int d = a.d;
  int linf = 0;
  for (int i = 0; i < d; ++i) linf = std::max(linf, std::abs(a.z[i] - b.z[i]));
  if (linf != 1) throw std::invalid_argument("blocks are not adjacent");

  const Box blk{n, d};
  // Overlap of B_n + n*za and B_n + n*zb in block-a local coordinates.
  Coords lo{}, hi{};
  std::uint64_t overlap = 1;
  int axis_diffs = 0;
  for (int i = 0; i < d; ++i) {
    const int diff = b.z[i] - a.z[i];  // in {-1,0,1}
    if (diff != 0) ++axis_diffs;
    // Local coordinates of block a run over [-n+1, n]; block b occupies
    // [-n+1, n] + n*diff in the same frame.
    lo[i] = std::max(-n + 1, -n + 1 + n * diff);
    hi[i] = std::min(n, n + n * diff);
    overlap *= static_cast<std::uint64_t>(hi[i] - lo[i] + 1);
  }
  OverlapReport rep;
  rep.overlap_size = overlap;
  // Walk the overlap box.
  Coords x = lo;
  for (;;) {
    Vertex va{x, static_cast<std::int8_t>(d)};
    Vertex vb = va;
    for (int i = 0; i < d; ++i) vb.x[i] -= n * (b.z[i] - a.z[i]);
    if (a.green[blk.index(va)] && b.green[blk.index(vb)]) ++rep.bigreen_size;
    int k = d - 1;
    while (k >= 0 && x[k] == hi[k]) {
      x[k] = lo[k];
      --k;
    }
    if (k < 0) break;
    ++x[k];
  }
  rep.nonempty = rep.bigreen_size > 0;
  rep.bigreen_fraction = static_cast<double>(rep.bigreen_size) / static_cast<double>(rep.overlap_size);
  if (axis_diffs == 1 && !rep.nonempty)
    throw std::logic_error("axis-adjacent green blocks must share a bi-green vertex");
  return rep;
}

}  // namespace perclab
