// Bond configurations and clusters: seeded sampling, the lazy per-edge
// coupling, exhaustive union-find-vs-BFS cluster oracles, boundary flags,
// and the finite complement carved out by boundary-spanning clusters.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <vector>

#include "perclab/geometry.hpp"
#include "perclab/percolation.hpp"
#include "perclab/rng.hpp"

using namespace perclab;

namespace {

// Independent reference labeling: BFS over open edges, labels in first-visit
// order scanning vertices lexicographically.
std::vector<std::uint32_t> bfs_labels(const Configuration& c) {
  const std::uint64_t total = c.box().size();
  std::vector<std::vector<std::uint64_t>> adj(total);
  c.for_each_open_edge([&](std::uint64_t a, std::uint64_t b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  });
  std::vector<std::uint32_t> label(total, UINT32_MAX);
  std::uint32_t next = 0;
  std::vector<std::uint64_t> stack;
  for (std::uint64_t s = 0; s < total; ++s) {
    if (label[s] != UINT32_MAX) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::uint64_t v = stack.back();
      stack.pop_back();
      for (const std::uint64_t u : adj[v]) {
        if (label[u] == UINT32_MAX) {
          label[u] = next;
          stack.push_back(u);
        }
      }
    }
    ++next;
  }
  return label;
}

// Partition equality up to renaming: normalize both to first-occurrence ids.
std::vector<std::uint32_t> normalized(const std::vector<std::uint32_t>& label) {
  std::vector<std::uint32_t> map;
  std::vector<std::uint32_t> out(label.size());
  for (std::size_t i = 0; i < label.size(); ++i) {
    const std::uint32_t l = label[i];
    auto it = std::find(map.begin(), map.end(), l);
    if (it == map.end()) {
      map.push_back(l);
      it = map.end() - 1;
    }
    out[i] = static_cast<std::uint32_t>(it - map.begin());
  }
  return out;
}

std::vector<std::uint8_t> bits_from_mask(std::uint64_t mask, std::uint64_t count) {
  std::vector<std::uint8_t> bits(count, 0);
  for (std::uint64_t e = 0; e < count; ++e) bits[e] = (mask >> e) & 1u;
  return bits;
}

}  // namespace

TEST_CASE("sampling is deterministic and the open fraction tracks p") {
  const ModelParams params{2, 0.37, 0, 0};
  const Box box{8, 2};
  const Configuration a = Configuration::sample(params, box, 99);
  const Configuration b = Configuration::sample(params, box, 99);
  CHECK(a.words() == b.words());
  CHECK(a.open_fraction() == doctest::Approx(0.37).epsilon(0.15));

  const Configuration other_stream = Configuration::sample(params, box, 99, 1);
  CHECK(other_stream.words() != a.words());
}

TEST_CASE("lazy edge openness agrees with sampled configurations") {
  // Regression for the offset-rank lookup: the offsets are in enumeration
  // order, not sorted, so every (base, offset) pair must round-trip.
  for (const auto& [d, S, n] : {std::tuple{2, 0, 4}, std::tuple{2, 2, 4}, std::tuple{3, 1, 3}}) {
    const ModelParams params{d, 0.5, S, 0};
    const Box box{n, d};
    const std::uint64_t seed = 1234;
    const Configuration c = Configuration::sample(params, box, seed, 7);
    std::uint64_t checked = 0;
    for (std::uint64_t vi = 0; vi < box.size(); ++vi) {
      const Vertex a = box.vertex_at(vi);
      for (const Vertex& b : spread_out_neighbors(a, S)) {
        if (!box.contains(b)) continue;
        CHECK(c.open_between(a, b) == open_edge_lazy(seed, 7, 0.5, a, b, S));
        ++checked;
      }
    }
    CHECK(checked > 100);
  }
}

TEST_CASE("monotone coupling in p on shared uniforms") {
  const Box box{6, 2};
  const Configuration lo = Configuration::sample(ModelParams{2, 0.3, 0, 0}, box, 5);
  const Configuration hi = Configuration::sample(ModelParams{2, 0.6, 0, 0}, box, 5);
  for (std::uint64_t e = 0; e < lo.edge_count(); ++e)
    if (lo.open(e)) CHECK(hi.open(e));
}

TEST_CASE("edge states are independent of the box size") {
  const ModelParams params{3, 0.45, 0, 0};
  const Configuration small = Configuration::sample(params, Box{3, 3}, 77);
  const Configuration large = Configuration::sample(params, Box{6, 3}, 77);
  const Box inner{3, 3};
  small.for_each_edge([&](std::uint64_t e, std::uint64_t ai, std::uint64_t bi) {
    const Vertex a = inner.vertex_at(ai);
    const Vertex b = inner.vertex_at(bi);
    CHECK(small.open(e) == large.open_between(a, b));
  });
}

TEST_CASE("degenerate parameters") {
  const Box box{4, 2};
  const Configuration closed = Configuration::sample(ModelParams{2, 0.0, 0, 0}, box, 3);
  CHECK(closed.open_fraction() == 0.0);
  const Configuration open = Configuration::sample(ModelParams{2, 1.0, 0, 0}, box, 3);
  CHECK(open.open_fraction() == 1.0);

  const ClusterLabeling all = cluster_labels(open);
  CHECK(all.clusters.size() == 1);
  CHECK(all.clusters[0].size == box.size());
  CHECK(all.clusters[0].wired_infinite);

  const ClusterLabeling none = cluster_labels(closed);
  CHECK(none.clusters.size() == box.size());
  for (const auto& info : none.clusters) CHECK_FALSE(info.wired_infinite);  // singletons have no interior companion
}

TEST_CASE("union-find labels equal BFS labels, exhaustive 2^12 in d = 3") {
  const ModelParams params{3, 0.5, 0, 0};
  const Box box{1, 3};
  Configuration probe = Configuration::from_bits(params, box, std::vector<std::uint8_t>(12, 0));
  REQUIRE(probe.edge_count() == 12);
  for (std::uint64_t mask = 0; mask < (1u << 12); ++mask) {
    const Configuration c = Configuration::from_bits(params, box, bits_from_mask(mask, 12));
    const ClusterLabeling labeling = cluster_labels(c);
    const auto expect = normalized(bfs_labels(c));
    REQUIRE(normalized(labeling.label) == expect);
    // Sizes agree with label multiplicities.
    std::vector<std::uint64_t> counts(labeling.clusters.size(), 0);
    for (const auto l : labeling.label) ++counts[l];
    for (std::size_t i = 0; i < counts.size(); ++i) REQUIRE(labeling.clusters[i].size == counts[i]);
  }
}

TEST_CASE("union-find labels equal BFS labels, randomized 4x4 in d = 2") {
  const ModelParams params{2, 0.5, 0, 0};
  const Box box{2, 2};
  Configuration probe = Configuration::from_bits(params, box, std::vector<std::uint8_t>(24, 0));
  REQUIRE(probe.edge_count() == 24);
  rng::Counter rng(0xC1B5u);
  for (int trial = 0; trial < 20000; ++trial) {
    const std::uint64_t mask = rng.next_u64() & ((1u << 24) - 1u);
    const Configuration c = Configuration::from_bits(params, box, bits_from_mask(mask, 24));
    REQUIRE(normalized(cluster_labels(c).label) == normalized(bfs_labels(c)));
  }
}

TEST_CASE("from_bits reproduces the given bits") {
  const ModelParams params{2, 0.5, 1, 0};
  const Box box{2, 2};
  rng::Counter rng(0xF00Du);
  std::vector<std::uint8_t> bits;
  bits.resize(Configuration::sample(params, box, 1).edge_count());
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_below(2));
  const Configuration c = Configuration::from_bits(params, box, bits);
  for (std::uint64_t e = 0; e < c.edge_count(); ++e) CHECK(c.open(e) == (bits[e] != 0));
}

TEST_CASE("boundary flags and cluster radius on a hand-built column") {
  // Open the vertical edges of the column x = 0 in the 4x4 box: one cluster
  // spanning the axis-1 faces, everything else singletons.
  const ModelParams params{2, 0.5, 0, 0};
  const Box box{2, 2};
  std::vector<std::uint8_t> bits(24, 0);
  Configuration probe = Configuration::from_bits(params, box, bits);
  std::vector<std::pair<Vertex, Vertex>> column;
  for (int y = -1; y < 2; ++y) column.push_back({make_vertex({0, y}), make_vertex({0, y + 1})});
  probe.for_each_edge([&](std::uint64_t e, std::uint64_t ai, std::uint64_t bi) {
    const Vertex a = box.vertex_at(ai);
    const Vertex b = box.vertex_at(bi);
    for (const auto& [u, v] : column)
      if ((a == u && b == v) || (a == v && b == u)) bits[e] = 1;
  });
  const Configuration c = Configuration::from_bits(params, box, bits);
  const ClusterLabeling labeling = cluster_labels(c);

  const ClusterInfo& col = labeling.clusters[labeling.label_of(make_vertex({0, 0}))];
  CHECK(col.size == 4);
  CHECK(col.touches_boundary);
  CHECK(col.wired_infinite);
  CHECK(col.bb_lo == Coords{0, -1});
  CHECK(col.bb_hi == Coords{0, 2});

  const RadiusResult rad = cluster_radius(labeling, make_vertex({0, 0}));
  CHECK(rad.value == 2);
  CHECK(rad.censored);

  const RadiusResult lone = cluster_radius(labeling, make_vertex({1, 0}));
  CHECK(lone.value == 0);
  CHECK_FALSE(lone.censored);

  // X^0 drops exactly the wired column; X^1 also drops its L-inf 1-shell.
  const auto x0 = finite_complement_mask(labeling, 0);
  const auto x1 = finite_complement_mask(labeling, 1);
  for (std::uint64_t i = 0; i < box.size(); ++i) {
    const Vertex v = box.vertex_at(i);
    CHECK((x0[i] != 0) == (v.x[0] != 0));
    CHECK((x1[i] != 0) == (v.x[0] > 1 || v.x[0] < -1));
  }
  CHECK(finite_complement(labeling, 0).size() == 12);
  CHECK(finite_complement(labeling, 1).size() == 4);
}

TEST_CASE("escape sets at the extremes") {
  const Box box{5, 2};
  const Configuration closed = Configuration::sample(ModelParams{2, 0.0, 0, 0}, box, 2);
  const ClusterLabeling none = cluster_labels(closed);
  CHECK(escaping_vertices(closed, none, 2).empty());

  const Configuration open = Configuration::sample(ModelParams{2, 1.0, 0, 0}, box, 2);
  const ClusterLabeling all = cluster_labels(open);
  CHECK(escaping_vertices(open, all, 2).size() == Box{2, 2}.size());
}

TEST_CASE("cube face openness matches the dual edge states") {
  const ModelParams params{3, 0.5, 0, 0};
  const Box box{3, 3};
  const Configuration c = Configuration::sample(params, box, 31);
  const FacetKey cube = facet_at(make_vertex({0, 0, 0}), 0b111, Lattice::kDual);
  bool expected = true;
  for (const FacetKey& face : incident_subfacets(cube, 2)) {
    const FacetKey e = dual_facet(face);  // primal edge crossing the face
    const auto pts = facet_points2(e);
    Vertex a{}, b{};
    a.d = b.d = 3;
    for (int i = 0; i < 3; ++i) {
      a.x[i] = pts[0][i] / 2;
      b.x[i] = pts[1][i] / 2;
    }
    if (c.open_between(a, b)) expected = false;  // open edge -> closed plaquette
  }
  CHECK(cube_faces_all_open(c, cube) == expected);
}
