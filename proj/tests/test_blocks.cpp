// Block experiment: partition identity and escape-count inequality on
// sampled blocks, degenerate-parameter grids, the isoperimetric scan over
// small animals, and the bi-green overlap guarantee for adjacent good blocks.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <vector>

#include "perclab/animals.hpp"
#include "perclab/blocks.hpp"
#include "perclab/geometry.hpp"
#include "perclab/percolation.hpp"
#include "perclab/topology.hpp"

using namespace perclab;

TEST_CASE("block partition identity and escape inequality on sampled blocks") {
  for (const auto& [d, n, p] : {std::tuple{2, 3, 0.45}, std::tuple{3, 2, 0.25}}) {
    const ModelParams params{d, p, 0, 0};
    const Box box{2 * n + 2, d};
    const Box blk{n, d};
    for (std::uint64_t rng_id = 0; rng_id < 200; ++rng_id) {
      const Configuration c = Configuration::sample(params, box, 606, rng_id);
      const BlockEntry entry = analyze_block(c, Coords{}, n);
      std::uint64_t comp_total = 0;
      for (const auto s : entry.component_sizes) comp_total += s;
      REQUIRE(comp_total + entry.rn_size == blk.size());
      REQUIRE(counting_identity_check(c, entry));
      // Flag consistency with the 4/5 threshold and the green mask.
      const bool expect_large = !entry.component_sizes.empty() && 5 * entry.component_sizes.front() >= 4 * blk.size();
      CHECK(entry.large_component == expect_large);
      std::uint64_t green_size = 0;
      for (const auto g : entry.green) green_size += g;
      if (entry.large_component)
        CHECK(green_size == entry.component_sizes.front());
      else
        CHECK(entry.green.empty());
    }
  }
}

TEST_CASE("closed configurations make every block good and spanning") {
  const BlockGrid grid = BlockGrid::sample(ModelParams{2, 0.0, 0, 0}, 3, 2, 41);
  const BlockFieldReport report = good_block_field(grid);
  CHECK(report.entries.size() == grid.z_range.size());
  for (const auto g : report.good) CHECK(g == 1);
  CHECK(report.spanning);
  // Each block is one full component.
  for (const auto& e : report.entries) {
    CHECK(e.rn_size == 0);
    REQUIRE(e.component_sizes.size() == 1);
    CHECK(e.component_sizes.front() == Box{3, 2}.size());
  }
}

TEST_CASE("fully open configurations make every block escape-filled") {
  const BlockGrid grid = BlockGrid::sample(ModelParams{2, 1.0, 0, 0}, 3, 2, 41);
  const BlockFieldReport report = good_block_field(grid);
  for (const auto g : report.good) CHECK(g == 0);
  CHECK_FALSE(report.spanning);
  for (const auto& e : report.entries) CHECK(e.rn_size == Box{3, 2}.size());
}

TEST_CASE("bi-green overlap of adjacent good blocks") {
  // Deterministic: closed configuration, all blocks green everywhere.
  const BlockGrid grid = BlockGrid::sample(ModelParams{2, 0.0, 0, 0}, 4, 1, 7);
  const BlockFieldReport report = good_block_field(grid);
  const auto entry_at = [&](int zx, int zy) -> const BlockEntry& {
    return report.entries[grid.z_range.index(make_vertex({zx, zy}))];
  };
  const OverlapReport axis = green_overlap_check(entry_at(0, 0), entry_at(1, 0));
  CHECK(axis.nonempty);
  CHECK(axis.overlap_size == 32);  // half of an 8x8 block
  CHECK(axis.bigreen_size == 32);
  CHECK(axis.bigreen_fraction == 1.0);

  const OverlapReport diag = green_overlap_check(entry_at(0, 0), entry_at(1, 1));
  CHECK(diag.overlap_size == 16);  // quarter block
  CHECK(diag.nonempty);

  CHECK_THROWS_AS(green_overlap_check(entry_at(0, 0), entry_at(0, 0)), std::invalid_argument);  // not adjacent

  // Random near-critical grids: every axis-adjacent good pair shares green
  // mass in the half overlap (the checker itself asserts the guarantee).
  int pairs = 0;
  for (std::uint64_t rng_id = 0; rng_id < 30; ++rng_id) {
    const BlockGrid g = BlockGrid::sample(ModelParams{2, 0.40, 0, 0}, 6, 2, 11, rng_id);
    const BlockFieldReport rep = good_block_field(g);
    const std::uint64_t total = g.z_range.size();
    for (std::uint64_t i = 0; i < total; ++i) {
      if (!rep.good[i]) continue;
      const Vertex z = g.z_range.vertex_at(i);
      for (int axis_dir = 0; axis_dir < 2; ++axis_dir) {
        Vertex zz = z;
        zz.x[axis_dir] += 1;
        if (!g.z_range.contains(zz)) continue;
        const std::uint64_t j = g.z_range.index(zz);
        if (!rep.good[j]) continue;
        const OverlapReport rep_ij = green_overlap_check(rep.entries[i], rep.entries[j]);
        CHECK(rep_ij.nonempty);
        ++pairs;
      }
    }
  }
  CHECK(pairs > 50);
}

TEST_CASE("internal edge boundary and the isoperimetric scan") {
  const VertexSet lone = VertexSet::of({make_vertex({0, 0})});
  CHECK(edge_boundary_internal(lone, 4) == 4);
  // A corner vertex of the block has only in-block neighbours counted.
  const VertexSet corner = VertexSet::of({make_vertex({4, 4})});
  CHECK(edge_boundary_internal(corner, 4) == 2);

  CHECK(isoperimetric_check(lone, 4, 1.0));
  CHECK_FALSE(isoperimetric_check(lone, 4, 5.0));  // a singleton has boundary 4 < 5

  // Disconnected and oversized sets are outside the bound's hypotheses.
  CHECK_THROWS_AS(isoperimetric_check(VertexSet::of({make_vertex({0, 0}), make_vertex({2, 0})}), 4, 1.0),
                  std::domain_error);
  std::vector<Vertex> everything;
  for (std::uint64_t i = 0; i < Box{2, 2}.size(); ++i) everything.push_back(Box{2, 2}.vertex_at(i));
  CHECK_THROWS_AS(isoperimetric_check(VertexSet::of(everything), 2, 1.0), std::domain_error);

  // All connected shapes of up to 6 cells, centred in a roomy block, satisfy
  // the d = 2 bound with K = 1.
  for (const auto& cells : connected_sets_up_to(2, 6)) {
    const VertexSet c_set = VertexSet::of(cells);
    CHECK(isoperimetric_check(c_set, 8, 1.0));
  }
  // Same scan in d = 3 with the (d-1)/d exponent.
  for (const auto& cells : connected_sets_up_to(3, 4)) {
    const VertexSet c_set = VertexSet::of(cells);
    CHECK(isoperimetric_check(c_set, 6, 1.0));
  }
}

TEST_CASE("large-component probability estimates are sane at the extremes") {
  const Estimate closed = estimate_large_component_probability(ModelParams{2, 0.0, 0, 0}, 2, 200, 13);
  CHECK(closed.value == 1.0);
  const Estimate open = estimate_large_component_probability(ModelParams{2, 1.0, 0, 0}, 2, 200, 13);
  CHECK(open.value == 0.0);
  const Estimate mid = estimate_large_component_probability(ModelParams{2, 0.5, 0, 0}, 2, 500, 13);
  CHECK(mid.value > 0.0);
  CHECK(mid.value < 1.0);
}

TEST_CASE("block grids reject undersized parameters") {
  CHECK_THROWS_AS(BlockGrid::sample(ModelParams{2, 0.5, 0, 0}, 0, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(BlockGrid::sample(ModelParams{2, 0.5, 0, 0}, 3, 0, 1), std::invalid_argument);
}
