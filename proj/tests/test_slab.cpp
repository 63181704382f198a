// Slab climb process: reachability oracle by direct BFS over the move rule,
// the flat sheet at p = 0, censoring at p = 1, openness of the interface,
// and the exact zero-sum projection.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <vector>

#include "perclab/geometry.hpp"
#include "perclab/percolation.hpp"
#include "perclab/slab.hpp"

using namespace perclab;

namespace {

// Independent reachability: BFS where s-increasing steps need an open edge
// and s-decreasing steps are free; all moves stay inside the slab.
std::vector<std::uint8_t> brute_reach(const Configuration& c, const SlabSpec& slab) {
  const std::uint64_t total = slab.vertex_count();
  std::vector<std::uint8_t> mask(total, 0);
  std::vector<std::uint64_t> stack;
  for (std::uint64_t i = 0; i < total; ++i) {
    if (coord_sum(slab.vertex_at(i)) == 0) {
      mask[i] = 1;
      stack.push_back(i);
    }
  }
  while (!stack.empty()) {
    const Vertex v = slab.vertex_at(stack.back());
    stack.pop_back();
    for (int i = 0; i < slab.d; ++i) {
      for (int dir : {+1, -1}) {
        Vertex u = v;
        u.x[i] += dir;
        if (!slab.contains(u)) continue;
        const bool ascending = coord_sum(u) > coord_sum(v);
        if (ascending && !c.open_between(v, u)) continue;
        const std::uint64_t ui = slab.index(u);
        if (!mask[ui]) {
          mask[ui] = 1;
          stack.push_back(ui);
        }
      }
    }
  }
  return mask;
}

}  // namespace

TEST_CASE("slab shape, indexing, and the covering box") {
  const SlabSpec slab{3, 3, 4};
  CHECK(slab.vertex_count() == 36u * 5u);
  const Box box{slab.required_box_radius(), 3};
  for (std::uint64_t i = 0; i < slab.vertex_count(); ++i) {
    const Vertex v = slab.vertex_at(i);
    CHECK(slab.contains(v));
    CHECK(slab.index(v) == i);
    CHECK(coord_sum(v) >= 0);
    CHECK(coord_sum(v) <= 4);
    CHECK(box.contains(v));
  }
}

TEST_CASE("closed configurations leave the flat bottom sheet") {
  const SlabSpec slab{3, 3, 3};
  const Configuration c =
      Configuration::sample(ModelParams{3, 0.0, 0, 0}, Box{slab.required_box_radius(), 3}, 4);
  const auto reach = climb_reachable_mask(c, slab);
  std::uint64_t reached = 0;
  for (std::uint64_t i = 0; i < reach.size(); ++i) {
    if (!reach[i]) continue;
    ++reached;
    CHECK(coord_sum(slab.vertex_at(i)) == 0);
  }
  CHECK(reached == 36u);  // (2w)^(d-1) base vertices

  const InterfaceResult sheet = ascending_interface(c, slab, reach);
  CHECK_FALSE(sheet.censored_top);
  CHECK(sheet.reach_size == 36u);
  // The sheet consists of the duals of every in-slab ascending edge out of
  // the base layer, each sitting half a step up.
  std::uint64_t expected = 0;
  for (std::uint64_t i = 0; i < slab.vertex_count(); ++i) {
    const Vertex v = slab.vertex_at(i);
    if (coord_sum(v) != 0) continue;
    for (int k = 0; k < 3; ++k) {
      Vertex u = v;
      u.x[k] += 1;
      if (slab.contains(u)) ++expected;
    }
  }
  CHECK(sheet.plaquettes.size() == expected);
  for (const auto& f : sheet.plaquettes.items) CHECK(facet_coord_sum2(f) == 1);
}

TEST_CASE("open configurations reach the top and close no interface") {
  const SlabSpec slab{3, 2, 3};
  const Configuration c =
      Configuration::sample(ModelParams{3, 1.0, 0, 0}, Box{slab.required_box_radius(), 3}, 4);
  const auto reach = climb_reachable_mask(c, slab);
  const InterfaceResult res = ascending_interface(c, slab, reach);
  CHECK(res.reach_size == slab.vertex_count());
  CHECK(res.censored_top);
  CHECK(res.plaquettes.empty());
}

TEST_CASE("climb reachability equals the brute-force move-rule BFS") {
  for (const auto& [d, w, h] : {std::tuple{3, 2, 3}, std::tuple{4, 2, 2}}) {
    const SlabSpec slab{d, w, h};
    const Box box{slab.required_box_radius(), d};
    for (std::uint64_t rng_id = 0; rng_id < 25; ++rng_id) {
      const Configuration c = Configuration::sample(ModelParams{d, 0.35, 0, 0}, box, 88, rng_id);
      CHECK(climb_reachable_mask(c, slab) == brute_reach(c, slab));
    }
  }
}

TEST_CASE("interface plaquettes are open and separate reached from unreached") {
  const SlabSpec slab{3, 3, 5};
  const Box box{slab.required_box_radius(), 3};
  for (std::uint64_t rng_id = 0; rng_id < 10; ++rng_id) {
    const Configuration c = Configuration::sample(ModelParams{3, 0.12, 0, 0}, box, 91, rng_id);
    const auto reach = climb_reachable_mask(c, slab);
    const InterfaceResult res = ascending_interface(c, slab, reach);
    for (const auto& f : res.plaquettes.items) {
      const FacetKey e = dual_facet(f);
      const auto pts = facet_points2(e);
      Vertex a{}, b{};
      a.d = b.d = 3;
      for (int i = 0; i < 3; ++i) {
        a.x[i] = pts[0][i] / 2;
        b.x[i] = pts[1][i] / 2;
      }
      CHECK_FALSE(c.open_between(a, b));  // open plaquette = closed primal edge
      const bool a_low = coord_sum(a) < coord_sum(b);
      const Vertex& low = a_low ? a : b;
      const Vertex& high = a_low ? b : a;
      CHECK(reach[slab.index(low)] == 1);
      CHECK(reach[slab.index(high)] == 0);
    }
  }
}

TEST_CASE("zero-sum projection is exact and shift-invariant along ones") {
  const SlabSpec slab{3, 4, 4};
  const FacetKey f = facet_at(make_vertex({1, -2, 0}), 0b011, Lattice::kDual);
  const ZeroSumPoint z = project_zero_sum(facet_center2(f), 3);
  CHECK(z.den == 6);  // doubled input over denominator 2d
  CHECK(std::accumulate(z.num.begin(), z.num.end(), std::int64_t{0}) == 0);

  // Adding a constant to every coordinate projects to the same point.
  Coords shifted = facet_center2(f);
  for (int i = 0; i < 3; ++i) shifted[i] += 4;
  CHECK(project_zero_sum(shifted, 3) == z);

  // Distinct lateral positions at the same height stay distinct.
  Coords other = facet_center2(f);
  other[0] += 2;
  other[1] -= 2;
  CHECK_FALSE(project_zero_sum(other, 3) == z);

  // Interior filter drops facets near the walls, keeps central ones.
  const FacetKey central = facet_at(make_vertex({0, 0, 1}), 0b011, Lattice::kDual);
  CHECK(slab_interior_facet(slab, central));
  const FacetKey rim = facet_at(make_vertex({3, 0, -2}), 0b011, Lattice::kDual);
  CHECK_FALSE(slab_interior_facet(slab, rim));
}
