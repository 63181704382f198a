// Lattice geometry: facet keys, the orthogonal dual, adjacency, and box /
// window indexing. The dual and adjacency tests are exhaustive over small
// coordinate ranges so they double as oracles for the randomized suites.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

#include "perclab/geometry.hpp"
#include "perclab/percolation.hpp"

using namespace perclab;

namespace {

// All facets with plain corner coordinates in [-r, r]^d.
std::vector<FacetKey> facets_in_range(int d, int r, Lattice lattice) {
  std::vector<FacetKey> out;
  std::vector<int> c(static_cast<std::size_t>(d), -r);
  for (;;) {
    const Vertex corner = make_vertex(c);
    for (std::uint8_t axes = 0; axes < (1u << d); ++axes) out.push_back(facet_at(corner, axes, lattice));
    int i = d - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == r) c[static_cast<std::size_t>(i--)] = -r;
    if (i < 0) break;
    ++c[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace

TEST_CASE("vertex metrics and translation") {
  const Vertex a = make_vertex({1, -2, 3});
  const Vertex b = make_vertex({-1, 0, 3});
  CHECK(a.d == 3);
  CHECK(l1_dist(a, b) == 4);
  CHECK(linf_dist(a, b) == 2);
  CHECK(linf_norm(a) == 3);
  CHECK(coord_sum(a) == 2);
  CHECK(translate(a, b) == make_vertex({0, -2, 6}));
  CHECK_THROWS_AS(make_vertex({1}), std::invalid_argument);           // d < 2
  CHECK_THROWS_AS(make_vertex({1, 2, 3, 4, 5, 6, 7, 8, 9}), std::invalid_argument);  // d > 8
}

TEST_CASE("facet construction and derived quantities") {
  const Vertex corner = make_vertex({0, 1, -1});
  const FacetKey f = facet_at(corner, 0b101, Lattice::kPrimal);
  CHECK(facet_dim(f) == 2);
  CHECK(f.base2 == Coords{0, 2, -2});
  CHECK(facet_center2(f) == Coords{1, 2, -1});
  CHECK(facet_coord_sum2(f) == 2);
  CHECK(facet_points2(f).size() == 4);

  const FacetKey dualf = facet_at(corner, 0b001, Lattice::kDual);
  CHECK(dualf.base2 == Coords{1, 3, -1});  // dual corners sit on odd coordinates
  CHECK(facet_dim(dualf) == 1);

  const FacetKey v = vertex_facet(corner);
  CHECK(facet_dim(v) == 0);
  CHECK(facet_points2(v).size() == 1);
}

TEST_CASE("edges between nearest neighbours") {
  const Vertex a = make_vertex({0, 0});
  const Vertex b = make_vertex({1, 0});
  const FacetKey e = edge_between(a, b);
  CHECK(e == edge_between(b, a));
  CHECK(facet_dim(e) == 1);
  CHECK(e.lattice == Lattice::kPrimal);
  CHECK_THROWS_AS(edge_between(a, make_vertex({1, 1})), std::invalid_argument);  // not nearest neighbours
  CHECK_THROWS_AS(edge_between(a, a), std::invalid_argument);
}

TEST_CASE("orthogonal dual is a centre-preserving involution") {
  for (int d : {2, 3, 4}) {
    const int r = d == 4 ? 1 : 2;
    for (Lattice lat : {Lattice::kPrimal, Lattice::kDual}) {
      for (const FacetKey& f : facets_in_range(d, r, lat)) {
        const FacetKey g = dual_facet(f);
        CHECK(g.lattice != f.lattice);
        CHECK(facet_dim(g) == d - facet_dim(f));
        CHECK(facet_center2(g) == facet_center2(f));
        CHECK(dual_facet(g) == f);
      }
    }
  }
}

TEST_CASE("edge duals are plaquettes sharing the centre") {
  for (int d : {2, 3, 4}) {
    const std::vector<Vertex> dirs = spread_out_neighbors(make_vertex(std::vector<int>(static_cast<std::size_t>(d), 0)), 0);
    std::vector<int> c(static_cast<std::size_t>(d), -1);
    for (;;) {
      const Vertex a = make_vertex(c);
      for (const Vertex& step : dirs) {
        const Vertex b = translate(a, step);
        const FacetKey e = edge_between(a, b);
        const FacetKey pi = edge_dual_plaquette(e);
        CHECK(is_plaquette(pi));
        CHECK(pi.lattice == Lattice::kDual);
        CHECK(facet_center2(pi) == facet_center2(e));
        CHECK(dual_facet(pi) == e);
      }
      int i = d - 1;
      while (i >= 0 && c[static_cast<std::size_t>(i)] == 1) c[static_cast<std::size_t>(i--)] = -1;
      if (i < 0) break;
      ++c[static_cast<std::size_t>(i)];
    }
  }
}

TEST_CASE("subfacet counts match the binomial formula") {
  // An m-facet has C(m, k) * 2^(m-k) k-subfacets.
  const FacetKey cube = facet_at(make_vertex({0, 0, 0}), 0b111, Lattice::kPrimal);
  CHECK(incident_subfacets(cube, 0).size() == 8);
  CHECK(incident_subfacets(cube, 1).size() == 12);
  CHECK(incident_subfacets(cube, 2).size() == 6);
  CHECK(incident_subfacets(cube, 3).size() == 1);

  const FacetKey plaq = facet_at(make_vertex({0, 0, 0}), 0b011, Lattice::kDual);
  CHECK(incident_subfacets(plaq, 1).size() == 4);
  CHECK(incident_subfacets(plaq, 0).size() == 4);

  // Subfacets of a facet are facets of the same lattice contained in it.
  for (const FacetKey& sub : incident_subfacets(cube, 2)) {
    CHECK(sub.lattice == cube.lattice);
    CHECK(facet_dim(sub) == 2);
  }
}

TEST_CASE("plaquette adjacency agrees with brute-force subfacet intersection") {
  for (int d : {3, 4}) {
    std::vector<FacetKey> plaqs;
    for (const FacetKey& f : facets_in_range(d, 1, Lattice::kDual))
      if (is_plaquette(f)) plaqs.push_back(f);
    REQUIRE(plaqs.size() > 10);
    // Keep the pair loop small in d = 4.
    const std::size_t cap = d == 4 ? 60 : plaqs.size();
    for (std::size_t i = 0; i < std::min(cap, plaqs.size()); ++i) {
      for (std::size_t j = i + 1; j < std::min(cap, plaqs.size()); ++j) {
        const auto shared = [&](int k) {
          const auto fi = incident_subfacets(plaqs[i], k);
          const auto fj = incident_subfacets(plaqs[j], k);
          const std::set<FacetKey> si(fi.begin(), fi.end());
          return std::any_of(fj.begin(), fj.end(), [&](const FacetKey& f) { return si.count(f) > 0; });
        };
        CHECK(plaquettes_adjacent(plaqs[i], plaqs[j]) == shared(d - 2));
        CHECK(plaquettes_adjacent1(plaqs[i], plaqs[j]) == shared(1));
      }
    }
  }
}

TEST_CASE("spread-out neighbourhoods") {
  const Vertex o = make_vertex({0, 0});
  CHECK(spread_out_neighbors(o, 0).size() == 4);
  CHECK(spread_out_neighbors(o, 1).size() == 8);
  CHECK(spread_out_neighbors(o, 2).size() == 24);  // (2S+1)^2 - 1
  CHECK(spread_out_neighbors(make_vertex({0, 0, 0}), 0).size() == 6);

  // Symmetry: y in N(x) iff x in N(y).
  const Vertex x = make_vertex({3, -1});
  for (const Vertex& y : spread_out_neighbors(x, 2)) {
    const auto back = spread_out_neighbors(y, 2);
    CHECK(std::find(back.begin(), back.end(), x) != back.end());
  }
}

TEST_CASE("box indexing round trip and boundary layer") {
  for (int d : {2, 3}) {
    const Box box{d == 2 ? 3 : 2, d};
    const std::uint64_t total = box.size();
    CHECK(total == (d == 2 ? 36u : 64u));
    std::uint64_t boundary = 0;
    for (std::uint64_t i = 0; i < total; ++i) {
      const Vertex v = box.vertex_at(i);
      CHECK(box.contains(v));
      CHECK(box.index(v) == i);
      if (box.on_boundary(v)) ++boundary;
    }
    const std::uint64_t side = static_cast<std::uint64_t>(2 * box.n);
    std::uint64_t interior = side - 2;
    for (int i = 1; i < d; ++i) interior *= side - 2;
    CHECK(boundary == total - interior);
  }
}

TEST_CASE("window semantics") {
  const Window w = Window::centered(2, 3);
  const Box box{3, 2};
  CHECK(w.size() == box.size());
  for (std::uint64_t i = 0; i < w.size(); ++i) {
    const Vertex v = w.vertex_at(i);
    CHECK(w.index(v) == i);
    CHECK(box.contains(v) == w.contains(v));
    CHECK(box.on_boundary(v) == w.on_boundary(v));
    CHECK(w.interior_with_margin(v, 1) == !w.on_boundary(v));
    CHECK(w.interior_with_margin(v, 0));
  }

  const std::vector<Vertex> pts{make_vertex({0, 0, 0}), make_vertex({2, -1, 0})};
  const Window around = Window::around(pts, 3);
  for (const Vertex& v : pts) CHECK(around.interior_with_margin(v, 3));
}

TEST_CASE("edge offsets follow the documented enumeration order") {
  // S = 0: unit vectors in axis order.
  const auto nn = edge_offsets(3, 0);
  REQUIRE(nn.size() == 3);
  CHECK(nn[0] == Coords{1, 0, 0});
  CHECK(nn[1] == Coords{0, 1, 0});
  CHECK(nn[2] == Coords{0, 0, 1});

  // S > 0: lexicographically positive offsets in lexicographic order.
  const auto so = edge_offsets(2, 1);
  REQUIRE(so.size() == 4);  // ((2S+1)^d - 1) / 2
  CHECK(so[0] == Coords{0, 1});
  CHECK(so[1] == Coords{1, -1});
  CHECK(so[2] == Coords{1, 0});
  CHECK(so[3] == Coords{1, 1});
  CHECK(edge_offsets(3, 2).size() == 62u);
}
