// Plaquette topology: the Z/2 boundary operator, surfacehood of external
// boundary shells, hole filling, separation from infinity, and the
// append-only evolution of shells along nested growing sets.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <vector>

#include "perclab/animals.hpp"
#include "perclab/geometry.hpp"
#include "perclab/rng.hpp"
#include "perclab/topology.hpp"

using namespace perclab;

namespace {

Vertex origin(int d) { return make_vertex(std::vector<int>(static_cast<std::size_t>(d), 0)); }

// Random plaquette chosen by corner and extended-axes mask.
FacetKey random_plaquette(int d, rng::Counter& rng) {
  std::vector<int> c;
  c.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) c.push_back(static_cast<int>(rng.next_below(7)) - 3);
  const int fixed = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(d)));
  const std::uint8_t axes = static_cast<std::uint8_t>(((1u << d) - 1u) & ~(1u << fixed));
  return facet_at(make_vertex(c), axes, Lattice::kDual);
}

PlaquetteSet random_plaquette_set(int d, int count, rng::Counter& rng) {
  std::vector<FacetKey> items;
  items.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) items.push_back(random_plaquette(d, rng));
  return PlaquetteSet::of(std::move(items));
}

std::vector<FacetKey> sorted(std::vector<FacetKey> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("set builders sort, deduplicate, and validate") {
  const Vertex a = make_vertex({1, 0});
  const Vertex b = make_vertex({0, 0});
  const VertexSet s = VertexSet::of({a, b, a});
  CHECK(s.size() == 2);
  CHECK(s.items.front() == b);
  CHECK(s.contains(a));

  const FacetKey p = facet_at(make_vertex({0, 0, 0}), 0b011, Lattice::kDual);
  const PlaquetteSet ps = PlaquetteSet::of({p, p});
  CHECK(ps.size() == 1);
  // Primal facets and non-plaquette dual facets are rejected.
  CHECK_THROWS_AS(PlaquetteSet::of({facet_at(make_vertex({0, 0, 0}), 0b011, Lattice::kPrimal)}), std::invalid_argument);
  CHECK_THROWS_AS(PlaquetteSet::of({facet_at(make_vertex({0, 0, 0}), 0b111, Lattice::kDual)}), std::invalid_argument);
}

TEST_CASE("boundary of small plaquette sets") {
  const FacetKey p = facet_at(make_vertex({0, 0, 0}), 0b011, Lattice::kDual);
  const auto bp = boundary(PlaquetteSet::of({p}));
  CHECK(bp.size() == 4);  // a (d-1)-facet has 2(d-1) boundary (d-2)-facets

  // Two plaquettes sharing one edge: the shared edge cancels mod 2.
  const FacetKey q = facet_at(make_vertex({0, 0, 0}), 0b101, Lattice::kDual);
  const auto shared = incident_subfacets(p, 1);
  const auto other = incident_subfacets(q, 1);
  int common = 0;
  for (const auto& e : shared)
    if (std::find(other.begin(), other.end(), e) != other.end()) ++common;
  REQUIRE(common == 1);
  CHECK(boundary(PlaquetteSet::of({p, q})).size() == 6);
}

TEST_CASE("boundary is a Z/2 homomorphism") {
  for (int d : {3, 4}) {
    rng::Counter rng(rng::combine(0xB0D1u, static_cast<std::uint64_t>(d)));
    for (int trial = 0; trial < 200; ++trial) {
      const PlaquetteSet p = random_plaquette_set(d, 12, rng);
      const PlaquetteSet q = random_plaquette_set(d, 12, rng);
      const auto lhs = sorted(boundary(symmetric_difference(p, q)));
      const auto bp = boundary(p);
      const auto bq = boundary(q);
      // Symmetric difference of the boundary facet lists, computed directly.
      std::vector<FacetKey> rhs;
      for (const auto& f : bp)
        if (std::find(bq.begin(), bq.end(), f) == bq.end()) rhs.push_back(f);
      for (const auto& f : bq)
        if (std::find(bp.begin(), bp.end(), f) == bp.end()) rhs.push_back(f);
      CHECK(lhs == sorted(std::move(rhs)));
    }
  }
}

TEST_CASE("shell of a single cell is the closed unit box") {
  for (int d : {2, 3, 4}) {
    const VertexSet a = VertexSet::of({origin(d)});
    const Window w = Window::centered(d, 4);
    CHECK(external_boundary_edges(a, w).size() == static_cast<std::size_t>(2 * d));
    const PlaquetteSet shell = external_boundary_plaquettes(a, w);
    CHECK(shell.size() == static_cast<std::uint64_t>(2 * d));
    CHECK(is_surface(shell));
    CHECK(boundary(shell).empty());
    CHECK(separates_from_infinity(shell, a, w));
  }
}

TEST_CASE("shell of a domino") {
  const VertexSet a = VertexSet::of({origin(3), make_vertex({1, 0, 0})});
  const Window w = Window::centered(3, 4);
  const PlaquetteSet shell = external_boundary_plaquettes(a, w);
  CHECK(shell.size() == 10);  // surface area of a 1 x 1 x 2 box
  CHECK(is_surface(shell));
  CHECK(separates_from_infinity(shell, a, w));
}

TEST_CASE("components split distant pieces and surfaces must be connected") {
  const VertexSet a = VertexSet::of({origin(3)});
  const VertexSet b = VertexSet::of({make_vertex({5, 0, 0})});
  const Window w = Window::centered(3, 9);
  const PlaquetteSet sa = external_boundary_plaquettes(a, w);
  const PlaquetteSet sb = external_boundary_plaquettes(b, w);
  std::vector<FacetKey> both = sa.items;
  both.insert(both.end(), sb.items.begin(), sb.items.end());
  const PlaquetteSet joint = PlaquetteSet::of(std::move(both));
  CHECK(components(joint, PlaquetteAdjacency::kSharedFace).size() == 2);
  CHECK(boundary(joint).empty());
  CHECK_FALSE(is_surface(joint));  // boundaryless but disconnected
  CHECK(separates_from_infinity(joint, a, w));
}

TEST_CASE("hole filling and shell invariance") {
  // 3x3x3 cube with the centre removed: the centre is a hole.
  std::vector<Vertex> cells;
  for (int x = -1; x <= 1; ++x)
    for (int y = -1; y <= 1; ++y)
      for (int z = -1; z <= 1; ++z)
        if (x || y || z) cells.push_back(make_vertex({x, y, z}));
  const VertexSet hollow = VertexSet::of(cells);
  const Window w = Window::around(hollow.items, 4);
  const VertexSet filled = fill_holes(hollow, w);
  CHECK(filled.size() == 27);
  CHECK(filled.contains(origin(3)));
  CHECK(external_boundary_plaquettes(filled, w) == external_boundary_plaquettes(hollow, w));

  // A solid box has no holes.
  CHECK(fill_holes(filled, w) == filled);
}

TEST_CASE("removing any single plaquette of a small shell breaks separation") {
  const VertexSet a = VertexSet::of({origin(3), make_vertex({1, 0, 0}), make_vertex({0, 1, 0})});
  const Window w = Window::around(a.items, 4);
  const PlaquetteSet shell = external_boundary_plaquettes(a, w);
  REQUIRE(separates_from_infinity(shell, a, w));
  for (std::size_t i = 0; i < shell.items.size(); ++i) {
    std::vector<FacetKey> rest;
    for (std::size_t j = 0; j < shell.items.size(); ++j)
      if (j != i) rest.push_back(shell.items[j]);
    CHECK_FALSE(separates_from_infinity(PlaquetteSet::of(std::move(rest)), a, w));
  }
}

TEST_CASE("shells are independent of the window while the margin holds") {
  for (int d : {2, 3}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto cells = random_connected_set(d, 9, 17, static_cast<std::uint64_t>(trial));
      const VertexSet a = VertexSet::of(cells);
      const PlaquetteSet tight = external_boundary_plaquettes(a, Window::around(a.items, 2));
      const PlaquetteSet loose = external_boundary_plaquettes(a, Window::around(a.items, 7));
      CHECK(tight == loose);
      CHECK(fill_holes(a, Window::around(a.items, 2)) == fill_holes(a, Window::around(a.items, 7)));
    }
  }
}

TEST_CASE("shell evolution along nested growth is append-or-retire") {
  rng::Counter rng(0x57AB1Eu);
  for (int rep = 0; rep < 20; ++rep) {
    // Random nested growth around the origin.
    std::vector<Vertex> cells{origin(3)};
    std::vector<VertexSet> nested;
    for (int step = 0; step < 6; ++step) {
      for (int add = 0; add < 3; ++add) {
        const Vertex base = cells[rng.next_below(cells.size())];
        auto nb = spread_out_neighbors(base, 0);
        const Vertex cand = nb[rng.next_below(nb.size())];
        if (std::find(cells.begin(), cells.end(), cand) == cells.end()) cells.push_back(cand);
      }
      nested.push_back(VertexSet::of(cells));
    }
    const Window w = Window::around(nested.back().items, 4);
    const LimitReport report = plaquette_shell_limit(nested, w);
    CHECK(report.steps == static_cast<int>(nested.size()));
    // The limit set is exactly the last shell's surviving members.
    const PlaquetteSet last = external_boundary_plaquettes(nested.back(), w);
    for (const auto& f : report.limit_set.items) CHECK(last.contains(f));
    for (const auto& entry : report.classification) {
      if (entry.cls == LimitClass::kAppearsAndStays) {
        CHECK(entry.left_at == -1);
        CHECK(report.limit_set.contains(entry.plaquette));
      } else {
        CHECK(entry.left_at > entry.first_seen);
      }
    }
  }
}

TEST_CASE("strictly growing boxes retire every earlier shell") {
  std::vector<VertexSet> nested;
  for (int r = 1; r <= 4; ++r) {
    std::vector<Vertex> cells;
    for (int x = -r; x <= r; ++x)
      for (int y = -r; y <= r; ++y) cells.push_back(make_vertex({x, y}));
    nested.push_back(VertexSet::of(cells));
  }
  const Window w = Window::centered(2, 8);
  const LimitReport report = plaquette_shell_limit(nested, w);
  CHECK(report.limit_set == external_boundary_plaquettes(nested.back(), w));
  int retired = 0;
  for (const auto& entry : report.classification)
    if (entry.cls == LimitClass::kAppearsThenLeaves) ++retired;
  CHECK(retired > 0);
}
