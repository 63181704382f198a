// Z/2 topology of plaquette sets: boundary operator, connectivity, surfaces,
// and the plaquette shells of finite vertex sets. "Joined to infinity" always
// means joined to the boundary of an explicit Window; results are stable
// under enlarging the window as long as the query set keeps margin >= 1.
#pragma once

#include <vector>

#include "perclab/geometry.hpp"

namespace perclab {

// Sorted, duplicate-free value-semantics sets.
struct VertexSet {
  std::vector<Vertex> items;

  static VertexSet of(std::vector<Vertex> v);
  bool contains(const Vertex& v) const;
  std::uint64_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
  friend bool operator==(const VertexSet&, const VertexSet&) = default;
};

struct PlaquetteSet {
  std::vector<FacetKey> items;

  static PlaquetteSet of(std::vector<FacetKey> v);  // validates: plaquettes, one lattice, one dimension
  bool contains(const FacetKey& f) const;
  std::uint64_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
  friend bool operator==(const PlaquetteSet&, const PlaquetteSet&) = default;
};

PlaquetteSet symmetric_difference(const PlaquetteSet& a, const PlaquetteSet& b);

// (d-2)-facets incident to an odd number of members (the Z/2 boundary).
std::vector<FacetKey> boundary(const PlaquetteSet& p);

enum class PlaquetteAdjacency {
  kSharedFace,  // share a (d-2)-facet
  kSharedEdge,  // share a 1-facet
};

std::vector<PlaquetteSet> components(const PlaquetteSet& p, PlaquetteAdjacency rel);

// Nonempty, connected under shared-(d-2)-facet adjacency, empty boundary.
bool is_surface(const PlaquetteSet& p);

// Edges from A to vertices joined to the window boundary off A. A must be
// nonempty for a nonempty result and must keep margin >= 1 inside the window.
std::vector<FacetKey> external_boundary_edges(const VertexSet& a, const Window& w);

// Plaquettes crossed by those edges: the shell separating A from infinity.
PlaquetteSet external_boundary_plaquettes(const VertexSet& a, const Window& w);

// A together with the finite components of its complement.
VertexSet fill_holes(const VertexSet& a, const Window& w);

// True iff every path from A to the window boundary crosses some plaquette
// of P (i.e. uses an edge whose dual plaquette lies in P).
bool separates_from_infinity(const PlaquetteSet& p, const VertexSet& a, const Window& w);

// Evolution of the shells of a nested sequence of finite connected sets:
// each plaquette either never appears, appears once and stays, or appears
// once and leaves once, never to return. A violation of that pattern is an
// internal error.
enum class LimitClass { kAppearsAndStays, kAppearsThenLeaves };

struct LimitEntry {
  FacetKey plaquette;
  LimitClass cls;
  int first_seen = 0;  // step index (0-based) where it appeared
  int left_at = -1;    // step index where it vanished, -1 if still present
};

struct LimitReport {
  PlaquetteSet limit_set;  // members of the last shell classified as staying
  std::vector<LimitEntry> classification;
  int steps = 0;
};

LimitReport plaquette_shell_limit(const std::vector<VertexSet>& nested, const Window& w);

}  // namespace perclab
