#include "perclab/topology.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace perclab {

VertexSet VertexSet::of(std::vector<Vertex> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  for (const auto& x : v)
    if (x.d != v.front().d) throw std::invalid_argument("VertexSet: mixed dimensions");
  return VertexSet{std::move(v)};
}

bool VertexSet::contains(const Vertex& v) const { return std::binary_search(items.begin(), items.end(), v); }

PlaquetteSet PlaquetteSet::of(std::vector<FacetKey> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  for (const auto& f : v) {
    if (!is_plaquette(f)) throw std::invalid_argument("PlaquetteSet: member is not a plaquette");
    if (f.d != v.front().d || f.lattice != v.front().lattice)
      throw std::invalid_argument("PlaquetteSet: mixed lattices or dimensions");
  }
  return PlaquetteSet{std::move(v)};
}

bool PlaquetteSet::contains(const FacetKey& f) const { return std::binary_search(items.begin(), items.end(), f); }

PlaquetteSet symmetric_difference(const PlaquetteSet& a, const PlaquetteSet& b) {
  std::vector<FacetKey> out;
  std::set_symmetric_difference(a.items.begin(), a.items.end(), b.items.begin(), b.items.end(),
                                std::back_inserter(out));
  return PlaquetteSet{std::move(out)};
}

std::vector<FacetKey> boundary(const PlaquetteSet& p) {
  if (p.empty()) return {};
  const int d = p.items.front().d;
  std::unordered_map<FacetKey, int, FacetHash> count;
  for (const auto& pl : p.items)
    for (const auto& f : incident_subfacets(pl, d - 2)) ++count[f];
  std::vector<FacetKey> odd;
  for (const auto& [f, c] : count)
    if (c % 2 == 1) odd.push_back(f);
  std::sort(odd.begin(), odd.end());
  return odd;
}

std::vector<PlaquetteSet> components(const PlaquetteSet& p, PlaquetteAdjacency rel) {
  if (p.empty()) return {};
  const int d = p.items.front().d;
  const int k = rel == PlaquetteAdjacency::kSharedFace ? d - 2 : 1;
  if (rel == PlaquetteAdjacency::kSharedEdge && d == 2) {
    // Distinct 1-facets never share a 1-facet: everything is isolated.
    std::vector<PlaquetteSet> out;
    for (const auto& pl : p.items) out.push_back(PlaquetteSet{{pl}});
    return out;
  }

  // Index plaquettes by their k-subfacets and sweep with BFS.
  std::unordered_map<FacetKey, std::vector<std::uint32_t>, FacetHash> by_sub;
  for (std::uint32_t i = 0; i < p.items.size(); ++i)
    for (const auto& f : incident_subfacets(p.items[i], k)) by_sub[f].push_back(i);

  std::vector<std::uint8_t> seen(p.items.size(), 0);
  std::vector<PlaquetteSet> out;
  std::vector<std::uint32_t> queue;
  for (std::uint32_t s = 0; s < p.items.size(); ++s) {
    if (seen[s]) continue;
    queue.assign(1, s);
    seen[s] = 1;
    std::vector<FacetKey> comp;
    while (!queue.empty()) {
      const std::uint32_t i = queue.back();
      queue.pop_back();
      comp.push_back(p.items[i]);
      for (const auto& f : incident_subfacets(p.items[i], k))
        for (std::uint32_t j : by_sub[f])
          if (!seen[j]) {
            seen[j] = 1;
            queue.push_back(j);
          }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(PlaquetteSet{std::move(comp)});
  }
  return out;
}

bool is_surface(const PlaquetteSet& p) {
  if (p.empty()) return false;
  if (!boundary(p).empty()) return false;
  return components(p, PlaquetteAdjacency::kSharedFace).size() == 1;
}

namespace {

// Mark array over a local window; grown around the query set so that results
// do not depend on the enclosing window (see README: local-window lemma).
struct Grid {
  Window box;
  std::vector<std::uint8_t> mark;

  explicit Grid(const Window& w) : box(w), mark(w.size(), 0) {}
  std::uint8_t& at(const Vertex& v) { return mark[box.index(v)]; }
};

constexpr std::uint8_t kInA = 1;
constexpr std::uint8_t kReached = 2;

void require_margin(const VertexSet& a, const Window& w, const char* who) {
  for (const auto& v : a.items) {
    if (!w.contains(v)) throw std::invalid_argument(std::string(who) + ": set leaves the window");
    if (!w.interior_with_margin(v, 1))
      throw std::invalid_argument(std::string(who) + ": window too small (margin < 1 around the set)");
  }
}

Window clip(const Window& a, const Window& w) {
  Window r = a;
  for (int i = 0; i < a.d; ++i) {
    r.lo[i] = std::max(a.lo[i], w.lo[i]);
    r.hi[i] = std::min(a.hi[i], w.hi[i]);
  }
  return r;
}

// Flood the complement of A from the local shell inward; after the call,
// kReached marks exactly the vertices joined to the window boundary off A.
Grid reach_off_set(const VertexSet& a, const Window& w, const char* who) {
  require_margin(a, w, who);
  Grid g(clip(Window::around(a.items, 1), w));
  for (const auto& v : a.items) g.at(v) |= kInA;

  std::vector<Vertex> queue;
  const std::uint64_t n = g.box.size();
  for (std::uint64_t i = 0; i < n; ++i) {
    const Vertex v = g.box.vertex_at(i);
    if (g.box.on_boundary(v) && !(g.at(v) & kInA)) {
      g.at(v) |= kReached;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    const Vertex v = queue.back();
    queue.pop_back();
    for (int i = 0; i < v.d; ++i)
      for (int sgn : {-1, +1}) {
        Vertex u = v;
        u.x[i] += sgn;
        if (!g.box.contains(u)) continue;
        if (g.at(u) & (kInA | kReached)) continue;
        g.at(u) |= kReached;
        queue.push_back(u);
      }
  }
  return g;
}

}  // namespace

std::vector<FacetKey> external_boundary_edges(const VertexSet& a, const Window& w) {
  if (a.empty()) return {};
  Grid g = reach_off_set(a, w, "external_boundary_edges");
  std::vector<FacetKey> out;
  for (const auto& v : a.items)
    for (int i = 0; i < v.d; ++i)
      for (int sgn : {-1, +1}) {
        Vertex u = v;
        u.x[i] += sgn;
        if (g.box.contains(u) && (g.at(u) & kReached)) out.push_back(edge_between(v, u));
      }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PlaquetteSet external_boundary_plaquettes(const VertexSet& a, const Window& w) {
  std::vector<FacetKey> shell;
  for (const auto& e : external_boundary_edges(a, w)) shell.push_back(edge_dual_plaquette(e));
  return PlaquetteSet::of(std::move(shell));
}

VertexSet fill_holes(const VertexSet& a, const Window& w) {
  if (a.empty()) return a;
  Grid g = reach_off_set(a, w, "fill_holes");
  std::vector<Vertex> out = a.items;
  const std::uint64_t n = g.box.size();
  for (std::uint64_t i = 0; i < n; ++i)
    if (g.mark[i] == 0) out.push_back(g.box.vertex_at(i));  // neither in A nor reached: a hole
  return VertexSet::of(std::move(out));
}

bool separates_from_infinity(const PlaquetteSet& p, const VertexSet& a, const Window& w) {
  if (a.empty()) return true;  // no path starts in an empty set
  require_margin(a, w, "separates_from_infinity");

  std::unordered_set<FacetKey, FacetHash> blocked;
  std::vector<Vertex> span = a.items;
  for (const auto& pl : p.items) {
    const FacetKey e = dual_facet(pl);
    blocked.insert(e);
    const auto pts = facet_points2(e);
    for (const auto& c : pts) {
      Vertex v;
      v.d = e.d;
      for (int i = 0; i < e.d; ++i) v.x[i] = c[i] / 2;
      span.push_back(v);
    }
  }
  Grid g(clip(Window::around(span, 1), w));
  std::vector<Vertex> queue;
  for (const auto& v : a.items) {
    if (g.at(v) & kReached) continue;
    g.at(v) |= kReached;
    queue.push_back(v);
  }
  while (!queue.empty()) {
    const Vertex v = queue.back();
    queue.pop_back();
    // Escaping the local region means escaping for good: beyond it there are
    // no blocked plaquettes and a straight ray reaches the window boundary.
    if (g.box.on_boundary(v) || w.on_boundary(v)) return false;
    for (int i = 0; i < v.d; ++i)
      for (int sgn : {-1, +1}) {
        Vertex u = v;
        u.x[i] += sgn;
        if (!g.box.contains(u) || (g.at(u) & kReached)) continue;
        if (blocked.contains(edge_between(v, u))) continue;
        g.at(u) |= kReached;
        queue.push_back(u);
      }
  }
  return true;
}

LimitReport plaquette_shell_limit(const std::vector<VertexSet>& nested, const Window& w) {
  if (nested.empty()) throw std::invalid_argument("plaquette_shell_limit: empty sequence");

  struct State {
    int first_seen;
    int left_at;  // -1 while present
  };
  std::unordered_map<FacetKey, State, FacetHash> seen;
  PlaquetteSet last;

  for (std::size_t step = 0; step < nested.size(); ++step) {
    const VertexSet& a = nested[step];
    if (step > 0)
      for (const auto& v : nested[step - 1].items)
        if (!a.contains(v)) throw std::invalid_argument("plaquette_shell_limit: sequence is not nested");
    last = external_boundary_plaquettes(a, w);
    for (const auto& pl : last.items) {
      auto it = seen.find(pl);
      if (it == seen.end()) {
        seen.emplace(pl, State{static_cast<int>(step), -1});
      } else if (it->second.left_at != -1) {
        throw std::logic_error("plaquette_shell_limit: plaquette returned after leaving");
      }
    }
    for (auto& [pl, st] : seen)
      if (st.left_at == -1 && !last.contains(pl)) st.left_at = static_cast<int>(step);
  }

  LimitReport rep;
  rep.steps = static_cast<int>(nested.size());
  std::vector<FacetKey> limit;
  for (const auto& [pl, st] : seen) {
    LimitEntry e;
    e.plaquette = pl;
    e.first_seen = st.first_seen;
    e.left_at = st.left_at;
    e.cls = st.left_at == -1 ? LimitClass::kAppearsAndStays : LimitClass::kAppearsThenLeaves;
    if (st.left_at == -1) limit.push_back(pl);
    rep.classification.push_back(e);
  }
  std::sort(rep.classification.begin(), rep.classification.end(),
            [](const LimitEntry& a, const LimitEntry& b) { return a.plaquette < b.plaquette; });
  rep.limit_set = PlaquetteSet::of(std::move(limit));
  return rep;
}

}  // namespace perclab
