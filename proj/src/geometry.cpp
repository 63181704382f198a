#include "perclab/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace perclab {

namespace {

void check_dim(int d, const char* who) {
  if (d < 2 || d > kMaxDim) throw std::invalid_argument(std::string(who) + ": dimension must be in [2, 8]");
}

std::uint8_t full_mask(int d) { return static_cast<std::uint8_t>((1u << d) - 1u); }

}  // namespace

Vertex make_vertex(const std::vector<int>& coords) {
  check_dim(static_cast<int>(coords.size()), "make_vertex");
  Vertex v;
  v.d = static_cast<std::int8_t>(coords.size());
  for (int i = 0; i < v.d; ++i) v.x[i] = coords[static_cast<std::size_t>(i)];
  return v;
}

Vertex translate(const Vertex& v, const Vertex& by) {
  if (v.d != by.d) throw std::invalid_argument("translate: dimension mismatch");
  Vertex r = v;
  for (int i = 0; i < v.d; ++i) r.x[i] += by.x[i];
  return r;
}

int l1_dist(const Vertex& a, const Vertex& b) {
  if (a.d != b.d) throw std::invalid_argument("l1_dist: dimension mismatch");
  int s = 0;
  for (int i = 0; i < a.d; ++i) s += std::abs(a.x[i] - b.x[i]);
  return s;
}

int linf_dist(const Vertex& a, const Vertex& b) {
  if (a.d != b.d) throw std::invalid_argument("linf_dist: dimension mismatch");
  int s = 0;
  for (int i = 0; i < a.d; ++i) s = std::max(s, std::abs(a.x[i] - b.x[i]));
  return s;
}

int linf_norm(const Vertex& a) {
  int s = 0;
  for (int i = 0; i < a.d; ++i) s = std::max(s, std::abs(a.x[i]));
  return s;
}

int coord_sum(const Vertex& a) {
  int s = 0;
  for (int i = 0; i < a.d; ++i) s += a.x[i];
  return s;
}

std::string to_string(const Vertex& v) {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < v.d; ++i) os << (i ? "," : "") << v.x[i];
  os << ')';
  return os.str();
}

int facet_dim(const FacetKey& f) { return std::popcount(f.axes); }

Coords facet_center2(const FacetKey& f) {
  Coords c = f.base2;
  for (int i = 0; i < f.d; ++i)
    if (f.axes & (1u << i)) c[i] += 1;
  return c;
}

int facet_coord_sum2(const FacetKey& f) {
  Coords c = facet_center2(f);
  int s = 0;
  for (int i = 0; i < f.d; ++i) s += c[i];
  return s;
}

std::string to_string(const FacetKey& f) {
  std::ostringstream os;
  os << (f.lattice == Lattice::kPrimal ? "P[" : "D[");
  for (int i = 0; i < f.d; ++i) os << (i ? "," : "") << f.base2[i];
  os << ";" << static_cast<int>(f.axes) << "]";
  return os.str();
}

namespace {

// Doubled base coordinates of a lattice point must match the lattice parity:
// even on the primal lattice, odd on the dual.
void check_parity(const FacetKey& f, const char* who) {
  const int want = f.lattice == Lattice::kPrimal ? 0 : 1;
  for (int i = 0; i < f.d; ++i)
    if (((f.base2[i] % 2) + 2) % 2 != want)
      throw std::invalid_argument(std::string(who) + ": corner parity does not match lattice tag");
  if (f.axes & ~full_mask(f.d)) throw std::invalid_argument(std::string(who) + ": axes beyond dimension");
}

}  // namespace

FacetKey vertex_facet(const Vertex& v) {
  check_dim(v.d, "vertex_facet");
  FacetKey f;
  f.d = v.d;
  f.lattice = Lattice::kPrimal;
  f.axes = 0;
  for (int i = 0; i < v.d; ++i) f.base2[i] = 2 * v.x[i];
  return f;
}

FacetKey edge_between(const Vertex& a, const Vertex& b) {
  if (l1_dist(a, b) != 1) throw std::invalid_argument("edge_between: vertices are not nearest neighbours");
  FacetKey f;
  f.d = a.d;
  f.lattice = Lattice::kPrimal;
  for (int i = 0; i < a.d; ++i) {
    f.base2[i] = 2 * std::min(a.x[i], b.x[i]);
    if (a.x[i] != b.x[i]) f.axes |= static_cast<std::uint8_t>(1u << i);
  }
  return f;
}

FacetKey facet_at(const Vertex& corner, std::uint8_t axes, Lattice l) {
  check_dim(corner.d, "facet_at");
  FacetKey f;
  f.d = corner.d;
  f.lattice = l;
  f.axes = axes;
  const int off = l == Lattice::kPrimal ? 0 : 1;
  for (int i = 0; i < corner.d; ++i) f.base2[i] = 2 * corner.x[i] + off;
  check_parity(f, "facet_at");
  return f;
}

bool is_plaquette(const FacetKey& f) {
  return f.lattice == Lattice::kDual && facet_dim(f) == f.d - 1;
}

std::vector<Coords> facet_points2(const FacetKey& f) {
  const int k = facet_dim(f);
  std::vector<int> ax;
  for (int i = 0; i < f.d; ++i)
    if (f.axes & (1u << i)) ax.push_back(i);
  std::vector<Coords> out;
  out.reserve(1u << k);
  for (std::uint32_t m = 0; m < (1u << k); ++m) {
    Coords p = f.base2;
    for (int j = 0; j < k; ++j)
      if (m & (1u << j)) p[static_cast<std::size_t>(ax[static_cast<std::size_t>(j)])] += 2;
    out.push_back(p);
  }
  return out;
}

FacetKey dual_facet(const FacetKey& f) {
  check_parity(f, "dual_facet");
  FacetKey g;
  g.d = f.d;
  g.lattice = f.lattice == Lattice::kPrimal ? Lattice::kDual : Lattice::kPrimal;
  g.axes = static_cast<std::uint8_t>(~f.axes & full_mask(f.d));
  for (int i = 0; i < f.d; ++i) {
    // Unit interval -> its midpoint; point -> interval centred on it. In
    // doubled coordinates the minimal corner moves by +1, resp. -1.
    g.base2[i] = f.base2[i] + ((f.axes & (1u << i)) ? 1 : -1);
  }
  return g;
}

FacetKey edge_dual_plaquette(const FacetKey& edge) {
  if (edge.lattice != Lattice::kPrimal || facet_dim(edge) != 1)
    throw std::invalid_argument("edge_dual_plaquette: expected a primal 1-facet");
  return dual_facet(edge);
}

std::vector<FacetKey> incident_subfacets(const FacetKey& f, int k) {
  const int dim = facet_dim(f);
  if (k < 0 || k > dim) throw std::invalid_argument("incident_subfacets: k out of range");
  std::vector<int> ax;
  for (int i = 0; i < f.d; ++i)
    if (f.axes & (1u << i)) ax.push_back(i);

  std::vector<FacetKey> out;
  // Choose which k axes stay extended, then pin each dropped axis to one of
  // its two ends.
  for (std::uint32_t pick = 0; pick < (1u << dim); ++pick) {
    if (std::popcount(pick) != k) continue;
    std::vector<int> dropped;
    std::uint8_t axes = 0;
    for (int j = 0; j < dim; ++j) {
      if (pick & (1u << j))
        axes |= static_cast<std::uint8_t>(1u << ax[static_cast<std::size_t>(j)]);
      else
        dropped.push_back(ax[static_cast<std::size_t>(j)]);
    }
    const int nd = static_cast<int>(dropped.size());
    for (std::uint32_t ends = 0; ends < (1u << nd); ++ends) {
      FacetKey g;
      g.d = f.d;
      g.lattice = f.lattice;
      g.axes = axes;
      g.base2 = f.base2;
      for (int j = 0; j < nd; ++j)
        if (ends & (1u << j)) g.base2[static_cast<std::size_t>(dropped[static_cast<std::size_t>(j)])] += 2;
      out.push_back(g);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

bool share_subfacet(const FacetKey& p, const FacetKey& q, int k) {
  if (p.d != q.d || p.lattice != q.lattice) throw std::invalid_argument("plaquette adjacency: mismatched facets");
  if (!is_plaquette(p) || !is_plaquette(q)) throw std::invalid_argument("plaquette adjacency: expected plaquettes");
  if (p == q) return false;
  const auto a = incident_subfacets(p, k);
  const auto b = incident_subfacets(q, k);
  for (const auto& f : a)
    if (std::binary_search(b.begin(), b.end(), f)) return true;
  return false;
}

}  // namespace

bool plaquettes_adjacent(const FacetKey& p, const FacetKey& q) { return share_subfacet(p, q, p.d - 2); }

bool plaquettes_adjacent1(const FacetKey& p, const FacetKey& q) {
  if (p.d == 2) return false;  // no common 1-facet between distinct 1-facets
  return share_subfacet(p, q, 1);
}

std::vector<Vertex> spread_out_neighbors(const Vertex& x, int S) {
  check_dim(x.d, "spread_out_neighbors");
  if (S < 0) throw std::invalid_argument("spread_out_neighbors: S must be >= 0");
  std::vector<Vertex> out;
  if (S == 0) {
    for (int i = 0; i < x.d; ++i) {
      for (int sgn : {-1, +1}) {
        Vertex y = x;
        y.x[i] += sgn;
        out.push_back(y);
      }
    }
  } else {
    Coords off{};
    for (int i = 0; i < x.d; ++i) off[i] = -S;
    while (true) {
      bool zero = true;
      for (int i = 0; i < x.d; ++i) zero = zero && off[i] == 0;
      if (!zero) {
        Vertex y = x;
        for (int i = 0; i < x.d; ++i) y.x[i] += off[i];
        out.push_back(y);
      }
      int i = x.d - 1;
      while (i >= 0 && off[i] == S) off[i--] = -S;
      if (i < 0) break;
      ++off[i];
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t Box::size() const {
  std::uint64_t s = 1;
  for (int i = 0; i < d; ++i) s *= static_cast<std::uint64_t>(2 * n);
  return s;
}

bool Box::contains(const Vertex& v) const {
  if (v.d != d) return false;
  for (int i = 0; i < d; ++i)
    if (v.x[i] <= -n || v.x[i] > n) return false;
  return true;
}

bool Box::on_boundary(const Vertex& v) const {
  if (!contains(v)) return false;
  for (int i = 0; i < d; ++i)
    if (v.x[i] == n || v.x[i] == -n + 1) return true;
  return false;
}

std::uint64_t Box::index(const Vertex& v) const {
  std::uint64_t idx = 0;
  for (int i = 0; i < d; ++i) idx = idx * static_cast<std::uint64_t>(2 * n) + static_cast<std::uint64_t>(v.x[i] + n - 1);
  return idx;
}

Vertex Box::vertex_at(std::uint64_t idx) const {
  Vertex v;
  v.d = static_cast<std::int8_t>(d);
  for (int i = d - 1; i >= 0; --i) {
    v.x[i] = static_cast<std::int32_t>(idx % static_cast<std::uint64_t>(2 * n)) - n + 1;
    idx /= static_cast<std::uint64_t>(2 * n);
  }
  return v;
}

Window Window::centered(int d, int radius) {
  check_dim(d, "Window::centered");
  if (radius < 1) throw std::invalid_argument("Window::centered: radius must be >= 1");
  Window w;
  w.d = static_cast<std::int8_t>(d);
  for (int i = 0; i < d; ++i) {
    w.lo[i] = -radius + 1;
    w.hi[i] = radius;
  }
  return w;
}

Window Window::around(const std::vector<Vertex>& pts, int margin) {
  if (pts.empty()) throw std::invalid_argument("Window::around: empty point set");
  Window w;
  w.d = pts.front().d;
  for (int i = 0; i < w.d; ++i) {
    w.lo[i] = pts.front().x[i];
    w.hi[i] = pts.front().x[i];
  }
  for (const auto& v : pts) {
    if (v.d != w.d) throw std::invalid_argument("Window::around: dimension mismatch");
    for (int i = 0; i < w.d; ++i) {
      w.lo[i] = std::min(w.lo[i], v.x[i]);
      w.hi[i] = std::max(w.hi[i], v.x[i]);
    }
  }
  for (int i = 0; i < w.d; ++i) {
    w.lo[i] -= margin;
    w.hi[i] += margin;
  }
  return w;
}

std::uint64_t Window::size() const {
  std::uint64_t s = 1;
  for (int i = 0; i < d; ++i) s *= static_cast<std::uint64_t>(hi[i] - lo[i] + 1);
  return s;
}

bool Window::contains(const Vertex& v) const {
  if (v.d != d) return false;
  for (int i = 0; i < d; ++i)
    if (v.x[i] < lo[i] || v.x[i] > hi[i]) return false;
  return true;
}

bool Window::on_boundary(const Vertex& v) const {
  if (!contains(v)) return false;
  for (int i = 0; i < d; ++i)
    if (v.x[i] == lo[i] || v.x[i] == hi[i]) return true;
  return false;
}

bool Window::interior_with_margin(const Vertex& v, int margin) const {
  if (!contains(v)) return false;
  for (int i = 0; i < d; ++i)
    if (v.x[i] < lo[i] + margin || v.x[i] > hi[i] - margin) return false;
  return true;
}

std::uint64_t Window::index(const Vertex& v) const {
  std::uint64_t idx = 0;
  for (int i = 0; i < d; ++i)
    idx = idx * static_cast<std::uint64_t>(hi[i] - lo[i] + 1) + static_cast<std::uint64_t>(v.x[i] - lo[i]);
  return idx;
}

Vertex Window::vertex_at(std::uint64_t idx) const {
  Vertex v;
  v.d = d;
  for (int i = d - 1; i >= 0; --i) {
    const auto w = static_cast<std::uint64_t>(hi[i] - lo[i] + 1);
    v.x[i] = static_cast<std::int32_t>(idx % w) + lo[i];
    idx /= w;
  }
  return v;
}

}  // namespace perclab
