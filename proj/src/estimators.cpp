#include "perclab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "perclab/rng.hpp"

#include "perclab/disjoint_sets.hpp"
#include "perclab/parallel.hpp"
#include "perclab/stats.hpp"

namespace perclab {

namespace {

// Signed neighbour offsets of the model (both orientations of each edge).
std::vector<Coords> neighbour_offsets(int d, int S) {
  std::vector<Coords> out;
  for (const auto& o : edge_offsets(d, S)) {
    out.push_back(o);
    Coords neg{};
    for (int i = 0; i < d; ++i) neg[i] = -o[i];
    out.push_back(neg);
  }
  return out;
}

// Lazy exploration of the open cluster of `start` within the box. Visits are
// marked in `visited` (box-indexed); returns true as soon as `stop` accepts a
// visited vertex.
template <typename Stop>
bool explore_cluster(const ModelParams& params, const Box& box, std::uint64_t seed, std::uint64_t rng_id,
                     const std::vector<Coords>& nbrs, std::vector<std::uint8_t>& visited,
                     std::vector<Vertex>& stack, Stop&& stop) {
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (const auto& o : nbrs) {
      Vertex u = v;
      for (int i = 0; i < params.d; ++i) u.x[i] += o[i];
      if (!box.contains(u)) continue;
      const std::uint64_t ui = box.index(u);
      if (visited[ui]) continue;
      if (!open_edge_lazy(seed, rng_id, params.p, v, u, params.S)) continue;
      visited[ui] = 1;
      if (stop(u)) return true;
      stack.push_back(u);
    }
  }
  return false;
}

}  // namespace

Estimate one_arm_probability(const ModelParams& params, int n, std::uint64_t samples, std::uint64_t seed, unsigned jobs) {
  if (n < 1) throw std::invalid_argument("one-arm scale must be positive");
  if (samples == 0) throw std::invalid_argument("need at least one sample");
  // The lazy exploration never builds a Configuration, so check here.
  if (params.p < 0.0 || params.p > 1.0) throw std::invalid_argument("one-arm: p must be in [0, 1]");
  const Box box{2 * n, params.d};
  const auto nbrs = neighbour_offsets(params.d, params.S);
  const auto flags = map_indexed<std::uint8_t>(samples, jobs, [&](std::uint64_t i) -> std::uint8_t {
    std::vector<std::uint8_t> visited(box.size(), 0);
    const Vertex origin{Coords{}, static_cast<std::int8_t>(params.d)};
    visited[box.index(origin)] = 1;
    std::vector<Vertex> stack{origin};
    const bool hit = explore_cluster(params, box, seed, i, nbrs, visited, stack,
                                     [&](const Vertex& u) { return linf_norm(u) >= n; });
    return hit ? 1 : 0;
  });
  std::uint64_t hits = 0;
  for (const auto f : flags) hits += f;
  return binomial_estimate(hits, samples, seed);
}

ExponentFit fit_one_arm_exponent(const std::vector<OneArmPoint>& curve) {
  if (curve.size() < 3) throw std::invalid_argument("exponent fit needs at least 3 points");
  std::vector<double> log_n, plain_n, log_p;
  for (const auto& pt : curve) {
    if (pt.estimate.value <= 0) throw std::invalid_argument("exponent fit needs nonzero estimates");
    log_n.push_back(std::log(static_cast<double>(pt.n)));
    plain_n.push_back(static_cast<double>(pt.n));
    log_p.push_back(std::log(pt.estimate.value));
  }
  const LineFit power = fit_line(log_n, log_p);
  const LineFit expo = fit_line(plain_n, log_p);
  ExponentFit out;
  out.slope = power.slope;
  out.slope_stderr = power.slope_stderr;
  out.power_sse = power.sse;
  out.exponential_sse = expo.sse;
  out.exponential_better = expo.sse < power.sse;
  return out;
}

bool open_crossing_spans(const ModelParams& params, const Box& box, std::uint64_t seed, std::uint64_t rng_id) {
  const int d = params.d;
  const auto nbrs = neighbour_offsets(d, params.S);
  std::vector<std::uint8_t> visited(box.size(), 0);
  std::vector<Vertex> stack;
  // All vertices of the low face of axis 0 are sources.
  for (std::uint64_t i = 0; i < box.size(); ++i) {
    const Vertex v = box.vertex_at(i);
    if (v.x[0] != -box.n + 1) continue;
    visited[i] = 1;
    stack.push_back(v);
  }
  return explore_cluster(params, box, seed, rng_id, nbrs, visited, stack,
                         [&](const Vertex& u) { return u.x[0] == box.n; });
}

Estimate open_crossing_probability(const ModelParams& params, int n, std::uint64_t samples, std::uint64_t seed, unsigned jobs) {
  if (samples == 0) throw std::invalid_argument("need at least one sample");
  const Box box{n, params.d};
  const auto flags = map_indexed<std::uint8_t>(samples, jobs, [&](std::uint64_t i) -> std::uint8_t {
    return open_crossing_spans(params, box, seed, i) ? 1 : 0;
  });
  std::uint64_t hits = 0;
  for (const auto f : flags) hits += f;
  return binomial_estimate(hits, samples, seed);
}

namespace {

// Components of a vertex mask under lattice adjacency; reports how many
// distinct components meet both axis-0 faces.
int spanning_component_count(const Box& box, const std::vector<std::uint8_t>& mask) {
  const int d = box.d;
  DisjointSets sets(box.size());
  for (std::uint64_t vi = 0; vi < box.size(); ++vi) {
    if (!mask[vi]) continue;
    const Vertex v = box.vertex_at(vi);
    for (int i = 0; i < d; ++i) {
      Vertex u = v;
      u.x[i] += 1;
      if (u.x[i] > box.n) continue;
      const std::uint64_t ui = box.index(u);
      if (mask[ui]) sets.unite(vi, ui);
    }
  }
  std::vector<std::uint8_t> lo(box.size(), 0), hi(box.size(), 0);
  for (std::uint64_t vi = 0; vi < box.size(); ++vi) {
    if (!mask[vi]) continue;
    const Vertex v = box.vertex_at(vi);
    const std::uint64_t root = sets.find(vi);
    if (v.x[0] == -box.n + 1) lo[root] = 1;
    if (v.x[0] == box.n) hi[root] = 1;
  }
  int count = 0;
  for (std::uint64_t vi = 0; vi < box.size(); ++vi)
    if (lo[vi] && hi[vi]) ++count;
  return count;
}

}  // namespace

bool finite_complement_spans(const Configuration& c, const ClusterLabeling& labeling) {
  const auto mask = finite_complement_mask(labeling, c.params().F);
  return spanning_component_count(c.box(), mask) > 0;
}

Estimate finite_complement_spanning_probability(const ModelParams& params, int n, std::uint64_t samples, std::uint64_t seed, unsigned jobs) {
  if (samples == 0) throw std::invalid_argument("need at least one sample");
  const Box box{n, params.d};
  const auto flags = map_indexed<std::uint8_t>(samples, jobs, [&](std::uint64_t i) -> std::uint8_t {
    const Configuration c = Configuration::sample(params, box, seed, i);
    const ClusterLabeling labeling = cluster_labels(c);
    return finite_complement_spans(c, labeling) ? 1 : 0;
  });
  std::uint64_t hits = 0;
  for (const auto f : flags) hits += f;
  return binomial_estimate(hits, samples, seed);
}

int count_spanning_finite_complement_components(const Configuration& c, const ClusterLabeling& labeling) {
  const auto mask = finite_complement_mask(labeling, c.params().F);
  return spanning_component_count(c.box(), mask);
}

namespace {

BisectionResult bisect_through_half(double lo, double hi, double tol, std::uint64_t samples, std::uint64_t seed,
                                    bool increasing,
                                    const std::function<Estimate(double, std::uint64_t)>& probe) {
  if (!(tol > 0)) throw std::invalid_argument("bisection tolerance must be positive");
  BisectionResult out;
  std::uint64_t step = 0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    Estimate est = probe(mid, step);
    out.steps.push_back({mid, est});
    ++step;
    if (std::fabs(est.value - 0.5) <= est.ci_half_width) {
      out.stopped_on_ci = true;
      lo = hi = mid;
      break;
    }
    const bool above = est.value > 0.5;
    if (above == increasing)
      hi = mid;
    else
      lo = mid;
  }
  out.estimate.value = 0.5 * (lo + hi);
  out.estimate.ci_half_width = 0.5 * (hi - lo) + (out.stopped_on_ci ? tol : 0.0);
  out.estimate.samples = samples;
  out.estimate.seed = seed;
  return out;
}

}  // namespace

BisectionResult estimate_pc(int d, int S, int n, double tol, std::uint64_t samples, std::uint64_t seed, unsigned jobs) {
  if (n < 8) throw std::invalid_argument("crossing bisection needs box radius at least 8");
  return bisect_through_half(0.0, 1.0, tol, samples, seed, /*increasing=*/true, [&](double p, std::uint64_t step) {
    ModelParams params{d, p, S, 0};
    // Fresh rng streams per step so the step estimates are independent.
    const std::uint64_t step_seed = rng::combine(seed, step);
    return open_crossing_probability(params, n, samples, step_seed, jobs);
  });
}

BisectionResult estimate_pfin(int d, int S, int F, int n, double tol, std::uint64_t samples, std::uint64_t seed, unsigned jobs) {
  return bisect_through_half(0.0, 1.0, tol, samples, seed, /*increasing=*/false, [&](double p, std::uint64_t step) {
    ModelParams params{d, p, S, F};
    const std::uint64_t step_seed = rng::combine(seed, step);
    return finite_complement_spanning_probability(params, n, samples, step_seed, jobs);
  });
}

GrowthReport rightward_growth_experiment(int d, double p, int window_radius, std::uint64_t seed, std::uint64_t rng_id) {
  if (window_radius < 4) throw std::invalid_argument("window radius too small");
  const Window w = Window::centered(d, window_radius);
  const Box box{window_radius, d};  // same vertex range as the window
  const auto nbrs = neighbour_offsets(d, 0);

  GrowthReport report;
  std::unordered_set<Vertex, VertexHash> in_v;  // the growing union
  std::vector<VertexSet> snapshots;
  std::vector<int> r_history;

  // Cluster of `start`, merged into in_v; returns false (and flags censoring)
  // if the cluster touches the window boundary.
  const auto absorb_cluster = [&](const Vertex& start) -> bool {
    std::vector<Vertex> added{start};
    std::vector<Vertex> stack{start};
    bool truncated = w.on_boundary(start);
    in_v.insert(start);
    while (!stack.empty() && !truncated) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (const auto& o : nbrs) {
        Vertex u = v;
        for (int i = 0; i < d; ++i) u.x[i] += o[i];
        if (!box.contains(u)) continue;
        if (in_v.count(u)) continue;
        if (!open_edge_lazy(seed, rng_id, p, v, u, 0)) continue;
        in_v.insert(u);
        added.push_back(u);
        if (w.on_boundary(u)) {
          truncated = true;
          break;
        }
        stack.push_back(u);
      }
    }
    return !truncated;
  };

  const Vertex origin{Coords{}, static_cast<std::int8_t>(d)};
  if (!absorb_cluster(origin)) {
    report.censored = true;
    return report;
  }

  for (;;) {
    // Snapshot and measure.
    std::vector<Vertex> items(in_v.begin(), in_v.end());
    snapshots.push_back(VertexSet::of(std::move(items)));
    const PlaquetteSet pi = external_boundary_plaquettes(snapshots.back(), w);
    int r_max = -1;
    for (int r = 0; r + 1 <= window_radius; ++r) {
      Coords a{}, b{};
      a[0] = -(r + 1);
      b[0] = -r;
      const FacetKey dual = edge_dual_plaquette(
          edge_between(Vertex{a, static_cast<std::int8_t>(d)}, Vertex{b, static_cast<std::int8_t>(d)}));
      if (pi.contains(dual)) r_max = r;
    }
    r_history.push_back(r_max);

    // Rightmost vertex, ties broken towards the lexicographically smallest
    // remaining coordinates; then grow one step to the right of it.
    Vertex best = snapshots.back().items.front();
    for (const auto& v : snapshots.back().items)
      if (v.x[0] > best.x[0] || (v.x[0] == best.x[0] && v < best)) best = v;
    Vertex next = best;
    next.x[0] += 1;
    if (!box.contains(next) || w.on_boundary(next)) {
      break;  // frontier reached the window edge: normal exhaustion
    }
    if (in_v.count(next)) {
      // Already absorbed (the rightmost vertex's right neighbour can only be
      // outside V by construction); treat as internal error.
      throw std::logic_error("rightmost growth target already absorbed");
    }
    if (!absorb_cluster(next)) {
      report.censored = true;
      break;
    }
  }

  report.steps = static_cast<int>(snapshots.size());
  if (!r_history.empty()) report.line_r = r_history.back();
  if (r_history.size() >= 2) {
    const std::size_t half = r_history.size() / 2;
    report.f_stabilized = r_history.back() >= 0;
    for (std::size_t k = half; k < r_history.size(); ++k)
      if (r_history[k] != r_history.back()) report.f_stabilized = false;
  }
  if (!snapshots.empty()) {
    const LimitReport limit = plaquette_shell_limit(snapshots, w);
    report.limit_set = limit.limit_set;
    report.nonempty = !report.limit_set.items.empty();
  }
  return report;
}

SeparationReport separating_surface(const Configuration& c, const ClusterLabeling& labeling, const Vertex& x) {
  const int d = c.params().d;
  const Box box = c.box();
  if (!box.contains(x)) throw std::invalid_argument("base vertex outside the box");
  const std::uint32_t lab = labeling.label_of(x);
  if (!labeling.clusters[lab].wired_infinite)
    throw std::invalid_argument("base vertex is not in a boundary-spanning cluster");

  // The report is a property of the cluster, not of the supplied member: at
  // finite box size the component of the cluster restricted to a sub-box
  // depends on where the search is rooted, so anchor the truncation ladder at
  // the cluster's first interior vertex.
  Vertex base = x;
  bool anchored = false;
  for (std::uint64_t vi = 0; vi < box.size() && !anchored; ++vi) {
    if (labeling.label[vi] != lab) continue;
    const Vertex v = box.vertex_at(vi);
    if (box.on_boundary(v)) continue;
    base = v;
    anchored = true;
  }
  if (!anchored) throw std::invalid_argument("cluster has no interior vertex to anchor the surface");

  const Window w = Window::centered(d, box.n);
  // Smallest sub-box containing the anchor; interior anchors fit in box.n - 1.
  int n0 = 1;
  for (int i = 0; i < d; ++i) n0 = std::max({n0, static_cast<int>(base.x[i]), static_cast<int>(1 - base.x[i])});

  const auto nbrs = neighbour_offsets(d, c.params().S);
  std::vector<VertexSet> snapshots;
  for (int n = n0; n <= box.n - 1; ++n) {
    const Box sub{n, d};
    std::unordered_set<Vertex, VertexHash> comp;
    std::vector<Vertex> stack{base};
    comp.insert(base);
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (const auto& o : nbrs) {
        Vertex u = v;
        for (int i = 0; i < d; ++i) u.x[i] += o[i];
        if (!sub.contains(u) || comp.count(u)) continue;
        if (!c.open_between(v, u)) continue;
        comp.insert(u);
        stack.push_back(u);
      }
    }
    std::vector<Vertex> items(comp.begin(), comp.end());
    snapshots.push_back(VertexSet::of(std::move(items)));
  }
  SeparationReport report;
  const LimitReport limit = plaquette_shell_limit(snapshots, w);
  report.plaquettes = limit.limit_set;
  report.steps = limit.steps;

  // Face-to-face component of the complement of the full proxy cluster.
  std::vector<std::uint8_t> mask(box.size(), 1);
  for (std::uint64_t vi = 0; vi < box.size(); ++vi)
    if (labeling.label[vi] == lab) mask[vi] = 0;
  report.complement_spans = spanning_component_count(box, mask) > 0;
  return report;
}

}  // namespace perclab
