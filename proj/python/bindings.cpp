// Python bindings for the perclab core: tree solver, configuration
// sampling, cluster statistics, plaquette topology of small sets, and the
// Monte Carlo estimators. Composite results come back as plain dicts and
// lists so the module needs no Python-side wrapper types.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "perclab/blocks.hpp"
#include "perclab/estimators.hpp"
#include "perclab/geometry.hpp"
#include "perclab/percolation.hpp"
#include "perclab/topology.hpp"
#include "perclab/tree.hpp"

namespace py = pybind11;
using namespace perclab;

namespace {

Vertex vertex_from(const std::vector<int>& coords) { return make_vertex(coords); }

std::vector<int> vertex_to(const Vertex& v) {
  return std::vector<int>(v.x.begin(), v.x.begin() + v.d);
}

py::dict estimate_dict(const Estimate& e) {
  py::dict out;
  out["value"] = e.value;
  out["ci_half_width"] = e.ci_half_width;
  out["samples"] = e.samples;
  out["seed"] = e.seed;
  return out;
}

py::dict tree_dict(const TreeSolution& sol) {
  py::dict out;
  out["b"] = sol.b;
  out["p"] = static_cast<double>(sol.p);
  out["eta"] = static_cast<double>(sol.eta);
  out["g_prime"] = static_cast<double>(sol.gp);
  out["critical"] = sol.critical;
  if (!sol.critical) {
    out["t1"] = static_cast<double>(sol.t1);
    out["k1"] = static_cast<double>(sol.k1);
  }
  out["percolates_x"] = sol.percolates_x;
  return out;
}

py::dict bisection_dict(const BisectionResult& r) {
  py::dict out;
  out["estimate"] = r.estimate.value;
  out["ci_half_width"] = r.estimate.ci_half_width;
  out["stopped_on_ci"] = r.stopped_on_ci;
  out["finite_size_caveat"] = r.finite_size_caveat;
  py::list steps;
  for (const auto& s : r.steps) {
    py::dict step;
    step["p"] = s.p;
    step["estimate"] = s.estimate.value;
    step["ci_half_width"] = s.estimate.ci_half_width;
    steps.append(step);
  }
  out["steps"] = steps;
  return out;
}

py::dict sample_summary(int d, double p, int S, int F, int n, std::uint64_t seed, std::uint64_t rng_id) {
  const ModelParams params{d, p, S, F};
  const Box box{n, d};
  const Configuration c = Configuration::sample(params, box, seed, rng_id);
  const ClusterLabeling labeling = cluster_labels(c);
  std::uint64_t wired = 0, largest = 0;
  for (const auto& info : labeling.clusters) {
    if (info.wired_infinite) ++wired;
    largest = std::max(largest, info.size);
  }
  const auto mask = finite_complement_mask(labeling, F);
  std::uint64_t x_size = 0;
  for (const auto b : mask) x_size += b;
  py::dict out;
  out["edge_count"] = c.edge_count();
  out["open_fraction"] = c.open_fraction();
  out["cluster_count"] = labeling.clusters.size();
  out["largest_cluster"] = largest;
  out["wired_infinite_clusters"] = wired;
  out["finite_complement_size"] = x_size;
  out["finite_complement_spans"] = finite_complement_spans(c, labeling);
  out["spanning_finite_complement_components"] = count_spanning_finite_complement_components(c, labeling);
  return out;
}

py::dict boundary_shell_summary(const std::vector<std::vector<int>>& cells, int margin) {
  std::vector<Vertex> pts;
  pts.reserve(cells.size());
  for (const auto& c : cells) pts.push_back(vertex_from(c));
  const VertexSet a = VertexSet::of(pts);
  const Window w = Window::around(a.items, margin);
  const PlaquetteSet shell = external_boundary_plaquettes(a, w);
  py::dict out;
  out["plaquette_count"] = shell.size();
  out["is_surface"] = is_surface(shell);
  out["separates_from_infinity"] = separates_from_infinity(shell, a, w);
  out["boundary_facets"] = boundary(shell).size();
  out["hole_free_equivalent"] = external_boundary_plaquettes(fill_holes(a, w), w) == shell;
  return out;
}

}  // namespace

PYBIND11_MODULE(_perclab, m) {
  m.doc() = "Percolation laboratory: finite clusters, plaquette surfaces, and tree solver";
  m.attr("__version__") = "1.0.0";

  // Tree solver.
  m.def("solve_tree", [](int b, double p) { return tree_dict(solve_tree(b, p)); }, py::arg("b"), py::arg("p"),
        "Generating-function solution for the rooted b-ary tree at parameter p");
  m.def("pfin_tree", [](int b) { return static_cast<double>(pfin_tree(b)); }, py::arg("b"),
        "Critical point of the union of finite clusters on the b-ary tree");
  m.def("x_percolates", [](int b, double p) { return x_percolates(b, p); }, py::arg("b"), py::arg("p"),
        "Whether the union of finite clusters has an infinite component");
  m.def("kappa", [](int b, double p) { return static_cast<double>(kappa(b, p)); }, py::arg("b"), py::arg("p"),
        "Probability that the root lies in an infinite component of the finite-cluster union");
  m.def("kappa_slope_at_critical",
        [](int b) {
          const LinearCoefficient c = kappa_slope_at_critical(b);
          py::dict out;
          out["value"] = static_cast<double>(c.value);
          out["converged"] = c.converged;
          return out;
        },
        py::arg("b"), "Slope of kappa approaching the finite-cluster critical point from below");
  m.def("simulate_x_survival",
        [](int b, double p, int depth, std::uint64_t runs, std::uint64_t seed) {
          return estimate_dict(simulate_x_survival(b, p, depth, runs, seed));
        },
        py::arg("b"), py::arg("p"), py::arg("depth"), py::arg("runs"), py::arg("seed") = 1,
        "Monte Carlo survival frequency of the embedded boundary-edge process");

  // Geometry helpers.
  m.def("spread_out_degree", [](int d, int S) { return spread_out_neighbors(Vertex{Coords{}, static_cast<std::int8_t>(d)}, S).size(); },
        py::arg("d"), py::arg("s"), "Number of neighbours of a vertex at edge range S");
  m.def("linf_dist", [](const std::vector<int>& a, const std::vector<int>& b) { return linf_dist(vertex_from(a), vertex_from(b)); },
        py::arg("a"), py::arg("b"));

  // Configurations and clusters.
  m.def("sample_summary", &sample_summary, py::arg("d"), py::arg("p"), py::arg("s") = 0, py::arg("f") = 0,
        py::arg("n") = 8, py::arg("seed") = 1, py::arg("rng_id") = 0,
        "Sample one configuration and report cluster and finite-complement statistics");

  // Plaquette topology of a finite set of cells.
  m.def("boundary_shell_summary", &boundary_shell_summary, py::arg("cells"), py::arg("margin") = 4,
        "External-boundary plaquette shell of a finite vertex set: size, surfacehood, separation");

  // Monte Carlo estimators.
  m.def("one_arm_probability",
        [](int d, double p, int n, std::uint64_t samples, std::uint64_t seed, int S) {
          return estimate_dict(one_arm_probability(ModelParams{d, p, S, 0}, n, samples, seed));
        },
        py::arg("d"), py::arg("p"), py::arg("n"), py::arg("samples"), py::arg("seed") = 1, py::arg("s") = 0,
        "Frequency of the origin's cluster reaching L-inf radius n");
  m.def("open_crossing_probability",
        [](int d, double p, int n, std::uint64_t samples, std::uint64_t seed, int S) {
          return estimate_dict(open_crossing_probability(ModelParams{d, p, S, 0}, n, samples, seed));
        },
        py::arg("d"), py::arg("p"), py::arg("n"), py::arg("samples"), py::arg("seed") = 1, py::arg("s") = 0);
  m.def("finite_complement_spanning_probability",
        [](int d, double p, int n, std::uint64_t samples, std::uint64_t seed, int S, int F) {
          return estimate_dict(finite_complement_spanning_probability(ModelParams{d, p, S, F}, n, samples, seed));
        },
        py::arg("d"), py::arg("p"), py::arg("n"), py::arg("samples"), py::arg("seed") = 1, py::arg("s") = 0,
        py::arg("f") = 0);
  m.def("estimate_pc",
        [](int d, int n, double tol, std::uint64_t samples, std::uint64_t seed, int S) {
          return bisection_dict(estimate_pc(d, S, n, tol, samples, seed));
        },
        py::arg("d"), py::arg("n") = 32, py::arg("tol") = 0.01, py::arg("samples") = 2000, py::arg("seed") = 1,
        py::arg("s") = 0, "Bisection of the open-crossing probability through one half");
  m.def("estimate_pfin",
        [](int d, int n, double tol, std::uint64_t samples, std::uint64_t seed, int S, int F) {
          return bisection_dict(estimate_pfin(d, S, F, n, tol, samples, seed));
        },
        py::arg("d"), py::arg("n") = 32, py::arg("tol") = 0.01, py::arg("samples") = 2000, py::arg("seed") = 1,
        py::arg("s") = 0, py::arg("f") = 0, "Bisection of the finite-complement spanning probability through one half");
  m.def("estimate_large_component_probability",
        [](int d, double p, int n, std::uint64_t samples, std::uint64_t seed) {
          return estimate_dict(estimate_large_component_probability(ModelParams{d, p, 0, 0}, n, samples, seed));
        },
        py::arg("d"), py::arg("p"), py::arg("n"), py::arg("samples"), py::arg("seed") = 1,
        "Frequency of the 4/5-component block event");
}
