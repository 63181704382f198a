// Monte Carlo experiments over seeded configurations: one-arm radius curves
// and exponent fits, crossing-probability bisections for the open and
// finite-complement critical points, spanning-component counts, the
// rightward-growth shell-limit experiment, and the separating surface of a
// boundary-spanning cluster.
#pragma once

#include <cstdint>
#include <vector>

#include "perclab/percolation.hpp"
#include "perclab/stats.hpp"
#include "perclab/topology.hpp"

namespace perclab {

// Frequency of {rad(cluster of 0) >= n} in the box of radius 2n, by lazy
// cluster exploration with early exit; sample i uses rng stream i.
Estimate one_arm_probability(const ModelParams& params, int n, std::uint64_t samples, std::uint64_t seed, unsigned jobs = 1);

struct OneArmPoint {
  int n = 0;
  Estimate estimate;
};

struct ExponentFit {
  double slope = 0;          // least-squares slope of log P against log n
  double slope_stderr = 0;
  double power_sse = 0;      // residuals of the power-law model
  double exponential_sse = 0;  // residuals of log P against n
  bool exponential_better = false;
};

// Requires >= 3 points with nonzero estimates.
ExponentFit fit_one_arm_exponent(const std::vector<OneArmPoint>& curve);

// Whether the open cluster of the low face of axis 0 reaches the high face.
bool open_crossing_spans(const ModelParams& params, const Box& box, std::uint64_t seed, std::uint64_t rng_id);
Estimate open_crossing_probability(const ModelParams& params, int n, std::uint64_t samples, std::uint64_t seed, unsigned jobs = 1);

// Whether the finite complement (vertices at L-inf distance > F from every
// boundary-spanning cluster) joins the two faces of axis 0 under lattice
// adjacency.
bool finite_complement_spans(const Configuration& c, const ClusterLabeling& labeling);
Estimate finite_complement_spanning_probability(const ModelParams& params, int n, std::uint64_t samples, std::uint64_t seed, unsigned jobs = 1);

// Number of distinct spanning components of the finite complement.
int count_spanning_finite_complement_components(const Configuration& c, const ClusterLabeling& labeling);

struct BisectionStep {
  double p = 0;
  Estimate estimate;
};

struct BisectionResult {
  Estimate estimate;          // value = bracket midpoint, ci_half_width = bracket half-width
  bool stopped_on_ci = false;  // the midpoint interval covered 1/2 before the bracket reached tol
  bool finite_size_caveat = true;  // fixed-box surrogate, not an infinite-volume limit
  std::vector<BisectionStep> steps;
};

// Bisection of the open-crossing probability through 1/2.
BisectionResult estimate_pc(int d, int S, int n, double tol, std::uint64_t samples, std::uint64_t seed, unsigned jobs = 1);
// Bisection of the finite-complement spanning probability through 1/2.
BisectionResult estimate_pfin(int d, int S, int F, int n, double tol, std::uint64_t samples, std::uint64_t seed, unsigned jobs = 1);

struct GrowthReport {
  bool nonempty = false;      // the shell limit keeps some plaquette
  bool f_stabilized = false;  // the marked line edge is unchanged over the last half of the steps
  bool censored = false;      // window exhausted (frontier or a grown cluster hit the boundary)
  int line_r = -1;            // final marked edge is <-(r+1) u1, -r u1>
  int steps = 0;
  PlaquetteSet limit_set;
};

// Grows V_1 = cluster(0), V_{k+1} = V_k united with the cluster one step right
// of a rightmost vertex (ties: lexicographic), tracking the farthest edge of
// the leftward line whose dual plaquette lies in the current shell, and the
// shell limit of the sequence.
GrowthReport rightward_growth_experiment(int d, double p, int window_radius, std::uint64_t seed, std::uint64_t rng_id = 0);

struct SeparationReport {
  PlaquetteSet plaquettes;      // shell-limit approximant
  bool complement_spans = false;  // complement of the proxy cluster joins the axis-0 faces
  int steps = 0;
};

// Shell limit of the nested truncations A_n of the boundary-spanning cluster A
// of x, where A_n is the component of A within the radius-n sub-box, rooted at
// A's first interior vertex. The result does not depend on which member of A
// is supplied as x.
SeparationReport separating_surface(const Configuration& c, const ClusterLabeling& labeling, const Vertex& x);

}  // namespace perclab
