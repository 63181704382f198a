// Exact generating-function solver for bond percolation on the rooted b-ary
// tree (root degree b, every other degree b+1): extinction probability,
// conditioned total-size transform, the boundary-edge process of finite
// clusters, the percolation criterion for the union X of finite clusters, its
// critical point, the root survival probability kappa, and the linear
// coefficient of kappa below the critical point. All arithmetic in long
// double so the stated residual tolerances are honest.
#pragma once

#include <cstdint>
#include <vector>

#include "perclab/stats.hpp"

namespace perclab {

// Offspring transform (1 - p + p s)^b and its first two derivatives.
long double offspring_pgf(long double s, int b, long double p);
long double offspring_pgf_prime(long double s, int b, long double p);
long double offspring_pgf_second(long double s, int b, long double p);

// Smallest non-negative fixed point of the offspring transform: 1 for
// p <= 1/b, else the unique root in [0,1); residual below 1e-14.
long double extinction_eta(int b, long double p);

// Closed forms valid at any fixed point eta of the transform:
// b p eta / (1-p+p eta) and p^2 eta b (b-1) / (1-p+p eta)^2.
long double g_prime_at_eta(int b, long double p, long double eta);
long double g_double_prime_at_eta(int b, long double p, long double eta);

struct TreeSolution {
  int b = 2;
  long double p = 0;
  long double eta = 1;       // extinction probability
  long double gp = 0;        // G'(eta)
  long double gpp = 0;       // G''(eta)
  bool critical = false;     // p = 1/b: conditioned moments singular
  long double t1 = 0;        // T'(1), mean conditioned total size
  long double t2 = 0;        // T''(1)
  long double k1 = 0;        // K'(1) = eta (1 + (b-1) T'(1)), mean boundary-edge offspring
  bool percolates_x = false;
};

TreeSolution solve_tree(int b, long double p);

// T'(1) and T''(1); throws std::domain_error at the p = 1/b singularity.
std::pair<long double, long double> total_size_derivs(const TreeSolution& sol);

// T(s): pgf of the total size of the cluster conditioned to be finite,
// evaluated by the monotone fixed-point iteration t <- s G(t eta)/eta from 0
// (no damping needed: the iterate increases to the fixed point).
long double conditioned_size_pgf(long double s, const TreeSolution& sol);

// K(s) = 1 - eta + eta s T(s^{b-1}): pgf of the number of boundary edges
// spawned through one boundary edge of a finite cluster.
long double boundary_edge_pgf(long double s, const TreeSolution& sol);

// Whether X (the union of finite clusters) has an infinite component. Both
// equivalent criteria are evaluated and must agree off their common zero set.
bool x_percolates(int b, long double p);

// Critical point of X on the tree: (b^{b/(b-1)} - b) / (b^{b/(b-1)} - 1).
long double pfin_tree(int b);

// Probability that the root lies in an infinite component of X: largest root
// in [0,1] of 1 - kappa = K(1 - kappa); residual below 1e-12.
long double kappa(int b, long double p);

struct LinearCoefficient {
  long double value = 0;
  bool converged = false;
  std::vector<long double> ratios;        // kappa(pfin - eps)/eps down the eps ladder
  std::vector<long double> extrapolated;  // second-level Richardson values
};

// Slope of kappa at the critical point from below, via Richardson
// extrapolation of kappa(pfin - eps)/eps over a halving eps ladder.
LinearCoefficient kappa_slope_at_critical(int b);

// Monte Carlo frequency that the embedded boundary-edge process survives
// `depth` generations, starting from a single boundary edge. Converges to
// kappa from above as depth grows. For p <= 1/b, X is the whole tree and the
// process survives by convention.
Estimate simulate_x_survival(int b, double p, int depth, std::uint64_t runs, std::uint64_t seed, unsigned jobs = 1);

}  // namespace perclab
