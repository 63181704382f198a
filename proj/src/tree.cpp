#include "perclab/tree.hpp"

#include <cmath>
#include <stdexcept>

#include "perclab/parallel.hpp"
#include "perclab/rng.hpp"

namespace perclab {

namespace {

void check_model(int b, long double p) {
  if (b < 2) throw std::invalid_argument("tree degree must be at least 2");
  if (p < 0 || p > 1) throw std::invalid_argument("probability out of [0,1]");
}

void check_unit(long double s) {
  if (s < 0 || s > 1) throw std::domain_error("pgf argument out of [0,1]");
}

constexpr long double kFixedPointTol = 1e-17L;
constexpr std::uint64_t kFixedPointCap = 1000000;

// Fixed point t = s G(t eta)/eta from t = 0; monotone increasing.
long double conditioned_fixed_point(long double s, int b, long double p, long double eta) {
  if (eta <= 0) return 1;  // p = 1: no finite clusters; the value never feeds K (eta factor is 0)
  long double t = 0;
  for (std::uint64_t it = 0; it < kFixedPointCap; ++it) {
    const long double next = s * offspring_pgf(t * eta, b, p) / eta;
    if (std::fabs(next - t) <= kFixedPointTol) return next;
    t = next;
  }
  return t;
}

// d/ds of the conditioned-size transform, from T' = H(T) / (1 - s H'(T)) with
// H(x) = G(x eta)/eta, H'(x) = G'(x eta).
long double conditioned_fixed_point_prime(long double s, int b, long double p, long double eta) {
  if (eta <= 0) return 0;
  const long double t = conditioned_fixed_point(s, b, p, eta);
  const long double h = offspring_pgf(t * eta, b, p) / eta;
  const long double hp = offspring_pgf_prime(t * eta, b, p);
  return h / (1 - s * hp);
}

}  // namespace

long double offspring_pgf(long double s, int b, long double p) {
  check_model(b, p);
  check_unit(s);
  return std::pow(1 - p + p * s, static_cast<long double>(b));
}

long double offspring_pgf_prime(long double s, int b, long double p) {
  check_model(b, p);
  check_unit(s);
  return static_cast<long double>(b) * p * std::pow(1 - p + p * s, static_cast<long double>(b - 1));
}

long double offspring_pgf_second(long double s, int b, long double p) {
  check_model(b, p);
  check_unit(s);
  return static_cast<long double>(b) * static_cast<long double>(b - 1) * p * p * std::pow(1 - p + p * s, static_cast<long double>(b - 2));
}

long double extinction_eta(int b, long double p) {
  check_model(b, p);
  if (p * b <= 1) return 1;
  // G is convex with G(0) > 0, so the smallest fixed point lies below the
  // tangency point G'(s) = 1, where G - id is still <= 0 however thin the
  // supercritical margin; bracketing by that point instead of 1 - eps keeps
  // the bisection away from the trivial root at 1.
  const long double tangent =
      (std::pow(static_cast<long double>(b) * p, -1.0L / static_cast<long double>(b - 1)) - 1 + p) / p;
  long double lo = 0, hi = tangent;
  for (int it = 0; it < 200; ++it) {
    const long double mid = 0.5L * (lo + hi);
    if (offspring_pgf(mid, b, p) - mid > 0)
      lo = mid;
    else
      hi = mid;
  }
  long double eta = 0.5L * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    const long double f = offspring_pgf(eta, b, p) - eta;
    const long double fp = offspring_pgf_prime(eta, b, p) - 1;
    if (fp == 0) break;
    const long double next = eta - f / fp;
    if (next <= 0 || next >= 1) break;
    eta = next;
  }
  return eta;
}

long double g_prime_at_eta(int b, long double p, long double eta) {
  check_model(b, p);
  return static_cast<long double>(b) * p * eta / (1 - p + p * eta);
}

long double g_double_prime_at_eta(int b, long double p, long double eta) {
  check_model(b, p);
  const long double base = 1 - p + p * eta;
  return p * p * eta * static_cast<long double>(b) * static_cast<long double>(b - 1) / (base * base);
}

TreeSolution solve_tree(int b, long double p) {
  check_model(b, p);
  TreeSolution sol;
  sol.b = b;
  sol.p = p;
  sol.eta = extinction_eta(b, p);
  sol.gp = offspring_pgf_prime(sol.eta, b, p);
  sol.gpp = offspring_pgf_second(sol.eta, b, p);
  sol.critical = std::fabs(sol.gp - 1) <= 1e-12L;
  if (!sol.critical) {
    const long double om = 1 - sol.gp;
    sol.t1 = 1 / om;
    sol.t2 = (2 * sol.gp * om + sol.eta * sol.gpp) / (om * om * om);
    sol.k1 = sol.eta * (1 + static_cast<long double>(b - 1) * sol.t1);
  }
  if (p * b <= 1 || sol.critical) {
    sol.percolates_x = true;  // X is the whole tree at and near p = 1/b
  } else {
    // Equivalent criteria; evaluate both and require agreement away from the
    // common zero set.
    const long double lhs2 = sol.eta - (1 - p) / (static_cast<long double>(b) - p);
    const long double lhs1 = sol.gp - (1 - static_cast<long double>(b) * sol.eta) / (1 - sol.eta);
    const bool v2 = lhs2 > 0;
    const bool v1 = lhs1 > 0;
    if (v1 != v2 && std::fabs(lhs2) > 1e-12L && std::fabs(lhs1) > 1e-12L)
      throw std::logic_error("percolation criteria disagree");
    sol.percolates_x = v2;
  }
  return sol;
}

std::pair<long double, long double> total_size_derivs(const TreeSolution& sol) {
  if (sol.critical) throw std::domain_error("conditioned moments are singular at p = 1/b");
  return {sol.t1, sol.t2};
}

long double conditioned_size_pgf(long double s, const TreeSolution& sol) {
  check_unit(s);
  return conditioned_fixed_point(s, sol.b, sol.p, sol.eta);
}

long double boundary_edge_pgf(long double s, const TreeSolution& sol) {
  check_unit(s);
  if (s == 0) return 1 - sol.eta;
  const long double inner = std::pow(s, static_cast<long double>(sol.b - 1));
  return 1 - sol.eta + sol.eta * s * conditioned_fixed_point(inner, sol.b, sol.p, sol.eta);
}

bool x_percolates(int b, long double p) { return solve_tree(b, p).percolates_x; }

long double pfin_tree(int b) {
  if (b < 2) throw std::invalid_argument("tree degree must be at least 2");
  const long double bb = static_cast<long double>(b);
  const long double power = std::pow(bb, bb / (bb - 1));
  return (power - bb) / (power - 1);
}

namespace {

long double boundary_edge_pgf_prime(long double s, const TreeSolution& sol) {
  // K'(s) = eta [ T(s^{b-1}) + (b-1) s^{b-1} T'(s^{b-1}) ].
  const long double inner = std::pow(s, static_cast<long double>(sol.b - 1));
  const long double t = conditioned_fixed_point(inner, sol.b, sol.p, sol.eta);
  const long double tp = conditioned_fixed_point_prime(inner, sol.b, sol.p, sol.eta);
  return sol.eta * (t + static_cast<long double>(sol.b - 1) * inner * tp);
}

}  // namespace

long double kappa(int b, long double p) {
  check_model(b, p);
  if (p * b <= 1) return 1;  // X is the whole tree
  const TreeSolution sol = solve_tree(b, p);
  if (sol.critical) return 1;
  if (sol.k1 <= 1 + 1e-15L) return 0;  // boundary-edge process (sub)critical: p >= pfin
  // Smallest root of K(q) = q in [0,1): K(0) = 1-eta > 0 and K - id is
  // negative just below 1 when K'(1) > 1; K is convex, so the interior
  // crossing is unique.
  long double lo = 0, hi = 1 - 1e-18L;
  for (int it = 0; it < 200; ++it) {
    const long double mid = 0.5L * (lo + hi);
    if (boundary_edge_pgf(mid, sol) - mid > 0)
      lo = mid;
    else
      hi = mid;
  }
  long double q = 0.5L * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    const long double f = boundary_edge_pgf(q, sol) - q;
    const long double fp = boundary_edge_pgf_prime(q, sol) - 1;
    if (fp == 0) break;
    const long double next = q - f / fp;
    if (next <= 0 || next >= 1) break;
    q = next;
  }
  return 1 - q;
}

LinearCoefficient kappa_slope_at_critical(int b) {
  const long double pf = pfin_tree(b);
  LinearCoefficient out;
  constexpr int kLadder = 10;
  for (int k = 0; k < kLadder; ++k) {
    const long double eps = 1e-3L / static_cast<long double>(1 << k);
    out.ratios.push_back(kappa(b, pf - eps) / eps);
  }
  // kappa(pf - eps)/eps = c + a eps + O(eps^2); halving eps lets one level of
  // extrapolation cancel the linear term and a second the quadratic one.
  std::vector<long double> first;
  for (std::size_t k = 0; k + 1 < out.ratios.size(); ++k)
    first.push_back(2 * out.ratios[k + 1] - out.ratios[k]);
  for (std::size_t k = 0; k + 1 < first.size(); ++k)
    out.extrapolated.push_back((4 * first[k + 1] - first[k]) / 3);
  const long double a = out.extrapolated[out.extrapolated.size() - 2];
  const long double bvalue = out.extrapolated.back();
  out.value = bvalue;
  out.converged = std::fabs(a - bvalue) <= 5e-4L * std::fabs(bvalue);
  if (!(out.value > 0) || !std::isfinite(static_cast<double>(out.value)))
    out.converged = false;
  return out;
}

Estimate simulate_x_survival(int b, double p, int depth, std::uint64_t runs, std::uint64_t seed, unsigned jobs) {
  check_model(b, static_cast<long double>(p));
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
  if (runs == 0) throw std::invalid_argument("need at least one run");
  if (static_cast<long double>(p) * b <= 1) {
    Estimate e = binomial_estimate(runs, runs, seed);
    return e;
  }
  constexpr std::uint64_t kTreeStream = 0x7EE5;
  // A cluster larger than this is declared infinite, and a boundary-edge
  // population this large is declared surviving; both tails are far below
  // Monte Carlo resolution at the scales this oracle is used for.
  constexpr std::uint64_t kSizeCap = 10000;
  constexpr std::uint64_t kPopCap = 64;

  const auto flags = map_indexed<std::uint8_t>(runs, jobs, [&](std::uint64_t run) -> std::uint8_t {
    rng::Counter rng(rng::combine(rng::combine(seed, kTreeStream), run));
    std::uint64_t population = 1;
    for (int gen = 0; gen < depth; ++gen) {
      std::uint64_t next = 0;
      for (std::uint64_t i = 0; i < population; ++i) {
        // Grow the forward cluster of the vertex behind this boundary edge.
        std::uint64_t pending = 1, size = 0;
        bool infinite = false;
        while (pending > 0) {
          --pending;
          ++size;
          if (size > kSizeCap) {
            infinite = true;
            break;
          }
          for (int child = 0; child < b; ++child)
            if (rng.bernoulli(p)) ++pending;
        }
        if (!infinite) next += 1 + static_cast<std::uint64_t>(b - 1) * size;
        if (next >= kPopCap) return 1;  // extinction from here is negligible
      }
      population = next;
      if (population == 0) return 0;
    }
    return 1;
  });
  std::uint64_t hits = 0;
  for (const auto f : flags) hits += f;
  return binomial_estimate(hits, runs, seed);
}

}  // namespace perclab
