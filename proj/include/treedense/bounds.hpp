#pragma once

// Closed-form thresholds and lower bounds on the best achievable path
// density for invariant percolation on the d-regular tree with a given
// marginal p:
//
//   haggstrom_threshold(d) = 2/d   marginal at which an infinite cluster
//                                  is guaranteed, hence density 1
//   a_threshold(d,k) = 1-(1-2/d)^(1/k)
//                                  marginal at which the maximum of k iid
//                                  copies reaches 2/d, giving a lower
//                                  bound of 1/k via the pigeonhole
//   f_bound(d,eps) = log(2(d-1))/log(1/eps)
//                                  union-bound ceiling on the Bernoulli
//                                  best path density; drives the
//                                  continuity modulus f(3(q-p))
//   sharp_bernoulli_density_bound  first-moment refinement of f via the
//                                  binary relative entropy
//
// The curve operation reports the best KNOWN lower bound with its
// provenance tag; it never estimates the infimum itself.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "treedense/tree.hpp"

namespace treedense {

inline double haggstrom_threshold(int d) {
  return 2.0 / TreeParams(d).degree;
}

inline double a_threshold(int d, int k) {
  const TreeParams params(d);
  if (k < 1) throw std::domain_error("a_threshold: k must be >= 1");
  return -std::expm1(std::log1p(-2.0 / params.degree) / k);
}

inline double f_bound(int d, double eps) {
  const TreeParams params(d);
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("f_bound: eps must lie in (0,1)");
  return std::log(2.0 * (params.degree - 1)) / std::log(1.0 / eps);
}

enum class BoundSource { kTrivial, kHaggstrom, kKCopies, kContinuity };

inline const char* to_string(BoundSource s) {
  switch (s) {
    case BoundSource::kTrivial: return "trivial";
    case BoundSource::kHaggstrom: return "haggstrom";
    case BoundSource::kKCopies: return "k-copies";
    case BoundSource::kContinuity: return "continuity";
  }
  return "?";
}

struct BoundsPoint {
  double p = 0.0;
  double lower = 0.0;
  BoundSource source = BoundSource::kTrivial;
  int k = 0;  // meaningful for haggstrom (k=1) and k-copies sources
};

// Best known lower bound at marginal p: max of the trivial bound p and
// 1/k for the smallest k with a(d,k) <= p. The k scan stops once
// 1/k <= p, beyond which the family cannot beat the trivial bound.
inline BoundsPoint lower_bound_curve(int d, double p) {
  const TreeParams params(d);
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("lower_bound_curve: p must lie in (0,1)");
  BoundsPoint out;
  out.p = p;
  out.lower = p;
  out.source = BoundSource::kTrivial;
  for (int k = 1;; ++k) {
    if (a_threshold(params.degree, k) <= p) {
      const double candidate = 1.0 / k;
      if (candidate > out.lower) {
        out.lower = candidate;
        out.source = k == 1 ? BoundSource::kHaggstrom : BoundSource::kKCopies;
        out.k = k;
      }
      break;
    }
    if (1.0 / k <= p) break;
  }
  return out;
}

struct CoverageInterval {
  int k = 0;
  double lo = 0.0;       // a(d,k)
  double hi = 0.0;       // 1/k
  bool overlap_ok = false;  // (1 - 1/(k+1))^k <= 1 - 2/d, i.e. a(d,k) <= 1/(k+1)
};

struct CoverageGap {
  double lo = 0.0;
  double hi = 0.0;
};

struct CoverageReport {
  int degree = 0;
  int k_max = 0;
  double grid_step = 0.0;
  double grid_min = 0.0;  // a(d, k_max), the reach of the interval family
  std::vector<CoverageInterval> intervals;
  std::vector<CoverageGap> gaps;  // maximal uncovered runs of (grid_min, 1)
};

// Scans p over the grid from the family's smallest left endpoint up to 1
// and reports maximal uncovered runs of [a(d,k), 1/k), k <= k_max.
inline CoverageReport interval_coverage(int d, int k_max, double grid_step) {
  const TreeParams params(d);
  if (k_max < 1) throw std::domain_error("interval_coverage: k_max must be >= 1");
  if (!(grid_step > 0.0 && grid_step < 1.0))
    throw std::domain_error("interval_coverage: grid step must lie in (0,1)");

  CoverageReport report;
  report.degree = params.degree;
  report.k_max = k_max;
  report.grid_step = grid_step;
  report.intervals.reserve(k_max);
  const double one_minus = 1.0 - 2.0 / params.degree;
  for (int k = 1; k <= k_max; ++k) {
    CoverageInterval iv;
    iv.k = k;
    iv.lo = a_threshold(params.degree, k);
    iv.hi = 1.0 / k;
    iv.overlap_ok = std::pow(1.0 - 1.0 / (k + 1), k) <= one_minus;
    report.intervals.push_back(iv);
  }
  report.grid_min = report.intervals.back().lo;

  const auto covered = [&](double p) {
    for (const CoverageInterval& iv : report.intervals)
      if (iv.lo <= p && p < iv.hi) return true;
    return false;
  };
  long i = std::lround(std::ceil(report.grid_min / grid_step - 1e-9));
  if (i < 1) i = 1;
  bool in_gap = false;
  double gap_lo = 0.0;
  for (; static_cast<double>(i) * grid_step < 1.0 - 0.5 * grid_step; ++i) {
    const double p = static_cast<double>(i) * grid_step;
    if (!covered(p)) {
      if (!in_gap) {
        in_gap = true;
        gap_lo = p;
      }
    } else if (in_gap) {
      report.gaps.push_back({gap_lo, p});
      in_gap = false;
    }
  }
  if (in_gap) report.gaps.push_back({gap_lo, 1.0});
  return report;
}

// Modulus from the continuity argument: a lower marginal loses at most
// f(3*(q-p)) of density. Vacuous (infinite) once 3*(q-p) >= 1.
inline double continuity_modulus(int d, double p, double q) {
  const TreeParams params(d);
  if (!(p >= 0.0 && q <= 1.0 && p < q))
    throw std::domain_error("continuity_modulus: need 0 <= p < q <= 1");
  const double eps = 3.0 * (q - p);
  if (eps >= 1.0) return std::numeric_limits<double>::infinity();
  return f_bound(params.degree, eps);
}

// Known lower bound on the large-degree limit at x: 1/k* for the smallest
// k* with 1/k* < x.
inline double dinf_lower(double x) {
  if (!(x > 0.0 && x < 1.0)) throw std::domain_error("dinf_lower: x must lie in (0,1)");
  int k = static_cast<int>(std::floor(1.0 / x));
  if (k < 1) k = 1;
  while (1.0 / k >= x) ++k;
  return 1.0 / k;
}

namespace detail {

inline double binary_kl(double a, double p) {
  double v = 0.0;
  if (a > 0.0) v += a * std::log(a / p);
  if (a < 1.0) v += (1.0 - a) * std::log((1.0 - a) / (1.0 - p));
  return v;
}

}  // namespace detail

// First-moment density ceiling for Bernoulli(p): the unique a in (p,1)
// with KL(a||p) = log(d-1), by bisection to 1e-10; 1 when log(1/p) <=
// log(d-1) so no sub-1 solution exists. Always at most f_bound where the
// latter is below 1.
inline double sharp_bernoulli_density_bound(int d, double p) {
  const TreeParams params(d);
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("sharp_bernoulli_density_bound: p must lie in (0,1)");
  const double target = std::log(static_cast<double>(params.degree - 1));
  if (std::log(1.0 / p) <= target) return 1.0;
  double lo = p, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (detail::binary_kl(mid, p) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace treedense
