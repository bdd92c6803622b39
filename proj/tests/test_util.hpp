#pragma once

// Shared helpers for the test suites: independent statistics used as
// oracles against the library (two-sample Kolmogorov-Smirnov, Pearson
// correlation, chi-square against an exact pmf) and small tree walkers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace testutil {

inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

// Rejection threshold for the two-sample KS test at level alpha.
inline double ks_threshold(std::size_t na, std::size_t nb, double alpha) {
  const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
  return c * std::sqrt((static_cast<double>(na) + static_cast<double>(nb)) /
                       (static_cast<double>(na) * static_cast<double>(nb)));
}

inline double correlation(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// Chi-square statistic of observed counts against expected probabilities,
// merging cells with expected count below min_expected into their right
// neighbor. Returns the statistic and degrees of freedom via out-params.
inline void chi_square(std::span<const std::uint64_t> observed,
                       std::span<const double> probs, std::uint64_t total,
                       double min_expected, double& statistic, int& dof) {
  std::vector<double> exp_merged;
  std::vector<double> obs_merged;
  double e_acc = 0.0, o_acc = 0.0;
  for (std::size_t m = 0; m < observed.size(); ++m) {
    e_acc += probs[m] * static_cast<double>(total);
    o_acc += static_cast<double>(observed[m]);
    if (e_acc >= min_expected) {
      exp_merged.push_back(e_acc);
      obs_merged.push_back(o_acc);
      e_acc = o_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (exp_merged.empty()) {
      exp_merged.push_back(e_acc);
      obs_merged.push_back(o_acc);
    } else {
      exp_merged.back() += e_acc;
      obs_merged.back() += o_acc;
    }
  }
  statistic = 0.0;
  for (std::size_t i = 0; i < exp_merged.size(); ++i) {
    const double diff = obs_merged[i] - exp_merged[i];
    statistic += diff * diff / exp_merged[i];
  }
  dof = static_cast<int>(exp_merged.size()) - 1;
}

// Visits every vertex of the radius-n ball (as child-index paths).
inline void walk_ball(int degree, int radius,
                      const std::function<void(std::span<const std::uint8_t>)>& visit) {
  std::vector<std::uint8_t> path;
  const std::function<void()> rec = [&]() {
    visit(path);
    if (static_cast<int>(path.size()) == radius) return;
    const int nc = path.empty() ? degree : degree - 1;
    for (int c = 0; c < nc; ++c) {
      path.push_back(static_cast<std::uint8_t>(c));
      rec();
      path.pop_back();
    }
  };
  rec();
}

}  // namespace testutil
