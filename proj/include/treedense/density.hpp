#pragma once

// Horizon-n proxies for the best path density: the exact law of
//
//   M_n = max over the d*(d-1)^(n-1) length-n descending paths from the
//         root of the number of open edges along the path
//
// under Bernoulli product measure (an O(n^2) recursion over subtree
// maxima, plus a brute-force enumeration oracle at small radii), a
// branch-and-bound depth-first search realizing M_n for arbitrary edge
// samplers, the site analogue, barrier survival counts (a sustained-
// density probe) and the per-copy bookkeeping behind max-of-k samplers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "treedense/sampler.hpp"
#include "treedense/stats.hpp"
#include "treedense/tree.hpp"

namespace treedense {

// Exact distribution of M_n: cdf[m] = P(M_n <= m), m = 0..n.
struct MaxPathDistribution {
  int degree = 0;
  double p = 0.0;
  int horizon = 0;
  std::vector<double> cdf;

  double pmf(int m) const { return m == 0 ? cdf[0] : cdf[m] - cdf[m - 1]; }

  double expectation() const {
    KahanSum s;
    for (int m = 0; m < horizon; ++m) s.add(1.0 - cdf[m]);
    return s.value();
  }

  // P(M_n = n): a fully open path of length n exists.
  double survival() const { return 1.0 - cdf[horizon - 1]; }
};

namespace detail {

inline long double ipow(long double x, int e) {
  long double r = 1.0L;
  while (e > 0) {
    if (e & 1) r *= x;
    x *= x;
    e >>= 1;
  }
  return r;
}

inline void check_bernoulli_args(double p, int n) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("bernoulli recursion: p must lie in [0,1]");
  if (n < 1) throw std::domain_error("bernoulli recursion: horizon must be >= 1");
}

// One level of the subtree recursion, in place, m descending:
//   Q_j(m) = [p * Q_{j-1}(m-1) + (1-p) * Q_{j-1}(m)]^power,  Q(-1) = 0.
// Intermediate values carry 80-bit precision: the plain 64-bit recursion
// visibly misplaces the cdf front by n ~ 512 (the left flank of the
// travelling front decays doubly exponentially and double rounding near 1
// feeds back into the front position).
inline void recursion_step(std::vector<long double>& q, long double p, int power) {
  for (int m = static_cast<int>(q.size()) - 1; m >= 0; --m) {
    const long double left = m >= 1 ? q[m - 1] : 0.0L;
    long double v = p * left + (1.0L - p) * q[m];
    q[m] = ipow(v, power);
  }
}

inline MaxPathDistribution root_distribution(int degree, double p, int n,
                                             const std::vector<long double>& q) {
  MaxPathDistribution out;
  out.degree = degree;
  out.p = p;
  out.horizon = n;
  out.cdf.resize(n + 1);
  const long double lp = p;
  for (int m = 0; m <= n; ++m) {
    const long double left = m >= 1 ? q[m - 1] : 0.0L;
    long double v = ipow(lp * left + (1.0L - lp) * q[m], degree);
    out.cdf[m] = std::clamp(static_cast<double>(v), 0.0, 1.0);
  }
  for (int m = 1; m <= n; ++m)
    if (out.cdf[m] < out.cdf[m - 1]) out.cdf[m] = out.cdf[m - 1];
  out.cdf[n] = 1.0;
  return out;
}

}  // namespace detail

// Exact law of M_n under Bernoulli(p) product measure. O(n^2) time, O(n)
// space. Valid because distinct subtrees are independent under product
// measure.
inline MaxPathDistribution exact_bernoulli_distribution(int d, double p, int n) {
  const TreeParams params(d);
  detail::check_bernoulli_args(p, n);
  std::vector<long double> q(n + 1, 1.0L);
  for (int j = 1; j < n; ++j) detail::recursion_step(q, p, d - 1);
  return detail::root_distribution(params.degree, p, n, q);
}

// Expectations of the non-root maximum (a vertex with d-1 children),
// E_j for j = 0..n_max. E[M] = sum_m P(M > m).
inline std::vector<double> nonroot_expectations(int d, double p, int n_max) {
  const TreeParams params(d);
  detail::check_bernoulli_args(p, n_max);
  (void)params;
  std::vector<long double> q(n_max + 1, 1.0L);
  std::vector<double> out(n_max + 1, 0.0);
  for (int j = 1; j <= n_max; ++j) {
    detail::recursion_step(q, p, d - 1);
    long double e = 0.0L;
    for (int m = 0; m < j; ++m) e += 1.0L - q[m];
    out[j] = static_cast<double>(e);
  }
  return out;
}

// One pass of the recursion emitting (E[M_n], P(M_n = n)) at each
// requested horizon; horizons must be strictly increasing.
struct ExactSweepRow {
  int horizon;
  double expectation;
  double survival;
};

inline std::vector<ExactSweepRow> exact_bernoulli_sweep(int d, double p,
                                                        std::span<const int> horizons) {
  if (horizons.empty()) throw std::domain_error("exact sweep: no horizons");
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (horizons[i] < 1 || (i > 0 && horizons[i] <= horizons[i - 1]))
      throw std::domain_error("exact sweep: horizons must be strictly increasing and >= 1");
  }
  const int n_max = horizons.back();
  const TreeParams params(d);
  detail::check_bernoulli_args(p, n_max);
  std::vector<long double> q(n_max + 1, 1.0L);
  std::vector<ExactSweepRow> rows;
  rows.reserve(horizons.size());
  std::size_t next = 0;
  for (int j = 1; j <= n_max && next < horizons.size(); ++j) {
    if (j > 1) detail::recursion_step(q, p, d - 1);
    if (j == horizons[next]) {
      const MaxPathDistribution dist = detail::root_distribution(params.degree, p, j, q);
      rows.push_back({j, dist.expectation(), dist.survival()});
      ++next;
    }
  }
  return rows;
}

// P(M_n = n) plus its n -> infinity limit. The n-step value iterates the
// Galton-Watson generating recursion s_j = 1 - (1 - p s_{j-1})^(d-1) in a
// cancellation-free form; algebraically it equals 1 - cdf[n-1] of the
// exact recursion. The limit is the largest fixed point of the same map,
// reached by iteration from theta = 1 to tolerance 1e-12; below the
// critical marginal 1/(d-1) the only fixed point is 0.
struct SurvivalResult {
  double at_horizon = 0.0;
  double limit = 0.0;
  double theta = 0.0;  // fixed point of the non-root recursion
};

inline SurvivalResult survival_fully_open(int d, double p, int n) {
  const TreeParams params(d);
  detail::check_bernoulli_args(p, n);
  const int b = params.degree - 1;
  const auto step = [&](double s) { return -std::expm1(b * std::log1p(-p * s)); };
  double s = 1.0;
  for (int j = 1; j < n; ++j) s = step(s);
  SurvivalResult out;
  out.at_horizon = -std::expm1(params.degree * std::log1p(-p * s));
  if (p * b <= 1.0) {
    out.theta = 0.0;  // subcritical/critical: extinction is certain
  } else {
    double theta = 1.0;
    for (long it = 0; it < 100000000L; ++it) {
      const double nt = step(theta);
      const bool done = std::abs(nt - theta) < 1e-12;
      theta = nt;
      if (done) break;
    }
    out.theta = theta;
  }
  out.limit = -std::expm1(params.degree * std::log1p(-p * out.theta));
  return out;
}

// Brute-force oracle: exhausts all open/closed assignments of the
// radius-n ball (requires at most 24 edges) and accumulates the exact
// distribution of M_n.
inline MaxPathDistribution enumerate_oracle(int d, double p, int n) {
  const TreeParams params(d);
  detail::check_bernoulli_args(p, n);
  // Ball layout: vertex 0 is the root, edge i enters vertex i (i >= 1).
  std::vector<std::vector<int>> kids(1);
  std::vector<int> depth{0};
  std::vector<int> frontier{0};
  for (int lay = 1; lay <= n; ++lay) {
    std::vector<int> next;
    for (int v : frontier) {
      const int nc = v == 0 ? d : d - 1;
      for (int c = 0; c < nc; ++c) {
        const int idx = static_cast<int>(kids.size());
        kids.emplace_back();
        depth.push_back(lay);
        kids[v].push_back(idx);
        next.push_back(idx);
      }
    }
    frontier = std::move(next);
  }
  const int edges = static_cast<int>(kids.size()) - 1;
  if (edges > 24)
    throw std::length_error("enumerate_oracle: ball has " + std::to_string(edges) +
                            " edges, limit is 24");

  std::vector<long double> pow_open(edges + 1), pow_closed(edges + 1);
  pow_open[0] = pow_closed[0] = 1.0L;
  for (int i = 1; i <= edges; ++i) {
    pow_open[i] = pow_open[i - 1] * static_cast<long double>(p);
    pow_closed[i] = pow_closed[i - 1] * static_cast<long double>(1.0 - p);
  }

  std::vector<long double> pmf(n + 1, 0.0L);
  std::uint32_t config = 0;
  const std::uint64_t total = std::uint64_t{1} << edges;
  const std::function<int(int, int)> best = [&](int v, int dep) -> int {
    if (dep == n) return 0;
    int b = -1;
    for (int c : kids[v]) {
      const int bit = (config >> (c - 1)) & 1u;
      const int val = bit + best(c, dep + 1);
      if (val > b) b = val;
    }
    return b;
  };
  for (std::uint64_t cfg = 0; cfg < total; ++cfg) {
    config = static_cast<std::uint32_t>(cfg);
    const int ones = __builtin_popcount(config);
    pmf[best(0, 0)] += pow_open[ones] * pow_closed[edges - ones];
  }

  MaxPathDistribution out;
  out.degree = d;
  out.p = p;
  out.horizon = n;
  out.cdf.resize(n + 1);
  long double acc = 0.0L;
  for (int m = 0; m <= n; ++m) {
    acc += pmf[m];
    out.cdf[m] = std::clamp(static_cast<double>(acc), 0.0, 1.0);
  }
  out.cdf[n] = 1.0;
  return out;
}

// A length-n descending path together with its open-edge count; for
// max-of-k samplers, optionally the per-copy open counts along it.
struct PathRecord {
  VertexId path;
  int length = 0;
  int open_count = 0;
  std::optional<std::vector<int>> copy_counts;

  double average() const { return static_cast<double>(open_count) / length; }
};

enum class EstimateMethod { kExact, kEnumeration, kDfsMonteCarlo };

struct DensityEstimate {
  int horizon = 0;
  double value = 0.0;  // best path average
  std::optional<double> expectation;
  std::optional<Interval> ci;
  EstimateMethod method = EstimateMethod::kExact;
};

// Horizon-n estimate from the exact recursion.
inline DensityEstimate exact_density_estimate(int d, double p, int n) {
  DensityEstimate out;
  out.horizon = n;
  out.expectation = exact_bernoulli_distribution(d, p, n).expectation() / n;
  out.value = *out.expectation;
  out.method = EstimateMethod::kExact;
  return out;
}

// Summary of per-seed path densities M_n/n: the seed maximum proxies the
// essential supremum, the mean comes with a 95% interval.
inline DensityEstimate mc_density_estimate(int n, std::span<const double> densities) {
  DensityEstimate out;
  out.horizon = n;
  out.method = EstimateMethod::kDfsMonteCarlo;
  out.value = 0.0;
  for (const double x : densities) out.value = std::max(out.value, x);
  out.expectation = mean_of(densities);
  Interval ci = mean_interval(densities);
  ci.lo = std::max(0.0, ci.lo);
  ci.hi = std::min(1.0, ci.hi);
  out.ci = ci;
  return out;
}

namespace detail {

// Depth-first maximization of per-depth state sums over descending paths.
// bits(path_prefix) must be a pure function returning {0,1}. With prune
// on, a branch is cut when even an all-open completion cannot beat the
// incumbent; the first strict improvement in lexicographic order is kept,
// so pruning changes neither the maximum nor the argmax.
template <typename BitFn>
class MaxPathSearch {
 public:
  MaxPathSearch(TreeParams params, std::span<const int> horizons, bool prune, BitFn bits)
      : params_(params), horizons_(horizons), prune_(prune), bits_(std::move(bits)) {
    best_.assign(horizons_.size(), -1);
    best_path_.assign(horizons_.size(), {});
    path_.reserve(horizons_.back());
  }

  void run() { descend(0, 0, 0); }

  std::span<const int> best() const { return best_; }
  const std::vector<std::uint8_t>& best_path(std::size_t i) const { return best_path_[i]; }

 private:
  void descend(int depth, int open, std::size_t next_h) {
    if (depth == horizons_[next_h]) {
      if (open > best_[next_h]) {
        best_[next_h] = open;
        best_path_[next_h] = path_;
      }
      ++next_h;
      if (next_h == horizons_.size()) return;
    }
    if (prune_) {
      bool alive = false;
      for (std::size_t j = next_h; j < horizons_.size(); ++j) {
        if (open + (horizons_[j] - depth) > best_[j]) {
          alive = true;
          break;
        }
      }
      if (!alive) return;
    }
    const int nc = depth == 0 ? params_.degree : params_.degree - 1;
    for (int c = 0; c < nc; ++c) {
      path_.push_back(static_cast<std::uint8_t>(c));
      const int bit = bits_(std::span<const std::uint8_t>(path_));
      descend(depth + 1, open + bit, next_h);
      path_.pop_back();
    }
  }

  TreeParams params_;
  std::span<const int> horizons_;
  bool prune_;
  BitFn bits_;
  std::vector<std::uint8_t> path_;
  std::vector<int> best_;
  std::vector<std::vector<std::uint8_t>> best_path_;
};

inline void check_horizons(std::span<const int> horizons) {
  if (horizons.empty()) throw std::domain_error("horizons must be nonempty");
  for (std::size_t i = 0; i < horizons.size(); ++i)
    if (horizons[i] < 1 || (i > 0 && horizons[i] <= horizons[i - 1]))
      throw std::domain_error("horizons must be strictly increasing and >= 1");
}

}  // namespace detail

// Argmax of the open-edge count over length-n descending paths, sampling
// edge states lazily; ties break to the lexicographically smallest path.
inline PathRecord max_path_dfs(const SamplerSpec& spec, TreeParams params, Seed seed, int n,
                               bool prune = true) {
  if (spec.is_site()) throw std::invalid_argument("max_path_dfs: sampler is a site process");
  const int horizon[1] = {n};
  detail::check_horizons(horizon);
  auto bits = [&](std::span<const std::uint8_t> pfx) {
    return edge_state_at(spec, params, seed, pfx);
  };
  detail::MaxPathSearch search(params, horizon, prune, bits);
  search.run();
  PathRecord rec;
  rec.path = VertexId(search.best_path(0));
  rec.length = n;
  rec.open_count = search.best()[0];
  return rec;
}

// M_n for every requested horizon in one traversal to the largest one.
inline std::vector<int> max_path_maxima(const SamplerSpec& spec, TreeParams params, Seed seed,
                                        std::span<const int> horizons, bool prune = true) {
  if (spec.is_site()) throw std::invalid_argument("max_path_maxima: sampler is a site process");
  detail::check_horizons(horizons);
  auto bits = [&](std::span<const std::uint8_t> pfx) {
    return edge_state_at(spec, params, seed, pfx);
  };
  detail::MaxPathSearch search(params, horizons, prune, bits);
  search.run();
  return {search.best().begin(), search.best().end()};
}

// Site analogue over the vertices x_1..x_n of each path.
inline std::vector<int> site_path_maxima(const SamplerSpec& spec, TreeParams params, Seed seed,
                                         std::span<const int> horizons, bool prune = true) {
  if (!spec.is_site()) throw std::invalid_argument("site_path_maxima: sampler is an edge process");
  detail::check_horizons(horizons);
  auto bits = [&](std::span<const std::uint8_t> pfx) {
    return site_state_at(spec, params, seed, pfx);
  };
  detail::MaxPathSearch search(params, horizons, prune, bits);
  search.run();
  return {search.best().begin(), search.best().end()};
}

// Best site density over length-n descending paths. For the bipartite
// process every path scores floor(n/2) or ceil(n/2) depending on the side
// bit, so the value is 1/2 exactly at even horizons.
inline DensityEstimate site_path_density(const SamplerSpec& spec, TreeParams params, Seed seed,
                                         int n) {
  const int horizon[1] = {n};
  const std::vector<int> best = site_path_maxima(spec, params, seed, horizon);
  DensityEstimate out;
  out.horizon = n;
  out.value = static_cast<double>(best[0]) / n;
  out.method = EstimateMethod::kEnumeration;
  return out;
}

// Count of length-n paths every prefix of which stays on or above the
// barrier open_count(j) >= a*j - c. Violation is monotone along a path,
// so offending branches are pruned exactly. The count is capped.
struct BarrierResult {
  std::uint64_t survivors = 0;
  bool capped = false;
  std::optional<PathRecord> example;
};

inline BarrierResult barrier_survival(const SamplerSpec& spec, TreeParams params, Seed seed,
                                      int n, double barrier_a, double slack_c,
                                      std::uint64_t cap = 1'000'000) {
  if (spec.is_site()) throw std::invalid_argument("barrier_survival: sampler is a site process");
  if (!(barrier_a >= 0.0 && barrier_a <= 1.0))
    throw std::domain_error("barrier_survival: target density must lie in [0,1]");
  if (!(slack_c >= 0.0)) throw std::domain_error("barrier_survival: slack must be >= 0");
  const int horizon[1] = {n};
  detail::check_horizons(horizon);

  BarrierResult out;
  std::vector<std::uint8_t> path;
  path.reserve(n);
  // Returns false once the cap is hit to unwind the whole search.
  const std::function<bool(int, int)> descend = [&](int depth, int open) -> bool {
    if (depth > 0 && static_cast<double>(open) < barrier_a * depth - slack_c) return true;
    if (depth == n) {
      if (out.survivors == cap) {
        out.capped = true;
        return false;
      }
      ++out.survivors;
      if (!out.example) {
        PathRecord rec;
        rec.path = VertexId(path);
        rec.length = n;
        rec.open_count = open;
        out.example = std::move(rec);
      }
      return true;
    }
    const int nc = depth == 0 ? params.degree : params.degree - 1;
    for (int c = 0; c < nc; ++c) {
      path.push_back(static_cast<std::uint8_t>(c));
      const int bit = edge_state_at(spec, params, seed, path);
      const bool keep_going = descend(depth + 1, open + bit);
      path.pop_back();
      if (!keep_going) return false;
    }
    return true;
  };
  descend(0, 0);
  return out;
}

// Runs the max-path search on a max-of-k process and scores the argmax
// path per copy. The returned bound ceil(open_count/k)/n is guaranteed:
// every open edge is open in some copy, so the best copy carries at least
// open_count/k of them.
struct BestCopyResult {
  PathRecord record;
  double best_copy_average = 0.0;
  double pigeonhole_bound = 0.0;
};

inline BestCopyResult best_copy_density(const SamplerSpec& spec, TreeParams params, Seed seed,
                                        int n, bool prune = true) {
  if (spec.kind() != SamplerSpec::Kind::kMaxOfK)
    throw std::invalid_argument("best_copy_density: sampler is not a max-of-k process");
  BestCopyResult out;
  out.record = max_path_dfs(spec, params, seed, n, prune);
  std::vector<int> counts(spec.k(), 0);
  const auto full = out.record.path.indices();
  for (int depth = 1; depth <= n; ++depth) {
    const CopyStates states = copy_states_at(spec, params, seed, full.first(depth));
    for (int i = 0; i < spec.k(); ++i) counts[i] += states.bits[i];
  }
  const int best_copy = *std::max_element(counts.begin(), counts.end());
  out.record.copy_counts = std::move(counts);
  out.best_copy_average = static_cast<double>(best_copy) / n;
  out.pigeonhole_bound =
      static_cast<double>((out.record.open_count + spec.k() - 1) / spec.k()) / n;
  return out;
}

}  // namespace treedense
