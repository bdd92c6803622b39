#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace treedense {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// z for a two-sided 95% normal interval.
inline constexpr double kZ95 = 1.959963984540054;

// Neumaier compensated summation; keeps horizon-10^4 sweeps and 10^6-trial
// means accurate against 1e-10 tolerances.
class KahanSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Wilson score interval at 95%. Stable at 0/n and n/n where the Wald
// interval degenerates.
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) throw std::domain_error("wilson_interval: zero trials");
  if (successes > trials) throw std::domain_error("wilson_interval: successes > trials");
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half = kZ95 * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  Interval iv{center - half, center + half};
  if (iv.lo < 0.0 || successes == 0) iv.lo = 0.0;
  if (iv.hi > 1.0 || successes == trials) iv.hi = 1.0;
  return iv;
}

// Normal-approximation 95% interval for the mean of bounded samples.
inline Interval mean_interval(std::span<const double> xs) {
  if (xs.empty()) throw std::domain_error("mean_interval: no samples");
  KahanSum s;
  for (double x : xs) s.add(x);
  const double n = static_cast<double>(xs.size());
  const double mean = s.value() / n;
  if (xs.size() == 1) return {mean, mean};
  KahanSum sq;
  for (double x : xs) sq.add((x - mean) * (x - mean));
  const double sd = std::sqrt(sq.value() / (n - 1.0));
  const double half = kZ95 * sd / std::sqrt(n);
  return {mean - half, mean + half};
}

inline double mean_of(std::span<const double> xs) {
  KahanSum s;
  for (double x : xs) s.add(x);
  return xs.empty() ? 0.0 : s.value() / static_cast<double>(xs.size());
}

}  // namespace treedense
