// Acceptance suite: one line per criterion, exit code = number of
// failures. Every tolerance is pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "treedense/bounds.hpp"
#include "treedense/density.hpp"
#include "treedense/harness.hpp"
#include "treedense/sampler.hpp"
#include "treedense/tree.hpp"

using namespace treedense;

namespace {

struct Check {
  int id;
  std::string title;
  std::function<bool(std::string&)> body;
};

bool near(double x, double y, double tol) { return std::abs(x - y) <= tol; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// --- criterion bodies -------------------------------------------------------

bool formula_regression(std::string& note) {
  bool ok = true;
  ok &= near(a_threshold(3, 2), 0.4226497308, 1e-9);
  ok &= near(a_threshold(3, 1), 2.0 / 3.0, 1e-9);
  ok &= near(a_threshold(4, 3), 0.2062994740, 1e-9);
  ok &= near(f_bound(3, 0.25), 1.0, 1e-9);
  ok &= near(f_bound(3, 0.01), 0.3010299957, 1e-9);
  ok &= near(haggstrom_threshold(3), 2.0 / 3.0, 1e-9);
  note = "six closed forms at 1e-9";
  return ok;
}

bool coverage_gaps(std::string& note) {
  bool ok = true;
  for (int d = 4; d <= 10; ++d) {
    const CoverageReport report = interval_coverage(d, 64, 1e-4);
    if (!report.gaps.empty()) {
      ok = false;
      note += "d=" + std::to_string(d) + " has gaps; ";
    }
  }
  const CoverageReport d3 = interval_coverage(3, 64, 1e-4);
  bool found = false;
  for (const CoverageGap& g : d3.gaps)
    if (near(g.lo, 0.5, 1e-4 + 1e-12) && near(g.hi, 2.0 / 3.0, 1e-4 + 1e-12)) found = true;
  ok &= found;
  note += "d=4..10 gap-free; d=3 has " + std::to_string(d3.gaps.size()) +
          " gaps incl. [0.5, 2/3)";
  return ok;
}

bool k_regime_boundary(std::string& note) {
  bool ok = true;
  for (int k = 2; k <= 5; ++k) ok &= a_threshold(3, k) < 1.0 / k - 1e-6;
  for (int k = 6; k <= 64; ++k) ok &= a_threshold(3, k) > 1.0 / k + 1e-6;
  note = "a(3,k) vs 1/k flips between k=5 and k=6, margins > 1e-6";
  return ok;
}

bool oracle_equivalence(std::string& note) {
  bool ok = true;
  double worst = 0.0;
  for (const int n : {1, 2, 3}) {
    for (const double p : {0.1, 0.5, 0.9}) {
      const MaxPathDistribution a = enumerate_oracle(3, p, n);
      const MaxPathDistribution b = exact_bernoulli_distribution(3, p, n);
      for (int m = 0; m <= n; ++m) worst = std::max(worst, std::abs(a.cdf[m] - b.cdf[m]));
    }
  }
  ok &= worst <= 1e-10;
  const double e2 = exact_bernoulli_distribution(3, 0.5, 2).expectation();
  const double e2o = enumerate_oracle(3, 0.5, 2).expectation();
  ok &= near(e2, 449.0 / 256.0, 1e-10) && near(e2o, 449.0 / 256.0, 1e-10);
  std::ostringstream os;
  os << "max cdf deviation " << worst << "; E[M_2] = " << e2 << " = 449/256";
  note = os.str();
  return ok;
}

bool dfs_vs_exact(std::string& note) {
  const int n = 10, trials = 10000;
  const SamplerSpec spec = SamplerSpec::bernoulli(0.5);
  const TreeParams d3(3);
  const MaxPathDistribution dist = exact_bernoulli_distribution(3, 0.5, n);
  const double mean = dist.expectation();
  double var = 0.0;
  for (int m = 0; m <= n; ++m) var += (m - mean) * (m - mean) * dist.pmf(m);

  bool prune_identical = true;
  KahanSum sum;
  for (int t = 0; t < trials; ++t) {
    const Seed seed{static_cast<std::uint64_t>(t), 0};
    const PathRecord pruned = max_path_dfs(spec, d3, seed, n, true);
    const PathRecord plain = max_path_dfs(spec, d3, seed, n, false);
    prune_identical &=
        pruned.open_count == plain.open_count && pruned.path == plain.path;
    sum.add(pruned.open_count);
  }
  const double mc = sum.value() / trials;
  const double four_sigma = 4.0 * std::sqrt(var / trials);
  std::ostringstream os;
  os << "MC mean " << mc << " vs exact " << mean << " (4-sigma band " << four_sigma
     << "); prune on/off identical on all seeds: " << (prune_identical ? "yes" : "NO");
  note = os.str();
  return std::abs(mc - mean) <= four_sigma && prune_identical;
}

bool survival_fixed_point(std::string& note) {
  const SurvivalResult super = survival_fully_open(3, 2.0 / 3.0, 200);
  const SurvivalResult sub = survival_fully_open(3, 0.4, 200);
  std::ostringstream os;
  os << "|P(M_200=200) - 7/8| = " << std::abs(super.at_horizon - 0.875)
     << "; subcritical P = " << sub.at_horizon;
  note = os.str();
  return std::abs(super.at_horizon - 0.875) <= 1e-6 && sub.at_horizon <= 1e-6;
}

bool bernoulli_density_bounds(std::string& note) {
  bool ok = true;
  std::ostringstream os;
  for (const auto& [d, p] : std::vector<std::pair<int, double>>{{3, 0.01}, {3, 0.05}, {4, 0.01}}) {
    const double density = exact_bernoulli_distribution(d, p, 512).expectation() / 512.0;
    const double f = std::min(1.0, f_bound(d, p));
    const double sharp = sharp_bernoulli_density_bound(d, p);
    ok &= density >= p && density <= f && density <= sharp + 0.02;
    os << "(" << d << "," << p << "): " << density << " in [" << p << "," << f
       << "], sharp+0.02=" << sharp + 0.02 << "; ";
  }
  note = os.str();
  return ok;
}

bool pigeonhole(std::string& note) {
  const int n = 24, trials = 1000;
  const TreeParams d3(3);
  const SamplerSpec spec = SamplerSpec::max_of(SamplerSpec::bernoulli(a_threshold(3, 2)), 2);
  int fully_open = 0, violations = 0;
  for (int t = 0; t < trials; ++t) {
    const BestCopyResult r =
        best_copy_density(spec, d3, Seed{static_cast<std::uint64_t>(t), 0}, n, true);
    if (r.record.open_count == n) {
      ++fully_open;
      if (r.best_copy_average < 0.5) ++violations;
    }
  }
  std::ostringstream os;
  os << fully_open << "/" << trials << " trials fully open, " << violations
     << " pigeonhole violations";
  note = os.str();
  return violations == 0 && fully_open > 0;
}

bool matching_and_site(std::string& note) {
  const TreeParams d3(3);
  // radius-8 ball layout: vertex 0 is the root, edge i enters vertex i
  std::vector<std::vector<std::uint8_t>> paths{{}};
  std::vector<int> parent{-1};
  for (std::size_t v = 0; v < paths.size(); ++v) {
    if (paths[v].size() == 8) continue;
    const int nc = v == 0 ? 3 : 2;
    for (int c = 0; c < nc; ++c) {
      std::vector<std::uint8_t> p = paths[v];
      p.push_back(static_cast<std::uint8_t>(c));
      parent.push_back(static_cast<int>(v));
      paths.push_back(std::move(p));
    }
  }
  const SamplerSpec matching = SamplerSpec::matching();
  bool adjacency_ok = true;
  std::vector<int> open_incident(paths.size());
  for (int t = 0; t < 1000; ++t) {
    std::fill(open_incident.begin(), open_incident.end(), 0);
    const Seed seed{static_cast<std::uint64_t>(t), 0};
    for (std::size_t v = 1; v < paths.size(); ++v) {
      if (edge_state_at(matching, d3, seed, paths[v]) == 1) {
        adjacency_ok &= ++open_incident[v] <= 1;
        adjacency_ok &= ++open_incident[parent[v]] <= 1;
      }
    }
  }

  // bipartite site process: every length-16 path carries exactly 8 open
  // sites among x_1..x_16, for either side bit
  const SamplerSpec site = SamplerSpec::bipartite_site();
  bool site_ok = true;
  for (const std::uint64_t sv : {0ull, 1ull, 2ull, 3ull, 4ull}) {
    const Seed seed{sv, 0};
    std::vector<std::uint8_t> path;
    int open = 0;
    const std::function<bool()> rec = [&]() -> bool {
      if (path.size() == 16) return open * 2 == 16;
      const int nc = path.empty() ? 3 : 2;
      for (int c = 0; c < nc; ++c) {
        path.push_back(static_cast<std::uint8_t>(c));
        const int bit = site_state_at(site, d3, seed, path);
        open += bit;
        if (!rec()) return false;
        open -= bit;
        path.pop_back();
      }
      return true;
    };
    site_ok &= rec();
    site_ok &= site_path_density(site, d3, seed, 16).value == 0.5;
  }
  note = std::string("no adjacent open matching edges (1000 seeds, radius 8); ") +
         "all 98304 site paths at density 1/2 (5 seeds)";
  return adjacency_ok && site_ok;
}

bool monotone_coupling(std::string& note) {
  const int n = 12, trials = 1000;
  const TreeParams d3(3);
  int violations = 0;
  for (int t = 0; t < trials; ++t) {
    const Seed seed{static_cast<std::uint64_t>(t), 0};
    int prev = 0;
    for (int i = 1; i <= 9; ++i) {
      const int m =
          max_path_dfs(SamplerSpec::bernoulli(i * 0.1), d3, seed, n, true).open_count;
      if (m < prev) ++violations;
      prev = m;
    }
  }
  std::ostringstream os;
  os << violations << " violations over " << trials << " seeds x p-grid 0.1..0.9";
  note = os.str();
  return violations == 0;
}

bool determinism(std::string& note) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kDensitySweep;
  cfg.sampler = "max(bernoulli(0.4226497308),k=2)";
  cfg.degree = 3;
  cfg.horizons = {4, 8, 12};
  cfg.trials = 128;
  cfg.seed = 7;

  const std::string pa = "/tmp/treedense_acc_a.csv";
  const std::string pb = "/tmp/treedense_acc_b.csv";
  const std::string pj = "/tmp/treedense_acc_a.json";
  const std::string pk = "/tmp/treedense_acc_b.json";
  cfg.threads = 1;
  emit_file(run(cfg), OutputFormat::kCsv, pa);
  emit_file(run(cfg), OutputFormat::kJson, pj);
  cfg.threads = 4;
  emit_file(run(cfg), OutputFormat::kCsv, pb);
  emit_file(run(cfg), OutputFormat::kJson, pk);
  const bool same_csv = read_file(pa) == read_file(pb);
  const bool same_json = read_file(pj) == read_file(pk);
  const bool nonempty = read_file(pa).size() > 100;
  std::remove(pa.c_str());
  std::remove(pb.c_str());
  std::remove(pj.c_str());
  std::remove(pk.c_str());
  note = std::string("threads 1 vs 4: csv ") + (same_csv ? "identical" : "DIFFER") +
         ", json " + (same_json ? "identical" : "DIFFER");
  return same_csv && same_json && nonempty;
}

}  // namespace

int main() {
  const std::vector<Check> checks = {
      {1, "formula regression (a, f, 2/d at 1e-9)", formula_regression},
      {2, "interval coverage (no gaps d=4..10; d=3 gap [0.5, 2/3))", coverage_gaps},
      {3, "k-regime boundary at d=3 (margins > 1e-6)", k_regime_boundary},
      {4, "oracle equivalence (enumeration vs recursion, 1e-10)", oracle_equivalence},
      {5, "DFS vs exact law (4 sigma; pruning invisible)", dfs_vs_exact},
      {6, "survival fixed point (7/8 and subcritical decay by n=200)", survival_fixed_point},
      {7, "Bernoulli density inside f and sharp bounds at n=512", bernoulli_density_bounds},
      {8, "pigeonhole: fully open max-of-2 path has a copy at density 1/2", pigeonhole},
      {9, "matching adjacency and bipartite site density", matching_and_site},
      {10, "monotone coupling of DFS maxima in p", monotone_coupling},
      {11, "byte-identical outputs across thread counts", determinism},
  };
  int failures = 0;
  for (const Check& chk : checks) {
    const auto start = std::chrono::steady_clock::now();
    std::string notes;
    bool ok = false;
    try {
      ok = chk.body(notes);
    } catch (const std::exception& e) {
      notes = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %2d: %s — %s (%.2fs)\n", ok ? "PASS" : "FAIL", chk.id,
                chk.title.c_str(), notes.c_str(), secs);
    if (!ok) ++failures;
  }
  if (failures == 0)
    std::printf("acceptance: all %zu criteria passed\n", checks.size());
  else
    std::printf("acceptance: %d of %zu criteria FAILED\n", failures, checks.size());
  return failures;
}
