#pragma once

// Reproducible experiment orchestration: Monte Carlo sweeps over seeds and
// horizons, aggregation that is independent of execution order, and
// CSV/JSON emission that is byte-identical for identical configs.
//
// Trial i always uses seed base+i with stream 0; per-trial results land in
// preallocated slots and are reduced sequentially, so the thread count
// never changes any emitted byte. Wall time is measured but serialized as
// 0 unless timing is requested, keeping output files reproducible.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "treedense/bounds.hpp"
#include "treedense/density.hpp"
#include "treedense/sampler.hpp"
#include "treedense/stats.hpp"
#include "treedense/tree.hpp"

namespace treedense {

enum class ExperimentKind {
  kDensitySweep,
  kBoundsCurve,
  kCoverage,
  kBarrier,
  kCopies,
  kMarginal,
  kSurvival,
  kExact,
};

inline const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kDensitySweep: return "density-sweep";
    case ExperimentKind::kBoundsCurve: return "bounds-curve";
    case ExperimentKind::kCoverage: return "coverage";
    case ExperimentKind::kBarrier: return "barrier";
    case ExperimentKind::kCopies: return "copies";
    case ExperimentKind::kMarginal: return "marginal";
    case ExperimentKind::kSurvival: return "survival";
    case ExperimentKind::kExact: return "exact";
  }
  return "?";
}

inline ExperimentKind kind_from_string(const std::string& s) {
  if (s == "density-sweep") return ExperimentKind::kDensitySweep;
  if (s == "bounds-curve") return ExperimentKind::kBoundsCurve;
  if (s == "coverage") return ExperimentKind::kCoverage;
  if (s == "barrier") return ExperimentKind::kBarrier;
  if (s == "copies") return ExperimentKind::kCopies;
  if (s == "marginal") return ExperimentKind::kMarginal;
  if (s == "survival") return ExperimentKind::kSurvival;
  if (s == "exact") return ExperimentKind::kExact;
  throw std::invalid_argument("unknown experiment kind '" + s + "'");
}

enum class OutputFormat { kCsv, kJson };

inline OutputFormat format_from_string(const std::string& s) {
  if (s == "csv") return OutputFormat::kCsv;
  if (s == "json") return OutputFormat::kJson;
  throw std::invalid_argument("unknown output format '" + s + "' (expected csv or json)");
}

struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;

  bool empty() const { return step <= 0.0; }

  // start:stop:step, inclusive of start, exclusive of stop.
  std::vector<double> points() const {
    if (empty()) throw std::invalid_argument("grid: step must be positive");
    std::vector<double> out;
    const double eps = step * 1e-9;
    for (long i = 0;; ++i) {
      const double p = start + static_cast<double>(i) * step;
      if (p >= stop - eps) break;
      out.push_back(p);
      if (out.size() > 10'000'000) throw std::invalid_argument("grid: too many points");
    }
    return out;
  }
};

inline GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw std::invalid_argument("grid '" + text + "' must have the form start:stop:step");
  try {
    g.start = std::stod(text.substr(0, c1));
    g.stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    g.step = std::stod(text.substr(c2 + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("grid '" + text + "' has a malformed number");
  }
  if (!(g.step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(g.stop > g.start)) throw std::invalid_argument("grid stop must exceed start");
  return g;
}

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kDensitySweep;
  std::string sampler = "bernoulli(0.5)";
  int degree = 3;
  std::vector<int> horizons;
  std::uint64_t seed = 1;
  std::int64_t trials = 1;
  double barrier_a = 0.5;
  double barrier_c = 1.0;
  std::uint64_t barrier_cap = 1'000'000;
  double p = 0.5;        // exact / survival / single-p bounds
  GridSpec p_grid;       // bounds curve sweep; empty -> single p
  int k_max = 64;        // coverage
  double cov_step = 1e-4;
  int threads = 1;
  bool timing = false;
  std::string out;       // empty -> caller prints
  OutputFormat format = OutputFormat::kCsv;
};

using Value = std::variant<std::int64_t, double, std::string>;

struct ResultRecord {
  std::vector<std::pair<std::string, Value>> fields;

  void add(std::string name, std::int64_t v) { fields.emplace_back(std::move(name), v); }
  void add(std::string name, int v) { add(std::move(name), static_cast<std::int64_t>(v)); }
  void add(std::string name, std::uint64_t v) { add(std::move(name), static_cast<std::int64_t>(v)); }
  void add(std::string name, double v) { fields.emplace_back(std::move(name), v); }
  void add(std::string name, std::string v) { fields.emplace_back(std::move(name), Value(std::move(v))); }

  const Value& at(const std::string& name) const {
    for (const auto& [key, value] : fields)
      if (key == name) return value;
    throw std::out_of_range("no field '" + name + "'");
  }
  double number(const std::string& name) const {
    const Value& v = at(name);
    if (std::holds_alternative<double>(v)) return std::get<double>(v);
    if (std::holds_alternative<std::int64_t>(v)) return static_cast<double>(std::get<std::int64_t>(v));
    throw std::invalid_argument("field '" + name + "' is not numeric");
  }
  std::string text(const std::string& name) const { return std::get<std::string>(at(name)); }
};

struct ResultSet {
  std::vector<std::string> columns;
  std::vector<ResultRecord> rows;
};

namespace detail {

// Numbers serialize with 12 significant digits.
inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string format_value(const Value& v) {
  if (std::holds_alternative<std::int64_t>(v)) return std::to_string(std::get<std::int64_t>(v));
  if (std::holds_alternative<double>(v)) return format_number(std::get<double>(v));
  return std::get<std::string>(v);
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

inline void check_schema(const ResultSet& rs) {
  for (const ResultRecord& row : rs.rows) {
    if (row.fields.size() != rs.columns.size())
      throw std::logic_error("emit: row does not match column schema");
    for (std::size_t i = 0; i < rs.columns.size(); ++i)
      if (row.fields[i].first != rs.columns[i])
        throw std::logic_error("emit: row field '" + row.fields[i].first +
                               "' does not match column '" + rs.columns[i] + "'");
  }
}

}  // namespace detail

inline void emit(const ResultSet& rs, OutputFormat format, std::ostream& os) {
  detail::check_schema(rs);
  if (format == OutputFormat::kCsv) {
    for (std::size_t i = 0; i < rs.columns.size(); ++i)
      os << (i ? "," : "") << detail::csv_escape(rs.columns[i]);
    os << '\n';
    for (const ResultRecord& row : rs.rows) {
      for (std::size_t i = 0; i < row.fields.size(); ++i)
        os << (i ? "," : "") << detail::csv_escape(detail::format_value(row.fields[i].second));
      os << '\n';
    }
    return;
  }
  os << "[";
  for (std::size_t r = 0; r < rs.rows.size(); ++r) {
    os << (r ? ",\n " : "\n ") << "{";
    const ResultRecord& row = rs.rows[r];
    for (std::size_t i = 0; i < row.fields.size(); ++i) {
      os << (i ? "," : "") << '"' << detail::json_escape(row.fields[i].first) << "\":";
      const Value& v = row.fields[i].second;
      if (std::holds_alternative<std::string>(v))
        os << '"' << detail::json_escape(std::get<std::string>(v)) << '"';
      else
        os << detail::format_value(v);
    }
    os << "}";
  }
  os << "\n]\n";
}

inline void emit_file(const ResultSet& rs, OutputFormat format, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file '" + path + "'");
  emit(rs, format, os);
  if (!os) throw std::runtime_error("error writing output file '" + path + "'");
}

// Re-reads an emitted JSON array; numeric JSON values become int64/double.
inline ResultSet result_set_from_json(const std::string& text) {
  const nlohmann::ordered_json doc = nlohmann::ordered_json::parse(text);
  if (!doc.is_array()) throw std::invalid_argument("result JSON must be an array");
  ResultSet rs;
  for (const auto& item : doc) {
    ResultRecord row;
    for (const auto& [key, value] : item.items()) {
      if (value.is_number_integer())
        row.add(key, static_cast<std::int64_t>(value.get<std::int64_t>()));
      else if (value.is_number_float())
        row.add(key, value.get<double>());
      else
        row.add(key, value.get<std::string>());
      if (rs.rows.empty()) rs.columns.push_back(key);
    }
    rs.rows.push_back(std::move(row));
  }
  return rs;
}

namespace detail {

template <typename Fn>
void for_each_trial(std::int64_t trials, int threads, Fn&& fn) {
  if (threads <= 1 || trials <= 1) {
    for (std::int64_t i = 0; i < trials; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  const int workers = static_cast<int>(std::min<std::int64_t>(threads, trials));
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::int64_t i = next.fetch_add(1); i < trials; i = next.fetch_add(1)) fn(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

inline int single_horizon(const ExperimentConfig& cfg, const char* what) {
  require(cfg.horizons.size() == 1,
          std::string(what) + " takes exactly one horizon (use --n)");
  require(cfg.horizons[0] >= 1, "horizon must be >= 1");
  return cfg.horizons[0];
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds(bool enabled) const {
    if (!enabled) return 0.0;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

inline ResultSet run_density_sweep(const ExperimentConfig& cfg) {
  const Timer timer;
  const TreeParams params(cfg.degree);
  const SamplerSpec spec = parse_sampler(cfg.sampler);
  check_horizons(cfg.horizons);
  require(cfg.trials >= 1, "trials must be >= 1");
  const std::string echo = render_sampler(spec);

  std::vector<std::vector<int>> maxima(cfg.trials);
  for_each_trial(cfg.trials, cfg.threads, [&](std::int64_t i) {
    const Seed seed{cfg.seed + static_cast<std::uint64_t>(i), 0};
    maxima[i] = spec.is_site() ? site_path_maxima(spec, params, seed, cfg.horizons)
                               : max_path_maxima(spec, params, seed, cfg.horizons);
  });

  ResultSet rs;
  rs.columns = {"kind", "d", "sampler", "n", "trials", "mean", "max", "ci_lo", "ci_hi", "seconds"};
  const double secs = timer.seconds(cfg.timing);
  for (std::size_t h = 0; h < cfg.horizons.size(); ++h) {
    const int n = cfg.horizons[h];
    std::vector<double> densities(cfg.trials);
    for (std::int64_t i = 0; i < cfg.trials; ++i)
      densities[i] = static_cast<double>(maxima[i][h]) / n;
    const DensityEstimate est = mc_density_estimate(n, densities);
    ResultRecord row;
    row.add("kind", std::string(to_string(cfg.kind)));
    row.add("d", cfg.degree);
    row.add("sampler", echo);
    row.add("n", n);
    row.add("trials", cfg.trials);
    row.add("mean", *est.expectation);
    row.add("max", est.value);
    row.add("ci_lo", est.ci->lo);
    row.add("ci_hi", est.ci->hi);
    row.add("seconds", secs);
    rs.rows.push_back(std::move(row));
  }
  return rs;
}

inline ResultSet run_marginal(const ExperimentConfig& cfg) {
  const Timer timer;
  const TreeParams params(cfg.degree);
  const SamplerSpec spec = parse_sampler(cfg.sampler);
  require(cfg.trials >= 1, "trials must be >= 1");
  const MarginalEstimate est =
      empirical_marginal(spec, params, Seed{cfg.seed, 0}, static_cast<std::uint64_t>(cfg.trials));
  const double exact = exact_marginal(spec, params);

  ResultSet rs;
  rs.columns = {"kind", "d", "sampler", "depth", "trials", "mean", "ci_lo", "ci_hi", "exact", "seconds"};
  const double secs = timer.seconds(cfg.timing);
  for (int depth = 1; depth <= 4; ++depth) {
    ResultRecord row;
    row.add("kind", std::string(to_string(cfg.kind)));
    row.add("d", cfg.degree);
    row.add("sampler", render_sampler(spec));
    row.add("depth", depth);
    row.add("trials", cfg.trials);
    row.add("mean", est.depth_mean[depth - 1]);
    row.add("ci_lo", est.depth_ci[depth - 1].lo);
    row.add("ci_hi", est.depth_ci[depth - 1].hi);
    row.add("exact", exact);
    row.add("seconds", secs);
    rs.rows.push_back(std::move(row));
  }
  return rs;
}

inline ResultSet run_copies(const ExperimentConfig& cfg) {
  const Timer timer;
  const TreeParams params(cfg.degree);
  const SamplerSpec spec = parse_sampler(cfg.sampler);
  require(spec.kind() == SamplerSpec::Kind::kMaxOfK,
          "copies experiment needs a max(...) sampler");
  require(cfg.trials >= 1, "trials must be >= 1");
  const int n = single_horizon(cfg, "copies experiment");

  struct Trial {
    bool fully_open = false;
    double best_copy = 0.0;
    bool violation = false;
  };
  std::vector<Trial> trials(cfg.trials);
  for_each_trial(cfg.trials, cfg.threads, [&](std::int64_t i) {
    const Seed seed{cfg.seed + static_cast<std::uint64_t>(i), 0};
    const BestCopyResult r = best_copy_density(spec, params, seed, n);
    trials[i] = {r.record.open_count == n, r.best_copy_average,
                 r.best_copy_average < r.pigeonhole_bound};
  });

  std::uint64_t fully_open = 0, violations = 0;
  KahanSum best_sum;
  double best_min = 1.0;
  for (const Trial& t : trials) {
    fully_open += t.fully_open ? 1 : 0;
    violations += t.violation ? 1 : 0;
    best_sum.add(t.best_copy);
    best_min = std::min(best_min, t.best_copy);
  }
  const Interval ci = wilson_interval(fully_open, static_cast<std::uint64_t>(cfg.trials));

  ResultSet rs;
  rs.columns = {"kind", "d",     "sampler",        "n",           "trials",
                "fully_open",    "ci_lo",          "ci_hi",       "best_copy_mean",
                "best_copy_min", "pigeonhole_violations", "seconds"};
  ResultRecord row;
  row.add("kind", std::string(to_string(cfg.kind)));
  row.add("d", cfg.degree);
  row.add("sampler", render_sampler(spec));
  row.add("n", n);
  row.add("trials", cfg.trials);
  row.add("fully_open", static_cast<double>(fully_open) / static_cast<double>(cfg.trials));
  row.add("ci_lo", ci.lo);
  row.add("ci_hi", ci.hi);
  row.add("best_copy_mean", best_sum.value() / static_cast<double>(cfg.trials));
  row.add("best_copy_min", best_min);
  row.add("pigeonhole_violations", violations);
  row.add("seconds", timer.seconds(cfg.timing));
  rs.rows.push_back(std::move(row));
  return rs;
}

inline ResultSet run_barrier(const ExperimentConfig& cfg) {
  const Timer timer;
  const TreeParams params(cfg.degree);
  const SamplerSpec spec = parse_sampler(cfg.sampler);
  require(cfg.trials >= 1, "trials must be >= 1");
  const int n = single_horizon(cfg, "barrier experiment");

  struct Trial {
    std::uint64_t survivors = 0;
    bool capped = false;
  };
  std::vector<Trial> trials(cfg.trials);
  for_each_trial(cfg.trials, cfg.threads, [&](std::int64_t i) {
    const Seed seed{cfg.seed + static_cast<std::uint64_t>(i), 0};
    const BarrierResult r =
        barrier_survival(spec, params, seed, n, cfg.barrier_a, cfg.barrier_c, cfg.barrier_cap);
    trials[i] = {r.survivors, r.capped};
  });

  std::uint64_t with_survivor = 0, capped = 0;
  KahanSum count_sum;
  for (const Trial& t : trials) {
    with_survivor += t.survivors > 0 ? 1 : 0;
    capped += t.capped ? 1 : 0;
    count_sum.add(static_cast<double>(t.survivors));
  }
  const Interval ci = wilson_interval(with_survivor, static_cast<std::uint64_t>(cfg.trials));

  ResultSet rs;
  rs.columns = {"kind", "d", "sampler", "n", "a", "c", "cap", "trials", "survive_frac",
                "ci_lo", "ci_hi", "mean_count", "capped_trials", "seconds"};
  ResultRecord row;
  row.add("kind", std::string(to_string(cfg.kind)));
  row.add("d", cfg.degree);
  row.add("sampler", render_sampler(spec));
  row.add("n", n);
  row.add("a", cfg.barrier_a);
  row.add("c", cfg.barrier_c);
  row.add("cap", cfg.barrier_cap);
  row.add("trials", cfg.trials);
  row.add("survive_frac", static_cast<double>(with_survivor) / static_cast<double>(cfg.trials));
  row.add("ci_lo", ci.lo);
  row.add("ci_hi", ci.hi);
  row.add("mean_count", count_sum.value() / static_cast<double>(cfg.trials));
  row.add("capped_trials", capped);
  row.add("seconds", timer.seconds(cfg.timing));
  rs.rows.push_back(std::move(row));
  return rs;
}

inline ResultSet run_survival(const ExperimentConfig& cfg) {
  const Timer timer;
  check_horizons(cfg.horizons);
  ResultSet rs;
  rs.columns = {"kind", "d", "p", "n", "p_full", "limit", "theta", "seconds"};
  for (const int n : cfg.horizons) {
    const SurvivalResult r = survival_fully_open(cfg.degree, cfg.p, n);
    ResultRecord row;
    row.add("kind", std::string(to_string(cfg.kind)));
    row.add("d", cfg.degree);
    row.add("p", cfg.p);
    row.add("n", n);
    row.add("p_full", r.at_horizon);
    row.add("limit", r.limit);
    row.add("theta", r.theta);
    row.add("seconds", 0.0);
    rs.rows.push_back(std::move(row));
  }
  if (cfg.timing)
    for (ResultRecord& row : rs.rows) row.fields.back().second = timer.seconds(true);
  return rs;
}

inline ResultSet run_exact(const ExperimentConfig& cfg) {
  const Timer timer;
  check_horizons(cfg.horizons);
  const std::vector<ExactSweepRow> sweep = exact_bernoulli_sweep(cfg.degree, cfg.p, cfg.horizons);
  ResultSet rs;
  rs.columns = {"kind", "d", "p", "n", "e_mn", "density", "p_full", "seconds"};
  const double secs = timer.seconds(cfg.timing);
  for (const ExactSweepRow& r : sweep) {
    ResultRecord row;
    row.add("kind", std::string(to_string(cfg.kind)));
    row.add("d", cfg.degree);
    row.add("p", cfg.p);
    row.add("n", r.horizon);
    row.add("e_mn", r.expectation);
    row.add("density", r.expectation / r.horizon);
    row.add("p_full", r.survival);
    row.add("seconds", secs);
    rs.rows.push_back(std::move(row));
  }
  return rs;
}

inline ResultSet run_bounds_curve(const ExperimentConfig& cfg) {
  std::vector<double> points;
  if (!cfg.p_grid.empty())
    points = cfg.p_grid.points();
  else
    points.push_back(cfg.p);
  ResultSet rs;
  rs.columns = {"p", "lower", "source", "k"};
  for (const double p : points) {
    const BoundsPoint b = lower_bound_curve(cfg.degree, p);
    ResultRecord row;
    row.add("p", b.p);
    row.add("lower", b.lower);
    row.add("source", std::string(to_string(b.source)));
    row.add("k", b.k);
    rs.rows.push_back(std::move(row));
  }
  return rs;
}

inline ResultSet run_coverage(const ExperimentConfig& cfg) {
  const CoverageReport report = interval_coverage(cfg.degree, cfg.k_max, cfg.cov_step);
  ResultSet rs;
  rs.columns = {"kind", "d", "row", "k", "lo", "hi", "overlap_ok"};
  for (const CoverageInterval& iv : report.intervals) {
    ResultRecord row;
    row.add("kind", std::string(to_string(cfg.kind)));
    row.add("d", report.degree);
    row.add("row", std::string("interval"));
    row.add("k", iv.k);
    row.add("lo", iv.lo);
    row.add("hi", iv.hi);
    row.add("overlap_ok", static_cast<std::int64_t>(iv.overlap_ok ? 1 : 0));
    rs.rows.push_back(std::move(row));
  }
  for (const CoverageGap& gap : report.gaps) {
    ResultRecord row;
    row.add("kind", std::string(to_string(cfg.kind)));
    row.add("d", report.degree);
    row.add("row", std::string("gap"));
    row.add("k", 0);
    row.add("lo", gap.lo);
    row.add("hi", gap.hi);
    row.add("overlap_ok", static_cast<std::int64_t>(0));
    rs.rows.push_back(std::move(row));
  }
  return rs;
}

}  // namespace detail

inline ResultSet run(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::kDensitySweep: return detail::run_density_sweep(cfg);
    case ExperimentKind::kBoundsCurve: return detail::run_bounds_curve(cfg);
    case ExperimentKind::kCoverage: return detail::run_coverage(cfg);
    case ExperimentKind::kBarrier: return detail::run_barrier(cfg);
    case ExperimentKind::kCopies: return detail::run_copies(cfg);
    case ExperimentKind::kMarginal: return detail::run_marginal(cfg);
    case ExperimentKind::kSurvival: return detail::run_survival(cfg);
    case ExperimentKind::kExact: return detail::run_exact(cfg);
  }
  throw std::logic_error("run: unreachable");
}

// Applies a JSON config object (keys mirror ExperimentConfig; unknown keys
// rejected). `overridden(key)` returns true for fields pinned by explicit
// command-line flags, which win over the file.
inline void apply_json_config(ExperimentConfig& cfg, const std::string& text,
                              const std::function<bool(const std::string&)>& overridden =
                                  [](const std::string&) { return false; }) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config: top level must be a JSON object");
  try {
    for (const auto& [key, value] : doc.items()) {
      const bool skip = overridden(key);
      if (key == "kind") {
        if (!skip) cfg.kind = kind_from_string(value.get<std::string>());
      } else if (key == "sampler") {
        if (!skip) cfg.sampler = value.get<std::string>();
      } else if (key == "d") {
        if (!skip) cfg.degree = value.get<int>();
      } else if (key == "horizons") {
        if (!skip) cfg.horizons = value.get<std::vector<int>>();
      } else if (key == "seed") {
        if (!skip) cfg.seed = value.get<std::uint64_t>();
      } else if (key == "trials") {
        if (!skip) cfg.trials = value.get<std::int64_t>();
      } else if (key == "a") {
        if (!skip) cfg.barrier_a = value.get<double>();
      } else if (key == "c") {
        if (!skip) cfg.barrier_c = value.get<double>();
      } else if (key == "cap") {
        if (!skip) cfg.barrier_cap = value.get<std::uint64_t>();
      } else if (key == "p") {
        if (!skip) cfg.p = value.get<double>();
      } else if (key == "p_grid") {
        if (!skip) cfg.p_grid = parse_grid(value.get<std::string>());
      } else if (key == "k_max") {
        if (!skip) cfg.k_max = value.get<int>();
      } else if (key == "step") {
        if (!skip) cfg.cov_step = value.get<double>();
      } else if (key == "threads") {
        if (!skip) cfg.threads = value.get<int>();
      } else if (key == "timing") {
        if (!skip) cfg.timing = value.get<bool>();
      } else if (key == "out") {
        if (!skip) cfg.out = value.get<std::string>();
      } else if (key == "format") {
        if (!skip) cfg.format = format_from_string(value.get<std::string>());
      } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

}  // namespace treedense
