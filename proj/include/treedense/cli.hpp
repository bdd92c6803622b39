#pragma once

// Command-line front end. One subcommand per experiment; global flags
// --seed/--trials/--out/--format/--threads/--config/--timing apply to all
// of them. A JSON config file supplies any field not pinned by an
// explicit flag (flags win). Results go to --out, or to stdout when no
// output path is given.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "treedense/harness.hpp"

namespace treedense {

namespace detail {

inline std::vector<int> parse_horizons(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw std::invalid_argument("--horizons: malformed integer '" + item + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument("--horizons: empty list");
  return out;
}

inline std::vector<int> range_horizons(int n) {
  if (n < 1) throw std::invalid_argument("--n must be >= 1");
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) out[i] = i + 1;
  return out;
}

inline std::string coverage_summary(const CoverageReport& report) {
  std::ostringstream os;
  os << "coverage d=" << report.degree << " k_max=" << report.k_max
     << " grid=[" << format_number(report.grid_min) << ",1) step="
     << format_number(report.grid_step) << ": ";
  if (report.gaps.empty()) {
    os << "no gaps";
  } else {
    os << report.gaps.size() << " gap" << (report.gaps.size() == 1 ? "" : "s");
    for (const CoverageGap& g : report.gaps)
      os << " [" << format_number(g.lo) << "," << format_number(g.hi) << ")";
  }
  return os.str();
}

}  // namespace detail

// argv-style entry point; args excludes the program name. Exit codes:
// 0 success, 1 runtime failure, 2 usage error.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "treedense: density of open edges along self-avoiding paths under invariant\n"
      "percolation on the d-regular tree. Exact recursions, branch-and-bound path\n"
      "search, samplers (bernoulli, max-of-k, complement, matching, bipartite-site)\n"
      "and closed-form lower bounds.",
      "treedense"};
  app.require_subcommand(1);

  // Globals; visible after the subcommand too.
  std::uint64_t seed = 1;
  std::int64_t trials = -1;  // per-subcommand default when unset
  std::string out_path, format_text = "csv", config_path;
  int threads = 0;
  bool timing = false;
  auto* opt_seed = app.add_option("--seed", seed, "base seed; trial i uses seed+i");
  auto* opt_trials = app.add_option("--trials", trials, "number of Monte Carlo trials (seeds)");
  auto* opt_out = app.add_option("--out", out_path, "output file path (default: stdout)");
  auto* opt_format = app.add_option("--format", format_text, "output format: csv or json");
  auto* opt_threads =
      app.add_option("--threads", threads,
                     "worker threads for Monte Carlo trials (default: TREEDENSE_THREADS or 1); "
                     "never changes results");
  auto* opt_config = app.add_option("--config", config_path,
                                    "JSON config file mirroring the experiment fields; "
                                    "explicit flags win");
  auto* opt_timing = app.add_flag("--timing", timing,
                                  "emit measured wall time in the seconds column "
                                  "(off by default so outputs are byte-reproducible)");

  int degree = 3;
  double p = 0.5;
  int n = 0;
  std::string horizons_text, sampler_text, grid_text;
  double barrier_a = 0.5, barrier_c = 1.0;
  std::uint64_t cap = 1'000'000;
  int k_max = 64;
  double cov_step = 1e-4;

  const std::string d_help = "tree degree d >= 3 (cluster threshold marginal: 2/d)";

  CLI::App* bounds = app.add_subcommand(
      "bounds",
      "best known lower bound on achievable path density at marginal p: max of p itself,\n"
      "density 1 once p >= 2/d, and 1/k once p >= a(d,k) = 1-(1-2/d)^(1/k)");
  auto* b_d = bounds->add_option("--d", degree, d_help);
  auto* b_p = bounds->add_option("--p", p, "single marginal to evaluate");
  auto* b_grid = bounds->add_option("--p-grid", grid_text,
                                    "marginal sweep start:stop:step (start included, stop "
                                    "excluded); default 0.001:0.999:0.001");

  CLI::App* coverage = app.add_subcommand(
      "coverage",
      "coverage of (0,1) by the intervals [a(d,k), 1/k) where the k-copy bound beats the\n"
      "trivial one; scans a p-grid from a(d,k_max) and reports uncovered gaps");
  auto* cov_d = coverage->add_option("--d", degree, d_help);
  auto* cov_k = coverage->add_option("--k-max", k_max, "largest k in the interval family");
  auto* cov_s = coverage->add_option("--step", cov_step, "scan grid step");

  CLI::App* exact = app.add_subcommand(
      "exact",
      "exact E[M_n] and P(M_n = n) for Bernoulli(p), where M_n is the maximum open-edge\n"
      "count over the d(d-1)^(n-1) descending paths of length n (O(n^2) recursion)");
  auto* e_d = exact->add_option("--d", degree, d_help);
  auto* e_p = exact->add_option("--p", p, "Bernoulli marginal");
  auto* e_n = exact->add_option("--n", n, "table horizons 1..n");
  auto* e_h = exact->add_option("--horizons", horizons_text, "explicit horizon list, e.g. 8,16,32");

  CLI::App* survival = app.add_subcommand(
      "survival",
      "probability that a fully open length-n path exists, with the n->infinity limit\n"
      "1-(1-p*theta)^d for theta the largest fixed point of theta = 1-(1-p*theta)^(d-1)");
  auto* s_d = survival->add_option("--d", degree, d_help);
  auto* s_p = survival->add_option("--p", p, "Bernoulli marginal");
  auto* s_n = survival->add_option("--n", n, "table horizons 1..n");
  auto* s_h = survival->add_option("--horizons", horizons_text, "explicit horizon list");

  CLI::App* density = app.add_subcommand(
      "density",
      "Monte Carlo sweep of the best path density M_n/n under any sampler via\n"
      "branch-and-bound DFS; reports per-horizon mean, max and 95% CI over seeds");
  auto* dn_d = density->add_option("--d", degree, d_help);
  auto* dn_sampler = density->add_option(
      "--sampler", sampler_text,
      "sampler text, e.g. bernoulli(0.5), max(bernoulli(0.4226497308),k=2), matching,"
      " complement(bernoulli(0.3)), bipartite-site");
  auto* dn_h = density->add_option("--horizons", horizons_text, "horizon list, e.g. 4,8,12,16");
  auto* dn_n = density->add_option("--n", n, "single horizon");

  CLI::App* barrier = app.add_subcommand(
      "barrier",
      "counts length-n paths whose every prefix of length j has at least a*j - c open\n"
      "edges (sustained-density probe); reports the fraction of seeds with a survivor");
  auto* br_d = barrier->add_option("--d", degree, d_help);
  auto* br_sampler = barrier->add_option("--sampler", sampler_text, "edge sampler text");
  auto* br_n = barrier->add_option("--n", n, "path length");
  auto* br_a = barrier->add_option("--a", barrier_a, "barrier slope: target density in [0,1]");
  auto* br_c = barrier->add_option("--c", barrier_c, "barrier slack c >= 0");
  auto* br_cap = barrier->add_option("--cap", cap, "survivor count cap per seed");

  CLI::App* copies = app.add_subcommand(
      "copies",
      "per-copy open counts along the argmax path of a max(...,k=K) sampler; whenever\n"
      "that path is fully open the best copy's density is at least ceil(n/K)/n");
  auto* cp_d = copies->add_option("--d", degree, d_help);
  auto* cp_sampler = copies->add_option("--sampler", sampler_text,
                                        "max(...) sampler text; default "
                                        "max(bernoulli(0.4226497308),k=2), whose marginal is 2/3");
  auto* cp_n = copies->add_option("--n", n, "path length");

  CLI::App* marginal = app.add_subcommand(
      "marginal",
      "empirical marginal of a sampler at a fixed edge/site over seeds (Wilson 95% CI),\n"
      "plus per-depth marginals at depths 1..4 as an invariance check");
  auto* mg_d = marginal->add_option("--d", degree, d_help);
  auto* mg_sampler = marginal->add_option("--sampler", sampler_text, "sampler text");

  for (CLI::App* sub : {bounds, coverage, exact, survival, density, barrier, copies, marginal})
    sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs[0]->help());
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().at(0);
  const std::string sub_name = sub->get_name();

  try {
    ExperimentConfig cfg;
    std::int64_t default_trials = 1;

    // Subcommand identity and defaults.
    if (sub == bounds) {
      cfg.kind = ExperimentKind::kBoundsCurve;
      cfg.p_grid = parse_grid("0.001:0.999:0.001");
    } else if (sub == coverage) {
      cfg.kind = ExperimentKind::kCoverage;
    } else if (sub == exact) {
      cfg.kind = ExperimentKind::kExact;
      cfg.horizons = detail::range_horizons(64);
    } else if (sub == survival) {
      cfg.kind = ExperimentKind::kSurvival;
      cfg.horizons = detail::range_horizons(200);
      cfg.p = 2.0 / 3.0;
    } else if (sub == density) {
      cfg.kind = ExperimentKind::kDensitySweep;
      cfg.horizons = {4, 8, 12, 16};
      default_trials = 200;
    } else if (sub == barrier) {
      cfg.kind = ExperimentKind::kBarrier;
      cfg.sampler = "bernoulli(0.9)";
      cfg.horizons = {20};
      cfg.barrier_a = 0.5;
      cfg.barrier_c = 2.0;
      default_trials = 100;
    } else if (sub == copies) {
      cfg.kind = ExperimentKind::kCopies;
      cfg.sampler = "max(bernoulli(0.4226497308),k=2)";
      cfg.horizons = {24};
      default_trials = 100;
    } else if (sub == marginal) {
      cfg.kind = ExperimentKind::kMarginal;
      default_trials = 100000;
    }
    cfg.trials = default_trials;

    // Config file fills fields not pinned by flags.
    if (opt_config->count() > 0) {
      std::ifstream in(config_path);
      if (!in) throw std::invalid_argument("cannot read config file '" + config_path + "'");
      std::stringstream buffer;
      buffer << in.rdbuf();
      const std::string text = buffer.str();

      const nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
      if (!doc.is_discarded() && doc.is_object() && doc.contains("kind")) {
        const std::string wanted = doc["kind"].is_string() ? doc["kind"].get<std::string>() : "";
        if (to_string(cfg.kind) != wanted)
          throw std::invalid_argument("config kind '" + wanted +
                                      "' does not match subcommand '" + sub_name + "'");
      }
      const auto overridden = [&](const std::string& key) {
        if (key == "kind") return true;  // the subcommand decides
        if (key == "d")
          return (b_d->count() | cov_d->count() | e_d->count() | s_d->count() | dn_d->count() |
                  br_d->count() | cp_d->count() | mg_d->count()) > 0;
        if (key == "sampler")
          return (dn_sampler->count() | br_sampler->count() | cp_sampler->count() |
                  mg_sampler->count()) > 0;
        if (key == "horizons")
          return (e_n->count() | e_h->count() | s_n->count() | s_h->count() | dn_h->count() |
                  dn_n->count() | br_n->count() | cp_n->count()) > 0;
        if (key == "seed") return opt_seed->count() > 0;
        if (key == "trials") return opt_trials->count() > 0;
        if (key == "a") return br_a->count() > 0;
        if (key == "c") return br_c->count() > 0;
        if (key == "cap") return br_cap->count() > 0;
        if (key == "p") return (b_p->count() | e_p->count() | s_p->count()) > 0;
        if (key == "p_grid") return b_grid->count() > 0;
        if (key == "k_max") return cov_k->count() > 0;
        if (key == "step") return cov_s->count() > 0;
        if (key == "threads") return opt_threads->count() > 0;
        if (key == "timing") return opt_timing->count() > 0;
        if (key == "out") return opt_out->count() > 0;
        if (key == "format") return opt_format->count() > 0;
        return false;
      };
      apply_json_config(cfg, text, overridden);
    }

    // Explicit flags win.
    const bool has_d = (b_d->count() | cov_d->count() | e_d->count() | s_d->count() |
                        dn_d->count() | br_d->count() | cp_d->count() | mg_d->count()) > 0;
    if (has_d) cfg.degree = degree;
    const bool has_sampler = (dn_sampler->count() | br_sampler->count() | cp_sampler->count() |
                              mg_sampler->count()) > 0;
    if (has_sampler) cfg.sampler = sampler_text;
    if (opt_seed->count()) cfg.seed = seed;
    if (opt_trials->count()) cfg.trials = trials;
    if (br_a->count()) cfg.barrier_a = barrier_a;
    if (br_c->count()) cfg.barrier_c = barrier_c;
    if (br_cap->count()) cfg.barrier_cap = cap;
    if ((b_p->count() | e_p->count() | s_p->count()) > 0) cfg.p = p;
    if (b_grid->count()) {
      cfg.p_grid = parse_grid(grid_text);
      cfg.p = 0.0;
    } else if (b_p->count()) {
      cfg.p_grid = GridSpec{};  // single point
    }
    if (cov_k->count()) cfg.k_max = k_max;
    if (cov_s->count()) cfg.cov_step = cov_step;
    if (opt_timing->count()) cfg.timing = timing;
    if (opt_out->count()) cfg.out = out_path;
    if (opt_format->count()) cfg.format = format_from_string(format_text);

    if ((e_h->count() | s_h->count() | dn_h->count()) > 0)
      cfg.horizons = detail::parse_horizons(horizons_text);
    else if ((e_n->count() | s_n->count()) > 0)
      cfg.horizons = detail::range_horizons(n);
    else if ((dn_n->count() | br_n->count() | cp_n->count()) > 0)
      cfg.horizons = {n};

    if (opt_threads->count()) {
      cfg.threads = threads;
    } else if (cfg.threads <= 1) {
      if (const char* env = std::getenv("TREEDENSE_THREADS")) {
        try {
          cfg.threads = std::stoi(env);
        } catch (const std::exception&) {
          throw std::invalid_argument("TREEDENSE_THREADS is not an integer: '" +
                                      std::string(env) + "'");
        }
      }
    }
    if (cfg.threads < 1) cfg.threads = 1;

    // Early validation so misuse exits 2 before any work starts.
    TreeParams validate_degree(cfg.degree);
    (void)validate_degree;
    if (cfg.trials < 1) throw std::invalid_argument("--trials must be >= 1");
    const bool uses_sampler = sub == density || sub == barrier || sub == copies || sub == marginal;
    if (uses_sampler) {
      const SamplerSpec spec = parse_sampler(cfg.sampler);
      if ((sub == barrier) && spec.is_site())
        throw std::invalid_argument("--sampler: barrier needs an edge process");
      if (sub == copies && spec.kind() != SamplerSpec::Kind::kMaxOfK)
        throw std::invalid_argument("--sampler: copies needs a max(...) sampler");
    }
    if (sub != bounds && sub != coverage && sub != marginal)
      detail::check_horizons(cfg.horizons);

    const ResultSet rs = run(cfg);

    if (sub == coverage) {
      const CoverageReport report = interval_coverage(cfg.degree, cfg.k_max, cfg.cov_step);
      if (!cfg.out.empty()) {
        emit_file(rs, cfg.format, cfg.out);
        out << detail::coverage_summary(report) << "\n";
        out << "wrote " << rs.rows.size() << " rows to " << cfg.out << "\n";
      } else {
        out << detail::coverage_summary(report) << "\n";
        for (const CoverageGap& g : report.gaps)
          out << "gap " << detail::format_number(g.lo) << " " << detail::format_number(g.hi) << "\n";
      }
      return 0;
    }

    if (!cfg.out.empty()) {
      emit_file(rs, cfg.format, cfg.out);
      out << "wrote " << rs.rows.size() << " rows to " << cfg.out << "\n";
    } else {
      emit(rs, cfg.format, out);
    }
    return 0;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace treedense
