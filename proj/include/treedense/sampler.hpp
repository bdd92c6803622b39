#pragma once

// Concrete invariant percolation laws on the edges (and sites) of the
// d-regular tree, evaluable lazily object-by-object:
//
//   bernoulli(p)          iid edges, open with probability p
//   max(BASE,k=K)         pointwise maximum of K iid copies of BASE
//   complement(BASE)      1 - BASE
//   matching              every vertex picks one incident edge uniformly;
//                         an edge is open iff both endpoints pick it
//   bipartite-site        site process: one side of the bipartition is
//                         open, chosen by a single fair bit of the seed
//
// Copy i of max(BASE,k=K) is evaluated with stream label i (folded as
// stream*K + i so that nested constructions stay independent). The same
// textual forms above are the canonical grammar used by the CLI and
// config files.

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "treedense/stats.hpp"
#include "treedense/tree.hpp"

namespace treedense {

class SamplerSpec {
 public:
  enum class Kind { kBernoulli, kMaxOfK, kComplement, kMatching, kBipartiteSite };

  static SamplerSpec bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::domain_error("bernoulli: probability must lie in [0,1]");
    SamplerSpec s(Kind::kBernoulli);
    s.p_ = p;
    return s;
  }

  static SamplerSpec max_of(SamplerSpec base, int k) {
    if (k < 1) throw std::domain_error("max_of: k must be >= 1");
    if (base.is_site()) throw std::invalid_argument("max_of: base must be an edge process");
    SamplerSpec s(Kind::kMaxOfK);
    s.k_ = k;
    s.base_ = std::make_shared<const SamplerSpec>(std::move(base));
    return s;
  }

  static SamplerSpec complement(SamplerSpec base) {
    if (base.is_site()) throw std::invalid_argument("complement: base must be an edge process");
    SamplerSpec s(Kind::kComplement);
    s.base_ = std::make_shared<const SamplerSpec>(std::move(base));
    return s;
  }

  static SamplerSpec matching() { return SamplerSpec(Kind::kMatching); }
  static SamplerSpec bipartite_site() { return SamplerSpec(Kind::kBipartiteSite); }

  Kind kind() const { return kind_; }
  bool is_site() const { return kind_ == Kind::kBipartiteSite; }
  bool is_edge() const { return !is_site(); }

  double p() const { return p_; }
  int k() const { return k_; }
  const SamplerSpec& base() const { return *base_; }

  friend bool operator==(const SamplerSpec& a, const SamplerSpec& b) {
    if (a.kind_ != b.kind_ || a.p_ != b.p_ || a.k_ != b.k_) return false;
    if (!a.base_ != !b.base_) return false;
    return !a.base_ || *a.base_ == *b.base_;
  }

 private:
  explicit SamplerSpec(Kind kind) : kind_(kind) {}

  Kind kind_;
  double p_ = 0.0;
  int k_ = 0;
  std::shared_ptr<const SamplerSpec> base_;
};

namespace detail {

// Uniform choice in [0,d) owned by the vertex with the given address.
inline int vertex_choice(Seed seed, int degree, std::span<const std::uint8_t> path) noexcept {
  return static_cast<int>(static_cast<double>(degree) * vertex_uniform_at(seed, path));
}

// Incident-edge order at a vertex: parent edge first, then child edges in
// order; the root has no parent edge, so its choice indexes children
// directly.
inline int matching_state_at(TreeParams params, Seed seed,
                             std::span<const std::uint8_t> child_path) noexcept {
  const auto parent_path = child_path.first(child_path.size() - 1);
  const int child_index = child_path.back();
  const int parent_pick = vertex_choice(seed, params.degree, parent_path);
  const int wanted = parent_path.empty() ? child_index : child_index + 1;
  if (parent_pick != wanted) return 0;
  return vertex_choice(seed, params.degree, child_path) == 0 ? 1 : 0;
}

inline Seed copy_seed(Seed seed, int k, int copy) noexcept {
  return Seed{seed.value, seed.stream * static_cast<std::uint64_t>(k) +
                               static_cast<std::uint64_t>(copy)};
}

}  // namespace detail

// State of the edge whose child endpoint has the given (nonempty) address.
inline int edge_state_at(const SamplerSpec& spec, TreeParams params, Seed seed,
                         std::span<const std::uint8_t> child_path) {
  switch (spec.kind()) {
    case SamplerSpec::Kind::kBernoulli:
      return edge_uniform_at(seed, child_path) < spec.p() ? 1 : 0;
    case SamplerSpec::Kind::kMaxOfK:
      for (int i = 0; i < spec.k(); ++i) {
        if (edge_state_at(spec.base(), params, detail::copy_seed(seed, spec.k(), i),
                          child_path))
          return 1;
      }
      return 0;
    case SamplerSpec::Kind::kComplement:
      return 1 - edge_state_at(spec.base(), params, seed, child_path);
    case SamplerSpec::Kind::kMatching:
      return detail::matching_state_at(params, seed, child_path);
    case SamplerSpec::Kind::kBipartiteSite:
      break;
  }
  throw std::invalid_argument("edge_state: sampler is a site process");
}

inline int edge_state(const SamplerSpec& spec, TreeParams params, Seed seed, const EdgeId& e) {
  validate_vertex(e.child, params);
  return edge_state_at(spec, params, seed, e.child.indices());
}

// States of the k underlying copies of a max(BASE,k=K) process at one edge.
struct CopyStates {
  std::vector<int> bits;
  int max() const {
    int m = 0;
    for (int b : bits) m = m > b ? m : b;
    return m;
  }
};

inline CopyStates copy_states_at(const SamplerSpec& spec, TreeParams params, Seed seed,
                                 std::span<const std::uint8_t> child_path) {
  if (spec.kind() != SamplerSpec::Kind::kMaxOfK)
    throw std::invalid_argument("copy_states: sampler is not a max-of-k process");
  CopyStates out;
  out.bits.reserve(spec.k());
  for (int i = 0; i < spec.k(); ++i)
    out.bits.push_back(
        edge_state_at(spec.base(), params, detail::copy_seed(seed, spec.k(), i), child_path));
  return out;
}

inline CopyStates copy_states(const SamplerSpec& spec, TreeParams params, Seed seed,
                              const EdgeId& e) {
  validate_vertex(e.child, params);
  return copy_states_at(spec, params, seed, e.child.indices());
}

// Fair bit choosing which side of the bipartition is open.
inline int bipartite_side_bit(Seed seed) noexcept {
  std::uint64_t h = detail::combine(detail::kHashInit, seed.value);
  h = detail::combine(h, seed.stream);
  h = detail::combine(h, detail::kSideDomain);
  return static_cast<int>(h >> 63);
}

inline int site_state_at(const SamplerSpec& spec, TreeParams /*params*/, Seed seed,
                         std::span<const std::uint8_t> path) {
  if (!spec.is_site()) throw std::invalid_argument("site_state: sampler is an edge process");
  const int parity = static_cast<int>(path.size() % 2);
  return parity == bipartite_side_bit(seed) ? 1 : 0;
}

inline int site_state(const SamplerSpec& spec, TreeParams params, Seed seed, const VertexId& v) {
  validate_vertex(v, params);
  return site_state_at(spec, params, seed, v.indices());
}

// Closed-form marginal: probability that a fixed edge (or site) is open.
inline double exact_marginal(const SamplerSpec& spec, TreeParams params) {
  switch (spec.kind()) {
    case SamplerSpec::Kind::kBernoulli:
      return spec.p();
    case SamplerSpec::Kind::kMaxOfK:
      return 1.0 - std::pow(1.0 - exact_marginal(spec.base(), params), spec.k());
    case SamplerSpec::Kind::kComplement:
      return 1.0 - exact_marginal(spec.base(), params);
    case SamplerSpec::Kind::kMatching:
      return 1.0 / (static_cast<double>(params.degree) * static_cast<double>(params.degree));
    case SamplerSpec::Kind::kBipartiteSite:
      return 0.5;
  }
  throw std::logic_error("exact_marginal: unreachable");
}

// Monte Carlo marginal at a fixed object over distinct seeds, with a 95%
// Wilson interval, plus per-depth marginals at depths 1..4 (the proxy test
// for invariance of the law under the depth coordinate).
struct MarginalEstimate {
  std::uint64_t trials = 0;
  double mean = 0.0;
  Interval ci;
  std::array<double, 4> depth_mean{};  // depths 1..4
  std::array<Interval, 4> depth_ci{};
};

inline MarginalEstimate empirical_marginal(const SamplerSpec& spec, TreeParams params,
                                           Seed base_seed, std::uint64_t trials) {
  if (trials < 1) throw std::domain_error("empirical_marginal: need at least one sample");
  // Representatives at depths 1..4 along the all-zeros ray.
  static constexpr std::uint8_t kRay[4] = {0, 0, 0, 0};
  std::array<std::uint64_t, 4> hits{};
  for (std::uint64_t t = 0; t < trials; ++t) {
    const Seed seed{base_seed.value + t, base_seed.stream};
    for (int depth = 1; depth <= 4; ++depth) {
      const std::span<const std::uint8_t> addr(kRay, static_cast<std::size_t>(depth));
      const int s = spec.is_site() ? site_state_at(spec, params, seed, addr)
                                   : edge_state_at(spec, params, seed, addr);
      hits[depth - 1] += static_cast<std::uint64_t>(s);
    }
  }
  MarginalEstimate out;
  out.trials = trials;
  for (int depth = 1; depth <= 4; ++depth) {
    out.depth_mean[depth - 1] =
        static_cast<double>(hits[depth - 1]) / static_cast<double>(trials);
    out.depth_ci[depth - 1] = wilson_interval(hits[depth - 1], trials);
  }
  out.mean = out.depth_mean[0];  // the fixed edge/site sits at depth 1
  out.ci = out.depth_ci[0];
  return out;
}

// ---------------------------------------------------------------------------
// Canonical textual form.

struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(const std::string& msg, std::size_t off)
      : std::runtime_error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

namespace detail {

class SamplerParser {
 public:
  explicit SamplerParser(std::string_view text) : text_(text) {}

  SamplerSpec parse() {
    SamplerSpec spec = parse_spec();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return spec;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c)
      throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  std::string_view identifier() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '-' ||
            text_[pos_] == '_'))
      ++pos_;
    if (pos_ == start) throw ParseError("expected sampler name", pos_);
    return text_.substr(start, pos_ - start);
  }

  double number() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    if (pos_ == start) throw ParseError("expected decimal probability", pos_);
    double value = 0.0;
    const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc{} || res.ptr != text_.data() + pos_)
      throw ParseError("malformed decimal probability", start);
    return value;
  }

  int integer() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) throw ParseError("expected integer", pos_);
    int value = 0;
    const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc{}) throw ParseError("malformed integer", start);
    return value;
  }

  SamplerSpec parse_spec() {
    const std::size_t name_at = (skip_ws(), pos_);
    const std::string_view name = identifier();
    try {
      if (name == "bernoulli") {
        expect('(');
        const double p = number();
        expect(')');
        return SamplerSpec::bernoulli(p);
      }
      if (name == "max") {
        expect('(');
        SamplerSpec base = parse_spec();
        expect(',');
        skip_ws();
        const std::size_t k_at = pos_;
        if (identifier() != "k") throw ParseError("expected 'k='", k_at);
        expect('=');
        const int k = integer();
        expect(')');
        return SamplerSpec::max_of(std::move(base), k);
      }
      if (name == "complement") {
        expect('(');
        SamplerSpec base = parse_spec();
        expect(')');
        return SamplerSpec::complement(std::move(base));
      }
      if (name == "matching") return SamplerSpec::matching();
      if (name == "bipartite-site") return SamplerSpec::bipartite_site();
    } catch (const std::domain_error& e) {
      throw ParseError(e.what(), name_at);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), name_at);
    }
    throw ParseError("unknown sampler '" + std::string(name) + "'", name_at);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Shortest fixed-point decimal that round-trips the value.
inline std::string format_probability(double p) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), p, std::chars_format::fixed);
  return std::string(buf, res.ptr);
}

}  // namespace detail

inline SamplerSpec parse_sampler(std::string_view text) {
  return detail::SamplerParser(text).parse();
}

inline std::string render_sampler(const SamplerSpec& spec) {
  switch (spec.kind()) {
    case SamplerSpec::Kind::kBernoulli:
      return "bernoulli(" + detail::format_probability(spec.p()) + ")";
    case SamplerSpec::Kind::kMaxOfK:
      return "max(" + render_sampler(spec.base()) + ",k=" + std::to_string(spec.k()) + ")";
    case SamplerSpec::Kind::kComplement:
      return "complement(" + render_sampler(spec.base()) + ")";
    case SamplerSpec::Kind::kMatching:
      return "matching";
    case SamplerSpec::Kind::kBipartiteSite:
      return "bipartite-site";
  }
  throw std::logic_error("render_sampler: unreachable");
}

}  // namespace treedense
