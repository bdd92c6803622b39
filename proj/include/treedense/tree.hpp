#pragma once

// Canonical addressing of the infinite rooted d-regular tree and
// deterministic per-object randomness.
//
// A vertex is addressed by the sequence of child indices along the
// descending path from the root; the root is the empty sequence. The root
// has d children (first index in [0,d)), every other vertex has d-1
// children (later indices in [0,d-1)). An edge is identified with its
// child endpoint, which is a bijection between edges and non-root
// vertices.
//
// Randomness is hash-based rather than sequential: every edge/vertex owns
// a uniform in [0,1) computed from (seed.value, seed.stream, address
// bytes) through a splitmix64-style finalizer applied to a streaming
// combine. Results are pure functions of their inputs, so evaluation is
// lazy, order-independent and thread-safe. The algorithm below is fixed;
// changing any constant changes every sampled configuration.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace treedense {

struct TreeParams {
  int degree;

  explicit TreeParams(int d) : degree(d) {
    if (d < 3 || d > 255)
      throw std::domain_error("TreeParams: degree must be in [3,255], got " +
                              std::to_string(d));
  }
};

class VertexId {
 public:
  VertexId() = default;  // root
  explicit VertexId(std::vector<std::uint8_t> path) : path_(std::move(path)) {}

  static VertexId root() { return VertexId{}; }

  bool is_root() const { return path_.empty(); }
  std::size_t depth() const { return path_.size(); }
  std::span<const std::uint8_t> indices() const { return path_; }

  VertexId child(std::uint8_t index) const {
    std::vector<std::uint8_t> p = path_;
    p.push_back(index);
    return VertexId(std::move(p));
  }

  VertexId parent() const {
    if (is_root()) throw std::out_of_range("VertexId::parent: root has no parent");
    std::vector<std::uint8_t> p(path_.begin(), path_.end() - 1);
    return VertexId(std::move(p));
  }

  // Last child index on the path (the index of this vertex under its parent).
  std::uint8_t last_index() const {
    if (is_root()) throw std::out_of_range("VertexId::last_index: root");
    return path_.back();
  }

  friend bool operator==(const VertexId& a, const VertexId& b) { return a.path_ == b.path_; }
  friend bool operator<(const VertexId& a, const VertexId& b) { return a.path_ < b.path_; }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < path_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(int(path_[i]));
    }
    s += ')';
    return s;
  }

 private:
  std::vector<std::uint8_t> path_;
};

// An edge is named by its child endpoint.
struct EdgeId {
  VertexId child;

  explicit EdgeId(VertexId v) : child(std::move(v)) {
    if (child.is_root())
      throw std::invalid_argument("EdgeId: the root is not the child endpoint of any edge");
  }

  friend bool operator==(const EdgeId& a, const EdgeId& b) { return a.child == b.child; }
};

struct Seed {
  std::uint64_t value = 0;
  std::uint64_t stream = 0;  // label distinguishing independent copies / choice streams
};

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;
inline constexpr std::uint64_t kHashInit = 0x243f6a8885a308d3ull;
// Domain separation tags: edge labels, vertex labels and the global
// bipartition bit never share hash inputs.
inline constexpr std::uint64_t kEdgeDomain = 0x45;
inline constexpr std::uint64_t kVertexDomain = 0x56;
inline constexpr std::uint64_t kSideDomain = 0x53;

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t combine(std::uint64_t h, std::uint64_t w) noexcept {
  return mix64(h + kGolden + w);
}

// Streaming hash of (seed, domain, length-prefixed address bytes).
inline std::uint64_t address_hash(Seed seed, std::uint64_t domain,
                                  std::span<const std::uint8_t> path) noexcept {
  std::uint64_t h = combine(kHashInit, seed.value);
  h = combine(h, seed.stream);
  h = combine(h, domain);
  h = combine(h, static_cast<std::uint64_t>(path.size()));
  for (std::uint8_t b : path) h = combine(h, b);
  return h;
}

// Top 53 bits over 2^53: the value h / 2^64 on the double grid, in [0,1).
constexpr double to_unit(std::uint64_t h) noexcept {
  return static_cast<double>(h >> 11) * 0x1p-53;
}

}  // namespace detail

// Uniform label of the edge whose child endpoint has the given address bytes.
inline double edge_uniform_at(Seed seed, std::span<const std::uint8_t> child_path) noexcept {
  return detail::to_unit(detail::address_hash(seed, detail::kEdgeDomain, child_path));
}

inline double edge_uniform(Seed seed, const EdgeId& e) noexcept {
  return edge_uniform_at(seed, e.child.indices());
}

inline double vertex_uniform_at(Seed seed, std::span<const std::uint8_t> path) noexcept {
  return detail::to_unit(detail::address_hash(seed, detail::kVertexDomain, path));
}

inline double vertex_uniform(Seed seed, const VertexId& v) noexcept {
  return vertex_uniform_at(seed, v.indices());
}

inline void validate_vertex(const VertexId& v, TreeParams params) {
  auto ix = v.indices();
  for (std::size_t i = 0; i < ix.size(); ++i) {
    const int bound = (i == 0) ? params.degree : params.degree - 1;
    if (ix[i] >= bound)
      throw std::out_of_range("invalid vertex address: index " + std::to_string(int(ix[i])) +
                              " at position " + std::to_string(i) + " exceeds bound " +
                              std::to_string(bound - 1));
  }
}

// Children of v in lexicographic order: d of them for the root, d-1 otherwise.
inline std::vector<VertexId> children(const VertexId& v, TreeParams params) {
  validate_vertex(v, params);
  const int count = v.is_root() ? params.degree : params.degree - 1;
  std::vector<VertexId> out;
  out.reserve(count);
  for (int c = 0; c < count; ++c) out.push_back(v.child(static_cast<std::uint8_t>(c)));
  return out;
}

// Number of self-avoiding descending paths of length n from the root:
// d * (d-1)^(n-1), exact; throws on 64-bit overflow.
inline std::uint64_t path_count(TreeParams params, int n) {
  if (n < 1) throw std::domain_error("path_count: n must be >= 1");
  std::uint64_t result = static_cast<std::uint64_t>(params.degree);
  const std::uint64_t base = static_cast<std::uint64_t>(params.degree - 1);
  for (int i = 1; i < n; ++i) {
    if (__builtin_mul_overflow(result, base, &result))
      throw std::overflow_error("path_count: d*(d-1)^(n-1) exceeds 64 bits");
  }
  return result;
}

}  // namespace treedense
