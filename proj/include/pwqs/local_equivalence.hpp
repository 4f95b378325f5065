// Copyright 2026 The pwqs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pwqs/errors.hpp"
#include "pwqs/graph.hpp"
#include "pwqs/state_vector.hpp"

namespace pwqs {

inline constexpr int kMaxOrbitVertices = 12;
inline constexpr int kMaxRelabelVertices = 9;
inline constexpr std::size_t kOrbitCap = 1000000;
inline constexpr int kMaxStabilizerQubits = 10;

namespace detail {

struct BitGraph {
  int n = 0;
  std::array<std::uint16_t, 16> rows{};
};

struct Key {
  std::uint64_t lo = 0, hi = 0;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::uint64_t h = k.lo * 0x9E3779B97F4A7C15ULL ^ (k.hi + 0x632BE59BD9B4E019ULL + (k.lo << 6));
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

inline BitGraph to_bits(const Graph& g, const std::vector<int>& order) {
  BitGraph b;
  b.n = static_cast<int>(order.size());
  std::map<int, int> idx;
  for (int i = 0; i < b.n; ++i) idx[order[static_cast<std::size_t>(i)]] = i;
  for (auto [u, v] : g.edges()) {
    int i = idx.at(u), j = idx.at(v);
    b.rows[static_cast<std::size_t>(i)] |= static_cast<std::uint16_t>(1u << j);
    b.rows[static_cast<std::size_t>(j)] |= static_cast<std::uint16_t>(1u << i);
  }
  return b;
}

inline Key key_of(const BitGraph& g) {
  Key k;
  int pos = 0;
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j, ++pos)
      if (g.rows[static_cast<std::size_t>(i)] >> j & 1u) {
        if (pos < 64) k.lo |= std::uint64_t{1} << pos;
        else k.hi |= std::uint64_t{1} << (pos - 64);
      }
  return k;
}

inline BitGraph lc(BitGraph g, int v) {
  const std::uint16_t nb = g.rows[static_cast<std::size_t>(v)];
  for (int u = 0; u < g.n; ++u)
    if (nb >> u & 1u) g.rows[static_cast<std::size_t>(u)] ^= static_cast<std::uint16_t>(nb & ~(1u << u));
  return g;
}

inline int gf2_rank(std::vector<std::uint32_t> rows) {
  int rank = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i]) continue;
    ++rank;
    const std::uint32_t low = rows[i] & (~rows[i] + 1);
    for (std::size_t j = i + 1; j < rows.size(); ++j)
      if (rows[j] & low) rows[j] ^= rows[i];
  }
  return rank;
}

// Rank of the adjacency block between A and its complement.
inline int cut_rank(const BitGraph& g, std::uint32_t a) {
  std::vector<std::uint32_t> rows;
  for (int i = 0; i < g.n; ++i)
    if (a >> i & 1u) rows.push_back(g.rows[static_cast<std::size_t>(i)] & ~a);
  return gf2_rank(std::move(rows));
}

inline std::vector<std::uint8_t> cut_rank_profile(const BitGraph& g) {
  std::vector<std::uint8_t> out(std::size_t{1} << g.n);
  for (std::uint32_t a = 0; a < out.size(); ++a) out[a] = static_cast<std::uint8_t>(cut_rank(g, a));
  return out;
}

// Visits the LC orbit breadth-first. The visitor returns true to stop early.
template <class Visit>
bool walk_orbit(const BitGraph& start, Visit&& visit, std::size_t cap = kOrbitCap) {
  std::unordered_set<Key, KeyHash> seen;
  std::deque<BitGraph> queue{start};
  seen.insert(key_of(start));
  if (visit(start)) return true;
  while (!queue.empty()) {
    BitGraph g = queue.front();
    queue.pop_front();
    for (int v = 0; v < g.n; ++v) {
      if (!g.rows[static_cast<std::size_t>(v)]) continue;
      BitGraph h = lc(g, v);
      if (!seen.insert(key_of(h)).second) continue;
      if (seen.size() > cap) throw SizeLimitError("local-complementation orbit exceeds 1e6 graphs");
      if (visit(h)) return true;
      queue.push_back(h);
    }
  }
  return false;
}

inline std::unordered_set<Key, KeyHash> orbit_keys(const BitGraph& start) {
  std::unordered_set<Key, KeyHash> keys;
  walk_orbit(start, [&](const BitGraph& g) {
    keys.insert(key_of(g));
    return false;
  });
  return keys;
}

}  // namespace detail

// Number of distinct labelled graphs reachable from g by local complementations.
inline std::size_t lc_orbit_size(const Graph& g) {
  if (static_cast<int>(g.size()) > kMaxOrbitVertices) throw SizeLimitError("orbit search limited to 12 vertices");
  return detail::orbit_keys(detail::to_bits(g, g.vertices())).size();
}

// True iff g2 lies in the LC orbit of g1. Label-preserving unless `relabel`;
// graphs on different label sets are matched in sorted label order.
inline bool locally_equivalent(const Graph& g1, const Graph& g2, bool relabel = false) {
  if (g1.size() != g2.size()) return false;
  const int n = static_cast<int>(g1.size());
  if (n > kMaxOrbitVertices) throw SizeLimitError("orbit search limited to 12 vertices");
  const detail::BitGraph a = detail::to_bits(g1, g1.vertices());
  const detail::BitGraph b = detail::to_bits(g2, g2.vertices());
  if (!relabel) {
    if (detail::cut_rank_profile(a) != detail::cut_rank_profile(b)) return false;
    const detail::Key target = detail::key_of(b);
    return detail::walk_orbit(a, [&](const detail::BitGraph& g) { return detail::key_of(g) == target; });
  }
  if (n > kMaxRelabelVertices) throw SizeLimitError("relabeling search limited to 9 vertices");
  auto histogram = [n](const detail::BitGraph& g) {
    std::vector<int> h(static_cast<std::size_t>((n + 1) * (n + 1)), 0);
    auto prof = detail::cut_rank_profile(g);
    for (std::uint32_t s = 0; s < prof.size(); ++s)
      ++h[static_cast<std::size_t>(std::popcount(s) * (n + 1) + prof[s])];
    return h;
  };
  if (histogram(a) != histogram(b)) return false;
  const auto keys = detail::orbit_keys(a);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    detail::BitGraph p;
    p.n = n;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (b.rows[static_cast<std::size_t>(i)] >> j & 1u)
          p.rows[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] |=
              static_cast<std::uint16_t>(1u << perm[static_cast<std::size_t>(j)]);
    if (keys.count(detail::key_of(p))) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// Graph state locally-Clifford equivalent to s, if s is a stabilizer state.
inline std::optional<Graph> stabilizer_graph(const StateVector& s) {
  const int n = s.num_qubits();
  if (n > kMaxStabilizerQubits) throw SizeLimitError("stabilizer extraction limited to 10 qubits");
  const StateVector psi = normalized(s);
  const std::size_t dim = std::size_t{1} << n;
  // Generators as (x, z) index-bit masks.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> gens;
  std::vector<std::uint64_t> basis;  // reduced 2n-bit vectors
  std::size_t count = 0;
  std::vector<cd> c(dim);
  for (std::uint32_t x = 0; x < dim; ++x) {
    for (std::size_t b = 0; b < dim; ++b) c[b] = std::conj(psi.amplitudes[b ^ x]) * psi.amplitudes[b];
    for (std::size_t h = 1; h < dim; h <<= 1)
      for (std::size_t i = 0; i < dim; i += h << 1)
        for (std::size_t j = i; j < i + h; ++j) {
          cd u = c[j], v = c[j + h];
          c[j] = u + v;
          c[j + h] = u - v;
        }
    for (std::uint32_t z = 0; z < dim; ++z) {
      if (std::abs(std::abs(c[z]) - 1.0) > 1e-8) continue;
      ++count;
      std::uint64_t vec = (std::uint64_t{x} << n) | z;
      for (std::uint64_t r : basis)
        if (vec & std::bit_floor(r)) vec ^= r;
      if (vec) {
        for (std::uint64_t& r : basis)
          if (r & std::bit_floor(vec)) r ^= vec;
        basis.push_back(vec);
        std::sort(basis.begin(), basis.end(), std::greater<>());
        gens.emplace_back(x, z);
      }
    }
  }
  if (count != dim || static_cast<int>(gens.size()) != n) return std::nullopt;

  // Rows indexed by generator, columns by qubit position (index bit n-1-q).
  auto col = [n](std::uint32_t mask, int q) { return (mask >> (n - 1 - q)) & 1u; };
  std::vector<std::uint32_t> X(static_cast<std::size_t>(n)), Z(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r)
    for (int q = 0; q < n; ++q) {
      X[static_cast<std::size_t>(r)] |= col(gens[static_cast<std::size_t>(r)].first, q) << q;
      Z[static_cast<std::size_t>(r)] |= col(gens[static_cast<std::size_t>(r)].second, q) << q;
    }
  auto swap_rows = [&](int i, int j) {
    std::swap(X[static_cast<std::size_t>(i)], X[static_cast<std::size_t>(j)]);
    std::swap(Z[static_cast<std::size_t>(i)], Z[static_cast<std::size_t>(j)]);
  };
  auto add_row = [&](int dst, int src) {
    X[static_cast<std::size_t>(dst)] ^= X[static_cast<std::size_t>(src)];
    Z[static_cast<std::size_t>(dst)] ^= Z[static_cast<std::size_t>(src)];
  };
  int r = 0;
  for (int q = 0; q < n && r < n; ++q) {
    int p = r;
    while (p < n && !(X[static_cast<std::size_t>(p)] >> q & 1u)) ++p;
    if (p == n) continue;
    swap_rows(r, p);
    for (int i = 0; i < n; ++i)
      if (i != r && (X[static_cast<std::size_t>(i)] >> q & 1u)) add_row(i, r);
    ++r;
  }
  // Rows r.. are Z-only; Hadamard their pivot columns.
  std::uint32_t had = 0;
  for (int q = 0, rr = r; q < n && rr < n; ++q) {
    int p = rr;
    while (p < n && !(Z[static_cast<std::size_t>(p)] >> q & 1u)) ++p;
    if (p == n) continue;
    swap_rows(rr, p);
    for (int i = r; i < n; ++i)
      if (i != rr && (Z[static_cast<std::size_t>(i)] >> q & 1u)) add_row(i, rr);
    had |= 1u << q;
    ++rr;
  }
  for (int i = 0; i < n; ++i) {
    std::uint32_t& xi = X[static_cast<std::size_t>(i)];
    std::uint32_t& zi = Z[static_cast<std::size_t>(i)];
    std::uint32_t sx = xi & had, sz = zi & had;
    xi = (xi & ~had) | sz;
    zi = (zi & ~had) | sx;
  }
  // Row-reduce X to the identity; Z then holds the adjacency.
  for (int q = 0; q < n; ++q) {
    int p = q;
    while (p < n && !(X[static_cast<std::size_t>(p)] >> q & 1u)) ++p;
    if (p == n) return std::nullopt;
    swap_rows(q, p);
    for (int i = 0; i < n; ++i)
      if (i != q && (X[static_cast<std::size_t>(i)] >> q & 1u)) add_row(i, q);
  }
  Graph g(s.qubits);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (Z[static_cast<std::size_t>(i)] >> j & 1u)
        g.add_edge(s.qubits[static_cast<std::size_t>(i)], s.qubits[static_cast<std::size_t>(j)]);
  return g;
}

// True iff local Cliffords map s onto |g> up to global phase. Qubits are matched
// by label when the label sets agree, otherwise s.qubits[i] pairs with the i-th
// smallest vertex of g.
inline bool state_locally_equivalent(const StateVector& s, const Graph& g) {
  require(static_cast<int>(g.size()) == s.num_qubits(), "qubit count does not match the graph");
  if (s.num_qubits() > kMaxStabilizerQubits) throw SizeLimitError("state equivalence limited to 10 qubits");
  auto h = stabilizer_graph(s);
  if (!h) return false;
  std::vector<int> sorted_q = s.qubits;
  std::sort(sorted_q.begin(), sorted_q.end());
  Graph target = g;
  if (sorted_q != g.vertices()) {
    std::map<int, int> m;
    auto vs = g.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i) m[vs[i]] = s.qubits[i];
    target = g.relabeled(m);
  }
  return locally_equivalent(*h, target);
}

}  // namespace pwqs
