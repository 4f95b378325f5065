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

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "pwqs/errors.hpp"
#include "pwqs/graph.hpp"

namespace pwqs {

using cd = std::complex<double>;
using Mat2 = std::array<std::array<cd, 2>, 2>;

inline constexpr double kTol = 1e-10;
inline constexpr int kMaxStateQubits = 14;

// Dense amplitudes; qubits[0] is the most significant bit of the index.
struct StateVector {
  std::vector<int> qubits;
  std::vector<cd> amplitudes;

  int num_qubits() const { return static_cast<int>(qubits.size()); }

  int position(int label) const {
    for (std::size_t i = 0; i < qubits.size(); ++i)
      if (qubits[i] == label) return static_cast<int>(i);
    throw Error("unknown qubit " + std::to_string(label));
  }

  std::uint64_t bit(int label) const {
    return std::uint64_t{1} << (qubits.size() - 1 - static_cast<std::size_t>(position(label)));
  }
};

namespace gates {
inline const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
inline Mat2 I() { return {{{1, 0}, {0, 1}}}; }
inline Mat2 X() { return {{{0, 1}, {1, 0}}}; }
inline Mat2 Y() { return {{{0, cd(0, -1)}, {cd(0, 1), 0}}}; }
inline Mat2 Z() { return {{{1, 0}, {0, -1}}}; }
inline Mat2 H() { return {{{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}}}; }
inline Mat2 S() { return {{{1, 0}, {0, cd(0, 1)}}}; }
inline Mat2 pauli(Pauli p) { return p == Pauli::X ? X() : p == Pauli::Y ? Y() : Z(); }
}  // namespace gates

inline double norm2(const StateVector& s) {
  double t = 0;
  for (const cd& a : s.amplitudes) t += std::norm(a);
  return t;
}

inline StateVector normalized(StateVector s) {
  double n = std::sqrt(norm2(s));
  require(n > 0, "cannot normalize the zero vector");
  for (cd& a : s.amplitudes) a /= n;
  return s;
}

inline StateVector to_state_vector(const Graph& g) {
  const int n = static_cast<int>(g.size());
  if (n > kMaxStateQubits) throw SizeLimitError("state vector limited to 14 qubits");
  StateVector s;
  s.qubits = g.vertices();
  const std::size_t dim = std::size_t{1} << n;
  s.amplitudes.assign(dim, cd(0));
  std::vector<std::uint64_t> masks;
  for (auto [u, v] : g.edges()) masks.push_back(s.bit(u) | s.bit(v));
  const double amp = std::pow(2.0, -n / 2.0);
  for (std::uint64_t x = 0; x < dim; ++x) {
    int parity = 0;
    for (std::uint64_t m : masks) parity ^= ((x & m) == m);
    s.amplitudes[x] = parity ? -amp : amp;
  }
  return s;
}

inline StateVector apply_1q(StateVector s, int label, const Mat2& u) {
  const std::uint64_t b = s.bit(label);
  for (std::uint64_t x = 0; x < s.amplitudes.size(); ++x) {
    if (x & b) continue;
    cd a0 = s.amplitudes[x], a1 = s.amplitudes[x | b];
    s.amplitudes[x] = u[0][0] * a0 + u[0][1] * a1;
    s.amplitudes[x | b] = u[1][0] * a0 + u[1][1] * a1;
  }
  return s;
}

inline StateVector apply_cz(StateVector s, int a, int b) {
  const std::uint64_t m = s.bit(a) | s.bit(b);
  for (std::uint64_t x = 0; x < s.amplitudes.size(); ++x)
    if ((x & m) == m) s.amplitudes[x] = -s.amplitudes[x];
  return s;
}

struct Projection {
  double probability = 0;
  StateVector state;  // renormalized, measured qubit removed
};

// Project qubit `label` onto <bra| (given as the column vector |bra>).
inline Projection project_qubit(const StateVector& s, int label, const std::array<cd, 2>& ket) {
  const int pos = s.position(label);
  const int n = s.num_qubits();
  const std::uint64_t b = s.bit(label);
  Projection out;
  out.state.qubits = s.qubits;
  out.state.qubits.erase(out.state.qubits.begin() + pos);
  out.state.amplitudes.assign(std::size_t{1} << (n - 1), cd(0));
  const int low = n - 1 - pos;
  for (std::uint64_t x = 0; x < s.amplitudes.size(); ++x) {
    if (x & b) continue;
    std::uint64_t y = ((x >> (low + 1)) << low) | (x & ((std::uint64_t{1} << low) - 1));
    out.state.amplitudes[y] = std::conj(ket[0]) * s.amplitudes[x] + std::conj(ket[1]) * s.amplitudes[x | b];
  }
  out.probability = norm2(out.state) / norm2(s);
  if (out.probability > 1e-15) out.state = normalized(std::move(out.state));
  return out;
}

// Eigenvector of a Pauli for outcome (+1 when minus == false).
inline std::array<cd, 2> pauli_eigenstate(Pauli p, bool minus) {
  const double r = gates::kInvSqrt2;
  switch (p) {
    case Pauli::X: return minus ? std::array<cd, 2>{r, -r} : std::array<cd, 2>{r, r};
    case Pauli::Y: return minus ? std::array<cd, 2>{r, cd(0, -r)} : std::array<cd, 2>{r, cd(0, r)};
    case Pauli::Z: break;
  }
  return minus ? std::array<cd, 2>{0, 1} : std::array<cd, 2>{1, 0};
}

// Reorder qubits to `order` (a permutation of s.qubits).
inline StateVector reordered(const StateVector& s, const std::vector<int>& order) {
  require(order.size() == s.qubits.size(), "reorder needs a permutation of the qubits");
  StateVector out;
  out.qubits = order;
  out.amplitudes.assign(s.amplitudes.size(), cd(0));
  std::vector<std::uint64_t> src(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) src[i] = s.bit(order[i]);
  const std::size_t n = order.size();
  for (std::uint64_t y = 0; y < out.amplitudes.size(); ++y) {
    std::uint64_t x = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (y >> (n - 1 - i) & 1) x |= src[i];
    out.amplitudes[y] = s.amplitudes[x];
  }
  return out;
}

inline cd inner(const StateVector& a, const StateVector& b) {
  require(a.amplitudes.size() == b.amplitudes.size(), "dimension mismatch");
  cd t = 0;
  for (std::size_t i = 0; i < a.amplitudes.size(); ++i) t += std::conj(a.amplitudes[i]) * b.amplitudes[i];
  return t;
}

// Equality up to a global phase, after aligning qubit labels.
inline bool equal_up_to_phase(const StateVector& a, const StateVector& b, double tol = kTol) {
  if (a.qubits.size() != b.qubits.size()) return false;
  StateVector bb = b.qubits == a.qubits ? b : reordered(b, a.qubits);
  cd ov = inner(a, bb);
  if (std::abs(ov) < 1e-12) return false;
  cd ph = ov / std::abs(ov);
  for (std::size_t i = 0; i < a.amplitudes.size(); ++i)
    if (std::abs(a.amplitudes[i] * ph - bb.amplitudes[i]) > tol) return false;
  return true;
}

}  // namespace pwqs
