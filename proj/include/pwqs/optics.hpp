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

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pwqs/errors.hpp"
#include "pwqs/state_vector.hpp"

namespace pwqs {

inline constexpr int kMaxPorts = 16;
inline constexpr int kMaxPhotons = 16;

enum class Pol { H = 0, V = 1 };

struct ModeLabel {
  int spatial = 0;
  Pol polarization = Pol::H;
};

inline std::size_t mode_index(int port, Pol p) { return static_cast<std::size_t>(2 * port + static_cast<int>(p)); }

// Photon counts per mode, indexed by mode_index.
using Pattern = std::vector<std::uint8_t>;

class PhotonicState {
 public:
  PhotonicState() = default;
  explicit PhotonicState(int ports) : ports_(ports) {
    if (ports < 0 || ports > kMaxPorts) throw SizeLimitError("at most 16 spatial ports are supported");
  }

  int ports() const { return ports_; }
  const std::map<Pattern, cd>& terms() const { return terms_; }

  void add(const Pattern& p, cd amp) {
    require(p.size() == static_cast<std::size_t>(2 * ports_), "pattern does not match the port count");
    cd& slot = terms_[p];
    slot += amp;
    if (std::abs(slot) < 1e-15) terms_.erase(p);
  }

  // Photon number of the first term; every term carries the same number.
  int total_photons() const {
    if (terms_.empty()) return 0;
    int n = 0;
    for (auto c : terms_.begin()->first) n += c;
    return n;
  }

  double norm2() const {
    double t = 0;
    for (const auto& [_, a] : terms_) t += std::norm(a);
    return t;
  }

  PhotonicState scaled(double f) const {
    PhotonicState out(ports_);
    for (const auto& [p, a] : terms_) out.terms_[p] = a * f;
    return out;
  }

  void check_port(int p) const {
    if (p < 0 || p >= ports_) throw Error("unknown port " + std::to_string(p));
  }

 private:
  int ports_ = 0;
  std::map<Pattern, cd> terms_;
};

struct SourceSpec {
  enum class Kind { Plus, BellPsi, GBell };
  Kind kind = Kind::Plus;
  int a = 0;
  int b = -1;

  static SourceSpec plus(int p) { return {Kind::Plus, p, -1}; }
  static SourceSpec bell_psi(int a, int b) { return {Kind::BellPsi, a, b}; }
  static SourceSpec gbell(int a, int b) { return {Kind::GBell, a, b}; }
};

struct OpticalElement {
  enum class Kind { PBS, HWP };
  Kind kind = Kind::PBS;
  int a = 0;
  int b = 0;
  double angle = 0;

  static OpticalElement pbs(int a, int b) { return {Kind::PBS, a, b, 0}; }
  static OpticalElement hwp(int p, double angle) { return {Kind::HWP, p, 0, angle}; }
};

namespace detail {

// One-photon amplitudes over (H, V) per source port.
inline std::vector<std::pair<std::vector<std::pair<int, Pol>>, cd>> source_terms(const SourceSpec& s) {
  using T = std::vector<std::pair<std::vector<std::pair<int, Pol>>, cd>>;
  const double r = 1 / std::sqrt(2.0);
  switch (s.kind) {
    case SourceSpec::Kind::Plus:
      return T{{{{s.a, Pol::H}}, r}, {{{s.a, Pol::V}}, r}};
    case SourceSpec::Kind::BellPsi:
      return T{{{{s.a, Pol::H}, {s.b, Pol::H}}, r}, {{{s.a, Pol::V}, {s.b, Pol::V}}, r}};
    case SourceSpec::Kind::GBell:
      // (|+H> + |-V>)/sqrt2
      return T{{{{s.a, Pol::H}, {s.b, Pol::H}}, 0.5},
               {{{s.a, Pol::V}, {s.b, Pol::H}}, 0.5},
               {{{s.a, Pol::H}, {s.b, Pol::V}}, 0.5},
               {{{s.a, Pol::V}, {s.b, Pol::V}}, -0.5}};
  }
  return {};
}

inline double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

inline cd ipow(cd base, int e) {
  cd r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace detail

inline PhotonicState prepare(const std::vector<SourceSpec>& sources, int ports = -1) {
  std::set<int> used;
  int max_port = -1;
  for (const auto& s : sources) {
    std::vector<int> ps{s.a};
    if (s.kind != SourceSpec::Kind::Plus) ps.push_back(s.b);
    for (int p : ps) {
      if (p < 0) throw Error("negative port index");
      if (!used.insert(p).second) throw Error("port collision on port " + std::to_string(p));
      max_port = std::max(max_port, p);
    }
  }
  if (ports < 0) ports = max_port + 1;
  if (ports > kMaxPorts) throw SizeLimitError("at most 16 spatial ports are supported");
  if (static_cast<int>(used.size()) > kMaxPhotons) throw SizeLimitError("at most 16 photons are supported");
  require(max_port < ports, "source port outside the port range");
  PhotonicState out(ports);
  out.add(Pattern(static_cast<std::size_t>(2 * ports), 0), 1.0);
  for (const auto& s : sources) {
    PhotonicState next(ports);
    for (const auto& [pat, amp] : out.terms())
      for (const auto& [photons, c] : detail::source_terms(s)) {
        Pattern q = pat;
        for (auto [port, pol] : photons) ++q[mode_index(port, pol)];
        next.add(q, amp * c);
      }
    out = std::move(next);
  }
  return out;
}

// Transmits H, exchanges V between ports a and b.
inline PhotonicState apply_pbs(const PhotonicState& s, int a, int b) {
  s.check_port(a);
  s.check_port(b);
  require(a != b, "PBS needs two distinct ports");
  PhotonicState out(s.ports());
  for (const auto& [pat, amp] : s.terms()) {
    Pattern q = pat;
    std::swap(q[mode_index(a, Pol::V)], q[mode_index(b, Pol::V)]);
    out.add(q, amp);
  }
  return out;
}

// Maps the creation operators of port p: a_H -> m00 a_H + m10 a_V, a_V -> m01 a_H + m11 a_V.
inline PhotonicState apply_mode_unitary(const PhotonicState& s, int p, const Mat2& m) {
  s.check_port(p);
  PhotonicState out(s.ports());
  const std::size_t ih = mode_index(p, Pol::H), iv = mode_index(p, Pol::V);
  for (const auto& [pat, amp] : s.terms()) {
    const int nh = pat[ih], nv = pat[iv], n = nh + nv;
    const double norm_in = std::sqrt(detail::factorial(nh) * detail::factorial(nv));
    for (int i = 0; i <= nh; ++i)
      for (int j = 0; j <= nv; ++j) {
        cd c = detail::binomial(nh, i) * detail::ipow(m[0][0], i) * detail::ipow(m[1][0], nh - i) *
               detail::binomial(nv, j) * detail::ipow(m[0][1], j) * detail::ipow(m[1][1], nv - j);
        if (std::abs(c) < 1e-15) continue;
        const int h = i + j;
        Pattern q = pat;
        q[ih] = static_cast<std::uint8_t>(h);
        q[iv] = static_cast<std::uint8_t>(n - h);
        out.add(q, amp * c * std::sqrt(detail::factorial(h) * detail::factorial(n - h)) / norm_in);
      }
  }
  return out;
}

inline Mat2 hwp_matrix(double angle) {
  if (std::abs(angle - 22.5) < 1e-9) return gates::H();
  if (std::abs(angle) < 1e-9) return gates::Z();
  throw Error("unsupported half-wave plate angle " + std::to_string(angle));
}

inline PhotonicState apply_hwp(const PhotonicState& s, int p, double angle) {
  return apply_mode_unitary(s, p, hwp_matrix(angle));
}

inline PhotonicState apply_element(const PhotonicState& s, const OpticalElement& e) {
  return e.kind == OpticalElement::Kind::PBS ? apply_pbs(s, e.a, e.b) : apply_hwp(s, e.a, e.angle);
}

struct Postselection {
  PhotonicState state;
  double probability = 0;
};

// Keeps patterns with one photon in every listed port and none elsewhere.
inline Postselection postselect_coincidence(const PhotonicState& s, const std::vector<int>& ports) {
  std::vector<int> want(static_cast<std::size_t>(s.ports()), 0);
  for (int p : ports) {
    s.check_port(p);
    if (want[static_cast<std::size_t>(p)]++) throw Error("port listed twice in postselection");
  }
  PhotonicState kept(s.ports());
  for (const auto& [pat, amp] : s.terms()) {
    bool ok = true;
    for (int p = 0; p < s.ports() && ok; ++p)
      ok = pat[mode_index(p, Pol::H)] + pat[mode_index(p, Pol::V)] == want[static_cast<std::size_t>(p)];
    if (ok) kept.add(pat, amp);
  }
  Postselection out;
  const double total = s.norm2();
  out.probability = total > 0 ? kept.norm2() / total : 0;
  out.state = out.probability > 0 ? kept.scaled(1 / std::sqrt(kept.norm2())) : kept;
  return out;
}

enum class PolBasis { HV, PM };

struct PolarizationBranch {
  std::string outcome;  // "H", "V", "+" or "-"
  double probability = 0;
  PhotonicState state;  // measured photon removed, renormalized
};

inline void require_single_photon(const PhotonicState& s, int p) {
  s.check_port(p);
  for (const auto& [pat, _] : s.terms())
    if (pat[mode_index(p, Pol::H)] + pat[mode_index(p, Pol::V)] != 1)
      throw Error("port " + std::to_string(p) + " does not hold exactly one photon");
}

inline std::vector<PolarizationBranch> measure_polarization(const PhotonicState& s, int p, PolBasis basis) {
  require_single_photon(s, p);
  const double r = 1 / std::sqrt(2.0);
  // <outcome|H>, <outcome|V>
  const std::vector<std::pair<std::string, std::pair<double, double>>> outcomes =
      basis == PolBasis::HV ? std::vector<std::pair<std::string, std::pair<double, double>>>{{"H", {1, 0}}, {"V", {0, 1}}}
                            : std::vector<std::pair<std::string, std::pair<double, double>>>{{"+", {r, r}}, {"-", {r, -r}}};
  const double total = s.norm2();
  std::vector<PolarizationBranch> out;
  for (const auto& [label, coef] : outcomes) {
    PhotonicState st(s.ports());
    for (const auto& [pat, amp] : s.terms()) {
      const bool h = pat[mode_index(p, Pol::H)] == 1;
      Pattern q = pat;
      q[mode_index(p, Pol::H)] = 0;
      q[mode_index(p, Pol::V)] = 0;
      const double c = h ? coef.first : coef.second;
      if (c != 0) st.add(q, amp * c);
    }
    PolarizationBranch b;
    b.outcome = label;
    b.probability = total > 0 ? st.norm2() / total : 0;
    b.state = b.probability > 0 ? st.scaled(1 / std::sqrt(st.norm2())) : st;
    out.push_back(std::move(b));
  }
  return out;
}

// Dual-rail readout H -> 0, V -> 1. Ports not listed must be empty.
inline StateVector extract_logical(const PhotonicState& s, const std::vector<std::pair<int, int>>& port_to_qubit) {
  const std::size_t n = port_to_qubit.size();
  if (static_cast<int>(n) > kMaxStateQubits) throw SizeLimitError("state vector limited to 14 qubits");
  std::vector<bool> listed(static_cast<std::size_t>(s.ports()), false);
  StateVector out;
  for (auto [port, q] : port_to_qubit) {
    require_single_photon(s, port);
    listed[static_cast<std::size_t>(port)] = true;
    out.qubits.push_back(q);
  }
  out.amplitudes.assign(std::size_t{1} << n, cd(0));
  for (const auto& [pat, amp] : s.terms()) {
    for (int p = 0; p < s.ports(); ++p)
      if (!listed[static_cast<std::size_t>(p)] && pat[mode_index(p, Pol::H)] + pat[mode_index(p, Pol::V)] != 0)
        throw Error("photon found in unlisted port " + std::to_string(p));
    std::size_t idx = 0;
    for (auto [port, _] : port_to_qubit) idx = idx << 1 | (pat[mode_index(port, Pol::V)] ? 1u : 0u);
    out.amplitudes[idx] += amp;
  }
  return normalized(std::move(out));
}

struct Circuit {
  std::vector<SourceSpec> sources;
  std::vector<OpticalElement> elements;
  std::vector<int> postselect;
  std::vector<std::pair<int, PolBasis>> measure;
};

struct CircuitBranch {
  std::vector<std::string> outcomes;
  double probability = 0;
  PhotonicState state;
};

struct CircuitRun {
  double probability = 0;
  PhotonicState state;  // after postselection
  std::vector<CircuitBranch> branches;
};

inline CircuitRun run_circuit(const Circuit& c) {
  int ports = 0;
  auto grow = [&](int p) { ports = std::max(ports, p + 1); };
  for (const auto& s : c.sources) {
    grow(s.a);
    grow(s.b);
  }
  for (const auto& e : c.elements) {
    grow(e.a);
    if (e.kind == OpticalElement::Kind::PBS) grow(e.b);
  }
  PhotonicState s = prepare(c.sources, ports);
  for (const auto& e : c.elements) s = apply_element(s, e);
  CircuitRun run;
  if (c.postselect.empty()) {
    run.probability = 1;
    run.state = s;
  } else {
    Postselection ps = postselect_coincidence(s, c.postselect);
    run.probability = ps.probability;
    run.state = ps.state;
  }
  std::vector<CircuitBranch> frontier{{{}, 1.0, run.state}};
  for (auto [port, basis] : c.measure) {
    std::vector<CircuitBranch> next;
    for (const auto& br : frontier) {
      if (br.probability <= 0) continue;
      for (auto& m : measure_polarization(br.state, port, basis)) {
        CircuitBranch b{br.outcomes, br.probability * m.probability, std::move(m.state)};
        b.outcomes.push_back(m.outcome);
        next.push_back(std::move(b));
      }
    }
    frontier = std::move(next);
  }
  if (!c.measure.empty()) run.branches = std::move(frontier);
  return run;
}

// N |+> photons chained through N-1 PBSs; postselects GHZ_N.
inline Circuit ghz_chain_circuit(int n) {
  require(n >= 1, "GHZ chain needs at least one photon");
  Circuit c;
  for (int i = 0; i < n; ++i) {
    c.sources.push_back(SourceSpec::plus(i));
    c.postselect.push_back(i);
  }
  for (int i = 0; i + 1 < n; ++i) c.elements.push_back(OpticalElement::pbs(i, i + 1));
  return c;
}

// Weaving photon on port 0 passes PBS + HWP with each of the photons on ports 1..n.
// n = 2 is the postselected CZ gate.
inline Circuit path_weaving_circuit(int n) {
  require(n >= 1, "weaving needs at least one photon");
  Circuit c;
  for (int i = 0; i <= n; ++i) {
    c.sources.push_back(SourceSpec::plus(i));
    c.postselect.push_back(i);
  }
  for (int i = 1; i <= n; ++i) {
    c.elements.push_back(OpticalElement::pbs(0, i));
    c.elements.push_back(OpticalElement::hwp(0, 22.5));
  }
  return c;
}

inline Circuit cz_gate_circuit() { return path_weaving_circuit(2); }

}  // namespace pwqs
