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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pwqs/graph.hpp"
#include "pwqs/local_equivalence.hpp"
#include "pwqs/optics.hpp"

using namespace pwqs;

namespace {

const double kR = 1 / std::sqrt(2.0);

Pattern pattern(int ports, std::initializer_list<std::pair<int, Pol>> photons) {
  Pattern p(static_cast<std::size_t>(2 * ports), 0);
  for (auto [port, pol] : photons) ++p[mode_index(port, pol)];
  return p;
}

cd amp(const PhotonicState& s, const Pattern& p) {
  auto it = s.terms().find(p);
  return it == s.terms().end() ? cd(0) : it->second;
}

PhotonicState single(int ports, int port, Pol pol) {
  PhotonicState s(ports);
  s.add(pattern(ports, {{port, pol}}), 1.0);
  return s;
}

bool photon_number_constant(const PhotonicState& s, int n) {
  for (const auto& [pat, _] : s.terms()) {
    int k = 0;
    for (auto c : pat) k += c;
    if (k != n) return false;
  }
  return true;
}

}  // namespace

TEST(Prepare, PlusSource) {
  PhotonicState s = prepare({SourceSpec::plus(0)});
  ASSERT_EQ(s.terms().size(), 2u);
  EXPECT_NEAR(std::abs(amp(s, pattern(1, {{0, Pol::H}})) - kR), 0, 1e-12);
  EXPECT_NEAR(std::abs(amp(s, pattern(1, {{0, Pol::V}})) - kR), 0, 1e-12);
}

TEST(Prepare, ThreePlusEightTerms) {
  PhotonicState s = prepare({SourceSpec::plus(0), SourceSpec::plus(1), SourceSpec::plus(2)});
  ASSERT_EQ(s.terms().size(), 8u);
  for (const auto& [_, a] : s.terms()) EXPECT_NEAR(std::abs(a - cd(kR * kR * kR)), 0, 1e-12);
  EXPECT_NEAR(s.norm2(), 1.0, 1e-15);
}

TEST(Prepare, GBellExpansion) {
  PhotonicState s = prepare({SourceSpec::gbell(0, 1)});
  ASSERT_EQ(s.terms().size(), 4u);
  // |+H> + |-V> over sqrt2: only VV picks up the minus sign.
  EXPECT_NEAR(amp(s, pattern(2, {{0, Pol::H}, {1, Pol::H}})).real(), 0.5, 1e-12);
  EXPECT_NEAR(amp(s, pattern(2, {{0, Pol::V}, {1, Pol::H}})).real(), 0.5, 1e-12);
  EXPECT_NEAR(amp(s, pattern(2, {{0, Pol::H}, {1, Pol::V}})).real(), 0.5, 1e-12);
  EXPECT_NEAR(amp(s, pattern(2, {{0, Pol::V}, {1, Pol::V}})).real(), -0.5, 1e-12);
}

TEST(Prepare, Errors) {
  EXPECT_THROW(prepare({SourceSpec::plus(0), SourceSpec::gbell(1, 0)}), Error);
  EXPECT_THROW(prepare({SourceSpec::plus(16)}), SizeLimitError);
}

TEST(Pbs, TransmitsHReflectsV) {
  PhotonicState h = apply_pbs(single(2, 0, Pol::H), 0, 1);
  EXPECT_NEAR(std::abs(amp(h, pattern(2, {{0, Pol::H}}))), 1, 1e-12);
  PhotonicState v = apply_pbs(single(2, 0, Pol::V), 0, 1);
  EXPECT_NEAR(std::abs(amp(v, pattern(2, {{1, Pol::V}}))), 1, 1e-12);
  EXPECT_THROW(apply_pbs(h, 0, 5), Error);
}

TEST(Pbs, TwoPlusPhotonsCoincidenceIsBell) {
  PhotonicState s = apply_pbs(prepare({SourceSpec::plus(0), SourceSpec::plus(1)}), 0, 1);
  EXPECT_NEAR(amp(s, pattern(2, {{0, Pol::H}, {1, Pol::H}})).real(), 0.5, 1e-12);
  EXPECT_NEAR(amp(s, pattern(2, {{0, Pol::V}, {1, Pol::V}})).real(), 0.5, 1e-12);
  EXPECT_NEAR(std::abs(amp(s, pattern(2, {{0, Pol::H}, {1, Pol::V}}))), 0, 1e-12);
}

TEST(Hwp, Rotations) {
  PhotonicState s = apply_hwp(single(1, 0, Pol::H), 0, 22.5);
  EXPECT_NEAR(amp(s, pattern(1, {{0, Pol::H}})).real(), kR, 1e-12);
  EXPECT_NEAR(amp(s, pattern(1, {{0, Pol::V}})).real(), kR, 1e-12);
  PhotonicState z = apply_hwp(single(1, 0, Pol::V), 0, 0);
  EXPECT_NEAR(amp(z, pattern(1, {{0, Pol::V}})).real(), -1, 1e-12);
  EXPECT_THROW(apply_hwp(s, 0, 45), Error);
}

TEST(Hwp, TwiceIsSquareOfMatrix) {
  // Squaring [[1,1],[1,-1]]/sqrt2 gives the identity.
  Mat2 h = hwp_matrix(22.5);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      cd sq = h[i][0] * h[0][j] + h[i][1] * h[1][j];
      EXPECT_NEAR(std::abs(sq - cd(i == j ? 1.0 : 0.0)), 0, 1e-12);
    }
  for (Pol p : {Pol::H, Pol::V}) {
    PhotonicState s = apply_hwp(apply_hwp(single(1, 0, p), 0, 22.5), 0, 22.5);
    EXPECT_NEAR(std::abs(amp(s, pattern(1, {{0, p}}))), 1, 1e-12);
  }
}

TEST(Hwp, BosonicFactorsOnTwoPhotons) {
  PhotonicState s(1);
  s.add(pattern(1, {{0, Pol::H}, {0, Pol::H}}), 1.0);
  s = apply_hwp(s, 0, 22.5);
  EXPECT_NEAR(amp(s, pattern(1, {{0, Pol::H}, {0, Pol::H}})).real(), 0.5, 1e-12);
  EXPECT_NEAR(amp(s, pattern(1, {{0, Pol::H}, {0, Pol::V}})).real(), kR, 1e-12);
  EXPECT_NEAR(amp(s, pattern(1, {{0, Pol::V}, {0, Pol::V}})).real(), 0.5, 1e-12);
  EXPECT_NEAR(s.norm2(), 1.0, 1e-12);
}

TEST(Postselect, GhzChainThree) {
  CircuitRun r = run_circuit(ghz_chain_circuit(3));
  EXPECT_NEAR(r.probability, 0.25, 1e-12);
  ASSERT_EQ(r.state.terms().size(), 2u);
  for (const auto& [_, a] : r.state.terms()) EXPECT_NEAR(std::abs(a), kR, 1e-12);
}

TEST(Postselect, CzGateGivesFourTermState) {
  CircuitRun r = run_circuit(cz_gate_circuit());
  EXPECT_NEAR(r.probability, 0.25, 1e-12);
  StateVector s = extract_logical(r.state, {{0, 0}, {1, 1}, {2, 2}});
  // Path 1 - 2 - aux in H/V amplitudes.
  StateVector expect = reordered(to_state_vector(path_graph(std::vector<int>{1, 2, 0})), {0, 1, 2});
  EXPECT_TRUE(equal_up_to_phase(s, expect));
}

TEST(Postselect, SinglePhotonOwnPort) {
  PhotonicState s = prepare({SourceSpec::plus(0)});
  Postselection p = postselect_coincidence(s, {0});
  EXPECT_NEAR(p.probability, 1, 1e-15);
  ASSERT_EQ(p.state.terms().size(), s.terms().size());
  for (const auto& [pat, x] : s.terms()) EXPECT_NEAR(std::abs(amp(p.state, pat) - x), 0, 1e-15);
}

TEST(Postselect, EmptyResultIsValue) {
  PhotonicState s = prepare({SourceSpec::plus(0)});
  Postselection p = postselect_coincidence(s, {});
  EXPECT_EQ(p.probability, 0);
}

TEST(Measure, PlusInHv) {
  auto br = measure_polarization(prepare({SourceSpec::plus(0)}), 0, PolBasis::HV);
  ASSERT_EQ(br.size(), 2u);
  EXPECT_NEAR(br[0].probability, 0.5, 1e-12);
  EXPECT_NEAR(br[1].probability, 0.5, 1e-12);
}

TEST(Measure, CzAuxiliaryGivesPathOnBothBranches) {
  CircuitRun r = run_circuit(cz_gate_circuit());
  auto br = measure_polarization(r.state, 0, PolBasis::HV);
  StateVector p2 = to_state_vector(path_graph(2));
  for (const auto& b : br) {
    EXPECT_NEAR(b.probability, 0.5, 1e-12);
    StateVector s = extract_logical(b.state, {{1, 1}, {2, 2}});
    if (b.outcome == "V") s = apply_1q(s, 2, gates::Z());
    EXPECT_TRUE(equal_up_to_phase(s, p2)) << b.outcome;
  }
}

TEST(Measure, GhzInPmLeavesSignedBell) {
  CircuitRun r = run_circuit(ghz_chain_circuit(3));
  auto br = measure_polarization(r.state, 2, PolBasis::PM);
  for (const auto& b : br) {
    EXPECT_NEAR(b.probability, 0.5, 1e-12);
    StateVector s = extract_logical(b.state, {{0, 0}, {1, 1}});
    const double sign = b.outcome == "+" ? 1 : -1;
    EXPECT_NEAR(s.amplitudes[0].real(), kR, 1e-12);
    EXPECT_NEAR(s.amplitudes[3].real(), sign * kR, 1e-12);
  }
  PhotonicState bunched = apply_pbs(prepare({SourceSpec::plus(0), SourceSpec::plus(1)}), 0, 1);
  EXPECT_THROW(measure_polarization(bunched, 0, PolBasis::HV), Error);
}

TEST(Extract, Examples) {
  CircuitRun r = run_circuit(ghz_chain_circuit(2));
  StateVector s = extract_logical(r.state, {{0, 1}, {1, 2}});
  EXPECT_NEAR(s.amplitudes[0].real(), kR, 1e-12);
  EXPECT_NEAR(s.amplitudes[3].real(), kR, 1e-12);
  StateVector plus = extract_logical(prepare({SourceSpec::plus(0)}), {{0, 0}});
  EXPECT_NEAR(plus.amplitudes[1].real(), kR, 1e-12);
  EXPECT_THROW(extract_logical(prepare({SourceSpec::plus(0), SourceSpec::plus(1)}), {{0, 0}}), Error);
}

TEST(Properties, UnitarityAndPhotonNumber) {
  std::mt19937 rng(41);
  for (int t = 0; t < 200; ++t) {
    const int ports = 2 + t % 5;
    std::vector<SourceSpec> src;
    for (int p = 0; p + 1 < ports; p += 2) src.push_back(t % 2 ? SourceSpec::gbell(p, p + 1) : SourceSpec::bell_psi(p, p + 1));
    if (ports % 2) src.push_back(SourceSpec::plus(ports - 1));
    PhotonicState s = prepare(src);
    const int n = s.total_photons();
    std::uniform_int_distribution<int> port(0, ports - 1);
    for (int k = 0; k < 12; ++k) {
      int a = port(rng), b = port(rng);
      PhotonicState next = (a != b && k % 3) ? apply_pbs(s, a, b) : apply_hwp(s, a, k % 2 ? 22.5 : 0.0);
      ASSERT_NEAR(next.norm2(), s.norm2(), 1e-12);
      ASSERT_TRUE(photon_number_constant(next, n));
      if (a != b) {
        PhotonicState back = apply_pbs(apply_pbs(s, a, b), a, b);
        ASSERT_EQ(back.terms().size(), s.terms().size());
        for (const auto& [pat, x] : s.terms()) ASSERT_NEAR(std::abs(amp(back, pat) - x), 0, 1e-15);
      }
      s = std::move(next);
    }
  }
}

TEST(Properties, GhzChainProbabilityAndStar) {
  for (int n = 2; n <= 8; ++n) {
    CircuitRun r = run_circuit(ghz_chain_circuit(n));
    EXPECT_NEAR(r.probability, std::ldexp(1.0, -(n - 1)), 1e-12);
    std::vector<std::pair<int, int>> map;
    std::vector<int> leaves;
    for (int i = 0; i < n; ++i) map.emplace_back(i, i + 1);
    for (int i = 2; i <= n; ++i) leaves.push_back(i);
    EXPECT_TRUE(state_locally_equivalent(extract_logical(r.state, map), star_graph(1, leaves))) << n;
  }
}

TEST(Properties, WeavingProbabilityAndPath) {
  for (int n = 2; n <= 7; ++n) {
    CircuitRun r = run_circuit(path_weaving_circuit(n));
    EXPECT_NEAR(r.probability, std::ldexp(1.0, -n), 1e-12);
    std::vector<std::pair<int, int>> map;
    std::vector<int> order;
    for (int i = 1; i <= n; ++i) {
      map.emplace_back(i, i);
      order.push_back(i);
    }
    map.emplace_back(0, 0);
    order.push_back(0);
    EXPECT_TRUE(state_locally_equivalent(extract_logical(r.state, map), path_graph(order))) << n;
  }
}

TEST(Properties, WeavingStagesFactorIntoHalves) {
  const int n = 5;
  Circuit c = path_weaving_circuit(n);
  PhotonicState s = prepare(c.sources);
  double total = 1;
  for (int stage = 1; stage <= n; ++stage) {
    s = apply_hwp(apply_pbs(s, 0, stage), 0, 22.5);
    Postselection p = postselect_coincidence(s, c.postselect);
    EXPECT_NEAR(p.probability, 0.5, 1e-12) << stage;
    total *= p.probability;
    s = p.state;
  }
  EXPECT_NEAR(total, std::ldexp(1.0, -n), 1e-12);
}
