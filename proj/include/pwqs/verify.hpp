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

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "pwqs/classify.hpp"
#include "pwqs/graph.hpp"
#include "pwqs/io.hpp"
#include "pwqs/local_equivalence.hpp"
#include "pwqs/minors.hpp"
#include "pwqs/optics.hpp"
#include "pwqs/protocols.hpp"
#include "pwqs/state_vector.hpp"

namespace pwqs::verify {

using json = nlohmann::json;

struct SuiteResult {
  std::string name;
  bool pass = true;
  json details = json::object();
  double seconds = 0;
};

namespace detail {

inline bool dyadic(double p, int k, double tol = 1e-12) { return std::abs(p - std::ldexp(1.0, -k)) <= tol; }

inline std::vector<int> range(int first, int last) {
  std::vector<int> v;
  for (int i = first; i <= last; ++i) v.push_back(i);
  return v;
}

inline Graph random_graph(std::mt19937_64& rng, int n) {
  Graph g = empty_graph(n);
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v)
      if (rng() >> 63) g.add_edge(u, v);
  return g;
}

inline std::vector<std::pair<int, int>> identity_ports(int n) {
  std::vector<std::pair<int, int>> out;
  for (int p = 0; p < n; ++p) out.emplace_back(p, p);
  return out;
}

inline SuiteResult timed(const std::string& name, const std::function<void(SuiteResult&)>& body) {
  SuiteResult r;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.details["exception"] = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline void check(SuiteResult& r, bool ok, const std::string& what) {
  if (!ok) {
    r.pass = false;
    r.details["failures"].push_back(what);
  }
}

}  // namespace detail

// PBS chain of |+> photons: probability 2^-(N-1), two terms of magnitude
// 2^-N/2 before renormalisation, star-equivalent output.
inline SuiteResult ghz_postselection() {
  return detail::timed("ghz-postselection", [](SuiteResult& r) {
    for (int N = 2; N <= 8; ++N) {
      CircuitRun run = run_circuit(ghz_chain_circuit(N));
      const std::string tag = "N=" + std::to_string(N);
      detail::check(r, detail::dyadic(run.probability, N - 1), tag + " probability");
      detail::check(r, run.state.terms().size() == 2, tag + " term count");
      for (const auto& [pat, a] : run.state.terms())
        detail::check(r, std::abs(std::abs(a) * std::sqrt(run.probability) - std::pow(2.0, -N / 2.0)) < 1e-10,
                      tag + " amplitude");
      StateVector s = extract_logical(run.state, detail::identity_ports(N));
      detail::check(r, state_locally_equivalent(s, star_graph(0, detail::range(1, N - 1))), tag + " star");
      r.details["probabilities"].push_back(io::round12(run.probability));
    }
  });
}

// Photonic CZ with one auxiliary photon: probability 1/4, the four-term
// state, and the two-qubit path on both auxiliary HV outcomes.
inline SuiteResult cz_gate() {
  return detail::timed("cz-gate", [](SuiteResult& r) {
    CircuitRun run = run_circuit(cz_gate_circuit());
    detail::check(r, detail::dyadic(run.probability, 2), "probability");
    StateVector s = extract_logical(run.state, detail::identity_ports(3));
    // (|+HH> + |-HV> + |+VH> - |-VV>)/2 on (aux, 1, 2).
    StateVector four;
    four.qubits = {0, 1, 2};
    four.amplitudes.assign(8, 0);
    for (int a = 0; a < 2; ++a)
      for (int q1 = 0; q1 < 2; ++q1)
        for (int q2 = 0; q2 < 2; ++q2) {
          double sign = (q1 & q2) ? -1 : 1;
          if (q2 && a) sign = -sign;
          four.amplitudes[static_cast<std::size_t>(4 * a + 2 * q1 + q2)] = sign * 0.5 / std::sqrt(2.0);
        }
    detail::check(r, equal_up_to_phase(s, four), "four-term state");
    const StateVector p2 = to_state_vector(path_graph(2));
    for (const auto& b : measure_polarization(run.state, 0, PolBasis::HV)) {
      StateVector out = extract_logical(b.state, {{1, 1}, {2, 2}});
      if (b.outcome == "V") out = apply_1q(out, 2, gates::Z());
      detail::check(r, std::abs(b.probability - 0.5) < 1e-12, "branch " + b.outcome + " probability");
      detail::check(r, equal_up_to_phase(out, p2), "branch " + b.outcome + " state");
      r.details["corrections"][b.outcome] = b.outcome == "V" ? "Z on photon 2" : "none";
    }
  });
}

inline SuiteResult path_weaving() {
  return detail::timed("path-weaving", [](SuiteResult& r) {
    for (int N = 2; N <= 7; ++N) {
      CircuitRun run = run_circuit(path_weaving_circuit(N));
      const std::string tag = "N=" + std::to_string(N);
      detail::check(r, detail::dyadic(run.probability, N), tag + " probability");
      std::vector<int> order = detail::range(1, N);
      order.push_back(0);
      StateVector s = extract_logical(run.state, detail::identity_ports(N + 1));
      detail::check(r, state_locally_equivalent(s, path_graph(order)), tag + " path");
    }
  });
}

inline SuiteResult protocol_exponents() {
  return detail::timed("protocol-exponents", [](SuiteResult& r) {
    for (int M = 2; M <= 8; ++M) detail::check(r, detail::dyadic(run_ghz(M, false).probability(), M - 1, 0), "ghz " + std::to_string(M));
    for (int M = 2; M <= 7; ++M) detail::check(r, detail::dyadic(run_path(M, false).probability(), M - 1, 0), "path " + std::to_string(M));
    for (int M = 3; M <= 6; ++M) detail::check(r, detail::dyadic(run_cycle(M).probability(), M + 1, 0), "cycle " + std::to_string(M));
    for (int M = 1; M <= 7; ++M)
      for (int mask = 0; mask < (1 << (M - 1)); ++mask) {
        std::string layout = "S";
        for (int i = 0; i < M - 1; ++i) layout += (mask >> i) & 1 ? 'L' : 'S';
        detail::check(r, detail::dyadic(run_caterpillar(layout, false).probability(), M - 1, 0), "caterpillar " + layout);
        if (std::count(layout.begin(), layout.end(), 'S') >= 2)
          detail::check(r, detail::dyadic(run_caterpillar(layout, true).probability(), M + 1, 0), "closed caterpillar " + layout);
      }
    const int want[] = {3, 3, 2};
    int i = 0;
    for (BlockKind k : {BlockKind::Path4, BlockKind::Star4, BlockKind::Three}) {
      detail::check(r, build_block(k).exponent == want[i], "block " + to_string(k));
      detail::check(r, detail::dyadic(optics_layer(block_plan(k)).probability, want[i]), "block optics " + to_string(k));
      ++i;
    }
  });
}

// Every optics branch is LC-equivalent to the graph-layer output.
inline SuiteResult dual_path() {
  return detail::timed("dual-path", [](SuiteResult& r) {
    int plans = 0, branches = 0;
    auto run = [&](const std::string& name, const PhotonPlan& plan) {
      const Graph g = output_graph(graph_layer(plan), plan);
      OpticsRun o = optics_layer(plan);
      detail::check(r, detail::dyadic(o.probability, plan.pbs_count()), name + " probability");
      for (const auto& b : o.branches) {
        ++branches;
        detail::check(r, state_locally_equivalent(b.users, g), name + " branch");
      }
      ++plans;
    };
    for (int M = 2; M <= 5; ++M) {
      run("ghz" + std::to_string(M), ghz_plan(M, false));
      run("ghz-server" + std::to_string(M), ghz_plan(M, true));
      run("path" + std::to_string(M), path_plan(M, false));
      run("path-server" + std::to_string(M), path_plan(M, true));
      // Comb intermediate: users are leaves on a path of server photons.
      PhotonPlan plan = path_plan(M, false);
      const Graph comb = graph_layer(plan, false).graph();
      std::set<int> servers;
      bool leaves = true;
      for (int u = 1; u <= M; ++u) {
        leaves = leaves && comb.degree(u) == 1 && *comb.neighbors(u).begin() > kServerPhotonBase;
        servers.insert(server_photon(u));
      }
      detail::check(r, leaves && classify_graph(comb.induced(servers)).label == "path", "comb " + std::to_string(M));
      // The optics state before the server measurements is the same comb.
      detail::check(r, state_locally_equivalent(optics_layer(plan).before_measurement, comb), "optics comb " + std::to_string(M));
    }
    for (int M = 3; M <= 5; ++M) run("cycle" + std::to_string(M), cycle_plan(M));
    for (int M = 2; M <= 5; ++M)
      for (int mask = 0; mask < (1 << (M - 1)); ++mask) {
        std::string layout = "S";
        for (int i = 0; i < M - 1; ++i) layout += (mask >> i) & 1 ? 'L' : 'S';
        run("caterpillar " + layout, caterpillar_plan(layout, false));
        if (std::count(layout.begin(), layout.end(), 'S') >= 2) run("closed caterpillar " + layout, caterpillar_plan(layout, true));
      }
    for (BlockKind k : {BlockKind::Path4, BlockKind::Star4, BlockKind::Three}) run(to_string(k), block_plan(k));
    r.details["plans"] = plans;
    r.details["branches"] = branches;
  });
}

// Fusing the two ends of P_N: C_{N-1} plus a leaf, and the same state as
// the parity projection followed by a Hadamard on the kept photon.
inline SuiteResult self_fusion() {
  return detail::timed("self-fusion", [](SuiteResult& r) {
    for (int N = 4; N <= 8; ++N) {
      const Graph p = path_graph(N);
      const Graph fused = fuse_within(p, 1, N);
      Graph want = cycle_graph(detail::range(1, N - 1));
      want.add_vertex(N);
      want.add_edge(1, N);
      detail::check(r, fused == want, "structure N=" + std::to_string(N));
      StateVector s = to_state_vector(p);
      const auto b1 = s.bit(1), bn = s.bit(N);
      for (std::uint64_t x = 0; x < s.amplitudes.size(); ++x)
        if (((x & b1) != 0) != ((x & bn) != 0)) s.amplitudes[x] = 0;
      s = apply_1q(normalized(s), N, gates::H());
      detail::check(r, equal_up_to_phase(s, to_state_vector(fused)), "state N=" + std::to_string(N));
    }
  });
}

inline std::vector<std::string> all_words(std::size_t k) {
  std::vector<std::string> out{""};
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::string> next;
    for (const auto& w : out)
      for (char c : {'X', 'Y', 'Z'}) next.push_back(w + c);
    out = std::move(next);
  }
  return out;
}

inline SuiteResult appendix_b(const std::vector<int>& zigzag_sizes = {6, 8, 10}) {
  return detail::timed("appendix-b", [&](SuiteResult& r) {
    for (int n : zigzag_sizes) {
      int count = 0, ok = 0;
      for (const auto& w : all_words(static_cast<std::size_t>(n / 2))) {
        ++count;
        if (crosscheck(n, w, "zigzag")) ++ok;
        else detail::check(r, false, "zigzag n=" + std::to_string(n) + " " + w);
      }
      r.details["zigzag"][std::to_string(n)] = {{"words", count}, {"equivalent", ok}};
    }
    std::mt19937_64 rng(8);
    int honey = 0;
    for (int i = 0; i < 100; ++i) {
      std::string w;
      for (int j = 0; j < 4; ++j) w += "XYZ"[rng() % 3];
      if (crosscheck(8, w, "honeycomb")) ++honey;
      else detail::check(r, false, "honeycomb " + w);
    }
    r.details["honeycomb_n8_equivalent"] = honey;
    int pet = 0;
    for (int n : {5, 8, 11})
      for (const auto& w : all_words(path_every_third_resource(n).measured.size())) {
        CrosscheckReport rep = crosscheck_report(n, w, "path_every_third");
        bool bound = rep.equivalent;
        for (const auto& c : rep.simulated.components) {
          bound = bound && c.kind != "other" && c.kind != "cycle" && c.kind != "leafed-cycle";
          for (const auto& [v, leaves] : c.leaves) bound = bound && leaves.size() <= 1;
        }
        detail::check(r, bound, "path_every_third n=" + std::to_string(n) + " " + w);
        ++pet;
      }
    r.details["path_every_third_words"] = pet;
  });
}

inline SuiteResult monte_carlo_suite(std::uint64_t seed = 2026, std::uint64_t trials = 100000) {
  return detail::timed("monte-carlo", [&](SuiteResult& r) {
    ProtocolSpec ghz;
    ghz.protocol = "ghz";
    ghz.M = 3;
    ProtocolSpec chain;
    chain.protocol = "chain";
    chain.blocks = std::vector<BlockKind>(4, BlockKind::Path4);
    for (const ProtocolSpec& spec : {ghz, chain}) {
      std::vector<TrialLog> log1, log2;
      MonteCarloStats a = monte_carlo(spec, trials, seed, &log1);
      MonteCarloStats b = monte_carlo(spec, trials, seed, &log2);
      const json ja = io::to_json(a), jb = io::to_json(b);
      detail::check(r, a.within_3sigma, spec.protocol + " within 3 sigma");
      detail::check(r, ja.dump() == jb.dump() && io::trials_csv(log1) == io::trials_csv(log2), spec.protocol + " reproducible");
      if (spec.protocol == "chain") {
        const double exact = enumerate_chain_blocks(4, 1000000).mean_blocks;
        const double mean = a.resource_counts.at("mean_blocks"), se = a.resource_counts.at("mean_blocks_std_error");
        detail::check(r, std::abs(mean - exact) <= 3 * se, "chain mean blocks within 3 sigma");
        r.details["chain_exact_mean_blocks"] = io::round12(exact);
      }
      r.details[spec.protocol] = ja;
    }
  });
}

inline SuiteResult properties() {
  return detail::timed("properties", [](SuiteResult& r) {
    std::mt19937_64 rng(99);
    int graphs = 0;
    for (int t = 0; t < 1200; ++t) {
      const Graph g = detail::random_graph(rng, 1 + static_cast<int>(rng() % 8));
      ++graphs;
      for (int v : g.vertices()) {
        if (local_complement(local_complement(g, v), v) != g) detail::check(r, false, "lc involution");
        const Graph z = measure_pauli(g, v, Pauli::Z);
        std::set<int> rest;
        for (int u : g.vertices())
          if (u != v) rest.insert(u);
        if (z != g.induced(rest)) detail::check(r, false, "Z deletion");
      }
    }
    r.details["lc_graphs"] = graphs;
    int sound = 0;
    for (int t = 0; t < 120; ++t) {
      const Graph g = detail::random_graph(rng, 2 + t % 5);
      const StateVector s = to_state_vector(g);
      for (int v : g.vertices()) {
        if (!state_locally_equivalent(s, local_complement(g, v))) detail::check(r, false, "lc preserves state");
        for (Pauli b : {Pauli::X, Pauli::Y, Pauli::Z}) {
          const Graph h = measure_pauli(g, v, b);
          for (bool minus : {false, true}) {
            Projection p = project_qubit(s, v, pauli_eigenstate(b, minus));
            if (p.probability < 1e-12) continue;
            ++sound;
            if (!state_locally_equivalent(p.state, h)) detail::check(r, false, "measurement soundness");
          }
        }
      }
    }
    r.details["measurement_branches"] = sound;
    // Optics: unitarity, photon number, PBS involution on random sources.
    int states = 0;
    for (int t = 0; t < 300; ++t) {
      const int ports = 2 + static_cast<int>(rng() % 4);
      std::vector<SourceSpec> src;
      for (int p = 0; p < ports; ++p) src.push_back(SourceSpec::plus(p));
      PhotonicState s = prepare(src, ports);
      for (int k = 0; k < 6; ++k) {
        const int a = static_cast<int>(rng() % static_cast<std::uint64_t>(ports));
        const int b = static_cast<int>(rng() % static_cast<std::uint64_t>(ports));
        const double n0 = s.norm2();
        const int photons = s.total_photons();
        PhotonicState next = (a != b && (rng() >> 63)) ? apply_pbs(s, a, b) : apply_hwp(s, a, (rng() >> 63) ? 22.5 : 0.0);
        if (std::abs(next.norm2() - n0) > 1e-12) detail::check(r, false, "unitarity");
        for (const auto& [pat, amp] : next.terms()) {
          int n = 0;
          for (auto c : pat) n += c;
          if (n != photons) detail::check(r, false, "photon number");
        }
        if (a != b) {
          PhotonicState back = apply_pbs(apply_pbs(s, a, b), a, b);
          for (const auto& [pat, amp] : s.terms()) {
            auto it = back.terms().find(pat);
            if (it == back.terms().end() || std::abs(it->second - amp) > 1e-12) detail::check(r, false, "pbs involution");
          }
        }
        s = next;
      }
      ++states;
    }
    r.details["optics_states"] = states;
    // Failure containment in storage mode.
    int failures = 0;
    const std::vector<BlockKind> kinds{BlockKind::Path4, BlockKind::Star4, BlockKind::Three};
    for (int t = 0; t < 300; ++t) {
      std::vector<BlockKind> blocks;
      const int B = 2 + static_cast<int>(rng() % 5);
      for (int b = 0; b < B; ++b) blocks.push_back(kinds[rng() % kinds.size()]);
      std::vector<std::set<int>> users;
      int next = 1;
      for (BlockKind k : blocks) {
        std::set<int> us;
        for (std::size_t i = 0; i < build_block(k).users.size(); ++i) us.insert(next++);
        users.push_back(us);
      }
      ProtocolResult res = fuse_chain(blocks, "", false, [&rng] { return (rng() >> 63) != 0; });
      for (const auto& ev : res.history) {
        if (ev.success) continue;
        ++failures;
        std::set<int> keep;
        for (int b = 0; b < ev.joint - 1; ++b) keep.insert(users[static_cast<std::size_t>(b)].begin(), users[static_cast<std::size_t>(b)].end());
        if (ev.before.induced(keep) != ev.after.induced(keep)) detail::check(r, false, "failure containment");
      }
    }
    r.details["fusion_failures_checked"] = failures;
  });
}

inline std::vector<std::string> suite_names() {
  return {"ghz", "cz", "weaving", "exponents", "dual-path", "self-fusion", "appendix-b", "montecarlo", "properties"};
}

inline SuiteResult run_suite(const std::string& name, const std::vector<int>& appendix_sizes = {6, 8, 10}) {
  if (name == "ghz") return ghz_postselection();
  if (name == "cz") return cz_gate();
  if (name == "weaving") return path_weaving();
  if (name == "exponents") return protocol_exponents();
  if (name == "dual-path") return dual_path();
  if (name == "self-fusion") return self_fusion();
  if (name == "appendix-b") return appendix_b(appendix_sizes);
  if (name == "montecarlo") return monte_carlo_suite();
  if (name == "properties") return properties();
  throw Error("unknown suite: " + name);
}

inline json to_json(const SuiteResult& s) {
  return {{"name", s.name}, {"pass", s.pass}, {"details", s.details}, {"seconds", io::round12(s.seconds)}};
}

}  // namespace pwqs::verify
