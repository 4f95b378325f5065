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
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pwqs/errors.hpp"
#include "pwqs/framed_graph.hpp"
#include "pwqs/graph.hpp"
#include "pwqs/local_equivalence.hpp"
#include "pwqs/optics.hpp"

namespace pwqs {

// Label conventions for protocol photons.
inline constexpr int kServerLabel = 0;       // server-held output qubit
inline constexpr int kServerPhotonBase = 100;  // photon paired with user i is 100 + i
inline constexpr int kWeaverLabel = 200;     // dedicated weaving photon

struct MeasurementOutcome {
  int photon = 0;
  Pauli basis = Pauli::X;  // X is the +/- basis, Z is H/V
  bool minus = false;      // "-" or "V"

  std::string label() const { return basis == Pauli::X ? (minus ? "-" : "+") : (minus ? "V" : "H"); }
};

struct Correction {
  int user = 0;
  std::string op;  // "X", "Y", "Z" or "H"
  bool operator==(const Correction&) const = default;
};

struct ChainEvent {
  int joint = 0;  // 1-based joint between block `joint` and `joint + 1`
  bool success = false;
  Graph before;
  Graph after;
};

struct ProtocolResult {
  std::string protocol;
  Graph final_graph;
  int exponent = 0;  // success probability 2^-exponent
  std::vector<MeasurementOutcome> record;
  int m_minus = 0;
  std::vector<Correction> corrections;
  std::map<std::string, Graph> intermediates;
  // Storage-mode fields.
  bool success = true;
  int blocks_consumed = 0;
  int fusion_attempts = 0;
  std::vector<ChainEvent> history;

  double probability() const { return std::ldexp(1.0, -exponent); }
};

// A photonic circuit over labelled photons: two-photon graph-state sources,
// PBS/HWP steps and final single-photon measurements.
struct PhotonPlan {
  struct Step {
    bool pbs = true;
    int a = 0;  // PBS: first photon; HWP: photon
    int b = 0;  // PBS: photon that continues (ends as a leaf of a)
    double angle = 22.5;
  };
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> singles;
  std::vector<Step> steps;
  std::vector<std::pair<int, Pauli>> measurements;
  std::map<int, int> output_labels;  // photon -> final vertex label

  void pbs(int a, int b) { steps.push_back({true, a, b, 0}); }
  void hwp(int p, double angle) { steps.push_back({false, p, 0, angle}); }
  int pbs_count() const {
    return static_cast<int>(std::count_if(steps.begin(), steps.end(), [](const Step& s) { return s.pbs; }));
  }
  std::vector<int> photons() const {
    std::vector<int> out;
    for (auto [a, b] : pairs) {
      out.push_back(a);
      out.push_back(b);
    }
    out.insert(out.end(), singles.begin(), singles.end());
    return out;
  }
};

// Graph layer: frame-tracked rewrite of the plan. Stops before the
// measurements when `measure` is false.
inline FramedGraph graph_layer(const PhotonPlan& plan, bool measure = true) {
  FramedGraph f;
  for (auto [a, b] : plan.pairs) {
    f.add_vertex(a);
    f.add_vertex(b);
    f.add_edge(a, b);
  }
  for (int s : plan.singles) f.add_vertex(s);
  for (const auto& st : plan.steps) {
    if (st.pbs) f.parity(st.a, st.b);
    else if (std::abs(st.angle - 22.5) < 1e-9) f.hadamard(st.a);
    else (void)hwp_matrix(st.angle);  // 0 degrees is a Pauli; frames ignore it
  }
  if (measure)
    for (auto [p, basis] : plan.measurements) f.measure(p, basis);
  return f;
}

inline Graph output_graph(const FramedGraph& f, const PhotonPlan& plan) {
  std::map<int, int> m;
  for (auto [photon, label] : plan.output_labels)
    if (photon != label) m[photon] = label;
  return f.graph().relabeled(m);
}

struct OpticsBranch {
  std::vector<MeasurementOutcome> outcomes;
  double probability = 0;
  StateVector users;  // output qubits, labelled by final label
};

struct OpticsRun {
  double probability = 0;  // postselection probability
  StateVector before_measurement;  // all photons, labelled by photon label
  std::vector<OpticsBranch> branches;
};

// Optics layer: the same plan as a linear-optical circuit with coincidence
// postselection, then every measurement branch.
inline OpticsRun optics_layer(const PhotonPlan& plan) {
  std::vector<int> photons = plan.photons();
  std::map<int, int> port;
  for (int p : photons) port[p] = static_cast<int>(port.size());
  if (static_cast<int>(photons.size()) > kMaxPhotons) throw SizeLimitError("at most 16 photons are supported");
  Circuit c;
  for (auto [a, b] : plan.pairs) c.sources.push_back(SourceSpec::gbell(port.at(a), port.at(b)));
  for (int s : plan.singles) c.sources.push_back(SourceSpec::plus(port.at(s)));
  for (const auto& st : plan.steps)
    c.elements.push_back(st.pbs ? OpticalElement::pbs(port.at(st.a), port.at(st.b))
                                : OpticalElement::hwp(port.at(st.a), st.angle));
  for (int p : photons) c.postselect.push_back(port.at(p));
  for (auto [p, basis] : plan.measurements) c.measure.emplace_back(port.at(p), basis == Pauli::X ? PolBasis::PM : PolBasis::HV);
  CircuitRun run = run_circuit(c);
  OpticsRun out;
  out.probability = run.probability;
  std::vector<std::pair<int, int>> all;
  for (int p : photons) all.emplace_back(port.at(p), p);
  if (photons.size() <= static_cast<std::size_t>(kMaxStateQubits)) out.before_measurement = extract_logical(run.state, all);
  std::vector<std::pair<int, int>> kept;
  for (auto [photon, label] : plan.output_labels) kept.emplace_back(port.at(photon), label);
  if (c.measure.empty()) {
    out.branches.push_back({{}, 1.0, extract_logical(run.state, kept)});
    return out;
  }
  for (auto& br : run.branches) {
    if (br.probability < 1e-14) continue;
    OpticsBranch b;
    b.probability = br.probability;
    for (std::size_t i = 0; i < br.outcomes.size(); ++i) {
      const std::string& o = br.outcomes[i];
      b.outcomes.push_back({plan.measurements[i].first, plan.measurements[i].second, o == "-" || o == "V"});
    }
    b.users = extract_logical(br.state, kept);
    out.branches.push_back(std::move(b));
  }
  return out;
}

// ---- plans for the no-storage protocols ----

inline int server_photon(int user) { return kServerPhotonBase + user; }

inline PhotonPlan ghz_plan(int M, bool server_participates) {
  PhotonPlan p;
  for (int i = 1; i <= M; ++i) {
    p.pairs.emplace_back(i, server_photon(i));
    p.output_labels[i] = i;
  }
  for (int i = 2; i <= M; ++i) p.pbs(server_photon(i), server_photon(1));
  for (int i = server_participates ? 2 : 1; i <= M; ++i) p.measurements.emplace_back(server_photon(i), Pauli::X);
  if (server_participates) p.output_labels[server_photon(1)] = kServerLabel;
  return p;
}

// Weaving with the first shared photon; `zero_deg[j]` selects a 0 degree plate
// after the PBS with user j + 2.
inline PhotonPlan weave_plan(int M, bool keep_weaver, const std::vector<bool>& zero_deg) {
  PhotonPlan p;
  for (int i = 1; i <= M; ++i) {
    p.pairs.emplace_back(i, server_photon(i));
    p.output_labels[i] = i;
  }
  for (int i = 2; i <= M; ++i) {
    p.pbs(server_photon(i), server_photon(1));
    p.hwp(server_photon(1), zero_deg[static_cast<std::size_t>(i - 2)] ? 0.0 : 22.5);
  }
  for (int i = 2; i <= M; ++i) p.measurements.emplace_back(server_photon(i), Pauli::X);
  if (keep_weaver) p.output_labels[server_photon(1)] = kServerLabel;
  else p.measurements.emplace_back(server_photon(1), Pauli::Z);
  return p;
}

inline PhotonPlan path_plan(int M, bool server_participates) {
  return weave_plan(M, server_participates, std::vector<bool>(static_cast<std::size_t>(std::max(M - 1, 0)), false));
}

// Weaving photon from a server-owned pair (kServerLabel, kWeaverLabel), closed
// by a final PBS between the two server photons.
inline PhotonPlan closed_weave_plan(int M, const std::vector<bool>& zero_deg) {
  PhotonPlan p;
  for (int i = 1; i <= M; ++i) {
    p.pairs.emplace_back(i, server_photon(i));
    p.output_labels[i] = i;
  }
  p.pairs.emplace_back(kServerLabel, kWeaverLabel);
  p.output_labels[kServerLabel] = kServerLabel;
  for (int i = 1; i <= M; ++i) {
    p.pbs(server_photon(i), kWeaverLabel);
    p.hwp(kWeaverLabel, zero_deg[static_cast<std::size_t>(i - 1)] ? 0.0 : 22.5);
  }
  p.pbs(kServerLabel, kWeaverLabel);
  p.hwp(kWeaverLabel, 22.5);
  for (int i = 1; i <= M; ++i) p.measurements.emplace_back(server_photon(i), Pauli::X);
  p.measurements.emplace_back(kWeaverLabel, Pauli::Z);
  return p;
}

inline PhotonPlan cycle_plan(int M) { return closed_weave_plan(M, std::vector<bool>(static_cast<std::size_t>(M), false)); }

inline void check_layout(const std::string& layout, bool close) {
  require(!layout.empty(), "caterpillar layout is empty");
  for (char c : layout) require(c == 'S' || c == 'L', "layout letters must be S (spine) or L (leaf)");
  require(layout.front() == 'S', "invalid layout: the first user is a leaf attached to no spine vertex");
  if (close) require(std::count(layout.begin(), layout.end(), 'S') >= 2, "closed caterpillar needs two spine users");
}

inline PhotonPlan caterpillar_plan(const std::string& layout, bool close) {
  check_layout(layout, close);
  const int M = static_cast<int>(layout.size());
  // The plate after weaving user j is 0 degrees iff user j + 1 is a leaf.
  auto leaf_next = [&](int j) { return j < M && layout[static_cast<std::size_t>(j)] == 'L'; };
  if (!close) {
    std::vector<bool> z;
    for (int j = 2; j <= M; ++j) z.push_back(leaf_next(j));
    return weave_plan(M, false, z);
  }
  std::vector<bool> z;
  for (int j = 1; j <= M; ++j) z.push_back(leaf_next(j));
  return closed_weave_plan(M, z);
}

// Reference shape for a layout: spine users in order, each leaf on the
// nearest preceding spine user; closed layouts add the server to the cycle.
inline Graph caterpillar_target(const std::string& layout, bool close) {
  check_layout(layout, close);
  Graph g;
  std::vector<int> spine;
  if (close) {
    g.add_vertex(kServerLabel);
    spine.push_back(kServerLabel);
  }
  int last_spine = -1;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const int u = static_cast<int>(i) + 1;
    g.add_vertex(u);
    if (layout[i] == 'S') {
      spine.push_back(u);
      last_spine = u;
    } else {
      g.add_edge(last_spine, u);
    }
  }
  for (std::size_t i = 1; i < spine.size(); ++i) g.add_edge(spine[i - 1], spine[i]);
  if (close) g.add_edge(spine.back(), spine.front());
  return g;
}

inline int user_of(int photon) { return photon > kServerPhotonBase && photon < kWeaverLabel ? photon - kServerPhotonBase : 1; }

inline ProtocolResult run_plan(const std::string& name, const PhotonPlan& plan, const std::vector<bool>& outcomes) {
  require(outcomes.size() <= plan.measurements.size(), "more outcomes than measurements");
  ProtocolResult r;
  r.protocol = name;
  r.exponent = plan.pbs_count();
  r.final_graph = output_graph(graph_layer(plan), plan);
  for (std::size_t i = 0; i < plan.measurements.size(); ++i) {
    const bool minus = i < outcomes.size() && outcomes[i];
    r.record.push_back({plan.measurements[i].first, plan.measurements[i].second, minus});
    if (minus && plan.measurements[i].second == Pauli::X) ++r.m_minus;
  }
  return r;
}

inline std::vector<bool> no_outcomes() { return {}; }

inline ProtocolResult run_ghz(int M, bool server_participates, const std::vector<bool>& outcomes = {}) {
  if (M < 2 || M > 8) throw Error("run_ghz supports 2 <= M <= 8");
  ProtocolResult r = run_plan("ghz", ghz_plan(M, server_participates), outcomes);
  // The sign between |+..+> and |-..-> is fixed by X on one user.
  if (r.m_minus % 2) r.corrections.push_back({1, "X"});
  return r;
}

inline void add_weaving_corrections(ProtocolResult& r, bool hadamards, int M) {
  if (hadamards)
    for (int u = 2; u <= M; ++u) r.corrections.push_back({u, "H"});
  for (const auto& o : r.record)
    if (o.minus) r.corrections.push_back({user_of(o.photon), "Z"});
}

inline ProtocolResult run_path(int M, bool server_participates, const std::vector<bool>& outcomes = {}) {
  if (M < 2 || M > 7) throw Error("run_path supports 2 <= M <= 7");
  PhotonPlan plan = path_plan(M, server_participates);
  ProtocolResult r = run_plan("path", plan, outcomes);
  r.intermediates["comb"] = graph_layer(plan, false).graph();
  add_weaving_corrections(r, true, M);
  return r;
}

inline ProtocolResult run_cycle(int M, const std::vector<bool>& outcomes = {}) {
  if (M < 3 || M > 6) throw Error("run_cycle supports 3 <= M <= 6");
  PhotonPlan plan = cycle_plan(M);
  ProtocolResult r = run_plan("cycle", plan, outcomes);
  // Open path before closure: weave, measure the shared server photons.
  PhotonPlan open = plan;
  open.steps.resize(open.steps.size() - 2);
  open.measurements.pop_back();
  open.output_labels[kWeaverLabel] = kWeaverLabel;
  r.intermediates["pre_closure"] = output_graph(graph_layer(open), open);
  add_weaving_corrections(r, false, M);
  return r;
}

inline ProtocolResult run_caterpillar(const std::string& layout, bool close_cycle, const std::vector<bool>& outcomes = {}) {
  if (layout.size() > 7) throw Error("run_caterpillar supports at most 7 users");
  ProtocolResult r = run_plan(close_cycle ? "caterpillar-closed" : "caterpillar", caterpillar_plan(layout, close_cycle), outcomes);
  add_weaving_corrections(r, false, static_cast<int>(layout.size()));
  return r;
}

// ---- graph-level fusion ----

// Union plus edge m-n plus an auxiliary vertex attached only to n.
inline Graph weave_graphs(const Graph& g1, int m, const Graph& g2, int n, int aux) {
  require(g1.has_vertex(m), "m is not a vertex of the first graph");
  require(g2.has_vertex(n), "n is not a vertex of the second graph");
  Graph g = disjoint_union(g1, g2);
  if (g.has_vertex(aux)) throw Error("auxiliary label collides with an existing vertex");
  g.add_edge(m, n);
  g.add_vertex(aux);
  g.add_edge(aux, n);
  return g;
}

inline Graph weave_graphs(const Graph& g1, int m, const Graph& g2, int n) {
  int aux = 0;
  for (int v : g1.vertices()) aux = std::max(aux, v + 1);
  for (int v : g2.vertices()) aux = std::max(aux, v + 1);
  return weave_graphs(g1, m, g2, n, aux);
}

// Self-fusion of two vertices of one graph: N(f) becomes N(f) xor N(l), l a leaf of f.
inline Graph fuse_within(const Graph& g, int f, int l) {
  require(f != l, "fusion needs two distinct vertices");
  require(g.has_vertex(f) && g.has_vertex(l), "fusion vertex not in graph");
  if (g.has_edge(f, l)) throw Error("cannot fuse adjacent vertices");
  Graph out = g;
  for (int x : g.neighbors(l)) {
    out.remove_edge(l, x);
    out.toggle_edge(f, x);
  }
  out.add_edge(f, l);
  return out;
}

// Type-I fusion success: the kept photon a absorbs the neighbourhood of b.
inline void merge_photons_in_place(Graph& g, int a, int b) {
  const std::set<int> nb = g.neighbors(b);
  for (int x : nb)
    if (x != a) g.toggle_edge(a, x);
  g.remove_vertex(b);
}

inline Graph merge_photons(Graph g, int a, int b) {
  merge_photons_in_place(g, a, b);
  return g;
}

// ---- storage mode ----

enum class BlockKind { Path4, Star4, Three };

inline std::string to_string(BlockKind k) { return k == BlockKind::Path4 ? "Path4" : k == BlockKind::Star4 ? "Star4" : "Three"; }

inline BlockKind block_from_string(const std::string& s) {
  if (s == "Path4" || s == "path4" || s == "path") return BlockKind::Path4;
  if (s == "Star4" || s == "star4" || s == "star") return BlockKind::Star4;
  if (s == "Three" || s == "three") return BlockKind::Three;
  throw Error("unknown block kind: " + s);
}

struct Block {
  BlockKind kind = BlockKind::Path4;
  Graph graph;
  std::vector<int> users;
  int left = 0;   // server photon used for the fusion to the left
  int right = 0;  // server photon used for the fusion to the right
  int exponent = 0;
};

// Block photons: server pair (0, weaver), users 1.. with their server photons,
// and a second server pair whose outer photon becomes the right end.
inline PhotonPlan block_plan(BlockKind kind) {
  const int users = kind == BlockKind::Three ? 1 : 2;
  const int right = users + 1;
  PhotonPlan p;
  p.pairs.emplace_back(0, kWeaverLabel);
  p.output_labels[0] = 0;
  for (int u = 1; u <= right; ++u) {
    p.pairs.emplace_back(u, server_photon(u));
    p.output_labels[u] = u;
  }
  const bool ghz = kind == BlockKind::Star4;
  for (int u = 1; u <= right; ++u) {
    p.pbs(server_photon(u), kWeaverLabel);
    if (!ghz) p.hwp(kWeaverLabel, 22.5);
  }
  for (int u = 1; u <= right; ++u) p.measurements.emplace_back(server_photon(u), Pauli::X);
  p.measurements.emplace_back(kWeaverLabel, ghz ? Pauli::X : Pauli::Z);
  return p;
}

inline Block build_block(BlockKind kind) {
  Block b;
  b.kind = kind;
  b.exponent = block_plan(kind).pbs_count();
  switch (kind) {
    case BlockKind::Path4:
      b.graph = path_graph(std::vector<int>{0, 1, 2, 3});
      b.users = {1, 2};
      b.right = 3;
      break;
    case BlockKind::Star4:
      b.graph = star_graph(1, {0, 2, 3});
      b.users = {1, 2};
      b.right = 3;
      break;
    case BlockKind::Three:
      b.graph = path_graph(std::vector<int>{0, 1, 2});
      b.users = {1};
      b.right = 2;
      break;
  }
  b.left = 0;
  return b;
}

// Joint letters X, Y, Z measure the stored joint photon; '-' keeps it.
inline ProtocolResult fuse_chain(const std::vector<BlockKind>& blocks, const std::string& plan, bool close_cycle,
                                 const std::function<bool()>& fusion_succeeds = {}, bool keep_history = true) {
  require(blocks.size() >= 2, "fuse_chain needs at least two blocks");
  const int B = static_cast<int>(blocks.size());
  const int joints = B - 1 + (close_cycle ? 1 : 0);
  if (!plan.empty() && static_cast<int>(plan.size()) != joints)
    throw Error("measurement plan has " + std::to_string(plan.size()) + " letters for " + std::to_string(joints) + " joints");
  for (char c : plan) require(c == 'X' || c == 'Y' || c == 'Z' || c == '-', "plan letters must be X, Y, Z or -");

  std::map<BlockKind, Block> templates;
  for (BlockKind k : blocks)
    if (!templates.count(k)) templates.emplace(k, build_block(k));
  std::vector<std::vector<int>> user_labels;
  int next_user = 1;
  for (BlockKind k : blocks) {
    std::vector<int> us;
    for (std::size_t i = 0; i < templates.at(k).users.size(); ++i) us.push_back(next_user++);
    user_labels.push_back(us);
  }

  ProtocolResult r;
  r.protocol = "chain";
  r.exponent = joints;
  Graph g;
  int next_photon = 1000;
  int first_left = -1, right_end = -1;
  std::vector<int> joint_photons;
  auto instantiate = [&](int pos) {
    const Block& b = templates.at(blocks[static_cast<std::size_t>(pos)]);
    std::map<int, int> m;
    for (std::size_t i = 0; i < b.users.size(); ++i) m[b.users[i]] = user_labels[static_cast<std::size_t>(pos)][i];
    m[b.left] = next_photon++;
    m[b.right] = next_photon++;
    for (int v : b.graph.vertices()) g.add_vertex(m.at(v));
    for (auto [u, v] : b.graph.edges()) g.add_edge(m.at(u), m.at(v));
    ++r.blocks_consumed;
    return std::make_pair(m.at(b.left), m.at(b.right));
  };
  auto attempt = [&] {
    ++r.fusion_attempts;
    return fusion_succeeds ? fusion_succeeds() : true;
  };

  int L = 0;
  while (L < B) {
    auto [left, right] = instantiate(L);
    if (L == 0) {
      first_left = left;
      right_end = right;
      L = 1;
      continue;
    }
    Graph before = keep_history ? g : Graph{};
    const bool ok = attempt();
    if (ok) {
      merge_photons_in_place(g, right_end, left);
      joint_photons.push_back(right_end);
      right_end = right;
      ++L;
    } else {
      g.remove_vertex(right_end);
      g.remove_vertex(left);
      g.remove_vertex(right);
      for (int u : user_labels[static_cast<std::size_t>(L)]) g.remove_vertex(u);
      for (int u : user_labels[static_cast<std::size_t>(L - 1)]) g.remove_vertex(u);
      if (L >= 2) {
        right_end = joint_photons.back();
        joint_photons.pop_back();
      } else {
        g.remove_vertex(first_left);
      }
      --L;
    }
    if (keep_history) r.history.push_back({L + (ok ? -1 : 1), ok, std::move(before), g});
  }
  if (close_cycle) {
    Graph before = keep_history ? g : Graph{};
    const bool ok = attempt();
    if (ok) {
      merge_photons_in_place(g, right_end, first_left);
      joint_photons.push_back(right_end);
    } else {
      r.success = false;
    }
    if (keep_history) r.history.push_back({B, ok, std::move(before), g});
  }
  r.intermediates["fused"] = g;
  if (r.success && !plan.empty()) {
    for (std::size_t j = 0; j < joint_photons.size(); ++j) {
      const char c = plan[j];
      if (c == '-') continue;
      r.record.push_back({joint_photons[j], pauli_from_char(c), false});
      g = measure_pauli(g, joint_photons[j], pauli_from_char(c));
    }
    if (!close_cycle) {
      g = measure_pauli(g, first_left, Pauli::Z);
      g = measure_pauli(g, right_end, Pauli::Z);
    }
  }
  r.final_graph = g;
  return r;
}

// ---- Monte Carlo ----

struct ProtocolSpec {
  std::string protocol;  // ghz, path, cycle, caterpillar, block, chain
  int M = 0;
  bool server = false;
  std::string layout;
  bool close = false;
  std::vector<BlockKind> blocks;
  std::string plan;
};

struct MonteCarloStats {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double estimated_probability = 0;
  double std_error = 0;
  double exact_probability = 0;
  std::map<std::string, double> resource_counts;
  std::uint64_t rng_seed = 0;
  bool within_3sigma = false;
  bool within_5sigma = false;
};

struct TrialLog {
  std::uint64_t trial = 0;
  bool success = false;
  int blocks = 0;
  int attempts = 0;
  int m_minus = 0;
};

// Independent stream per (seed, trial): splitmix64 of the pair seeds the engine.
inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (trial + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return std::mt19937_64(z ^ (z >> 31));
}

inline int exact_exponent(const ProtocolSpec& s) {
  if (s.protocol == "ghz" || s.protocol == "path") return s.M - 1;
  if (s.protocol == "cycle") return s.M + 1;
  if (s.protocol == "caterpillar") return static_cast<int>(s.layout.size()) + (s.close ? 1 : -1);
  if (s.protocol == "block") return build_block(s.blocks.at(0)).exponent;
  if (s.protocol == "chain") return static_cast<int>(s.blocks.size()) - 1 + (s.close ? 1 : 0);
  throw Error("unknown protocol: " + s.protocol);
}

inline PhotonPlan plan_for(const ProtocolSpec& s) {
  if (s.protocol == "ghz") return ghz_plan(s.M, s.server);
  if (s.protocol == "path") return path_plan(s.M, s.server);
  if (s.protocol == "cycle") return cycle_plan(s.M);
  if (s.protocol == "caterpillar") return caterpillar_plan(s.layout, s.close);
  if (s.protocol == "block") return block_plan(s.blocks.at(0));
  throw Error("no photon plan for protocol: " + s.protocol);
}

// Number of PM-basis server measurements of a no-storage protocol.
inline int pm_measurements(const ProtocolSpec& s) {
  if (s.protocol == "ghz") return s.server ? s.M - 1 : s.M;
  if (s.protocol == "path") return s.M - 1;
  if (s.protocol == "cycle") return s.M;
  if (s.protocol == "caterpillar") return static_cast<int>(s.layout.size()) - (s.close ? 0 : 1);
  return 0;
}

inline MonteCarloStats monte_carlo(const ProtocolSpec& spec, std::uint64_t trials, std::uint64_t seed,
                                   std::vector<TrialLog>* log = nullptr) {
  require(trials >= 1, "monte_carlo needs at least one trial");
  MonteCarloStats st;
  st.trials = trials;
  st.rng_seed = seed;
  const int k = exact_exponent(spec);
  st.exact_probability = std::ldexp(1.0, -k);
  const bool chain = spec.protocol == "chain";
  if (chain) require(spec.blocks.size() >= 2, "chain needs at least two blocks");
  double blocks_sum = 0, blocks_sq = 0, m_minus_sum = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng = trial_rng(seed, t);
    auto coin = [&rng] { return (rng() >> 63) != 0; };
    TrialLog row;
    row.trial = t;
    if (chain) {
      ProtocolResult r = fuse_chain(spec.blocks, "", spec.close, coin, false);
      row.blocks = r.blocks_consumed;
      row.attempts = r.fusion_attempts;
      row.success = r.success && r.fusion_attempts == k;
    } else {
      bool ok = true;
      for (int i = 0; i < k; ++i) ok = coin() && ok;
      row.success = ok;
      row.attempts = k;
      for (int i = 0; i < pm_measurements(spec); ++i) row.m_minus += coin() ? 1 : 0;
    }
    st.successes += row.success ? 1 : 0;
    blocks_sum += row.blocks;
    blocks_sq += static_cast<double>(row.blocks) * row.blocks;
    m_minus_sum += row.m_minus;
    if (log) log->push_back(row);
  }
  const double n = static_cast<double>(trials);
  st.estimated_probability = static_cast<double>(st.successes) / n;
  st.std_error = std::sqrt(st.estimated_probability * (1 - st.estimated_probability) / n);
  const double dev = std::abs(st.estimated_probability - st.exact_probability);
  st.within_3sigma = dev <= 3 * st.std_error + 1e-15;
  st.within_5sigma = dev <= 5 * st.std_error + 1e-15;
  if (chain) {
    const double mean = blocks_sum / n;
    st.resource_counts["mean_blocks"] = mean;
    st.resource_counts["mean_blocks_std_error"] = std::sqrt(std::max(0.0, blocks_sq / n - mean * mean) / n);
  } else {
    st.resource_counts["bell_pairs"] = static_cast<double>(plan_for(spec).pairs.size());
    st.resource_counts["mean_m_minus"] = m_minus_sum / n;
  }
  return st;
}

// Expected blocks consumed by an open chain of `blocks` blocks under the
// failure policy, by exhaustive enumeration of fusion outcomes with merged
// states, run until the unresolved probability mass is below `tol`.
struct ChainExpectation {
  double mean_blocks = 0;
  double unresolved_mass = 0;
  int depth = 0;
};

inline ChainExpectation enumerate_chain_blocks(int blocks, int max_depth, double tol = 1e-13) {
  // mass[L] = probability of having a chain of length L with `cost` accumulated.
  std::vector<double> mass(static_cast<std::size_t>(blocks + 1), 0.0), cost(mass);
  mass[1] = 1.0;
  cost[1] = 1.0;  // expected blocks weighted by mass
  ChainExpectation out;
  for (int depth = 0; depth < max_depth; ++depth) {
    std::vector<double> nm(mass.size(), 0.0), nc(mass.size(), 0.0);
    for (int L = 1; L < blocks; ++L) {
      const double m = mass[static_cast<std::size_t>(L)], c = cost[static_cast<std::size_t>(L)];
      if (m == 0) continue;
      const double c1 = c + m;  // one more block built for the attempt
      nm[static_cast<std::size_t>(L + 1)] += m / 2;
      nc[static_cast<std::size_t>(L + 1)] += c1 / 2;
      const int back = L - 1 == 0 ? 1 : L - 1;
      const double extra = L - 1 == 0 ? m / 2 : 0;  // rebuild the first block
      nm[static_cast<std::size_t>(back)] += m / 2;
      nc[static_cast<std::size_t>(back)] += c1 / 2 + extra;
    }
    nm[static_cast<std::size_t>(blocks)] += mass[static_cast<std::size_t>(blocks)];
    nc[static_cast<std::size_t>(blocks)] += cost[static_cast<std::size_t>(blocks)];
    mass = std::move(nm);
    cost = std::move(nc);
    out.depth = depth + 1;
    double open = 0;
    for (int L = 1; L < blocks; ++L) open += mass[static_cast<std::size_t>(L)];
    out.unresolved_mass = open;
    if (open < tol) break;
  }
  out.mean_blocks = cost[static_cast<std::size_t>(blocks)];
  return out;
}

}  // namespace pwqs
