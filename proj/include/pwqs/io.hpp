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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pwqs/classify.hpp"
#include "pwqs/graph.hpp"
#include "pwqs/minors.hpp"
#include "pwqs/optics.hpp"
#include "pwqs/protocols.hpp"
#include "pwqs/state_vector.hpp"

namespace pwqs::io {

using json = nlohmann::json;  // std::map-backed: keys come out sorted

inline constexpr const char* kSchemaVersion = "1.0";

// 12 significant digits, so dumps are bit-stable.
inline double round12(double x) {
  if (!std::isfinite(x) || x == 0) return x == 0 ? 0.0 : x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::stod(buf);
}

inline json complex_json(cd a) { return json::array({round12(a.real()), round12(a.imag())}); }

// ---- graphs ----

inline json to_json(const Graph& g) {
  json e = json::array();
  for (auto [u, v] : g.edges()) e.push_back({u, v});
  return {{"vertices", g.vertices()}, {"edges", e}};
}

inline Graph graph_from_json(const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges")) throw Error("graph JSON needs vertices and edges");
  Graph g;
  for (const auto& v : j.at("vertices")) g.add_vertex(v.get<int>());
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw Error("graph edge must be a pair");
    g.add_edge(e[0].get<int>(), e[1].get<int>());
  }
  return g;
}

inline std::string to_dot(const Graph& g) {
  std::ostringstream os;
  os << "graph G {\n";
  for (int v : g.vertices()) os << "  " << v << ";\n";
  for (auto [u, v] : g.edges()) os << "  " << u << " -- " << v << ";\n";
  os << "}\n";
  return os.str();
}

// Reads the subset of DOT written by to_dot.
inline Graph graph_from_dot(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  Graph g;
  bool open = false;
  while (std::getline(is, line)) {
    auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    line = line.substr(b);
    if (!open) {
      if (line.rfind("graph", 0) != 0 || line.find('{') == std::string::npos) throw Error("DOT must start with 'graph ... {'");
      open = true;
      continue;
    }
    if (line[0] == '}') return g;
    if (line.back() == ';') line.pop_back();
    auto dash = line.find("--");
    try {
      if (dash == std::string::npos) {
        g.add_vertex(std::stoi(line));
      } else {
        const int u = std::stoi(line.substr(0, dash)), v = std::stoi(line.substr(dash + 2));
        g.add_vertex(u);
        g.add_vertex(v);
        g.add_edge(u, v);
      }
    } catch (const std::invalid_argument&) {
      throw Error("bad DOT line: " + line);
    }
  }
  throw Error("DOT graph is not closed");
}

// ---- states ----

inline json to_json(const PhotonicState& s) {
  json terms = json::array();
  for (const auto& [pat, amp] : s.terms()) {
    json occ = json::array();
    for (auto c : pat) occ.push_back(static_cast<int>(c));
    json modes = json::array();
    for (int p = 0; p < s.ports(); ++p) {
      for (int k = 0; k < pat[mode_index(p, Pol::H)]; ++k) modes.push_back(std::to_string(p) + "H");
      for (int k = 0; k < pat[mode_index(p, Pol::V)]; ++k) modes.push_back(std::to_string(p) + "V");
    }
    terms.push_back({{"occupation", occ}, {"modes", modes}, {"amplitude", complex_json(amp)}});
  }
  return {{"kind", "photonic_state"}, {"ports", s.ports()}, {"terms", terms}};
}

inline json to_json(const StateVector& s) {
  json amps = json::array();
  for (const cd& a : s.amplitudes) amps.push_back(complex_json(a));
  return {{"kind", "state_vector"}, {"qubits", s.qubits}, {"amplitudes", amps}};
}

inline std::string state_csv(const PhotonicState& s) {
  std::ostringstream os;
  os << "modes,re,im\n";
  const json dump = to_json(s);
  for (const auto& t : dump.at("terms")) {
    std::string m;
    for (const auto& x : t.at("modes")) m += (m.empty() ? "" : " ") + x.get<std::string>();
    os << m << "," << t.at("amplitude")[0].dump() << "," << t.at("amplitude")[1].dump() << "\n";
  }
  return os.str();
}

// ---- circuits ----

inline json to_json(const SourceSpec& s) {
  switch (s.kind) {
    case SourceSpec::Kind::Plus: return {{"plus", s.a}};
    case SourceSpec::Kind::BellPsi: return {{"bell_psi", {s.a, s.b}}};
    default: return {{"gbell", {s.a, s.b}}};
  }
}

inline json to_json(const Circuit& c) {
  json src = json::array(), el = json::array(), meas = json::array();
  for (const auto& s : c.sources) src.push_back(to_json(s));
  for (const auto& e : c.elements)
    el.push_back(e.kind == OpticalElement::Kind::PBS ? json{{"pbs", {e.a, e.b}}} : json{{"hwp", {e.a, round12(e.angle)}}});
  for (auto [p, b] : c.measure) meas.push_back({{"port", p}, {"basis", b == PolBasis::HV ? "HV" : "PM"}});
  return {{"sources", src}, {"elements", el}, {"postselect", c.postselect}, {"measure", meas}};
}

inline Circuit circuit_from_json(const json& j) {
  Circuit c;
  for (const auto& s : j.at("sources")) {
    if (s.contains("plus")) c.sources.push_back(SourceSpec::plus(s.at("plus").get<int>()));
    else if (s.contains("bell_psi")) c.sources.push_back(SourceSpec::bell_psi(s.at("bell_psi")[0].get<int>(), s.at("bell_psi")[1].get<int>()));
    else if (s.contains("gbell")) c.sources.push_back(SourceSpec::gbell(s.at("gbell")[0].get<int>(), s.at("gbell")[1].get<int>()));
    else throw Error("unknown source kind");
  }
  for (const auto& e : j.at("elements")) {
    if (e.contains("pbs")) c.elements.push_back(OpticalElement::pbs(e.at("pbs")[0].get<int>(), e.at("pbs")[1].get<int>()));
    else if (e.contains("hwp")) c.elements.push_back(OpticalElement::hwp(e.at("hwp")[0].get<int>(), e.at("hwp")[1].get<double>()));
    else throw Error("unknown optical element");
  }
  if (j.contains("postselect")) c.postselect = j.at("postselect").get<std::vector<int>>();
  if (j.contains("measure"))
    for (const auto& m : j.at("measure")) {
      const std::string b = m.at("basis").get<std::string>();
      if (b != "HV" && b != "PM") throw Error("basis must be HV or PM");
      c.measure.emplace_back(m.at("port").get<int>(), b == "HV" ? PolBasis::HV : PolBasis::PM);
    }
  return c;
}

// ---- protocols ----

inline json to_json(const ProtocolResult& r) {
  json rec = json::array(), corr = json::array(), inter = json::object(), hist = json::array();
  for (const auto& m : r.record) rec.push_back({{"photon", m.photon}, {"basis", std::string(1, to_char(m.basis))}, {"outcome", m.label()}});
  for (const auto& c : r.corrections) corr.push_back({{"user", c.user}, {"op", c.op}});
  for (const auto& [k, g] : r.intermediates) inter[k] = to_json(g);
  for (const auto& e : r.history) hist.push_back({{"joint", e.joint}, {"success", e.success}});
  return {{"protocol", r.protocol},
          {"final_graph", to_json(r.final_graph)},
          {"exponent", r.exponent},
          {"probability", round12(r.probability())},
          {"record", rec},
          {"m_minus", r.m_minus},
          {"corrections", corr},
          {"intermediates", inter},
          {"success", r.success},
          {"blocks_consumed", r.blocks_consumed},
          {"fusion_attempts", r.fusion_attempts},
          {"history", hist},
          {"class", classify_graph(r.final_graph).label}};
}

inline json to_json(const ProtocolSpec& s) {
  json blocks = json::array();
  for (BlockKind k : s.blocks) blocks.push_back(to_string(k));
  json plan = json::array();
  for (char c : s.plan) plan.push_back(std::string(1, c));
  return {{"protocol", s.protocol}, {"M", s.M}, {"server", s.server}, {"layout", s.layout},
          {"close", s.close}, {"blocks", blocks}, {"plan", plan}};
}

inline ProtocolSpec protocol_spec_from_json(const json& j) {
  ProtocolSpec s;
  s.protocol = j.at("protocol").get<std::string>();
  s.M = j.value("M", 0);
  s.server = j.value("server", false);
  s.layout = j.value("layout", std::string());
  s.close = j.value("close", false);
  if (j.contains("blocks"))
    for (const auto& b : j.at("blocks")) s.blocks.push_back(block_from_string(b.get<std::string>()));
  if (j.contains("plan")) {
    if (j.at("plan").is_string()) s.plan = j.at("plan").get<std::string>();
    else
      for (const auto& p : j.at("plan")) s.plan += p.get<std::string>();
  }
  return s;
}

inline json to_json(const MonteCarloStats& st) {
  json rc = json::object();
  for (const auto& [k, v] : st.resource_counts) rc[k] = round12(v);
  return {{"trials", st.trials},
          {"successes", st.successes},
          {"estimated_probability", round12(st.estimated_probability)},
          {"std_error", round12(st.std_error)},
          {"exact_probability", round12(st.exact_probability)},
          {"resource_counts", rc},
          {"rng_seed", st.rng_seed},
          {"within_3sigma", st.within_3sigma},
          {"within_5sigma", st.within_5sigma}};
}

inline std::string trials_csv(const std::vector<TrialLog>& log) {
  std::ostringstream os;
  os << "trial,success,blocks,attempts,m_minus\n";
  for (const auto& t : log) os << t.trial << "," << (t.success ? 1 : 0) << "," << t.blocks << "," << t.attempts << "," << t.m_minus << "\n";
  return os.str();
}

// ---- minors ----

inline json to_json(const Multigraph4R& f) {
  std::map<Edge, int> mult;
  for (auto [a, b] : f.edges) ++mult[{std::min(a, b), std::max(a, b)}];
  json e = json::array();
  for (auto& [edge, m] : mult) e.push_back({edge.first, edge.second, m});
  return {{"vertices", f.vertices}, {"edges", e}};
}

inline Multigraph4R multigraph_from_json(const json& j) {
  Multigraph4R f;
  f.vertices = j.at("vertices").get<std::vector<int>>();
  for (const auto& e : j.at("edges")) {
    const int m = e.size() > 2 ? e[2].get<int>() : 1;
    require(m >= 1, "edge multiplicity must be positive");
    for (int k = 0; k < m; ++k) f.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return f;
}

inline json to_json(const ShapeClass& c) {
  json comps = json::array();
  for (const auto& w : c.components) {
    json leaves = json::object();
    for (const auto& [v, ls] : w.leaves) leaves[std::to_string(v)] = ls;
    json edges = json::array();
    for (auto [u, v] : w.edges) edges.push_back({u, v});
    comps.push_back({{"kind", w.kind}, {"vertices", w.vertices}, {"spine", w.spine}, {"leaves", leaves}, {"edges", edges}});
  }
  return {{"label", c.label}, {"components", comps}, {"contiguous", c.contiguous}};
}

inline json to_json(const CrosscheckReport& r) {
  return {{"word", r.word}, {"resource", r.resource}, {"n", r.n}, {"predicted", to_json(r.predicted)},
          {"simulated", to_json(r.simulated)}, {"equivalent", r.equivalent}};
}

// ---- reports ----

inline json make_report(const std::string& verb, const json& inputs, const json& results, std::optional<bool> pass,
                        double seconds) {
  json r = {{"schema_version", kSchemaVersion}, {"verb", verb}, {"inputs", inputs}, {"results", results},
            {"timing", {{"wall_seconds", round12(seconds)}}}};
  if (pass) r["pass"] = *pass;
  return r;
}

// Required top-level fields and their JSON types.
inline json report_schema() {
  return {{"schema_version", "string"}, {"verb", "string"}, {"inputs", "object"}, {"results", "object"},
          {"timing", "object"}, {"pass", "boolean?"}};
}

inline bool validate_report(const json& r, std::string* why = nullptr) {
  auto fail = [why](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (!r.is_object()) return fail("report is not an object");
  const json schema = report_schema();
  for (auto it = schema.begin(); it != schema.end(); ++it) {
    const std::string& key = it.key();
    std::string t = it.value().get<std::string>();
    const bool optional = !t.empty() && t.back() == '?';
    if (optional) t.pop_back();
    if (!r.contains(key)) {
      if (optional) continue;
      return fail("missing " + key);
    }
    const json& v = r.at(key);
    const bool ok = (t == "string" && v.is_string()) || (t == "object" && v.is_object()) || (t == "boolean" && v.is_boolean());
    if (!ok) return fail(key + " must be " + t);
  }
  if (r.at("schema_version") != kSchemaVersion) return fail("unknown schema version");
  if (!r.at("timing").contains("wall_seconds")) return fail("timing.wall_seconds missing");
  static const std::set<std::string> verbs{"simulate", "classify", "verify", "montecarlo", "export"};
  if (!verbs.count(r.at("verb").get<std::string>())) return fail("unknown verb");
  return true;
}

// Write to a sibling temporary, then rename over the target.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw Error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace pwqs::io
