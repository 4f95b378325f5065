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
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pwqs/io.hpp"
#include "pwqs/verify.hpp"

namespace {

using json = nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string protocol;
  int users = 0;
  bool server = false;
  std::string layout;
  bool close = false;
  std::string blocks;
  std::string plan;
  std::string outcomes;
  std::string word;
  std::string resource;
  int n = 0;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out;
  std::string suite = "all";
  std::string csv;
  std::string kind;
  std::string graph;
  std::string circuit;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

void check_word(const std::string& w, const std::string& flag) {
  if (w.empty()) throw UsageError(flag + " must not be empty");
  for (char c : w)
    if (c != 'X' && c != 'Y' && c != 'Z') throw UsageError(flag + " may only contain X, Y, Z");
}

pwqs::ProtocolSpec make_spec(const Options& o) {
  static const std::set<std::string> known{"ghz", "path", "cycle", "caterpillar", "chain", "block"};
  if (!known.count(o.protocol)) throw UsageError("--protocol must be one of ghz, path, cycle, caterpillar, chain, block");
  pwqs::ProtocolSpec s;
  s.protocol = o.protocol;
  s.M = o.users;
  s.server = o.server;
  s.layout = o.layout;
  s.close = o.close;
  s.plan = o.plan;
  try {
    for (const auto& b : split(o.blocks, ',')) s.blocks.push_back(pwqs::block_from_string(b));
  } catch (const pwqs::Error& e) {
    throw UsageError(e.what());
  }
  if ((s.protocol == "ghz" || s.protocol == "path" || s.protocol == "cycle") && s.M <= 0)
    throw UsageError("--users is required for " + s.protocol);
  if (s.protocol == "caterpillar" && s.layout.empty()) throw UsageError("--layout is required for caterpillar");
  if (s.protocol == "block" && s.blocks.size() != 1) throw UsageError("block needs exactly one --blocks entry");
  if (s.protocol == "chain" && s.blocks.size() < 2) throw UsageError("chain needs at least two --blocks entries");
  if (s.protocol == "caterpillar") s.M = static_cast<int>(s.layout.size());
  return s;
}

std::vector<bool> parse_outcomes(const std::string& s) {
  std::vector<bool> out;
  for (char c : s) {
    if (c != '+' && c != '-') throw UsageError("--outcomes may only contain + and -");
    out.push_back(c == '-');
  }
  return out;
}

pwqs::ProtocolResult simulate(const pwqs::ProtocolSpec& s, const std::vector<bool>& outcomes) {
  if (s.protocol == "ghz") return pwqs::run_ghz(s.M, s.server, outcomes);
  if (s.protocol == "path") return pwqs::run_path(s.M, s.server, outcomes);
  if (s.protocol == "cycle") return pwqs::run_cycle(s.M, outcomes);
  if (s.protocol == "caterpillar") return pwqs::run_caterpillar(s.layout, s.close, outcomes);
  if (s.protocol == "block") return pwqs::run_plan("block", pwqs::block_plan(s.blocks.front()), outcomes);
  return pwqs::fuse_chain(s.blocks, s.plan, s.close);
}

pwqs::Graph named_graph(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw UsageError("--graph expects family:size, e.g. path:3");
  const std::string family = spec.substr(0, colon);
  int n = 0;
  try {
    n = std::stoi(spec.substr(colon + 1));
  } catch (const std::exception&) {
    throw UsageError("bad size in --graph");
  }
  if (n < 1) throw UsageError("graph size must be positive");
  if (family == "path") return pwqs::path_graph(n);
  if (family == "cycle") return pwqs::cycle_graph(n);
  if (family == "complete") return pwqs::complete_graph(n);
  if (family == "star") return pwqs::star_graph(1, pwqs::label_range(n - 1, 2));
  throw UsageError("unknown graph family: " + family);
}

pwqs::Circuit named_circuit(const std::string& name, int n) {
  if (name == "cz") return pwqs::cz_gate_circuit();
  if (n < 1) throw UsageError("--n is required for circuit " + name);
  if (name == "ghz") return pwqs::ghz_chain_circuit(n);
  if (name == "weave") return pwqs::path_weaving_circuit(n);
  throw UsageError("--circuit must be ghz, weave or cz");
}

std::optional<std::filesystem::path> target(const Options& o, const std::string& stem) {
  if (!o.out.empty()) return std::filesystem::path(o.out);
  if (const char* dir = std::getenv("PWQS_OUT_DIR"); dir && *dir) return std::filesystem::path(dir) / stem;
  return std::nullopt;
}

int emit(const Options& o, const std::string& verb, const json& report) {
  std::string why;
  if (!pwqs::io::validate_report(report, &why)) throw pwqs::Error("internal: report invalid: " + why);
  const std::string text = report.dump(2) + "\n";
  if (auto path = target(o, verb + ".json")) pwqs::io::atomic_write(*path, text);
  std::cout << text;
  return report.contains("pass") && !report.at("pass").get<bool>() ? 1 : 0;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_simulate(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  if (o.format != "json") throw UsageError("simulate only supports --format json");
  const pwqs::ProtocolSpec s = make_spec(o);
  const auto outcomes = parse_outcomes(o.outcomes);
  json inputs = pwqs::io::to_json(s);
  inputs["outcomes"] = o.outcomes;
  const json result = pwqs::io::to_json(simulate(s, outcomes));
  return emit(o, "simulate", pwqs::io::make_report("simulate", inputs, result, std::nullopt, since(t0)));
}

int run_classify(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  check_word(o.word, "--word");
  json inputs = {{"word", o.word}, {"close", o.close}, {"resource", o.resource}, {"n", o.n}};
  if (o.resource.empty()) {
    const pwqs::Graph g = pwqs::predict_graph(o.word, o.close);
    const json result = {{"predicted", pwqs::io::to_json(pwqs::classify_graph(g))}, {"graph", pwqs::io::to_json(g)}};
    return emit(o, "classify", pwqs::io::make_report("classify", inputs, result, std::nullopt, since(t0)));
  }
  if (o.resource != "zigzag" && o.resource != "honeycomb" && o.resource != "path_every_third")
    throw UsageError("--resource must be zigzag, honeycomb or path_every_third");
  if (o.n <= 0) throw UsageError("--n is required with --resource");
  const pwqs::CrosscheckReport rep = pwqs::crosscheck_report(o.n, o.word, o.resource);
  return emit(o, "classify", pwqs::io::make_report("classify", inputs, pwqs::io::to_json(rep), rep.equivalent, since(t0)));
}

int run_verify(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> names;
  if (o.suite == "all") names = pwqs::verify::suite_names();
  else {
    const auto all = pwqs::verify::suite_names();
    if (std::find(all.begin(), all.end(), o.suite) == all.end()) throw UsageError("unknown suite: " + o.suite);
    names = {o.suite};
  }
  std::vector<int> sizes{6, 8, 10};
  if (o.n > 0) {
    if (o.n % 2 != 0 || o.n < 4) throw UsageError("--n for appendix-b must be even and at least 4");
    sizes = {o.n};
  }
  json suites = json::array();
  bool pass = true;
  for (const auto& name : names) {
    const pwqs::verify::SuiteResult r = pwqs::verify::run_suite(name, sizes);
    pass = pass && r.pass;
    json j = pwqs::verify::to_json(r);
    j.erase("seconds");
    suites.push_back(j);
  }
  const json inputs = {{"suite", o.suite}, {"n", o.n}};
  return emit(o, "verify", pwqs::io::make_report("verify", inputs, {{"suites", suites}}, pass, since(t0)));
}

int run_montecarlo(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const pwqs::ProtocolSpec s = make_spec(o);
  if (o.trials < 1) throw UsageError("--trials must be positive");
  std::vector<pwqs::TrialLog> log;
  const pwqs::MonteCarloStats st = pwqs::monte_carlo(s, o.trials, o.seed, o.csv.empty() ? nullptr : &log);
  if (!o.csv.empty()) pwqs::io::atomic_write(o.csv, pwqs::io::trials_csv(log));
  json inputs = pwqs::io::to_json(s);
  inputs["trials"] = o.trials;
  inputs["seed"] = o.seed;
  return emit(o, "montecarlo", pwqs::io::make_report("montecarlo", inputs, pwqs::io::to_json(st), st.within_3sigma, since(t0)));
}

int run_export(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string content, ext = o.format;
  auto unsupported = [&] { return UsageError("unsupported export: " + o.kind + " as " + o.format); };
  if (o.kind == "graph") {
    pwqs::Graph g;
    if (!o.graph.empty()) g = named_graph(o.graph);
    else if (!o.protocol.empty()) g = simulate(make_spec(o), parse_outcomes(o.outcomes)).final_graph;
    else throw UsageError("export graph needs --graph or --protocol");
    if (o.format == "json") content = pwqs::io::to_json(g).dump(2) + "\n";
    else if (o.format == "dot") content = pwqs::io::to_dot(g);
    else throw unsupported();
  } else if (o.kind == "state") {
    const pwqs::CircuitRun run = pwqs::run_circuit(named_circuit(o.circuit, o.n));
    if (o.format == "json") content = pwqs::io::to_json(run.state).dump(2) + "\n";
    else if (o.format == "csv") content = pwqs::io::state_csv(run.state);
    else throw unsupported();
  } else if (o.kind == "circuit") {
    if (o.format != "json") throw unsupported();
    content = pwqs::io::to_json(named_circuit(o.circuit, o.n)).dump(2) + "\n";
  } else if (o.kind == "multigraph") {
    if (o.format != "json") throw unsupported();
    if (o.n < 3) throw UsageError("--n must be at least 3 for a circulant multigraph");
    content = pwqs::io::to_json(pwqs::build_circulant(o.n)).dump(2) + "\n";
  } else if (o.kind == "result") {
    if (o.format != "json") throw unsupported();
    content = pwqs::io::to_json(simulate(make_spec(o), parse_outcomes(o.outcomes))).dump(2) + "\n";
  } else {
    throw UsageError("--kind must be graph, state, circuit, multigraph or result");
  }
  const json inputs = {{"kind", o.kind}, {"format", o.format}, {"graph", o.graph}, {"circuit", o.circuit},
                       {"protocol", o.protocol}, {"n", o.n}};
  json results = {{"kind", o.kind}, {"format", o.format}};
  if (auto path = target(o, "export." + ext)) {
    pwqs::io::atomic_write(*path, content);
    results["path"] = path->string();
  }
  results["content"] = content;
  // The report goes to stdout; --out holds the artifact itself.
  const json report = pwqs::io::make_report("export", inputs, results, std::nullopt, since(t0));
  std::string why;
  if (!pwqs::io::validate_report(report, &why)) throw pwqs::Error("internal: report invalid: " + why);
  std::cout << report.dump(2) << "\n";
  return 0;
}

void add_protocol_flags(CLI::App* c, Options& o) {
  c->add_option("--protocol", o.protocol, "ghz, path, cycle, caterpillar, chain or block");
  c->add_option("--users", o.users, "number of users M");
  c->add_flag("--server", o.server, "server keeps a photon in the output");
  c->add_option("--layout", o.layout, "caterpillar layout, letters L and S");
  c->add_flag("--close", o.close, "close the cycle");
  c->add_option("--blocks", o.blocks, "comma-separated Path4, Star4, Three");
  c->add_option("--plan", o.plan, "per-joint letters X, Y, Z or - for chains");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photonic weaving and graph-state distribution simulator"};
  app.require_subcommand(1);
  Options o;

  auto* sim = app.add_subcommand("simulate", "run a distribution protocol");
  add_protocol_flags(sim, o);
  sim->add_option("--outcomes", o.outcomes, "measurement outcomes, + or - per measured photon");
  sim->add_option("--format", o.format, "json");
  sim->add_option("--out", o.out, "report file");

  auto* cls = app.add_subcommand("classify", "predict the graph a measurement word leaves behind");
  cls->add_option("--word", o.word, "letters X, Y, Z")->required();
  cls->add_flag("--close", o.close, "closed zigzag");
  cls->add_option("--resource", o.resource, "zigzag, honeycomb or path_every_third: crosscheck against simulation");
  cls->add_option("--n", o.n, "resource size");
  cls->add_option("--out", o.out, "report file");

  auto* ver = app.add_subcommand("verify", "run verification suites");
  ver->add_option("--suite", o.suite, "all or a suite name");
  ver->add_option("--n", o.n, "zigzag size for appendix-b");
  ver->add_option("--out", o.out, "report file");

  auto* mc = app.add_subcommand("montecarlo", "seeded Monte Carlo estimate of a success probability");
  add_protocol_flags(mc, o);
  mc->add_option("--trials", o.trials, "number of trials");
  mc->add_option("--seed", o.seed, "RNG seed")->required();
  mc->add_option("--csv", o.csv, "per-trial CSV log");
  mc->add_option("--out", o.out, "report file");

  auto* ex = app.add_subcommand("export", "write a graph, state, circuit or multigraph");
  ex->add_option("--kind", o.kind, "graph, state, circuit, multigraph or result")->required();
  ex->add_option("--format", o.format, "json, dot or csv");
  ex->add_option("--graph", o.graph, "family:size, e.g. path:3");
  ex->add_option("--circuit", o.circuit, "ghz, weave or cz");
  ex->add_option("--n", o.n, "size");
  add_protocol_flags(ex, o);
  ex->add_option("--outcomes", o.outcomes, "measurement outcomes");
  ex->add_option("--out", o.out, "artifact file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*sim) return run_simulate(o);
    if (*cls) return run_classify(o);
    if (*ver) return run_verify(o);
    if (*mc) return run_montecarlo(o);
    return run_export(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
