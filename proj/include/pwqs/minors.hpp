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
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pwqs/classify.hpp"
#include "pwqs/errors.hpp"
#include "pwqs/graph.hpp"
#include "pwqs/local_equivalence.hpp"

namespace pwqs {

inline constexpr int kMaxCrosscheckVertices = 12;

// 4-regular multigraph; parallel edges repeat, a loop counts twice.
struct Multigraph4R {
  std::vector<int> vertices;
  std::vector<Edge> edges;

  std::map<int, int> degrees() const {
    std::map<int, int> d;
    for (int v : vertices) d[v] = 0;
    for (auto [a, b] : edges) {
      ++d[a];
      ++d[b];
    }
    return d;
  }
  bool is_4_regular() const {
    for (auto [v, d] : degrees())
      if (d != 4) return false;
    return true;
  }
  bool operator==(const Multigraph4R&) const = default;
};

// Cyclic vertex sequence; step j uses an edge between sequence[j] and sequence[j+1].
struct EulerianTour {
  std::vector<int> sequence;
};

inline Multigraph4R build_circulant(int n) {
  if (n < 5) throw Error("circulant needs n >= 5");
  Multigraph4R f;
  for (int i = 0; i < n; ++i) f.vertices.push_back(i);
  for (int i = 0; i < n; ++i) {
    f.edges.emplace_back(std::min(i, (i + 1) % n), std::max(i, (i + 1) % n));
    f.edges.emplace_back(std::min(i, (i + 2) % n), std::max(i, (i + 2) % n));
  }
  return f;
}

// 0, 2, 1, 3, 2, 4, ...
inline EulerianTour canonical_tour(int n) {
  if (n < 6 || n % 2) throw Error("canonical tour needs even n >= 6");
  EulerianTour t;
  for (int i = 0; i < n; ++i) {
    t.sequence.push_back(i);
    t.sequence.push_back((i + 2) % n);
  }
  return t;
}

inline bool is_valid_tour(const Multigraph4R& f, const EulerianTour& t) {
  std::map<Edge, int> want;
  for (auto [a, b] : f.edges) ++want[{std::min(a, b), std::max(a, b)}];
  std::map<Edge, int> used;
  const std::size_t L = t.sequence.size();
  if (L != f.edges.size()) return false;
  for (std::size_t j = 0; j < L; ++j) {
    const int a = t.sequence[j], b = t.sequence[(j + 1) % L];
    ++used[{std::min(a, b), std::max(a, b)}];
  }
  return used == want;
}

namespace detail {

inline std::vector<std::vector<int>> multigraph_components(const Multigraph4R& f) {
  std::map<int, std::vector<int>> adj;
  for (int v : f.vertices) adj[v];
  for (auto [a, b] : f.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::set<int> seen;
  std::vector<std::vector<int>> out;
  for (auto& [s, unused] : adj) {
    if (seen.count(s)) continue;
    std::vector<int> comp, stack{s};
    seen.insert(s);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (int w : adj[v])
        if (seen.insert(w).second) stack.push_back(w);
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(comp);
  }
  return out;
}

}  // namespace detail

// Hierholzer from the smallest vertex, taking edges in list order.
inline EulerianTour find_tour(const Multigraph4R& f) {
  require(!f.vertices.empty(), "multigraph has no vertices");
  if (detail::multigraph_components(f).size() != 1) throw Error("multigraph is disconnected");
  for (auto [v, d] : f.degrees())
    if (d % 2) throw Error("vertex " + std::to_string(v) + " has odd degree");
  std::map<int, std::vector<std::pair<int, int>>> adj;  // vertex -> (edge id, other end)
  for (std::size_t i = 0; i < f.edges.size(); ++i) {
    auto [a, b] = f.edges[i];
    adj[a].emplace_back(static_cast<int>(i), b);
    adj[b].emplace_back(static_cast<int>(i), a);
  }
  for (auto& [v, list] : adj) std::reverse(list.begin(), list.end());
  std::vector<bool> used(f.edges.size(), false);
  const int start = *std::min_element(f.vertices.begin(), f.vertices.end());
  std::vector<int> stack{start}, circuit;
  while (!stack.empty()) {
    const int u = stack.back();
    auto& list = adj[u];
    while (!list.empty() && used[static_cast<std::size_t>(list.back().first)]) list.pop_back();
    if (list.empty()) {
      circuit.push_back(u);
      stack.pop_back();
    } else {
      auto [id, w] = list.back();
      used[static_cast<std::size_t>(id)] = true;
      stack.push_back(w);
    }
  }
  std::reverse(circuit.begin(), circuit.end());
  EulerianTour t;
  t.sequence.assign(circuit.begin(), circuit.end() - 1);
  if (f.edges.empty()) t.sequence = {start};
  return t;
}

// u ~ v iff their two occurrences alternate around the tour.
inline Graph interlacement(const EulerianTour& t) {
  std::map<int, std::vector<int>> pos;
  for (std::size_t i = 0; i < t.sequence.size(); ++i) pos[t.sequence[i]].push_back(static_cast<int>(i));
  Graph g;
  for (auto& [v, p] : pos) {
    if (p.size() != 2 && !(t.sequence.size() == 1 && p.size() == 1)) throw Error("each vertex must appear twice in the tour");
    g.add_vertex(v);
  }
  for (auto a = pos.begin(); a != pos.end(); ++a)
    for (auto b = std::next(a); b != pos.end(); ++b) {
      if (a->second.size() != 2) continue;
      const int lo = a->second[0], hi = a->second[1];
      int inside = 0;
      for (int q : b->second) inside += (lo < q && q < hi) ? 1 : 0;
      if (inside == 1) g.add_edge(a->first, b->first);
    }
  return g;
}

// Replaces each measured vertex by its fragment. At a vertex visited twice
// with tour edges in1, out1, in2, out2 the fragments pair
//   Z: in1-out1, in2-out2   Y: in1-in2, out1-out2   X: in1-out2, out1-in2.
// Strands are followed through measured vertices until they reach survivors.
inline Multigraph4R apply_word(const Multigraph4R& f, const EulerianTour& t, const std::vector<int>& measured,
                               const std::string& word) {
  if (measured.size() != word.size()) throw Error("word length must equal the number of measured vertices");
  if (!is_valid_tour(f, t)) throw Error("tour is not an Eulerian tour of the multigraph");
  const std::size_t L = t.sequence.size();
  // Half-edge h = 2 * j + side: side 0 sits at sequence[j], side 1 at sequence[j+1].
  auto at = [&](std::size_t h) { return t.sequence[(h / 2 + h % 2) % L]; };
  std::map<int, char> letter;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    const char c = word[i];
    require(c == 'X' || c == 'Y' || c == 'Z', "word letters must be X, Y or Z");
    require(std::find(f.vertices.begin(), f.vertices.end(), measured[i]) != f.vertices.end(), "measured vertex not in multigraph");
    require(letter.emplace(measured[i], c).second, "vertex measured twice");
  }
  std::map<int, std::vector<std::size_t>> visits;  // measured vertex -> positions j
  for (std::size_t j = 0; j < L; ++j)
    if (letter.count(t.sequence[j])) visits[t.sequence[j]].push_back(j);
  std::vector<std::size_t> partner(2 * L);
  for (auto& [v, js] : visits) {
    require(js.size() == 2, "measured vertex must be visited twice");
    const std::size_t in1 = 2 * ((js[0] + L - 1) % L) + 1, out1 = 2 * js[0];
    const std::size_t in2 = 2 * ((js[1] + L - 1) % L) + 1, out2 = 2 * js[1];
    std::pair<std::size_t, std::size_t> p1, p2;
    switch (letter.at(v)) {
      case 'Z': p1 = {in1, out1}; p2 = {in2, out2}; break;
      case 'Y': p1 = {in1, in2}; p2 = {out1, out2}; break;
      default: p1 = {in1, out2}; p2 = {out1, in2}; break;
    }
    partner[p1.first] = p1.second;
    partner[p1.second] = p1.first;
    partner[p2.first] = p2.second;
    partner[p2.second] = p2.first;
  }
  Multigraph4R out;
  for (int v : f.vertices)
    if (!letter.count(v)) out.vertices.push_back(v);
  std::vector<bool> done(2 * L, false);
  for (std::size_t h = 0; h < 2 * L; ++h) {
    if (done[h] || letter.count(at(h))) continue;
    std::size_t cur = h;
    done[cur] = true;
    for (;;) {
      const std::size_t other = cur ^ 1;  // far end of the same edge
      done[other] = true;
      if (!letter.count(at(other))) {
        out.edges.emplace_back(std::min(at(h), at(other)), std::max(at(h), at(other)));
        break;
      }
      cur = partner[other];
      done[cur] = true;
    }
  }
  return out;
}

inline Multigraph4R apply_word(const Multigraph4R& f, const std::vector<int>& measured, const std::string& word) {
  const int n = static_cast<int>(f.vertices.size());
  if (n >= 6 && n % 2 == 0 && f == build_circulant(n)) return apply_word(f, canonical_tour(n), measured, word);
  return apply_word(f, find_tour(f), measured, word);
}

// Union over components of the interlacement graph of one tour per component.
inline Graph transition_minor_graph(const Multigraph4R& f) {
  Graph g;
  for (const auto& comp : detail::multigraph_components(f)) {
    Multigraph4R part;
    part.vertices = comp;
    std::set<int> in(comp.begin(), comp.end());
    for (auto e : f.edges)
      if (in.count(e.first)) part.edges.push_back(e);
    g = disjoint_union(g, interlacement(find_tour(part)));
  }
  return g;
}

struct LeafExpansion {
  Multigraph4R graph;
  EulerianTour tour;
  int leaf = 0;  // v1: the first visit's edges plus the double edge
  int kept = 0;  // v2: keeps the label of v and the second visit's edges
};

inline LeafExpansion leaf_expansion(const Multigraph4R& f, const EulerianTour& t, int v) {
  if (std::find(f.vertices.begin(), f.vertices.end(), v) == f.vertices.end()) throw Error("unknown vertex " + std::to_string(v));
  require(is_valid_tour(f, t), "tour is not an Eulerian tour of the multigraph");
  const int v1 = *std::max_element(f.vertices.begin(), f.vertices.end()) + 1;
  const std::size_t L = t.sequence.size();
  std::vector<std::size_t> js;
  for (std::size_t j = 0; j < L; ++j)
    if (t.sequence[j] == v) js.push_back(j);
  require(js.size() == 2, "vertex must be visited twice");
  LeafExpansion out;
  out.leaf = v1;
  out.kept = v;
  for (std::size_t j = 0; j < L; ++j) {
    if (j == js[0]) {
      out.tour.sequence.insert(out.tour.sequence.end(), {v1, v, v1});
    } else {
      out.tour.sequence.push_back(t.sequence[j]);
    }
  }
  out.graph.vertices = f.vertices;
  out.graph.vertices.push_back(v1);
  const std::size_t M = out.tour.sequence.size();
  for (std::size_t j = 0; j < M; ++j) {
    const int a = out.tour.sequence[j], b = out.tour.sequence[(j + 1) % M];
    out.graph.edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  return out;
}

// ---- resources and the measurement-pattern prediction ----

struct Resource {
  std::string name;
  Graph graph;
  std::vector<int> measured;  // server vertices, in word order
};

// Closed zigzag: cycle 0..n-1 with the even vertices held by the server.
inline Resource zigzag_resource(int n) {
  if (n < 4 || n % 2) throw Error("zigzag needs even n >= 4");
  if (n > kMaxCrosscheckVertices) throw SizeLimitError("crosscheck limited to 12 cycle vertices");
  Resource r{"zigzag", cycle_graph(label_range(n, 0)), {}};
  for (int v = 0; v < n; v += 2) r.measured.push_back(v);
  return r;
}

// Zigzag with a leaf 100 + u on every user u.
inline Resource honeycomb_resource(int n) {
  Resource r = zigzag_resource(n);
  r.name = "honeycomb";
  for (int u = 1; u < n; u += 2) {
    r.graph.add_vertex(100 + u);
    r.graph.add_edge(u, 100 + u);
  }
  return r;
}

// Path 0..n-1 with every third vertex (2, 5, 8, ...) held by the server.
inline Resource path_every_third_resource(int n) {
  if (n < 5 || (n - 2) % 3) throw Error("path_every_third needs n = 3k + 2 with k >= 1");
  if (n > kMaxCrosscheckVertices) throw SizeLimitError("crosscheck limited to 12 vertices");
  Resource r{"path_every_third", path_graph(label_range(n, 0)), {}};
  for (int v = 2; v < n; v += 3) r.measured.push_back(v);
  return r;
}

inline Resource make_resource(const std::string& name, int n) {
  if (name == "zigzag") return zigzag_resource(n);
  if (name == "honeycomb") return honeycomb_resource(n);
  if (name == "path_every_third") return path_every_third_resource(n);
  throw Error("unknown resource: " + name);
}

// Measured vertices must have two unmeasured neighbours. Z cuts, Y links the
// two neighbours, X merges them into one star block centred on its smallest
// member; the result is the mod-2 quotient plus the star edges.
inline Graph predict_graph(const Graph& resource, const std::vector<int>& measured, const std::string& word) {
  if (measured.size() != word.size()) throw Error("word length must equal the number of measured vertices");
  std::set<int> ms(measured.begin(), measured.end());
  std::map<int, int> parent;
  for (int v : resource.vertices())
    if (!ms.count(v)) parent[v] = v;
  auto find = [&parent](int x) {
    while (parent.at(x) != x) x = parent.at(x);
    return x;
  };
  std::map<Edge, int> count;
  for (auto [a, b] : resource.edges())
    if (!ms.count(a) && !ms.count(b)) ++count[{a, b}];
  std::vector<Edge> links;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    const int v = measured[i];
    const std::set<int>& nb = resource.neighbors(v);
    if (nb.size() != 2) throw Error("measured vertex " + std::to_string(v) + " must have degree 2");
    const int a = *nb.begin(), b = *nb.rbegin();
    if (ms.count(a) || ms.count(b)) throw Error("measured vertices must not be adjacent");
    switch (word[i]) {
      case 'X': {
        const int ra = find(a), rb = find(b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
        break;
      }
      case 'Y':
        links.emplace_back(a, b);
        break;
      case 'Z':
        break;
      default:
        throw Error("word letters must be X, Y or Z");
    }
  }
  for (auto e : links) ++count[{std::min(e.first, e.second), std::max(e.first, e.second)}];
  std::map<int, std::vector<int>> blocks;
  for (auto& [v, p] : parent) blocks[find(v)].push_back(v);
  std::map<int, int> centre;
  for (auto& [root, members] : blocks)
    for (int v : members) centre[v] = *std::min_element(members.begin(), members.end());
  std::map<Edge, int> quotient;
  for (auto& [e, c] : count) {
    const int ca = centre.at(e.first), cb = centre.at(e.second);
    if (ca != cb) quotient[{std::min(ca, cb), std::max(ca, cb)}] += c;
  }
  Graph g;
  for (auto& [v, p] : parent) g.add_vertex(v);
  for (auto& [e, c] : quotient)
    if (c % 2) g.add_edge(e.first, e.second);
  for (auto& [root, members] : blocks)
    for (int v : members)
      if (v != centre.at(v)) g.toggle_edge(centre.at(v), v);
  return g;
}

// Zigzag for a word of length k: closed is the cycle C_2k with even vertices
// measured; open is the path u0 s0 u1 s1 ... s_{k-1} u_k.
inline Resource word_zigzag(std::size_t k, bool close) {
  require(k >= 1, "word must be nonempty");
  const int n = static_cast<int>(2 * k);
  Resource r;
  r.name = close ? "zigzag" : "open-zigzag";
  if (close) {
    require(k >= 2, "closed zigzag needs at least two letters");
    r.graph = cycle_graph(label_range(n, 0));
  } else {
    r.graph = path_graph(label_range(n + 1, 0));
  }
  for (int v = 0; v < n; v += 2) r.measured.push_back(close ? v : v + 1);
  return r;
}

inline Graph predict_graph(const std::string& word, bool close) {
  Resource r = word_zigzag(word.size(), close);
  return predict_graph(r.graph, r.measured, word);
}

inline ShapeClass predict_class(const std::string& word, bool close) {
  if (word.empty()) throw Error("word must be nonempty");
  return classify_graph(predict_graph(word, close));
}

inline Graph simulate_word(const Resource& r, const std::string& word) {
  if (word.size() != r.measured.size()) throw Error("word length must equal the number of server vertices");
  Graph g = r.graph;
  for (std::size_t i = 0; i < word.size(); ++i) g = measure_pauli(g, r.measured[i], pauli_from_char(word[i]));
  return g;
}

struct CrosscheckReport {
  std::string word;
  std::string resource;
  int n = 0;
  ShapeClass predicted;
  ShapeClass simulated;
  bool equivalent = false;
};

inline CrosscheckReport crosscheck_report(int n, const std::string& word, const std::string& resource) {
  if (n > kMaxCrosscheckVertices) throw SizeLimitError("crosscheck limited to n <= 12");
  Resource r = make_resource(resource, n);
  CrosscheckReport rep;
  rep.word = word;
  rep.resource = resource;
  rep.n = n;
  const Graph sim = simulate_word(r, word);
  const Graph pred = predict_graph(r.graph, r.measured, word);
  rep.simulated = classify_graph(sim);
  rep.predicted = classify_graph(pred);
  rep.equivalent = locally_equivalent(sim, pred);
  return rep;
}

inline bool crosscheck(int n, const std::string& word, const std::string& resource) {
  return crosscheck_report(n, word, resource).equivalent;
}

}  // namespace pwqs
