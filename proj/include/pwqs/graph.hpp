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

#include "pwqs/errors.hpp"

namespace pwqs {

enum class Pauli { X, Y, Z };

inline char to_char(Pauli p) { return p == Pauli::X ? 'X' : p == Pauli::Y ? 'Y' : 'Z'; }

inline Pauli pauli_from_char(char c) {
  switch (c) {
    case 'X': case 'x': return Pauli::X;
    case 'Y': case 'y': return Pauli::Y;
    case 'Z': case 'z': return Pauli::Z;
    default: throw Error(std::string("not a Pauli letter: ") + c);
  }
}

using Edge = std::pair<int, int>;

// Simple undirected graph on integer labels.
class Graph {
 public:
  Graph() = default;
  explicit Graph(const std::vector<int>& vertices) {
    for (int v : vertices) add_vertex(v);
  }
  Graph(const std::vector<int>& vertices, const std::vector<Edge>& edges) : Graph(vertices) {
    for (auto [u, v] : edges) add_edge(u, v);
  }

  void add_vertex(int v) { adj_.try_emplace(v); }

  void remove_vertex(int v) {
    check(v);
    for (int n : adj_.at(v)) adj_.at(n).erase(v);
    adj_.erase(v);
  }

  void add_edge(int u, int v) {
    check_pair(u, v);
    adj_[u].insert(v);
    adj_[v].insert(u);
  }

  void remove_edge(int u, int v) {
    check_pair(u, v);
    adj_[u].erase(v);
    adj_[v].erase(u);
  }

  void toggle_edge(int u, int v) {
    if (has_edge(u, v)) remove_edge(u, v);
    else add_edge(u, v);
  }

  bool has_vertex(int v) const { return adj_.count(v) != 0; }

  bool has_edge(int u, int v) const {
    auto it = adj_.find(u);
    return it != adj_.end() && it->second.count(v) != 0;
  }

  const std::set<int>& neighbors(int v) const {
    check(v);
    return adj_.at(v);
  }

  std::size_t degree(int v) const { return neighbors(v).size(); }

  std::vector<int> vertices() const {
    std::vector<int> out;
    out.reserve(adj_.size());
    for (const auto& [v, _] : adj_) out.push_back(v);
    return out;
  }

  // Edges as (u, v) with u < v, lexicographically sorted.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (const auto& [u, ns] : adj_)
      for (int v : ns)
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  std::size_t size() const { return adj_.size(); }
  bool empty() const { return adj_.empty(); }

  std::size_t edge_count() const {
    std::size_t s = 0;
    for (const auto& [_, ns] : adj_) s += ns.size();
    return s / 2;
  }

  Graph induced(const std::set<int>& keep) const {
    Graph g;
    for (int v : keep) {
      check(v);
      g.add_vertex(v);
    }
    for (auto [u, v] : edges())
      if (keep.count(u) && keep.count(v)) g.add_edge(u, v);
    return g;
  }

  // Rename vertices; labels missing from the map are kept.
  Graph relabeled(const std::map<int, int>& m) const {
    auto f = [&](int v) {
      auto it = m.find(v);
      return it == m.end() ? v : it->second;
    };
    Graph g;
    for (int v : vertices()) g.add_vertex(f(v));
    require(g.size() == size(), "relabeling is not injective");
    for (auto [u, v] : edges()) g.add_edge(f(u), f(v));
    return g;
  }

  bool operator==(const Graph&) const = default;

 private:
  void check(int v) const {
    if (!has_vertex(v)) throw Error("unknown vertex " + std::to_string(v));
  }
  void check_pair(int u, int v) const {
    check(u);
    check(v);
    if (u == v) throw Error("self-loop on vertex " + std::to_string(u));
  }

  std::map<int, std::set<int>> adj_;
};

inline std::vector<int> label_range(int n, int first) {
  std::vector<int> out(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = first + i;
  return out;
}

inline Graph empty_graph(int n, int first = 1) { return Graph(label_range(n, first)); }

inline Graph path_graph(const std::vector<int>& order) {
  Graph g(order);
  for (std::size_t i = 1; i < order.size(); ++i) g.add_edge(order[i - 1], order[i]);
  return g;
}
inline Graph path_graph(int n, int first = 1) { return path_graph(label_range(n, first)); }

inline Graph cycle_graph(const std::vector<int>& order) {
  require(order.size() >= 3, "cycle needs at least 3 vertices");
  Graph g = path_graph(order);
  g.add_edge(order.back(), order.front());
  return g;
}
inline Graph cycle_graph(int n, int first = 1) { return cycle_graph(label_range(n, first)); }

inline Graph star_graph(int center, const std::vector<int>& leaves) {
  Graph g({center});
  for (int l : leaves) {
    g.add_vertex(l);
    g.add_edge(center, l);
  }
  return g;
}

inline Graph complete_graph(int n, int first = 1) {
  Graph g = empty_graph(n, first);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(first + i, first + j);
  return g;
}

inline Graph disjoint_union(const Graph& a, const Graph& b) {
  Graph g = a;
  for (int v : b.vertices()) {
    if (g.has_vertex(v)) throw Error("label collision on vertex " + std::to_string(v));
    g.add_vertex(v);
  }
  for (auto [u, v] : b.edges()) g.add_edge(u, v);
  return g;
}

inline std::vector<std::vector<int>> connected_components(const Graph& g) {
  std::vector<std::vector<int>> out;
  std::set<int> seen;
  for (int s : g.vertices()) {
    if (seen.count(s)) continue;
    std::vector<int> comp{s}, stack{s};
    seen.insert(s);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int w : g.neighbors(u))
        if (seen.insert(w).second) {
          comp.push_back(w);
          stack.push_back(w);
        }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

// CZ on a graph state toggles the edge.
inline Graph apply_cz(Graph g, int u, int v) {
  g.toggle_edge(u, v);
  return g;
}

inline Graph local_complement(Graph g, int v) {
  std::vector<int> ns(g.neighbors(v).begin(), g.neighbors(v).end());
  for (std::size_t i = 0; i < ns.size(); ++i)
    for (std::size_t j = i + 1; j < ns.size(); ++j) g.toggle_edge(ns[i], ns[j]);
  return g;
}

// Pauli measurement of v, up to local Cliffords on the remaining vertices.
// X uses the smallest-label neighbour as the special vertex.
inline Graph measure_pauli(Graph g, int v, Pauli b) {
  if (!g.has_vertex(v)) throw Error("unknown vertex " + std::to_string(v));
  switch (b) {
    case Pauli::Z:
      break;
    case Pauli::Y:
      g = local_complement(std::move(g), v);
      break;
    case Pauli::X:
      if (!g.neighbors(v).empty()) {
        int w = *g.neighbors(v).begin();
        g = local_complement(std::move(g), v);
        g = local_complement(std::move(g), w);
        g = local_complement(std::move(g), v);
      }
      break;
  }
  g.remove_vertex(v);
  return g;
}

}  // namespace pwqs
