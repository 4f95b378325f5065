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
#include <vector>

#include "pwqs/graph.hpp"

namespace pwqs {

struct ComponentWitness {
  // isolated, path, star, caterpillar, cycle, leafed-cycle or other
  std::string kind;
  std::vector<int> vertices;
  // Path order for trees, cyclic order for cycles.
  std::vector<int> spine;
  std::map<int, std::vector<int>> leaves;
  // Only filled for kind "other".
  std::vector<Edge> edges;
};

struct ShapeClass {
  // empty, path, star, cycle, caterpillar, leafed-cycle, caterpillar-forest or other
  std::string label;
  std::vector<ComponentWitness> components;
  // Every star (a vertex with its pendant neighbours) is a contiguous run of labels.
  bool contiguous = true;
};

namespace detail {

inline std::vector<int> walk_path(const Graph& core) {
  std::vector<int> vs = core.vertices();
  int start = vs.front();
  for (int v : vs)
    if (core.degree(v) <= 1) {
      start = v;
      break;
    }
  std::vector<int> order{start};
  std::set<int> seen{start};
  for (int cur = start;;) {
    int next = -1;
    for (int w : core.neighbors(cur))
      if (!seen.count(w)) {
        next = w;
        break;
      }
    if (next < 0) break;
    order.push_back(next);
    seen.insert(next);
    cur = next;
  }
  return order;
}

inline std::vector<int> walk_cycle(const Graph& core) {
  std::vector<int> vs = core.vertices();
  std::vector<int> order{vs.front()};
  int prev = vs.front();
  int cur = *core.neighbors(prev).begin();
  while (cur != order.front()) {
    order.push_back(cur);
    int next = -1;
    for (int w : core.neighbors(cur))
      if (w != prev) {
        next = w;
        break;
      }
    prev = cur;
    cur = next;
  }
  return order;
}

inline bool is_cycle(const Graph& h) {
  if (h.size() < 3 || h.edge_count() != h.size()) return false;
  for (int v : h.vertices())
    if (h.degree(v) != 2) return false;
  return connected_components(h).size() == 1;
}

inline bool is_path(const Graph& h) {
  if (h.empty() || h.edge_count() + 1 != h.size()) return false;
  for (int v : h.vertices())
    if (h.degree(v) > 2) return false;
  return connected_components(h).size() == 1;
}

inline ComponentWitness classify_component(const Graph& g, const std::vector<int>& comp) {
  ComponentWitness w;
  w.vertices = comp;
  const Graph h = g.induced(std::set<int>(comp.begin(), comp.end()));
  if (comp.size() == 1) {
    w.kind = "isolated";
    w.spine = comp;
    return w;
  }
  if (is_cycle(h)) {
    w.kind = "cycle";
    w.spine = walk_cycle(h);
    return w;
  }
  if (is_path(h)) {
    w.kind = "path";
    w.spine = walk_path(h);
    return w;
  }
  std::set<int> core_set;
  std::vector<int> stripped;
  for (int v : comp) {
    if (h.degree(v) >= 2) core_set.insert(v);
    else stripped.push_back(v);
  }
  const Graph core = h.induced(core_set);
  auto attach = [&] {
    for (int l : stripped)
      if (std::find(w.spine.begin(), w.spine.end(), l) == w.spine.end())
        w.leaves[*h.neighbors(l).begin()].push_back(l);
  };
  if (h.edge_count() + 1 == h.size() && is_path(core)) {
    std::vector<int> c = walk_path(core);
    auto pendants = [&](int v) {
      std::vector<int> out;
      for (int n : h.neighbors(v))
        if (h.degree(n) == 1) out.push_back(n);
      return out;
    };
    std::vector<int> front = pendants(c.front());
    std::vector<int> back = pendants(c.back());
    w.spine.push_back(front.front());
    w.spine.insert(w.spine.end(), c.begin(), c.end());
    if (c.size() == 1) w.spine.push_back(front[1]);
    else w.spine.push_back(back.front());
    attach();
    w.kind = c.size() == 1 ? "star" : "caterpillar";
    return w;
  }
  if (h.edge_count() == h.size() && is_cycle(core)) {
    w.kind = "leafed-cycle";
    w.spine = walk_cycle(core);
    attach();
    return w;
  }
  w.kind = "other";
  w.edges = h.edges();
  return w;
}

inline bool contiguous_run(const std::vector<int>& order, const std::set<int>& members) {
  const std::size_t n = order.size();
  if (members.size() >= n) return true;
  // Count cyclic boundaries where membership switches.
  int switches = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (members.count(order[i]) != members.count(order[(i + 1) % n])) ++switches;
  return switches <= 2;
}

}  // namespace detail

inline ShapeClass classify_graph(const Graph& g) {
  ShapeClass out;
  for (const auto& comp : connected_components(g)) out.components.push_back(detail::classify_component(g, comp));
  if (g.edge_count() == 0) {
    out.label = "empty";
  } else if (out.components.size() == 1) {
    out.label = out.components.front().kind;
  } else {
    bool forest = std::all_of(out.components.begin(), out.components.end(), [](const ComponentWitness& c) {
      return c.kind == "isolated" || c.kind == "path" || c.kind == "star" || c.kind == "caterpillar";
    });
    out.label = forest ? "caterpillar-forest" : "other";
  }
  for (const auto& c : out.components) {
    if (c.kind != "star" && c.kind != "caterpillar" && c.kind != "leafed-cycle") continue;
    for (int v : c.vertices) {
      if (g.degree(v) < 2) continue;
      std::set<int> star{v};
      for (int n : g.neighbors(v))
        if (g.degree(n) == 1) star.insert(n);
      if (star.size() > 1 && !detail::contiguous_run(c.vertices, star)) out.contiguous = false;
    }
  }
  return out;
}

// Rebuilds the classified graph from its witness.
inline Graph reconstruct(const ShapeClass& s) {
  Graph g;
  for (const auto& c : s.components) {
    for (int v : c.vertices) g.add_vertex(v);
    if (c.kind == "other") {
      for (auto [u, v] : c.edges) g.add_edge(u, v);
      continue;
    }
    for (std::size_t i = 1; i < c.spine.size(); ++i) g.add_edge(c.spine[i - 1], c.spine[i]);
    if ((c.kind == "cycle" || c.kind == "leafed-cycle") && c.spine.size() >= 3) g.add_edge(c.spine.back(), c.spine.front());
    for (const auto& [p, ls] : c.leaves)
      for (int l : ls) g.add_edge(p, l);
  }
  return g;
}

}  // namespace pwqs
