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
#include <array>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "pwqs/errors.hpp"
#include "pwqs/graph.hpp"

namespace pwqs {

// Graph state plus, per vertex, the local Clifford (modulo Paulis) that maps
// physical Pauli axes onto graph axes. Physical measurements and PBS parity
// projections are translated through the frame before the graph rules apply.
class FramedGraph {
 public:
  using Frame = std::array<Pauli, 3>;  // indexed by physical axis

  void add_vertex(int v) {
    require(!g_.has_vertex(v), "vertex already present: " + std::to_string(v));
    g_.add_vertex(v);
    frame_[v] = {Pauli::X, Pauli::Y, Pauli::Z};
  }

  void add_edge(int u, int v) { g_.add_edge(u, v); }

  bool has_vertex(int v) const { return g_.has_vertex(v); }
  const Graph& graph() const { return g_; }
  const Frame& frame(int v) const { return frame_.at(v); }
  Pauli graph_axis(int v, Pauli physical) const { return frame_.at(v)[static_cast<std::size_t>(physical)]; }

  void local_complement(int v) {
    g_ = pwqs::local_complement(std::move(g_), v);
    conj(v, Pauli::Y, Pauli::Z);
    for (int n : g_.neighbors(v)) conj(n, Pauli::X, Pauli::Y);
  }

  void pivot(int u, int w) {
    local_complement(u);
    local_complement(w);
    local_complement(u);
  }

  // Physical Hadamard (a 22.5 degree wave plate).
  void hadamard(int v) { std::swap(frame_.at(v)[0], frame_.at(v)[2]); }

  // Single-qubit measurement in a physical Pauli basis; the outcome only changes
  // Pauli byproducts, which the frame ignores.
  void measure(int v, Pauli physical) {
    switch (graph_axis(v, physical)) {
      case Pauli::Z:
        break;
      case Pauli::Y:
        local_complement(v);
        break;
      case Pauli::X:
        if (!g_.neighbors(v).empty()) pivot(v, *g_.neighbors(v).begin());
        break;
    }
    remove(v);
  }

  // Postselected PBS between the photons of a and b (both survive; b ends as a leaf of a).
  void parity(int a, int b) {
    require(a != b, "parity projection needs two vertices");
    to_graph_z(a, b);
    to_graph_z(b, a);
    if (graph_axis(a, Pauli::Z) != Pauli::Z) to_graph_z(a, b);
    if (graph_axis(a, Pauli::Z) != Pauli::Z || graph_axis(b, Pauli::Z) != Pauli::Z)
      throw Error("cannot bring both parity vertices into the Z frame");
    std::set<int> na = g_.neighbors(a), nb = g_.neighbors(b);
    std::set<int> merged;
    for (int x : na)
      if (!nb.count(x)) merged.insert(x);
    for (int x : nb)
      if (!na.count(x)) merged.insert(x);
    merged.erase(a);
    merged.erase(b);
    for (int x : na) g_.remove_edge(a, x);
    for (int x : nb) g_.remove_edge(b, x);
    for (int x : merged) g_.add_edge(a, x);
    g_.add_edge(a, b);
    conj(b, Pauli::X, Pauli::Z);
  }

  void remove(int v) {
    g_.remove_vertex(v);
    frame_.erase(v);
  }

  void relabel(int from, int to) {
    require(!g_.has_vertex(to), "relabel target already present");
    g_ = g_.relabeled({{from, to}});
    auto f = frame_.at(from);
    frame_.erase(from);
    frame_[to] = f;
  }

 private:
  void conj(int v, Pauli p, Pauli q) {
    for (Pauli& a : frame_.at(v)) {
      if (a == p) a = q;
      else if (a == q) a = p;
    }
  }

  // Rotate v so its physical Z is graph Z, pivoting with a neighbour other
  // than `avoid` when one exists.
  void to_graph_z(int v, int avoid) {
    switch (graph_axis(v, Pauli::Z)) {
      case Pauli::Z:
        return;
      case Pauli::Y:
        local_complement(v);
        return;
      case Pauli::X:
        if (g_.neighbors(v).empty()) throw Error("cannot rotate isolated vertex " + std::to_string(v) + " into the Z frame");
        {
          const std::set<int>& ns = g_.neighbors(v);
          auto it = std::find_if(ns.begin(), ns.end(), [avoid](int x) { return x != avoid; });
          pivot(v, it == ns.end() ? *ns.begin() : *it);
        }
        return;
    }
  }

  Graph g_;
  std::map<int, Frame> frame_;
};

}  // namespace pwqs
