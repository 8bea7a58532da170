#include "ddforge/graph.hpp"

#include "ddforge/errors.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace ddforge {

Edge normalized(Edge e) { return e.first < e.second ? e : Edge{e.second, e.first}; }

Topology::Topology(int num_qubits, std::vector<Edge> edges) : n_(num_qubits), adj_(num_qubits) {
  if (num_qubits < 0) throw InvalidArgument("negative qubit count");
  for (auto e : edges) {
    e = normalized(e);
    if (e.first < 0 || e.second >= num_qubits || e.first == e.second)
      throw InvalidEdge("edge (" + std::to_string(e.first) + "," + std::to_string(e.second) +
                        ") invalid for " + std::to_string(num_qubits) + " qubits");
    if (std::find(edges_.begin(), edges_.end(), e) != edges_.end()) continue;
    edges_.push_back(e);
    adj_[e.first].push_back(e.second);
    adj_[e.second].push_back(e.first);
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
}

Topology Topology::linear(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return {n, e};
}

Topology Topology::all_to_all(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return {n, e};
}

Topology Topology::heavy_hex_fragment(int n) {
  // Rows of 5 qubits linked by bridges at columns 0 and 4 (alternating), the
  // same motif as a heavy-hex lattice. Qubits are numbered in snake order so
  // that every prefix is connected.
  std::vector<Edge> e;
  int next = 0;
  int prev_row_start = -1;
  bool left_bridge = false;
  while (next < n) {
    const int row_start = next;
    const int row_len = std::min(5, n - next);
    for (int i = 0; i + 1 < row_len; ++i) e.emplace_back(row_start + i, row_start + i + 1);
    next += row_len;
    if (next >= n) break;
    // bridge qubit hanging off the end of this row reached by the snake
    const int bridge = next++;
    const int attach = left_bridge ? row_start : row_start + row_len - 1;
    e.emplace_back(attach, bridge);
    prev_row_start = bridge;
    if (next < n) e.emplace_back(bridge, next);
    left_bridge = !left_bridge;
  }
  (void)prev_row_start;
  return {n, e};
}

Topology Topology::named(const std::string& name, int n) {
  if (name == "linear") return linear(n);
  if (name == "all_to_all" || name == "all-to-all") return all_to_all(n);
  if (name == "heavy_hex" || name == "heavy-hex") return heavy_hex_fragment(n);
  throw ConfigError("unknown topology '" + name + "'");
}

bool Topology::has_edge(int a, int b) const {
  if (a < 0 || a >= n_) return false;
  return std::binary_search(adj_[a].begin(), adj_[a].end(), b);
}

std::vector<int> Topology::distances(int q) const {
  std::vector<int> d(n_, -1);
  std::deque<int> queue{q};
  d[q] = 0;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : adj_[u])
      if (d[v] < 0) {
        d[v] = d[u] + 1;
        queue.push_back(v);
      }
  }
  return d;
}

bool Topology::connected() const {
  if (n_ == 0) return true;
  auto d = distances(0);
  return std::none_of(d.begin(), d.end(), [](int x) { return x < 0; });
}

int Topology::center() const {
  int best = 0, best_ecc = std::numeric_limits<int>::max();
  for (int q = 0; q < n_; ++q) {
    auto d = distances(q);
    int ecc = 0;
    for (int x : d) ecc = x < 0 ? std::numeric_limits<int>::max() : std::max(ecc, x);
    if (ecc < best_ecc) best = q, best_ecc = ecc;
  }
  return best;
}

Topology Topology::prefix(int n) const {
  std::vector<Edge> e;
  for (auto [a, b] : edges_)
    if (a < n && b < n) e.emplace_back(a, b);
  return {n, e};
}

}  // namespace ddforge
