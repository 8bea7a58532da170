#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ddforge {

using Edge = std::pair<int, int>;

// Undirected coupling graph on qubits 0..num_qubits-1.
class Topology {
 public:
  Topology() = default;
  Topology(int num_qubits, std::vector<Edge> edges);

  static Topology linear(int n);
  static Topology all_to_all(int n);
  // Heavy-hex style fragment: two rows of a brick lattice joined through
  // degree-2 bridge qubits. Sized to at least n qubits, then truncated to a
  // connected induced subgraph on the first n.
  static Topology heavy_hex_fragment(int n);
  static Topology named(const std::string& name, int n);

  int num_qubits() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int q) const { return adj_[q]; }
  bool has_edge(int a, int b) const;
  bool connected() const;

  // BFS distances from q (-1 for unreachable).
  std::vector<int> distances(int q) const;
  // Qubit of minimum eccentricity, lowest index on ties.
  int center() const;
  // Induced subgraph on qubits 0..n-1.
  Topology prefix(int n) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
};

Edge normalized(Edge e);

}  // namespace ddforge
