#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fpa/workload.hpp"

// Dependency analysis: pair-relationship classification, combination
// counting, adjacency and dependency matrices, elementary-cycle detection.

namespace fpa {

// C(n, k), exact integer arithmetic (guaranteed for n <= 62; larger inputs
// throw std::overflow_error if the result leaves 64 bits).
inline std::uint64_t combinations(std::uint64_t n, std::uint64_t k) {
  if (k > n) throw std::invalid_argument("combinations: k > n");
  if (k > n - k) k = n - k;
  unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;  // exact: result is C(n-k+i, i) after this step
    if (result > std::numeric_limits<std::uint64_t>::max())
      throw std::overflow_error("combinations: result exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(result);
}

// Edges of a complete simple graph on n nodes: n(n-1)/2.
inline std::uint64_t edge_count(std::uint64_t n) {
  if (n < 2) return 0;
  unsigned __int128 e = static_cast<unsigned __int128>(n) * (n - 1) / 2;
  if (e > std::numeric_limits<std::uint64_t>::max())
    throw std::overflow_error("edge_count: result exceeds 64 bits");
  return static_cast<std::uint64_t>(e);
}

// Four relationship kinds per unordered pair: 4 * C(n, 2).
inline std::uint64_t relationship_space(std::uint64_t n) {
  if (n < 2) throw std::invalid_argument("relationship_space: requires n >= 2");
  std::uint64_t pairs = combinations(n, 2);
  if (pairs > std::numeric_limits<std::uint64_t>::max() / 4)
    throw std::overflow_error("relationship_space: result exceeds 64 bits");
  return 4 * pairs;
}

// A(i,j) = 1 iff function i depends on function j. Diagonal is all zeros:
// no self-dependencies.
class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;
  explicit AdjacencyMatrix(std::size_t n) : n_(n), cells_(n * n, 0) {}

  std::size_t size() const { return n_; }

  bool at(std::size_t i, std::size_t j) const {
    check_range(i, j);
    return cells_[i * n_ + j] != 0;
  }

  void set(std::size_t i, std::size_t j) {
    check_range(i, j);
    if (i == j) throw std::invalid_argument("adjacency matrix: no self-loops");
    cells_[i * n_ + j] = 1;
  }

  bool operator==(const AdjacencyMatrix&) const = default;

 private:
  void check_range(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw std::out_of_range("adjacency matrix index out of range");
  }

  std::size_t n_ = 0;
  std::vector<std::uint8_t> cells_;
};

struct DepLabel {
  bool sync = false;
  DependencyKind kind = DependencyKind::Communication;
  bool operator==(const DepLabel&) const = default;
};

// "S,Co" / "S,C" / "Co" / "C"; empty where no dependency exists.
inline std::string to_label(const std::optional<DepLabel>& l) {
  if (!l) return {};
  std::string s = l->sync ? "S," : "";
  return s + (l->kind == DependencyKind::Cooperation ? "Co" : "C");
}

class DependencyMatrix {
 public:
  DependencyMatrix() = default;
  explicit DependencyMatrix(std::size_t n) : n_(n), cells_(n * n) {}

  std::size_t size() const { return n_; }

  const std::optional<DepLabel>& at(std::size_t i, std::size_t j) const {
    check_range(i, j);
    return cells_[i * n_ + j];
  }

  std::string label_at(std::size_t i, std::size_t j) const { return to_label(at(i, j)); }

  void set(std::size_t i, std::size_t j, DepLabel l) {
    check_range(i, j);
    if (i == j) throw std::invalid_argument("dependency matrix: no self-loops");
    cells_[i * n_ + j] = l;
  }

  bool operator==(const DependencyMatrix&) const = default;

 private:
  void check_range(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw std::out_of_range("dependency matrix index out of range");
  }

  std::size_t n_ = 0;
  std::vector<std::optional<DepLabel>> cells_;
};

enum class PairRelation { Forward, Backward, Bidirectional, Null };

inline std::string_view to_string(PairRelation r) {
  switch (r) {
    case PairRelation::Forward: return "forward";
    case PairRelation::Backward: return "backward";
    case PairRelation::Bidirectional: return "bidirectional";
    case PairRelation::Null: return "null";
  }
  return "?";
}

// Row/column order is program order.
inline std::pair<AdjacencyMatrix, DependencyMatrix> build_matrices(const Workload& w) {
  const std::size_t n = w.functions.size();
  AdjacencyMatrix adj(n);
  DependencyMatrix dep(n);
  for (const DependencyDecl& d : w.dependencies) {
    auto i = w.index_of(d.from);
    auto j = w.index_of(d.to);
    if (!i || !j)
      throw std::invalid_argument("dependency references unknown function '" +
                                  (!i ? d.from : d.to) + "'");
    adj.set(*i, *j);
    dep.set(*i, *j, DepLabel{d.sync, d.kind});
  }
  return {std::move(adj), std::move(dep)};
}

inline PairRelation classify_pair(const AdjacencyMatrix& m, std::size_t i, std::size_t j) {
  if (i == j) throw std::invalid_argument("classify_pair: no self-loops");
  bool fwd = m.at(i, j);
  bool bwd = m.at(j, i);
  if (fwd && bwd) return PairRelation::Bidirectional;
  if (fwd) return PairRelation::Forward;
  if (bwd) return PairRelation::Backward;
  return PairRelation::Null;
}

namespace detail {

// Every elementary cycle of a digraph given as ascending adjacency lists.
// Each cycle is rooted at its smallest vertex; output is ordered by root,
// then lexicographically by the vertex sequence.
inline std::vector<std::vector<std::size_t>> elementary_cycles(
    const std::vector<std::vector<std::size_t>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::vector<std::size_t>> cycles;
  std::vector<std::size_t> path;
  std::vector<bool> on_path(n, false);

  auto dfs = [&](auto&& self, std::size_t root, std::size_t v) -> void {
    for (std::size_t w : adj[v]) {
      if (w == root) {
        cycles.push_back(path);
      } else if (w > root && !on_path[w]) {
        path.push_back(w);
        on_path[w] = true;
        self(self, root, w);
        on_path[w] = false;
        path.pop_back();
      }
    }
  };

  for (std::size_t root = 0; root < n; ++root) {
    path.assign(1, root);
    on_path.assign(n, false);
    on_path[root] = true;
    dfs(dfs, root, root);
  }
  return cycles;
}

}  // namespace detail

// Elementary cycles of the subgraph restricted to sync=yes dependencies,
// as function-name lists. Non-synchronized dependencies are analysis-only
// and cannot block, so they do not participate.
inline std::vector<std::vector<std::string>> find_sync_cycles(const Workload& w) {
  const std::size_t n = w.functions.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const DependencyDecl& d : w.dependencies) {
    if (!d.sync) continue;
    auto i = w.index_of(d.from);
    auto j = w.index_of(d.to);
    if (!i || !j || *i == *j) continue;
    adj[*i].push_back(*j);
  }
  for (auto& row : adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  std::vector<std::vector<std::string>> out;
  for (const auto& cycle : detail::elementary_cycles(adj)) {
    std::vector<std::string> names;
    names.reserve(cycle.size());
    for (std::size_t v : cycle) names.push_back(w.functions[v].name);
    out.push_back(std::move(names));
  }
  return out;
}

}  // namespace fpa
