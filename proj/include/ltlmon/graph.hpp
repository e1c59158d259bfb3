#pragma once

#include <cstdint>
#include <vector>

namespace ltlmon {

/// Plain adjacency-list digraph over dense vertex ids.
class Digraph {
 public:
  explicit Digraph(std::size_t n = 0) : adj_(n) {}

  std::size_t size() const { return adj_.size(); }
  void add_edge(std::uint32_t from, std::uint32_t to) { adj_.at(from).push_back(to); }
  /// Sorts and deduplicates successor lists.
  void normalize();
  const std::vector<std::uint32_t>& successors(std::uint32_t v) const { return adj_[v]; }

  bool has_edge(std::uint32_t from, std::uint32_t to) const;
  /// An SCC is nontrivial when it carries a cycle: more than one vertex or a self-loop.
  bool is_nontrivial(const std::vector<std::uint32_t>& scc) const;

  std::vector<char> forward_reachable(const std::vector<std::uint32_t>& from) const;
  std::vector<char> backward_reachable(const std::vector<std::uint32_t>& to) const;
  Digraph induced(const std::vector<char>& keep) const;

 private:
  std::vector<std::vector<std::uint32_t>> adj_;
};

/// Tarjan's algorithm, iterative. Components come out in reverse topological order
/// (every edge leaving a component points to one listed earlier).
std::vector<std::vector<std::uint32_t>> strongly_connected_components(const Digraph& g);

}  // namespace ltlmon
