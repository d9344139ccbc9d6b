#include "moodcrl/mdp/causal_graph.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <queue>

#include "moodcrl/errors.hpp"

namespace moodcrl::mdp {
namespace {

void check_square_binary(const Adjacency& a) {
  require(a.rows() == a.cols(), "adjacency matrix must be square");
  require(((a.array() == 0) || (a.array() == 1)).all(), "adjacency matrix must be binary");
}

}  // namespace

DagCheck validate_dag(const Adjacency& adjacency) {
  check_square_binary(adjacency);
  const Index n = adjacency.rows();
  enum class Mark { unvisited, active, done };
  std::vector<Mark> mark(static_cast<std::size_t>(n), Mark::unvisited);
  std::vector<Index> stack;
  DagCheck result;

  std::function<bool(Index)> visit = [&](Index v) {
    mark[v] = Mark::active;
    stack.push_back(v);
    for (Index w = 0; w < n; ++w) {
      if (adjacency(v, w) == 0) continue;
      if (mark[w] == Mark::active) {
        auto it = std::find(stack.begin(), stack.end(), w);
        result.cycle.assign(it, stack.end());
        return true;
      }
      if (mark[w] == Mark::unvisited && visit(w)) return true;
    }
    stack.pop_back();
    mark[v] = Mark::done;
    return false;
  };

  for (Index v = 0; v < n; ++v) {
    if (mark[v] == Mark::unvisited && visit(v)) {
      result.ok = false;
      return result;
    }
  }
  return result;
}

std::vector<Index> topological_permutation(const Adjacency& adjacency) {
  const DagCheck check = validate_dag(adjacency);
  if (!check.ok) throw ValidationError("topological_permutation: graph has a cycle");
  const Index n = adjacency.rows();
  std::vector<Index> indegree(static_cast<std::size_t>(n), 0);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) indegree[i] += adjacency(j, i);
  }
  std::priority_queue<Index, std::vector<Index>, std::greater<>> ready;
  for (Index i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(n));
  while (!ready.empty()) {
    const Index v = ready.top();
    ready.pop();
    order.push_back(v);
    for (Index i = 0; i < n; ++i) {
      if (adjacency(v, i) != 0 && --indegree[i] == 0) ready.push(i);
    }
  }
  return order;
}

Adjacency transitive_closure(const Adjacency& adjacency) {
  check_square_binary(adjacency);
  Adjacency reach = adjacency;
  const Index n = adjacency.rows();
  for (Index k = 0; k < n; ++k) {
    for (Index j = 0; j < n; ++j) {
      if (reach(j, k) == 0) continue;
      for (Index i = 0; i < n; ++i) {
        if (reach(k, i) != 0) reach(j, i) = 1;
      }
    }
  }
  return reach;
}

Adjacency adjacency_from_edges(Index dim, const std::vector<Edge>& edges) {
  require(dim > 0, "graph dimension must be positive");
  Adjacency a = Adjacency::Zero(dim, dim);
  for (const auto& [from, to] : edges) {
    require(from >= 0 && from < dim && to >= 0 && to < dim,
            "edge [" + std::to_string(from) + "," + std::to_string(to) + "] out of range");
    a(from, to) = 1;
  }
  return a;
}

CausalGraph::CausalGraph(TupleLayout layout, Adjacency adjacency, std::vector<std::string> names)
    : layout_(layout), adjacency_(std::move(adjacency)), names_(std::move(names)) {
  check_square_binary(adjacency_);
  require(adjacency_.rows() == layout_.dim(),
          "graph dimension " + std::to_string(adjacency_.rows()) + " != tuple dimension " +
              std::to_string(layout_.dim()));
  for (Index j = 0; j < dim(); ++j) {
    for (Index i = 0; i < dim(); ++i) {
      if (adjacency_(j, i) != 0 && !layout_.is_present(j) && layout_.is_present(i)) {
        throw ValidationError("edge " + std::to_string(j) + "->" + std::to_string(i) +
                              " runs from the s'/r block back into the s/a block");
      }
    }
  }
  finish_construction();
}

CausalGraph CausalGraph::over_variables(Adjacency adjacency, std::vector<std::string> names) {
  CausalGraph g;
  g.adjacency_ = std::move(adjacency);
  g.names_ = std::move(names);
  check_square_binary(g.adjacency_);
  require(g.adjacency_.rows() > 0, "graph dimension must be positive");
  g.finish_construction();
  return g;
}

void CausalGraph::finish_construction() {
  require(names_.empty() || static_cast<Index>(names_.size()) == dim(),
          "graph names must cover every dimension");
  for (Index i = 0; i < dim(); ++i) {
    require(adjacency_(i, i) == 0, "self-edge on dimension " + std::to_string(i));
  }
  const DagCheck check = validate_dag(adjacency_);
  if (!check.ok) {
    std::string cyc;
    for (Index v : check.cycle) cyc += (cyc.empty() ? "" : ",") + std::to_string(v);
    throw ValidationError("causal graph has a cycle [" + cyc + "]");
  }
  ancestors_ = transitive_closure(adjacency_);
  order_ = topological_permutation(adjacency_);
  position_.assign(static_cast<std::size_t>(dim()), 0);
  for (std::size_t p = 0; p < order_.size(); ++p) position_[order_[p]] = static_cast<Index>(p);
  depth_.assign(static_cast<std::size_t>(dim()), 0);
  for (Index v : order_) {
    for (Index j = 0; j < dim(); ++j) {
      if (adjacency_(j, v) != 0) depth_[v] = std::max(depth_[v], depth_[j] + 1);
    }
  }
}

CausalGraph CausalGraph::from_edges(const TupleLayout& layout, const std::vector<Edge>& edges,
                                    std::vector<std::string> names) {
  return CausalGraph(layout, adjacency_from_edges(layout.dim(), edges), std::move(names));
}

Index CausalGraph::max_depth() const {
  return depth_.empty() ? 0 : *std::max_element(depth_.begin(), depth_.end());
}

std::vector<Edge> CausalGraph::edges() const {
  std::vector<Edge> out;
  for (Index j = 0; j < dim(); ++j) {
    for (Index i = 0; i < dim(); ++i) {
      if (adjacency_(j, i) != 0) out.emplace_back(j, i);
    }
  }
  return out;
}

std::string CausalGraph::hash() const {
  // FNV-1a over the dimension and the sorted edge list.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xFFu;
      h *= 1099511628211ull;
    }
  };
  mix(static_cast<std::uint64_t>(dim()));
  for (const auto& [j, i] : edges()) {
    mix(static_cast<std::uint64_t>(j));
    mix(static_cast<std::uint64_t>(i));
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace moodcrl::mdp
