#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bisched/errors.hpp"

namespace bisched {

/// Unordered edge stored with first < second.
using Edge = std::pair<std::size_t, std::size_t>;

enum class Side : std::uint8_t { A, B };

struct TwoColoring {
   std::vector<Side> side;
};

/// Result of a breadth-first 2-coloring attempt on a raw edge list.
struct BipartitionResult {
   std::optional<TwoColoring> coloring;
   std::vector<std::size_t> odd_cycle;  // empty when coloring is set
};

namespace detail {

inline std::vector<std::vector<std::size_t>> adjacency(
     std::size_t n, std::span<const Edge> edges) {
   std::vector<std::vector<std::size_t>> adj(n);
   for (const auto& [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
   }
   return adj;
}

}  // namespace detail

/// Breadth-first 2-coloring, components visited in vertex order, each root
/// (and hence each isolated vertex) on side A. On failure an odd closed walk
/// through the offending edge is returned.
inline BipartitionResult bipartition(std::size_t n,
                                     std::span<const Edge> edges) {
   const auto adj = detail::adjacency(n, edges);
   constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
   std::vector<int> color(n, -1);
   std::vector<std::size_t> parent(n, none);
   std::vector<std::size_t> depth(n, 0);

   for (std::size_t root = 0; root < n; ++root) {
      if (color[root] != -1) {
         continue;
      }
      color[root] = 0;
      std::queue<std::size_t> queue;
      queue.push(root);
      while (!queue.empty()) {
         const std::size_t u = queue.front();
         queue.pop();
         for (const std::size_t v : adj[u]) {
            if (color[v] == -1) {
               color[v] = 1 - color[u];
               parent[v] = u;
               depth[v] = depth[u] + 1;
               queue.push(v);
            } else if (color[v] == color[u]) {
               // Walk both endpoints up to their common ancestor.
               std::vector<std::size_t> left;
               std::vector<std::size_t> right;
               std::size_t x = u;
               std::size_t y = v;
               while (depth[x] > depth[y]) {
                  left.push_back(x);
                  x = parent[x];
               }
               while (depth[y] > depth[x]) {
                  right.push_back(y);
                  y = parent[y];
               }
               while (x != y) {
                  left.push_back(x);
                  right.push_back(y);
                  x = parent[x];
                  y = parent[y];
               }
               left.push_back(x);
               left.insert(left.end(), right.rbegin(), right.rend());
               return {std::nullopt, std::move(left)};
            }
         }
      }
   }

   TwoColoring coloring;
   coloring.side.reserve(n);
   for (const int c : color) {
      coloring.side.push_back(c == 0 ? Side::A : Side::B);
   }
   return {std::move(coloring), {}};
}

/// Vertex-weighted bipartite graph. Edges are canonicalized (sorted,
/// deduplicated, first < second); construction rejects self-loops,
/// out-of-range endpoints, non-positive weights, and odd cycles.
class BipGraph {
 public:
   BipGraph() = default;

   explicit BipGraph(std::size_t n, std::vector<Edge> edges = {},
                     std::vector<std::int64_t> weights = {})
       : n_(n), edges_(std::move(edges)), weights_(std::move(weights)) {
      if (weights_.empty()) {
         weights_.assign(n_, 1);
      }
      if (weights_.size() != n_) {
         throw std::invalid_argument("weight vector length " +
                                     std::to_string(weights_.size()) +
                                     " does not match vertex count " +
                                     std::to_string(n_));
      }
      for (const auto w : weights_) {
         if (w <= 0) {
            throw std::invalid_argument("vertex weights must be positive");
         }
      }
      for (auto& [a, b] : edges_) {
         if (a == b) {
            throw std::invalid_argument("self-loop on vertex " +
                                        std::to_string(a));
         }
         if (a >= n_ || b >= n_) {
            throw std::invalid_argument("edge endpoint out of range");
         }
         if (a > b) {
            std::swap(a, b);
         }
      }
      std::sort(edges_.begin(), edges_.end());
      edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

      adj_ = detail::adjacency(n_, edges_);
      for (auto& row : adj_) {
         std::sort(row.begin(), row.end());
      }
      auto result = bipartition(n_, edges_);
      if (!result.coloring) {
         throw NotBipartite(std::move(result.odd_cycle));
      }
      coloring_ = std::move(*result.coloring);
   }

   [[nodiscard]] std::size_t size() const { return n_; }
   [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
   [[nodiscard]] const std::vector<std::int64_t>& weights() const {
      return weights_;
   }
   [[nodiscard]] std::int64_t weight(std::size_t v) const {
      return weights_[v];
   }
   [[nodiscard]] std::span<const std::size_t> neighbors(std::size_t v) const {
      return adj_[v];
   }
   [[nodiscard]] const TwoColoring& coloring() const { return coloring_; }

   [[nodiscard]] bool adjacent(std::size_t a, std::size_t b) const {
      return std::binary_search(adj_[a].begin(), adj_[a].end(), b);
   }

   [[nodiscard]] std::int64_t total_weight(
        std::span<const std::size_t> vertices) const {
      std::int64_t sum = 0;
      for (const auto v : vertices) {
         sum += weights_[v];
      }
      return sum;
   }

   [[nodiscard]] bool is_independent(
        std::span<const std::size_t> vertices) const {
      std::vector<char> in(n_, 0);
      for (const auto v : vertices) {
         in[v] = 1;
      }
      for (const auto& [a, b] : edges_) {
         if (in[a] && in[b]) {
            return false;
         }
      }
      return true;
   }

   /// Subgraph induced by `keep` (sorted ascending). Vertex i of the result
   /// is keep[i].
   [[nodiscard]] BipGraph induced(std::span<const std::size_t> keep) const {
      constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
      std::vector<std::size_t> relabel(n_, none);
      std::vector<std::int64_t> w;
      w.reserve(keep.size());
      for (std::size_t i = 0; i < keep.size(); ++i) {
         relabel[keep[i]] = i;
         w.push_back(weights_[keep[i]]);
      }
      std::vector<Edge> e;
      for (const auto& [a, b] : edges_) {
         if (relabel[a] != none && relabel[b] != none) {
            e.emplace_back(relabel[a], relabel[b]);
         }
      }
      return BipGraph(keep.size(), std::move(e), std::move(w));
   }

 private:
   std::size_t n_ = 0;
   std::vector<Edge> edges_;
   std::vector<std::int64_t> weights_;
   std::vector<std::vector<std::size_t>> adj_;
   TwoColoring coloring_;
};

inline const TwoColoring& bipartition(const BipGraph& g) {
   return g.coloring();
}

/// Connected components, each listed in ascending vertex order; components
/// ordered by their smallest vertex.
inline std::vector<std::vector<std::size_t>> components(const BipGraph& g) {
   std::vector<std::vector<std::size_t>> out;
   std::vector<char> seen(g.size(), 0);
   for (std::size_t root = 0; root < g.size(); ++root) {
      if (seen[root]) {
         continue;
      }
      std::vector<std::size_t> comp{root};
      seen[root] = 1;
      for (std::size_t head = 0; head < comp.size(); ++head) {
         for (const auto v : g.neighbors(comp[head])) {
            if (!seen[v]) {
               seen[v] = 1;
               comp.push_back(v);
            }
         }
      }
      std::sort(comp.begin(), comp.end());
      out.push_back(std::move(comp));
   }
   return out;
}

struct InequitableColoring {
   std::vector<std::size_t> v1;  // heavier class, ascending
   std::vector<std::size_t> v2;
};

/// Proper 2-coloring maximizing the total weight of the first class. Each
/// component contributes its heavier side to V1; on a tie the side holding
/// the component's smallest vertex wins.
inline InequitableColoring inequitable_two_coloring(const BipGraph& g) {
   const auto& side = g.coloring().side;
   InequitableColoring out;
   for (const auto& comp : components(g)) {
      std::int64_t wa = 0;
      std::int64_t wb = 0;
      for (const auto v : comp) {
         (side[v] == Side::A ? wa : wb) += g.weight(v);
      }
      const Side root_side = side[comp.front()];
      Side heavy = wa > wb ? Side::A : Side::B;
      if (wa == wb) {
         heavy = root_side;
      }
      for (const auto v : comp) {
         (side[v] == heavy ? out.v1 : out.v2).push_back(v);
      }
   }
   std::sort(out.v1.begin(), out.v1.end());
   std::sort(out.v2.begin(), out.v2.end());
   return out;
}

struct Matching {
   std::size_t size = 0;
   std::vector<Edge> edges;  // sorted, first < second
};

/// Maximum cardinality matching by Hopcroft-Karp phases.
inline Matching max_matching(const BipGraph& g) {
   const auto& side = g.coloring().side;
   const std::size_t n = g.size();
   constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
   constexpr std::size_t inf = std::numeric_limits<std::size_t>::max();

   std::vector<std::size_t> left;
   for (std::size_t v = 0; v < n; ++v) {
      if (side[v] == Side::A) {
         left.push_back(v);
      }
   }
   std::vector<std::size_t> mate(n, none);
   std::vector<std::size_t> dist(n, inf);

   auto bfs = [&]() {
      std::queue<std::size_t> queue;
      bool found = false;
      for (const auto u : left) {
         if (mate[u] == none) {
            dist[u] = 0;
            queue.push(u);
         } else {
            dist[u] = inf;
         }
      }
      while (!queue.empty()) {
         const auto u = queue.front();
         queue.pop();
         for (const auto v : g.neighbors(u)) {
            const auto w = mate[v];
            if (w == none) {
               found = true;
            } else if (dist[w] == inf) {
               dist[w] = dist[u] + 1;
               queue.push(w);
            }
         }
      }
      return found;
   };

   // Iterative DFS along the layered graph.
   std::vector<std::size_t> it(n, 0);
   auto dfs = [&](std::size_t start) {
      std::vector<std::size_t> stack{start};
      while (!stack.empty()) {
         const auto u = stack.back();
         const auto nbrs = g.neighbors(u);
         bool advanced = false;
         while (it[u] < nbrs.size()) {
            const auto v = nbrs[it[u]];
            const auto w = mate[v];
            if (w == none) {
               // Augment along the stack.
               std::size_t free_right = v;
               for (auto k = stack.size(); k-- > 0;) {
                  const auto l = stack[k];
                  const auto prev = mate[l];
                  mate[l] = free_right;
                  mate[free_right] = l;
                  free_right = prev;
               }
               return true;
            }
            if (dist[w] == dist[u] + 1) {
               ++it[u];
               stack.push_back(w);
               advanced = true;
               break;
            }
            ++it[u];
         }
         if (!advanced) {
            dist[u] = inf;
            stack.pop_back();
         }
      }
      return false;
   };

   while (bfs()) {
      std::fill(it.begin(), it.end(), 0);
      for (const auto u : left) {
         if (mate[u] == none) {
            dfs(u);
         }
      }
   }

   Matching m;
   for (const auto u : left) {
      if (mate[u] != none) {
         m.edges.emplace_back(std::min(u, mate[u]), std::max(u, mate[u]));
      }
   }
   std::sort(m.edges.begin(), m.edges.end());
   m.size = m.edges.size();
   return m;
}

namespace detail {

/// Dinic max flow with 64-bit capacities.
class FlowNetwork {
 public:
   explicit FlowNetwork(std::size_t n) : adj_(n), level_(n), it_(n) {}

   void add_edge(std::size_t from, std::size_t to, std::int64_t cap) {
      adj_[from].push_back(arcs_.size());
      arcs_.push_back({to, cap});
      adj_[to].push_back(arcs_.size());
      arcs_.push_back({from, 0});
   }

   std::int64_t max_flow(std::size_t s, std::size_t t) {
      std::int64_t flow = 0;
      while (levels(s, t)) {
         std::fill(it_.begin(), it_.end(), 0);
         while (const auto f =
                     push(s, t, std::numeric_limits<std::int64_t>::max())) {
            flow += f;
         }
      }
      return flow;
   }

   /// Vertices reachable from s in the residual network.
   [[nodiscard]] std::vector<char> reachable(std::size_t s) const {
      std::vector<char> seen(adj_.size(), 0);
      std::vector<std::size_t> stack{s};
      seen[s] = 1;
      while (!stack.empty()) {
         const auto u = stack.back();
         stack.pop_back();
         for (const auto id : adj_[u]) {
            const auto& a = arcs_[id];
            if (a.cap > 0 && !seen[a.to]) {
               seen[a.to] = 1;
               stack.push_back(a.to);
            }
         }
      }
      return seen;
   }

 private:
   struct Arc {
      std::size_t to;
      std::int64_t cap;
   };

   bool levels(std::size_t s, std::size_t t) {
      std::fill(level_.begin(), level_.end(), -1);
      std::queue<std::size_t> queue;
      level_[s] = 0;
      queue.push(s);
      while (!queue.empty()) {
         const auto u = queue.front();
         queue.pop();
         for (const auto id : adj_[u]) {
            const auto& a = arcs_[id];
            if (a.cap > 0 && level_[a.to] < 0) {
               level_[a.to] = level_[u] + 1;
               queue.push(a.to);
            }
         }
      }
      return level_[t] >= 0;
   }

   std::int64_t push(std::size_t u, std::size_t t, std::int64_t limit) {
      if (u == t) {
         return limit;
      }
      for (; it_[u] < adj_[u].size(); ++it_[u]) {
         const auto id = adj_[u][it_[u]];
         auto& a = arcs_[id];
         if (a.cap > 0 && level_[a.to] == level_[u] + 1) {
            if (const auto f = push(a.to, t, std::min(limit, a.cap))) {
               a.cap -= f;
               arcs_[id ^ 1].cap += f;
               return f;
            }
         }
      }
      return 0;
   }

   std::vector<std::vector<std::size_t>> adj_;
   std::vector<Arc> arcs_;
   std::vector<int> level_;
   std::vector<std::size_t> it_;
};

}  // namespace detail

/// Maximum-weight independent set: complement of a minimum-weight vertex
/// cover read off a minimum source/sink cut.
inline std::vector<std::size_t> max_weight_independent_set(const BipGraph& g) {
   const auto& side = g.coloring().side;
   const std::size_t n = g.size();
   const std::size_t source = n;
   const std::size_t sink = n + 1;
   std::int64_t total = 0;
   for (const auto w : g.weights()) {
      total += w;
   }
   const std::int64_t inf = total + 1;

   detail::FlowNetwork net(n + 2);
   for (std::size_t v = 0; v < n; ++v) {
      if (side[v] == Side::A) {
         net.add_edge(source, v, g.weight(v));
      } else {
         net.add_edge(v, sink, g.weight(v));
      }
   }
   for (const auto& [a, b] : g.edges()) {
      const auto [l, r] = side[a] == Side::A ? Edge{a, b} : Edge{b, a};
      net.add_edge(l, r, inf);
   }
   net.max_flow(source, sink);
   const auto cut = net.reachable(source);

   std::vector<std::size_t> out;
   for (std::size_t v = 0; v < n; ++v) {
      const bool in_cover = side[v] == Side::A ? !cut[v] : cut[v];
      if (!in_cover) {
         out.push_back(v);
      }
   }
   return out;
}

/// Heaviest independent set containing every vertex of `required`, or
/// nullopt if `required` itself is not independent.
inline std::optional<std::vector<std::size_t>> independent_set_containing(
     const BipGraph& g, std::span<const std::size_t> required) {
   if (!g.is_independent(required)) {
      return std::nullopt;
   }
   std::vector<char> blocked(g.size(), 0);
   for (const auto v : required) {
      blocked[v] = 1;
      for (const auto u : g.neighbors(v)) {
         blocked[u] = 1;
      }
   }
   std::vector<std::size_t> rest;
   for (std::size_t v = 0; v < g.size(); ++v) {
      if (!blocked[v]) {
         rest.push_back(v);
      }
   }
   std::vector<std::size_t> out(required.begin(), required.end());
   for (const auto local : max_weight_independent_set(g.induced(rest))) {
      out.push_back(rest[local]);
   }
   std::sort(out.begin(), out.end());
   out.erase(std::unique(out.begin(), out.end()), out.end());
   return out;
}

}  // namespace bisched
