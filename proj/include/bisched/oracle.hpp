#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "bisched/core.hpp"
#include "bisched/errors.hpp"
#include "bisched/precolor.hpp"
#include "bisched/rational.hpp"

namespace bisched {

struct SearchBudget {
   std::size_t max_jobs = 14;
   std::uint64_t max_nodes = 200'000'000;
   double time_cap = 60.0;  // seconds
};

struct OracleResult {
   Schedule schedule;
   Rational makespan;
};

namespace detail {

/// Per-machine integer multipliers c_i with time_i * L = load_i * c_i, so
/// every comparison in the search stays in 64-bit integers.
struct ScaledSpeeds {
   std::vector<std::int64_t> factor;
   std::int64_t scale = 1;  // L
};

inline ScaledSpeeds scaled_speeds(const MachineEnv& env) {
   ScaledSpeeds out;
   for (const auto& s : env.speeds()) {
      out.scale = std::lcm(out.scale, s.num());
   }
   for (const auto& s : env.speeds()) {
      out.factor.push_back(s.den() * (out.scale / s.num()));
   }
   return out;
}

class Stopwatch {
 public:
   [[nodiscard]] double seconds() const {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                           start_)
           .count();
   }

 private:
   std::chrono::steady_clock::time_point start_ =
        std::chrono::steady_clock::now();
};

}  // namespace detail

/// Optimal makespan by depth-first assignment in job-index order, machines
/// tried in index order, incumbent replaced only on strict improvement; the
/// result is the lexicographically smallest optimal assignment. Identical
/// machines are symmetry-reduced (a job never opens a machine beyond the
/// first unused one).
inline OracleResult exact_min_makespan(const Instance& inst,
                                       const SearchBudget& budget = {}) {
   require_feasible(inst);
   const std::size_t n = inst.n();
   const std::size_t m = inst.m();
   if (n > budget.max_jobs) {
      throw BudgetExceeded("instance has " + std::to_string(n) +
                           " jobs, oracle budget is " +
                           std::to_string(budget.max_jobs));
   }
   const auto scaled = detail::scaled_speeds(inst.env());
   const bool symmetric = inst.env().kind() == MachineKind::Identical;
   const auto& g = inst.conflicts();

   // cost[j][i]: scaled completion-time contribution of job j on machine i.
   std::vector<std::vector<std::int64_t>> cost(n, std::vector<std::int64_t>(m));
   for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < m; ++i) {
         cost[j][i] = inst.requirement(i, j) * scaled.factor[i];
      }
   }

   // Global lower bound for identical/uniform: total work over total speed.
   std::int64_t floor_lb = 0;
   if (inst.env().kind() != MachineKind::Unrelated && n > 0) {
      Rational speed_sum(0);
      for (const auto& s : inst.env().speeds()) {
         speed_sum += s;
      }
      const auto t = totals(inst);
      floor_lb = (Rational(t.psum) * Rational(scaled.scale) / speed_sum).ceil();
   }

   std::vector<std::int64_t> load(m, 0);
   std::vector<std::size_t> assign(n, 0);
   std::vector<std::size_t> best;
   std::int64_t incumbent = std::numeric_limits<std::int64_t>::max();
   std::uint64_t nodes = 0;
   detail::Stopwatch clock;
   bool done = false;

   auto conflicts_on = [&](std::size_t j, std::size_t i) {
      for (const auto u : g.neighbors(j)) {
         if (u < j && assign[u] == i) {
            return true;
         }
      }
      return false;
   };

   auto search = [&](auto&& self, std::size_t j, std::int64_t current,
                     std::size_t used) -> void {
      if (done) {
         return;
      }
      if (++nodes > budget.max_nodes) {
         throw BudgetExceeded("oracle node budget exhausted");
      }
      if ((nodes & 0xFFFF) == 0 && clock.seconds() > budget.time_cap) {
         throw BudgetExceeded("oracle time budget exhausted");
      }
      if (j == n) {
         incumbent = current;
         best = assign;
         if (incumbent <= floor_lb) {
            done = true;
         }
         return;
      }
      const std::size_t limit = symmetric ? std::min(m, used + 1) : m;
      for (std::size_t i = 0; i < limit; ++i) {
         const std::int64_t next = load[i] + cost[j][i];
         if (std::max(current, next) >= incumbent) {
            continue;
         }
         if (conflicts_on(j, i)) {
            continue;
         }
         load[i] = next;
         assign[j] = i;
         self(self, j + 1, std::max(current, next),
              std::max(used, i + 1));
         load[i] -= cost[j][i];
         if (done) {
            return;
         }
      }
   };
   search(search, 0, 0, 0);

   OracleResult out;
   out.schedule.assignment = best;
   out.makespan = Rational(incumbent == std::numeric_limits<std::int64_t>::max()
                                ? 0
                                : incumbent,
                           scaled.scale);
   return out;
}

/// Proper 3-coloring with anchor t colored t, by backtracking in vertex
/// order. Colors are 0, 1, 2 for c1, c2, c3.
inline std::optional<std::vector<int>> exact_precolor_extension(
     const PrecolorInstance& pre, std::uint64_t max_nodes = 50'000'000) {
   pre.check();
   constexpr int k = 3;
   const auto& g = pre.graph;
   const std::size_t n = g.size();
   std::vector<int> color(n, -1);
   for (int t = 0; t < k; ++t) {
      color[pre.anchors[static_cast<std::size_t>(t)]] = t;
   }
   for (const auto& [a, b] : g.edges()) {
      if (color[a] >= 0 && color[a] == color[b]) {
         return std::nullopt;
      }
   }
   std::vector<std::size_t> order;
   for (std::size_t v = 0; v < n; ++v) {
      if (color[v] < 0) {
         order.push_back(v);
      }
   }
   std::uint64_t nodes = 0;
   auto search = [&](auto&& self, std::size_t idx) -> bool {
      if (idx == order.size()) {
         return true;
      }
      if (++nodes > max_nodes) {
         throw BudgetExceeded("precoloring search budget exhausted");
      }
      const auto v = order[idx];
      for (int c = 0; c < k; ++c) {
         bool ok = true;
         for (const auto u : g.neighbors(v)) {
            if (color[u] == c) {
               ok = false;
               break;
            }
         }
         if (!ok) {
            continue;
         }
         color[v] = c;
         if (self(self, idx + 1)) {
            return true;
         }
         color[v] = -1;
      }
      return false;
   };
   if (!search(search, 0)) {
      return std::nullopt;
   }
   return color;
}

}  // namespace bisched
