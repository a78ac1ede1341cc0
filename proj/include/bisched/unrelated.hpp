#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bisched/bipartite.hpp"
#include "bisched/core.hpp"
#include "bisched/errors.hpp"
#include "bisched/rational.hpp"

namespace bisched {

/// How a component's two colour classes are split over (M1, M2).
enum class Orientation : std::uint8_t {
   Straight,  // part 1 on M1, part 2 on M2
   Swapped,   // part 1 on M2, part 2 on M1
};

struct ReducedComponent {
   std::vector<std::size_t> part1;  // side A vertices
   std::vector<std::size_t> part2;  // side B vertices
   /// load[i][l]: requirement of part l+1 on machine i+1.
   std::int64_t load[2][2] = {{0, 0}, {0, 0}};
   /// Reduced job entries; both zero for a dominated (dummy) component.
   std::int64_t job_m1 = 0;
   std::int64_t job_m2 = 0;
   std::int64_t base_m1 = 0;  // P'_k
   std::int64_t base_m2 = 0;  // P''_k
   /// Orientation realized when the reduced job goes to M1 / to M2. For a
   /// dummy both are the dominant orientation.
   Orientation on_m1 = Orientation::Straight;
   Orientation on_m2 = Orientation::Straight;

   [[nodiscard]] bool dummy() const { return job_m1 == 0 && job_m2 == 0; }
};

struct ReducedR2 {
   std::vector<ReducedComponent> components;

   [[nodiscard]] std::int64_t base_m1() const {
      std::int64_t s = 0;
      for (const auto& c : components) s += c.base_m1;
      return s;
   }
   [[nodiscard]] std::int64_t base_m2() const {
      std::int64_t s = 0;
      for (const auto& c : components) s += c.base_m2;
      return s;
   }
};

namespace detail {

inline void require_r2(const Instance& inst) {
   if (inst.m() != 2) {
      throw PreconditionError("two-machine algorithm applied to m=" +
                              std::to_string(inst.m()));
   }
}

}  // namespace detail

/// Collapses every connected component into one binary decision. A
/// component with a dominant orientation becomes a dummy with its loads as
/// fixed bases; otherwise the bases are the per-machine minima and the
/// reduced job carries the max-min excess on each machine.
inline ReducedR2 reduce_components(const Instance& inst) {
   detail::require_r2(inst);
   const auto& g = inst.conflicts();
   const auto& side = g.coloring().side;
   ReducedR2 out;
   for (const auto& comp : components(g)) {
      ReducedComponent rc;
      for (const auto v : comp) {
         const std::size_t l = side[v] == Side::A ? 0 : 1;
         (l == 0 ? rc.part1 : rc.part2).push_back(v);
         rc.load[0][l] += inst.requirement(0, v);
         rc.load[1][l] += inst.requirement(1, v);
      }
      const auto p11 = rc.load[0][0];
      const auto p12 = rc.load[0][1];
      const auto p21 = rc.load[1][0];
      const auto p22 = rc.load[1][1];
      if (p11 <= p12 && p22 <= p21) {
         rc.base_m1 = p11;
         rc.base_m2 = p22;
         rc.on_m1 = rc.on_m2 = Orientation::Straight;
      } else if (p12 <= p11 && p21 <= p22) {
         rc.base_m1 = p12;
         rc.base_m2 = p21;
         rc.on_m1 = rc.on_m2 = Orientation::Swapped;
      } else {
         rc.job_m1 = std::max(p11, p12) - std::min(p11, p12);
         rc.job_m2 = std::max(p21, p22) - std::min(p21, p22);
         rc.base_m1 = std::min(p11, p12);
         rc.base_m2 = std::min(p21, p22);
         // Sending the job to M1 means M1 takes its larger part.
         rc.on_m1 = p11 > p12 ? Orientation::Straight : Orientation::Swapped;
         rc.on_m2 = rc.on_m1 == Orientation::Straight ? Orientation::Swapped
                                                      : Orientation::Straight;
      }
      out.components.push_back(std::move(rc));
   }
   return out;
}

/// Expands per-component decisions (0 = reduced job on M1, 1 = on M2) into
/// a schedule of the original jobs.
inline Schedule reconstruct(const ReducedR2& reduced,
                            const std::vector<int>& decision,
                            std::size_t n_jobs) {
   if (decision.size() != reduced.components.size()) {
      throw std::invalid_argument("one decision per component expected");
   }
   Schedule s;
   s.assignment.assign(n_jobs, 0);
   for (std::size_t k = 0; k < decision.size(); ++k) {
      const auto& c = reduced.components[k];
      const auto o = decision[k] == 0 ? c.on_m1 : c.on_m2;
      const std::size_t m_part1 = o == Orientation::Straight ? 0 : 1;
      for (const auto v : c.part1) s.assignment[v] = m_part1;
      for (const auto v : c.part2) s.assignment[v] = 1 - m_part1;
   }
   return s;
}

struct TwoApproxResult {
   Schedule schedule;
   std::int64_t t1 = 0;       // sum of P'
   std::int64_t t2 = 0;       // sum of P''
   std::int64_t extra1 = 0;   // excess placed on M1
   std::int64_t extra2 = 0;   // excess placed on M2
   std::int64_t t_extra = 0;  // extra1 + extra2

   /// Makespan implied by the decomposition: max(T1 + E1, T2 + E2).
   [[nodiscard]] std::int64_t decomposed_makespan() const {
      return std::max(t1 + extra1, t2 + extra2);
   }
   /// Upper bound max{T1, T2} + T_extra.
   [[nodiscard]] std::int64_t bound() const {
      return std::max(t1, t2) + t_extra;
   }
};

/// Every reduced job goes to the machine with its smaller entry (ties to M1).
inline TwoApproxResult two_approx_r2_detailed(const Instance& inst) {
   const auto reduced = reduce_components(inst);
   TwoApproxResult r;
   std::vector<int> decision;
   decision.reserve(reduced.components.size());
   for (const auto& c : reduced.components) {
      r.t1 += c.base_m1;
      r.t2 += c.base_m2;
      if (c.job_m1 <= c.job_m2) {
         decision.push_back(0);
         r.extra1 += c.job_m1;
      } else {
         decision.push_back(1);
         r.extra2 += c.job_m2;
      }
   }
   r.t_extra = r.extra1 + r.extra2;
   r.schedule = reconstruct(reduced, decision, inst.n());
   return r;
}

inline Schedule two_approx_r2(const Instance& inst) {
   return two_approx_r2_detailed(inst).schedule;
}

struct CoreJob {
   std::int64_t p1 = 0;
   std::int64_t p2 = 0;
};

struct CoreResult {
   std::vector<int> assignment;   // 0 = M1, 1 = M2
   std::int64_t makespan = 0;
   std::size_t max_layer_states = 0;
   std::int64_t upper_bound = 0;  // T, min-entry makespan
   Rational unit;                 // rounding unit for M1 loads
};

/// Largest per-layer state count the scaled DP may reach for n jobs.
inline std::int64_t fptas_state_bound(std::size_t n, const Rational& eps) {
   return (Rational(static_cast<std::int64_t>(2 * n)) / eps).ceil() +
          static_cast<std::int64_t>(n) + 1;
}

/// (1+eps)-approximation for two unrelated machines without conflicts.
/// M1 loads are rounded down to multiples of unit = max(1, eps*T/(2n));
/// per rounded M1 load the DP keeps the smallest exact M2 load (then the
/// smallest exact M1 load). The rounding costs less than n*unit <= eps*T/2
/// <= eps*OPT on M1.
inline CoreResult fptas_r2_core(const std::vector<CoreJob>& jobs,
                                const Rational& eps) {
   if (eps <= Rational(0) || eps > Rational(1)) {
      throw PreconditionError("epsilon must lie in (0, 1], got " + eps.str());
   }
   for (const auto& j : jobs) {
      if (j.p1 < 0 || j.p2 < 0) {
         throw PreconditionError("processing times must be non-negative");
      }
   }
   const std::size_t n = jobs.size();
   CoreResult out;
   std::int64_t l1 = 0;
   std::int64_t l2 = 0;
   for (const auto& j : jobs) {
      if (j.p1 <= j.p2) {
         l1 += j.p1;
      } else {
         l2 += j.p2;
      }
   }
   const std::int64_t upper = std::max(l1, l2);
   out.upper_bound = upper;
   if (n == 0) {
      out.unit = Rational(1);
      out.max_layer_states = 1;
      return out;
   }

   Rational unit = eps * Rational(upper) /
                   Rational(static_cast<std::int64_t>(2 * n));
   if (unit < Rational(1)) {
      unit = Rational(1);
   }
   out.unit = unit;
   const std::int64_t max_key = (Rational(upper) / unit).floor();
   const auto width = static_cast<std::size_t>(max_key) + 1;

   std::vector<std::int64_t> key(n);
   for (std::size_t j = 0; j < n; ++j) {
      key[j] = (Rational(jobs[j].p1) / unit).floor();
   }

   constexpr std::int64_t unreachable = std::numeric_limits<std::int64_t>::max();
   std::vector<std::int64_t> m1(width, unreachable);
   std::vector<std::int64_t> m2(width, unreachable);
   std::vector<std::int64_t> n1(width);
   std::vector<std::int64_t> n2(width);
   // choice[j][k]: 1 if the best state at key k after job j put j on M1.
   std::vector<std::vector<bool>> choice(n, std::vector<bool>(width, false));
   m1[0] = 0;
   m2[0] = 0;
   std::size_t states = 1;
   out.max_layer_states = 1;

   auto better = [](std::int64_t a2, std::int64_t a1, std::int64_t b2,
                    std::int64_t b1) {
      return a2 < b2 || (a2 == b2 && a1 < b1);
   };

   for (std::size_t j = 0; j < n; ++j) {
      std::fill(n1.begin(), n1.end(), unreachable);
      std::fill(n2.begin(), n2.end(), unreachable);
      const auto& job = jobs[j];
      for (std::size_t k = 0; k < width; ++k) {
         if (m2[k] == unreachable) {
            continue;
         }
         // M2: same key.
         const std::int64_t to_m2 = m2[k] + job.p2;
         if (to_m2 <= upper && better(to_m2, m1[k], n2[k], n1[k])) {
            n2[k] = to_m2;
            n1[k] = m1[k];
            choice[j][k] = false;
         }
         // M1: key advances.
         const auto target = static_cast<std::int64_t>(k) + key[j];
         if (target <= max_key) {
            const auto t = static_cast<std::size_t>(target);
            const std::int64_t load1 = m1[k] + job.p1;
            if (better(m2[k], load1, n2[t], n1[t])) {
               n2[t] = m2[k];
               n1[t] = load1;
               choice[j][t] = true;
            }
         }
      }
      m1.swap(n1);
      m2.swap(n2);
      states = static_cast<std::size_t>(
           std::count_if(m2.begin(), m2.end(),
                         [](std::int64_t v) { return v != unreachable; }));
      out.max_layer_states = std::max(out.max_layer_states, states);
   }

   std::size_t best_key = width;
   std::int64_t best = unreachable;
   for (std::size_t k = 0; k < width; ++k) {
      if (m2[k] == unreachable) {
         continue;
      }
      const auto span = std::max(m1[k], m2[k]);
      if (span < best) {
         best = span;
         best_key = k;
      }
   }
   if (best_key == width) {
      throw std::logic_error("scaled DP lost every state");
   }

   out.makespan = best;
   out.assignment.assign(n, 1);
   std::size_t k = best_key;
   for (std::size_t j = n; j-- > 0;) {
      if (choice[j][k]) {
         out.assignment[j] = 0;
         k -= static_cast<std::size_t>(key[j]);
      }
   }
   return out;
}

struct FptasResult {
   Schedule schedule;
   CoreResult core;
   std::int64_t two_approx_makespan = 0;  // T
};

/// (1+eps)-approximation for R2 with a bipartite conflict graph: components
/// are reduced to binary jobs and the common loads are carried by two
/// anchor jobs whose wrong-machine cost 2T excludes misplacement.
inline FptasResult fptas_r2_bipartite_detailed(const Instance& inst,
                                               const Rational& eps) {
   detail::require_r2(inst);
   const auto two = two_approx_r2_detailed(inst);
   const std::int64_t t =
        std::max(two.t1 + two.extra1, two.t2 + two.extra2);
   const auto reduced = reduce_components(inst);

   std::vector<CoreJob> jobs;
   std::vector<std::size_t> owner;  // component of each core job
   for (std::size_t k = 0; k < reduced.components.size(); ++k) {
      const auto& c = reduced.components[k];
      if (!c.dummy()) {
         jobs.push_back({c.job_m1, c.job_m2});
         owner.push_back(k);
      }
   }
   const std::size_t anchor1 = jobs.size();
   jobs.push_back({reduced.base_m1(), 2 * t});
   const std::size_t anchor2 = jobs.size();
   jobs.push_back({2 * t, reduced.base_m2()});

   FptasResult out;
   out.two_approx_makespan = t;
   out.core = fptas_r2_core(jobs, eps);
   if (out.core.assignment[anchor1] != 0 || out.core.assignment[anchor2] != 1) {
      throw std::logic_error("anchor job placed on its blocked machine");
   }
   std::vector<int> decision(reduced.components.size(), 0);
   for (std::size_t q = 0; q < owner.size(); ++q) {
      decision[owner[q]] = out.core.assignment[q];
   }
   out.schedule = reconstruct(reduced, decision, inst.n());
   return out;
}

inline Schedule fptas_r2_bipartite(const Instance& inst, const Rational& eps) {
   return fptas_r2_bipartite_detailed(inst, eps).schedule;
}

}  // namespace bisched
