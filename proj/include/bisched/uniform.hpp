#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bisched/bipartite.hpp"
#include "bisched/core.hpp"
#include "bisched/errors.hpp"
#include "bisched/oracle.hpp"
#include "bisched/rational.hpp"
#include "bisched/unrelated.hpp"

namespace bisched {

/// Rounded-down capacities floor(s_i * time) of every machine.
struct CapacityProfile {
   Rational time;
   std::vector<std::int64_t> capacity;
};

inline CapacityProfile capacities_at(const MachineEnv& env,
                                     const Rational& time) {
   CapacityProfile p{time, {}};
   p.capacity.reserve(env.m());
   for (const auto& s : env.speeds()) {
      p.capacity.push_back((s * time).floor());
   }
   return p;
}

/// Smallest t >= 0 with sum_i floor(s_i t) >= target. Starts from the
/// fractional optimum target / sum(s) and walks the next integer breakpoints
/// (c + 1) / s_i of each machine in time order on a heap.
inline Rational min_time_covering(std::span<const Rational> speeds,
                                  std::int64_t target) {
   if (target <= 0) {
      return Rational(0);
   }
   if (speeds.empty()) {
      throw Infeasible("no machine available to cover a positive requirement");
   }
   Rational speed_sum(0);
   for (const auto& s : speeds) {
      speed_sum += s;
   }
   const Rational start = Rational(target) / speed_sum;
   std::int64_t sum = 0;
   std::vector<std::int64_t> cap(speeds.size());
   for (std::size_t i = 0; i < speeds.size(); ++i) {
      cap[i] = (speeds[i] * start).floor();
      sum += cap[i];
   }
   if (sum >= target) {
      return start;
   }
   using Entry = std::pair<Rational, std::size_t>;
   auto later = [](const Entry& a, const Entry& b) {
      return a.first > b.first || (a.first == b.first && a.second > b.second);
   };
   std::priority_queue<Entry, std::vector<Entry>, decltype(later)> heap(later);
   for (std::size_t i = 0; i < speeds.size(); ++i) {
      heap.emplace(Rational(cap[i] + 1) / speeds[i], i);
   }
   while (true) {
      const auto [t, i] = heap.top();
      heap.pop();
      ++cap[i];
      if (++sum >= target) {
         return t;
      }
      heap.emplace(Rational(cap[i] + 1) / speeds[i], i);
   }
}

struct OptLb {
   Rational value;
   CapacityProfile witness;
};

/// Least time at which (a) all machines cover psum, (b) M2..Mm cover the
/// jobs outside `independent`, and (c) M1 can process pmax.
inline OptLb opt_lb(const Instance& inst,
                    std::span<const std::size_t> independent) {
   if (inst.env().kind() == MachineKind::Unrelated) {
      throw UnsupportedQuery("capacity lower bound needs uniform machines");
   }
   const auto t = totals(inst);
   const auto& speeds = inst.env().speeds();

   std::vector<char> in(inst.n(), 0);
   for (const auto j : independent) {
      in[j] = 1;
   }
   std::int64_t rest = 0;
   for (std::size_t j = 0; j < inst.n(); ++j) {
      if (!in[j]) {
         rest += inst.p(j);
      }
   }

   const Rational all = min_time_covering(speeds, t.psum);
   Rational others(0);
   if (rest > 0) {
      if (inst.m() == 1) {
         throw Infeasible("jobs outside the independent set need a second "
                          "machine");
      }
      others = min_time_covering(std::span(speeds).subspan(1), rest);
   }
   const Rational fits_max = Rational(t.pmax) / speeds.front();
   const Rational value = max(all, max(others, fits_max));
   return {value, capacities_at(inst.env(), value)};
}

struct ListJob {
   std::size_t id = 0;
   std::int64_t p = 0;
};

struct ListMachine {
   std::size_t id = 0;
   std::int64_t budget = 0;
};

struct ListPlacement {
   /// (job id, machine id) for every placed job, in placement order.
   std::vector<std::pair<std::size_t, std::size_t>> placed;
   /// First job that fit on no machine; nothing after it is placed.
   std::optional<std::size_t> overflow;
};

/// First fit in the given job order against per-machine integer budgets.
inline ListPlacement list_schedule(std::span<const ListJob> jobs,
                                   std::span<const ListMachine> machines) {
   std::vector<std::int64_t> left;
   left.reserve(machines.size());
   for (const auto& m : machines) {
      left.push_back(m.budget);
   }
   ListPlacement out;
   for (const auto& job : jobs) {
      bool placed = false;
      for (std::size_t q = 0; q < machines.size(); ++q) {
         if (left[q] >= job.p) {
            left[q] -= job.p;
            out.placed.emplace_back(job.id, machines[q].id);
            placed = true;
            break;
         }
      }
      if (!placed) {
         out.overflow = job.id;
         return out;
      }
   }
   return out;
}

namespace detail {

inline std::int64_t ceil_sqrt(std::int64_t v) {
   auto r = static_cast<std::int64_t>(
        std::sqrt(static_cast<long double>(std::max<std::int64_t>(v, 0))));
   while (r * r > v) --r;
   while (r * r < v) ++r;
   return r;
}

/// Jobs sorted by non-increasing requirement, ties by id.
inline std::vector<ListJob> lpt_order(const Instance& inst,
                                      std::span<const std::size_t> ids) {
   std::vector<ListJob> jobs;
   jobs.reserve(ids.size());
   for (const auto j : ids) {
      jobs.push_back({j, inst.p(j)});
   }
   std::stable_sort(jobs.begin(), jobs.end(),
                    [](const ListJob& a, const ListJob& b) {
                       return a.p > b.p || (a.p == b.p && a.id < b.id);
                    });
   return jobs;
}

/// List-schedules `jobs` onto `machines` starting from the given budgets.
/// On overflow every machine's time allowance b_i / s_i is doubled (a zero
/// budget starts from `fallback_time`) and the group is retried.
inline void place_group(const MachineEnv& env, std::span<const ListJob> jobs,
                        std::vector<ListMachine> machines,
                        const Rational& fallback_time, Schedule& out) {
   if (jobs.empty()) {
      return;
   }
   if (machines.empty()) {
      throw std::logic_error("job group has no machines");
   }
   std::vector<Rational> allowance;
   allowance.reserve(machines.size());
   for (const auto& m : machines) {
      allowance.push_back(m.budget > 0 ? Rational(m.budget) / env.speed(m.id)
                                       : fallback_time);
   }
   while (true) {
      const auto placement = list_schedule(jobs, machines);
      if (!placement.overflow) {
         for (const auto& [job, machine] : placement.placed) {
            out.assignment[job] = machine;
         }
         return;
      }
      for (std::size_t q = 0; q < machines.size(); ++q) {
         allowance[q] = allowance[q] * Rational(2);
         if (allowance[q] == Rational(0)) {
            allowance[q] = Rational(1);
         }
         machines[q].budget = (env.speed(machines[q].id) * allowance[q]).floor();
      }
   }
}

/// Two-machine view (M1, M2) of a uniform instance as an unrelated one with
/// integer times proportional to p_j / s_i.
inline Instance first_two_as_unrelated(const Instance& inst) {
   const auto& s1 = inst.env().speed(0);
   const auto& s2 = inst.env().speed(1);
   const std::int64_t f1 = s1.den() * s2.num();
   const std::int64_t f2 = s2.den() * s1.num();
   std::vector<std::vector<std::int64_t>> rows(2);
   for (std::size_t j = 0; j < inst.n(); ++j) {
      rows[0].push_back(inst.p(j) * f1);
      rows[1].push_back(inst.p(j) * f2);
   }
   return Instance::unrelated(rows, inst.conflicts().edges());
}

}  // namespace detail

struct SqrtPsumResult {
   Schedule schedule;
   bool brute_force = false;
   Schedule s1;
   std::optional<Schedule> s2;
   std::optional<std::vector<std::size_t>> independent;  // I
   std::optional<OptLb> lower_bound;
   std::size_t k = 0;        // 1-based, last machine for J \ I
   std::size_t k_prime = 0;  // 1-based, last machine for J1'
};

/// sqrt(psum)-approximation for uniform machines with a bipartite conflict
/// graph. S1 runs the two-machine FPTAS (eps = 1) on M1, M2. S2 exists when
/// an independent set I containing every heavy job (p_j^2 >= psum) exists:
/// J \ I is split by an inequitable coloring (J1', J2') over M2..Mk and I
/// goes to M1 and M_{k+1}..Mm. The better of the two is returned.
inline SqrtPsumResult sqrt_psum_schedule_detailed(const Instance& inst) {
   if (inst.env().kind() == MachineKind::Unrelated) {
      throw UnsupportedQuery("sqrt-psum algorithm needs uniform machines");
   }
   require_feasible(inst);
   const std::size_t n = inst.n();
   const std::size_t m = inst.m();
   const auto tot = totals(inst);
   SqrtPsumResult r;

   if (tot.psum <= 4) {
      r.brute_force = true;
      r.schedule = exact_min_makespan(inst).schedule;
      r.s1 = r.schedule;
      return r;
   }

   const auto& g = inst.conflicts();
   std::vector<std::size_t> heavy;
   for (std::size_t j = 0; j < n; ++j) {
      if (inst.p(j) * inst.p(j) >= tot.psum) {
         heavy.push_back(j);
      }
   }
   r.independent = independent_set_containing(g, heavy);

   if (m == 1) {
      r.s1.assignment.assign(n, 0);
   } else {
      r.s1 = fptas_r2_bipartite(detail::first_two_as_unrelated(inst),
                                Rational(1));
   }

   if (r.independent && m >= 3) {
      const auto& indep = *r.independent;
      const auto lb = opt_lb(inst, indep);
      r.lower_bound = lb;
      const auto& cap = lb.witness.capacity;

      std::vector<char> in(n, 0);
      for (const auto j : indep) in[j] = 1;
      std::vector<std::size_t> rest_ids;
      std::int64_t rest = 0;
      for (std::size_t j = 0; j < n; ++j) {
         if (!in[j]) {
            rest_ids.push_back(j);
            rest += inst.p(j);
         }
      }

      // Zero-based machine indices from here on.
      std::size_t kk = m - 1;
      {
         std::int64_t acc = 0;
         for (std::size_t i = 1; i < m; ++i) {
            acc += cap[i];
            if (i >= 2 && acc >= rest) {
               kk = i;
               break;
            }
         }
      }

      const auto split = inequitable_two_coloring(g.induced(rest_ids));
      std::vector<std::size_t> j1;
      std::vector<std::size_t> j2;
      for (const auto v : split.v1) j1.push_back(rest_ids[v]);
      for (const auto v : split.v2) j2.push_back(rest_ids[v]);
      std::int64_t w1 = 0;
      for (const auto j : j1) w1 += inst.p(j);

      std::size_t kp = 1;
      {
         std::int64_t acc = 0;
         for (std::size_t i = 1; i < kk; ++i) {
            acc += cap[i];
            if (acc > w1) {
               break;
            }
            kp = i;
         }
      }
      r.k = kk + 1;
      r.k_prime = kp + 1;

      const std::int64_t margin = detail::ceil_sqrt(tot.psum);
      auto inflated = [&](std::size_t i) -> std::int64_t {
         if (cap[i] >= 2) return 2 * cap[i] + margin;
         return cap[i] * margin;
      };

      std::vector<ListMachine> g1;
      std::vector<ListMachine> g2;
      std::vector<ListMachine> g3;
      for (std::size_t i = 1; i <= kp; ++i) g1.push_back({i, inflated(i)});
      for (std::size_t i = kp + 1; i <= kk; ++i) g2.push_back({i, inflated(i)});
      g3.push_back({0, (inst.env().speed(0) * Rational(4) * lb.value).floor()});
      for (std::size_t i = kk + 1; i < m; ++i) {
         g3.push_back({i, (inst.env().speed(i) * Rational(margin) * lb.value)
                               .floor()});
      }

      Schedule s2;
      s2.assignment.assign(n, 0);
      const Rational fallback = lb.value > Rational(0) ? lb.value : Rational(1);
      detail::place_group(inst.env(), detail::lpt_order(inst, j1), g1,
                          fallback, s2);
      detail::place_group(inst.env(), detail::lpt_order(inst, j2), g2,
                          fallback, s2);
      detail::place_group(inst.env(), detail::lpt_order(inst, indep), g3,
                          fallback, s2);
      r.s2 = std::move(s2);
   }

   r.schedule = r.s1;
   if (r.s2 && makespan(*r.s2, inst) < makespan(r.s1, inst)) {
      r.schedule = *r.s2;
   }
   return r;
}

inline Schedule sqrt_psum_schedule(const Instance& inst) {
   return sqrt_psum_schedule_detailed(inst).schedule;
}

/// Exact algorithm for two uniform machines and unit jobs. For every split
/// (n1, n2) the two-machine FPTAS is run on times p_{1j} = n2, p_{2j} = n1
/// with eps = 1/(n+1); only a schedule realizing exactly the split can be
/// within that factor of n1*n2, so the split is feasible iff the FPTAS
/// returns it.
inline Schedule q2_exact_unit(const Instance& inst) {
   if (inst.env().kind() == MachineKind::Unrelated || inst.m() != 2) {
      throw PreconditionError("q2_exact_unit needs exactly two uniform "
                              "machines");
   }
   for (std::size_t j = 0; j < inst.n(); ++j) {
      if (inst.p(j) != 1) {
         throw PreconditionError("q2_exact_unit needs unit jobs");
      }
   }
   const std::size_t n = inst.n();
   const auto& s1 = inst.env().speed(0);
   const auto& s2 = inst.env().speed(1);
   const auto& edges = inst.conflicts().edges();
   const Rational eps(1, static_cast<std::int64_t>(n) + 1);

   std::optional<Rational> best;
   Schedule best_schedule;
   for (std::size_t n1 = 0; n1 <= n; ++n1) {
      const std::size_t n2 = n - n1;
      Schedule candidate;
      if (n1 == 0 || n2 == 0) {
         if (!edges.empty()) {
            continue;
         }
         candidate.assignment.assign(n, n1 == 0 ? 1 : 0);
      } else {
         std::vector<std::vector<std::int64_t>> rows(2);
         rows[0].assign(n, static_cast<std::int64_t>(n2));
         rows[1].assign(n, static_cast<std::int64_t>(n1));
         candidate = fptas_r2_bipartite(Instance::unrelated(rows, edges), eps);
         const auto on_m1 = static_cast<std::size_t>(
              std::count(candidate.assignment.begin(),
                         candidate.assignment.end(), std::size_t{0}));
         if (on_m1 != n1) {
            continue;
         }
      }
      const Rational span =
           max(Rational(static_cast<std::int64_t>(n1)) / s1,
               Rational(static_cast<std::int64_t>(n2)) / s2);
      if (!best || span < *best) {
         best = span;
         best_schedule = std::move(candidate);
      }
   }
   if (!best) {
      throw std::logic_error("no feasible split found");
   }
   return best_schedule;
}

}  // namespace bisched
