#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bisched/bipartite.hpp"
#include "bisched/core.hpp"
#include "bisched/errors.hpp"
#include "bisched/rational.hpp"
#include "bisched/uniform.hpp"

namespace bisched {

/// splitmix64 (Steele, Lea, Flood). The reference constants are part of the
/// reproducibility contract of every generator in this file.
class SplitMix64 {
 public:
   explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

   std::uint64_t next() {
      std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      return z ^ (z >> 31);
   }

   /// Uniform integer in [lo, hi] by rejection.
   std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
      const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
      const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
      std::uint64_t draw = 0;
      do {
         draw = next();
      } while (draw >= limit);
      return lo + static_cast<std::int64_t>(draw % span);
   }

   /// True with probability exactly p (p in [0, 1]): draw / 2^64 < p.
   bool bernoulli(const Rational& p) {
      const unsigned __int128 draw = next();
      return draw * static_cast<unsigned __int128>(p.den()) <
             (static_cast<unsigned __int128>(p.num()) << 64);
   }

 private:
   std::uint64_t state_;
};

/// Seed of trial `t` in a Monte Carlo run: first output of a splitmix64
/// stream started at seed + t * 2^32 + 1.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t t) {
   return SplitMix64(seed + (t << 32) + 1).next();
}

struct GilbertParams {
   std::size_t n = 0;  // vertices per side
   Rational p;         // edge probability
   std::uint64_t seed = 0;

   /// p = a / n.
   static GilbertParams with_mean_degree(std::size_t n, const Rational& a,
                                         std::uint64_t seed) {
      return {n, a / Rational(static_cast<std::int64_t>(n)), seed};
   }
};

/// Random bipartite graph on parts [0, left) and [left, left + right): every
/// cross pair (i, j) in row-major order consumes one splitmix64 draw and is
/// an edge iff draw / 2^64 < p.
inline BipGraph gen_bipartite(std::size_t left, std::size_t right,
                              const Rational& p, std::uint64_t seed) {
   if (p < Rational(0) || p > Rational(1)) {
      throw PreconditionError("edge probability " + p.str() +
                              " outside [0, 1]");
   }
   SplitMix64 rng(seed);
   std::vector<Edge> edges;
   for (std::size_t i = 0; i < left; ++i) {
      for (std::size_t j = 0; j < right; ++j) {
         if (rng.bernoulli(p)) {
            edges.emplace_back(i, left + j);
         }
      }
   }
   return BipGraph(left + right, std::move(edges));
}

/// G(n, n, p): vertices 0..n-1 form V1, n..2n-1 form V2.
inline BipGraph gen_gilbert(const GilbertParams& params) {
   return gen_bipartite(params.n, params.n, params.p, params.seed);
}

struct Alg2Result {
   Schedule schedule;
   Rational lower_bound;  // least t with sum floor(s_i t) >= |J|
   std::size_t k = 0;     // 1-based; V2' occupies M2..Mk
   std::size_t v2_size = 0;
};

/// Unit jobs on uniform machines: V2' of an inequitable coloring goes to
/// M2..Mk for the least k whose capacities at the lower bound reach
/// |V2'| / 2, V1' to the remaining machines, both by first fit against
/// budgets floor(2 s_i lb).
inline Alg2Result alg2_schedule_detailed(const BipGraph& g,
                                         const MachineEnv& env) {
   if (env.kind() == MachineKind::Unrelated) {
      throw UnsupportedQuery("algorithm 2 needs uniform machines");
   }
   const std::size_t n = g.size();
   const std::size_t m = env.m();
   if (m == 1 && !g.edges().empty()) {
      throw Infeasible("one machine cannot host conflicting jobs");
   }
   Alg2Result r;
   r.schedule.assignment.assign(n, 0);
   r.lower_bound =
        min_time_covering(env.speeds(), static_cast<std::int64_t>(n));
   if (m == 1) {
      r.k = 1;
      return r;
   }
   const auto split = inequitable_two_coloring(g);
   r.v2_size = split.v2.size();
   const auto cap = capacities_at(env, r.lower_bound).capacity;

   std::size_t kk = m - 1;
   std::int64_t acc = 0;
   for (std::size_t i = 1; i < m; ++i) {
      acc += cap[i];
      if (2 * acc >= static_cast<std::int64_t>(split.v2.size())) {
         kk = i;
         break;
      }
   }
   r.k = kk + 1;

   const Rational twice = r.lower_bound * Rational(2);
   auto budget = [&](std::size_t i) {
      return ListMachine{i, (env.speed(i) * twice).floor()};
   };
   std::vector<ListMachine> low;
   std::vector<ListMachine> high{budget(0)};
   for (std::size_t i = 1; i <= kk; ++i) low.push_back(budget(i));
   for (std::size_t i = kk + 1; i < m; ++i) high.push_back(budget(i));

   auto unit = [](const std::vector<std::size_t>& ids) {
      std::vector<ListJob> jobs;
      jobs.reserve(ids.size());
      for (const auto j : ids) jobs.push_back({j, 1});
      return jobs;
   };
   const Rational fallback =
        r.lower_bound > Rational(0) ? r.lower_bound : Rational(1);
   detail::place_group(env, unit(split.v2), low, fallback, r.schedule);
   detail::place_group(env, unit(split.v1), high, fallback, r.schedule);
   return r;
}

inline Schedule alg2_schedule(const BipGraph& g, const MachineEnv& env) {
   return alg2_schedule_detailed(g, env).schedule;
}

inline Instance unit_instance(const BipGraph& g, const MachineEnv& env) {
   const std::vector<std::int64_t> ones(g.size(), 1);
   return Instance::with_requirements(ones, env, g.edges());
}

struct McTrial {
   std::size_t trial = 0;
   std::size_t n = 0;
   Rational p;
   std::size_t edges = 0;
   std::size_t isolated_v2 = 0;
   std::size_t v2prime = 0;
   std::size_t mu = 0;
   std::size_t alpha = 0;
   std::optional<Rational> ratio;  // v2prime / mu, absent when mu = 0
   Rational alg2_cmax;
   Rational lower_bound;
   bool valid = false;

   [[nodiscard]] Rational alg2_over_bound() const {
      return lower_bound > Rational(0) ? alg2_cmax / lower_bound : Rational(0);
   }
};

struct ColumnSummary {
   std::string name;
   double mean = 0.0;
   double stddev = 0.0;
   double max = 0.0;
   std::size_t count = 0;
};

struct McReport {
   std::vector<McTrial> trials;
   std::vector<ColumnSummary> summary;
};

/// One Monte Carlo trial: graph statistics plus an Algorithm 2 run.
inline McTrial mc_trial(const GilbertParams& params, const MachineEnv& env,
                        std::size_t t) {
   const GilbertParams p{params.n, params.p, trial_seed(params.seed, t)};
   const auto g = gen_gilbert(p);
   McTrial r;
   r.trial = t;
   r.n = params.n;
   r.p = params.p;
   r.edges = g.edges().size();
   for (std::size_t v = params.n; v < 2 * params.n; ++v) {
      r.isolated_v2 += g.neighbors(v).empty() ? 1 : 0;
   }
   r.v2prime = inequitable_two_coloring(g).v2.size();
   r.mu = max_matching(g).size;
   r.alpha = 2 * params.n - r.mu;
   if (r.mu > 0) {
      r.ratio = Rational(static_cast<std::int64_t>(r.v2prime),
                         static_cast<std::int64_t>(r.mu));
   }
   const auto alg = alg2_schedule_detailed(g, env);
   const auto inst = unit_instance(g, env);
   r.alg2_cmax = makespan(alg.schedule, inst);
   r.lower_bound = alg.lower_bound;
   r.valid = validate(alg.schedule, inst).valid;
   return r;
}

namespace detail {

inline ColumnSummary summarize(std::string name,
                               const std::vector<double>& values) {
   ColumnSummary s;
   s.name = std::move(name);
   s.count = values.size();
   if (values.empty()) {
      return s;
   }
   double sum = 0.0;
   s.max = values.front();
   for (const auto v : values) {
      sum += v;
      s.max = std::max(s.max, v);
   }
   s.mean = sum / static_cast<double>(values.size());
   double sq = 0.0;
   for (const auto v : values) {
      sq += (v - s.mean) * (v - s.mean);
   }
   s.stddev = values.size() > 1
                   ? std::sqrt(sq / static_cast<double>(values.size() - 1))
                   : 0.0;
   return s;
}

}  // namespace detail

inline McReport mc_stats(const GilbertParams& params, const MachineEnv& env,
                         std::size_t trials) {
   if (trials == 0) {
      throw PreconditionError("at least one trial is required");
   }
   McReport report;
   report.trials.reserve(trials);
   for (std::size_t t = 0; t < trials; ++t) {
      report.trials.push_back(mc_trial(params, env, t));
   }
   std::vector<double> edges, iso, v2, mu, alpha, ratio, cmax, lb, rel;
   for (const auto& r : report.trials) {
      edges.push_back(static_cast<double>(r.edges));
      iso.push_back(static_cast<double>(r.isolated_v2));
      v2.push_back(static_cast<double>(r.v2prime));
      mu.push_back(static_cast<double>(r.mu));
      alpha.push_back(static_cast<double>(r.alpha));
      if (r.ratio) ratio.push_back(r.ratio->to_double());
      cmax.push_back(r.alg2_cmax.to_double());
      lb.push_back(r.lower_bound.to_double());
      rel.push_back(r.alg2_over_bound().to_double());
   }
   report.summary = {
        detail::summarize("edges", edges),
        detail::summarize("isolated_v2", iso),
        detail::summarize("v2prime", v2),
        detail::summarize("mu", mu),
        detail::summarize("alpha", alpha),
        detail::summarize("ratio", ratio),
        detail::summarize("alg2_cmax", cmax),
        detail::summarize("lb", lb),
        detail::summarize("alg2_over_lb", rel),
   };
   return report;
}

/// Limit of (1 - (1 - a/n)^n) / (1 - e^{e^{-a} - 1}) as n grows:
/// (1 - e^{-a}) / (1 - e^{e^{-a} - 1}). Reporting only.
inline long double ratio_limit(const Rational& a) {
   if (a <= Rational(0)) {
      throw std::domain_error("ratio_limit needs a > 0, got " + a.str());
   }
   const long double x = static_cast<long double>(a.num()) /
                         static_cast<long double>(a.den());
   const long double u = std::expm1(-x);  // e^{-a} - 1
   return u / std::expm1(u);
}

/// Expected isolated fraction of one side, (1 - p)^n, for reporting.
inline long double isolated_fraction(std::size_t n, const Rational& p) {
   const long double q = 1.0L - static_cast<long double>(p.num()) /
                                     static_cast<long double>(p.den());
   return std::pow(q, static_cast<long double>(n));
}

/// Random small instances for ratio sweeps and acceptance suites.
struct RandomInstanceOptions {
   std::size_t n_min = 1;
   std::size_t n_max = 10;
   std::int64_t p_min = 1;
   std::int64_t p_max = 4;
   Rational edge_p{1, 2};
};

inline BipGraph random_conflicts(std::size_t n, const Rational& p,
                                 SplitMix64& rng) {
   const std::size_t left = n / 2 + n % 2;
   return gen_bipartite(left, n - left, p, rng.next());
}

inline Instance random_uniform_instance(std::uint64_t seed,
                                        std::vector<Rational> speeds,
                                        const RandomInstanceOptions& o) {
   SplitMix64 rng(seed);
   const auto n = static_cast<std::size_t>(rng.uniform(
        static_cast<std::int64_t>(o.n_min), static_cast<std::int64_t>(o.n_max)));
   std::vector<std::int64_t> p(n);
   for (auto& v : p) v = rng.uniform(o.p_min, o.p_max);
   const auto g = random_conflicts(n, o.edge_p, rng);
   return Instance::with_requirements(
        p, MachineEnv::uniform(std::move(speeds)), g.edges());
}

inline Instance random_r2_instance(std::uint64_t seed,
                                   const RandomInstanceOptions& o) {
   SplitMix64 rng(seed);
   const auto n = static_cast<std::size_t>(rng.uniform(
        static_cast<std::int64_t>(o.n_min), static_cast<std::int64_t>(o.n_max)));
   std::vector<std::vector<std::int64_t>> rows(2, std::vector<std::int64_t>(n));
   for (std::size_t j = 0; j < n; ++j) {
      rows[0][j] = rng.uniform(o.p_min, o.p_max);
      rows[1][j] = rng.uniform(o.p_min, o.p_max);
   }
   const auto g = random_conflicts(n, o.edge_p, rng);
   return Instance::unrelated(rows, g.edges());
}

}  // namespace bisched
