#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bisched/bipartite.hpp"
#include "bisched/errors.hpp"
#include "bisched/rational.hpp"

namespace bisched {

enum class MachineKind : std::uint8_t { Identical, Uniform, Unrelated };

inline std::string to_string(MachineKind kind) {
   switch (kind) {
      case MachineKind::Identical:
         return "identical";
      case MachineKind::Uniform:
         return "uniform";
      case MachineKind::Unrelated:
         return "unrelated";
   }
   return "?";
}

enum class SpeedPolicy : std::uint8_t {
   AtLeastOne,    // s_i >= 1
   AllowSubunit,  // s_i > 0; hardness constructions use 1/(kn)
};

/// Machine environment. Uniform speeds are stored sorted non-increasing;
/// label(i) gives the caller's original index of sorted machine i, and every
/// Schedule refers to the sorted indices.
class MachineEnv {
 public:
   static MachineEnv identical(std::size_t m) {
      check_count(m);
      MachineEnv env;
      env.kind_ = MachineKind::Identical;
      env.m_ = m;
      env.speeds_.assign(m, Rational(1));
      env.labels_.resize(m);
      std::iota(env.labels_.begin(), env.labels_.end(), std::size_t{0});
      return env;
   }

   static MachineEnv uniform(std::vector<Rational> speeds,
                             SpeedPolicy policy = SpeedPolicy::AtLeastOne) {
      check_count(speeds.size());
      for (const auto& s : speeds) {
         if (s <= Rational(0)) {
            throw PreconditionError("machine speed must be positive, got " +
                                    s.str());
         }
         if (policy == SpeedPolicy::AtLeastOne && s < Rational(1)) {
            throw PreconditionError("machine speed " + s.str() +
                                    " is below 1");
         }
      }
      MachineEnv env;
      env.kind_ = MachineKind::Uniform;
      env.m_ = speeds.size();
      env.labels_.resize(env.m_);
      std::iota(env.labels_.begin(), env.labels_.end(), std::size_t{0});
      std::stable_sort(env.labels_.begin(), env.labels_.end(),
                       [&](std::size_t a, std::size_t b) {
                          return speeds[a] > speeds[b];
                       });
      for (const auto l : env.labels_) {
         env.speeds_.push_back(speeds[l]);
         env.subunit_ = env.subunit_ || speeds[l] < Rational(1);
      }
      return env;
   }

   static MachineEnv unrelated(std::size_t m) {
      auto env = identical(m);
      env.kind_ = MachineKind::Unrelated;
      return env;
   }

   [[nodiscard]] MachineKind kind() const { return kind_; }
   [[nodiscard]] std::size_t m() const { return m_; }
   [[nodiscard]] const Rational& speed(std::size_t i) const {
      return speeds_[i];
   }
   [[nodiscard]] const std::vector<Rational>& speeds() const { return speeds_; }
   [[nodiscard]] std::size_t label(std::size_t i) const { return labels_[i]; }
   [[nodiscard]] const std::vector<std::size_t>& labels() const {
      return labels_;
   }
   /// True when some speed is below 1.
   [[nodiscard]] bool subunit_speeds() const { return subunit_; }

   /// Speeds in the caller's original machine order.
   [[nodiscard]] std::vector<Rational> original_speeds() const {
      std::vector<Rational> out(m_);
      for (std::size_t i = 0; i < m_; ++i) {
         out[labels_[i]] = speeds_[i];
      }
      return out;
   }

 private:
   static void check_count(std::size_t m) {
      if (m == 0) {
         throw PreconditionError("at least one machine is required");
      }
   }

   MachineKind kind_ = MachineKind::Identical;
   std::size_t m_ = 0;
   std::vector<Rational> speeds_;
   std::vector<std::size_t> labels_;
   bool subunit_ = false;
};

/// One processing requirement (identical/uniform) or one entry per machine
/// (unrelated, indexed by sorted machine index which equals the original).
struct Job {
   std::size_t id = 0;
   std::vector<std::int64_t> p;
};

class Instance {
 public:
   Instance() = default;

   /// Conflict graph weights are set to p_j for identical/uniform instances.
   Instance(std::vector<Job> jobs, MachineEnv env, std::vector<Edge> edges)
       : jobs_(std::move(jobs)), env_(std::move(env)) {
      const std::size_t width =
           env_.kind() == MachineKind::Unrelated ? env_.m() : 1;
      std::vector<std::int64_t> weights;
      weights.reserve(jobs_.size());
      for (std::size_t j = 0; j < jobs_.size(); ++j) {
         const auto& job = jobs_[j];
         if (job.id != j) {
            throw PreconditionError("job ids must be dense and ordered; "
                                    "expected id " +
                                    std::to_string(j));
         }
         if (job.p.size() != width) {
            throw PreconditionError("job " + std::to_string(j) + " has " +
                                    std::to_string(job.p.size()) +
                                    " processing entries, expected " +
                                    std::to_string(width));
         }
         for (const auto v : job.p) {
            if (v < 1) {
               throw PreconditionError("job " + std::to_string(j) +
                                       " has a processing entry below 1");
            }
         }
         weights.push_back(width == 1 ? job.p.front() : 1);
      }
      conflicts_ = BipGraph(jobs_.size(), std::move(edges), std::move(weights));
   }

   /// Unit or weighted jobs on a single-requirement environment.
   static Instance with_requirements(const std::vector<std::int64_t>& p,
                                     MachineEnv env,
                                     std::vector<Edge> edges = {}) {
      std::vector<Job> jobs;
      jobs.reserve(p.size());
      for (std::size_t j = 0; j < p.size(); ++j) {
         jobs.push_back({j, {p[j]}});
      }
      return Instance(std::move(jobs), std::move(env), std::move(edges));
   }

   /// Unrelated instance from a machine-major matrix rows[i][j].
   static Instance unrelated(
        const std::vector<std::vector<std::int64_t>>& rows,
        std::vector<Edge> edges = {}) {
      if (rows.empty()) {
         throw PreconditionError("at least one machine is required");
      }
      const std::size_t n = rows.front().size();
      std::vector<Job> jobs(n);
      for (std::size_t j = 0; j < n; ++j) {
         jobs[j].id = j;
         for (const auto& row : rows) {
            if (row.size() != n) {
               throw PreconditionError("ragged processing-time matrix");
            }
            jobs[j].p.push_back(row[j]);
         }
      }
      return Instance(std::move(jobs), MachineEnv::unrelated(rows.size()),
                      std::move(edges));
   }

   [[nodiscard]] std::size_t n() const { return jobs_.size(); }
   [[nodiscard]] std::size_t m() const { return env_.m(); }
   [[nodiscard]] const std::vector<Job>& jobs() const { return jobs_; }
   [[nodiscard]] const MachineEnv& env() const { return env_; }
   [[nodiscard]] const BipGraph& conflicts() const { return conflicts_; }

   /// Processing requirement of job j (identical/uniform only).
   [[nodiscard]] std::int64_t p(std::size_t j) const {
      if (env_.kind() == MachineKind::Unrelated) {
         throw UnsupportedQuery(
              "single processing requirement undefined on unrelated machines");
      }
      return jobs_[j].p.front();
   }

   /// Requirement of job j on machine i, before division by speed.
   [[nodiscard]] std::int64_t requirement(std::size_t i, std::size_t j) const {
      return env_.kind() == MachineKind::Unrelated ? jobs_[j].p[i]
                                                   : jobs_[j].p.front();
   }

 private:
   std::vector<Job> jobs_;
   MachineEnv env_;
   BipGraph conflicts_;
};

struct Schedule {
   std::vector<std::size_t> assignment;

   friend bool operator==(const Schedule&, const Schedule&) = default;
};

namespace detail {

inline void check_shape(const Schedule& s, const Instance& inst) {
   if (s.assignment.size() != inst.n()) {
      throw MalformedSchedule("assignment has " +
                              std::to_string(s.assignment.size()) +
                              " entries for " + std::to_string(inst.n()) +
                              " jobs");
   }
   for (std::size_t j = 0; j < s.assignment.size(); ++j) {
      if (s.assignment[j] >= inst.m()) {
         throw MalformedSchedule("job " + std::to_string(j) +
                                 " assigned to machine " +
                                 std::to_string(s.assignment[j]) + " of " +
                                 std::to_string(inst.m()));
      }
   }
}

}  // namespace detail

/// Integer load (sum of requirements) per machine.
inline std::vector<std::int64_t> machine_requirements(const Schedule& s,
                                                      const Instance& inst) {
   detail::check_shape(s, inst);
   std::vector<std::int64_t> load(inst.m(), 0);
   for (std::size_t j = 0; j < inst.n(); ++j) {
      load[s.assignment[j]] += inst.requirement(s.assignment[j], j);
   }
   return load;
}

/// Completion time of each machine.
inline std::vector<Rational> machine_times(const Schedule& s,
                                           const Instance& inst) {
   const auto load = machine_requirements(s, inst);
   std::vector<Rational> out;
   out.reserve(load.size());
   for (std::size_t i = 0; i < load.size(); ++i) {
      out.push_back(Rational(load[i]) / inst.env().speed(i));
   }
   return out;
}

inline Rational makespan(const Schedule& s, const Instance& inst) {
   const auto times = machine_times(s, inst);
   Rational best(0);
   for (const auto& t : times) {
      best = max(best, t);
   }
   return best;
}

struct Validation {
   bool valid = true;
   std::vector<Edge> violations;  // sorted conflict pairs sharing a machine
};

inline Validation validate(const Schedule& s, const Instance& inst) {
   detail::check_shape(s, inst);
   Validation v;
   for (const auto& [a, b] : inst.conflicts().edges()) {
      if (s.assignment[a] == s.assignment[b]) {
         v.violations.emplace_back(a, b);
      }
   }
   v.valid = v.violations.empty();
   return v;
}

struct Totals {
   std::int64_t psum = 0;
   std::int64_t pmax = 0;
};

inline Totals totals(const Instance& inst) {
   if (inst.env().kind() == MachineKind::Unrelated) {
      throw UnsupportedQuery("psum is undefined on unrelated machines");
   }
   Totals t;
   for (std::size_t j = 0; j < inst.n(); ++j) {
      t.psum += inst.p(j);
      t.pmax = std::max(t.pmax, inst.p(j));
   }
   return t;
}

/// Throws Infeasible when a single machine must host a conflicting pair.
inline void require_feasible(const Instance& inst) {
   if (inst.m() == 1 && !inst.conflicts().edges().empty()) {
      throw Infeasible("one machine cannot host conflicting jobs");
   }
}

}  // namespace bisched
