#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bisched/core.hpp"
#include "bisched/errors.hpp"
#include "bisched/randgraph.hpp"
#include "bisched/rational.hpp"

namespace bisched::io {

/// Malformed input file; the message carries the file name and position.
class ParseError : public Error {
 public:
   using Error::Error;
};

namespace detail {

using json = nlohmann::json;

inline std::string read_file(const std::string& path) {
   std::ifstream in(path, std::ios::binary);
   if (!in) {
      throw ParseError(path + ": cannot open file");
   }
   std::ostringstream ss;
   ss << in.rdbuf();
   return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
   std::ofstream out(path, std::ios::binary);
   if (!out) {
      throw Error(path + ": cannot open for writing");
   }
   out << text;
}

/// line:column of a byte offset (1-based).
inline std::pair<std::size_t, std::size_t> position(const std::string& text,
                                                    std::size_t byte) {
   std::size_t line = 1;
   std::size_t col = 1;
   for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
         ++line;
         col = 1;
      } else {
         ++col;
      }
   }
   return {line, col};
}

inline json parse_json(const std::string& text, const std::string& origin) {
   try {
      return json::parse(text);
   } catch (const json::parse_error& e) {
      const auto [line, col] = position(text, e.byte == 0 ? 0 : e.byte - 1);
      throw ParseError(origin + ":" + std::to_string(line) + ":" +
                       std::to_string(col) + ": " + e.what());
   }
}

template <typename T>
T field(const json& obj, const char* key, const std::string& where) {
   if (!obj.is_object() || !obj.contains(key)) {
      throw ParseError(where + ": missing key \"" + key + "\"");
   }
   try {
      return obj.at(key).get<T>();
   } catch (const json::exception& e) {
      throw ParseError(where + "." + key + ": " + e.what());
   }
}

}  // namespace detail

/// Canonical JSON text of an instance: sorted keys, no whitespace, one
/// trailing newline. Speeds are written in the caller's machine order.
inline std::string instance_to_string(const Instance& inst) {
   using detail::json;
   json machines = json::object();
   machines["kind"] = to_string(inst.env().kind());
   machines["m"] = inst.m();
   if (inst.env().kind() == MachineKind::Uniform) {
      json speeds = json::array();
      for (const auto& s : inst.env().original_speeds()) {
         speeds.push_back(s.str());
      }
      machines["speeds"] = std::move(speeds);
   }
   json jobs = json::array();
   for (const auto& job : inst.jobs()) {
      json j = json::object();
      j["id"] = job.id;
      if (inst.env().kind() == MachineKind::Unrelated) {
         j["p_row"] = job.p;
      } else {
         j["p"] = job.p.front();
      }
      jobs.push_back(std::move(j));
   }
   json edges = json::array();
   for (const auto& [a, b] : inst.conflicts().edges()) {
      edges.push_back(json::array({a, b}));
   }
   json doc = json::object();
   doc["edges"] = std::move(edges);
   doc["jobs"] = std::move(jobs);
   doc["machines"] = std::move(machines);
   return doc.dump() + "\n";
}

inline Instance instance_from_string(const std::string& text,
                                     const std::string& origin = "<instance>") {
   using detail::json;
   const json doc = detail::parse_json(text, origin);
   if (!doc.is_object()) {
      throw ParseError(origin + ": top level must be an object");
   }
   const auto& mach = doc.contains("machines") ? doc.at("machines") : json();
   const auto kind = detail::field<std::string>(mach, "kind",
                                                origin + ": machines");
   const auto m = detail::field<std::size_t>(mach, "m", origin + ": machines");

   MachineEnv env;
   try {
      if (kind == "identical") {
         env = MachineEnv::identical(m);
      } else if (kind == "unrelated") {
         env = MachineEnv::unrelated(m);
      } else if (kind == "uniform") {
         const auto raw = detail::field<std::vector<std::string>>(
              mach, "speeds", origin + ": machines");
         if (raw.size() != m) {
            throw ParseError(origin + ": machines.speeds has " +
                             std::to_string(raw.size()) + " entries, m is " +
                             std::to_string(m));
         }
         std::vector<Rational> speeds;
         for (std::size_t i = 0; i < raw.size(); ++i) {
            try {
               speeds.push_back(Rational::parse(raw[i], true));
            } catch (const std::exception& e) {
               throw ParseError(origin + ": machines.speeds[" +
                                std::to_string(i) + "]: " + e.what());
            }
         }
         env = MachineEnv::uniform(std::move(speeds), SpeedPolicy::AllowSubunit);
      } else {
         throw ParseError(origin + ": machines.kind \"" + kind +
                          "\" is not identical, uniform or unrelated");
      }
   } catch (const PreconditionError& e) {
      throw ParseError(origin + ": machines: " + e.what());
   }

   if (!doc.contains("jobs") || !doc.at("jobs").is_array()) {
      throw ParseError(origin + ": \"jobs\" must be an array");
   }
   std::vector<Job> jobs;
   const auto& jarr = doc.at("jobs");
   for (std::size_t q = 0; q < jarr.size(); ++q) {
      const std::string where = origin + ": jobs[" + std::to_string(q) + "]";
      Job job;
      job.id = detail::field<std::size_t>(jarr[q], "id", where);
      if (kind == "unrelated") {
         job.p = detail::field<std::vector<std::int64_t>>(jarr[q], "p_row",
                                                          where);
      } else {
         job.p = {detail::field<std::int64_t>(jarr[q], "p", where)};
      }
      jobs.push_back(std::move(job));
   }

   if (!doc.contains("edges") || !doc.at("edges").is_array()) {
      throw ParseError(origin + ": \"edges\" must be an array");
   }
   std::vector<Edge> edges;
   const auto& earr = doc.at("edges");
   for (std::size_t q = 0; q < earr.size(); ++q) {
      const std::string where = origin + ": edges[" + std::to_string(q) + "]";
      std::vector<std::size_t> pair;
      try {
         pair = earr[q].get<std::vector<std::size_t>>();
      } catch (const json::exception& e) {
         throw ParseError(where + ": " + e.what());
      }
      if (pair.size() != 2) {
         throw ParseError(where + ": an edge needs exactly two endpoints");
      }
      if (pair[0] == pair[1]) {
         throw ParseError(where + ": self-loop on job " +
                          std::to_string(pair[0]));
      }
      if (pair[0] >= jobs.size() || pair[1] >= jobs.size()) {
         throw ParseError(where + ": endpoint is not a job id");
      }
      edges.emplace_back(pair[0], pair[1]);
   }

   try {
      return Instance(std::move(jobs), std::move(env), std::move(edges));
   } catch (const NotBipartite& e) {
      std::string cycle;
      for (const auto v : e.witness()) {
         cycle += (cycle.empty() ? "" : "-") + std::to_string(v);
      }
      throw ParseError(origin + ": edges: conflict graph is not bipartite, "
                                "odd cycle " +
                       cycle);
   } catch (const PreconditionError& e) {
      throw ParseError(origin + ": jobs: " + e.what());
   } catch (const std::invalid_argument& e) {
      throw ParseError(origin + ": " + e.what());
   }
}

inline Instance parse_instance(const std::string& path) {
   return instance_from_string(detail::read_file(path), path);
}

inline void write_instance(const Instance& inst, const std::string& path) {
   detail::write_file(path, instance_to_string(inst));
}

/// {"assignment": [...], "makespan": "num/den"} with machines named by the
/// instance's original labels.
inline std::string schedule_to_string(const Schedule& s, const Instance& inst) {
   using detail::json;
   json assignment = json::array();
   for (const auto i : s.assignment) {
      assignment.push_back(inst.env().label(i));
   }
   json doc = json::object();
   doc["assignment"] = std::move(assignment);
   doc["makespan"] = makespan(s, inst).str();
   return doc.dump() + "\n";
}

/// Loads a schedule for `inst` and checks the stored makespan against the
/// recomputed one.
inline Schedule schedule_from_string(const std::string& text,
                                     const Instance& inst,
                                     const std::string& origin = "<schedule>") {
   using detail::json;
   const json doc = detail::parse_json(text, origin);
   const auto labels =
        detail::field<std::vector<std::size_t>>(doc, "assignment", origin);
   const auto stated = detail::field<std::string>(doc, "makespan", origin);
   std::vector<std::size_t> sorted_index(inst.m());
   for (std::size_t i = 0; i < inst.m(); ++i) {
      sorted_index[inst.env().label(i)] = i;
   }
   Schedule s;
   for (std::size_t j = 0; j < labels.size(); ++j) {
      if (labels[j] >= inst.m()) {
         throw MalformedSchedule(origin + ": assignment[" + std::to_string(j) +
                                 "] names machine " +
                                 std::to_string(labels[j]) + " of " +
                                 std::to_string(inst.m()));
      }
      s.assignment.push_back(sorted_index[labels[j]]);
   }
   Rational claimed;
   try {
      claimed = Rational::parse(stated, true);
   } catch (const std::exception& e) {
      throw ParseError(origin + ": makespan: " + e.what());
   }
   const auto actual = makespan(s, inst);
   if (claimed != actual) {
      throw ParseError(origin + ": makespan field " + claimed.str() +
                       " differs from recomputed " + actual.str());
   }
   return s;
}

inline Schedule parse_schedule(const std::string& path, const Instance& inst) {
   return schedule_from_string(detail::read_file(path), inst, path);
}

inline void write_schedule(const Schedule& s, const Instance& inst,
                           const std::string& path) {
   detail::write_file(path, schedule_to_string(s, inst));
}

inline const char* mc_csv_header() {
   return "trial,n,p_num,p_den,edges,isolated_v2,v2prime,mu,alpha,ratio,"
          "alg2_cmax_num,alg2_cmax_den,lb_num,lb_den";
}

/// Per-trial rows followed by '#'-prefixed summary lines. The ratio column
/// holds "num/den" and stays empty when mu = 0.
inline std::string mc_csv(const McReport& report) {
   std::ostringstream out;
   out << mc_csv_header() << '\n';
   for (const auto& t : report.trials) {
      out << t.trial << ',' << t.n << ',' << t.p.num() << ',' << t.p.den()
          << ',' << t.edges << ',' << t.isolated_v2 << ',' << t.v2prime << ','
          << t.mu << ',' << t.alpha << ',';
      if (t.ratio) {
         out << t.ratio->str();
      }
      out << ',' << t.alg2_cmax.num() << ',' << t.alg2_cmax.den() << ','
          << t.lower_bound.num() << ',' << t.lower_bound.den() << '\n';
   }
   out << "#summary,column,mean,stddev,max\n";
   for (const auto& c : report.summary) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "#summary,%s,%.6f,%.6f,%.6f\n",
                    c.name.c_str(), c.mean, c.stddev, c.max);
      out << buf;
   }
   return out.str();
}

}  // namespace bisched::io
