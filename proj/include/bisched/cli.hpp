#pragma once

#include <cstddef>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bisched/core.hpp"
#include "bisched/errors.hpp"
#include "bisched/gadgets.hpp"
#include "bisched/io.hpp"
#include "bisched/oracle.hpp"
#include "bisched/precolor.hpp"
#include "bisched/randgraph.hpp"
#include "bisched/rational.hpp"
#include "bisched/uniform.hpp"
#include "bisched/unrelated.hpp"

namespace bisched::cli {

enum ExitCode : int { Ok = 0, Invalid = 1, Usage = 2, OverBudget = 3 };

namespace detail {

using json = nlohmann::json;

inline Rational rational_arg(const std::string& text, const char* flag) {
   try {
      return Rational::parse(text);
   } catch (const std::exception& e) {
      throw CLI::ValidationError(flag, e.what());
   }
}

inline MachineEnv machines_arg(std::size_t m,
                               const std::vector<std::string>& speeds) {
   if (speeds.empty()) {
      return MachineEnv::identical(m);
   }
   std::vector<Rational> s;
   for (const auto& t : speeds) s.push_back(rational_arg(t, "--speeds"));
   return MachineEnv::uniform(std::move(s), SpeedPolicy::AllowSubunit);
}

/// Text sink: a file when `path` is set, else `fallback`.
inline void emit(const std::string& text, const std::string& path,
                 std::ostream& fallback) {
   if (path.empty()) {
      fallback << text;
   } else {
      io::detail::write_file(path, text);
   }
}

/// {"anchors": [a, b, c], "edges": [[u, v], ...], "n": count}
inline PrecolorInstance read_precolor(const std::string& path) {
   const auto text = io::detail::read_file(path);
   const auto doc = io::detail::parse_json(text, path);
   const auto n = io::detail::field<std::size_t>(doc, "n", path);
   const auto anchors =
        io::detail::field<std::vector<std::size_t>>(doc, "anchors", path);
   const auto raw =
        io::detail::field<std::vector<std::vector<std::size_t>>>(doc, "edges",
                                                                  path);
   if (anchors.size() != 3) {
      throw io::ParseError(path + ": \"anchors\" needs exactly three entries");
   }
   std::vector<Edge> edges;
   for (const auto& e : raw) {
      if (e.size() != 2) {
         throw io::ParseError(path + ": an edge needs exactly two endpoints");
      }
      edges.emplace_back(e[0], e[1]);
   }
   PrecolorInstance pre{BipGraph(n, std::move(edges)),
                        {anchors[0], anchors[1], anchors[2]}};
   pre.check();
   return pre;
}

/// Random precoloring instance: Gilbert-style bipartite graph with anchors
/// 0, 1 and n - 1.
inline PrecolorInstance random_precolor(std::size_t n, const Rational& p,
                                        std::uint64_t seed) {
   if (n < 3) {
      throw PreconditionError("a precoloring instance needs 3 vertices");
   }
   const std::size_t left = n / 2 + n % 2;
   PrecolorInstance pre{gen_bipartite(left, n - left, p, seed), {0, 1, n - 1}};
   pre.check();
   return pre;
}

struct PrecolorArgs {
   std::string file;
   std::size_t n = 0;
   std::string edge_p = "1/2";
};

inline void add_precolor_options(CLI::App* sub, PrecolorArgs& a) {
   auto* file = sub->add_option("--pre", a.file,
                                "precoloring instance JSON (n, edges, anchors)");
   auto* n = sub->add_option("--n", a.n, "random precoloring instance size");
   file->excludes(n);
   sub->add_option("--edge-p", a.edge_p,
                   "edge probability of the random precoloring graph");
}

inline PrecolorInstance precolor_from(const PrecolorArgs& a,
                                      std::uint64_t seed) {
   if (!a.file.empty()) {
      return read_precolor(a.file);
   }
   if (a.n == 0) {
      throw CLI::ValidationError("--pre/--n", "one of them is required");
   }
   return random_precolor(a.n, rational_arg(a.edge_p, "--edge-p"), seed);
}

inline Schedule solve_with(const std::string& alg, const Instance& inst,
                           const Rational& eps, const SearchBudget& budget) {
   if (alg == "sqrt-psum") return sqrt_psum_schedule(inst);
   if (alg == "alg2") {
      for (std::size_t j = 0; j < inst.n(); ++j) {
         if (inst.p(j) != 1) {
            throw PreconditionError("alg2 needs unit processing times");
         }
      }
      return alg2_schedule(inst.conflicts(), inst.env());
   }
   if (alg == "r2-2apx") return two_approx_r2(inst);
   if (alg == "r2-fptas") return fptas_r2_bipartite(inst, eps);
   if (alg == "q2-exact-unit") return q2_exact_unit(inst);
   if (alg == "oracle") return exact_min_makespan(inst, budget).schedule;
   throw CLI::ValidationError("--alg", "unknown algorithm " + alg);
}

inline const std::vector<std::string>& algorithms() {
   static const std::vector<std::string> names{
        "sqrt-psum", "alg2", "r2-2apx", "r2-fptas", "q2-exact-unit", "oracle"};
   return names;
}

}  // namespace detail

/// Runs one command line; `args` excludes the program name.
inline int run(const std::vector<std::string>& args,
               std::ostream& out = std::cout, std::ostream& err = std::cerr) {
   CLI::App app{"Scheduling with bipartite incompatibility graphs", "bisched"};
   app.require_subcommand(1);
   app.set_help_all_flag("--help-all", "expand help of every subcommand");

   // gen
   auto* gen = app.add_subcommand("gen", "write a generated instance");
   gen->require_subcommand(1);
   std::uint64_t seed = 0;
   std::string output;
   std::size_t m = 3;
   std::vector<std::string> speeds;

   auto* gilbert = gen->add_subcommand("gilbert", "unit jobs on G(n,n,p)");
   std::size_t g_n = 0;
   std::string g_p, g_a;
   gilbert->add_option("--n", g_n, "vertices per side")->required();
   auto* opt_p = gilbert->add_option("--p", g_p, "edge probability num/den");
   auto* opt_a = gilbert->add_option("--a", g_a, "mean degree a, p = a/n");
   opt_p->excludes(opt_a);
   gilbert->add_option("--seed", seed)->required();
   gilbert->add_option("--m", m, "identical machines")->capture_default_str();
   gilbert->add_option("--speeds", speeds, "uniform speeds, comma separated")
        ->delimiter(',');
   gilbert->add_option("-o,--output", output);

   auto* gadget = gen->add_subcommand("gadget",
                                      "unit jobs on one forcing gadget");
   std::string g_kind;
   std::size_t gx = 0, gx1 = 0, gx2 = 0;
   gadget->add_option("--kind", g_kind)
        ->required()
        ->check(CLI::IsMember({"H1", "H2", "H3"}));
   gadget->add_option("--x", gx, "size of the x-row")->required();
   gadget->add_option("--x1", gx1, "size of the x'-row (H2, H3)");
   gadget->add_option("--x2", gx2, "size of the x''-row (H3)");
   gadget->add_option("--seed", seed)->required();
   gadget->add_option("--m", m)->capture_default_str();
   gadget->add_option("-o,--output", output);

   auto* hq = gen->add_subcommand("hardness-uniform",
                                  "uniform-machine hardness instance");
   detail::PrecolorArgs hq_pre;
   std::size_t hq_k = 1;
   std::string witness_path;
   detail::add_precolor_options(hq, hq_pre);
   hq->add_option("--k", hq_k)->capture_default_str();
   hq->add_option("--seed", seed)->required();
   hq->add_option("--m", m)->capture_default_str();
   hq->add_option("-o,--output", output);
   hq->add_option("--witness", witness_path,
                  "schedule file built from a precoloring extension");

   auto* hr = gen->add_subcommand("hardness-unrelated",
                                  "unrelated-machine hardness instance");
   detail::PrecolorArgs hr_pre;
   std::int64_t hr_d = 0, hr_c = 1, hr_b = 1;
   std::string hr_eps = "1/1";
   detail::add_precolor_options(hr, hr_pre);
   auto* opt_d = hr->add_option("--d", hr_d, "slow processing time");
   auto* opt_c = hr->add_option("--c", hr_c, "derive d from c, b and --eps");
   opt_d->excludes(opt_c);
   hr->add_option("--b", hr_b)->capture_default_str();
   hr->add_option("--eps", hr_eps)->capture_default_str();
   hr->add_option("--seed", seed)->required();
   hr->add_option("--m", m)->capture_default_str();
   hr->add_option("-o,--output", output);
   hr->add_option("--witness", witness_path);

   // solve
   auto* solve = app.add_subcommand("solve", "run one algorithm");
   std::string alg, input, eps_text = "1/2";
   SearchBudget budget;
   solve->add_option("--alg", alg)
        ->required()
        ->check(CLI::IsMember(detail::algorithms()));
   solve->add_option("-i,--input", input)->required();
   solve->add_option("-o,--output", output);
   solve->add_option("--eps", eps_text, "FPTAS accuracy num/den")
        ->capture_default_str();
   solve->add_option("--max-nodes", budget.max_nodes, "oracle node budget");
   solve->add_option("--time-cap", budget.time_cap, "oracle seconds");
   solve->add_option("--max-jobs", budget.max_jobs, "oracle job limit");

   // verify
   auto* verify = app.add_subcommand("verify", "check a schedule file");
   std::string sched_path;
   verify->add_option("-i,--input", input)->required();
   verify->add_option("-s,--schedule", sched_path)->required();

   // bench
   auto* bench = app.add_subcommand("bench", "experiments");
   bench->require_subcommand(1);
   std::string csv;
   std::size_t trials = 0;

   auto* mc = bench->add_subcommand("mc", "Monte Carlo over G(n,n,p)");
   mc->add_option("--n", g_n)->required();
   auto* mc_p = mc->add_option("--p", g_p);
   auto* mc_a = mc->add_option("--a", g_a);
   mc_p->excludes(mc_a);
   mc->add_option("--trials", trials)->required();
   mc->add_option("--seed", seed)->required();
   mc->add_option("--m", m)->capture_default_str();
   mc->add_option("--speeds", speeds)->delimiter(',');
   mc->add_option("--csv", csv);

   auto* sweep = bench->add_subcommand(
        "ratio-sweep", "solver against the oracle on random small instances");
   std::size_t n_max = 8;
   std::string edge_p = "1/2";
   sweep->add_option("--alg", alg)
        ->required()
        ->check(CLI::IsMember(
             {"sqrt-psum", "alg2", "r2-2apx", "r2-fptas", "q2-exact-unit"}));
   sweep->add_option("--trials", trials)->required();
   sweep->add_option("--seed", seed)->required();
   sweep->add_option("--speeds", speeds)->delimiter(',');
   sweep->add_option("--n-max", n_max)->capture_default_str();
   sweep->add_option("--edge-p", edge_p)->capture_default_str();
   sweep->add_option("--eps", eps_text)->capture_default_str();
   sweep->add_option("--csv", csv);

   try {
      std::vector<std::string> reversed(args.rbegin(), args.rend());
      app.parse(reversed);
   } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? Ok : Usage;
   }

   try {
      if (gilbert->parsed()) {
         const Rational p = !g_a.empty()
                                 ? detail::rational_arg(g_a, "--a") /
                                        Rational(static_cast<std::int64_t>(g_n))
                                 : detail::rational_arg(g_p, "--p");
         const auto g = gen_gilbert({g_n, p, seed});
         const auto inst = unit_instance(g, detail::machines_arg(m, speeds));
         detail::emit(io::instance_to_string(inst), output, out);
         if (!output.empty()) {
            out << "gilbert n=" << g_n << " p=" << p.str()
                << " edges=" << g.edges().size() << '\n';
         }
      } else if (gadget->parsed()) {
         GadgetSpec spec = g_kind == "H1"   ? GadgetSpec::h1(gx)
                           : g_kind == "H2" ? GadgetSpec::h2(gx1, gx)
                                            : GadgetSpec::h3(gx2, gx1, gx);
         spec.check();
         const auto g = gadget_graph(spec);
         const auto inst = unit_instance(g, MachineEnv::identical(m));
         detail::emit(io::instance_to_string(inst), output, out);
         if (!output.empty()) {
            out << to_string(spec.kind) << " vertices=" << g.size()
                << " edges=" << g.edges().size() << '\n';
         }
      } else if (hq->parsed() || hr->parsed()) {
         const bool uni = hq->parsed();
         const auto pre = detail::precolor_from(uni ? hq_pre : hr_pre, seed);
         const auto ext = exact_precolor_extension(pre);
         HardnessInstance h;
         if (uni) {
            h = build_uniform_hardness(pre, hq_k, m, ext);
         } else {
            const auto n = static_cast<std::int64_t>(pre.graph.size());
            const auto d =
                 hr_d > 0 ? hr_d
                          : distinguishing_d(hr_c, n, hr_b,
                                             detail::rational_arg(hr_eps,
                                                                  "--eps"));
            h = build_unrelated_hardness(pre, d, m, ext);
         }
         detail::emit(io::instance_to_string(h.instance), output, out);
         if (!witness_path.empty()) {
            if (!h.witness) {
               err << "no precoloring extension exists; witness not written\n";
               return Invalid;
            }
            io::write_schedule(*h.witness, h.instance, witness_path);
         }
         if (!output.empty()) {
            out << (uni ? "hardness-uniform" : "hardness-unrelated")
                << " original_n=" << h.original_n
                << " jobs=" << h.instance.n()
                << " extension=" << (ext ? "yes" : "no");
            if (h.witness) {
               out << " witness_makespan="
                   << makespan(*h.witness, h.instance).str();
            }
            out << '\n';
         }
      } else if (solve->parsed()) {
         const auto inst = io::parse_instance(input);
         const auto eps = detail::rational_arg(eps_text, "--eps");
         const auto s = detail::solve_with(alg, inst, eps, budget);
         const auto v = validate(s, inst);
         if (!v.valid) {
            err << alg << " produced a conflicting schedule\n";
            return Invalid;
         }
         detail::emit(io::schedule_to_string(s, inst), output, out);
         if (!output.empty()) {
            out << alg << " makespan=" << makespan(s, inst).str() << '\n';
         }
      } else if (verify->parsed()) {
         const auto inst = io::parse_instance(input);
         const auto s = io::parse_schedule(sched_path, inst);
         const auto v = validate(s, inst);
         if (!v.valid) {
            for (const auto& [a, b] : v.violations) {
               out << "violation: jobs " << a << " and " << b
                   << " share machine " << inst.env().label(s.assignment[a])
                   << '\n';
            }
            out << "invalid: " << v.violations.size() << " violation(s)\n";
            return Invalid;
         }
         out << "valid makespan=" << makespan(s, inst).str() << '\n';
      } else if (mc->parsed()) {
         const Rational p = !g_a.empty()
                                 ? detail::rational_arg(g_a, "--a") /
                                        Rational(static_cast<std::int64_t>(g_n))
                                 : detail::rational_arg(g_p, "--p");
         const auto report = mc_stats({g_n, p, seed},
                                      detail::machines_arg(m, speeds), trials);
         detail::emit(io::mc_csv(report), csv, out);
         if (!csv.empty()) {
            for (const auto& c : report.summary) {
               out << c.name << " mean=" << c.mean << " sd=" << c.stddev
                   << " max=" << c.max << '\n';
            }
         }
      } else if (sweep->parsed()) {
         const auto eps = detail::rational_arg(eps_text, "--eps");
         RandomInstanceOptions opts;
         opts.n_max = n_max;
         opts.edge_p = detail::rational_arg(edge_p, "--edge-p");
         std::vector<Rational> sp;
         for (const auto& t : speeds) sp.push_back(detail::rational_arg(t, "--speeds"));
         if (sp.empty()) {
            sp = alg == "q2-exact-unit" ? std::vector<Rational>{Rational(2), Rational(1)}
                                        : std::vector<Rational>{Rational(2), Rational(1), Rational(1)};
         }
         if (alg == "q2-exact-unit" || alg == "alg2") {
            opts.p_min = opts.p_max = 1;
         }
         std::ostringstream rows;
         rows << "trial,n,m,alg_num,alg_den,opt_num,opt_den,ratio\n";
         Rational worst(0);
         long double sum = 0;
         for (std::size_t t = 0; t < trials; ++t) {
            const auto s = trial_seed(seed, t);
            const bool r2 = alg == "r2-2apx" || alg == "r2-fptas";
            const auto inst = r2 ? random_r2_instance(s, opts)
                                 : random_uniform_instance(s, sp, opts);
            const auto sched = detail::solve_with(alg, inst, eps, budget);
            if (!validate(sched, inst).valid) {
               err << "trial " << t << ": conflicting schedule\n";
               return Invalid;
            }
            const auto a = makespan(sched, inst);
            const auto o = exact_min_makespan(inst, budget).makespan;
            const auto ratio = a / o;
            worst = max(worst, ratio);
            sum += ratio.to_double();
            rows << t << ',' << inst.n() << ',' << inst.m() << ',' << a.num()
                 << ',' << a.den() << ',' << o.num() << ',' << o.den() << ','
                 << ratio.str() << '\n';
         }
         rows << "#summary,trials=" << trials << ",mean_ratio="
              << static_cast<double>(sum / static_cast<long double>(trials ? trials : 1))
              << ",max_ratio=" << worst.str() << '\n';
         detail::emit(rows.str(), csv, out);
         if (!csv.empty()) {
            out << alg << " max_ratio=" << worst.str() << '\n';
         }
      }
   } catch (const CLI::ValidationError& e) {
      err << "error: " << e.what() << '\n';
      return Usage;
   } catch (const BudgetExceeded& e) {
      err << "budget exceeded: " << e.what() << '\n';
      return OverBudget;
   } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return Invalid;
   }
   return Ok;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
   std::vector<std::string> args;
   for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
   return run(args, out, err);
}

}  // namespace bisched::cli
