#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bisched/bipartite.hpp"
#include "bisched/core.hpp"
#include "bisched/errors.hpp"
#include "bisched/precolor.hpp"
#include "bisched/rational.hpp"

namespace bisched {

enum class GadgetKind : std::uint8_t { H1, H2, H3 };

inline std::string to_string(GadgetKind k) {
   switch (k) {
      case GadgetKind::H1:
         return "H1";
      case GadgetKind::H2:
         return "H2";
      case GadgetKind::H3:
         return "H3";
   }
   return "?";
}

/// Forcing component. Sizes follow the usual argument order:
/// H1(x), H2(x', x), H3(x'', x', x).
struct GadgetSpec {
   GadgetKind kind = GadgetKind::H1;
   std::size_t x = 1;
   std::size_t x1 = 0;  // x'  (H2, H3)
   std::size_t x2 = 0;  // x'' (H3)

   static GadgetSpec h1(std::size_t x) { return {GadgetKind::H1, x, 0, 0}; }
   static GadgetSpec h2(std::size_t xp, std::size_t x) {
      return {GadgetKind::H2, x, xp, 0};
   }
   static GadgetSpec h3(std::size_t xpp, std::size_t xp, std::size_t x) {
      return {GadgetKind::H3, x, xp, xpp};
   }

   void check() const {
      const bool ok = x >= 1 && (kind == GadgetKind::H1 || x1 >= 1) &&
                      (kind != GadgetKind::H3 || x2 >= 1);
      if (!ok) {
         throw PreconditionError("gadget sizes must be at least 1");
      }
   }

   [[nodiscard]] std::size_t vertex_count() const {
      switch (kind) {
         case GadgetKind::H1:
            return x;
         case GadgetKind::H2:
            return x + x1;
         case GadgetKind::H3:
            return 2 * x + x1 + x2;
      }
      return 0;
   }
};

/// Gadget vertices numbered locally from 0. `attach` is the row joined to
/// the external vertex v.
struct GadgetFragment {
   std::size_t vertex_count = 0;
   std::vector<Edge> edges;
   std::vector<std::size_t> row_x;     // top x-row
   std::vector<std::size_t> row_star;  // second x-row (H3 only)
   std::vector<std::size_t> row_x1;    // x'-row
   std::vector<std::size_t> row_x2;    // x''-row
   std::vector<std::size_t> attach;
};

namespace detail {

inline std::vector<std::size_t> take_row(std::size_t& next, std::size_t len) {
   std::vector<std::size_t> row(len);
   for (auto& v : row) v = next++;
   return row;
}

inline void join(std::vector<Edge>& edges, const std::vector<std::size_t>& a,
                 const std::vector<std::size_t>& b) {
   for (const auto u : a) {
      for (const auto v : b) {
         edges.emplace_back(std::min(u, v), std::max(u, v));
      }
   }
}

}  // namespace detail

/// H1: x vertices on v. H2: x-row joined completely to the x'-row, which
/// sits on v. H3: x-row and x'-row joined, a second x-row and the x'-row
/// both joined to the x''-row, which sits on v.
inline GadgetFragment build_gadget(const GadgetSpec& spec) {
   spec.check();
   GadgetFragment f;
   std::size_t next = 0;
   switch (spec.kind) {
      case GadgetKind::H1:
         f.row_x = detail::take_row(next, spec.x);
         f.attach = f.row_x;
         break;
      case GadgetKind::H2:
         f.row_x = detail::take_row(next, spec.x);
         f.row_x1 = detail::take_row(next, spec.x1);
         detail::join(f.edges, f.row_x, f.row_x1);
         f.attach = f.row_x1;
         break;
      case GadgetKind::H3:
         f.row_x = detail::take_row(next, spec.x);
         f.row_x1 = detail::take_row(next, spec.x1);
         f.row_star = detail::take_row(next, spec.x);
         f.row_x2 = detail::take_row(next, spec.x2);
         detail::join(f.edges, f.row_x, f.row_x1);
         detail::join(f.edges, f.row_star, f.row_x2);
         detail::join(f.edges, f.row_x1, f.row_x2);
         f.attach = f.row_x2;
         break;
   }
   f.vertex_count = next;
   return f;
}

/// Appends a gadget to `edges`, offsetting its vertices by `offset` and
/// wiring its attach row to `anchor`.
inline void attach_gadget(const GadgetFragment& f, std::size_t offset,
                          std::size_t anchor, std::vector<Edge>& edges) {
   for (const auto& [a, b] : f.edges) {
      edges.emplace_back(a + offset, b + offset);
   }
   for (const auto v : f.attach) {
      edges.emplace_back(anchor, v + offset);
   }
}

/// Gadget plus its external vertex as a standalone graph; vertex 0 is v.
inline BipGraph gadget_graph(const GadgetSpec& spec) {
   const auto f = build_gadget(spec);
   std::vector<Edge> edges;
   attach_gadget(f, 1, 0, edges);
   return BipGraph(f.vertex_count + 1, std::move(edges));
}

struct ForcingVerdict {
   bool holds = true;
   std::uint64_t colorings = 0;
   std::optional<std::vector<int>> counterexample;  // index 0 is v
};

/// Enumerates every proper coloring of gadget + v with `num_colors` colors
/// (c1 = 0, c2 = 1, ...) and checks the gadget's forcing disjunction:
///   H1: v != c1, or >= x gadget vertices avoid c1.
///   H2: v != c2, or >= x' avoid {c1, c2}, or >= x avoid c1.
///   H3: v != c3, or >= x'' avoid {c1, c2, c3}, or >= x' avoid {c1, c2},
///       or >= x avoid c1.
inline ForcingVerdict verify_forcing(const GadgetSpec& spec, int num_colors,
                                     std::uint64_t budget = 10'000'000) {
   spec.check();
   const int min_colors = spec.kind == GadgetKind::H1 ? 2 : 3;
   if (num_colors < min_colors) {
      throw PreconditionError(to_string(spec.kind) + " needs at least " +
                              std::to_string(min_colors) + " colors");
   }
   const auto g = gadget_graph(spec);
   const std::size_t n = g.size();
   long double space = 1.0L;
   for (std::size_t i = 0; i < n; ++i) {
      space *= static_cast<long double>(num_colors);
   }
   if (space > static_cast<long double>(budget)) {
      throw BudgetExceeded("forcing enumeration needs " +
                           std::to_string(static_cast<double>(space)) +
                           " colorings, budget is " + std::to_string(budget));
   }

   auto count_outside = [&](const std::vector<int>& color, int below) {
      std::size_t c = 0;
      for (std::size_t v = 1; v < n; ++v) {
         c += color[v] >= below ? 1 : 0;
      }
      return c;
   };
   auto satisfied = [&](const std::vector<int>& color) {
      switch (spec.kind) {
         case GadgetKind::H1:
            return color[0] != 0 || count_outside(color, 1) >= spec.x;
         case GadgetKind::H2:
            return color[0] != 1 || count_outside(color, 2) >= spec.x1 ||
                   count_outside(color, 1) >= spec.x;
         case GadgetKind::H3:
            return color[0] != 2 || count_outside(color, 3) >= spec.x2 ||
                   count_outside(color, 2) >= spec.x1 ||
                   count_outside(color, 1) >= spec.x;
      }
      return false;
   };

   ForcingVerdict verdict;
   std::vector<int> color(n, -1);
   auto search = [&](auto&& self, std::size_t v) -> void {
      if (!verdict.holds) {
         return;
      }
      if (v == n) {
         ++verdict.colorings;
         if (!satisfied(color)) {
            verdict.holds = false;
            verdict.counterexample = color;
         }
         return;
      }
      for (int c = 0; c < num_colors; ++c) {
         bool ok = true;
         for (const auto u : g.neighbors(v)) {
            if (u < v && color[u] == c) {
               ok = false;
               break;
            }
         }
         if (ok) {
            color[v] = c;
            self(self, v + 1);
         }
      }
      color[v] = -1;
   };
   search(search, 0);
   return verdict;
}

struct PlacedGadget {
   GadgetSpec spec;
   std::size_t anchor = 0;  // index into the anchor triple
   std::size_t offset = 0;  // first vertex id of the gadget
   GadgetFragment fragment;
};

struct HardnessInstance {
   Instance instance;
   std::size_t original_n = 0;
   std::vector<PlacedGadget> gadgets;
   std::optional<Schedule> witness;
};

namespace detail {

inline void check_extension(const PrecolorInstance& pre,
                            const std::vector<int>& color) {
   if (color.size() != pre.graph.size()) {
      throw PreconditionError("extension coloring has the wrong length");
   }
   for (std::size_t t = 0; t < 3; ++t) {
      if (color[pre.anchors[t]] != static_cast<int>(t)) {
         throw PreconditionError("extension does not respect anchor colors");
      }
   }
   for (const auto c : color) {
      if (c < 0 || c > 2) {
         throw PreconditionError("extension uses a color outside {c1,c2,c3}");
      }
   }
   for (const auto& [a, b] : pre.graph.edges()) {
      if (color[a] == color[b]) {
         throw PreconditionError("extension is not a proper coloring");
      }
   }
}

}  // namespace detail

/// Vertices added by the six gadgets: 48k^2 n + 4kn + 2.
inline std::size_t uniform_hardness_extra(std::size_t n, std::size_t k) {
   return 48 * k * k * n + 4 * k * n + 2;
}

/// Unit-job uniform instance: anchor 1 gets H2(kn, 6k^2 n) and
/// H3(1, kn, 6k^2 n), anchor 2 gets H1(6k^2 n) and H3(1, kn, 6k^2 n),
/// anchor 3 gets H1(6k^2 n) and H2(kn, 6k^2 n). Speeds are 49k^2, 5k, 1
/// and 1/(kn) for every further machine. A supplied extension coloring is
/// turned into a schedule of makespan at most n.
inline HardnessInstance build_uniform_hardness(
     const PrecolorInstance& pre, std::size_t k, std::size_t m,
     const std::optional<std::vector<int>>& extension = std::nullopt) {
   pre.check();
   if (k < 1) {
      throw PreconditionError("k must be positive");
   }
   if (m < 3) {
      throw PreconditionError("hardness instance needs at least 3 machines");
   }
   const std::size_t n = pre.graph.size();
   const std::size_t big = 6 * k * k * n;
   const std::size_t mid = k * n;
   const std::array<std::array<GadgetSpec, 2>, 3> plan{{
        {GadgetSpec::h2(mid, big), GadgetSpec::h3(1, mid, big)},
        {GadgetSpec::h1(big), GadgetSpec::h3(1, mid, big)},
        {GadgetSpec::h1(big), GadgetSpec::h2(mid, big)},
   }};

   HardnessInstance out;
   out.original_n = n;
   std::vector<Edge> edges = pre.graph.edges();
   std::size_t next = n;
   for (std::size_t t = 0; t < 3; ++t) {
      for (const auto& spec : plan[t]) {
         PlacedGadget pg{spec, t, next, build_gadget(spec)};
         attach_gadget(pg.fragment, next, pre.anchors[t], edges);
         next += pg.fragment.vertex_count;
         out.gadgets.push_back(std::move(pg));
      }
   }

   const auto kk = static_cast<std::int64_t>(k);
   std::vector<Rational> speeds{Rational(49 * kk * kk), Rational(5 * kk),
                                Rational(1)};
   for (std::size_t i = 3; i < m; ++i) {
      speeds.emplace_back(1, kk * static_cast<std::int64_t>(n));
   }
   const std::vector<std::int64_t> ones(next, 1);
   out.instance = Instance::with_requirements(
        ones, MachineEnv::uniform(std::move(speeds), SpeedPolicy::AllowSubunit),
        std::move(edges));

   if (extension) {
      detail::check_extension(pre, *extension);
      // Color index equals machine index: c1 -> M1, c2 -> M2, c3 -> M3.
      Schedule s;
      s.assignment.assign(next, 0);
      for (std::size_t v = 0; v < n; ++v) {
         s.assignment[v] = static_cast<std::size_t>((*extension)[v]);
      }
      for (const auto& pg : out.gadgets) {
         auto put = [&](const std::vector<std::size_t>& row, std::size_t mach) {
            for (const auto v : row) s.assignment[v + pg.offset] = mach;
         };
         put(pg.fragment.row_x, 0);
         put(pg.fragment.row_star, 0);
         put(pg.fragment.row_x1, 1);
         put(pg.fragment.row_x2, 2);
      }
      // Machine order equals label order here: speeds are already sorted.
      out.witness = std::move(s);
   }
   return out;
}

/// Unrelated instance: anchor t runs in time 1 on M_t and d on the other
/// two of M1..M3; every other job runs in time 1 on M1..M3; all jobs take d
/// on M4 and beyond.
inline HardnessInstance build_unrelated_hardness(
     const PrecolorInstance& pre, std::int64_t d, std::size_t m,
     const std::optional<std::vector<int>>& extension = std::nullopt) {
   pre.check();
   if (d < 1) {
      throw PreconditionError("d must be positive");
   }
   if (m < 3) {
      throw PreconditionError("hardness instance needs at least 3 machines");
   }
   const std::size_t n = pre.graph.size();
   std::vector<std::vector<std::int64_t>> rows(m, std::vector<std::int64_t>(n));
   for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
         rows[i][j] = i < 3 ? 1 : d;
      }
   }
   for (std::size_t t = 0; t < 3; ++t) {
      for (std::size_t i = 0; i < 3; ++i) {
         rows[i][pre.anchors[t]] = i == t ? 1 : d;
      }
   }
   HardnessInstance out;
   out.original_n = n;
   out.instance = Instance::unrelated(rows, pre.graph.edges());
   if (extension) {
      detail::check_extension(pre, *extension);
      Schedule s;
      for (const auto c : *extension) {
         s.assignment.push_back(static_cast<std::size_t>(c));
      }
      out.witness = std::move(s);
   }
   return out;
}

/// d = ceil((c n^{b+1})^{1/eps}) + 1 for positive integers c, b and a
/// rational eps in (0, 1]. Computed exactly: the ceiling is the least D with
/// D^{num} >= (c n^{b+1})^{den}.
inline std::int64_t distinguishing_d(std::int64_t c, std::int64_t n,
                                     std::int64_t b, const Rational& eps) {
   if (c < 1 || n < 1 || b < 1 || eps <= Rational(0) || eps > Rational(1)) {
      throw PreconditionError("distinguishing_d needs c, n, b >= 1 and "
                              "eps in (0, 1]");
   }
   using u128 = unsigned __int128;
   const u128 cap = static_cast<u128>(1) << 126;
   auto mul = [&](u128 a, u128 b2) {
      if (a != 0 && b2 > cap / a) {
         throw std::overflow_error("distinguishing d overflows 126 bits");
      }
      return a * b2;
   };
   auto power = [&](u128 base, std::int64_t e) {
      u128 r = 1;
      for (std::int64_t i = 0; i < e; ++i) r = mul(r, base);
      return r;
   };
   const u128 y = mul(static_cast<u128>(c),
                      power(static_cast<u128>(n), b + 1));
   const u128 target = power(y, eps.den());
   // Least D with D^num >= target.
   auto reaches = [&](u128 d) {
      u128 r = 1;
      for (std::int64_t i = 0; i < eps.num(); ++i) {
         if (d != 0 && r > cap / d) return true;
         r *= d;
      }
      return r >= target;
   };
   u128 lo = 1;
   u128 hi = 1;
   while (!reaches(hi)) hi *= 2;
   while (lo < hi) {
      const u128 mid = lo + (hi - lo) / 2;
      if (reaches(mid)) {
         hi = mid;
      } else {
         lo = mid + 1;
      }
   }
   if (lo >= static_cast<u128>(INT64_MAX)) {
      throw std::overflow_error("distinguishing d exceeds 64 bits");
   }
   return static_cast<std::int64_t>(lo) + 1;
}

}  // namespace bisched
