#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "bisched/bipartite.hpp"
#include "bisched/errors.hpp"

namespace bisched {

/// Graph with three anchors that must receive colors c1, c2, c3.
struct PrecolorInstance {
   BipGraph graph;
   std::array<std::size_t, 3> anchors{};

   void check() const {
      for (std::size_t t = 0; t < anchors.size(); ++t) {
         if (anchors[t] >= graph.size()) {
            throw PreconditionError("anchor " + std::to_string(anchors[t]) +
                                    " is not a vertex");
         }
         for (std::size_t u = 0; u < t; ++u) {
            if (anchors[u] == anchors[t]) {
               throw PreconditionError("anchors must be distinct");
            }
         }
      }
   }
};

}  // namespace bisched
