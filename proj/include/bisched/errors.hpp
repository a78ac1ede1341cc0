#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bisched {

class Error : public std::runtime_error {
 public:
   using std::runtime_error::runtime_error;
};

/// Assignment has the wrong length or names a machine that does not exist.
class MalformedSchedule : public Error {
 public:
   using Error::Error;
};

/// Query that is undefined for the machine environment (e.g. psum on R).
class UnsupportedQuery : public Error {
 public:
   using Error::Error;
};

/// Input violates an operation's stated precondition.
class PreconditionError : public Error {
 public:
   using Error::Error;
};

/// No feasible schedule exists (one machine, at least one conflict edge).
class Infeasible : public Error {
 public:
   using Error::Error;
};

class BudgetExceeded : public Error {
 public:
   using Error::Error;
};

class NotBipartite : public Error {
 public:
   explicit NotBipartite(std::vector<std::size_t> witness)
       : Error("graph is not bipartite (odd cycle of length " +
               std::to_string(witness.size()) + ")"),
         witness_(std::move(witness)) {}

   /// Closed walk v0, v1, ..., vk (edge vk-v0 implied) of odd length.
   [[nodiscard]] const std::vector<std::size_t>& witness() const {
      return witness_;
   }

 private:
   std::vector<std::size_t> witness_;
};

}  // namespace bisched
