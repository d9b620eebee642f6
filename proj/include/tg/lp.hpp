#pragma once

#include "tg/rational.hpp"

#include <optional>
#include <vector>

namespace tg::lp {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct Constraint {
  std::vector<Rational> coefficients;
  Relation relation;
  Rational rhs;
};

// Exact phase-1 simplex with Bland's rule. Returns some x >= 0 satisfying
// every constraint, or nullopt when the system is infeasible.
std::optional<std::vector<Rational>> find_feasible_point(std::size_t num_vars,
                                                         const std::vector<Constraint>& constraints);

}  // namespace tg::lp
