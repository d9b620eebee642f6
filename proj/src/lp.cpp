#include "tg/lp.hpp"

#include "tg/errors.hpp"

namespace tg::lp {
namespace {

class Tableau {
 public:
  Tableau(std::size_t num_vars, const std::vector<Constraint>& constraints) : num_vars_(num_vars) {
    const std::size_t m = constraints.size();
    std::vector<Relation> relations(m);
    std::vector<std::vector<Rational>> rows(m);
    std::vector<Rational> rhs(m);
    for (std::size_t r = 0; r < m; ++r) {
      const auto& c = constraints[r];
      if (c.coefficients.size() != num_vars) {
        throw StructuralError("constraint " + std::to_string(r) + " has the wrong arity");
      }
      rows[r] = c.coefficients;
      rhs[r] = c.rhs;
      relations[r] = c.relation;
      if (rhs[r] < 0) {
        for (auto& a : rows[r]) a = -a;
        rhs[r] = -rhs[r];
        if (relations[r] == Relation::kLessEqual) {
          relations[r] = Relation::kGreaterEqual;
        } else if (relations[r] == Relation::kGreaterEqual) {
          relations[r] = Relation::kLessEqual;
        }
      }
    }

    // Column layout: originals, one slack/surplus per inequality, then artificials.
    std::size_t num_slack = 0;
    std::size_t num_artificial = 0;
    for (auto rel : relations) {
      if (rel != Relation::kEqual) ++num_slack;
      if (rel != Relation::kLessEqual) ++num_artificial;
    }
    first_artificial_ = num_vars + num_slack;
    num_cols_ = first_artificial_ + num_artificial;

    table_.assign(m, std::vector<Rational>(num_cols_ + 1));
    basis_.assign(m, 0);
    std::size_t next_slack = num_vars;
    std::size_t next_artificial = first_artificial_;
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t j = 0; j < num_vars; ++j) table_[r][j] = rows[r][j];
      table_[r][num_cols_] = rhs[r];
      switch (relations[r]) {
        case Relation::kLessEqual:
          table_[r][next_slack] = 1;
          basis_[r] = next_slack++;
          break;
        case Relation::kGreaterEqual:
          table_[r][next_slack++] = -1;
          table_[r][next_artificial] = 1;
          basis_[r] = next_artificial++;
          break;
        case Relation::kEqual:
          table_[r][next_artificial] = 1;
          basis_[r] = next_artificial++;
          break;
      }
    }
  }

  // Minimizes the sum of artificial variables. Returns true when it reaches 0.
  bool run_phase_one() {
    const std::size_t m = table_.size();
    while (true) {
      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < num_cols_ && !entering; ++j) {
        if (reduced_cost(j) < 0) entering = j;
      }
      if (!entering) break;

      std::optional<std::size_t> leaving;
      Rational best_ratio;
      for (std::size_t r = 0; r < m; ++r) {
        const auto& a = table_[r][*entering];
        if (a <= 0) continue;
        Rational ratio = table_[r][num_cols_] / a;
        if (!leaving || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[*leaving])) {
          leaving = r;
          best_ratio = std::move(ratio);
        }
      }
      // Phase 1 is bounded below by zero, so a ratio row always exists.
      if (!leaving) throw std::logic_error("phase-one simplex unbounded");
      pivot(*leaving, *entering);
    }
    for (std::size_t r = 0; r < m; ++r) {
      if (basis_[r] >= first_artificial_ && table_[r][num_cols_] != 0) return false;
    }
    return true;
  }

  std::vector<Rational> solution() const {
    std::vector<Rational> x(num_vars_);
    for (std::size_t r = 0; r < table_.size(); ++r) {
      if (basis_[r] < num_vars_) x[basis_[r]] = table_[r][num_cols_];
    }
    return x;
  }

 private:
  Rational reduced_cost(std::size_t j) const {
    Rational cost = j >= first_artificial_ ? 1 : 0;
    for (std::size_t r = 0; r < table_.size(); ++r) {
      if (basis_[r] >= first_artificial_ && table_[r][j] != 0) cost -= table_[r][j];
    }
    return cost;
  }

  void pivot(std::size_t row, std::size_t col) {
    auto& pivot_row = table_[row];
    const Rational inv = 1 / pivot_row[col];
    for (auto& a : pivot_row) {
      if (a != 0) a *= inv;
    }
    for (std::size_t r = 0; r < table_.size(); ++r) {
      if (r == row || table_[r][col] == 0) continue;
      const Rational factor = table_[r][col];
      for (std::size_t j = 0; j <= num_cols_; ++j) {
        if (pivot_row[j] != 0) table_[r][j] -= factor * pivot_row[j];
      }
    }
    basis_[row] = col;
  }

  std::size_t num_vars_;
  std::size_t first_artificial_ = 0;
  std::size_t num_cols_ = 0;
  std::vector<std::vector<Rational>> table_;
  std::vector<std::size_t> basis_;
};

}  // namespace

std::optional<std::vector<Rational>> find_feasible_point(std::size_t num_vars,
                                                         const std::vector<Constraint>& constraints) {
  Tableau tableau(num_vars, constraints);
  if (!tableau.run_phase_one()) return std::nullopt;
  return tableau.solution();
}

}  // namespace tg::lp
