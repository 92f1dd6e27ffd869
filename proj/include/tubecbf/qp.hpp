#pragma once

#include "tubecbf/common.hpp"

namespace tubecbf {

// Strictly convex dense quadratic program
//   min 1/2 x' G x + g' x
//   s.t. CE' x + ce0 = 0,  CI' x + ci0 >= 0
// solved with the Goldfarb-Idnani dual active-set method. G must be
// positive definite; constraints are columns of CE / CI.
struct QpResult {
    enum class Status { Optimal, Infeasible, Degenerate };
    Status status = Status::Infeasible;
    Vec x;
    double objective = 0.0;
    Vec eq_multipliers;    // one per equality column
    Vec ineq_multipliers;  // one per inequality column, zero when inactive
    int iterations = 0;

    bool ok() const { return status == Status::Optimal; }
};

QpResult solve_qp(const Mat& G, const Vec& g, const Mat& CE, const Vec& ce0,
                  const Mat& CI, const Vec& ci0);

}  // namespace tubecbf
