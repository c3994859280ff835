// SPDX-License-Identifier: Apache-2.0
//
// quantlink: receivers and rate analysis for MIMO links with one-bit ADCs
// ------------------------------------------------------------------------

#ifndef QUANTLINK_SIMPLEX_HPP
#define QUANTLINK_SIMPLEX_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>

namespace quantlink::lp {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    double objective = 0.0;
    Eigen::VectorXd x;
    std::size_t pivots = 0;
};

/// Raised when the simplex fails to terminate within its pivot budget.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two-phase dense tableau simplex with Bland's anti-cycling rule.
///
///   maximize c^T x   subject to   A x <= b,  x >= 0
///
/// Intended for the tiny instances of the region oracle (tens of rows, a
/// handful of columns). `b` may have negative entries.
LpSolution maximize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                    double eps = 1e-11);

}  // namespace quantlink::lp

#endif
