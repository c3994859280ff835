// SPDX-License-Identifier: Apache-2.0
//
// quantlink: receivers and rate analysis for MIMO links with one-bit ADCs
// ------------------------------------------------------------------------

#include "quantlink/simplex.hpp"

#include <limits>
#include <vector>

namespace quantlink::lp {

namespace {

class Tableau {
public:
    Tableau(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c, double eps)
        : m_(a.rows()), n_(a.cols()), eps_(eps), d_(m_ + 2, n_ + 2), basis_(m_), nonbasis_(n_ + 1)
    {
        d_.setZero();
        for (Eigen::Index i = 0; i < m_; ++i) {
            for (Eigen::Index j = 0; j < n_; ++j)
                d_(i, j) = a(i, j);
            d_(i, n_) = -1.0;
            d_(i, n_ + 1) = b(i);
            basis_[i] = n_ + i;
        }
        for (Eigen::Index j = 0; j < n_; ++j) {
            nonbasis_[j] = j;
            d_(m_, j) = -c(j);
        }
        nonbasis_[n_] = -1;
        d_(m_ + 1, n_) = 1.0;
        pivot_budget_ = 64 * static_cast<std::size_t>(m_ + n_ + 2) + 256;
        scale_ = 1.0 + (m_ > 0 ? b.cwiseAbs().maxCoeff() : 0.0);
    }

    LpSolution solve()
    {
        LpSolution out;
        Eigen::Index r = 0;
        for (Eigen::Index i = 1; i < m_; ++i)
            if (d_(i, n_ + 1) < d_(r, n_ + 1))
                r = i;
        if (m_ > 0 && d_(r, n_ + 1) < -eps_) {
            pivot(r, n_);
            const auto phase1 = run(/*phase=*/1);
            if (phase1 == LpStatus::iteration_limit)
                return finish(out, LpStatus::iteration_limit);
            if (phase1 != LpStatus::optimal || d_(m_ + 1, n_ + 1) < -eps_ * scale_)
                return finish(out, LpStatus::infeasible);
            for (Eigen::Index i = 0; i < m_; ++i) {
                if (basis_[i] != -1)
                    continue;
                Eigen::Index s = -1;
                for (Eigen::Index j = 0; j <= n_; ++j)
                    if (s == -1 || d_(i, j) < d_(i, s) || (d_(i, j) == d_(i, s) && nonbasis_[j] < nonbasis_[s]))
                        s = j;
                pivot(i, s);
            }
        }
        const auto phase2 = run(/*phase=*/2);
        if (phase2 != LpStatus::optimal)
            return finish(out, phase2);

        out.x = Eigen::VectorXd::Zero(n_);
        for (Eigen::Index i = 0; i < m_; ++i)
            if (basis_[i] >= 0 && basis_[i] < n_)
                out.x(basis_[i]) = d_(i, n_ + 1);
        out.objective = d_(m_, n_ + 1);
        return finish(out, LpStatus::optimal);
    }

private:
    LpSolution& finish(LpSolution& out, LpStatus status)
    {
        out.status = status;
        out.pivots = pivots_;
        return out;
    }

    void pivot(Eigen::Index r, Eigen::Index s)
    {
        ++pivots_;
        const double inv = 1.0 / d_(r, s);
        for (Eigen::Index i = 0; i < m_ + 2; ++i) {
            if (i == r)
                continue;
            const double factor = d_(i, s) * inv;
            if (factor == 0.0)
                continue;
            for (Eigen::Index j = 0; j < n_ + 2; ++j)
                if (j != s)
                    d_(i, j) -= d_(r, j) * factor;
            d_(i, s) = -factor;
        }
        for (Eigen::Index j = 0; j < n_ + 2; ++j)
            if (j != s)
                d_(r, j) *= inv;
        d_(r, s) = inv;
        std::swap(basis_[r], nonbasis_[s]);
    }

    LpStatus run(int phase)
    {
        const Eigen::Index row = phase == 1 ? m_ + 1 : m_;
        while (true) {
            if (pivots_ > pivot_budget_)
                return LpStatus::iteration_limit;
            // Bland: entering variable is the lowest-labelled improving column.
            Eigen::Index s = -1;
            for (Eigen::Index j = 0; j <= n_; ++j) {
                if (phase == 2 && nonbasis_[j] == -1)
                    continue;
                if (d_(row, j) < -eps_ && (s == -1 || nonbasis_[j] < nonbasis_[s]))
                    s = j;
            }
            if (s == -1)
                return LpStatus::optimal;
            Eigen::Index r = -1;
            double best = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < m_; ++i) {
                if (d_(i, s) <= eps_)
                    continue;
                const double ratio = d_(i, n_ + 1) / d_(i, s);
                if (r == -1 || ratio < best - eps_ || (ratio <= best + eps_ && basis_[i] < basis_[r])) {
                    best = ratio;
                    r = i;
                }
            }
            if (r == -1)
                return LpStatus::unbounded;
            pivot(r, s);
        }
    }

    Eigen::Index m_;
    Eigen::Index n_;
    double eps_;
    Eigen::MatrixXd d_;
    std::vector<Eigen::Index> basis_;
    std::vector<Eigen::Index> nonbasis_;
    std::size_t pivots_ = 0;
    std::size_t pivot_budget_ = 0;
    double scale_ = 1.0;
};

}  // namespace

LpSolution maximize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c, double eps)
{
    if (a.rows() != b.size() || a.cols() != c.size())
        throw std::invalid_argument("lp::maximize: inconsistent problem dimensions");
    Tableau tableau(a, b, c, eps);
    return tableau.solve();
}

}  // namespace quantlink::lp
