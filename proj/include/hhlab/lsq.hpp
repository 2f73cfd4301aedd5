#pragma once

#include <memory>

#include <Eigen/Sparse>

namespace hhlab {

// Minimum-norm least-squares solves with a sparse operator that may carry an exact
// kernel (stencil doublers, centralizer directions). A sparse QR factorization of
// [J; s*I] gives Tikhonov solves; repeating them on the remaining residual
// (iterated Tikhonov) converges to the pseudo-inverse solution on the range of J.
class MinNormSolver {
public:
    MinNormSolver(const Eigen::SparseMatrix<double>& J, double relative_shift, int sweeps);
    ~MinNormSolver();
    MinNormSolver(MinNormSolver&&) noexcept;
    MinNormSolver& operator=(MinNormSolver&&) noexcept;

    Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
    Eigen::VectorXd tikhonov(const Eigen::VectorXd& b) const;

    // Apply (J^T J + s^2 I)^{-1} using the triangular factor.
    Eigen::VectorXd normal_inverse(const Eigen::VectorXd& x) const;

    double shift() const { return shift_; }
    const Eigen::SparseMatrix<double>& matrix() const { return J_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    Eigen::SparseMatrix<double> J_;
    double shift_ = 0.0;
    int sweeps_ = 1;
};

} // namespace hhlab
