#include "hhlab/lsq.hpp"

#include <SuiteSparseQR.hpp>

#include "hhlab/error.hpp"

namespace hhlab {

struct MinNormSolver::Impl {
    cholmod_common cc;
    SuiteSparseQR_factorization<double>* qr = nullptr;
    long rows = 0;

    Impl() { cholmod_l_start(&cc); }
    ~Impl()
    {
        if (qr) SuiteSparseQR_free<double>(&qr, &cc);
        cholmod_l_finish(&cc);
    }

    // x = E R^{-1} (Q^T b)_{1:n}
    Eigen::VectorXd ls_solve(const Eigen::VectorXd& b)
    {
        cholmod_dense* B = cholmod_l_allocate_dense(b.size(), 1, b.size(), CHOLMOD_REAL, &cc);
        std::copy(b.data(), b.data() + b.size(), static_cast<double*>(B->x));
        cholmod_dense* Y = SuiteSparseQR_qmult<double>(SPQR_QTX, qr, B, &cc);
        cholmod_dense* X = SuiteSparseQR_solve<double>(SPQR_RETX_EQUALS_B, qr, Y, &cc);
        if (!Y || !X) throw DegeneracyError("sparse QR solve failed");
        Eigen::VectorXd x = Eigen::Map<Eigen::VectorXd>(static_cast<double*>(X->x), long(X->nrow));
        cholmod_l_free_dense(&B, &cc);
        cholmod_l_free_dense(&Y, &cc);
        cholmod_l_free_dense(&X, &cc);
        return x;
    }
};

MinNormSolver::MinNormSolver(const Eigen::SparseMatrix<double>& J, double relative_shift, int sweeps)
    : impl_(std::make_unique<Impl>()), J_(J), sweeps_(sweeps)
{
    J_.makeCompressed();
    const long m = J.rows(), n = J.cols();
    double scale = 0.0;
    for (int k = 0; k < J_.outerSize(); ++k) {
        double s = 0.0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(J_, k); it; ++it) s += it.value() * it.value();
        scale = std::max(scale, std::sqrt(s));
    }
    if (scale == 0.0) scale = 1.0;
    shift_ = relative_shift * scale;

    // [J; shift I] in compressed columns, the shift entry last in each column.
    cholmod_sparse* A = cholmod_l_allocate_sparse(m + n, n, J_.nonZeros() + n, 1, 1, 0, CHOLMOD_REAL, &impl_->cc);
    auto* Ap = static_cast<SuiteSparse_long*>(A->p);
    auto* Ai = static_cast<SuiteSparse_long*>(A->i);
    auto* Ax = static_cast<double*>(A->x);
    SuiteSparse_long nz = 0;
    for (long k = 0; k < n; ++k) {
        Ap[k] = nz;
        for (Eigen::SparseMatrix<double>::InnerIterator it(J_, k); it; ++it) {
            Ai[nz] = it.row();
            Ax[nz++] = it.value();
        }
        Ai[nz] = m + k;
        Ax[nz++] = shift_;
    }
    Ap[n] = nz;
    impl_->rows = m + n;

    impl_->qr = SuiteSparseQR_factorize<double>(SPQR_ORDERING_DEFAULT, 0.0, A, &impl_->cc);
    cholmod_l_free_sparse(&A, &impl_->cc);
    if (!impl_->qr) throw DegeneracyError("sparse QR factorization failed");
    if (impl_->qr->rank < n) throw DegeneracyError("regularized system lost column rank");
}

MinNormSolver::~MinNormSolver() = default;
MinNormSolver::MinNormSolver(MinNormSolver&&) noexcept = default;
MinNormSolver& MinNormSolver::operator=(MinNormSolver&&) noexcept = default;

Eigen::VectorXd MinNormSolver::tikhonov(const Eigen::VectorXd& b) const
{
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(J_.rows() + J_.cols());
    rhs.head(J_.rows()) = b;
    return impl_->ls_solve(rhs);
}

Eigen::VectorXd MinNormSolver::solve(const Eigen::VectorXd& b) const
{
    Eigen::VectorXd x = tikhonov(b);
    for (int s = 1; s < sweeps_; ++s) {
        const Eigen::VectorXd r = b - J_ * x;
        x += tikhonov(r);
    }
    return x;
}

Eigen::VectorXd MinNormSolver::normal_inverse(const Eigen::VectorXd& x) const
{
    // (J^T J + s^2 I)^{-1} x = argmin |[J; sI] z - [0; x/s]|
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(J_.rows() + J_.cols());
    rhs.tail(J_.cols()) = x / shift_;
    return impl_->ls_solve(rhs);
}

} // namespace hhlab
