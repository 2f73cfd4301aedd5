#include "hhlab/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include "hhlab/error.hpp"

namespace hhlab {

EndMatrix identity(int r) { return EndMatrix::Identity(r, r); }

EndMatrix cartan_h(int r)
{
    EndMatrix h = EndMatrix::Zero(r, r);
    h(0, 0) = 1.0;
    if (r > 1) h(1, 1) = -1.0;
    return h;
}

EndMatrix commutator(const EndMatrix& a, const EndMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
        throw ShapeError("commutator: rank mismatch");
    EndMatrix ab = a * b;
    EndMatrix ba = b * a;
    return ab - ba;
}

EndMatrix herm_adjoint(const EndMatrix& a) { return a.adjoint(); }

EndMatrix mat_exp(const EndMatrix& a)
{
    if (a.isZero(0.0)) return identity(int(a.rows()));
    Eigen::MatrixXcd m = a;
    Eigen::MatrixXcd e = m.exp();
    return e;
}

std::vector<cplx> charpoly_coeffs(const EndMatrix& a)
{
    // Faddeev-LeVerrier recursion.
    const int n = int(a.rows());
    std::vector<cplx> c(n + 1);
    c[0] = 1.0;
    EndMatrix mk = EndMatrix::Zero(n, n);
    for (int k = 1; k <= n; ++k) {
        mk = a * mk;
        mk.diagonal().array() += c[k - 1];
        EndMatrix amk = a * mk;
        c[k] = -amk.trace() / double(k);
    }
    return c;
}

bool is_anti_hermitian(const EndMatrix& a, double tol)
{
    return (a + a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

} // namespace hhlab
