#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace hhlab {

using cplx = std::complex<double>;

// Largest supported rank. Small fixed capacity keeps per-point temporaries on the stack.
inline constexpr int kMaxRank = 4;

using EndMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxRank, kMaxRank>;

EndMatrix identity(int r);
EndMatrix cartan_h(int r); // diag(1, -1, 0, ...)

EndMatrix commutator(const EndMatrix& a, const EndMatrix& b);
EndMatrix herm_adjoint(const EndMatrix& a);
EndMatrix mat_exp(const EndMatrix& a);

// Coefficients of det(eta*I - a), descending powers of eta, leading 1.
std::vector<cplx> charpoly_coeffs(const EndMatrix& a);

bool is_anti_hermitian(const EndMatrix& a, double tol = 1e-12);

} // namespace hhlab
