#pragma once

#include <Eigen/Sparse>

#include "hhlab/surface.hpp"

namespace hhlab {

struct Configuration {
    CylinderGrid grid;
    Connection A;
    FieldGrid phi, psi; // (1,0)-form coefficients
    double alpha = 0.0;

    static Configuration zero(const CylinderGrid& g, double alpha = 0.0);
    void validate(double ah_tol = 1e-12) const;
};

struct ResidualTriple {
    FieldGrid r1, r2, r3;
    double sup_norm() const;
};

struct TangentVector {
    Connection a;
    FieldGrid chi, xi;
    static TangentVector zero(const CylinderGrid& g);
};

// -2i [x, y] pointwise: the dz^dzbar -> dx^dy conversion of a Higgs bracket.
FieldGrid higgs_pair(const FieldGrid& x, const FieldGrid& y);
FieldGrid higgs_term(const FieldGrid& f); // higgs_pair(f, f^dagger)

// F_A + higgs_term(Phi): the single-field Hitchin curvature residual.
FieldGrid hitchin_r3(const CylinderGrid& grid, const Connection& A, const FieldGrid& Phi);

ResidualTriple residual(const Configuration& c);
Configuration inversion_map(const Configuration& c);
ResidualTriple lin_apply(const Configuration& c, const TangentVector& u);
FieldGrid gauge_fix(const Configuration& c, const TangentVector& u);
double symplectic_pair(const Configuration& c, const TangentVector& u, const TangentVector& v);

// Realification. Per grid point the unknowns are
//   [a_x (r^2 anti-Hermitian coords), a_y, Re chi, Im chi, Re xi, Im xi]
// and the rows are
//   [Re r1, Im r1, Re r2, Im r2, r3 (anti-Hermitian coords), gauge]
// where on y = 0, 1 the gauge rows are replaced by the coordinates of a_x. The
// holomorphy rows hold the staggered dbar_A_box, so they vanish on the row y = 1.
// Anti-Hermitian coordinates are scaled to be isometric for the Frobenius norm.
int unknowns_per_point(int rank);
int unknown_count(const CylinderGrid& g);

void ah_coords(const EndMatrix& m, double* out);
EndMatrix from_ah_coords(const double* c, int r);

Eigen::VectorXd pack_tangent(const TangentVector& u);
TangentVector unpack_tangent(const CylinderGrid& g, const Eigen::VectorXd& v);
TangentVector difference(const Configuration& c, const Configuration& base); // c - base as a tangent
Configuration displace(const Configuration& c, const TangentVector& u, double t = 1.0);

// Augmented linear operator at c, gauge rows taken relative to the slice connection.
Eigen::VectorXd augmented_apply(const Configuration& c, const Configuration& slice, const Eigen::VectorXd& u);

// Nonlinear augmented map: residual rows plus the slice condition on c.A - slice.A.
Eigen::VectorXd augmented_residual(const Configuration& c, const Configuration& slice);

inline constexpr int kDenseUnknownLimit = 7000;

Eigen::MatrixXd assemble_dense(const Configuration& c);
Eigen::MatrixXd assemble_dense(const Configuration& c, const Configuration& slice);
Eigen::SparseMatrix<double> assemble_sparse(const Configuration& c, const Configuration& slice);

// Realified slot-3 map xi -> anti-Hermitian part of B(xi), restricted to the
// columns and rows it touches.
Eigen::MatrixXd assemble_b_map(const CylinderGrid& g);

} // namespace hhlab
