#pragma once

#include <utility>
#include <vector>

#include "hhlab/linalg.hpp"

namespace hhlab {

// Cylinder S^1 x [0,1]; x periodic with nx points, y with ny points including both ends.
struct CylinderGrid {
    int nx = 16;
    int ny = 17;
    int rank = 2;
    double epsilon = 0.2;      // collar width
    double cutoff_scale = 1.0; // amplitude of the collar cutoff

    double hx() const { return 1.0 / nx; }
    double hy() const { return 1.0 / (ny - 1); }
    double x(int i) const { return i * hx(); }
    double y(int j) const { return j * hy(); }
    int points() const { return nx * ny; }
    int entries() const { return rank * rank; }
    int index(int i, int j) const { return i * ny + j; }

    void validate() const;
    bool operator==(const CylinderGrid& o) const = default;
};

enum class FormType { zero_form, one_zero, zero_one, one_one };

const char* form_name(FormType f);

using EndView = Eigen::Map<Eigen::MatrixXcd>;
using EndCView = Eigen::Map<const Eigen::MatrixXcd>;

// EndMatrix-valued grid function. Point (i,j) is stored at index i*ny + j, each
// matrix column-major.
class FieldGrid {
public:
    FieldGrid() = default;
    FieldGrid(const CylinderGrid& g, FormType f);

    const CylinderGrid& grid() const { return grid_; }
    FormType form() const { return form_; }
    void set_form(FormType f) { form_ = f; }

    EndView at(int i, int j) { return EndView(ptr(i, j), grid_.rank, grid_.rank); }
    EndCView at(int i, int j) const { return EndCView(ptr(i, j), grid_.rank, grid_.rank); }
    void set(int i, int j, const EndMatrix& m) { at(i, j) = m; }

    cplx* ptr(int i, int j) { return data_.data() + std::size_t(grid_.index(i, j)) * grid_.entries(); }
    const cplx* ptr(int i, int j) const { return data_.data() + std::size_t(grid_.index(i, j)) * grid_.entries(); }

    std::vector<cplx>& data() { return data_; }
    const std::vector<cplx>& data() const { return data_; }

    double sup_norm() const;
    bool same_shape(const FieldGrid& o) const { return grid_ == o.grid_ && data_.size() == o.data_.size(); }

    FieldGrid& operator+=(const FieldGrid& o);
    FieldGrid& operator-=(const FieldGrid& o);
    FieldGrid& operator*=(cplx s);

private:
    CylinderGrid grid_;
    FormType form_ = FormType::zero_form;
    std::vector<cplx> data_;
};

FieldGrid operator+(FieldGrid a, const FieldGrid& b);
FieldGrid operator-(FieldGrid a, const FieldGrid& b);
FieldGrid operator*(cplx s, FieldGrid a);
FieldGrid operator-(FieldGrid a);

// Unitary connection d + A_x dx + A_y dy with anti-Hermitian components.
struct Connection {
    FieldGrid ax, ay;
    static Connection zero(const CylinderGrid& g);
};

enum class Side { bottom, top };

struct BoundaryData {
    Side which = Side::bottom;
    std::vector<EndMatrix> values; // one per x point
};

// Stencils. d_x: 4th-order periodic centered. d_y: 2nd-order centered inside;
// at the ends a 4-point one-sided closure whose leading error term equals the
// centered one, so composed operators stay second order up to the boundary.
FieldGrid d_x(const FieldGrid& f);
FieldGrid d_y(const FieldGrid& f);
FieldGrid dbar(const FieldGrid& f); // 1/2 (d_x + i d_y)
FieldGrid del(const FieldGrid& f);  // 1/2 (d_x - i d_y)

// First-derivative kernels on raw arrays with m entries per point.
void raw_dx(const cplx* in, cplx* out, int nx, int ny, int m, double hx);
void raw_dy(const cplx* in, cplx* out, int nx, int ny, int m, double hy);

// Pointwise helpers.
FieldGrid pointwise_commutator(const FieldGrid& a, const FieldGrid& b);
FieldGrid pointwise_product(const FieldGrid& a, const FieldGrid& b);
FieldGrid pointwise_adjoint(const FieldGrid& a);
FieldGrid anti_hermitian_part(const FieldGrid& a); // (X - X^dagger)/2

FieldGrid a_zbar(const Connection& A); // (A_x + i A_y)/2
FieldGrid a_z(const Connection& A);    // (A_x - i A_y)/2

FieldGrid dbar_A(const CylinderGrid& grid, const Connection& A, const FieldGrid& f);

// Staggered (box) form of dbar_A: evaluated at the half rows y_{j+1/2} and stored
// in row j, the last row is zero. Per Fourier mode in x its kernel is exactly one
// discrete holomorphic profile; the centered form admits an extra sawtooth mode.
FieldGrid stagger_y(const FieldGrid& f); // (f_j + f_{j+1}) / 2 in row j
FieldGrid dbar_box(const FieldGrid& f);
FieldGrid dbar_A_box(const CylinderGrid& grid, const Connection& A, const FieldGrid& f);

// Zeroes the rows y = 0 and y = 1.
FieldGrid interior_only(FieldGrid f);
FieldGrid curvature(const CylinderGrid& grid, const Connection& A);

std::pair<BoundaryData, BoundaryData> trace_tau(const CylinderGrid& grid, const FieldGrid& psi);

double collar_cutoff(const CylinderGrid& grid, double y, Side side);
FieldGrid extend_iota(const CylinderGrid& grid, const BoundaryData& bottom, const BoundaryData& top);

// Tangential derivative along a boundary circle (same periodic stencil as d_x).
BoundaryData boundary_dx(const CylinderGrid& grid, const BoundaryData& b);

FieldGrid deformation_B(const CylinderGrid& grid, const FieldGrid& psi);

// Rows j with nonzero bottom/top cutoff.
int collar_rows(const CylinderGrid& grid);

// Trapezoid weight in y times the cell area.
double quad_weight(const CylinderGrid& grid, int j);

} // namespace hhlab
