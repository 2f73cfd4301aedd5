#include "hhlab/surface.hpp"

#include <cmath>

#include "hhlab/error.hpp"

namespace hhlab {

void CylinderGrid::validate() const
{
    if (nx < 8 || nx % 2 != 0) throw ValidationError("grid.nx", "grid.nx must be even and ≥ 8");
    if (ny < 9) throw ValidationError("grid.ny", "grid.ny must be ≥ 9");
    if (rank < 1 || rank > kMaxRank)
        throw ValidationError("grid.rank", "grid.rank must lie in [1, " + std::to_string(kMaxRank) + "]");
    if (!(epsilon > hy() && epsilon < 0.5))
        throw ValidationError("grid.epsilon", "grid.epsilon must lie strictly between one grid cell and 0.5");
    if (!(cutoff_scale > 0.0) || !std::isfinite(cutoff_scale))
        throw ValidationError("grid.cutoff_scale", "grid.cutoff_scale must be positive and finite");
}

const char* form_name(FormType f)
{
    switch (f) {
    case FormType::zero_form: return "zero_form";
    case FormType::one_zero: return "one_zero";
    case FormType::zero_one: return "zero_one";
    case FormType::one_one: return "one_one";
    }
    return "?";
}

FieldGrid::FieldGrid(const CylinderGrid& g, FormType f)
    : grid_(g), form_(f), data_(std::size_t(g.points()) * g.entries(), cplx(0.0, 0.0))
{
}

double FieldGrid::sup_norm() const
{
    double m = 0.0;
    for (const cplx& v : data_) m = std::max(m, std::abs(v));
    return m;
}

FieldGrid& FieldGrid::operator+=(const FieldGrid& o)
{
    if (!same_shape(o)) throw ShapeError("field shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
}

FieldGrid& FieldGrid::operator-=(const FieldGrid& o)
{
    if (!same_shape(o)) throw ShapeError("field shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
}

FieldGrid& FieldGrid::operator*=(cplx s)
{
    for (cplx& v : data_) v *= s;
    return *this;
}

FieldGrid operator+(FieldGrid a, const FieldGrid& b) { return a += b; }
FieldGrid operator-(FieldGrid a, const FieldGrid& b) { return a -= b; }
FieldGrid operator*(cplx s, FieldGrid a) { return a *= s; }
FieldGrid operator-(FieldGrid a)
{
    for (cplx& v : a.data()) v = -v;
    return a;
}

Connection Connection::zero(const CylinderGrid& g)
{
    return {FieldGrid(g, FormType::zero_form), FieldGrid(g, FormType::zero_form)};
}

void raw_dx(const cplx* in, cplx* out, int nx, int ny, int m, double hx)
{
    const double c = 1.0 / (12.0 * hx);
    const std::size_t col = std::size_t(ny) * m;
    for (int i = 0; i < nx; ++i) {
        const cplx* p2 = in + std::size_t((i + 2) % nx) * col;
        const cplx* p1 = in + std::size_t((i + 1) % nx) * col;
        const cplx* m1 = in + std::size_t((i + nx - 1) % nx) * col;
        const cplx* m2 = in + std::size_t((i + nx - 2) % nx) * col;
        cplx* o = out + std::size_t(i) * col;
        for (std::size_t k = 0; k < col; ++k) o[k] = (-p2[k] + 8.0 * p1[k] - 8.0 * m1[k] + m2[k]) * c;
    }
}

void raw_dy(const cplx* in, cplx* out, int nx, int ny, int m, double hy)
{
    const double c = 1.0 / (2.0 * hy);
    for (int i = 0; i < nx; ++i) {
        const cplx* f = in + std::size_t(i) * ny * m;
        cplx* o = out + std::size_t(i) * ny * m;
        for (int e = 0; e < m; ++e) {
            auto F = [&](int j) { return f[std::size_t(j) * m + e]; };
            o[e] = (-4.0 * F(0) + 7.0 * F(1) - 4.0 * F(2) + F(3)) * c;
            for (int j = 1; j < ny - 1; ++j) o[std::size_t(j) * m + e] = (F(j + 1) - F(j - 1)) * c;
            const int n = ny - 1;
            o[std::size_t(n) * m + e] = (4.0 * F(n) - 7.0 * F(n - 1) + 4.0 * F(n - 2) - F(n - 3)) * c;
        }
    }
}

FieldGrid d_x(const FieldGrid& f)
{
    FieldGrid out(f.grid(), f.form());
    const auto& g = f.grid();
    raw_dx(f.data().data(), out.data().data(), g.nx, g.ny, g.entries(), g.hx());
    return out;
}

FieldGrid d_y(const FieldGrid& f)
{
    FieldGrid out(f.grid(), f.form());
    const auto& g = f.grid();
    raw_dy(f.data().data(), out.data().data(), g.nx, g.ny, g.entries(), g.hy());
    return out;
}

namespace {

FieldGrid combine_xy(const FieldGrid& f, cplx sy)
{
    FieldGrid fx = d_x(f);
    FieldGrid fy = d_y(f);
    auto& a = fx.data();
    const auto& b = fy.data();
    for (std::size_t k = 0; k < a.size(); ++k) a[k] = 0.5 * (a[k] + sy * b[k]);
    return fx;
}

template <class Op>
FieldGrid pointwise(const FieldGrid& a, const FieldGrid& b, Op op)
{
    if (!a.same_shape(b)) throw ShapeError("pointwise operation on mismatched fields");
    const auto& g = a.grid();
    FieldGrid out(g, a.form());
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            EndMatrix x = a.at(i, j);
            EndMatrix y = b.at(i, j);
            out.set(i, j, op(x, y));
        }
    return out;
}

} // namespace

FieldGrid dbar(const FieldGrid& f) { return combine_xy(f, cplx(0.0, 1.0)); }
FieldGrid del(const FieldGrid& f) { return combine_xy(f, cplx(0.0, -1.0)); }

FieldGrid pointwise_commutator(const FieldGrid& a, const FieldGrid& b)
{
    return pointwise(a, b, [](const EndMatrix& x, const EndMatrix& y) { return commutator(x, y); });
}

FieldGrid pointwise_product(const FieldGrid& a, const FieldGrid& b)
{
    return pointwise(a, b, [](const EndMatrix& x, const EndMatrix& y) -> EndMatrix { return x * y; });
}

FieldGrid pointwise_adjoint(const FieldGrid& a)
{
    const auto& g = a.grid();
    FieldGrid out(g, a.form());
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) out.at(i, j) = a.at(i, j).adjoint();
    return out;
}

FieldGrid anti_hermitian_part(const FieldGrid& a)
{
    const auto& g = a.grid();
    FieldGrid out(g, a.form());
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            EndMatrix x = a.at(i, j);
            EndMatrix xd = x.adjoint();
            EndMatrix d = x - xd;
            out.set(i, j, 0.5 * d);
        }
    return out;
}

FieldGrid a_zbar(const Connection& A)
{
    FieldGrid out(A.ax.grid(), FormType::zero_one);
    auto& o = out.data();
    const auto& x = A.ax.data();
    const auto& y = A.ay.data();
    for (std::size_t k = 0; k < o.size(); ++k) o[k] = 0.5 * (x[k] + cplx(0.0, 1.0) * y[k]);
    return out;
}

FieldGrid a_z(const Connection& A)
{
    FieldGrid out(A.ax.grid(), FormType::one_zero);
    auto& o = out.data();
    const auto& x = A.ax.data();
    const auto& y = A.ay.data();
    for (std::size_t k = 0; k < o.size(); ++k) o[k] = 0.5 * (x[k] - cplx(0.0, 1.0) * y[k]);
    return out;
}

FieldGrid dbar_A(const CylinderGrid& grid, const Connection& A, const FieldGrid& f)
{
    if (f.form() != FormType::one_zero)
        throw ShapeError(std::string("dbar_A expects a one_zero field, got ") + form_name(f.form()));
    if (!(f.grid() == grid)) throw ShapeError("dbar_A: grid mismatch");
    FieldGrid out = dbar(f);
    out += pointwise_commutator(a_zbar(A), f);
    out.set_form(FormType::one_one);
    return out;
}

FieldGrid curvature(const CylinderGrid& grid, const Connection& A)
{
    if (!(A.ax.grid() == grid)) throw ShapeError("curvature: grid mismatch");
    FieldGrid out = d_x(A.ay);
    out -= d_y(A.ax);
    out += pointwise_commutator(A.ax, A.ay);
    out.set_form(FormType::one_one);
    return out;
}

std::pair<BoundaryData, BoundaryData> trace_tau(const CylinderGrid& grid, const FieldGrid& psi)
{
    if (psi.form() != FormType::one_zero)
        throw ShapeError(std::string("trace_tau expects a one_zero field, got ") + form_name(psi.form()));
    const double c = 1.0 / (2.0 * grid.hy());
    const int n = grid.ny - 1;
    BoundaryData bottom{Side::bottom, {}}, top{Side::top, {}};
    bottom.values.resize(grid.nx);
    top.values.resize(grid.nx);
    for (int i = 0; i < grid.nx; ++i) {
        EndMatrix f0 = psi.at(i, 0), f1 = psi.at(i, 1), f2 = psi.at(i, 2), f3 = psi.at(i, 3);
        bottom.values[i] = (-4.0 * f0 + 7.0 * f1 - 4.0 * f2 + f3) * c;
        EndMatrix g0 = psi.at(i, n), g1 = psi.at(i, n - 1), g2 = psi.at(i, n - 2), g3 = psi.at(i, n - 3);
        // inward normal at the top is -d/dy
        top.values[i] = -((4.0 * g0 - 7.0 * g1 + 4.0 * g2 - g3) * c);
    }
    return {bottom, top};
}

double collar_cutoff(const CylinderGrid& grid, double y, Side side)
{
    const double d = side == Side::bottom ? y : 1.0 - y;
    if (d < 0.0 || d >= grid.epsilon) return 0.0;
    const double t = d / grid.epsilon;
    return grid.cutoff_scale * std::exp(1.0 - 1.0 / (1.0 - t * t));
}

int collar_rows(const CylinderGrid& grid)
{
    int k = 0;
    while (k < grid.ny && collar_cutoff(grid, grid.y(k), Side::bottom) > 0.0) ++k;
    return k;
}

FieldGrid extend_iota(const CylinderGrid& grid, const BoundaryData& bottom, const BoundaryData& top)
{
    if (int(bottom.values.size()) != grid.nx || int(top.values.size()) != grid.nx)
        throw ShapeError("extend_iota: boundary data length differs from nx");
    FieldGrid out(grid, FormType::zero_form);
    const int rows = collar_rows(grid);
    for (int j = 0; j < rows; ++j) {
        const double wb = collar_cutoff(grid, grid.y(j), Side::bottom);
        const int jt = grid.ny - 1 - j;
        const double wt = collar_cutoff(grid, grid.y(jt), Side::top);
        for (int i = 0; i < grid.nx; ++i) {
            out.at(i, j) = wb * bottom.values[i];
            out.at(i, jt) = wt * top.values[i];
        }
    }
    return out;
}

BoundaryData boundary_dx(const CylinderGrid& grid, const BoundaryData& b)
{
    const int nx = grid.nx;
    const double c = 1.0 / (12.0 * grid.hx());
    BoundaryData out{b.which, std::vector<EndMatrix>(nx)};
    for (int i = 0; i < nx; ++i) {
        const EndMatrix& p2 = b.values[(i + 2) % nx];
        const EndMatrix& p1 = b.values[(i + 1) % nx];
        const EndMatrix& m1 = b.values[(i + nx - 1) % nx];
        const EndMatrix& m2 = b.values[(i + nx - 2) % nx];
        out.values[i] = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) * c;
    }
    return out;
}

FieldGrid deformation_B(const CylinderGrid& grid, const FieldGrid& psi)
{
    auto [bottom, top] = trace_tau(grid, psi);
    FieldGrid out = extend_iota(grid, boundary_dx(grid, bottom), boundary_dx(grid, top));
    out.set_form(FormType::one_one);
    return out;
}

FieldGrid stagger_y(const FieldGrid& f)
{
    const CylinderGrid& g = f.grid();
    FieldGrid out(g, f.form());
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j + 1 < g.ny; ++j) out.at(i, j) = 0.5 * (f.at(i, j) + f.at(i, j + 1));
    return out;
}

FieldGrid dbar_box(const FieldGrid& f)
{
    const CylinderGrid& g = f.grid();
    FieldGrid out = stagger_y(d_x(f));
    const cplx s(0.0, 1.0 / g.hy());
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j + 1 < g.ny; ++j) out.at(i, j) += s * (f.at(i, j + 1) - f.at(i, j));
    out *= 0.5;
    out.set_form(FormType::one_one);
    return out;
}

FieldGrid dbar_A_box(const CylinderGrid& grid, const Connection& A, const FieldGrid& f)
{
    if (f.form() != FormType::one_zero)
        throw ShapeError(std::string("dbar_A_box expects a one_zero field, got ") + form_name(f.form()));
    if (!(f.grid() == grid)) throw ShapeError("dbar_A_box: grid mismatch");
    FieldGrid out = dbar_box(f);
    out += stagger_y(pointwise_commutator(a_zbar(A), f));
    out.set_form(FormType::one_one);
    return out;
}

FieldGrid interior_only(FieldGrid f)
{
    const CylinderGrid& g = f.grid();
    for (int i = 0; i < g.nx; ++i)
        for (int j : {0, g.ny - 1}) f.at(i, j).setZero();
    return f;
}

double quad_weight(const CylinderGrid& grid, int j)
{
    const double w = (j == 0 || j == grid.ny - 1) ? 0.5 : 1.0;
    return w * grid.hx() * grid.hy();
}

} // namespace hhlab
