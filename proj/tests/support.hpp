#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include "hhlab/hhcore.hpp"

namespace hhtest {

using hhlab::cplx;
using hhlab::CylinderGrid;
using hhlab::EndMatrix;
using hhlab::FieldGrid;
using hhlab::FormType;

inline constexpr double kPi = std::numbers::pi;

inline CylinderGrid grid(int nx, int ny, int rank = 2)
{
    CylinderGrid g;
    g.nx = nx;
    g.ny = ny;
    g.rank = rank;
    return g;
}

inline EndMatrix H(int r = 2) { return hhlab::cartan_h(r); }

// Scalar function times a fixed matrix, sampled on the grid.
inline FieldGrid sample(const CylinderGrid& g, FormType f, const std::function<cplx(double, double)>& fn,
                        const EndMatrix& m)
{
    FieldGrid out(g, f);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) out.set(i, j, fn(g.x(i), g.y(j)) * m);
    return out;
}

inline double max_diff(const FieldGrid& a, const FieldGrid& b, int skip_rows = 0)
{
    const CylinderGrid& g = a.grid();
    double m = 0.0;
    for (int i = 0; i < g.nx; ++i)
        for (int j = skip_rows; j < g.ny - skip_rows; ++j)
            m = std::max(m, (a.at(i, j) - b.at(i, j)).cwiseAbs().maxCoeff());
    return m;
}

inline double max_abs(const FieldGrid& a, int skip_rows = 0)
{
    FieldGrid z(a.grid(), a.form());
    return max_diff(a, z, skip_rows);
}

// Exact bitwise equality of every entry.
inline bool bit_equal(const FieldGrid& a, const FieldGrid& b)
{
    if (a.data().size() != b.data().size()) return false;
    for (std::size_t k = 0; k < a.data().size(); ++k)
        if (a.data()[k] != b.data()[k]) return false;
    return true;
}

inline double order(double coarse, double fine, double ratio = 2.0) { return std::log(coarse / fine) / std::log(ratio); }

} // namespace hhtest
