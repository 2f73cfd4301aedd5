#include "hhlab/embed.hpp"

#include "hhlab/error.hpp"

namespace hhlab {

CompositeField composite(const FieldGrid& phi, const FieldGrid& psi, double alpha)
{
    if (!phi.same_shape(psi)) throw ShapeError("composite: phi and psi differ in shape");
    CompositeField out;
    out.alpha = alpha;
    out.Phi = phi + psi;
    if (alpha != 0.0) out.Phi += cplx(alpha) * pointwise_commutator(phi, psi);
    out.Phi.set_form(FormType::one_zero);
    return out;
}

ResidualTriple residual_embedded(const Configuration& c)
{
    ResidualTriple r;
    r.r1 = dbar_A_box(c.grid, c.A, c.psi);
    r.r2 = dbar_A_box(c.grid, c.A, c.phi);
    r.r3 = hitchin_r3(c.grid, c.A, composite(c.phi, c.psi, c.alpha).Phi);
    return r;
}

FieldGrid dbar_composite(const Configuration& c)
{
    return dbar_A_box(c.grid, c.A, composite(c.phi, c.psi, c.alpha).Phi);
}

} // namespace hhlab
