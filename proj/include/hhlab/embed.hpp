#pragma once

#include "hhlab/hhcore.hpp"

namespace hhlab {

// Phi = phi + psi + alpha [phi, psi], pointwise on the dz coefficients.
struct CompositeField {
    FieldGrid Phi;
    double alpha = 0.0;
};

CompositeField composite(const FieldGrid& phi, const FieldGrid& psi, double alpha);

// r1, r2 = staggered dbar_A of psi, phi; r3 = Lambda F_A + higgs_term(Phi). On the flat
// chart Lambda reads off the dx^dy coefficient and F^{0,2} vanishes identically.
ResidualTriple residual_embedded(const Configuration& c);

// dbar_A of the composite field.
FieldGrid dbar_composite(const Configuration& c);

} // namespace hhlab
