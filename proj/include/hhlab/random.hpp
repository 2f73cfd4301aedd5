#pragma once

#include <cstdint>
#include <random>

#include "hhlab/hhcore.hpp"

namespace hhlab {

// Seeded generator with a platform-independent mapping to doubles.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 42) : eng_(seed) {}

    double uniform() { return double(eng_() >> 11) * 0x1.0p-53; } // [0, 1)
    double symmetric() { return 2.0 * uniform() - 1.0; }          // [-1, 1)
    cplx complex_symmetric() { return {symmetric(), symmetric()}; }
    std::uint64_t next() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

EndMatrix random_matrix(Rng& rng, int r, double scale = 1.0);
EndMatrix random_anti_hermitian(Rng& rng, int r, double scale = 1.0);

// Smooth random fields: a few low Fourier modes in x times low polynomials in y.
FieldGrid random_smooth_field(Rng& rng, const CylinderGrid& g, FormType form, double scale = 1.0);
FieldGrid random_smooth_anti_hermitian(Rng& rng, const CylinderGrid& g, double scale = 1.0);

Configuration random_configuration(Rng& rng, const CylinderGrid& g, double alpha, double scale = 0.3);
TangentVector random_tangent(Rng& rng, const CylinderGrid& g, double scale = 1.0);

} // namespace hhlab
