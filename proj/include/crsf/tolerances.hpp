#pragma once

namespace crsf {

// Central numeric tolerances. Every module reads these defaults instead of
// scattering magic constants.
struct Tolerances {
    double pivot_zero = 1e-13;        // pivot below this * scale => det treated as 0
    double condition_limit = 1e12;    // green() refuses above this estimate
    double unitary = 1e-12;           // | |phi| - 1 | for the unitary flag
    double sl2_det = 1e-10;           // | det(phi) - 1 | per edge
    double self_dual = 1e-10;         // block self-duality check
    double antisymmetry = 1e-10;      // pfaffian input check
    double reciprocal = 1e-9;         // Laurent coefficient symmetry
    double real_coeff = 1e-9;         // polynomial real-coefficient check
    double real_root_imag = 1e-7;     // |Im| accepted as a real root
    double interp_residual = 1e-6;    // aliasing flag threshold
    double projection = 1e-8;         // ||P^2 - P||
    double kernel_diag_slack = 1e-6;  // sampler diagonal range guard
};

inline const Tolerances& tol() {
    static const Tolerances t{};
    return t;
}

} // namespace crsf
