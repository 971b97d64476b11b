#pragma once

#include <map>
#include <vector>

#include "crsf/connection.hpp"
#include "crsf/graph.hpp"
#include "crsf/laplacian.hpp"
#include "crsf/linalg.hpp"

namespace crsf {

// ---------------------------------------------------------------------------
// Annulus
// ---------------------------------------------------------------------------

struct AnnulusSpectrum {
    LaurentPoly p;                   // P(z) = det Delta(z), reciprocal
    LaurentPoly q;                   // Q(w) with w = 2 - z - 1/z, Q(0) = 0
    std::vector<double> multipliers; // lambda_i > 0, ascending
    std::vector<double> biases;      // lambda_i / (1 + lambda_i)
    double interp_residual = 0.0;
};

// Interpolate det Delta(z) over the winding connection of an annulus preset
// graph; degree bound defaults to the number of winding-marked edge
// crossings (always sufficient). Asserts reciprocity, the double root at
// z = 1, and real negative Q-roots.
AnnulusSpectrum annulusSpectrum(const Graph& g, int degree_bound = -1);

// Closed form for the m x n cylinder: Q(w) = w prod_k (w + Ch_n(lambda_k+2) - 2)
// over the nonzero path-graph eigenvalues lambda_k = 2 + 2 cos(k pi / m).
AnnulusSpectrum cylinderSpectrumClosedForm(int m, int n);

// P(#cycles = j) for j = 0 .. k+1: normalized Q coefficients.
std::vector<double> cycleCountPgf(const AnnulusSpectrum& spec);

// Limit single-cycle probability for aspect ratio tau:
// prod_j (2 cosh(pi j / tau) - 2) / (2 cosh(pi j / tau) - 1).
double singleCycleProbabilityLimit(double tau, int max_terms = 40);

// Ch_n(x): the monic variant Chebyshev with Ch_n(a + 1/a) = a^n + a^-n.
double chebyshevCh(int n, double x);

// ---------------------------------------------------------------------------
// Torus (flat line bundle on Z^2 / nZ^2, scaling limit coefficients)
// ---------------------------------------------------------------------------

struct TorusSpectrum {
    // C[(j,k,m)] for primitive (j,k) (one per +- direction), m >= 1
    std::map<std::tuple<int, int, int>, double> c;
    double total = 0.0;
    double tail_bound = 0.0;

    double probability(int j, int k, int m) const;
};

TorusSpectrum torusCoefficients(int j_max = 6, int l_max = 8, int m_max = 10);

// ---------------------------------------------------------------------------
// G_m x Z_n product formulas
// ---------------------------------------------------------------------------

struct CylinderReport {
    cplx det_formula = 0.0;   // det Delta(z) via the eigenvalue product
    double det_prime = 0.0;   // det' Delta_0 via the z = 1 product
    double tree_count = 0.0;  // det' / (n m)
    double crt_count = 0.0;   // # CRTs winding once = det' / n^2
    double rn = 0.0;          // tree_count / crt_count
    double rn_over_n = 0.0;
};

CylinderReport cylinderProductFormula(int m, int n, cplx z);

// ---------------------------------------------------------------------------
// Monotone lattice paths on the m x n torus
// ---------------------------------------------------------------------------

struct LatticePathReport {
    std::map<std::pair<int, int>, double> coefficients; // C_{j,k}, small m,n only
    double extraction_residual = 0.0;
    // diagonal statistics (m == n): number of (1,1)-cycles
    double mean = 0.0;
    double variance = 0.0;
    std::vector<double> biases; // p_j = exp(-(2 pi j)^2 / n), j = 0, 1, ...
};

// F_{m,n}(z,w) = prod_{u^m=z} prod_{v^n=w} (2 - u - v), accumulated in logs.
cplx latticeProductF(int m, int n, cplx z, cplx w);

// Coefficient extraction for m*n <= 24; diagonal statistics for any m == n.
LatticePathReport latticePathPgf(int m, int n);

} // namespace crsf
