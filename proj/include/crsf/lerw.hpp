#pragma once

#include <vector>

#include "crsf/connection.hpp"
#include "crsf/graph.hpp"
#include "crsf/linalg.hpp"

namespace crsf {

// ---------------------------------------------------------------------------
// One hole
// ---------------------------------------------------------------------------

struct OneHoleResult {
    double probability = 0.0;   // agreed value (route_formula)
    double route_formula = 0.0; // b -> 1 limit of the zipper-Green ratio
    double route_current = 0.0; // transfer current across the zipper
    double routes_gap = 0.0;
};

// Probability that the LERW from z1 to z2 passes left of `face` ("left" =
// the closed curve path + ccw boundary arc z2 -> z1 encloses the face).
OneHoleResult leftPassageOneHole(const Graph& g, const PlanarEmbedding& emb, int z1, int z2,
                                 int face);

// ---------------------------------------------------------------------------
// Crossing generating functions (arbitrary directed zipper edge set)
// ---------------------------------------------------------------------------

struct CrossingPgf {
    double x1 = 0.0, x2 = 0.0; // G(v,v')/G(v',v') = 1 + X1 e + X2 e^2 + ...
    double y2 = 0.0, y3 = 0.0; // 1 - 1/(G(v',v') deg v') = 1 + Y2 e^2 + Y3 e^3 + ...
    double worst_identity_error = 0.0; // both-sides check over sampled z
    double worst_return_error = 0.0;
};

// transports z along the darts of E_Z, 1 elsewhere; unit conductances
cplx crossingPgfChainSide(const Graph& g, const std::vector<Dart>& zipper, int v, int vp, cplx z);
cplx crossingPgfGreenSide(const Graph& g, const std::vector<Dart>& zipper, int v, int vp, cplx z);
cplx returnPgfChainSide(const Graph& g, const std::vector<Dart>& zipper, int vp, cplx z);
cplx returnPgfGreenSide(const Graph& g, const std::vector<Dart>& zipper, int vp, cplx z);

// X1 transfer-current form: sum over zipper darts u->w of
// G0(v',u) + G0(v,w) - G0(v',w) - G0(v,u), with G0 a generalized inverse of
// the standard Laplacian.
double expectedCrossingsTransferCurrent(const Graph& g, const std::vector<Dart>& zipper, int v,
                                        int vp);

CrossingPgf crossingPgf(const Graph& g, const std::vector<Dart>& zipper, int v, int vp);

// ---------------------------------------------------------------------------
// det expansion around the trivial connection
// ---------------------------------------------------------------------------

struct DetExpansionReport {
    double kappa = 0.0;     // spanning tree count
    double y2 = 0.0;        // from the return-walk expansion at vp
    double resid_ratio_1 = 0.0, resid_ratio_2 = 0.0; // |residual| / eps^4 at two eps
    double logderiv_error = 0.0;                     // identity vs finite difference
};

DetExpansionReport detExpansion(const Graph& g, const std::vector<Dart>& zipper, int vp);

// exact Laurent coefficients of det Delta(z) for the zipper connection
LaurentPoly detPolynomial(const Graph& g, const std::vector<Dart>& zipper);

// d/dz log det Delta at z: trace identity route
cplx logDerivativeDet(const Graph& g, const std::vector<Dart>& zipper, cplx z);

// ---------------------------------------------------------------------------
// Two holes (SL2)
// ---------------------------------------------------------------------------

struct TwoHoleResult {
    double p_ll = 0.0, p_lr = 0.0, p_rl = 0.0, p_rr = 0.0;
    double n_ll = 0.0, n_lr = 0.0, n_rl = 0.0, n_rr = 0.0;
    double n1 = 0.0, n2 = 0.0, n3 = 0.0;
    double residual = 0.0;  // least-squares misfit of the extraction
    double condition = 0.0; // extraction system conditioning
};

// Extraction of the four passage probabilities around two faces from the
// first-order expansion of Qdet around the trivial SL2 connection.
// u is the expansion scale (1e-4 .. 1e-2).
TwoHoleResult twoHoleExtraction(const Graph& g, const PlanarEmbedding& emb, int z1, int z2, int f1,
                                int f2, double u);

} // namespace crsf
