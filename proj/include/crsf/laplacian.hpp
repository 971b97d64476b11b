#pragma once

#include <optional>
#include <vector>

#include "crsf/connection.hpp"
#include "crsf/graph.hpp"
#include "crsf/linalg.hpp"

namespace crsf {

enum class LaplacianVariant { standard, dirichlet };

// Assembled bundle Laplacian. Entry convention: row v, column v' holds
// -sum_e c(v->v') phi(v->v') over parallel edges, matching the determinant
// expansion in which a cycle's entries multiply to its monodromy.
struct BundleLaplacian {
    CMatrix delta;               // n x n line case, 2n x 2n realized SL2 case
    bool sl2 = false;
    LaplacianVariant variant = LaplacianVariant::standard;
    std::vector<int> kept;       // vertex ids of rows/cols (all, or G \ S)
    bool unitary = false;        // line case: connection was unitary

    int vertexDim() const { return static_cast<int>(kept.size()); }
};

BundleLaplacian assemble(const Graph& g, const LineConnection& conn,
                         LaplacianVariant variant = LaplacianVariant::standard);
BundleLaplacian assemble(const Graph& g, const SL2Connection& conn,
                         LaplacianVariant variant = LaplacianVariant::standard);

// SL2 Laplacian as an n x n self-dual block matrix (for Qdet).
SelfDualMatrix assembleSelfDual(const Graph& g, const SL2Connection& conn,
                                LaplacianVariant variant = LaplacianVariant::standard);

// Green's function G = Delta^{-1}; refuses ill-conditioned input.
CMatrix green(const BundleLaplacian& l);

// Transfer current kernel P for a unitary line connection: with unit
// conductances P = d g d*; with conductances the diagonal-rescaled
// C^{1/2} d g d* C^{1/2} (same principal minors, Hermitian). m x m over
// canonical edges.
CMatrix transferCurrent(const Graph& g, const LineConnection& conn);

// The incidence-style maps: d is m x n with row e = (+1 at tail, -phi_e at
// head); dstar is its transport-inverse transpose.
CMatrix buildD(const Graph& g, const LineConnection& conn);
CMatrix buildDStar(const Graph& g, const LineConnection& conn);

// det for the line case, Qdet for the SL2 case.
cplx detBundle(const BundleLaplacian& l);
cplx detBundle(const Graph& g, const LineConnection& conn,
               LaplacianVariant variant = LaplacianVariant::standard);
cplx qdetBundle(const Graph& g, const SL2Connection& conn,
                LaplacianVariant variant = LaplacianVariant::standard);

// Weighted spanning tree count: any cofactor of the standard Laplacian.
double spanningTreeCount(const Graph& g);

// Product of the nonzero eigenvalues of the standard Laplacian of a
// connected graph: n * (spanning tree count).
double detPrimeStandard(const Graph& g);

} // namespace crsf
