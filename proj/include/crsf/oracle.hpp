#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "crsf/connection.hpp"
#include "crsf/graph.hpp"

namespace crsf {

// A CRSF configuration: n edges covering all vertices, one cycle per
// component. Cycles are stored as closed dart walks.
struct CrsfConfig {
    std::vector<int> edges;                 // ascending edge ids
    std::vector<std::vector<Dart>> cycles;  // one per component
};

// An oriented CRSF: one outgoing dart per vertex.
struct OcrsfConfig {
    std::vector<Dart> out;                  // indexed by vertex
    std::vector<std::vector<Dart>> cycles;
};

// Structural test: every vertex covered, one cycle per component. Fills
// cycles (closed dart walks) when non-null.
bool validateCrsf(const Graph& g, const std::vector<int>& edges,
                  std::vector<std::vector<Dart>>* cycles = nullptr);

// Enumerate all CRSFs of g (subset guard C(m, n) <= 10^7).
void enumerateCrsfs(const Graph& g, const std::function<void(const CrsfConfig&)>& yield);

// Enumerate all essential CRSFs w.r.t. the boundary set S of g.
void enumerateEssentialCrsfs(const Graph& g,
                             const std::function<void(const CrsfConfig&)>& yield);

// Enumerate oriented CRSFs: all choices of one outgoing dart per vertex
// (product guard 10^7).
void enumerateOcrsfs(const Graph& g, const std::function<void(const OcrsfConfig&)>& yield);

// Right-hand sides of the determinant theorems, computed by enumeration.
cplx crsfWeightedSum(const Graph& g, const LineConnection& conn);           // sum prod c * prod (2-w-1/w)
cplx essentialWeightedSum(const Graph& g, const LineConnection& conn);      // Dirichlet variant
cplx ocrsfWeightedSum(const Graph& g, const LineConnection& conn);          // directed: prod c * prod (1-w)
cplx sl2WeightedSum(const Graph& g, const SL2Connection& conn);             // prod c * prod (2-tr w)
cplx sl2EssentialWeightedSum(const Graph& g, const SL2Connection& conn);

// Count of CRSF configurations (unit weights, monodromy ignored).
long crsfCount(const Graph& g);

// ---------------------------------------------------------------------------
// Monotone lattice configurations on the m x n torus (abstract; allows
// m = 1 or n = 1 where the graph model would need loops)
// ---------------------------------------------------------------------------

// counts of north/east out-edge configurations by total homology class (j,k)
std::map<std::pair<int, int>, long> monotoneHomologyHistogram(int m, int n);

// ---------------------------------------------------------------------------
// Spanning trees and LERW
// ---------------------------------------------------------------------------

// Enumerate spanning trees (edge subsets); guard 10^6 trees.
void enumerateSpanningTrees(const Graph& g, const std::function<void(const std::vector<int>&)>& yield);

// Exact distribution of the UST branch between z1 and z2 (== LERW path law).
// Keys are vertex sequences z1 ... z2.
std::map<std::vector<int>, double> lerwDistribution(const Graph& g, int z1, int z2);

// Parity-based passage test: is face f left of the walk z1 -> z2? The walk
// is closed with the counterclockwise outer-boundary arc from z2 back to z1;
// f is "left" iff that closed curve encloses it.
bool faceLeftOfPath(const Graph& g, const PlanarEmbedding& emb, const std::vector<int>& path_vertices,
                    int z1, int z2, int face);

// Exact left-passage probability for one face via spanning tree enumeration.
double lerwLeftProbability(const Graph& g, const PlanarEmbedding& emb, int z1, int z2, int face);

struct TwoHoleProbabilities {
    double ll = 0, lr = 0, rl = 0, rr = 0;
};

// Exact (left/right of f1) x (left/right of f2) classification.
TwoHoleProbabilities lerwTwoHoleProbabilities(const Graph& g, const PlanarEmbedding& emb, int z1,
                                              int z2, int f1, int f2);

// Edges of the counterclockwise outer-boundary arc from z2 to z1.
std::vector<int> ccwBoundaryArc(const Graph& g, const PlanarEmbedding& emb, int z2, int z1);

} // namespace crsf
