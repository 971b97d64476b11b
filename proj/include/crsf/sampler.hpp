#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "crsf/connection.hpp"
#include "crsf/graph.hpp"
#include "crsf/laplacian.hpp"
#include "crsf/oracle.hpp"

namespace crsf {

// mu(X) = (-1)^(m-|X|) det(diag(1-x) - P) for the edge in/out vector X.
double pointProbability(const CMatrix& kernel, const std::vector<bool>& present);

// Counter-based RNG (splitmix64); the reproducibility contract is per
// (seed, graph, connection), not a particular stream.
struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Exact sequential sampling from the determinantal CRSF measure. Edges are
// decided in canonical order; the kernel is Schur-updated per decision.
std::vector<bool> sampleDpp(CMatrix kernel, uint64_t seed);

// Sample a CRSF; the result always passes the structural validator.
CrsfConfig sampleCrsf(const Graph& g, const LineConnection& conn, uint64_t seed);

// ---------------------------------------------------------------------------
// Small-monodromy limit
// ---------------------------------------------------------------------------

// Measures over CRSF configurations keyed by their (sorted) edge sets.
using ConfigMeasure = std::map<std::vector<int>, double>;

// Finite-t CRSF measure with transports e^{i t c_e} on canonical darts.
ConfigMeasure smallMonodromyFiniteT(const Graph& g, const std::vector<double>& c, double t);

// t -> 0 limit: supported on single-component CRSFs (CRTs), with probability
// proportional to (conductance product) * (sum of c over the cycle)^2.
ConfigMeasure smallMonodromyLimit(const Graph& g, const std::vector<double>& c);

// Richardson extrapolation of the finite-t measure toward t = 0.
ConfigMeasure smallMonodromyExtrapolated(const Graph& g, const std::vector<double>& c, double t);

double totalVariation(const ConfigMeasure& a, const ConfigMeasure& b);

} // namespace crsf
