#include "crsf/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace crsf {

double pointProbability(const CMatrix& kernel, const std::vector<bool>& present) {
    const int m = kernel.rows();
    if (static_cast<int>(present.size()) != m)
        throw InputError("pointProbability: vector length != edge count");
    CMatrix a(m, m);
    int count = 0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) a(i, j) = -kernel(i, j);
        if (present[i]) ++count;
        else a(i, i) += 1.0;
    }
    const cplx d = det(a);
    const double sign = ((m - count) % 2 == 0) ? 1.0 : -1.0;
    const double mu = sign * d.real();
    if (std::abs(d.imag()) > 1e-8 * std::max(1.0, std::abs(d)))
        throw NumericError("pointProbability: non-real determinant (kernel not Hermitian?)");
    return mu;
}

std::vector<bool> sampleDpp(CMatrix kernel, uint64_t seed) {
    const int m = kernel.rows();
    SplitMix64 rng(seed);
    std::vector<bool> present(m, false);
    for (int i = 0; i < m; ++i) {
        double p = kernel(i, i).real();
        if (p < -tol().kernel_diag_slack || p > 1.0 + tol().kernel_diag_slack) {
            std::ostringstream os;
            os << "sampleDpp: conditional kernel diagonal " << p << " out of range at step " << i;
            throw NumericError(os.str());
        }
        p = std::min(1.0, std::max(0.0, p));
        const bool take = rng.uniform() < p;
        present[i] = take;
        const cplx denom = take ? kernel(i, i) : kernel(i, i) - 1.0;
        if (std::abs(denom) < 1e-14) continue; // decision was (numerically) forced
        for (int x = i + 1; x < m; ++x) {
            const cplx kxi = kernel(x, i);
            if (kxi == cplx(0.0)) continue;
            for (int y = i + 1; y < m; ++y) kernel(x, y) -= kxi * kernel(i, y) / denom;
        }
        for (int y = i + 1; y < m; ++y) {
            kernel(i, y) = 0.0;
            kernel(y, i) = 0.0;
        }
    }
    return present;
}

CrsfConfig sampleCrsf(const Graph& g, const LineConnection& conn, uint64_t seed) {
    const CMatrix kernel = transferCurrent(g, conn);
    const std::vector<bool> present = sampleDpp(kernel, seed);
    CrsfConfig cfg;
    for (int e = 0; e < g.edgeCount(); ++e)
        if (present[e]) cfg.edges.push_back(e);
    if (!validateCrsf(g, cfg.edges, &cfg.cycles))
        throw NumericError("sampleCrsf: sampled edge set is not a CRSF");
    return cfg;
}

// ---------------------------------------------------------------------------
// Small-monodromy limit
// ---------------------------------------------------------------------------

namespace {

LineConnection phaseConnection(const Graph& g, const std::vector<double>& c, double t) {
    std::vector<cplx> phi(g.edgeCount());
    for (int e = 0; e < g.edgeCount(); ++e) phi[e] = std::polar(1.0, t * c[e]);
    return LineConnection(std::move(phi));
}

} // namespace

ConfigMeasure smallMonodromyFiniteT(const Graph& g, const std::vector<double>& c, double t) {
    if (static_cast<int>(c.size()) != g.edgeCount())
        throw InputError("smallMonodromy: need one constant per edge");
    const LineConnection conn = phaseConnection(g, c, t);
    ConfigMeasure out;
    double total = 0.0;
    enumerateCrsfs(g, [&](const CrsfConfig& cfg) {
        double w = 1.0;
        for (int e : cfg.edges) w *= g.edge(e).c;
        for (const auto& cyc : cfg.cycles) {
            cplx mono = 1.0;
            for (Dart d : cyc) mono *= conn.transport(d);
            w *= (2.0 - mono - 1.0 / mono).real();
        }
        if (w != 0.0) {
            out[cfg.edges] = w;
            total += w;
        }
    });
    if (total <= 0.0) throw NumericError("smallMonodromy: partition function vanishes");
    for (auto& [k, v] : out) v /= total;
    return out;
}

ConfigMeasure smallMonodromyLimit(const Graph& g, const std::vector<double>& c) {
    if (static_cast<int>(c.size()) != g.edgeCount())
        throw InputError("smallMonodromy: need one constant per edge");
    ConfigMeasure out;
    double total = 0.0;
    enumerateCrsfs(g, [&](const CrsfConfig& cfg) {
        if (cfg.cycles.size() != 1) return; // only CRTs survive the limit
        double s = 0.0;
        for (Dart d : cfg.cycles[0]) s += dartIsReversed(d) ? -c[dartEdge(d)] : c[dartEdge(d)];
        double w = s * s;
        for (int e : cfg.edges) w *= g.edge(e).c;
        if (w != 0.0) {
            out[cfg.edges] = w;
            total += w;
        }
    });
    if (total <= 0.0)
        throw NumericError("smallMonodromy: all cycle sums vanish, limit measure undefined");
    for (auto& [k, v] : out) v /= total;
    return out;
}

ConfigMeasure smallMonodromyExtrapolated(const Graph& g, const std::vector<double>& c, double t) {
    // probabilities are even in t: p(t) = p0 + a t^2 + O(t^4)
    const ConfigMeasure full = smallMonodromyFiniteT(g, c, t);
    const ConfigMeasure half = smallMonodromyFiniteT(g, c, t / 2.0);
    ConfigMeasure out;
    for (const auto& [k, v] : half) {
        const auto it = full.find(k);
        const double pf = it == full.end() ? 0.0 : it->second;
        const double p = (4.0 * v - pf) / 3.0;
        if (p > 1e-15) out[k] = p;
    }
    return out;
}

double totalVariation(const ConfigMeasure& a, const ConfigMeasure& b) {
    double tv = 0.0;
    for (const auto& [k, v] : a) {
        const auto it = b.find(k);
        tv += std::abs(v - (it == b.end() ? 0.0 : it->second));
    }
    for (const auto& [k, v] : b)
        if (a.find(k) == a.end()) tv += v;
    return tv / 2.0;
}

} // namespace crsf
