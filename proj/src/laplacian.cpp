#include "crsf/laplacian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace crsf {

namespace {

std::vector<int> keptVertices(const Graph& g, LaplacianVariant variant) {
    std::vector<int> kept;
    if (variant == LaplacianVariant::dirichlet) {
        if (g.boundary().empty())
            throw InputError("dirichlet variant requires a nonempty boundary set");
        const auto& s = g.boundary();
        for (int v = 0; v < g.vertexCount(); ++v)
            if (!std::binary_search(s.begin(), s.end(), v)) kept.push_back(v);
    } else {
        kept.resize(g.vertexCount());
        for (int v = 0; v < g.vertexCount(); ++v) kept[v] = v;
    }
    return kept;
}

std::vector<int> vertexToRow(const Graph& g, const std::vector<int>& kept) {
    std::vector<int> row(g.vertexCount(), -1);
    for (size_t i = 0; i < kept.size(); ++i) row[kept[i]] = static_cast<int>(i);
    return row;
}

} // namespace

BundleLaplacian assemble(const Graph& g, const LineConnection& conn, LaplacianVariant variant) {
    if (conn.edgeCount() != g.edgeCount())
        throw InputError("assemble: connection does not cover every edge");
    BundleLaplacian l;
    l.variant = variant;
    l.kept = keptVertices(g, variant);
    l.unitary = conn.unitary() && g.isSymmetric();
    const auto row = vertexToRow(g, l.kept);
    const int n = static_cast<int>(l.kept.size());
    l.delta = CMatrix(n, n);
    for (int e = 0; e < g.edgeCount(); ++e) {
        const Edge& ed = g.edge(e);
        const int rt = row[ed.tail], rh = row[ed.head];
        // diagonal: total outgoing weight, counted also toward removed vertices
        if (rt >= 0) l.delta(rt, rt) += ed.c;
        if (rh >= 0) l.delta(rh, rh) += ed.c_rev;
        if (rt >= 0 && rh >= 0) {
            l.delta(rt, rh) -= ed.c * conn.transport(dartForward(e));
            l.delta(rh, rt) -= ed.c_rev * conn.transport(dartReverse(e));
        }
    }
    return l;
}

BundleLaplacian assemble(const Graph& g, const SL2Connection& conn, LaplacianVariant variant) {
    SelfDualMatrix sd = assembleSelfDual(g, conn, variant);
    BundleLaplacian l;
    l.sl2 = true;
    l.variant = variant;
    l.kept = keptVertices(g, variant);
    l.delta = sd.realize();
    return l;
}

SelfDualMatrix assembleSelfDual(const Graph& g, const SL2Connection& conn,
                                LaplacianVariant variant) {
    if (conn.edgeCount() != g.edgeCount())
        throw InputError("assemble: connection does not cover every edge");
    const auto kept = keptVertices(g, variant);
    const auto row = vertexToRow(g, kept);
    SelfDualMatrix sd(static_cast<int>(kept.size()));
    for (int e = 0; e < g.edgeCount(); ++e) {
        const Edge& ed = g.edge(e);
        const int rt = row[ed.tail], rh = row[ed.head];
        if (rt >= 0)
            sd.block(rt, rt) = sd.block(rt, rt) + Mat2::identity() * cplx(ed.c);
        if (rh >= 0)
            sd.block(rh, rh) = sd.block(rh, rh) + Mat2::identity() * cplx(ed.c_rev);
        if (rt >= 0 && rh >= 0) {
            sd.block(rt, rh) = sd.block(rt, rh) - conn.transport(dartForward(e)) * cplx(ed.c);
            sd.block(rh, rt) = sd.block(rh, rt) - conn.transport(dartReverse(e)) * cplx(ed.c_rev);
        }
    }
    return sd;
}

CMatrix green(const BundleLaplacian& l) {
    LuFactor f = luFactor(l.delta);
    if (f.singular) {
        std::ostringstream os;
        os << "green: Laplacian is singular (smallest pivot " << f.min_pivot << ")";
        throw NumericError(os.str());
    }
    CMatrix g = f.inverse();
    const double cond = l.delta.normInf() * g.normInf();
    if (cond > tol().condition_limit) {
        std::ostringstream os;
        os << "green: condition estimate " << cond << " exceeds limit (smallest pivot "
           << f.min_pivot << ")";
        throw NumericError(os.str());
    }
    return g;
}

CMatrix buildD(const Graph& g, const LineConnection& conn) {
    CMatrix d(g.edgeCount(), g.vertexCount());
    for (int e = 0; e < g.edgeCount(); ++e) {
        d(e, g.edge(e).tail) += 1.0;
        d(e, g.edge(e).head) -= conn.forward(e);
    }
    return d;
}

CMatrix buildDStar(const Graph& g, const LineConnection& conn) {
    CMatrix ds(g.vertexCount(), g.edgeCount());
    for (int e = 0; e < g.edgeCount(); ++e) {
        ds(g.edge(e).tail, e) += 1.0;
        ds(g.edge(e).head, e) -= 1.0 / conn.forward(e);
    }
    return ds;
}

CMatrix transferCurrent(const Graph& g, const LineConnection& conn) {
    if (!conn.unitary())
        throw NumericError("transferCurrent: connection must be unitary");
    if (!g.isSymmetric())
        throw NumericError("transferCurrent: conductances must be symmetric");
    BundleLaplacian l = assemble(g, conn);
    CMatrix gr = green(l);
    CMatrix d = buildD(g, conn);
    CMatrix ds = buildDStar(g, conn);
    // C^{1/2} d g d* C^{1/2}
    CMatrix p = d * gr * ds;
    for (int i = 0; i < p.rows(); ++i)
        for (int j = 0; j < p.cols(); ++j)
            p(i, j) *= std::sqrt(g.edge(i).c) * std::sqrt(g.edge(j).c);
    return p;
}

cplx detBundle(const BundleLaplacian& l) {
    if (l.sl2) throw NumericError("detBundle: use qdetBundle via graph+connection for SL2");
    return det(l.delta);
}

cplx detBundle(const Graph& g, const LineConnection& conn, LaplacianVariant variant) {
    return det(assemble(g, conn, variant).delta);
}

cplx qdetBundle(const Graph& g, const SL2Connection& conn, LaplacianVariant variant) {
    return qdet(assembleSelfDual(g, conn, variant));
}

double spanningTreeCount(const Graph& g) {
    if (g.vertexCount() <= 1) return 1.0;
    BundleLaplacian l = assemble(g, LineConnection::trivial(g.edgeCount()));
    const cplx kappa = detMinor(l.delta, 0, 0);
    return kappa.real();
}

double detPrimeStandard(const Graph& g) {
    if (!g.connected()) throw InputError("detPrimeStandard: graph must be connected");
    return g.vertexCount() * spanningTreeCount(g);
}

} // namespace crsf
