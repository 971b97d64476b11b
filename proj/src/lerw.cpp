#include "crsf/lerw.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "crsf/laplacian.hpp"
#include "crsf/oracle.hpp"

namespace crsf {

namespace {

void requireUnitConductances(const Graph& g) {
    for (const Edge& e : g.edges())
        if (e.c != 1.0 || e.c_rev != 1.0)
            throw InputError("random-walk identities require unit conductances");
}

std::vector<int> zipperExponents(const Graph& g, const std::vector<Dart>& zipper) {
    std::vector<int> sigma(g.edgeCount(), 0);
    for (Dart d : zipper) sigma[dartEdge(d)] += dartIsReversed(d) ? -1 : 1;
    return sigma;
}

LineConnection zipperConnection(const Graph& g, const std::vector<Dart>& zipper, cplx z) {
    const auto sigma = zipperExponents(g, zipper);
    std::vector<cplx> phi(g.edgeCount(), cplx(1.0));
    for (int e = 0; e < g.edgeCount(); ++e)
        if (sigma[e] != 0) phi[e] = std::pow(z, cplx(static_cast<double>(sigma[e])));
    return LineConnection(std::move(phi));
}

// generalized binomial coefficient C(d, k) for integer d (possibly negative)
double genBinom(int d, int k) {
    double v = 1.0;
    for (int i = 0; i < k; ++i) v *= static_cast<double>(d - i) / (i + 1);
    return v;
}

} // namespace

// ---------------------------------------------------------------------------
// Crossing PGFs
// ---------------------------------------------------------------------------

cplx crossingPgfChainSide(const Graph& g, const std::vector<Dart>& zipper, int v, int vp, cplx z) {
    requireUnitConductances(g);
    const int n = g.vertexCount();
    const auto sigma = zipperExponents(g, zipper);
    // states != vp, columns index the source vertex
    std::vector<int> idx(n, -1);
    int k = 0;
    for (int u = 0; u < n; ++u)
        if (u != vp) idx[u] = k++;
    CMatrix i_minus_n(k, k);
    for (int i = 0; i < k; ++i) i_minus_n(i, i) = 1.0;
    std::vector<cplx> a_row(k, cplx(0.0)); // transitions into vp

    for (int e = 0; e < g.edgeCount(); ++e) {
        for (Dart d : {dartForward(e), dartReverse(e)}) {
            const int from = g.dartTail(d), to = g.dartHead(d);
            if (from == vp) continue; // absorbing
            const cplx step =
                std::pow(z, cplx(static_cast<double>(dartIsReversed(d) ? -sigma[e] : sigma[e]))) /
                static_cast<double>(g.degree(from));
            if (to == vp)
                a_row[idx[from]] += step;
            else
                i_minus_n(idx[to], idx[from]) -= step;
        }
    }
    std::vector<cplx> rhs(k, cplx(0.0));
    rhs[idx[v]] = 1.0;
    const std::vector<cplx> x = luFactor(std::move(i_minus_n)).solve(rhs);
    cplx out = 0.0;
    for (int i = 0; i < k; ++i) out += a_row[i] * x[i];
    return out;
}

cplx crossingPgfGreenSide(const Graph& g, const std::vector<Dart>& zipper, int v, int vp, cplx z) {
    requireUnitConductances(g);
    const CMatrix m = assemble(g, zipperConnection(g, zipper, z)).delta;
    const cplx num = adjugateEntry(m, vp, v);
    const cplx den = adjugateEntry(m, vp, vp);
    if (std::abs(den) < 1e-300) throw NumericError("crossingPgfGreenSide: vanishing cofactor");
    return num / den;
}

cplx returnPgfChainSide(const Graph& g, const std::vector<Dart>& zipper, int vp, cplx z) {
    requireUnitConductances(g);
    const auto sigma = zipperExponents(g, zipper);
    cplx out = 0.0;
    for (int e = 0; e < g.edgeCount(); ++e) {
        for (Dart d : {dartForward(e), dartReverse(e)}) {
            if (g.dartTail(d) != vp) continue;
            const cplx step =
                std::pow(z, cplx(static_cast<double>(dartIsReversed(d) ? -sigma[e] : sigma[e]))) /
                static_cast<double>(g.degree(vp));
            out += step * crossingPgfChainSide(g, zipper, g.dartHead(d), vp, z);
        }
    }
    return out;
}

cplx returnPgfGreenSide(const Graph& g, const std::vector<Dart>& zipper, int vp, cplx z) {
    requireUnitConductances(g);
    const CMatrix m = assemble(g, zipperConnection(g, zipper, z)).delta;
    const cplx dt = det(m);
    const cplx cof = adjugateEntry(m, vp, vp);
    if (std::abs(cof) < 1e-300) throw NumericError("returnPgfGreenSide: vanishing cofactor");
    return 1.0 - dt / (static_cast<double>(g.degree(vp)) * cof);
}

double expectedCrossingsTransferCurrent(const Graph& g, const std::vector<Dart>& zipper, int v,
                                        int vp) {
    requireUnitConductances(g);
    // generalized inverse of the standard Laplacian: (Delta0 + J/n)^{-1}
    const int n = g.vertexCount();
    CMatrix m = assemble(g, LineConnection::trivial(g.edgeCount())).delta;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) += 1.0 / n;
    const CMatrix g0 = inverse(m);
    double sum = 0.0;
    for (Dart d : zipper) {
        const int u = g.dartTail(d), w = g.dartHead(d);
        sum += (g0(vp, u) + g0(v, w) - g0(vp, w) - g0(v, u)).real();
    }
    return sum;
}

CrossingPgf crossingPgf(const Graph& g, const std::vector<Dart>& zipper, int v, int vp) {
    CrossingPgf out;
    for (cplx z : {cplx(std::cos(M_PI / 7), std::sin(M_PI / 7)), cplx(1.1), cplx(0.9)}) {
        out.worst_identity_error =
            std::max(out.worst_identity_error,
                     std::abs(crossingPgfChainSide(g, zipper, v, vp, z) -
                              crossingPgfGreenSide(g, zipper, v, vp, z)));
        out.worst_return_error =
            std::max(out.worst_return_error, std::abs(returnPgfChainSide(g, zipper, vp, z) -
                                                      returnPgfGreenSide(g, zipper, vp, z)));
    }

    // finite differences in eps with two Richardson levels
    auto f = [&](double eps) {
        return crossingPgfGreenSide(g, zipper, v, vp, 1.0 + eps).real();
    };
    auto h_ret = [&](double eps) {
        return returnPgfGreenSide(g, zipper, vp, 1.0 + eps).real();
    };
    const double h = 0.05;
    auto richardson2 = [](double a_h, double a_h2, double a_h4) {
        const double r1 = (4.0 * a_h2 - a_h) / 3.0;
        const double r2 = (4.0 * a_h4 - a_h2) / 3.0;
        return (16.0 * r2 - r1) / 15.0;
    };
    auto d1 = [&](auto&& fn, double hh) { return (fn(hh) - fn(-hh)) / (2.0 * hh); };
    auto d2c = [&](auto&& fn, double hh) { return (fn(hh) + fn(-hh) - 2.0) / (2.0 * hh * hh); };
    auto d3 = [&](auto&& fn, double hh) { return (fn(hh) - fn(-hh)) / (2.0 * hh * hh * hh); };

    out.x1 = richardson2(d1(f, h), d1(f, h / 2), d1(f, h / 4));
    out.x2 = richardson2(d2c(f, h), d2c(f, h / 2), d2c(f, h / 4));
    out.y2 = richardson2(d2c(h_ret, h), d2c(h_ret, h / 2), d2c(h_ret, h / 4));
    out.y3 = richardson2(d3(h_ret, h), d3(h_ret, h / 2), d3(h_ret, h / 4));
    return out;
}

// ---------------------------------------------------------------------------
// det expansion
// ---------------------------------------------------------------------------

LaurentPoly detPolynomial(const Graph& g, const std::vector<Dart>& zipper) {
    const auto sigma = zipperExponents(g, zipper);
    int bound = 0;
    for (int s : sigma) bound += std::abs(s);
    if (bound == 0) bound = 1;
    return interpolateLaurent(
        [&](cplx z) { return det(assemble(g, zipperConnection(g, zipper, z)).delta); }, bound);
}

cplx logDerivativeDet(const Graph& g, const std::vector<Dart>& zipper, cplx z) {
    const auto sigma = zipperExponents(g, zipper);
    const CMatrix m = assemble(g, zipperConnection(g, zipper, z)).delta;
    const CMatrix gi = inverse(m);
    // d/dz entry (t,h) = -c sigma z^{sigma-1}; (h,t) = +c sigma z^{-sigma-1}
    cplx acc = 0.0;
    for (int e = 0; e < g.edgeCount(); ++e) {
        if (sigma[e] == 0) continue;
        const Edge& ed = g.edge(e);
        const double s = static_cast<double>(sigma[e]);
        const cplx d_th = -ed.c * s * std::pow(z, cplx(s - 1.0));
        const cplx d_ht = ed.c_rev * s * std::pow(z, cplx(-s - 1.0));
        acc += gi(ed.head, ed.tail) * d_th + gi(ed.tail, ed.head) * d_ht;
    }
    return acc;
}

DetExpansionReport detExpansion(const Graph& g, const std::vector<Dart>& zipper, int vp) {
    requireUnitConductances(g);
    if (!g.connected()) throw InputError("detExpansion: graph must be connected");
    DetExpansionReport rep;
    rep.kappa = spanningTreeCount(g);

    // exact Taylor coefficients of det Delta(1+eps) from the Laurent form
    const LaurentPoly detp = detPolynomial(g, zipper);
    auto taylor = [&](const LaurentPoly& p, int k) {
        cplx acc = 0.0;
        for (int d = p.lowDegree(); d <= p.highDegree(); ++d)
            acc += p.coeff(d) * genBinom(d, k);
        return acc;
    };
    const double t2 = taylor(detp, 2).real();
    const double t3 = taylor(detp, 3).real();
    const double scale = detp.maxAbsCoeff();
    if (std::abs(taylor(detp, 0)) > 1e-8 * scale || std::abs(taylor(detp, 1)) > 1e-8 * scale)
        throw NumericError("detExpansion: det does not vanish to second order at z = 1");
    if (std::abs(t3 + t2) > 1e-7 * std::max(std::abs(t2), 1e-300))
        throw NumericError("detExpansion: eps^3 coefficient differs from -eps^2 coefficient");

    const double deg = g.degree(vp);
    // kappa recomputed from the vp cofactor of the interpolated polynomial at
    // z = 1 would equal spanningTreeCount; Y2 = -t2 / (kappa deg vp)
    rep.y2 = -t2 / (rep.kappa * deg);

    auto resid = [&](double eps) {
        const cplx dv = detp.eval(cplx(1.0 + eps));
        const double model = rep.kappa * deg * (-rep.y2 * eps * eps + rep.y2 * eps * eps * eps);
        return std::abs(dv.real() - model) / (eps * eps * eps * eps);
    };
    rep.resid_ratio_1 = resid(1e-2);
    rep.resid_ratio_2 = resid(1e-3);

    // log-derivative identity at a sample point vs central finite difference
    const cplx z0 = std::polar(1.0, M_PI / 5.0);
    const cplx lhs = logDerivativeDet(g, zipper, z0);
    const double h = 1e-5;
    const cplx dp = det(assemble(g, zipperConnection(g, zipper, z0 + h)).delta);
    const cplx dm = det(assemble(g, zipperConnection(g, zipper, z0 - h)).delta);
    const cplx rhs = std::log(dp / dm) / (2.0 * h);
    rep.logderiv_error = std::abs(lhs - rhs);
    return rep;
}

// ---------------------------------------------------------------------------
// One hole
// ---------------------------------------------------------------------------

namespace {

std::vector<Dart> zipperToArc(const Graph& g, const PlanarEmbedding& emb, int face,
                              const std::vector<int>& arc_edges,
                              const std::vector<int>& blocked_faces = {}) {
    LineConnection scratch = LineConnection::trivial(g.edgeCount());
    ZipperOptions opts;
    opts.allowed_exit_edges = arc_edges;
    opts.blocked_faces = blocked_faces;
    return makeZipper(g, emb, face, cplx(1.0), scratch, opts).crossed;
}

} // namespace

OneHoleResult leftPassageOneHole(const Graph& g, const PlanarEmbedding& emb, int z1, int z2,
                                 int face) {
    if (face == emb.outer_face) throw InputError("leftPassageOneHole: face is unbounded");
    const auto outer = outerCycle(g, emb);
    if (std::find(outer.begin(), outer.end(), z1) == outer.end() ||
        std::find(outer.begin(), outer.end(), z2) == outer.end())
        throw InputError("leftPassageOneHole: endpoints must lie on the outer boundary");

    // zipper exits through the ccw arc z2 -> z1 (the arc closing the oracle's
    // left test); paths left of the face do not cross it
    const std::vector<int> arc = ccwBoundaryArc(g, emb, z2, z1);
    const std::vector<Dart> crossed = zipperToArc(g, emb, face, arc);

    OneHoleResult out;

    // route (i): b -> 1 limit of the Green ratio, cofactor form
    auto ratio = [&](double eps) {
        const double b = 1.0 + eps;
        LineConnection conn = LineConnection::trivial(g.edgeCount());
        for (Dart d : crossed) conn.multiply(d, b);
        const CMatrix m = assemble(g, conn).delta;
        const cplx c21 = adjugateEntry(m, z2, z1);
        const cplx c12 = adjugateEntry(m, z1, z2);
        const cplx val = (b * b * c21 - c12) / ((b - 1.0) * (b * c21 + c12));
        return val.real();
    };
    const double e1 = 1e-3, e2 = 5e-4, e3 = 2.5e-4;
    const double r1 = ratio(e1), r2 = ratio(e2), r3 = ratio(e3);
    // quadratic extrapolation to eps = 0
    const double l01 = (e1 * r2 - e2 * r1) / (e1 - e2);
    const double l12 = (e2 * r3 - e3 * r2) / (e2 - e3);
    out.route_formula = l01 + (l12 - l01) * e1 / (e1 - e3);

    // route (ii): unit current z1 -> z2; flux across the zipper counts the
    // right-passing current for this exit arc
    BundleLaplacian dir = [&] {
        Graph gs = g;
        gs.setBoundary({z2});
        return assemble(gs, LineConnection::trivial(g.edgeCount()), LaplacianVariant::dirichlet);
    }();
    std::vector<cplx> rhs(dir.vertexDim(), cplx(0.0));
    for (int i = 0; i < dir.vertexDim(); ++i)
        if (dir.kept[i] == z1) rhs[i] = 1.0;
    const std::vector<cplx> sol = luFactor(dir.delta).solve(rhs);
    std::vector<double> psi(g.vertexCount(), 0.0);
    for (int i = 0; i < dir.vertexDim(); ++i) psi[dir.kept[i]] = sol[i].real();
    double flux = 0.0;
    for (Dart d : crossed)
        flux += g.dartWeight(d) * (psi[g.dartHead(d)] - psi[g.dartTail(d)]);
    out.route_current = 1.0 - flux;

    out.routes_gap = std::abs(out.route_formula - out.route_current);
    if (out.routes_gap > 1e-4)
        throw NumericError("leftPassageOneHole: independent routes disagree (gap " +
                           std::to_string(out.routes_gap) + ")");
    out.probability = out.route_formula;
    return out;
}

// ---------------------------------------------------------------------------
// Two holes
// ---------------------------------------------------------------------------

namespace {

Mat2 sl2Perturbation(double diag1, double off_upper, double off_lower, double diag2, double u) {
    const double ru = std::sqrt(u);
    Mat2 m{1.0 + diag1 * u, off_upper * ru, off_lower * ru, 1.0 + diag2 * u};
    const cplx s = std::sqrt(m.det());
    return m * (1.0 / s);
}

struct Setting {
    double y, z, b, c, s, t;
};

} // namespace

TwoHoleResult twoHoleExtraction(const Graph& g, const PlanarEmbedding& emb, int z1, int z2, int f1,
                                int f2, double u) {
    if (u < 1e-4 || u > 1e-2) throw InputError("twoHoleExtraction: u must lie in [1e-4, 1e-2]");
    const std::vector<int> arc = ccwBoundaryArc(g, emb, z2, z1);
    const std::vector<Dart> zip_a = zipperToArc(g, emb, f1, arc);
    std::vector<int> blocked;
    if (f1 != f2) {
        blocked.push_back(f1);
        for (Dart d : zip_a) {
            blocked.push_back(emb.face_of_dart[d]);
            blocked.push_back(emb.face_of_dart[dartOpposite(d)]);
        }
    }
    const std::vector<Dart> zip_b = f1 == f2 ? zip_a : zipperToArc(g, emb, f2, arc, blocked);

    const std::vector<Setting> settings = {
        {1, 1, 1, 1, 1, -1},   {1, -1, 1, 1, 2, 1},   {-1, 1, 1, -1, -1, 2},
        {2, 1, -1, 1, 1, 1},   {1, 2, 1, -2, -2, -1}, {1, 1, 2, 1, 3, 2},
        {-1, -1, -1, -1, 1, 3}, {2, -1, 1, 2, -1, -2}, {1, 1, -2, -1, 2, -3},
        {-2, 1, 1, 1, -3, 1},
    };

    auto phiAt = [&](const Setting& st, double uu) {
        const double x = st.y * st.z / 2.0 + st.s, w = st.y * st.z / 2.0 - st.s;
        const double a = st.b * st.c / 2.0 + st.t, d = st.b * st.c / 2.0 - st.t;
        const Mat2 ma = sl2Perturbation(x, st.y, st.z, w, uu);
        const Mat2 mb = sl2Perturbation(a, st.b, st.c, d, uu);
        SL2Connection conn = SL2Connection::trivial(g.edgeCount());
        for (Dart dd : zip_a) conn.multiplyLeft(dd, ma);
        for (Dart dd : zip_b) conn.multiplyLeft(dd, mb);
        const CMatrix delta = assemble(g, conn).delta;
        const cplx adj_entry = adjugateEntry(delta, 2 * z1 + 1, 2 * z2 + 1);
        // Qdet = Pf(Z Delta')
        const int nn = delta.rows() / 2;
        CMatrix zd(2 * nn, 2 * nn);
        for (int i = 0; i < nn; ++i)
            for (int j = 0; j < 2 * nn; ++j) {
                zd(2 * i, j) = delta(2 * i + 1, j);
                zd(2 * i + 1, j) = -delta(2 * i, j);
            }
        const cplx pf = pfaffian(std::move(zd));
        if (std::abs(pf) < 1e-300) throw NumericError("twoHoleExtraction: vanishing Qdet");
        return (adj_entry / pf).real();
    };

    // quadratic fit of Phi over {u, u/2, u/4}: value and slope at u = 0 via
    // the Lagrange form of Phi(uu) = S + D uu + E uu^2
    std::vector<double> s_vals, d_vals;
    for (const Setting& st : settings) {
        const double u1 = u, u2 = u / 2, u3 = u / 4;
        const double p1 = phiAt(st, u1), p2 = phiAt(st, u2), p3 = phiAt(st, u3);
        const double l1 = p1 / ((u1 - u2) * (u1 - u3));
        const double l2 = p2 / ((u2 - u1) * (u2 - u3));
        const double l3 = p3 / ((u3 - u1) * (u3 - u2));
        s_vals.push_back(l1 * u2 * u3 + l2 * u1 * u3 + l3 * u1 * u2);
        d_vals.push_back(-(l1 * (u2 + u3) + l2 * (u1 + u3) + l3 * (u1 + u2)));
    }

    // model: D = N_lr d + N_rl w + N_rr (d + w + b z) - N1 (w + x)
    //            - N2 (a + d) - N3 (a + d + w + x + c y + b z)
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (size_t i = 0; i < settings.size(); ++i) {
        const Setting& st = settings[i];
        const double x = st.y * st.z / 2.0 + st.s, w = st.y * st.z / 2.0 - st.s;
        const double a = st.b * st.c / 2.0 + st.t, d = st.b * st.c / 2.0 - st.t;
        rows.push_back({d, w, d + w + st.b * st.z, -(w + x), -(a + d),
                        -(a + d + w + x + st.c * st.y + st.b * st.z)});
        rhs.push_back(d_vals[i]);
    }
    TwoHoleResult out;
    std::vector<double> n = leastSquares(rows, rhs, &out.condition);
    if (out.condition > 1e8)
        throw NumericError("twoHoleExtraction: ill-conditioned extraction system");
    out.n_lr = n[0];
    out.n_rl = n[1];
    out.n_rr = n[2];
    out.n1 = n[3];
    out.n2 = n[4];
    out.n3 = n[5];

    double s_mean = 0.0;
    for (double s : s_vals) s_mean += s;
    s_mean /= static_cast<double>(s_vals.size());
    out.n_ll = s_mean - out.n_lr - out.n_rl - out.n_rr;

    double scale = std::abs(s_mean);
    for (size_t i = 0; i < rows.size(); ++i) {
        double fit = 0.0;
        for (int j = 0; j < 6; ++j) fit += rows[i][j] * n[j];
        out.residual = std::max(out.residual, std::abs(fit - rhs[i]) / std::max(scale, 1e-300));
    }

    const double total = out.n_ll + out.n_lr + out.n_rl + out.n_rr;
    if (total <= 0.0) throw NumericError("twoHoleExtraction: nonpositive configuration mass");
    out.p_ll = out.n_ll / total;
    out.p_lr = out.n_lr / total;
    out.p_rl = out.n_rl / total;
    out.p_rr = out.n_rr / total;
    return out;
}

} // namespace crsf
