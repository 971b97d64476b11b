#include "crsf/connection.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace crsf {

// ---------------------------------------------------------------------------
// LineConnection
// ---------------------------------------------------------------------------

LineConnection::LineConnection(std::vector<cplx> phi) : phi_(std::move(phi)) {
    for (const cplx& v : phi_)
        if (std::abs(v) == 0.0) throw InputError("line transport must be nonzero");
}

LineConnection LineConnection::trivial(int edge_count) {
    return LineConnection(std::vector<cplx>(edge_count, cplx(1.0)));
}

void LineConnection::set(int e, cplx value) {
    if (std::abs(value) == 0.0) throw InputError("line transport must be nonzero");
    phi_[e] = value;
}

void LineConnection::multiply(Dart d, cplx value) {
    if (std::abs(value) == 0.0) throw InputError("line transport must be nonzero");
    if (dartIsReversed(d))
        phi_[dartEdge(d)] /= value;
    else
        phi_[dartEdge(d)] *= value;
}

bool LineConnection::unitary(double tolerance) const {
    for (const cplx& v : phi_)
        if (std::abs(std::abs(v) - 1.0) > tolerance) return false;
    return true;
}

// ---------------------------------------------------------------------------
// SL2Connection
// ---------------------------------------------------------------------------

SL2Connection::SL2Connection(std::vector<Mat2> phi) : phi_(std::move(phi)) {
    if (maxDetDefect() > tol().sl2_det)
        throw InputError("SL2 transport determinant differs from 1 beyond tolerance");
}

SL2Connection SL2Connection::trivial(int edge_count) {
    return SL2Connection(std::vector<Mat2>(edge_count, Mat2::identity()));
}

void SL2Connection::set(int e, const Mat2& value) {
    if (std::abs(value.det() - cplx(1.0)) > tol().sl2_det)
        throw InputError("SL2 transport determinant differs from 1 beyond tolerance");
    phi_[e] = value;
}

void SL2Connection::multiplyLeft(Dart d, const Mat2& value) {
    if (dartIsReversed(d))
        phi_[dartEdge(d)] = phi_[dartEdge(d)] * value.adjugate();
    else
        phi_[dartEdge(d)] = value * phi_[dartEdge(d)];
}

double SL2Connection::maxDetDefect() const {
    double defect = 0.0;
    for (const Mat2& m : phi_) defect = std::max(defect, std::abs(m.det() - cplx(1.0)));
    return defect;
}

// ---------------------------------------------------------------------------
// Monodromy and gauge
// ---------------------------------------------------------------------------

namespace {

void checkClosedWalk(const Graph& g, const std::vector<Dart>& cycle) {
    if (cycle.empty()) throw InputError("monodromy: empty walk");
    for (size_t i = 0; i < cycle.size(); ++i) {
        const Dart cur = cycle[i];
        const Dart nxt = cycle[(i + 1) % cycle.size()];
        if (g.dartHead(cur) != g.dartTail(nxt))
            throw InputError("monodromy: walk is not closed");
    }
}

} // namespace

cplx monodromy(const Graph& g, const LineConnection& conn, const std::vector<Dart>& cycle) {
    checkClosedWalk(g, cycle);
    cplx prod = 1.0;
    for (Dart d : cycle) prod *= conn.transport(d);
    return prod;
}

Mat2 monodromy(const Graph& g, const SL2Connection& conn, const std::vector<Dart>& cycle) {
    checkClosedWalk(g, cycle);
    Mat2 prod = Mat2::identity();
    for (Dart d : cycle) prod = conn.transport(d) * prod; // left-to-right composition
    return prod;
}

LineConnection gaugeTransform(const Graph& g, const LineConnection& conn,
                              const std::vector<cplx>& psi) {
    for (const cplx& v : psi)
        if (std::abs(v) == 0.0) throw InputError("gauge transform: singular psi");
    std::vector<cplx> out(conn.edgeCount());
    for (int e = 0; e < conn.edgeCount(); ++e) {
        const Edge& ed = g.edge(e);
        out[e] = psi[ed.head] * conn.forward(e) / psi[ed.tail];
    }
    return LineConnection(std::move(out));
}

SL2Connection gaugeTransform(const Graph& g, const SL2Connection& conn,
                             const std::vector<Mat2>& psi) {
    for (const Mat2& v : psi)
        if (std::abs(v.det()) < 1e-14) throw InputError("gauge transform: singular psi");
    std::vector<Mat2> out(conn.edgeCount());
    for (int e = 0; e < conn.edgeCount(); ++e) {
        const Edge& ed = g.edge(e);
        out[e] = psi[ed.head] * conn.forward(e) * psi[ed.tail].inverse();
    }
    return SL2Connection(std::move(out));
}

std::vector<cplx> spanningTreeGauge(const Graph& g, const LineConnection& conn) {
    std::vector<cplx> psi(g.vertexCount(), cplx(0.0));
    std::vector<bool> seen(g.vertexCount(), false);
    // want psi_head * phi / psi_tail = 1 along tree darts
    for (int root = 0; root < g.vertexCount(); ++root) {
        if (seen[root]) continue;
        psi[root] = 1.0;
        seen[root] = true;
        std::queue<int> q;
        q.push(root);
        while (!q.empty()) {
            const int v = q.front();
            q.pop();
            for (int e : g.incidentEdges(v)) {
                const Edge& ed = g.edge(e);
                const int other = ed.tail == v ? ed.head : ed.tail;
                if (seen[other]) continue;
                seen[other] = true;
                const Dart d = ed.tail == v ? dartForward(e) : dartReverse(e);
                // transport along d maps fiber at v to fiber at other
                psi[other] = psi[v] / conn.transport(d);
                q.push(other);
            }
        }
    }
    return psi;
}

LineConnection windingConnection(const Graph& g, cplx z, cplx w) {
    std::vector<cplx> phi(g.edgeCount(), cplx(1.0));
    for (int e = 0; e < g.edgeCount(); ++e) {
        const Edge& ed = g.edge(e);
        if (ed.wind_x != 0) phi[e] *= std::pow(z, cplx(static_cast<double>(ed.wind_x)));
        if (ed.wind_y != 0) phi[e] *= std::pow(w, cplx(static_cast<double>(ed.wind_y)));
    }
    return LineConnection(std::move(phi));
}

// ---------------------------------------------------------------------------
// Zippers
// ---------------------------------------------------------------------------

namespace {

// BFS in the dual graph from `face` to the outer face; returns the primal
// darts crossed, each oriented with the earlier face of the path on its
// right side.
std::vector<Dart> dualPathCrossings(const Graph& g, const PlanarEmbedding& emb, int face,
                                    const ZipperOptions& opts) {
    if (face == emb.outer_face) throw InputError("makeZipper: face is the outer face");
    if (face < 0 || face >= emb.faceCount()) throw InputError("makeZipper: no such face");

    const int fcount = emb.faceCount();
    std::vector<int> prev_face(fcount, -1);
    std::vector<Dart> prev_dart(fcount, -1);
    std::vector<bool> seen(fcount, false);
    std::queue<int> q;
    seen[face] = true;
    q.push(face);
    while (!q.empty()) {
        const int f = q.front();
        q.pop();
        if (f == emb.outer_face) break;
        for (Dart d : emb.faces[f]) {
            // d lies on the boundary walk of f (f right of d); crossing d
            // leads to the face on the other side.
            const int nf = emb.face_of_dart[dartOpposite(d)];
            if (seen[nf]) continue;
            if (std::find(opts.blocked_faces.begin(), opts.blocked_faces.end(), nf) !=
                opts.blocked_faces.end())
                continue;
            if (nf == emb.outer_face && !opts.allowed_exit_edges.empty()) {
                const int e = dartEdge(d);
                if (std::find(opts.allowed_exit_edges.begin(), opts.allowed_exit_edges.end(), e) ==
                    opts.allowed_exit_edges.end())
                    continue;
            }
            seen[nf] = true;
            prev_face[nf] = f;
            prev_dart[nf] = d;
            q.push(nf);
        }
    }
    if (!seen[emb.outer_face])
        throw InputError("makeZipper: no dual path to the outer face (exit restriction?)");
    std::vector<Dart> crossings;
    for (int f = emb.outer_face; f != face; f = prev_face[f]) crossings.push_back(prev_dart[f]);
    std::reverse(crossings.begin(), crossings.end());
    return crossings;
}

} // namespace

Zipper makeZipper(const Graph& g, const PlanarEmbedding& emb, int face, cplx multiplier,
                  LineConnection& conn, const ZipperOptions& opts) {
    Zipper z;
    z.face = face;
    z.crossed = dualPathCrossings(g, emb, face, opts);
    z.exit_edge = dartEdge(z.crossed.back());
    // Each crossed dart has the previous dual-path face on its left. The CCW
    // walk of `face` contains the first crossing once (factor b); every face
    // further along the path sees one crossing with b and one with 1/b.
    for (Dart d : z.crossed) conn.multiply(d, multiplier);
    return z;
}

Zipper makeZipper(const Graph& g, const PlanarEmbedding& emb, int face, const Mat2& multiplier,
                  SL2Connection& conn, const ZipperOptions& opts) {
    Zipper z;
    z.face = face;
    z.crossed = dualPathCrossings(g, emb, face, opts);
    z.exit_edge = dartEdge(z.crossed.back());
    for (Dart d : z.crossed) conn.multiplyLeft(d, multiplier);
    return z;
}

cplx faceMonodromy(const Graph& g, const PlanarEmbedding& emb, const LineConnection& conn,
                   int face) {
    return monodromy(g, conn, emb.faces[face]);
}

Mat2 faceMonodromy(const Graph& g, const PlanarEmbedding& emb, const SL2Connection& conn,
                   int face) {
    return monodromy(g, conn, emb.faces[face]);
}

} // namespace crsf
