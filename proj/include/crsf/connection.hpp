#pragma once

#include <vector>

#include "crsf/graph.hpp"
#include "crsf/linalg.hpp"

namespace crsf {

// Parallel transports on a line bundle. Stored on the canonical orientation
// only; the reverse transport is the exact inverse.
class LineConnection {
public:
    LineConnection() = default;
    explicit LineConnection(std::vector<cplx> phi);
    static LineConnection trivial(int edge_count);

    int edgeCount() const { return static_cast<int>(phi_.size()); }
    cplx forward(int e) const { return phi_[e]; }
    cplx transport(Dart d) const { return dartIsReversed(d) ? 1.0 / phi_[dartEdge(d)] : phi_[dartEdge(d)]; }
    void set(int e, cplx value);
    void multiply(Dart d, cplx value); // multiplies the transport seen along d

    bool unitary(double tolerance = tol().unitary) const;

private:
    std::vector<cplx> phi_;
};

// SL2 transports; reverse transport is the matrix inverse (= adjugate).
class SL2Connection {
public:
    SL2Connection() = default;
    explicit SL2Connection(std::vector<Mat2> phi);
    static SL2Connection trivial(int edge_count);

    int edgeCount() const { return static_cast<int>(phi_.size()); }
    const Mat2& forward(int e) const { return phi_[e]; }
    Mat2 transport(Dart d) const {
        return dartIsReversed(d) ? phi_[dartEdge(d)].adjugate() : phi_[dartEdge(d)];
    }
    void set(int e, const Mat2& value); // validates det = 1
    void multiplyLeft(Dart d, const Mat2& value);

    double maxDetDefect() const;

private:
    std::vector<Mat2> phi_;
};

// ---------------------------------------------------------------------------
// Monodromy and gauge
// ---------------------------------------------------------------------------

// Ordered product of transports along a closed directed walk.
cplx monodromy(const Graph& g, const LineConnection& conn, const std::vector<Dart>& cycle);
Mat2 monodromy(const Graph& g, const SL2Connection& conn, const std::vector<Dart>& cycle);

// phi'_{vv'} = psi_{v'} phi_{vv'} psi_v^{-1}
LineConnection gaugeTransform(const Graph& g, const LineConnection& conn,
                              const std::vector<cplx>& psi);
SL2Connection gaugeTransform(const Graph& g, const SL2Connection& conn,
                             const std::vector<Mat2>& psi);

// Gauge that makes every transport along a BFS spanning tree equal to 1.
std::vector<cplx> spanningTreeGauge(const Graph& g, const LineConnection& conn);

// Connection whose transports are z^{wind_x} (and w^{wind_y}) on the preset
// generator seams; the standard flat bundle on the surface presets.
LineConnection windingConnection(const Graph& g, cplx z, cplx w = cplx(1.0));

// ---------------------------------------------------------------------------
// Zippers
// ---------------------------------------------------------------------------

struct Zipper {
    // darts crossed by the dual path from the face to the outer face; each
    // stored dart has the earlier face of the path on its right
    std::vector<Dart> crossed;
    int face = -1;
    // boundary edge through which the dual path exits into the outer face
    int exit_edge = -1;
};

// Restrict where the zipper may exit: any outer edge, or only edges of a
// specified list (used to pin the exit arc between two boundary vertices).
// blocked_faces keeps a second zipper's dual path disjoint from the first.
struct ZipperOptions {
    std::vector<int> allowed_exit_edges; // empty: no restriction
    std::vector<int> blocked_faces;      // dual path may not enter these
};

// Dual BFS path from `face` to the outer face; multiplies the transport on
// each crossed dart by `multiplier`, giving monodromy `multiplier` around
// `face` and trivial monodromy around every other bounded face.
Zipper makeZipper(const Graph& g, const PlanarEmbedding& emb, int face, cplx multiplier,
                  LineConnection& conn, const ZipperOptions& opts = {});
Zipper makeZipper(const Graph& g, const PlanarEmbedding& emb, int face, const Mat2& multiplier,
                  SL2Connection& conn, const ZipperOptions& opts = {});

// Monodromy around the counterclockwise boundary walk of a bounded face.
cplx faceMonodromy(const Graph& g, const PlanarEmbedding& emb, const LineConnection& conn, int face);
Mat2 faceMonodromy(const Graph& g, const PlanarEmbedding& emb, const SL2Connection& conn, int face);

} // namespace crsf
