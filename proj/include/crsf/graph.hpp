#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "crsf/errors.hpp"
#include "crsf/linalg.hpp"

namespace crsf {

// A dart is a directed use of an edge: 2*edge + 0 along the canonical
// orientation (tail -> head), 2*edge + 1 reversed.
using Dart = int;
inline Dart dartForward(int edge) { return 2 * edge; }
inline Dart dartReverse(int edge) { return 2 * edge + 1; }
inline int dartEdge(Dart d) { return d / 2; }
inline bool dartIsReversed(Dart d) { return d % 2 != 0; }
inline Dart dartOpposite(Dart d) { return d ^ 1; }

struct Edge {
    int tail = 0;
    int head = 0;
    double c = 1.0;       // conductance along tail -> head
    double c_rev = 1.0;   // conductance along head -> tail; 0 means one-way
    // signed crossings of the surface-preset generator cuts (0 off presets)
    int wind_x = 0;
    int wind_y = 0;
};

// Finite multigraph with conductances, optional per-direction weights,
// optional boundary vertex set. Immutable once built.
class Graph {
public:
    Graph() = default;
    explicit Graph(int vertex_count) : n_(vertex_count) {}

    int vertexCount() const { return n_; }
    int edgeCount() const { return static_cast<int>(edges_.size()); }
    const Edge& edge(int e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const { return edges_; }

    // Canonical orientation: tail < head when symmetric; directed edges keep
    // their given direction.
    int addEdge(int tail, int head, double c = 1.0, std::optional<double> c_rev = std::nullopt);
    int addDirectedEdge(int tail, int head, double c, double c_rev, int wind_x = 0,
                        int wind_y = 0);

    bool isSymmetric() const; // c == c_rev on every edge

    int dartTail(Dart d) const { return dartIsReversed(d) ? edges_[dartEdge(d)].head : edges_[dartEdge(d)].tail; }
    int dartHead(Dart d) const { return dartIsReversed(d) ? edges_[dartEdge(d)].tail : edges_[dartEdge(d)].head; }
    double dartWeight(Dart d) const { return dartIsReversed(d) ? edges_[dartEdge(d)].c_rev : edges_[dartEdge(d)].c; }
    int dartWindX(Dart d) const { return dartIsReversed(d) ? -edges_[dartEdge(d)].wind_x : edges_[dartEdge(d)].wind_x; }
    int dartWindY(Dart d) const { return dartIsReversed(d) ? -edges_[dartEdge(d)].wind_y : edges_[dartEdge(d)].wind_y; }

    // darts leaving v with positive weight
    std::vector<Dart> outDarts(int v) const;
    // edges incident to v (each once, regardless of direction)
    std::vector<int> incidentEdges(int v) const;
    int degree(int v) const; // number of incident edge endpoints

    void setBoundary(std::vector<int> s);
    const std::vector<int>& boundary() const { return boundary_; }

    bool connected() const;

    // positions, when the graph was built with a planar layout
    bool hasPositions() const { return !pos_.empty(); }
    const std::vector<std::pair<double, double>>& positions() const { return pos_; }
    void setPositions(std::vector<std::pair<double, double>> pos);

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<int> boundary_;
    std::vector<std::pair<double, double>> pos_;
};

// ---------------------------------------------------------------------------
// Surface presets
// ---------------------------------------------------------------------------

enum class SurfaceKind { none, annulus, torus };

struct SurfacePreset {
    SurfaceKind kind = SurfaceKind::none;
    int m = 0; // width / rows
    int n = 0; // winding length / columns
    bool directed = false;
};

struct PresetGraph {
    Graph graph;
    SurfacePreset preset;
};

// G_m x Z_n: line graph of length m times the n-cycle. Ring edges carry a
// +1 winding mark on one seam column. n >= 3; m >= 1.
PresetGraph buildGridCylinder(int m, int n);

// m x n grid on the torus. Undirected variant needs m, n >= 3; the directed
// north/east variant needs m, n >= 2 (smaller sizes would require loops).
PresetGraph buildTorusGrid(int m, int n, bool directed = false);

// n-cycle with a single +1 winding mark (annulus of width 1).
PresetGraph buildCycle(int n);

// Chain of k loops: k triangles joined consecutively by single edges, each
// triangle carrying one winding-marked edge.
PresetGraph buildChainOfLoops(int k);

// rows x cols planar grid of vertices with positions (for LERW analyses).
Graph buildPlanarGrid(int rows, int cols);

// ---------------------------------------------------------------------------
// Planar embedding
// ---------------------------------------------------------------------------

struct PlanarEmbedding {
    // rotation[v]: darts leaving v in counterclockwise order
    std::vector<std::vector<Dart>> rotation;
    // faces[f]: boundary darts; bounded faces run clockwise, the outer face
    // counterclockwise
    std::vector<std::vector<Dart>> faces;
    int outer_face = -1;
    // face on whose boundary walk each dart lies (the face RIGHT of the dart)
    std::vector<int> face_of_dart;

    int faceCount() const { return static_cast<int>(faces.size()); }
    bool edgeOnFace(int e, int f) const;
};

// vertices of the outer face in boundary-walk order (dart tails)
std::vector<int> outerCycle(const Graph& g, const PlanarEmbedding& emb);

// Build the embedding from stored vertex positions (angle-sorted rotation
// system, then face tracing). Requires positions on the graph.
PlanarEmbedding embedFromPositions(const Graph& g);

// Euler check V - E + F = 2; throws on failure.
void checkEuler(const Graph& g, const PlanarEmbedding& emb);

// ---------------------------------------------------------------------------
// Graph file I/O
// ---------------------------------------------------------------------------

struct ParsedGraphFile {
    Graph graph;
    // per canonical edge transports, when phi / phi2 lines were present
    std::optional<std::vector<cplx>> line_phi;
    std::optional<std::vector<Mat2>> sl2_phi;
};

ParsedGraphFile loadGraph(std::istream& in);
ParsedGraphFile loadGraphFile(const std::string& path);
std::string serializeGraph(const Graph& g, const std::vector<cplx>* line_phi = nullptr,
                           const std::vector<Mat2>* sl2_phi = nullptr);

} // namespace crsf
