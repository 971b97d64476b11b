#include "crsf/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

namespace crsf {

// ---------------------------------------------------------------------------
// Graph
// ---------------------------------------------------------------------------

int Graph::addEdge(int tail, int head, double c, std::optional<double> c_rev) {
    if (tail == head) throw InputError("self-loops are not supported");
    if (tail < 0 || head < 0 || tail >= n_ || head >= n_)
        throw InputError("edge endpoint out of range");
    const double cr = c_rev.value_or(c);
    if (c <= 0.0) throw InputError("conductance must be positive");
    if (cr < 0.0) throw InputError("reverse conductance must be nonnegative");
    Edge e;
    if (!c_rev.has_value() && tail > head) std::swap(tail, head); // canonical orientation
    e.tail = tail;
    e.head = head;
    e.c = c;
    e.c_rev = cr;
    edges_.push_back(e);
    return static_cast<int>(edges_.size()) - 1;
}

int Graph::addDirectedEdge(int tail, int head, double c, double c_rev, int wind_x, int wind_y) {
    if (tail == head) throw InputError("self-loops are not supported");
    Edge e;
    e.tail = tail;
    e.head = head;
    e.c = c;
    e.c_rev = c_rev;
    e.wind_x = wind_x;
    e.wind_y = wind_y;
    edges_.push_back(e);
    return static_cast<int>(edges_.size()) - 1;
}

bool Graph::isSymmetric() const {
    for (const Edge& e : edges_)
        if (e.c != e.c_rev) return false;
    return true;
}

std::vector<Dart> Graph::outDarts(int v) const {
    std::vector<Dart> out;
    for (int e = 0; e < edgeCount(); ++e) {
        if (edges_[e].tail == v && edges_[e].c > 0.0) out.push_back(dartForward(e));
        if (edges_[e].head == v && edges_[e].c_rev > 0.0) out.push_back(dartReverse(e));
    }
    return out;
}

std::vector<int> Graph::incidentEdges(int v) const {
    std::vector<int> out;
    for (int e = 0; e < edgeCount(); ++e)
        if (edges_[e].tail == v || edges_[e].head == v) out.push_back(e);
    return out;
}

int Graph::degree(int v) const { return static_cast<int>(incidentEdges(v).size()); }

void Graph::setBoundary(std::vector<int> s) {
    for (int v : s)
        if (v < 0 || v >= n_) throw InputError("boundary vertex out of range");
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    boundary_ = std::move(s);
}

bool Graph::connected() const {
    if (n_ == 0) return true;
    std::vector<bool> seen(n_, false);
    std::queue<int> q;
    q.push(0);
    seen[0] = true;
    int count = 1;
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        for (const Edge& e : edges_) {
            int other = -1;
            if (e.tail == v) other = e.head;
            else if (e.head == v) other = e.tail;
            if (other >= 0 && !seen[other]) {
                seen[other] = true;
                ++count;
                q.push(other);
            }
        }
    }
    return count == n_;
}

void Graph::setPositions(std::vector<std::pair<double, double>> pos) {
    if (static_cast<int>(pos.size()) != n_) throw InputError("positions: wrong vertex count");
    pos_ = std::move(pos);
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

PresetGraph buildGridCylinder(int m, int n) {
    if (m < 1) throw InputError("buildGridCylinder: m >= 1 required");
    if (n < 3) throw InputError("buildGridCylinder: n >= 3 required (degenerate cycle)");
    Graph g(m * n);
    auto id = [n](int x, int j) { return x * n + j; };
    for (int x = 0; x < m; ++x)
        for (int j = 0; j < n; ++j) {
            // ring edge (x,j) -> (x,j+1); the seam at j = n-1 carries the winding mark
            g.addDirectedEdge(id(x, j), id(x, (j + 1) % n), 1.0, 1.0, j == n - 1 ? 1 : 0, 0);
            if (x + 1 < m) g.addEdge(id(x, j), id(x + 1, j));
        }
    return {std::move(g), {SurfaceKind::annulus, m, n, false}};
}

PresetGraph buildTorusGrid(int m, int n, bool directed) {
    if (!directed && (m < 3 || n < 3))
        throw InputError("buildTorusGrid: undirected case needs m, n >= 3");
    if (directed && (m < 2 || n < 2))
        throw InputError("buildTorusGrid: directed case needs m, n >= 2 (loops unsupported)");
    Graph g(m * n);
    auto id = [m](int x, int y) { return y * m + x; };
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < m; ++x) {
            const double back = directed ? 0.0 : 1.0;
            // east edge, seam at x = m-1
            g.addDirectedEdge(id(x, y), id((x + 1) % m, y), 1.0, back, x == m - 1 ? 1 : 0, 0);
            // north edge, seam at y = n-1
            g.addDirectedEdge(id(x, y), id(x, (y + 1) % n), 1.0, back, 0, y == n - 1 ? 1 : 0);
        }
    return {std::move(g), {SurfaceKind::torus, m, n, directed}};
}

PresetGraph buildCycle(int n) {
    if (n < 3) throw InputError("buildCycle: n >= 3 required");
    return buildGridCylinder(1, n);
}

PresetGraph buildChainOfLoops(int k) {
    if (k < 1) throw InputError("buildChainOfLoops: k >= 1 required");
    Graph g(3 * k);
    for (int i = 0; i < k; ++i) {
        const int a = 3 * i, b = 3 * i + 1, c = 3 * i + 2;
        g.addEdge(a, b);
        g.addEdge(b, c);
        g.addDirectedEdge(a, c, 1.0, 1.0, 1, 0); // winding edge of this loop
        if (i + 1 < k) g.addEdge(c, 3 * (i + 1)); // connector
    }
    return {std::move(g), {SurfaceKind::annulus, k, 0, false}};
}

Graph buildPlanarGrid(int rows, int cols) {
    if (rows < 2 || cols < 2) throw InputError("buildPlanarGrid: need at least 2x2 vertices");
    Graph g(rows * cols);
    auto id = [cols](int r, int c) { return r * cols + c; };
    std::vector<std::pair<double, double>> pos(rows * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            pos[id(r, c)] = {static_cast<double>(c), static_cast<double>(r)};
            if (c + 1 < cols) g.addEdge(id(r, c), id(r, c + 1));
            if (r + 1 < rows) g.addEdge(id(r, c), id(r + 1, c));
        }
    g.setPositions(std::move(pos));
    return g;
}

// ---------------------------------------------------------------------------
// Planar embedding
// ---------------------------------------------------------------------------

bool PlanarEmbedding::edgeOnFace(int e, int f) const {
    for (Dart d : faces[f])
        if (dartEdge(d) == e) return true;
    return false;
}

std::vector<int> outerCycle(const Graph& g, const PlanarEmbedding& emb) {
    std::vector<int> out;
    for (Dart d : emb.faces[emb.outer_face]) out.push_back(g.dartTail(d));
    return out;
}

PlanarEmbedding embedFromPositions(const Graph& g) {
    if (!g.hasPositions()) throw InputError("embedFromPositions: graph has no positions");
    const auto& pos = g.positions();
    PlanarEmbedding emb;
    emb.rotation.resize(g.vertexCount());
    for (int v = 0; v < g.vertexCount(); ++v) {
        std::vector<Dart> darts;
        for (int e = 0; e < g.edgeCount(); ++e) {
            if (g.edge(e).tail == v) darts.push_back(dartForward(e));
            if (g.edge(e).head == v) darts.push_back(dartReverse(e));
        }
        std::sort(darts.begin(), darts.end(), [&](Dart a, Dart b) {
            const int ha = g.dartHead(a), hb = g.dartHead(b);
            const double aa = std::atan2(pos[ha].second - pos[v].second, pos[ha].first - pos[v].first);
            const double ab = std::atan2(pos[hb].second - pos[v].second, pos[hb].first - pos[v].first);
            if (aa != ab) return aa < ab;
            return a < b;
        });
        emb.rotation[v] = std::move(darts);
    }

    // face tracing: from dart d = (u -> v), the next dart of the same face is
    // the successor of the reversal of d in the rotation at v. With CCW
    // rotations each face lies to the RIGHT of its darts; bounded faces come
    // out clockwise, the outer face counterclockwise.
    const int dart_count = 2 * g.edgeCount();
    emb.face_of_dart.assign(dart_count, -1);
    auto nextDart = [&](Dart d) {
        const int v = g.dartHead(d);
        const Dart rev = dartOpposite(d);
        const auto& rot = emb.rotation[v];
        const auto it = std::find(rot.begin(), rot.end(), rev);
        const size_t idx = static_cast<size_t>(it - rot.begin());
        return rot[(idx + 1) % rot.size()];
    };
    for (Dart d0 = 0; d0 < dart_count; ++d0) {
        if (emb.face_of_dart[d0] != -1) continue;
        const int f = static_cast<int>(emb.faces.size());
        emb.faces.emplace_back();
        Dart d = d0;
        do {
            emb.face_of_dart[d] = f;
            emb.faces[f].push_back(d);
            d = nextDart(d);
        } while (d != d0);
    }

    // outer face: most positive signed area (counterclockwise boundary walk)
    double best = 0.0;
    for (int f = 0; f < emb.faceCount(); ++f) {
        double area = 0.0;
        for (Dart d : emb.faces[f]) {
            const auto& a = pos[g.dartTail(d)];
            const auto& b = pos[g.dartHead(d)];
            area += a.first * b.second - b.first * a.second;
        }
        if (area > best) {
            best = area;
            emb.outer_face = f;
        }
    }
    if (emb.outer_face < 0) throw NumericError("embedFromPositions: no outer face found");
    return emb;
}

void checkEuler(const Graph& g, const PlanarEmbedding& emb) {
    const int v = g.vertexCount(), e = g.edgeCount(), f = emb.faceCount();
    if (v - e + f != 2) {
        std::ostringstream os;
        os << "Euler check failed: V - E + F = " << v << " - " << e << " + " << f << " != 2";
        throw NumericError(os.str());
    }
}

// ---------------------------------------------------------------------------
// I/O
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream is(line);
    std::string t;
    while (is >> t) {
        if (!t.empty() && t[0] == '#') break;
        toks.push_back(t);
    }
    return toks;
}

double parseDouble(const std::string& s, int line_no) {
    try {
        size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InputError("parse error at line " + std::to_string(line_no) + ": bad number '" + s +
                         "'");
    }
}

int parseInt(const std::string& s, int line_no) {
    try {
        size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InputError("parse error at line " + std::to_string(line_no) + ": bad integer '" + s +
                         "'");
    }
}

} // namespace

ParsedGraphFile loadGraph(std::istream& in) {
    ParsedGraphFile out;
    int n = -1;
    std::vector<std::tuple<int, int, double, std::optional<double>>> edge_lines;
    std::vector<std::tuple<int, int, cplx>> phi_lines;
    std::vector<std::tuple<int, int, Mat2>> phi2_lines;
    std::vector<int> boundary;
    std::vector<std::pair<int, std::pair<double, double>>> positions_pending;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto toks = tokenize(line);
        if (toks.empty()) continue;
        const std::string& kind = toks[0];
        if (kind == "v") {
            if (toks.size() != 2) throw InputError("parse error at line " + std::to_string(line_no) + ": expected 'v <n>'");
            n = parseInt(toks[1], line_no);
            if (n <= 0) throw InputError("parse error at line " + std::to_string(line_no) + ": vertex count must be positive");
        } else if (kind == "e") {
            if (toks.size() != 4 && toks.size() != 5)
                throw InputError("parse error at line " + std::to_string(line_no) +
                                 ": expected 'e <tail> <head> <c> [<c_rev>]'");
            const int t = parseInt(toks[1], line_no), h = parseInt(toks[2], line_no);
            const double c = parseDouble(toks[3], line_no);
            std::optional<double> cr;
            if (toks.size() == 5) cr = parseDouble(toks[4], line_no);
            if (c <= 0.0)
                throw InputError("validation error at line " + std::to_string(line_no) +
                                 ": conductance must be positive");
            edge_lines.emplace_back(t, h, c, cr);
        } else if (kind == "phi") {
            if (toks.size() != 5)
                throw InputError("parse error at line " + std::to_string(line_no) +
                                 ": expected 'phi <tail> <head> <re> <im>'");
            phi_lines.emplace_back(parseInt(toks[1], line_no), parseInt(toks[2], line_no),
                                   cplx(parseDouble(toks[3], line_no), parseDouble(toks[4], line_no)));
        } else if (kind == "phi2") {
            if (toks.size() != 11)
                throw InputError("parse error at line " + std::to_string(line_no) +
                                 ": expected 'phi2 <tail> <head> <8 reals>'");
            Mat2 m;
            m.a = cplx(parseDouble(toks[3], line_no), parseDouble(toks[4], line_no));
            m.b = cplx(parseDouble(toks[5], line_no), parseDouble(toks[6], line_no));
            m.c = cplx(parseDouble(toks[7], line_no), parseDouble(toks[8], line_no));
            m.d = cplx(parseDouble(toks[9], line_no), parseDouble(toks[10], line_no));
            phi2_lines.emplace_back(parseInt(toks[1], line_no), parseInt(toks[2], line_no), m);
        } else if (kind == "S") {
            for (size_t i = 1; i < toks.size(); ++i) boundary.push_back(parseInt(toks[i], line_no));
        } else if (kind == "pos") {
            // optional layout line: pos <v> <x> <y>; collected afterwards
            if (toks.size() != 4)
                throw InputError("parse error at line " + std::to_string(line_no) +
                                 ": expected 'pos <v> <x> <y>'");
            positions_pending.emplace_back(parseInt(toks[1], line_no),
                                           std::make_pair(parseDouble(toks[2], line_no),
                                                          parseDouble(toks[3], line_no)));
        } else {
            throw InputError("parse error at line " + std::to_string(line_no) +
                             ": unknown directive '" + kind + "'");
        }
    }
    if (n < 0) throw InputError("graph file missing 'v <n>' header");

    Graph g(n);
    for (const auto& [t, h, c, cr] : edge_lines) g.addEdge(t, h, c, cr);
    if (!boundary.empty()) g.setBoundary(boundary);
    if (!positions_pending.empty()) {
        std::vector<std::pair<double, double>> pos(n, {0.0, 0.0});
        for (const auto& [v, xy] : positions_pending) {
            if (v < 0 || v >= n) throw InputError("pos line references missing vertex");
            pos[v] = xy;
        }
        g.setPositions(std::move(pos));
    }

    if (!phi_lines.empty()) {
        std::vector<cplx> phi(g.edgeCount(), cplx(1.0));
        for (const auto& [t, h, val] : phi_lines) {
            if (std::abs(val) == 0.0) throw InputError("phi transport must be nonzero");
            bool found = false;
            for (int e = 0; e < g.edgeCount(); ++e) {
                const Edge& ed = g.edge(e);
                if (ed.tail == t && ed.head == h) {
                    phi[e] = val;
                    found = true;
                    break;
                }
                if (ed.tail == h && ed.head == t) {
                    phi[e] = 1.0 / val;
                    found = true;
                    break;
                }
            }
            if (!found) throw InputError("phi line references missing edge");
        }
        out.line_phi = std::move(phi);
    }
    if (!phi2_lines.empty()) {
        std::vector<Mat2> phi(g.edgeCount(), Mat2::identity());
        for (const auto& [t, h, val] : phi2_lines) {
            bool found = false;
            for (int e = 0; e < g.edgeCount(); ++e) {
                const Edge& ed = g.edge(e);
                if (ed.tail == t && ed.head == h) {
                    phi[e] = val;
                    found = true;
                    break;
                }
                if (ed.tail == h && ed.head == t) {
                    phi[e] = val.inverse();
                    found = true;
                    break;
                }
            }
            if (!found) throw InputError("phi2 line references missing edge");
        }
        out.sl2_phi = std::move(phi);
    }
    out.graph = std::move(g);
    return out;
}

ParsedGraphFile loadGraphFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open graph file: " + path);
    return loadGraph(in);
}

std::string serializeGraph(const Graph& g, const std::vector<cplx>* line_phi,
                           const std::vector<Mat2>* sl2_phi) {
    std::ostringstream os;
    os.precision(17);
    os << "v " << g.vertexCount() << "\n";
    for (const Edge& e : g.edges()) {
        os << "e " << e.tail << " " << e.head << " " << e.c;
        if (e.c_rev != e.c) os << " " << e.c_rev;
        os << "\n";
    }
    if (line_phi)
        for (int e = 0; e < g.edgeCount(); ++e)
            os << "phi " << g.edge(e).tail << " " << g.edge(e).head << " " << (*line_phi)[e].real()
               << " " << (*line_phi)[e].imag() << "\n";
    if (sl2_phi)
        for (int e = 0; e < g.edgeCount(); ++e) {
            const Mat2& m = (*sl2_phi)[e];
            os << "phi2 " << g.edge(e).tail << " " << g.edge(e).head;
            for (cplx v : {m.a, m.b, m.c, m.d}) os << " " << v.real() << " " << v.imag();
            os << "\n";
        }
    if (!g.boundary().empty()) {
        os << "S";
        for (int v : g.boundary()) os << " " << v;
        os << "\n";
    }
    return os.str();
}

} // namespace crsf
