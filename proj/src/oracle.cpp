#include "crsf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace crsf {

namespace {

double binomialApprox(int m, int n) {
    double v = 1.0;
    for (int i = 0; i < n; ++i) v *= static_cast<double>(m - i) / (i + 1);
    return v;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

// Extract the unique cycle of each component of the edge subset, as closed
// dart walks. Returns false if some component is not a unicycle.
bool extractCycles(const Graph& g, const std::vector<int>& edges,
                   std::vector<std::vector<Dart>>& cycles) {
    const int n = g.vertexCount();
    std::vector<int> deg(n, 0);
    std::vector<std::vector<int>> inc(n);
    for (int e : edges) {
        const Edge& ed = g.edge(e);
        ++deg[ed.tail];
        ++deg[ed.head];
        inc[ed.tail].push_back(e);
        inc[ed.head].push_back(e);
    }
    // prune leaves; what remains is the disjoint union of the cycles
    std::vector<bool> removed(g.edgeCount(), false);
    std::queue<int> leaves;
    for (int v = 0; v < n; ++v)
        if (deg[v] == 1) leaves.push(v);
    while (!leaves.empty()) {
        const int v = leaves.front();
        leaves.pop();
        if (deg[v] != 1) continue;
        for (int e : inc[v]) {
            if (removed[e]) continue;
            removed[e] = true;
            const Edge& ed = g.edge(e);
            const int other = ed.tail == v ? ed.head : ed.tail;
            --deg[v];
            --deg[other];
            if (deg[other] == 1) leaves.push(other);
            break;
        }
    }
    // remaining edges must form disjoint simple cycles (degree 2 everywhere)
    std::vector<std::vector<int>> cyc_inc(n);
    for (int e : edges)
        if (!removed[e]) {
            cyc_inc[g.edge(e).tail].push_back(e);
            cyc_inc[g.edge(e).head].push_back(e);
        }
    for (int v = 0; v < n; ++v)
        if (!cyc_inc[v].empty() && cyc_inc[v].size() != 2) return false;

    std::vector<bool> used(g.edgeCount(), false);
    cycles.clear();
    for (int e0 : edges) {
        if (removed[e0] || used[e0]) continue;
        std::vector<Dart> walk;
        int e = e0;
        int v = g.edge(e0).tail;
        do {
            const Edge& ed = g.edge(e);
            const Dart d = (ed.tail == v) ? dartForward(e) : dartReverse(e);
            walk.push_back(d);
            used[e] = true;
            v = g.dartHead(d);
            int next = -1;
            for (int e2 : cyc_inc[v])
                if (!used[e2]) {
                    next = e2;
                    break;
                }
            if (next == -1) break;
            e = next;
        } while (true);
        if (walk.empty() || g.dartHead(walk.back()) != g.dartTail(walk.front())) return false;
        cycles.push_back(std::move(walk));
    }
    return true;
}

// test: every vertex covered and each component has #edges == #vertices
bool crsfStructure(const Graph& g, const std::vector<int>& edges,
                   std::vector<std::vector<Dart>>& cycles) {
    const int n = g.vertexCount();
    UnionFind uf(n);
    std::vector<bool> covered(n, false);
    for (int e : edges) {
        covered[g.edge(e).tail] = covered[g.edge(e).head] = true;
        uf.unite(g.edge(e).tail, g.edge(e).head);
    }
    for (int v = 0; v < n; ++v)
        if (!covered[v]) return false;
    std::vector<int> comp_vertices(n, 0), comp_edges(n, 0);
    for (int v = 0; v < n; ++v) ++comp_vertices[uf.find(v)];
    for (int e : edges) ++comp_edges[uf.find(g.edge(e).tail)];
    for (int r = 0; r < n; ++r)
        if (comp_vertices[r] > 0 && comp_edges[r] != comp_vertices[r]) return false;
    return extractCycles(g, edges, cycles);
}

void forEachSubset(int m, int k, double guard, const std::function<void(const std::vector<int>&)>& yield) {
    if (binomialApprox(m, k) > guard)
        throw GuardError("enumeration guard exceeded: choose a smaller input");
    if (k > m || k < 0) return;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        yield(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == m - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

} // namespace

bool validateCrsf(const Graph& g, const std::vector<int>& edges,
                  std::vector<std::vector<Dart>>* cycles) {
    std::vector<std::vector<Dart>> local;
    const bool ok = crsfStructure(g, edges, cycles ? *cycles : local);
    return ok;
}

void enumerateCrsfs(const Graph& g, const std::function<void(const CrsfConfig&)>& yield) {
    const int n = g.vertexCount(), m = g.edgeCount();
    forEachSubset(m, n, 1e7, [&](const std::vector<int>& edges) {
        CrsfConfig cfg;
        if (crsfStructure(g, edges, cfg.cycles)) {
            cfg.edges = edges;
            yield(cfg);
        }
    });
}

void enumerateEssentialCrsfs(const Graph& g, const std::function<void(const CrsfConfig&)>& yield) {
    const auto& s = g.boundary();
    if (s.empty()) throw InputError("essential CRSFs need a boundary set");
    const int n = g.vertexCount();
    const int kept = n - static_cast<int>(s.size());
    std::vector<bool> in_s(n, false);
    for (int v : s) in_s[v] = true;

    forEachSubset(g.edgeCount(), kept, 1e7, [&](const std::vector<int>& edges) {
        // classify components: tree with exactly one S vertex, or unicycle
        // avoiding S; all non-S vertices covered
        UnionFind uf(n);
        std::vector<bool> covered(n, false);
        for (int e : edges) {
            covered[g.edge(e).tail] = covered[g.edge(e).head] = true;
            uf.unite(g.edge(e).tail, g.edge(e).head);
        }
        for (int v = 0; v < n; ++v)
            if (!in_s[v] && !covered[v]) return;
        std::vector<int> cv(n, 0), ce(n, 0), cs(n, 0);
        for (int v = 0; v < n; ++v)
            if (covered[v]) {
                ++cv[uf.find(v)];
                if (in_s[v]) ++cs[uf.find(v)];
            }
        for (int e : edges) ++ce[uf.find(g.edge(e).tail)];
        for (int v = 0; v < n; ++v) {
            if (cv[v] == 0) continue;
            if (cs[v] == 0 && ce[v] != cv[v]) return;          // CRT required
            if (cs[v] == 1 && ce[v] != cv[v] - 1) return;      // tree required
            if (cs[v] >= 2) return;
        }
        CrsfConfig cfg;
        if (!extractCycles(g, edges, cfg.cycles)) return;
        // cycles must avoid S entirely (tree components have no cycles)
        for (const auto& cyc : cfg.cycles)
            for (Dart d : cyc)
                if (in_s[g.dartTail(d)]) return;
        cfg.edges = edges;
        yield(cfg);
    });
}

void enumerateOcrsfs(const Graph& g, const std::function<void(const OcrsfConfig&)>& yield) {
    const int n = g.vertexCount();
    std::vector<std::vector<Dart>> choices(n);
    double total = 1.0;
    for (int v = 0; v < n; ++v) {
        choices[v] = g.outDarts(v);
        if (choices[v].empty()) return; // no nonzero vector field exists
        total *= static_cast<double>(choices[v].size());
        if (total > 1e7) throw GuardError("enumeration guard exceeded: choose a smaller input");
    }
    std::vector<int> pick(n, 0);
    OcrsfConfig cfg;
    cfg.out.resize(n);
    while (true) {
        for (int v = 0; v < n; ++v) cfg.out[v] = choices[v][pick[v]];
        // cycles of the functional graph v -> head(out[v])
        cfg.cycles.clear();
        std::vector<int> state(n, 0); // 0 unvisited, 1 in progress, 2 done
        for (int v0 = 0; v0 < n; ++v0) {
            if (state[v0] != 0) continue;
            std::vector<int> stack;
            int v = v0;
            while (state[v] == 0) {
                state[v] = 1;
                stack.push_back(v);
                v = g.dartHead(cfg.out[v]);
            }
            if (state[v] == 1) { // found a new cycle starting at v
                std::vector<Dart> cyc;
                int u = v;
                do {
                    cyc.push_back(cfg.out[u]);
                    u = g.dartHead(cfg.out[u]);
                } while (u != v);
                cfg.cycles.push_back(std::move(cyc));
            }
            for (int u : stack) state[u] = 2;
        }
        yield(cfg);
        int v = n - 1;
        while (v >= 0 && pick[v] + 1 == static_cast<int>(choices[v].size())) pick[v--] = 0;
        if (v < 0) break;
        ++pick[v];
    }
}

namespace {

cplx lineCycleWeight(const LineConnection& conn, const std::vector<Dart>& cycle) {
    cplx w = 1.0;
    for (Dart d : cycle) w *= conn.transport(d);
    return 2.0 - w - 1.0 / w;
}

cplx sl2CycleWeight(const SL2Connection& conn, const std::vector<Dart>& cycle) {
    Mat2 w = Mat2::identity();
    for (Dart d : cycle) w = conn.transport(d) * w;
    return 2.0 - w.trace();
}

double edgeProduct(const Graph& g, const std::vector<int>& edges) {
    double p = 1.0;
    for (int e : edges) p *= g.edge(e).c;
    return p;
}

} // namespace

cplx crsfWeightedSum(const Graph& g, const LineConnection& conn) {
    cplx sum = 0.0;
    enumerateCrsfs(g, [&](const CrsfConfig& cfg) {
        cplx term = edgeProduct(g, cfg.edges);
        for (const auto& cyc : cfg.cycles) term *= lineCycleWeight(conn, cyc);
        sum += term;
    });
    return sum;
}

cplx essentialWeightedSum(const Graph& g, const LineConnection& conn) {
    cplx sum = 0.0;
    enumerateEssentialCrsfs(g, [&](const CrsfConfig& cfg) {
        cplx term = edgeProduct(g, cfg.edges);
        for (const auto& cyc : cfg.cycles) term *= lineCycleWeight(conn, cyc);
        sum += term;
    });
    return sum;
}

cplx ocrsfWeightedSum(const Graph& g, const LineConnection& conn) {
    cplx sum = 0.0;
    enumerateOcrsfs(g, [&](const OcrsfConfig& cfg) {
        cplx term = 1.0;
        for (Dart d : cfg.out) term *= g.dartWeight(d);
        for (const auto& cyc : cfg.cycles) {
            cplx w = 1.0;
            for (Dart d : cyc) w *= conn.transport(d);
            term *= (1.0 - w);
        }
        sum += term;
    });
    return sum;
}

cplx sl2WeightedSum(const Graph& g, const SL2Connection& conn) {
    cplx sum = 0.0;
    enumerateCrsfs(g, [&](const CrsfConfig& cfg) {
        cplx term = edgeProduct(g, cfg.edges);
        for (const auto& cyc : cfg.cycles) term *= sl2CycleWeight(conn, cyc);
        sum += term;
    });
    return sum;
}

cplx sl2EssentialWeightedSum(const Graph& g, const SL2Connection& conn) {
    cplx sum = 0.0;
    enumerateEssentialCrsfs(g, [&](const CrsfConfig& cfg) {
        cplx term = edgeProduct(g, cfg.edges);
        for (const auto& cyc : cfg.cycles) term *= sl2CycleWeight(conn, cyc);
        sum += term;
    });
    return sum;
}

long crsfCount(const Graph& g) {
    long count = 0;
    enumerateCrsfs(g, [&](const CrsfConfig&) { ++count; });
    return count;
}

// ---------------------------------------------------------------------------
// Monotone lattice configurations
// ---------------------------------------------------------------------------

std::map<std::pair<int, int>, long> monotoneHomologyHistogram(int m, int n) {
    if (m < 1 || n < 1) throw InputError("monotoneHomologyHistogram: m, n >= 1");
    if (m * n > 24) throw GuardError("monotoneHomologyHistogram: mn <= 24 required");
    const int nv = m * n;
    std::map<std::pair<int, int>, long> hist;
    for (uint32_t mask = 0; mask < (1u << nv); ++mask) {
        // bit v set: east; clear: north
        std::vector<int> state(nv, 0);
        int total_j = 0, total_k = 0;
        for (int v0 = 0; v0 < nv; ++v0) {
            if (state[v0] != 0) continue;
            std::vector<int> stack;
            int v = v0;
            while (state[v] == 0) {
                state[v] = 1;
                stack.push_back(v);
                const int x = v % m, y = v / m;
                v = (mask >> v) & 1u ? y * m + (x + 1) % m : ((y + 1) % n) * m + x;
            }
            if (state[v] == 1) {
                int east = 0, north = 0;
                int u = v;
                do {
                    const int x = u % m, y = u / m;
                    if ((mask >> u) & 1u) {
                        ++east;
                        u = y * m + (x + 1) % m;
                    } else {
                        ++north;
                        u = ((y + 1) % n) * m + x;
                    }
                } while (u != v);
                total_j += east / m;
                total_k += north / n;
            }
            for (int u : stack) state[u] = 2;
        }
        ++hist[{total_j, total_k}];
    }
    return hist;
}

// ---------------------------------------------------------------------------
// Spanning trees and LERW
// ---------------------------------------------------------------------------

void enumerateSpanningTrees(const Graph& g,
                            const std::function<void(const std::vector<int>&)>& yield) {
    const int n = g.vertexCount(), m = g.edgeCount();
    if (binomialApprox(m, n - 1) > 2e7)
        throw GuardError("spanning tree enumeration guard exceeded");
    // recursive include/exclude with union-find and remaining-edge pruning
    std::vector<int> chosen;
    std::function<void(int, UnionFind, int)> rec = [&](int e, UnionFind uf, int picked) {
        if (picked == n - 1) {
            yield(chosen);
            return;
        }
        if (e == m || m - e < n - 1 - picked) return;
        UnionFind with = uf;
        if (with.unite(g.edge(e).tail, g.edge(e).head)) {
            chosen.push_back(e);
            rec(e + 1, with, picked + 1);
            chosen.pop_back();
        }
        rec(e + 1, uf, picked);
    };
    rec(0, UnionFind(n), 0);
}

namespace {

std::vector<int> treePath(const Graph& g, const std::vector<int>& tree_edges, int z1, int z2) {
    const int n = g.vertexCount();
    std::vector<std::vector<std::pair<int, int>>> adj(n); // (neighbor, edge)
    for (int e : tree_edges) {
        adj[g.edge(e).tail].push_back({g.edge(e).head, e});
        adj[g.edge(e).head].push_back({g.edge(e).tail, e});
    }
    std::vector<int> prev(n, -1);
    std::queue<int> q;
    q.push(z1);
    prev[z1] = z1;
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        if (v == z2) break;
        for (auto [u, e] : adj[v])
            if (prev[u] == -1) {
                prev[u] = v;
                q.push(u);
            }
    }
    std::vector<int> path;
    for (int v = z2; v != z1; v = prev[v]) path.push_back(v);
    path.push_back(z1);
    std::reverse(path.begin(), path.end());
    return path;
}

std::vector<int> pathEdges(const Graph& g, const std::vector<int>& path_vertices) {
    std::vector<int> out;
    for (size_t i = 0; i + 1 < path_vertices.size(); ++i) {
        const int a = path_vertices[i], b = path_vertices[i + 1];
        for (int e = 0; e < g.edgeCount(); ++e) {
            const Edge& ed = g.edge(e);
            if ((ed.tail == a && ed.head == b) || (ed.tail == b && ed.head == a)) {
                out.push_back(e);
                break;
            }
        }
    }
    return out;
}

// parity of dual crossings with edge_set from the outer face to each face
std::vector<int> crossingParity(const PlanarEmbedding& emb,
                                const std::vector<bool>& edge_set) {
    std::vector<int> parity(emb.faceCount(), -1);
    std::queue<int> q;
    parity[emb.outer_face] = 0;
    q.push(emb.outer_face);
    while (!q.empty()) {
        const int f = q.front();
        q.pop();
        for (Dart d : emb.faces[f]) {
            const int nf = emb.face_of_dart[dartOpposite(d)];
            const int p = parity[f] ^ (edge_set[dartEdge(d)] ? 1 : 0);
            if (parity[nf] == -1) {
                parity[nf] = p;
                q.push(nf);
            }
        }
    }
    return parity;
}

} // namespace

std::vector<int> ccwBoundaryArc(const Graph& g, const PlanarEmbedding& emb, int z2, int z1) {
    // the outer face walk runs counterclockwise; follow it forward from z2
    // until reaching z1
    const auto& walk = emb.faces[emb.outer_face];
    const int len = static_cast<int>(walk.size());
    int start = -1;
    for (int i = 0; i < len; ++i)
        if (g.dartTail(walk[i]) == z2) start = i;
    if (start < 0) throw InputError("vertex not on the outer boundary");
    std::vector<int> arc;
    int i = start;
    int guard = 0;
    while (true) {
        arc.push_back(dartEdge(walk[i]));
        if (g.dartHead(walk[i]) == z1) break;
        i = (i + 1) % len;
        if (++guard > len) throw InputError("boundary arc not found (outer cycle not simple?)");
    }
    return arc;
}

bool faceLeftOfPath(const Graph& g, const PlanarEmbedding& emb,
                    const std::vector<int>& path_vertices, int z1, int z2, int face) {
    std::vector<bool> cyc(g.edgeCount(), false);
    for (int e : pathEdges(g, path_vertices)) cyc[e] = !cyc[e];
    for (int e : ccwBoundaryArc(g, emb, z2, z1)) cyc[e] = !cyc[e];
    const auto parity = crossingParity(emb, cyc);
    return parity[face] == 1;
}

std::map<std::vector<int>, double> lerwDistribution(const Graph& g, int z1, int z2) {
    std::map<std::vector<int>, double> weight;
    double total = 0.0;
    enumerateSpanningTrees(g, [&](const std::vector<int>& tree) {
        double w = 1.0;
        for (int e : tree) w *= g.edge(e).c;
        weight[treePath(g, tree, z1, z2)] += w;
        total += w;
    });
    if (total <= 0.0) throw GuardError("lerwDistribution: no spanning trees");
    for (auto& [path, w] : weight) w /= total;
    return weight;
}

double lerwLeftProbability(const Graph& g, const PlanarEmbedding& emb, int z1, int z2, int face) {
    double p = 0.0;
    for (const auto& [path, prob] : lerwDistribution(g, z1, z2))
        if (faceLeftOfPath(g, emb, path, z1, z2, face)) p += prob;
    return p;
}

TwoHoleProbabilities lerwTwoHoleProbabilities(const Graph& g, const PlanarEmbedding& emb, int z1,
                                              int z2, int f1, int f2) {
    TwoHoleProbabilities out;
    for (const auto& [path, prob] : lerwDistribution(g, z1, z2)) {
        const bool l1 = faceLeftOfPath(g, emb, path, z1, z2, f1);
        const bool l2 = faceLeftOfPath(g, emb, path, z1, z2, f2);
        if (l1 && l2) out.ll += prob;
        else if (l1 && !l2) out.lr += prob;
        else if (!l1 && l2) out.rl += prob;
        else out.rr += prob;
    }
    return out;
}

} // namespace crsf
