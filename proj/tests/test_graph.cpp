#include "doctest.h"

#include <sstream>

#include "crsf/graph.hpp"

using namespace crsf;

TEST_CASE("grid cylinder presets") {
    SUBCASE("1x3 is the triangle") {
        PresetGraph p = buildGridCylinder(1, 3);
        CHECK(p.graph.vertexCount() == 3);
        CHECK(p.graph.edgeCount() == 3);
    }
    SUBCASE("2x4 counts") {
        PresetGraph p = buildGridCylinder(2, 4);
        CHECK(p.graph.vertexCount() == 8);
        CHECK(p.graph.edgeCount() == 12); // 4 rungs + 2x4 ring edges
    }
    SUBCASE("3x5 degrees") {
        PresetGraph p = buildGridCylinder(3, 5);
        for (int v = 0; v < p.graph.vertexCount(); ++v) {
            const int x = v / 5;
            CHECK(p.graph.degree(v) == (x == 1 ? 4 : 3));
        }
    }
    SUBCASE("edge count formula n(2m-1)") {
        for (int m : {1, 2, 4})
            for (int n : {3, 5, 8}) CHECK(buildGridCylinder(m, n).graph.edgeCount() == n * (2 * m - 1));
    }
    SUBCASE("degenerate n rejected") { CHECK_THROWS_AS(buildGridCylinder(2, 2), InputError); }
    SUBCASE("one winding mark per ring") {
        PresetGraph p = buildGridCylinder(3, 4);
        int marks = 0;
        for (const Edge& e : p.graph.edges()) marks += e.wind_x;
        CHECK(marks == 3);
    }
}

TEST_CASE("torus grid presets") {
    SUBCASE("3x3 undirected") {
        PresetGraph p = buildTorusGrid(3, 3);
        CHECK(p.graph.vertexCount() == 9);
        CHECK(p.graph.edgeCount() == 18);
        for (int v = 0; v < 9; ++v) CHECK(p.graph.degree(v) == 4);
    }
    SUBCASE("2x2 directed-only") {
        PresetGraph p = buildTorusGrid(2, 2, true);
        CHECK(p.graph.vertexCount() == 4);
        CHECK(p.graph.edgeCount() == 8);
        for (const Edge& e : p.graph.edges()) {
            CHECK(e.c == 1.0);
            CHECK(e.c_rev == 0.0);
        }
    }
    SUBCASE("4x3 generator class sizes") {
        PresetGraph p = buildTorusGrid(4, 3);
        int wrap_x = 0, wrap_y = 0;
        for (const Edge& e : p.graph.edges()) {
            wrap_x += std::abs(e.wind_x);
            wrap_y += std::abs(e.wind_y);
        }
        CHECK(wrap_x == 3); // one east-seam edge per row
        CHECK(wrap_y == 4); // one north-seam edge per column
    }
    SUBCASE("undirected edge count 2mn") { CHECK(buildTorusGrid(4, 5).graph.edgeCount() == 40); }
}

TEST_CASE("graph file round trip") {
    SUBCASE("K3 with unit conductances") {
        std::istringstream in("v 3\ne 0 1 1.0\ne 1 2 1.0\ne 0 2 1.0\n");
        ParsedGraphFile p = loadGraph(in);
        CHECK(p.graph.vertexCount() == 3);
        CHECK(p.graph.edgeCount() == 3);
        CHECK(p.graph.isSymmetric());
    }
    SUBCASE("zero conductance rejected") {
        std::istringstream in("v 2\ne 0 1 0\n");
        CHECK_THROWS_AS(loadGraph(in), InputError);
    }
    SUBCASE("duplicate edge lines make a multigraph") {
        std::istringstream in("v 2\ne 0 1 1.0\ne 0 1 2.0\n");
        ParsedGraphFile p = loadGraph(in);
        CHECK(p.graph.edgeCount() == 2);
    }
    SUBCASE("malformed line carries the line number") {
        std::istringstream in("v 3\ne 0 1 abc\n");
        try {
            loadGraph(in);
            FAIL("expected parse error");
        } catch (const InputError& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
    SUBCASE("serialize then load is semantically equal") {
        std::istringstream in(
            "v 4\ne 0 1 1.5\ne 1 2 2.0 3.0\ne 2 3 1.0\ne 0 3 1.0\nphi 0 1 0.0 1.0\nS 0 3\n");
        ParsedGraphFile p = loadGraph(in);
        REQUIRE(p.line_phi.has_value());
        const std::string text = serializeGraph(p.graph, &*p.line_phi);
        std::istringstream in2(text);
        ParsedGraphFile q = loadGraph(in2);
        CHECK(q.graph.vertexCount() == p.graph.vertexCount());
        REQUIRE(q.graph.edgeCount() == p.graph.edgeCount());
        for (int e = 0; e < p.graph.edgeCount(); ++e) {
            CHECK(q.graph.edge(e).tail == p.graph.edge(e).tail);
            CHECK(q.graph.edge(e).head == p.graph.edge(e).head);
            CHECK(q.graph.edge(e).c == p.graph.edge(e).c);
            CHECK(q.graph.edge(e).c_rev == p.graph.edge(e).c_rev);
            CHECK(std::abs((*q.line_phi)[e] - (*p.line_phi)[e]) < 1e-15);
        }
        CHECK(q.graph.boundary() == p.graph.boundary());
    }
    SUBCASE("self-loop rejected") {
        std::istringstream in("v 2\ne 1 1 1.0\n");
        CHECK_THROWS_AS(loadGraph(in), InputError);
    }
}

TEST_CASE("planar embedding") {
    SUBCASE("grid faces satisfy Euler") {
        for (auto [r, c] : {std::pair{2, 2}, {3, 3}, {3, 4}}) {
            Graph g = buildPlanarGrid(r, c);
            PlanarEmbedding emb = embedFromPositions(g);
            checkEuler(g, emb);
            CHECK(emb.faceCount() == (r - 1) * (c - 1) + 1);
        }
    }
    SUBCASE("bounded faces are quads, outer face has the full boundary") {
        Graph g = buildPlanarGrid(3, 3);
        PlanarEmbedding emb = embedFromPositions(g);
        int quads = 0;
        for (int f = 0; f < emb.faceCount(); ++f) {
            if (f == emb.outer_face) {
                CHECK(emb.faces[f].size() == 8);
            } else {
                CHECK(emb.faces[f].size() == 4);
                ++quads;
            }
        }
        CHECK(quads == 4);
    }
    SUBCASE("outer cycle walks the boundary") {
        Graph g = buildPlanarGrid(2, 3);
        PlanarEmbedding emb = embedFromPositions(g);
        const auto cyc = outerCycle(g, emb);
        CHECK(cyc.size() == 6);
    }
}
