#include "doctest.h"

#include <cmath>
#include <random>

#include "crsf/connection.hpp"
#include "crsf/laplacian.hpp"

using namespace crsf;

namespace {

std::mt19937_64 rng(777);

cplx randomUnit() {
    std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
    const double th = u(rng);
    return {std::cos(th), std::sin(th)};
}

Graph k3() {
    Graph g(3);
    g.addEdge(0, 1);
    g.addEdge(1, 2);
    g.addEdge(0, 2);
    return g;
}

} // namespace

TEST_CASE("monodromy") {
    Graph g = k3();
    SUBCASE("trivial connection gives 1") {
        LineConnection conn = LineConnection::trivial(3);
        const std::vector<Dart> cyc = {dartForward(0), dartForward(1), dartReverse(2)};
        CHECK(std::abs(monodromy(g, conn, cyc) - cplx(1.0)) < 1e-15);
    }
    SUBCASE("K3 product z12 z23 / z13") {
        const cplx z12 = randomUnit(), z23 = randomUnit(), z13 = randomUnit();
        LineConnection conn({z12, z23, z13}); // edges 01, 12, 02
        const std::vector<Dart> cyc = {dartForward(0), dartForward(1), dartReverse(2)};
        CHECK(std::abs(monodromy(g, conn, cyc) - z12 * z23 / z13) < 1e-12);
    }
    SUBCASE("reversal inverts") {
        const cplx z12 = randomUnit(), z23 = randomUnit(), z13 = randomUnit();
        LineConnection conn({z12, z23, z13});
        const std::vector<Dart> cyc = {dartForward(0), dartForward(1), dartReverse(2)};
        const std::vector<Dart> rev = {dartForward(2), dartReverse(1), dartReverse(0)};
        CHECK(std::abs(monodromy(g, conn, cyc) * monodromy(g, conn, rev) - cplx(1.0)) < 1e-12);
    }
    SUBCASE("non-closed walk rejected") {
        LineConnection conn = LineConnection::trivial(3);
        CHECK_THROWS_AS(monodromy(g, conn, std::vector<Dart>{dartForward(0), dartForward(1)}),
                        InputError);
    }
    SUBCASE("SL2 reversal gives the inverse matrix") {
        SL2Connection conn = SL2Connection::trivial(3);
        Mat2 a{cplx(1.0, 0.5), cplx(0.5), cplx(-0.25), cplx(0.0)};
        a = a * (1.0 / std::sqrt(a.det()));
        conn.set(0, a);
        const std::vector<Dart> cyc = {dartForward(0), dartForward(1), dartReverse(2)};
        const std::vector<Dart> rev = {dartForward(2), dartReverse(1), dartReverse(0)};
        const Mat2 prod = monodromy(g, conn, cyc) * monodromy(g, conn, rev);
        CHECK(std::abs(prod.a - 1.0) < 1e-12);
        CHECK(std::abs(prod.d - 1.0) < 1e-12);
        CHECK(std::abs(prod.b) < 1e-12);
        CHECK(std::abs(prod.c) < 1e-12);
    }
}

TEST_CASE("gauge transforms") {
    Graph g = k3();
    std::vector<cplx> phi = {randomUnit(), randomUnit(), randomUnit()};
    LineConnection conn(phi);

    SUBCASE("identity gauge is a no-op") {
        LineConnection fixed = gaugeTransform(g, conn, {1.0, 1.0, 1.0});
        for (int e = 0; e < 3; ++e) CHECK(std::abs(fixed.forward(e) - conn.forward(e)) < 1e-15);
    }
    SUBCASE("det is gauge invariant") {
        std::vector<cplx> psi = {randomUnit(), randomUnit(), randomUnit()};
        LineConnection moved = gaugeTransform(g, conn, psi);
        const cplx d0 = detBundle(g, conn);
        const cplx d1 = detBundle(g, moved);
        CHECK(std::abs(d0 - d1) <= 1e-10 * std::max(1.0, std::abs(d0)));
    }
    SUBCASE("spanning tree gauge trivializes tree edges") {
        const std::vector<cplx> psi = spanningTreeGauge(g, conn);
        LineConnection fixed = gaugeTransform(g, conn, psi);
        int trivial_edges = 0;
        for (int e = 0; e < 3; ++e)
            if (std::abs(fixed.forward(e) - cplx(1.0)) < 1e-12) ++trivial_edges;
        CHECK(trivial_edges >= 2); // a spanning tree of K3 has 2 edges
    }
    SUBCASE("singular psi rejected") {
        CHECK_THROWS_AS(gaugeTransform(g, conn, {cplx(0.0), cplx(1.0), cplx(1.0)}), InputError);
    }
}

TEST_CASE("zippers on a planar grid") {
    Graph g = buildPlanarGrid(3, 3);
    PlanarEmbedding emb = embedFromPositions(g);
    std::vector<int> bounded;
    for (int f = 0; f < emb.faceCount(); ++f)
        if (f != emb.outer_face) bounded.push_back(f);
    REQUIRE(bounded.size() == 4);

    SUBCASE("monodromy is the multiplier on the target face, trivial elsewhere") {
        for (int target : bounded) {
            LineConnection conn = LineConnection::trivial(g.edgeCount());
            const cplx b(0.3, 0.9539392014169456);
            makeZipper(g, emb, target, b, conn);
            for (int f : bounded) {
                const cplx got = faceMonodromy(g, emb, conn, f);
                const cplx want = f == target ? b : cplx(1.0);
                CHECK(std::abs(got - want) < 1e-12);
            }
        }
    }
    SUBCASE("outer face rejected") {
        LineConnection conn = LineConnection::trivial(g.edgeCount());
        CHECK_THROWS_AS(makeZipper(g, emb, emb.outer_face, cplx(2.0), conn), InputError);
    }
    SUBCASE("multiplier 1 keeps det singular") {
        LineConnection conn = LineConnection::trivial(g.edgeCount());
        makeZipper(g, emb, bounded[0], cplx(1.0), conn);
        CHECK(std::abs(detBundle(g, conn)) < 1e-9);
    }
    SUBCASE("two zippers to distinct faces, SL2") {
        SL2Connection conn = SL2Connection::trivial(g.edgeCount());
        Mat2 a{cplx(1.1), cplx(0.2), cplx(0.1), cplx(0.0)};
        a.d = (1.0 + a.b * a.c) / a.a; // det 1
        Mat2 b{cplx(0.9), cplx(-0.3), cplx(0.2), cplx(0.0)};
        b.d = (1.0 + b.b * b.c) / b.a;
        Zipper za = makeZipper(g, emb, bounded[0], a, conn);
        ZipperOptions opts;
        opts.blocked_faces = {bounded[0]};
        for (Dart d : za.crossed) {
            opts.blocked_faces.push_back(emb.face_of_dart[d]);
            opts.blocked_faces.push_back(emb.face_of_dart[dartOpposite(d)]);
        }
        makeZipper(g, emb, bounded[3], b, conn, opts);
        // traces identify the conjugacy class
        const Mat2 ma = faceMonodromy(g, emb, conn, bounded[0]);
        const Mat2 mb = faceMonodromy(g, emb, conn, bounded[3]);
        CHECK(std::abs(ma.trace() - a.trace()) < 1e-10);
        CHECK(std::abs(mb.trace() - b.trace()) < 1e-10);
        for (int f : bounded)
            if (f != bounded[0] && f != bounded[3])
                CHECK(std::abs(faceMonodromy(g, emb, conn, f).trace() - cplx(2.0)) < 1e-10);
    }
    SUBCASE("exit restriction is honored") {
        LineConnection conn = LineConnection::trivial(g.edgeCount());
        const auto outer_darts = emb.faces[emb.outer_face];
        ZipperOptions opts;
        opts.allowed_exit_edges = {dartEdge(outer_darts[0])};
        Zipper z = makeZipper(g, emb, bounded[0], cplx(2.0), conn, opts);
        CHECK(z.exit_edge == dartEdge(outer_darts[0]));
    }
}

TEST_CASE("unitarity flag") {
    LineConnection u({randomUnit(), randomUnit()});
    CHECK(u.unitary());
    LineConnection nu({cplx(1.5), randomUnit()});
    CHECK(!nu.unitary());
}
