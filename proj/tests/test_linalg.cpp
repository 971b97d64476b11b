#include "doctest.h"

#include <cmath>
#include <random>

#include "crsf/linalg.hpp"

using namespace crsf;

namespace {

std::mt19937_64 rng(12345);

cplx randomUnit() {
    std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
    const double th = u(rng);
    return {std::cos(th), std::sin(th)};
}

cplx randomComplex(double amp = 1.0) {
    std::uniform_real_distribution<double> u(-amp, amp);
    return {u(rng), u(rng)};
}

CMatrix randomMatrix(int n, double amp = 1.0) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = randomComplex(amp);
    return m;
}

CMatrix randomAntisymmetric(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            m(i, j) = randomComplex();
            m(j, i) = -m(i, j);
        }
    return m;
}

Mat2 randomMat2() { return {randomComplex(), randomComplex(), randomComplex(), randomComplex()}; }

// dual transpose M2 = M1^dagger makes both M1 M2 and all B1 B2 self-dual
SelfDualMatrix productSelfDual(const std::vector<std::vector<Mat2>>& m1,
                               const std::vector<int>& cols) {
    const int n = static_cast<int>(m1.size());
    SelfDualMatrix out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Mat2 acc = Mat2::zero();
            for (int k : cols) acc = acc + m1[i][k] * m1[j][k].adjugate();
            out.block(i, j) = acc;
        }
    return out;
}

} // namespace

TEST_CASE("determinant basics") {
    CHECK(std::abs(det(CMatrix::identity(5)) - cplx(1.0)) < 1e-14);

    // K3 bundle matrix with z12 = z23 = z13 = i has monodromy w = i*i/i = i,
    // so det = 2 - w - 1/w = 2 - i + i = 2.
    const cplx zi(0.0, 1.0);
    CMatrix k3(3, 3);
    k3(0, 0) = k3(1, 1) = k3(2, 2) = 2.0;
    k3(0, 1) = -zi;
    k3(0, 2) = -zi;
    k3(1, 2) = -zi;
    k3(1, 0) = -1.0 / zi;
    k3(2, 0) = -1.0 / zi;
    k3(2, 1) = -1.0 / zi;
    CHECK(std::abs(det(k3) - cplx(2.0)) < 1e-12);

    // rank-1 singular
    CMatrix r1(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r1(i, j) = cplx(i + 1.0) * cplx(j + 1.0, 0.5);
    CHECK(std::abs(det(r1)) < 1e-12);
}

TEST_CASE("det multiplicativity on random 8x8") {
    for (int rep = 0; rep < 10; ++rep) {
        CMatrix a = randomMatrix(8), b = randomMatrix(8);
        const cplx lhs = det(a * b);
        const cplx rhs = det(a) * det(b);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * std::abs(rhs));
    }
}

TEST_CASE("inverse and condition") {
    CMatrix a = randomMatrix(6);
    CMatrix ai = inverse(a);
    CMatrix prod = a * ai;
    CHECK((prod - CMatrix::identity(6)).maxAbs() < 1e-10);
    CHECK(conditionInf(a) >= 1.0);

    CMatrix sing(2, 2);
    sing(0, 0) = 1.0;
    sing(0, 1) = 2.0;
    sing(1, 0) = 2.0;
    sing(1, 1) = 4.0;
    CHECK_THROWS_AS(inverse(sing), NumericError);
}

TEST_CASE("adjugate entries match det * inverse") {
    CMatrix a = randomMatrix(5);
    const cplx d = det(a);
    CMatrix ai = inverse(a);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            CHECK(std::abs(adjugateEntry(a, i, j) - d * ai(i, j)) < 1e-9 * std::abs(d));
}

TEST_CASE("pfaffian") {
    SUBCASE("2x2") {
        CMatrix m(2, 2);
        m(0, 1) = cplx(3.0, -1.0);
        m(1, 0) = -m(0, 1);
        CHECK(std::abs(pfaffian(m) - cplx(3.0, -1.0)) < 1e-14);
    }
    SUBCASE("block diagonal") {
        CMatrix m(6, 6);
        const cplx v[3] = {cplx(2.0), cplx(0.0, 1.0), cplx(-1.5, 0.5)};
        for (int k = 0; k < 3; ++k) {
            m(2 * k, 2 * k + 1) = v[k];
            m(2 * k + 1, 2 * k) = -v[k];
        }
        CHECK(std::abs(pfaffian(m) - v[0] * v[1] * v[2]) < 1e-12);
    }
    SUBCASE("Pf^2 = det up to 20x20") {
        for (int n : {4, 6, 10, 16, 20}) {
            CMatrix m = randomAntisymmetric(n);
            const cplx pf = pfaffian(m);
            const cplx dt = det(m);
            CHECK(std::abs(pf * pf - dt) <= 1e-8 * std::abs(dt));
        }
    }
    SUBCASE("rejects odd dimension and asymmetry") {
        CHECK_THROWS_AS(pfaffian(CMatrix(3, 3)), NumericError);
        CMatrix bad(2, 2);
        bad(0, 1) = 1.0;
        bad(1, 0) = -0.5;
        CHECK_THROWS_AS(pfaffian(bad), NumericError);
    }
}

TEST_CASE("qdet") {
    SUBCASE("paper worked 2x2 example: ac - det B") {
        const cplx a = randomComplex(), c = randomComplex();
        const Mat2 b = randomMat2();
        SelfDualMatrix m(2);
        m.block(0, 0) = Mat2::identity() * a;
        m.block(1, 1) = Mat2::identity() * c;
        m.block(0, 1) = b;
        m.block(1, 0) = b.adjugate();
        const cplx expect = a * c - b.det();
        CHECK(std::abs(qdet(m) - expect) < 1e-12);
        CHECK(std::abs(qdetCycleSum(m) - expect) < 1e-12);
    }
    SUBCASE("scalar diagonal") {
        SelfDualMatrix m(3);
        const cplx s[3] = {cplx(2.0, 1.0), cplx(-1.0), cplx(0.5, -0.5)};
        for (int i = 0; i < 3; ++i) m.block(i, i) = Mat2::identity() * s[i];
        CHECK(std::abs(qdet(m) - s[0] * s[1] * s[2]) < 1e-12);
    }
    SUBCASE("pfaffian route vs cycle sum on random self-dual 3x3") {
        for (int rep = 0; rep < 5; ++rep) {
            SelfDualMatrix m(3);
            for (int i = 0; i < 3; ++i) {
                m.block(i, i) = Mat2::identity() * randomComplex();
                for (int j = i + 1; j < 3; ++j) {
                    m.block(i, j) = randomMat2();
                    m.block(j, i) = m.block(i, j).adjugate();
                }
            }
            CHECK(std::abs(qdet(m) - qdetCycleSum(m)) < 1e-10);
        }
    }
    SUBCASE("violated self-duality rejected") {
        SelfDualMatrix m(2);
        m.block(0, 0) = Mat2::identity();
        m.block(1, 1) = Mat2::identity();
        m.block(0, 1) = randomMat2();
        m.block(1, 0) = randomMat2(); // not the adjugate
        CHECK_THROWS_AS(qdet(m), NumericError);
    }
    SUBCASE("noncommutative Cauchy-Binet, n=2 m=3") {
        for (int rep = 0; rep < 5; ++rep) {
            std::vector<std::vector<Mat2>> m1(2, std::vector<Mat2>(3));
            for (auto& row : m1)
                for (auto& blk : row) blk = randomMat2();
            const cplx lhs = qdet(productSelfDual(m1, {0, 1, 2}));
            cplx rhs = 0.0;
            rhs += qdet(productSelfDual(m1, {0, 1}));
            rhs += qdet(productSelfDual(m1, {0, 2}));
            rhs += qdet(productSelfDual(m1, {1, 2}));
            CHECK(std::abs(lhs - rhs) < 1e-9 * std::max(1.0, std::abs(lhs)));
        }
    }
    SUBCASE("adjugate identity A + adj A = tr(A) I") {
        for (int rep = 0; rep < 10; ++rep) {
            Mat2 a = randomMat2();
            // normalize to det 1 (SL2)
            const cplx s = std::sqrt(a.det());
            if (std::abs(s) < 1e-9) continue;
            a = a * (1.0 / s);
            const Mat2 sum = a + a.adjugate();
            CHECK(std::abs(sum.a - a.trace()) < 1e-12);
            CHECK(std::abs(sum.d - a.trace()) < 1e-12);
            CHECK(std::abs(sum.b) < 1e-12);
            CHECK(std::abs(sum.c) < 1e-12);
        }
    }
}

TEST_CASE("laurent interpolation") {
    SUBCASE("2 - z - 1/z at 5th roots of unity") {
        auto f = [](cplx z) { return 2.0 - z - 1.0 / z; };
        LaurentPoly p = interpolateLaurent(f, 2);
        CHECK(std::abs(p.coeff(0) - cplx(2.0)) < 1e-12);
        CHECK(std::abs(p.coeff(1) - cplx(-1.0)) < 1e-12);
        CHECK(std::abs(p.coeff(-1) - cplx(-1.0)) < 1e-12);
        CHECK(std::abs(p.coeff(2)) < 1e-12);
        CHECK(p.isReciprocal());
    }
    SUBCASE("degree-3 reciprocal polynomial, exact recovery") {
        LaurentPoly target(-3, {cplx(0.5), cplx(-1.0), cplx(2.5), cplx(4.0), cplx(2.5),
                                cplx(-1.0), cplx(0.5)});
        auto f = [&](cplx z) { return target.eval(z); };
        LaurentPoly p = interpolateLaurent(f, 3);
        for (int d = -3; d <= 3; ++d) CHECK(std::abs(p.coeff(d) - target.coeff(d)) < 1e-10);
        CHECK(interpolationResidual(p, f) < 1e-10);
    }
    SUBCASE("bound too small flags residual") {
        auto f = [](cplx z) { return z * z * z + 1.0 / z; };
        LaurentPoly p = interpolateLaurent(f, 1); // true degree 3
        CHECK(interpolationResidual(p, f) > 1e-6);
    }
    SUBCASE("insufficient samples rejected") {
        std::vector<std::pair<cplx, cplx>> samples = {{cplx(1.0), cplx(0.0)}};
        CHECK_THROWS_AS(interpolateLaurentSamples(samples, 2), InputError);
    }
    SUBCASE("interpolate of evaluate is identity (random within bound)") {
        for (int rep = 0; rep < 5; ++rep) {
            std::vector<cplx> cs(9);
            for (auto& c : cs) c = randomComplex(2.0);
            LaurentPoly target(-4, cs);
            LaurentPoly p = interpolateLaurent([&](cplx z) { return target.eval(z); }, 4);
            for (int d = -4; d <= 4; ++d) CHECK(std::abs(p.coeff(d) - target.coeff(d)) <= 1e-10);
        }
    }
}

TEST_CASE("real roots") {
    SUBCASE("w(w+2)") {
        LaurentPoly p(0, {cplx(0.0), cplx(2.0), cplx(1.0)}); // 2w + w^2
        auto roots = realRoots(p);
        REQUIRE(roots.size() == 2);
        CHECK(roots[0] == doctest::Approx(-2.0).epsilon(1e-10));
        CHECK(roots[1] == doctest::Approx(0.0).epsilon(1e-10));
    }
    SUBCASE("complex roots rejected when asserting reality") {
        LaurentPoly p(0, {cplx(1.0), cplx(0.0), cplx(1.0)}); // w^2 + 1
        CHECK_THROWS_AS(realRoots(p), NumericError);
    }
    SUBCASE("known factored polynomial") {
        // (w+1)(w+3)(w+7) = w^3 + 11w^2 + 31w + 21
        LaurentPoly p(0, {cplx(21.0), cplx(31.0), cplx(11.0), cplx(1.0)});
        auto roots = realRoots(p);
        REQUIRE(roots.size() == 3);
        CHECK(roots[0] == doctest::Approx(-7.0).epsilon(1e-9));
        CHECK(roots[1] == doctest::Approx(-3.0).epsilon(1e-9));
        CHECK(roots[2] == doctest::Approx(-1.0).epsilon(1e-9));
    }
}

TEST_CASE("hermitian min pivot flags PSD") {
    // A^* A is PSD
    CMatrix a = randomMatrix(5);
    CMatrix psd = a.adjoint() * a;
    CHECK(hermitianMinPivot(psd) >= -1e-9);
    // shift down to make indefinite
    CMatrix shifted = psd;
    for (int i = 0; i < 5; ++i) shifted(i, i) -= 10.0;
    CHECK(hermitianMinPivot(shifted) < -1.0);
}

TEST_CASE("chi squared survival sanity") {
    // known values: P(X > 3.84 | dof 1) ~ 0.05
    CHECK(chiSquaredSurvival(3.841, 1) == doctest::Approx(0.05).epsilon(2e-3));
    CHECK(chiSquaredSurvival(18.307, 10) == doctest::Approx(0.05).epsilon(2e-3));
    CHECK(chiSquaredSurvival(0.0, 5) == doctest::Approx(1.0));
}

TEST_CASE("least squares") {
    std::vector<std::vector<double>> a = {{1, 0}, {0, 1}, {1, 1}};
    std::vector<double> b = {1.0, 2.0, 3.1};
    double cond = 0.0;
    auto x = leastSquares(a, b, &cond);
    CHECK(x[0] == doctest::Approx(1.0333333).epsilon(1e-6));
    CHECK(x[1] == doctest::Approx(2.0333333).epsilon(1e-6));
    CHECK(cond < 1e3);
}
