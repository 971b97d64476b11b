#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "crsf/errors.hpp"
#include "crsf/tolerances.hpp"

namespace crsf {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Dense complex matrices
// ---------------------------------------------------------------------------

class CMatrix {
public:
    CMatrix() = default;
    CMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    static CMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cplx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const cplx& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    CMatrix operator*(const CMatrix& rhs) const;
    CMatrix operator+(const CMatrix& rhs) const;
    CMatrix operator-(const CMatrix& rhs) const;

    CMatrix transpose() const;
    CMatrix adjoint() const; // conjugate transpose

    double maxAbs() const;
    double normInf() const; // max absolute row sum

private:
    int rows_ = 0, cols_ = 0;
    std::vector<cplx> a_;
};

// LU factorization with partial pivoting. `singular` is set when some pivot
// fell below pivot_zero * scale; min_pivot records the smallest pivot seen.
struct LuFactor {
    CMatrix lu;
    std::vector<int> perm;
    int sign = 1;
    bool singular = false;
    double min_pivot = 0.0;
    double scale = 0.0;

    cplx det() const;
    std::vector<cplx> solve(const std::vector<cplx>& rhs) const; // throws if singular
    CMatrix solve(const CMatrix& rhs) const;
    CMatrix inverse() const;
};

LuFactor luFactor(CMatrix a);

cplx det(const CMatrix& a);
CMatrix inverse(const CMatrix& a);

// ||A||_inf * ||A^-1||_inf; +inf when singular.
double conditionInf(const CMatrix& a);

// Determinant of the matrix with one row and one column removed (no sign).
cplx detMinor(const CMatrix& a, int drop_row, int drop_col);

// Entry (i,j) of adj(A) = det(A) * A^-1, i.e. (-1)^{i+j} det of the minor
// obtained by deleting row j and column i. Stable even when A is singular.
cplx adjugateEntry(const CMatrix& a, int i, int j);

// Signed cofactor-style minor with rows A and columns B removed:
// (-1)^{sum A + sum B} det(M with rows A, cols B deleted).
cplx signedMinor(const CMatrix& a, std::vector<int> rows, std::vector<int> cols);

// Pfaffian of an antisymmetric matrix (skew Gaussian elimination with
// partial pivoting). Throws on odd dimension or asymmetry beyond tolerance.
cplx pfaffian(CMatrix a);

// Smallest elimination pivot (real part) of a Hermitian matrix under
// diagonal pivoting; >= -eps for positive semidefinite inputs.
double hermitianMinPivot(CMatrix a);

// ---------------------------------------------------------------------------
// 2x2 blocks and self-dual matrices (SL2 connections)
// ---------------------------------------------------------------------------

struct Mat2 {
    cplx a{}, b{}, c{}, d{}; // [[a,b],[c,d]]

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 zero() { return {}; }

    Mat2 operator*(const Mat2& r) const {
        return {a * r.a + b * r.c, a * r.b + b * r.d, c * r.a + d * r.c, c * r.b + d * r.d};
    }
    Mat2 operator+(const Mat2& r) const { return {a + r.a, b + r.b, c + r.c, d + r.d}; }
    Mat2 operator-(const Mat2& r) const { return {a - r.a, b - r.b, c - r.c, d - r.d}; }
    Mat2 operator*(cplx s) const { return {a * s, b * s, c * s, d * s}; }

    cplx trace() const { return a + d; }
    cplx det() const { return a * d - b * c; }
    Mat2 adjugate() const { return {d, -b, -c, a}; } // A + adj(A) = tr(A) I
    Mat2 inverse() const;
    double maxAbs() const;
};

// n x n matrix of 2x2 blocks with M_ij = adjugate(M_ji).
class SelfDualMatrix {
public:
    explicit SelfDualMatrix(int n) : n_(n), blocks_(static_cast<size_t>(n) * n) {}

    int size() const { return n_; }
    Mat2& block(int i, int j) { return blocks_[static_cast<size_t>(i) * n_ + j]; }
    const Mat2& block(int i, int j) const { return blocks_[static_cast<size_t>(i) * n_ + j]; }

    CMatrix realize() const;                  // 2n x 2n entrywise matrix
    double selfDualityDefect() const;         // max |M_ij - adj(M_ji)|
    void requireSelfDual(double tolerance = tol().self_dual) const;

private:
    int n_;
    std::vector<Mat2> blocks_;
};

// Qdet(M) = Pf(Z M') with Z block-diagonal [[0,1],[-1,0]].
cplx qdet(const SelfDualMatrix& m);

// Direct cycle-sum expansion over S_n; test oracle, guarded to n <= 5.
cplx qdetCycleSum(const SelfDualMatrix& m);

// ---------------------------------------------------------------------------
// Laurent polynomials in one variable
// ---------------------------------------------------------------------------

class LaurentPoly {
public:
    LaurentPoly() : min_deg_(0), c_(1, cplx(0.0)) {}
    LaurentPoly(int min_deg, std::vector<cplx> coeffs);

    static LaurentPoly monomial(cplx coeff, int deg);

    int lowDegree() const { return min_deg_; }
    int highDegree() const { return min_deg_ + static_cast<int>(c_.size()) - 1; }
    cplx coeff(int deg) const;

    cplx eval(cplx z) const;
    LaurentPoly derivative() const;
    LaurentPoly operator*(const LaurentPoly& rhs) const;
    LaurentPoly operator+(const LaurentPoly& rhs) const;
    LaurentPoly scaled(cplx s) const;

    bool isReciprocal(double tolerance = tol().reciprocal) const; // coeff(k) == coeff(-k)
    bool hasRealCoeffs(double tolerance = tol().real_coeff) const;
    double maxAbsCoeff() const;
    LaurentPoly trimmed(double tolerance) const; // drop negligible leading/trailing coeffs

    // Coefficients of the plain polynomial z^{-lowDegree} * P(z), low to high.
    std::vector<cplx> polynomialCoeffs() const;

private:
    int min_deg_;
    std::vector<cplx> c_;
};

// Exact recovery of a Laurent polynomial of degree <= degree_bound from
// evaluations at the (2*degree_bound+1)-st roots of unity.
LaurentPoly interpolateLaurent(const std::function<cplx(cplx)>& f, int degree_bound);

// Same from a caller-supplied sample list; the points must be the complete
// set of N-th roots of unity for some N >= 2*degree_bound+1 (any order).
LaurentPoly interpolateLaurentSamples(const std::vector<std::pair<cplx, cplx>>& samples,
                                      int degree_bound);

// Max |P(z) - f(z)| over a few fresh unit-circle points (aliasing detector).
double interpolationResidual(const LaurentPoly& p, const std::function<cplx(cplx)>& f);

// Roots of c[0] + c[1] x + ... + c[n] x^n (Durand-Kerner).
std::vector<cplx> polyRoots(std::vector<cplx> coeffs);

// All roots of a real-coefficient Laurent polynomial, which the caller
// asserts to be real; throws NumericError carrying the offending root if a
// genuinely complex root shows up.
std::vector<double> realRoots(const LaurentPoly& p);

// ---------------------------------------------------------------------------
// Small utilities
// ---------------------------------------------------------------------------

// P(X > x) for a chi-squared variable with dof degrees of freedom.
double chiSquaredSurvival(double x, int dof);

// Least squares min ||Ax - b|| via normal equations; cond_out (optional)
// receives a condition estimate of A^T A.
std::vector<double> leastSquares(const std::vector<std::vector<double>>& a,
                                 const std::vector<double>& b, double* cond_out = nullptr);

} // namespace crsf
