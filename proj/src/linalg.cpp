#include "crsf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace crsf {

// ---------------------------------------------------------------------------
// CMatrix
// ---------------------------------------------------------------------------

CMatrix CMatrix::identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::operator*(const CMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw NumericError("matrix product: dimension mismatch");
    CMatrix out(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int k = 0; k < cols_; ++k) {
            const cplx aik = (*this)(i, k);
            if (aik == cplx(0.0)) continue;
            for (int j = 0; j < rhs.cols_; ++j) out(i, j) += aik * rhs(k, j);
        }
    }
    return out;
}

CMatrix CMatrix::operator+(const CMatrix& rhs) const {
    CMatrix out(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] + rhs.a_[i];
    return out;
}

CMatrix CMatrix::operator-(const CMatrix& rhs) const {
    CMatrix out(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] - rhs.a_[i];
    return out;
}

CMatrix CMatrix::transpose() const {
    CMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

CMatrix CMatrix::adjoint() const {
    CMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

double CMatrix::maxAbs() const {
    double m = 0.0;
    for (const cplx& v : a_) m = std::max(m, std::abs(v));
    return m;
}

double CMatrix::normInf() const {
    double m = 0.0;
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
        m = std::max(m, s);
    }
    return m;
}

// ---------------------------------------------------------------------------
// LU with partial pivoting
// ---------------------------------------------------------------------------

LuFactor luFactor(CMatrix a) {
    if (a.rows() != a.cols()) throw NumericError("luFactor: matrix not square");
    const int n = a.rows();
    LuFactor f;
    f.perm.resize(n);
    std::iota(f.perm.begin(), f.perm.end(), 0);
    f.scale = a.maxAbs();
    f.min_pivot = (n == 0) ? 1.0 : std::numeric_limits<double>::infinity();

    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::abs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            std::swap(f.perm[k], f.perm[p]);
            f.sign = -f.sign;
        }
        f.min_pivot = std::min(f.min_pivot, best);
        if (best <= tol().pivot_zero * std::max(f.scale, 1e-300)) {
            f.singular = true;
            f.lu = std::move(a);
            return f;
        }
        const cplx piv = a(k, k);
        for (int i = k + 1; i < n; ++i) {
            const cplx m = a(i, k) / piv;
            a(i, k) = m;
            if (m == cplx(0.0)) continue;
            for (int j = k + 1; j < n; ++j) a(i, j) -= m * a(k, j);
        }
    }
    f.lu = std::move(a);
    return f;
}

cplx LuFactor::det() const {
    if (singular) return 0.0;
    cplx d = static_cast<double>(sign);
    for (int i = 0; i < lu.rows(); ++i) d *= lu(i, i);
    return d;
}

std::vector<cplx> LuFactor::solve(const std::vector<cplx>& rhs) const {
    if (singular) {
        std::ostringstream os;
        os << "solve: singular matrix (smallest pivot " << min_pivot << ")";
        throw NumericError(os.str());
    }
    const int n = lu.rows();
    std::vector<cplx> x(n);
    for (int i = 0; i < n; ++i) x[i] = rhs[perm[i]];
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= lu(i, j) * x[j];
        x[i] /= lu(i, i);
    }
    return x;
}

CMatrix LuFactor::solve(const CMatrix& rhs) const {
    const int n = lu.rows();
    CMatrix out(n, rhs.cols());
    std::vector<cplx> col(n);
    for (int j = 0; j < rhs.cols(); ++j) {
        for (int i = 0; i < n; ++i) col[i] = rhs(i, j);
        std::vector<cplx> x = solve(col);
        for (int i = 0; i < n; ++i) out(i, j) = x[i];
    }
    return out;
}

CMatrix LuFactor::inverse() const { return solve(CMatrix::identity(lu.rows())); }

cplx det(const CMatrix& a) { return luFactor(a).det(); }

CMatrix inverse(const CMatrix& a) {
    LuFactor f = luFactor(a);
    if (f.singular) {
        std::ostringstream os;
        os << "inverse: singular matrix (smallest pivot " << f.min_pivot << ", scale " << f.scale
           << ")";
        throw NumericError(os.str());
    }
    return f.inverse();
}

double conditionInf(const CMatrix& a) {
    LuFactor f = luFactor(a);
    if (f.singular) return std::numeric_limits<double>::infinity();
    return a.normInf() * f.inverse().normInf();
}

cplx detMinor(const CMatrix& a, int drop_row, int drop_col) {
    const int n = a.rows();
    CMatrix m(n - 1, n - 1);
    for (int i = 0, ii = 0; i < n; ++i) {
        if (i == drop_row) continue;
        for (int j = 0, jj = 0; j < n; ++j) {
            if (j == drop_col) continue;
            m(ii, jj) = a(i, j);
            ++jj;
        }
        ++ii;
    }
    return det(m);
}

cplx adjugateEntry(const CMatrix& a, int i, int j) {
    const double s = ((i + j) % 2 == 0) ? 1.0 : -1.0;
    return s * detMinor(a, j, i);
}

cplx signedMinor(const CMatrix& a, std::vector<int> rows, std::vector<int> cols) {
    const int n = a.rows();
    std::sort(rows.begin(), rows.end());
    std::sort(cols.begin(), cols.end());
    long parity = 0;
    for (int r : rows) parity += r;
    for (int c : cols) parity += c;
    CMatrix m(n - static_cast<int>(rows.size()), n - static_cast<int>(cols.size()));
    int ii = 0;
    for (int i = 0; i < n; ++i) {
        if (std::binary_search(rows.begin(), rows.end(), i)) continue;
        int jj = 0;
        for (int j = 0; j < n; ++j) {
            if (std::binary_search(cols.begin(), cols.end(), j)) continue;
            m(ii, jj) = a(i, j);
            ++jj;
        }
        ++ii;
    }
    const double s = (parity % 2 == 0) ? 1.0 : -1.0;
    return s * det(m);
}

// ---------------------------------------------------------------------------
// Pfaffian
// ---------------------------------------------------------------------------

cplx pfaffian(CMatrix a) {
    const int n = a.rows();
    if (n != a.cols()) throw NumericError("pfaffian: matrix not square");
    if (n % 2 != 0) throw NumericError("pfaffian: odd dimension");
    const double scale = std::max(a.maxAbs(), 1e-300);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (std::abs(a(i, j) + a(j, i)) > tol().antisymmetry * scale)
                throw NumericError("pfaffian: input not antisymmetric");

    cplx pf = 1.0;
    for (int k = 0; k + 1 < n; k += 2) {
        // pivot: bring the largest |a(i,k)|, i > k, into row k+1
        int p = k + 1;
        double best = std::abs(a(k + 1, k));
        for (int i = k + 2; i < n; ++i) {
            const double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best <= tol().pivot_zero * scale) return 0.0;
        if (p != k + 1) {
            for (int j = 0; j < n; ++j) std::swap(a(k + 1, j), a(p, j));
            for (int i = 0; i < n; ++i) std::swap(a(i, k + 1), a(i, p));
            pf = -pf;
        }
        const cplx piv = a(k, k + 1);
        pf *= piv;
        // Schur complement onto the trailing block:
        // A(i,j) += (A(k,i) S^-1(0,1) A(k+1,j) + A(k+1,i) S^-1(1,0) A(k,j))
        // with S = [[0,piv],[-piv,0]].
        for (int i = k + 2; i < n; ++i) {
            const cplx aki = a(k, i);
            const cplx ak1i = a(k + 1, i);
            if (aki == cplx(0.0) && ak1i == cplx(0.0)) continue;
            for (int j = k + 2; j < n; ++j)
                a(i, j) += (ak1i * a(k, j) - aki * a(k + 1, j)) / piv;
        }
    }
    return pf;
}

double hermitianMinPivot(CMatrix a) {
    const int n = a.rows();
    std::vector<int> live(n);
    std::iota(live.begin(), live.end(), 0);
    double min_piv = std::numeric_limits<double>::infinity();
    const double scale = std::max(a.maxAbs(), 1e-300);
    for (int step = 0; step < n; ++step) {
        int best = -1;
        double best_abs = -1.0;
        for (int idx : live)
            if (std::abs(a(idx, idx)) > best_abs) {
                best_abs = std::abs(a(idx, idx));
                best = idx;
            }
        const double d = a(best, best).real();
        min_piv = std::min(min_piv, d);
        live.erase(std::find(live.begin(), live.end(), best));
        if (best_abs <= 1e-15 * scale) continue; // zero pivot: skip elimination
        for (int i : live)
            for (int j : live) a(i, j) -= a(i, best) * a(best, j) / a(best, best);
    }
    return min_piv;
}

// ---------------------------------------------------------------------------
// Mat2 / SelfDualMatrix / Qdet
// ---------------------------------------------------------------------------

Mat2 Mat2::inverse() const {
    const cplx dt = det();
    if (std::abs(dt) < 1e-300) throw NumericError("Mat2::inverse: singular block");
    return {d / dt, -b / dt, -c / dt, a / dt};
}

double Mat2::maxAbs() const {
    return std::max(std::max(std::abs(a), std::abs(b)), std::max(std::abs(c), std::abs(d)));
}

CMatrix SelfDualMatrix::realize() const {
    CMatrix m(2 * n_, 2 * n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            const Mat2& blk = block(i, j);
            m(2 * i, 2 * j) = blk.a;
            m(2 * i, 2 * j + 1) = blk.b;
            m(2 * i + 1, 2 * j) = blk.c;
            m(2 * i + 1, 2 * j + 1) = blk.d;
        }
    return m;
}

double SelfDualMatrix::selfDualityDefect() const {
    double defect = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            const Mat2 diff = block(i, j) - block(j, i).adjugate();
            defect = std::max(defect, diff.maxAbs());
        }
    return defect;
}

void SelfDualMatrix::requireSelfDual(double tolerance) const {
    double scale = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) scale = std::max(scale, block(i, j).maxAbs());
    if (selfDualityDefect() > tolerance * std::max(scale, 1.0))
        throw NumericError("self-duality violated beyond tolerance");
}

cplx qdet(const SelfDualMatrix& m) {
    m.requireSelfDual();
    const int n = m.size();
    CMatrix r = m.realize();
    // Z M' with Z block-diagonal [[0,1],[-1,0]]: row 2i <- row 2i+1, row 2i+1 <- -row 2i.
    CMatrix zm(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < 2 * n; ++j) {
            zm(2 * i, j) = r(2 * i + 1, j);
            zm(2 * i + 1, j) = -r(2 * i, j);
        }
    return pfaffian(std::move(zm));
}

namespace {

cplx halfTraceOfCycle(const SelfDualMatrix& m, const std::vector<int>& cycle) {
    Mat2 prod = Mat2::identity();
    for (size_t t = 0; t < cycle.size(); ++t)
        prod = prod * m.block(cycle[t], cycle[(t + 1) % cycle.size()]);
    return 0.5 * prod.trace();
}

} // namespace

cplx qdetCycleSum(const SelfDualMatrix& m) {
    const int n = m.size();
    if (n > 5) throw GuardError("qdetCycleSum: expansion guarded to n <= 5");
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    cplx sum = 0.0;
    do {
        // signature and cycle decomposition
        std::vector<bool> seen(n, false);
        cplx term = 1.0;
        int transpositions = 0;
        for (int s = 0; s < n; ++s) {
            if (seen[s]) continue;
            std::vector<int> cycle;
            int cur = s;
            while (!seen[cur]) {
                seen[cur] = true;
                cycle.push_back(cur);
                cur = perm[cur];
            }
            transpositions += static_cast<int>(cycle.size()) - 1;
            term *= halfTraceOfCycle(m, cycle);
        }
        const double sgn = (transpositions % 2 == 0) ? 1.0 : -1.0;
        sum += sgn * term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum;
}

// ---------------------------------------------------------------------------
// LaurentPoly
// ---------------------------------------------------------------------------

LaurentPoly::LaurentPoly(int min_deg, std::vector<cplx> coeffs)
    : min_deg_(min_deg), c_(std::move(coeffs)) {
    if (c_.empty()) c_.assign(1, cplx(0.0));
}

LaurentPoly LaurentPoly::monomial(cplx coeff, int deg) { return LaurentPoly(deg, {coeff}); }

cplx LaurentPoly::coeff(int deg) const {
    const int k = deg - min_deg_;
    if (k < 0 || k >= static_cast<int>(c_.size())) return 0.0;
    return c_[k];
}

cplx LaurentPoly::eval(cplx z) const {
    // Horner on the polynomial part, then multiply by z^{min_deg}
    cplx acc = 0.0;
    for (int k = static_cast<int>(c_.size()) - 1; k >= 0; --k) acc = acc * z + c_[k];
    return acc * std::pow(z, cplx(static_cast<double>(min_deg_)));
}

LaurentPoly LaurentPoly::derivative() const {
    std::vector<cplx> out(c_.size());
    for (size_t k = 0; k < c_.size(); ++k)
        out[k] = c_[k] * static_cast<double>(min_deg_ + static_cast<int>(k));
    return LaurentPoly(min_deg_ - 1, std::move(out));
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& rhs) const {
    std::vector<cplx> out(c_.size() + rhs.c_.size() - 1, cplx(0.0));
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < rhs.c_.size(); ++j) out[i + j] += c_[i] * rhs.c_[j];
    return LaurentPoly(min_deg_ + rhs.min_deg_, std::move(out));
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& rhs) const {
    const int lo = std::min(min_deg_, rhs.min_deg_);
    const int hi = std::max(highDegree(), rhs.highDegree());
    std::vector<cplx> out(static_cast<size_t>(hi - lo + 1), cplx(0.0));
    for (int d = lo; d <= hi; ++d) out[d - lo] = coeff(d) + rhs.coeff(d);
    return LaurentPoly(lo, std::move(out));
}

LaurentPoly LaurentPoly::scaled(cplx s) const {
    std::vector<cplx> out(c_);
    for (cplx& v : out) v *= s;
    return LaurentPoly(min_deg_, std::move(out));
}

bool LaurentPoly::isReciprocal(double tolerance) const {
    const double scale = std::max(maxAbsCoeff(), 1e-300);
    const int hi = std::max(std::abs(lowDegree()), std::abs(highDegree()));
    for (int d = 1; d <= hi; ++d)
        if (std::abs(coeff(d) - coeff(-d)) > tolerance * scale) return false;
    return true;
}

bool LaurentPoly::hasRealCoeffs(double tolerance) const {
    const double scale = std::max(maxAbsCoeff(), 1e-300);
    for (const cplx& v : c_)
        if (std::abs(v.imag()) > tolerance * scale) return false;
    return true;
}

double LaurentPoly::maxAbsCoeff() const {
    double m = 0.0;
    for (const cplx& v : c_) m = std::max(m, std::abs(v));
    return m;
}

LaurentPoly LaurentPoly::trimmed(double tolerance) const {
    const double cut = tolerance * std::max(maxAbsCoeff(), 1e-300);
    int lo = 0, hi = static_cast<int>(c_.size()) - 1;
    while (hi > lo && std::abs(c_[hi]) <= cut) --hi;
    while (lo < hi && std::abs(c_[lo]) <= cut) ++lo;
    std::vector<cplx> out(c_.begin() + lo, c_.begin() + hi + 1);
    return LaurentPoly(min_deg_ + lo, std::move(out));
}

std::vector<cplx> LaurentPoly::polynomialCoeffs() const { return c_; }

LaurentPoly interpolateLaurent(const std::function<cplx(cplx)>& f, int degree_bound) {
    const int n = 2 * degree_bound + 1;
    std::vector<std::pair<cplx, cplx>> samples;
    samples.reserve(n);
    for (int j = 0; j < n; ++j) {
        const double th = 2.0 * M_PI * j / n;
        const cplx z(std::cos(th), std::sin(th));
        samples.emplace_back(z, f(z));
    }
    return interpolateLaurentSamples(samples, degree_bound);
}

LaurentPoly interpolateLaurentSamples(const std::vector<std::pair<cplx, cplx>>& samples,
                                      int degree_bound) {
    const int n = static_cast<int>(samples.size());
    if (n < 2 * degree_bound + 1)
        throw InputError("interpolateLaurent: need at least 2*degree_bound+1 samples");
    // verify the nodes are the n-th roots of unity
    for (const auto& [z, v] : samples) {
        (void)v;
        if (std::abs(std::pow(z, cplx(static_cast<double>(n))) - cplx(1.0)) > 1e-8)
            throw InputError("interpolateLaurent: sample points must be the n-th roots of unity");
    }
    std::vector<cplx> coeffs(2 * degree_bound + 1, cplx(0.0));
    for (int d = -degree_bound; d <= degree_bound; ++d) {
        cplx acc = 0.0;
        for (const auto& [z, v] : samples) acc += v * std::pow(z, cplx(static_cast<double>(-d)));
        coeffs[d + degree_bound] = acc / static_cast<double>(n);
    }
    return LaurentPoly(-degree_bound, std::move(coeffs));
}

double interpolationResidual(const LaurentPoly& p, const std::function<cplx(cplx)>& f) {
    double worst = 0.0;
    for (double th : {0.7, 1.3, 2.9}) {
        const cplx z(std::cos(th), std::sin(th));
        worst = std::max(worst, std::abs(p.eval(z) - f(z)));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Roots
// ---------------------------------------------------------------------------

std::vector<cplx> polyRoots(std::vector<cplx> coeffs) {
    // strip trailing (near-)zero leading coefficients
    double scale = 0.0;
    for (const cplx& v : coeffs) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) throw NumericError("polyRoots: zero polynomial");
    while (coeffs.size() > 1 && std::abs(coeffs.back()) < 1e-14 * scale) coeffs.pop_back();
    const int deg = static_cast<int>(coeffs.size()) - 1;
    if (deg == 0) return {};

    // factor out roots at exactly 0 (tiny constant terms)
    int zero_roots = 0;
    while (static_cast<int>(coeffs.size()) > 1 && std::abs(coeffs.front()) < 1e-14 * scale) {
        coeffs.erase(coeffs.begin());
        ++zero_roots;
    }
    const int d = static_cast<int>(coeffs.size()) - 1;
    std::vector<cplx> roots(zero_roots, cplx(0.0));
    if (d == 0) return roots;

    // Durand-Kerner
    const cplx lead = coeffs.back();
    double radius = 0.0;
    for (int k = 0; k < d; ++k)
        radius = std::max(radius, std::pow(std::abs(coeffs[k] / lead), 1.0 / (d - k)));
    radius = std::max(radius * 1.2, 0.5);
    std::vector<cplx> x(d);
    const cplx seed(0.4, 0.9);
    cplx pw = 1.0;
    for (int i = 0; i < d; ++i) {
        pw *= seed;
        x[i] = radius * pw / std::abs(pw) * (0.5 + 0.5 * (i + 1.0) / d);
    }
    auto evalp = [&](cplx z) {
        cplx acc = 0.0;
        for (int k = d; k >= 0; --k) acc = acc * z + coeffs[k];
        return acc;
    };
    for (int iter = 0; iter < 1000; ++iter) {
        double move = 0.0;
        for (int i = 0; i < d; ++i) {
            cplx denom = lead;
            for (int j = 0; j < d; ++j)
                if (j != i) denom *= (x[i] - x[j]);
            if (std::abs(denom) < 1e-300) denom = 1e-300;
            const cplx delta = evalp(x[i]) / denom;
            x[i] -= delta;
            move = std::max(move, std::abs(delta));
        }
        if (move < 1e-14 * std::max(1.0, radius)) break;
    }
    roots.insert(roots.end(), x.begin(), x.end());
    return roots;
}

std::vector<double> realRoots(const LaurentPoly& p) {
    if (!p.hasRealCoeffs())
        throw NumericError("realRoots: coefficients not real within tolerance");
    LaurentPoly t = p.trimmed(1e-14);
    std::vector<cplx> roots = polyRoots(t.polynomialCoeffs());
    // z^{lowDegree} factor contributes no nonzero roots; roots at 0 only when lowDegree > 0
    if (t.lowDegree() > 0) roots.insert(roots.end(), t.lowDegree(), cplx(0.0));
    std::vector<double> out;
    out.reserve(roots.size());
    for (const cplx& r : roots) {
        if (std::abs(r.imag()) > tol().real_root_imag * std::max(1.0, std::abs(r))) {
            std::ostringstream os;
            os << "realRoots: genuinely complex root " << r.real() << (r.imag() < 0 ? "-" : "+")
               << std::abs(r.imag()) << "i";
            throw NumericError(os.str());
        }
        out.push_back(r.real());
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// chi-squared survival via regularized incomplete gamma
// ---------------------------------------------------------------------------

namespace {

double gammaPSeries(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    for (int k = 1; k < 10000; ++k) {
        term *= x / (s + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

double gammaQContinued(double s, double x) {
    // Lentz's continued fraction for Q(s,x)
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

} // namespace

double chiSquaredSurvival(double x, int dof) {
    if (x <= 0.0) return 1.0;
    const double s = dof / 2.0;
    const double xx = x / 2.0;
    if (xx < s + 1.0) return 1.0 - gammaPSeries(s, xx);
    return gammaQContinued(s, xx);
}

// ---------------------------------------------------------------------------
// Least squares
// ---------------------------------------------------------------------------

std::vector<double> leastSquares(const std::vector<std::vector<double>>& a,
                                 const std::vector<double>& b, double* cond_out) {
    const int rows = static_cast<int>(a.size());
    const int cols = rows > 0 ? static_cast<int>(a[0].size()) : 0;
    CMatrix ata(cols, cols);
    std::vector<cplx> atb(cols, cplx(0.0));
    for (int i = 0; i < cols; ++i) {
        for (int j = 0; j < cols; ++j) {
            double s = 0.0;
            for (int r = 0; r < rows; ++r) s += a[r][i] * a[r][j];
            ata(i, j) = s;
        }
        double s = 0.0;
        for (int r = 0; r < rows; ++r) s += a[r][i] * b[r];
        atb[i] = s;
    }
    if (cond_out) *cond_out = conditionInf(ata);
    LuFactor f = luFactor(ata);
    if (f.singular) throw NumericError("leastSquares: rank-deficient system");
    std::vector<cplx> x = f.solve(atb);
    std::vector<double> out(cols);
    for (int i = 0; i < cols; ++i) out[i] = x[i].real();
    return out;
}

} // namespace crsf
