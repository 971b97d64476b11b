#include "crsf/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace crsf {

// ---------------------------------------------------------------------------
// Annulus
// ---------------------------------------------------------------------------

namespace {

// coefficients (low degree 0) of Ch_d(2 - w) via the recurrence
// Ch_{d+1}(x) = x Ch_d(x) - Ch_{d-1}(x)
std::vector<std::vector<double>> chebyshevOfTwoMinusW(int max_d) {
    std::vector<std::vector<double>> out(max_d + 1);
    out[0] = {2.0};
    if (max_d >= 1) out[1] = {2.0, -1.0}; // 2 - w
    for (int d = 2; d <= max_d; ++d) {
        std::vector<double> next(d + 1, 0.0);
        for (size_t k = 0; k < out[d - 1].size(); ++k) {
            next[k] += 2.0 * out[d - 1][k];      // 2 * Ch_{d-1}
            next[k + 1] -= out[d - 1][k];        // -w * Ch_{d-1}
        }
        for (size_t k = 0; k < out[d - 2].size(); ++k) next[k] -= out[d - 2][k];
        out[d] = std::move(next);
    }
    return out;
}

AnnulusSpectrum spectrumFromQ(LaurentPoly p, std::vector<cplx> q_coeffs, double residual) {
    AnnulusSpectrum spec;
    spec.p = std::move(p);
    spec.interp_residual = residual;

    // Q(0) = P(1) must vanish (double root of P at z = 1); deflate the w factor.
    double scale = 0.0;
    for (const cplx& v : q_coeffs) scale = std::max(scale, std::abs(v));
    if (scale <= 0.0) throw NumericError("annulusSpectrum: zero determinant polynomial");
    if (std::abs(q_coeffs[0]) > 1e-7 * scale)
        throw NumericError("annulusSpectrum: Q(0) does not vanish (no double root at z = 1)");
    q_coeffs[0] = 0.0;
    spec.q = LaurentPoly(0, q_coeffs);

    std::vector<cplx> core(q_coeffs.begin() + 1, q_coeffs.end());
    LaurentPoly core_poly(0, core);
    core_poly = core_poly.trimmed(1e-12);
    if (!core_poly.hasRealCoeffs(1e-7))
        throw NumericError("annulusSpectrum: Q has non-real coefficients");
    std::vector<double> roots = realRoots(core_poly); // throws on complex roots
    for (double r : roots) {
        if (r >= -1e-10)
            throw NumericError("annulusSpectrum: nonnegative Q-root " + std::to_string(r) +
                               " violates the reality theorem");
        spec.multipliers.push_back(-r);
    }
    std::sort(spec.multipliers.begin(), spec.multipliers.end());
    for (double l : spec.multipliers) spec.biases.push_back(l / (1.0 + l));
    return spec;
}

} // namespace

AnnulusSpectrum annulusSpectrum(const Graph& g, int degree_bound) {
    int crossings = 0;
    for (const Edge& e : g.edges()) crossings += std::abs(e.wind_x);
    if (crossings == 0)
        throw InputError("annulusSpectrum: graph carries no winding-marked edges");
    const int bound = degree_bound > 0 ? degree_bound : crossings;

    auto evaluator = [&](cplx z) {
        return detBundle(g, windingConnection(g, z));
    };
    LaurentPoly p = interpolateLaurent(evaluator, bound);
    const double residual = interpolationResidual(p, evaluator);
    if (residual > tol().interp_residual * std::max(1.0, p.maxAbsCoeff()))
        throw NumericError("annulusSpectrum: interpolation residual too large (degree bound?)");
    if (!p.isReciprocal())
        throw NumericError("annulusSpectrum: P(z) is not reciprocal");

    // Q(w) = c_0 + sum_d c_d Ch_d(2 - w), using symmetrized coefficients
    LaurentPoly trimmed = p.trimmed(1e-12);
    const int deg = std::max(std::abs(trimmed.lowDegree()), std::abs(trimmed.highDegree()));
    const auto ch = chebyshevOfTwoMinusW(std::max(deg, 1));
    std::vector<cplx> q(deg + 1, cplx(0.0));
    q[0] += p.coeff(0);
    for (int d = 1; d <= deg; ++d) {
        const cplx cd = 0.5 * (p.coeff(d) + p.coeff(-d));
        for (size_t k = 0; k < ch[d].size(); ++k) q[k] += cd * ch[d][k];
    }
    return spectrumFromQ(std::move(p), std::move(q), residual);
}

double chebyshevCh(int n, double x) {
    double prev = 2.0, cur = x;
    if (n == 0) return prev;
    for (int k = 1; k < n; ++k) {
        const double next = x * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

AnnulusSpectrum cylinderSpectrumClosedForm(int m, int n) {
    if (m < 1 || n < 3) throw InputError("cylinderSpectrumClosedForm: need m >= 1, n >= 3");
    AnnulusSpectrum spec;
    for (int k = 1; k <= m - 1; ++k) {
        const double lambda = 2.0 + 2.0 * std::cos(k * M_PI / m);
        // Ch_n explodes for large n; track log(lambda') when out of range
        const double x = lambda + 2.0;
        const double alpha = (x + std::sqrt(x * x - 4.0)) / 2.0;
        const double log_ch = n * std::log(alpha);
        if (log_ch < 700.0)
            spec.multipliers.push_back(chebyshevCh(n, x) - 2.0);
        else
            spec.multipliers.push_back(std::exp(700.0)); // effectively infinite bias weight
    }
    std::sort(spec.multipliers.begin(), spec.multipliers.end());
    // store Q scaled by 1/Q(1): w prod (w + lambda_i)/(1 + lambda_i); same
    // roots and PGF, stable for huge multipliers
    std::vector<cplx> q = {cplx(0.0), cplx(1.0)};
    for (double l : spec.multipliers) {
        std::vector<cplx> next(q.size() + 1, cplx(0.0));
        const double scale = 1.0 + l;
        for (size_t k = 0; k < q.size(); ++k) {
            next[k] += q[k] * (l / scale);
            next[k + 1] += q[k] / scale;
        }
        q = std::move(next);
    }
    spec.q = LaurentPoly(0, q);
    for (double l : spec.multipliers) spec.biases.push_back(l / (1.0 + l));
    return spec;
}

std::vector<double> cycleCountPgf(const AnnulusSpectrum& spec) {
    const double q1 = spec.q.eval(1.0).real();
    if (std::abs(q1) < 1e-300) throw NumericError("cycleCountPgf: Q(1) = 0");
    std::vector<double> pgf(spec.q.highDegree() + 1, 0.0);
    for (int j = 0; j <= spec.q.highDegree(); ++j) pgf[j] = spec.q.coeff(j).real() / q1;
    return pgf;
}

double singleCycleProbabilityLimit(double tau, int max_terms) {
    double prod = 1.0;
    for (int j = 1; j <= max_terms; ++j) {
        const double lambda = 2.0 * std::cosh(M_PI * j / tau) - 2.0;
        prod *= lambda / (1.0 + lambda);
    }
    return prod;
}

// ---------------------------------------------------------------------------
// Torus
// ---------------------------------------------------------------------------

namespace {

double binom(int top, int bottom) {
    if (bottom < 0 || bottom > top) return 0.0;
    double v = 1.0;
    for (int i = 0; i < bottom; ++i) v *= static_cast<double>(top - i) / (i + 1);
    return v;
}

} // namespace

double TorusSpectrum::probability(int j, int k, int m) const {
    if (total <= 0.0) throw NumericError("TorusSpectrum: empty table");
    // canonical representative: j > 0, or j == 0 and k > 0
    if (j < 0 || (j == 0 && k < 0)) {
        j = -j;
        k = -k;
    }
    const auto it = c.find({j, k, m});
    return it == c.end() ? 0.0 : it->second / total;
}

TorusSpectrum torusCoefficients(int j_max, int l_max, int m_max) {
    TorusSpectrum spec;
    spec.tail_bound = std::exp(-(M_PI / 2.0) * j_max * j_max);
    for (int j = 0; j <= j_max; ++j) {
        for (int k = -j_max; k <= j_max; ++k) {
            if (j == 0 && k <= 0) continue;       // one representative per direction
            if (std::gcd(j, std::abs(k)) != 1) continue; // primitive vectors only
            const double q = std::exp(-(M_PI / 2.0) * (j * j + k * k));
            for (int m = 1; m <= m_max; ++m) {
                double cjkm = 0.0;
                for (int l = 1; l <= l_max; ++l) {
                    const double sgn = ((l + m) % 2 == 0) ? 1.0 : -1.0;
                    cjkm += (static_cast<double>(l) / m) * binom(m + l - 1, 2 * m - 1) * sgn *
                            std::pow(q, static_cast<double>(l) * l);
                }
                if (std::abs(cjkm) > 1e-300) {
                    spec.c[{j, k, m}] = cjkm;
                    spec.total += cjkm;
                }
            }
        }
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Cylinder product formulas
// ---------------------------------------------------------------------------

CylinderReport cylinderProductFormula(int m, int n, cplx z) {
    if (m < 1 || n < 3) throw InputError("cylinderProductFormula: need m >= 1, n >= 3");
    CylinderReport rep;
    std::vector<double> nonzero_eigs;
    for (int k = 1; k <= m - 1; ++k) nonzero_eigs.push_back(2.0 + 2.0 * std::cos(k * M_PI / m));

    // det Delta(z) = (2 - z - 1/z) * prod_{zeta^n = z} prod_{lambda != 0} (lambda + 2 - zeta - 1/zeta)
    cplx log_sum = 0.0;
    const cplx log_z = std::log(z);
    for (int j = 0; j < n; ++j) {
        const cplx zeta = std::exp((log_z + cplx(0.0, 2.0 * M_PI * j)) / static_cast<double>(n));
        for (double lambda : nonzero_eigs) log_sum += std::log(lambda + 2.0 - zeta - 1.0 / zeta);
    }
    rep.det_formula = (2.0 - z - 1.0 / z) * std::exp(log_sum);

    // det' Delta_0 = n^2 prod_{zeta^n = 1} prod_{lambda != 0} (...)
    double log_prime = 2.0 * std::log(static_cast<double>(n));
    cplx log_acc = 0.0;
    for (int j = 0; j < n; ++j) {
        const cplx zeta = std::exp(cplx(0.0, 2.0 * M_PI * j / n));
        for (double lambda : nonzero_eigs) log_acc += std::log(lambda + 2.0 - zeta - 1.0 / zeta);
    }
    rep.det_prime = std::exp(log_prime + log_acc.real()) * std::cos(log_acc.imag());
    rep.tree_count = rep.det_prime / (static_cast<double>(n) * m);
    rep.crt_count = rep.det_prime / (static_cast<double>(n) * n);
    if (rep.crt_count <= 0.0) throw NumericError("cylinderProductFormula: vanishing CRT count");
    rep.rn = rep.tree_count / rep.crt_count;
    rep.rn_over_n = rep.rn / n;
    return rep;
}

// ---------------------------------------------------------------------------
// Monotone lattice paths
// ---------------------------------------------------------------------------

cplx latticeProductF(int m, int n, cplx z, cplx w) {
    cplx log_sum = 0.0;
    const cplx log_z = std::log(z), log_w = std::log(w);
    for (int a = 0; a < m; ++a) {
        const cplx u = std::exp((log_z + cplx(0.0, 2.0 * M_PI * a)) / static_cast<double>(m));
        for (int b = 0; b < n; ++b) {
            const cplx v = std::exp((log_w + cplx(0.0, 2.0 * M_PI * b)) / static_cast<double>(n));
            const cplx f = 2.0 - u - v;
            if (std::abs(f) < 1e-300) return 0.0;
            log_sum += std::log(f);
        }
    }
    return std::exp(log_sum);
}

LatticePathReport latticePathPgf(int m, int n) {
    if (m < 1 || n < 1) throw InputError("latticePathPgf: m, n >= 1");
    LatticePathReport rep;

    if (m * n <= 24) {
        // sample F on an (n+1) x (m+1) roots-of-unity grid; 2D DFT to the
        // monomial coefficients a[r][s] of z^r w^s (degrees <= n, <= m)
        const int nz = n + 1, nw = m + 1;
        std::vector<std::vector<cplx>> f(nz, std::vector<cplx>(nw));
        for (int a = 0; a < nz; ++a)
            for (int b = 0; b < nw; ++b) {
                const cplx z = std::polar(1.0, 2.0 * M_PI * a / nz);
                const cplx w = std::polar(1.0, 2.0 * M_PI * b / nw);
                f[a][b] = latticeProductF(m, n, z, w);
            }
        std::vector<std::vector<double>> coef(nz, std::vector<double>(nw, 0.0));
        double max_imag = 0.0;
        for (int r = 0; r < nz; ++r)
            for (int s = 0; s < nw; ++s) {
                cplx acc = 0.0;
                for (int a = 0; a < nz; ++a)
                    for (int b = 0; b < nw; ++b)
                        acc += f[a][b] * std::polar(1.0, -2.0 * M_PI * (static_cast<double>(r) * a / nz +
                                                                        static_cast<double>(s) * b / nw));
                acc /= static_cast<double>(nz) * nw;
                coef[r][s] = acc.real();
                max_imag = std::max(max_imag, std::abs(acc.imag()));
            }
        rep.extraction_residual = max_imag;

        // F = sum C_{j,k} (1 - z^p w^q)^l: solve along each primitive ray,
        // largest multiple first
        for (int r = 0; r <= n; ++r)
            for (int s = 0; s <= m; ++s) {
                if (r == 0 && s == 0) continue;
                const int g = std::gcd(r, s);
                if (g != 1) continue; // handle whole ray at its primitive point
                const int p = r, q = s;
                int lmax = 0;
                while ((lmax + 1) * p <= n && (lmax + 1) * q <= m) ++lmax;
                std::vector<double> cray(lmax + 1, 0.0);
                for (int t = lmax; t >= 1; --t) {
                    double rhs = ((t % 2 == 0) ? 1.0 : -1.0) * coef[p * t][q * t];
                    double acc = rhs;
                    for (int l = t + 1; l <= lmax; ++l) acc -= cray[l] * binom(l, t);
                    cray[t] = acc;
                }
                for (int l = 1; l <= lmax; ++l)
                    if (std::abs(cray[l]) > 1e-6) rep.coefficients[{p * l, q * l}] = cray[l];
                // residual: reconstruct the ray coefficients
                for (int t = 1; t <= lmax; ++t) {
                    double recon = 0.0;
                    for (int l = t; l <= lmax; ++l)
                        recon += cray[l] * binom(l, t) * ((t % 2 == 0) ? 1.0 : -1.0);
                    rep.extraction_residual =
                        std::max(rep.extraction_residual, std::abs(recon - coef[p * t][q * t]));
                }
            }
    }

    if (m == n) {
        // diagonal statistics from H_n(1,Y)/H_n(1,1) = prod (A_j - 1 + Y)/A_j,
        // A_j = (2 - e^{2 pi i j / n})^n; factor j contributes a Bernoulli of
        // parameter 1/A_j
        cplx mean = 0.0, var = 0.0;
        for (int j = 0; j < n; ++j) {
            const cplx root = std::polar(1.0, 2.0 * M_PI * j / n);
            const cplx inv_a = std::exp(-static_cast<double>(n) * std::log(2.0 - root));
            mean += inv_a;
            var += inv_a * (1.0 - inv_a);
        }
        rep.mean = mean.real();
        rep.variance = var.real();
        for (int j = 0;; ++j) {
            const double pj = std::exp(-std::pow(2.0 * M_PI * j, 2.0) / n);
            rep.biases.push_back(pj);
            if (pj < 1e-14 || j > 5 * static_cast<int>(std::sqrt(n)) + 10) break;
        }
    }
    return rep;
}

} // namespace crsf
