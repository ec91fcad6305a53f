#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "nsfd/errors.hpp"
#include "nsfd/matrix.hpp"
#include "nsfd/model.hpp"

namespace nsfd {

// Jacobian of the model rhs at y: the analytic one when the model supplies
// it, otherwise central finite differences with step sqrt(eps)*max(1, |y_j|)
// per column. Central differences buy O(h^2) accuracy, which matters because
// the stability threshold is computed from these entries.
inline SquareMatrix jacobian(const DynamicalModel& model, const StateVector& y) {
    if (y.size() != model.dim) throw UsageError("jacobian: state dimension mismatch");
    if (model.analytic_jacobian) {
        SquareMatrix j = model.analytic_jacobian(y.raw());
        if (j.order() != model.dim) throw UsageError("jacobian: analytic Jacobian has wrong order");
        return j;
    }
    const std::size_t n = model.dim;
    const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
    std::vector<double> entries(n * n, 0.0);
    std::vector<double> yp = y.raw();
    std::vector<double> ym = y.raw();
    for (std::size_t j = 0; j < n; ++j) {
        const double h = sqrt_eps * std::max(1.0, std::abs(y[j]));
        yp[j] = y[j] + h;
        ym[j] = y[j] - h;
        const std::vector<double> fp = detail::eval_rhs_raw(model, yp);
        const std::vector<double> fm = detail::eval_rhs_raw(model, ym);
        for (std::size_t i = 0; i < n; ++i) entries[i * n + j] = (fp[i] - fm[i]) / (2.0 * h);
        yp[j] = y[j];
        ym[j] = y[j];
    }
    return SquareMatrix(n, std::move(entries));
}

// Solves A x = b by Gaussian elimination with partial pivoting. Intended for
// the small systems of the Newton iteration; a vanishing pivot reports the
// system as singular.
inline std::vector<double> solve_linear(const SquareMatrix& A, const std::vector<double>& b) {
    const std::size_t n = A.order();
    if (b.size() != n) throw UsageError("solve_linear: right-hand side dimension mismatch");
    std::vector<double> m = A.entries();
    std::vector<double> x = b;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::abs(m[col * n + col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(m[r * n + col]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best <= std::numeric_limits<double>::min()) throw NumericalError("solve_linear: singular system");
        if (piv != col) {
            for (std::size_t j = col; j < n; ++j) std::swap(m[col * n + j], m[piv * n + j]);
            std::swap(x[col], x[piv]);
        }
        const double d = m[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = m[r * n + col] / d;
            if (factor == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) m[r * n + j] -= factor * m[col * n + j];
            x[r] -= factor * x[col];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= m[i * n + j] * x[j];
        x[i] = s / m[i * n + i];
        if (!std::isfinite(x[i])) throw NumericalError("solve_linear: non-finite solution");
    }
    return x;
}

namespace detail {

// Roots of the characteristic polynomial of [[a, b], [c, d]], computed so
// the smaller root comes from the product to avoid cancellation.
inline std::pair<Complex, Complex> eig2(Complex a, Complex b, Complex c, Complex d) {
    const Complex tr = a + d;
    const Complex det = a * d - b * c;
    const Complex s = std::sqrt(tr * tr * 0.25 - det);
    Complex r1 = tr * 0.5 + s;
    Complex r2 = tr * 0.5 - s;
    if (std::abs(r1) >= std::abs(r2)) {
        if (r1 != 0.0) r2 = det / r1;
    } else {
        if (r2 != 0.0) r1 = det / r2;
    }
    return {r1, r2};
}

// Complex Givens rotation [[c, s], [-conj(s), c]] (c real) sending (a, b) to
// (r, 0).
struct Givens {
    double c = 1.0;
    Complex s = 0.0;
};

inline Givens make_givens(Complex a, Complex b) {
    Givens g;
    const double absb = std::abs(b);
    if (absb == 0.0) return g;
    const double absa = std::abs(a);
    const double r = std::hypot(absa, absb);
    if (absa == 0.0) {
        g.c = 0.0;
        g.s = std::conj(b) / absb;
    } else {
        g.c = absa / r;
        g.s = (a / absa) * std::conj(b) / r;
    }
    return g;
}

using CMat = std::vector<Complex>; // row-major order-n workspace

inline void hessenberg_inplace(CMat& h, std::size_t n) {
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double colnorm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) colnorm += std::norm(h[i * n + k]);
        colnorm = std::sqrt(colnorm);
        if (colnorm == 0.0) continue;
        const Complex x0 = h[(k + 1) * n + k];
        const Complex alpha = (x0 != 0.0) ? -(x0 / std::abs(x0)) * colnorm : Complex(-colnorm, 0.0);
        std::vector<Complex> v(n - k - 1);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = h[(k + 1 + i) * n + k];
        v[0] -= alpha;
        double vnorm2 = 0.0;
        for (const Complex& vi : v) vnorm2 += std::norm(vi);
        if (vnorm2 <= std::numeric_limits<double>::min()) continue;
        const double beta = 2.0 / vnorm2;
        // left: H <- (I - beta v v^H) H on rows k+1.., columns k..
        for (std::size_t j = k; j < n; ++j) {
            Complex w = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) w += std::conj(v[i]) * h[(k + 1 + i) * n + j];
            w *= beta;
            for (std::size_t i = 0; i < v.size(); ++i) h[(k + 1 + i) * n + j] -= w * v[i];
        }
        // right: H <- H (I - beta v v^H) on columns k+1.., all rows
        for (std::size_t i = 0; i < n; ++i) {
            Complex w = 0.0;
            for (std::size_t j = 0; j < v.size(); ++j) w += h[i * n + (k + 1 + j)] * v[j];
            w *= beta;
            for (std::size_t j = 0; j < v.size(); ++j) h[i * n + (k + 1 + j)] -= w * std::conj(v[j]);
        }
        h[(k + 1) * n + k] = alpha;
        for (std::size_t i = k + 2; i < n; ++i) h[i * n + k] = 0.0;
    }
}

// Shifted QR iteration on a complex Hessenberg matrix. Single Wilkinson
// shift; 2x2 trailing blocks are resolved in closed form. Sweep budget
// 100*n across all deflation levels.
inline std::vector<Complex> hessenberg_eigenvalues(CMat& h, std::size_t n) {
    std::vector<Complex> eigs;
    eigs.reserve(n);
    const double eps = std::numeric_limits<double>::epsilon();
    const double tiny = std::numeric_limits<double>::min();
    auto negligible = [&](int i) {
        const double s = std::abs(h[(i - 1) * n + (i - 1)]) + std::abs(h[i * n + i]);
        return std::abs(h[i * n + (i - 1)]) <= eps * s + tiny;
    };
    std::size_t sweeps = 0;
    const std::size_t budget = 100 * n;
    int iend = static_cast<int>(n) - 1;
    while (iend >= 0) {
        if (iend == 0) {
            eigs.push_back(h[0]);
            break;
        }
        if (negligible(iend)) {
            h[iend * n + (iend - 1)] = 0.0;
            eigs.push_back(h[iend * n + iend]);
            --iend;
            continue;
        }
        int l = iend - 1;
        while (l > 0 && !negligible(l)) --l;
        if (l > 0) h[l * n + (l - 1)] = 0.0;
        if (iend - l == 1) {
            const auto [e1, e2] =
                eig2(h[l * n + l], h[l * n + iend], h[iend * n + l], h[iend * n + iend]);
            eigs.push_back(e1);
            eigs.push_back(e2);
            iend = l - 1;
            continue;
        }
        if (++sweeps > budget) throw NumericalError("eigenvalues: QR iteration failed to converge");
        const auto [e1, e2] = eig2(h[(iend - 1) * n + (iend - 1)], h[(iend - 1) * n + iend],
                                   h[iend * n + (iend - 1)], h[iend * n + iend]);
        const Complex corner = h[iend * n + iend];
        const Complex shift = (std::abs(e1 - corner) <= std::abs(e2 - corner)) ? e1 : e2;
        for (int k = l; k <= iend; ++k) h[k * n + k] -= shift;
        std::vector<Givens> rots(iend - l);
        for (int k = l; k < iend; ++k) {
            const Givens g = make_givens(h[k * n + k], h[(k + 1) * n + k]);
            rots[k - l] = g;
            for (int j = k; j <= iend; ++j) {
                const Complex a = h[k * n + j];
                const Complex b = h[(k + 1) * n + j];
                h[k * n + j] = g.c * a + g.s * b;
                h[(k + 1) * n + j] = -std::conj(g.s) * a + g.c * b;
            }
        }
        for (int k = l; k < iend; ++k) {
            const Givens g = rots[k - l];
            const int top = std::min(k + 1, iend);
            for (int i = l; i <= top; ++i) {
                const Complex a = h[i * n + k];
                const Complex b = h[i * n + (k + 1)];
                h[i * n + k] = g.c * a + std::conj(g.s) * b;
                h[i * n + (k + 1)] = -g.s * a + g.c * b;
            }
        }
        for (int k = l; k <= iend; ++k) h[k * n + k] += shift;
    }
    return eigs;
}

// The input matrices are real, so the spectrum must be closed under
// conjugation; the QR output is symmetrized to make that exact.
inline void symmetrize_conjugates(std::vector<Complex>& eigs) {
    auto key = [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return std::abs(a.imag()) < std::abs(b.imag());
    };
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < eigs.size(); ++i) {
        if (std::abs(eigs[i].imag()) <= 1e-11 * (1.0 + std::abs(eigs[i]))) {
            eigs[i] = Complex(eigs[i].real(), 0.0);
        } else if (eigs[i].imag() > 0.0) {
            pos.push_back(i);
        } else {
            neg.push_back(i);
        }
    }
    auto idx_key = [&](std::size_t a, std::size_t b) { return key(eigs[a], eigs[b]); };
    std::sort(pos.begin(), pos.end(), idx_key);
    std::sort(neg.begin(), neg.end(), idx_key);
    const std::size_t pairs = std::min(pos.size(), neg.size());
    for (std::size_t i = 0; i < pairs; ++i) {
        const Complex a = eigs[pos[i]];
        const Complex b = eigs[neg[i]];
        const double re = 0.5 * (a.real() + b.real());
        const double im = 0.5 * (a.imag() - b.imag());
        eigs[pos[i]] = Complex(re, im);
        eigs[neg[i]] = Complex(re, -im);
    }
}

} // namespace detail

// All eigenvalues of A with multiplicity, sorted by real part then imaginary
// part. Orders 1 and 2 use closed forms; larger orders go through Hessenberg
// reduction and shifted QR. No balancing pass: the matrices this library
// meets are small and well conditioned at model scale.
inline std::vector<Complex> eigenvalues(const SquareMatrix& A) {
    const std::size_t n = A.order();
    std::vector<Complex> eigs;
    if (n == 1) {
        eigs = {Complex(A(0, 0), 0.0)};
    } else if (n == 2) {
        const auto [e1, e2] = detail::eig2(A(0, 0), A(0, 1), A(1, 0), A(1, 1));
        eigs = {e1, e2};
    } else {
        detail::CMat h(n * n);
        for (std::size_t i = 0; i < n * n; ++i) h[i] = A.entries()[i];
        detail::hessenberg_inplace(h, n);
        eigs = detail::hessenberg_eigenvalues(h, n);
    }
    detail::symmetrize_conjugates(eigs);
    std::sort(eigs.begin(), eigs.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return eigs;
}

inline double spectral_abscissa(const std::vector<Complex>& eigs) {
    if (eigs.empty()) throw UsageError("spectral_abscissa: empty eigenvalue list");
    double m = -std::numeric_limits<double>::infinity();
    for (const Complex& e : eigs) m = std::max(m, e.real());
    return m;
}

inline double spectral_radius(const std::vector<Complex>& eigs) {
    if (eigs.empty()) throw UsageError("spectral_radius: empty eigenvalue list");
    double m = 0.0;
    for (const Complex& e : eigs) m = std::max(m, std::abs(e));
    return m;
}

} // namespace nsfd
