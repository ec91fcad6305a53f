#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nsfd/errors.hpp"
#include "nsfd/linalg.hpp"
#include "nsfd/model.hpp"

namespace nsfd {

enum class Classification { stable, unstable, non_hyperbolic };

inline const char* to_string(Classification c) {
    switch (c) {
        case Classification::stable: return "stable";
        case Classification::unstable: return "unstable";
        case Classification::non_hyperbolic: return "non-hyperbolic";
    }
    return "?";
}

struct EquilibriumReport {
    StateVector point;
    std::vector<Complex> eigenvalues;
    Classification classification = Classification::non_hyperbolic;
    bool hyperbolic = false;
};

// Thresholds that make the scheme dynamically consistent. m_* bound the
// denominator weight of the damped scheme; phi_* bound the denominator value
// of the plain nonstandard Euler scheme (+infinity when unconstrained).
// m_GCL/phi_GCL are absent for models without a generalized conservation law.
struct ThresholdReport {
    double m_P = 0.0;
    double m_S = 0.0;
    std::optional<double> m_GCL;
    double m_required = 0.0;
    double phi_P = std::numeric_limits<double>::infinity();
    double phi_S = std::numeric_limits<double>::infinity();
    std::optional<double> phi_GCL;
    double phi_required = std::numeric_limits<double>::infinity();
};

namespace detail {

// Hyperbolicity band: an eigenvalue real part within 1e-9*(1+|lambda|) of
// zero counts as sitting on the imaginary axis.
inline double tol_hyp(const Complex& lambda) { return 1e-9 * (1.0 + std::abs(lambda)); }

inline Classification classify_eigenvalues(const std::vector<Complex>& eigs, bool& hyperbolic) {
    hyperbolic = true;
    bool any_positive = false;
    for (const Complex& e : eigs) {
        if (std::abs(e.real()) <= tol_hyp(e)) hyperbolic = false;
        if (e.real() > tol_hyp(e)) any_positive = true;
    }
    if (!hyperbolic) return Classification::non_hyperbolic;
    return any_positive ? Classification::unstable : Classification::stable;
}

} // namespace detail

// Classifies an equilibrium by the eigenvalues of the Jacobian there. The
// point must actually be an equilibrium within 1e-8*(1+norm).
inline EquilibriumReport classify(const DynamicalModel& model, const StateVector& point) {
    const StateVector f = eval_rhs(model, point);
    if (inf_norm(f) > 1e-8 * (1.0 + inf_norm(point))) {
        std::ostringstream msg;
        msg << "classify: point " << detail::describe_state(point.raw())
            << " is not an equilibrium of model '" << model.name << "'";
        throw UsageError(msg.str());
    }
    EquilibriumReport report;
    report.point = point;
    report.eigenvalues = eigenvalues(jacobian(model, point));
    report.classification = detail::classify_eigenvalues(report.eigenvalues, report.hyperbolic);
    return report;
}

// Default seed grid for the Newton search: three points per axis over
// [0, 10]^n. The built-in models keep their equilibria inside this window.
inline std::vector<StateVector> default_seeds(const DynamicalModel& model) {
    const std::vector<double> axis = {0.0, 5.0, 10.0};
    std::vector<StateVector> seeds;
    std::vector<std::size_t> digit(model.dim, 0);
    while (true) {
        std::vector<double> p(model.dim);
        for (std::size_t i = 0; i < model.dim; ++i) p[i] = axis[digit[i]];
        seeds.push_back(StateVector(std::move(p)));
        std::size_t i = 0;
        for (; i < model.dim; ++i) {
            if (++digit[i] < axis.size()) break;
            digit[i] = 0;
        }
        if (i == model.dim) break;
    }
    return seeds;
}

// Damped Newton search for roots of f. Seeds that diverge, hit a singular
// Jacobian, or leave the domain of the rhs are skipped; the converged roots
// are merged with the model's declared equilibria and deduplicated within
// 1e-8*(1+norm). Declared equilibria come first in the result.
inline std::vector<StateVector> find_equilibria(const DynamicalModel& model,
                                                const std::vector<StateVector>& seeds) {
    std::vector<StateVector> roots = model.known_equilibria;
    auto already_known = [&roots](const StateVector& y) {
        for (const StateVector& r : roots) {
            if (r.size() == y.size() && inf_distance(r, y) <= 1e-8 * (1.0 + inf_norm(r))) return true;
        }
        return false;
    };
    for (const StateVector& seed : seeds) {
        if (seed.size() != model.dim) throw UsageError("find_equilibria: seed dimension mismatch");
        std::vector<double> y = seed.raw();
        bool converged = false;
        try {
            std::vector<double> f = detail::eval_rhs_raw(model, y);
            for (int iter = 0; iter < 100; ++iter) {
                const double fnorm = inf_norm(f);
                if (fnorm <= 1e-12 * (1.0 + inf_norm(y))) {
                    converged = true;
                    break;
                }
                const SquareMatrix j = jacobian(model, StateVector(y));
                std::vector<double> rhs(f.size());
                for (std::size_t i = 0; i < f.size(); ++i) rhs[i] = -f[i];
                const std::vector<double> step = solve_linear(j, rhs);
                double t = 1.0;
                bool improved = false;
                for (int halving = 0; halving <= 30; ++halving, t *= 0.5) {
                    std::vector<double> cand(y.size());
                    for (std::size_t i = 0; i < y.size(); ++i) cand[i] = y[i] + t * step[i];
                    std::vector<double> fcand;
                    try {
                        fcand = detail::eval_rhs_raw(model, cand);
                    } catch (const NumericalError&) {
                        continue; // candidate outside the rhs domain; damp further
                    }
                    if (inf_norm(fcand) < fnorm) {
                        y = std::move(cand);
                        f = std::move(fcand);
                        improved = true;
                        break;
                    }
                }
                if (!improved) break; // stalled: no decrease after 30 halvings
            }
        } catch (const NumericalError&) {
            continue; // singular Jacobian or rhs breakdown: skip this seed
        }
        if (converged) {
            StateVector root{std::vector<double>(y)};
            if (!already_known(root)) roots.push_back(std::move(root));
        }
    }
    return roots;
}

inline std::vector<StateVector> find_equilibria(const DynamicalModel& model) {
    return find_equilibria(model, default_seeds(model));
}

inline double threshold_m_P(double alpha) { return std::max(alpha, 0.0); }

inline double threshold_phi_P(double alpha) {
    return alpha <= 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / alpha;
}

namespace detail {

// Eigenvalues at the asymptotically stable equilibria. Every equilibrium in
// the list must be hyperbolic; the stability threshold is undefined through
// an eigenvalue with vanishing real part.
inline std::vector<Complex> stable_spectrum(const DynamicalModel& model,
                                            const std::vector<StateVector>& equilibria) {
    std::vector<Complex> stable;
    for (const StateVector& point : equilibria) {
        const EquilibriumReport report = classify(model, point);
        if (!report.hyperbolic) {
            std::ostringstream msg;
            msg << "model '" << model.name << "': equilibrium " << describe_state(point.raw())
                << " has an eigenvalue with vanishing real part; the stability threshold "
                   "requires hyperbolic equilibria";
            throw UsageError(msg.str());
        }
        if (report.classification == Classification::stable) {
            stable.insert(stable.end(), report.eigenvalues.begin(), report.eigenvalues.end());
        }
    }
    return stable;
}

} // namespace detail

// Largest -|lambda|^2 / (2 Re lambda) over the stable spectrum; zero when no
// stable equilibrium exists (any weight preserves stability vacuously then).
inline double threshold_m_S(const DynamicalModel& model, const std::vector<StateVector>& equilibria) {
    const std::vector<Complex> stable = detail::stable_spectrum(model, equilibria);
    double m = 0.0;
    for (const Complex& e : stable) m = std::max(m, -std::norm(e) / (2.0 * e.real()));
    return m;
}

// Smallest -2 Re lambda / |lambda|^2 over the stable spectrum; +infinity when
// no stable equilibrium exists.
inline double threshold_phi_S(const DynamicalModel& model, const std::vector<StateVector>& equilibria) {
    const std::vector<Complex> stable = detail::stable_spectrum(model, equilibria);
    double phi = std::numeric_limits<double>::infinity();
    for (const Complex& e : stable) phi = std::min(phi, -2.0 * e.real() / std::norm(e));
    return phi;
}

inline std::optional<double> threshold_m_GCL(const ConservationDecl& decl) {
    if (decl.effective_kind() == ConservationDecl::Kind::gcl) return decl.b1;
    return std::nullopt;
}

inline std::optional<double> threshold_phi_GCL(const ConservationDecl& decl) {
    if (decl.effective_kind() == ConservationDecl::Kind::gcl) return 1.0 / decl.b1;
    return std::nullopt;
}

inline ThresholdReport compute_thresholds(const DynamicalModel& model,
                                          const std::vector<StateVector>& equilibria) {
    ThresholdReport r;
    r.m_P = threshold_m_P(model.alpha);
    r.m_S = threshold_m_S(model, equilibria);
    r.m_GCL = threshold_m_GCL(model.conservation);
    r.m_required = std::max(r.m_P, r.m_S);
    if (r.m_GCL) r.m_required = std::max(r.m_required, *r.m_GCL);
    r.phi_P = threshold_phi_P(model.alpha);
    r.phi_S = threshold_phi_S(model, equilibria);
    r.phi_GCL = threshold_phi_GCL(model.conservation);
    r.phi_required = std::min(r.phi_P, r.phi_S);
    if (r.phi_GCL) r.phi_required = std::min(r.phi_required, *r.phi_GCL);
    return r;
}

// Jacobian of one scheme step at an equilibrium: I + (phi/(1+m*phi)) * J.
// Its spectral radius decides discrete stability.
inline SquareMatrix discrete_jacobian(const DynamicalModel& model, const StateVector& point, double m,
                                      double phi_value) {
    if (!(phi_value > 0.0)) throw UsageError("discrete_jacobian: denominator value must be positive");
    const double denom = 1.0 + m * phi_value;
    if (!(denom > 0.0)) throw UsageError("discrete_jacobian: scheme denominator 1 + m*phi is not positive");
    const double scale = phi_value / denom;
    SquareMatrix j = jacobian(model, point);
    const std::size_t n = j.order();
    SquareMatrix out = SquareMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) out(i, k) += scale * j(i, k);
    }
    return out;
}

} // namespace nsfd
