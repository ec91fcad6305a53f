#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "nsfd/errors.hpp"
#include "nsfd/integrators.hpp"
#include "nsfd/model.hpp"

namespace nsfd {

// Conservation measurements over one trajectory. This module only reports;
// which schemes are required to pass which bound is a matter for the tests
// and benchmarks, since the classical baselines are expected to violate the
// laws that the nonstandard schemes preserve.
struct ConservationReport {
    ConservationDecl::Kind law = ConservationDecl::Kind::none;
    // dcl: max |P_k - P_0|; gcl: max |P_k - exact(t_k)| against the
    // closed-form solution of the total-population equation.
    double max_deviation = 0.0;
    std::optional<bool> monotone;       // gcl: deviation from the limit keeps
                                        // its sign and never grows
    std::optional<double> limit_error;  // gcl: |P_last - a1/b1|
    bool exact_scheme = false;          // gcl: scheme/denominator pair that is
                                        // exact for the total population
};

// Closed-form total population: P(t) = a1/b1 + (P0 - a1/b1) e^(-b1 t).
inline double gcl_exact_value(double a1, double b1, double P0, double t) {
    if (!(b1 > 0.0)) throw UsageError("gcl_exact_value: b1 must be positive");
    if (t < 0.0) throw UsageError("gcl_exact_value: time must be nonnegative");
    const double limit = a1 / b1;
    return limit + (P0 - limit) * std::exp(-b1 * t);
}

inline ConservationReport check_dcl(const Trajectory& traj, const ConservationDecl& decl) {
    if (decl.effective_kind() != ConservationDecl::Kind::dcl) {
        throw UsageError("check_dcl: declaration is not a direct conservation law");
    }
    ConservationReport report;
    report.law = ConservationDecl::Kind::dcl;
    if (traj.size() == 0) return report;
    const double p0 = total_population(traj.state(0), decl);
    for (std::size_t k = 1; k < traj.size(); ++k) {
        report.max_deviation = std::max(report.max_deviation,
                                        std::abs(total_population(traj.state(k), decl) - p0));
    }
    return report;
}

namespace detail {

inline bool gcl_exact_pair(const SchemeSpec& scheme, const ConservationDecl& decl) {
    if (scheme.kind == SchemeSpec::Kind::nonstd_euler) {
        return scheme.phi.kind == DenominatorSpec::Kind::exact_linear && scheme.phi.b1 == decl.b1;
    }
    if (scheme.kind == SchemeSpec::Kind::nsfd) {
        return scheme.phi.kind == DenominatorSpec::Kind::exact_gcl && scheme.phi.b1 == decl.b1 &&
               scheme.phi.m == scheme.m;
    }
    return false;
}

} // namespace detail

// Measures how a trajectory tracks the generalized conservation law: the
// monotone approach of P_k to a1/b1, the terminal gap, and the deviation from
// the closed-form solution on the grid. Monotonicity is decided on the signed
// sequence with a tolerance band 1e-12*scale so roundoff flutter at the limit
// does not flip the flag.
inline ConservationReport check_gcl(const Trajectory& traj, const ConservationDecl& decl,
                                    const SchemeSpec& scheme) {
    if (decl.effective_kind() != ConservationDecl::Kind::gcl) {
        throw UsageError("check_gcl: declaration is not a generalized conservation law");
    }
    ConservationReport report;
    report.law = ConservationDecl::Kind::gcl;
    report.exact_scheme = detail::gcl_exact_pair(scheme, decl);
    if (traj.size() == 0) return report;
    const double limit = decl.a1 / decl.b1;
    const double p0 = total_population(traj.state(0), decl);
    const double tol = 1e-12 * (1.0 + std::abs(limit) + std::abs(p0));
    bool monotone = true;
    double prev_dev = p0 - limit;
    double p_last = p0;
    for (std::size_t k = 1; k < traj.size(); ++k) {
        const double p = total_population(traj.state(k), decl);
        const double dev = p - limit;
        if (std::abs(dev) > std::abs(prev_dev) + tol) monotone = false;
        if (dev * prev_dev < 0.0 && std::min(std::abs(dev), std::abs(prev_dev)) > tol) monotone = false;
        report.max_deviation =
            std::max(report.max_deviation,
                     std::abs(p - gcl_exact_value(decl.a1, decl.b1, p0, traj.time(k))));
        prev_dev = dev;
        p_last = p;
    }
    report.monotone = monotone;
    report.limit_error = std::abs(p_last - limit);
    return report;
}

} // namespace nsfd
