#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "nsfd/errors.hpp"

namespace nsfd {

// Denominator function phi(dt) of the nonstandard schemes. Every member of
// the catalog satisfies phi(dt) = dt + O(dt^2):
//   identity     : phi = dt
//   exponential  : phi = (1 - e^(-tau*dt)) / tau
//   exact_linear : phi = (1 - e^(-b1*dt)) / b1, which integrates the linear
//                  total-population equation exactly under the plain scheme
//   exact_gcl    : phi = phi*/(1 - m*phi*) with phi* the exact_linear value;
//                  the damped scheme with weight m then inherits exactness
struct DenominatorSpec {
    enum class Kind { identity, exponential, exact_gcl, exact_linear };

    Kind kind = Kind::identity;
    double tau = 0.0; // exponential
    double m = 0.0;   // exact_gcl
    double b1 = 0.0;  // exact_gcl, exact_linear

    static DenominatorSpec identity() { return {}; }

    static DenominatorSpec exponential(double tau) {
        if (!(tau > 0.0)) throw UsageError("exponential denominator requires tau > 0");
        DenominatorSpec s;
        s.kind = Kind::exponential;
        s.tau = tau;
        return s;
    }

    static DenominatorSpec exact_gcl(double m, double b1) {
        if (!(m >= 0.0) || !std::isfinite(m)) throw UsageError("exact_gcl denominator requires m >= 0");
        if (!(b1 > 0.0)) throw UsageError("exact_gcl denominator requires b1 > 0");
        DenominatorSpec s;
        s.kind = Kind::exact_gcl;
        s.m = m;
        s.b1 = b1;
        return s;
    }

    static DenominatorSpec exact_linear(double b1) {
        if (!(b1 > 0.0)) throw UsageError("exact_linear denominator requires b1 > 0");
        DenominatorSpec s;
        s.kind = Kind::exact_linear;
        s.b1 = b1;
        return s;
    }

    std::string label() const {
        std::ostringstream s;
        switch (kind) {
            case Kind::identity: s << "identity"; break;
            case Kind::exponential: s << "exp(tau=" << tau << ")"; break;
            case Kind::exact_gcl: s << "exact-gcl(m=" << m << ",b1=" << b1 << ")"; break;
            case Kind::exact_linear: s << "exact-linear(b1=" << b1 << ")"; break;
        }
        return s.str();
    }
};

// Evaluates phi(dt). The result must come out finite and positive; for
// exact_gcl with m > b1 the function has a pole at dt = ln(m/(m-b1))/b1 and
// turns negative past it, both of which are rejected.
inline double denominator_value(const DenominatorSpec& spec, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        std::ostringstream msg;
        msg << "denominator " << spec.label() << ": step size must be positive and finite, got " << dt;
        throw UsageError(msg.str());
    }
    auto reject = [&](const char* why) {
        std::ostringstream msg;
        msg << "denominator " << spec.label() << " at dt=" << dt << ": " << why;
        throw UsageError(msg.str());
    };
    double phi = 0.0;
    switch (spec.kind) {
        case DenominatorSpec::Kind::identity:
            phi = dt;
            break;
        case DenominatorSpec::Kind::exponential:
            phi = -std::expm1(-spec.tau * dt) / spec.tau;
            break;
        case DenominatorSpec::Kind::exact_linear:
            phi = -std::expm1(-spec.b1 * dt) / spec.b1;
            break;
        case DenominatorSpec::Kind::exact_gcl: {
            const double phi_star = -std::expm1(-spec.b1 * dt) / spec.b1;
            if (spec.m > spec.b1) {
                const double dt_singular = std::log(spec.m / (spec.m - spec.b1)) / spec.b1;
                if (std::abs(dt - dt_singular) <= 1e-9) reject("step size sits on the pole of the exact denominator");
            }
            const double denom = 1.0 - spec.m * phi_star;
            phi = phi_star / denom;
            break;
        }
    }
    if (!std::isfinite(phi)) reject("value is not finite");
    if (!(phi > 0.0)) reject("value is not positive");
    return phi;
}

} // namespace nsfd
