#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nsfd/errors.hpp"
#include "nsfd/matrix.hpp"
#include "nsfd/state.hpp"

namespace nsfd {

// Conservation structure a model declares about its right-hand side:
//   none : no law
//   dcl  : the components sum to a constant (sum of rhs is identically zero)
//   gcl  : d/dt (sum of components) = a1 - b1 * sum,  a1, b1 > 0
//   scl  : dcl or gcl restricted to a subset of components (0-based indices)
struct ConservationDecl {
    enum class Kind { none, dcl, gcl, scl };

    Kind kind = Kind::none;
    double a1 = 0.0;
    double b1 = 0.0;
    std::vector<std::size_t> indices; // scl only
    Kind inner = Kind::none;          // scl only: dcl or gcl

    static ConservationDecl none() { return {}; }

    static ConservationDecl dcl() {
        ConservationDecl d;
        d.kind = Kind::dcl;
        return d;
    }

    static ConservationDecl gcl(double a1, double b1) {
        if (!(a1 > 0.0) || !(b1 > 0.0)) throw UsageError("gcl declaration requires a1 > 0 and b1 > 0");
        ConservationDecl d;
        d.kind = Kind::gcl;
        d.a1 = a1;
        d.b1 = b1;
        return d;
    }

    static ConservationDecl scl_dcl(std::vector<std::size_t> indices) {
        if (indices.size() < 2) throw UsageError("scl declaration needs at least two component indices");
        ConservationDecl d;
        d.kind = Kind::scl;
        d.inner = Kind::dcl;
        d.indices = std::move(indices);
        return d;
    }

    static ConservationDecl scl_gcl(std::vector<std::size_t> indices, double a1, double b1) {
        if (indices.size() < 2) throw UsageError("scl declaration needs at least two component indices");
        if (!(a1 > 0.0) || !(b1 > 0.0)) throw UsageError("gcl declaration requires a1 > 0 and b1 > 0");
        ConservationDecl d;
        d.kind = Kind::scl;
        d.inner = Kind::gcl;
        d.indices = std::move(indices);
        d.a1 = a1;
        d.b1 = b1;
        return d;
    }

    // The law that conservation checks actually evaluate: scl defers to its
    // inner kind, everything else is itself.
    Kind effective_kind() const { return kind == Kind::scl ? inner : kind; }
};

using RhsFn = std::function<std::vector<double>(const std::vector<double>&)>;
using JacobianFn = std::function<SquareMatrix(const std::vector<double>&)>;

// Autonomous system y' = f(y) plus the metadata the scheme thresholds need:
// a bound alpha with f(y) + alpha*y >= 0 on the nonnegative orthant, known
// equilibria, and a conservation declaration. box_lo/box_hi document the
// componentwise operating box on which alpha is verified by sampling.
struct DynamicalModel {
    std::string name;
    std::size_t dim = 0;
    RhsFn rhs;
    double alpha = 0.0;
    JacobianFn analytic_jacobian; // may be empty; finite differences then apply
    std::vector<StateVector> known_equilibria;
    ConservationDecl conservation;
    std::vector<double> box_lo;
    std::vector<double> box_hi;
};

namespace detail {

inline std::string describe_state(const std::vector<double>& y) {
    std::ostringstream s;
    s << "(";
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (i) s << ", ";
        s << y[i];
    }
    s << ")";
    return s.str();
}

// Evaluates f without wrapping the result; throws NumericalError when the
// output is not finite. Callers are responsible for the dimension check.
inline std::vector<double> eval_rhs_raw(const DynamicalModel& model, const std::vector<double>& y) {
    std::vector<double> f = model.rhs(y);
    if (f.size() != model.dim) {
        std::ostringstream msg;
        msg << "model '" << model.name << "': rhs returned " << f.size() << " components, expected "
            << model.dim;
        throw UsageError(msg.str());
    }
    for (double x : f) {
        if (!std::isfinite(x)) {
            std::ostringstream msg;
            msg << "model '" << model.name << "': non-finite right-hand side at state "
                << describe_state(y);
            throw NumericalError(msg.str());
        }
    }
    return f;
}

} // namespace detail

inline StateVector eval_rhs(const DynamicalModel& model, const StateVector& y) {
    if (y.size() != model.dim) {
        std::ostringstream msg;
        msg << "model '" << model.name << "' has dimension " << model.dim << ", state has "
            << y.size();
        throw UsageError(msg.str());
    }
    return StateVector(detail::eval_rhs_raw(model, y.raw()));
}

struct ConditionReport {
    std::vector<StateVector> violations;
    bool ok() const { return violations.empty(); }
};

// Spot-checks the positivity bound: reports every sample y >= 0 where some
// component of f(y) + alpha*y falls below -1e-12.
inline ConditionReport check_condition_C1(const DynamicalModel& model,
                                          const std::vector<StateVector>& samples) {
    ConditionReport report;
    for (const StateVector& y : samples) {
        if (y.size() != model.dim) throw UsageError("condition check: sample dimension mismatch");
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (y[i] < 0.0) throw UsageError("condition check: samples must be componentwise nonnegative");
        }
        std::vector<double> f = detail::eval_rhs_raw(model, y.raw());
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (f[i] + model.alpha * y[i] < -1e-12) {
                report.violations.push_back(y);
                break;
            }
        }
    }
    return report;
}

// Sum of the components the declaration tracks: all of them for dcl/gcl (and
// for none, where the full sum is still well defined), the index subset for scl.
inline double total_population(std::span<const double> y, const ConservationDecl& decl) {
    double sum = 0.0;
    if (decl.kind == ConservationDecl::Kind::scl) {
        for (std::size_t idx : decl.indices) {
            if (idx >= y.size()) {
                std::ostringstream msg;
                msg << "scl index " << idx << " out of range for state of dimension " << y.size();
                throw UsageError(msg.str());
            }
            sum += y[idx];
        }
    } else {
        for (double x : y) sum += x;
    }
    return sum;
}

inline double total_population(const StateVector& y, const ConservationDecl& decl) {
    return total_population(std::span<const double>(y.raw()), decl);
}

} // namespace nsfd
