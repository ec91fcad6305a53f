#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nsfd/denominator.hpp"
#include "nsfd/errors.hpp"
#include "nsfd/model.hpp"
#include "nsfd/state.hpp"

namespace nsfd {

// Which integrator advances the state:
//   nsfd         : y_{k+1} = y_k + (phi/(1 + m*phi)) f(y_k)
//   nonstd_euler : y_{k+1} = y_k + phi f(y_k)
//   euler/rk2/rk4: classical fixed-step baselines (rk2 is the explicit
//                  trapezoidal scheme)
struct SchemeSpec {
    enum class Kind { nsfd, nonstd_euler, euler, rk2, rk4 };

    Kind kind = Kind::nsfd;
    double m = 0.0;                                    // nsfd only
    DenominatorSpec phi = DenominatorSpec::identity(); // nsfd and nonstd_euler

    static SchemeSpec nsfd(double m, DenominatorSpec phi) {
        SchemeSpec s;
        s.kind = Kind::nsfd;
        s.m = m;
        s.phi = phi;
        return s;
    }

    static SchemeSpec nonstd_euler(DenominatorSpec phi) {
        SchemeSpec s;
        s.kind = Kind::nonstd_euler;
        s.phi = phi;
        return s;
    }

    static SchemeSpec euler() { return classical(Kind::euler); }
    static SchemeSpec rk2() { return classical(Kind::rk2); }
    static SchemeSpec rk4() { return classical(Kind::rk4); }

    std::string label() const {
        switch (kind) {
            case Kind::nsfd: return "nsfd";
            case Kind::nonstd_euler: return "nonstd-euler";
            case Kind::euler: return "euler";
            case Kind::rk2: return "rk2";
            case Kind::rk4: return "rk4";
        }
        return "?";
    }

private:
    static SchemeSpec classical(Kind k) {
        SchemeSpec s;
        s.kind = k;
        return s;
    }
};

struct Divergence {
    std::size_t step_index = 0; // index of the state that could not be produced
    std::string message;
};

// Fixed-step trajectory on the grid t_k = k*dt, stored flat. A run that
// breaks down numerically keeps the states computed so far and records the
// failing step instead of throwing.
class Trajectory {
public:
    Trajectory(std::string model_name, SchemeSpec scheme, double dt, std::size_t dim)
        : model_name_(std::move(model_name)), scheme_(scheme), dt_(dt), dim_(dim) {
        if (!(dt > 0.0)) throw UsageError("trajectory step size must be positive");
        if (dim == 0) throw UsageError("trajectory dimension must be positive");
    }

    const std::string& model_name() const { return model_name_; }
    const SchemeSpec& scheme() const { return scheme_; }
    double dt() const { return dt_; }
    std::size_t dim() const { return dim_; }

    std::size_t size() const { return data_.size() / dim_; }
    double time(std::size_t k) const { return static_cast<double>(k) * dt_; }

    std::span<const double> state(std::size_t k) const {
        return std::span<const double>(data_.data() + k * dim_, dim_);
    }

    StateVector state_vector(std::size_t k) const {
        const auto s = state(k);
        return StateVector(std::vector<double>(s.begin(), s.end()));
    }

    const std::optional<Divergence>& divergence() const { return divergence_; }

    void append(const std::vector<double>& y) {
        if (y.size() != dim_) throw UsageError("trajectory append: dimension mismatch");
        data_.insert(data_.end(), y.begin(), y.end());
    }

    void mark_divergence(std::size_t step_index, std::string message) {
        divergence_ = Divergence{step_index, std::move(message)};
    }

private:
    std::string model_name_;
    SchemeSpec scheme_;
    double dt_;
    std::size_t dim_;
    std::vector<double> data_;
    std::optional<Divergence> divergence_;
};

namespace detail {

// Shared first-order update y <- y + scale*f(y). Both nonstandard schemes
// reduce to this kernel, which is what makes the renormalized and plain
// forms bitwise interchangeable.
inline void advance_raw(const DynamicalModel& model, std::vector<double>& y, double scale) {
    const std::vector<double> f = eval_rhs_raw(model, y);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] += scale * f[i];
        if (!std::isfinite(y[i])) {
            std::ostringstream msg;
            msg << "model '" << model.name << "': state overflowed during a step";
            throw NumericalError(msg.str());
        }
    }
}

inline double nsfd_scale(double m, double phi_value) {
    if (!(phi_value > 0.0) || !std::isfinite(phi_value)) {
        throw UsageError("scheme step: denominator value must be positive and finite");
    }
    const double denom = 1.0 + m * phi_value;
    if (!(denom > 0.0)) {
        std::ostringstream msg;
        msg << "scheme step: 1 + m*phi = " << denom << " is not positive (m=" << m
            << ", phi=" << phi_value << ")";
        throw UsageError(msg.str());
    }
    return phi_value / denom;
}

inline void check_state_dim(const DynamicalModel& model, const StateVector& y) {
    if (y.size() != model.dim) throw UsageError("scheme step: state dimension mismatch");
}

} // namespace detail

inline StateVector nsfd_step(const DynamicalModel& model, const StateVector& y, double m,
                             double phi_value) {
    detail::check_state_dim(model, y);
    std::vector<double> out = y.raw();
    detail::advance_raw(model, out, detail::nsfd_scale(m, phi_value));
    return StateVector(std::move(out));
}

inline StateVector nonstd_euler_step(const DynamicalModel& model, const StateVector& y,
                                     double phi_value) {
    detail::check_state_dim(model, y);
    if (!(phi_value > 0.0) || !std::isfinite(phi_value)) {
        throw UsageError("scheme step: denominator value must be positive and finite");
    }
    std::vector<double> out = y.raw();
    detail::advance_raw(model, out, phi_value);
    return StateVector(std::move(out));
}

namespace detail {

inline void check_stage_finite(const DynamicalModel& model, const std::vector<double>& y) {
    for (double x : y) {
        if (!std::isfinite(x)) {
            std::ostringstream msg;
            msg << "model '" << model.name << "': non-finite intermediate stage";
            throw NumericalError(msg.str());
        }
    }
}

inline void classical_step_raw(SchemeSpec::Kind kind, const DynamicalModel& model,
                               std::vector<double>& y, double dt) {
    const std::size_t n = y.size();
    switch (kind) {
        case SchemeSpec::Kind::euler: {
            advance_raw(model, y, dt);
            return;
        }
        case SchemeSpec::Kind::rk2: {
            const std::vector<double> k1 = eval_rhs_raw(model, y);
            std::vector<double> stage(n);
            for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + dt * k1[i];
            check_stage_finite(model, stage);
            const std::vector<double> k2 = eval_rhs_raw(model, stage);
            for (std::size_t i = 0; i < n; ++i) y[i] += dt * 0.5 * (k1[i] + k2[i]);
            check_stage_finite(model, y);
            return;
        }
        case SchemeSpec::Kind::rk4: {
            const std::vector<double> k1 = eval_rhs_raw(model, y);
            std::vector<double> stage(n);
            for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + 0.5 * dt * k1[i];
            check_stage_finite(model, stage);
            const std::vector<double> k2 = eval_rhs_raw(model, stage);
            for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + 0.5 * dt * k2[i];
            check_stage_finite(model, stage);
            const std::vector<double> k3 = eval_rhs_raw(model, stage);
            for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + dt * k3[i];
            check_stage_finite(model, stage);
            const std::vector<double> k4 = eval_rhs_raw(model, stage);
            for (std::size_t i = 0; i < n; ++i) {
                y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            check_stage_finite(model, y);
            return;
        }
        default:
            throw UsageError("classical_step: scheme kind is not a classical scheme");
    }
}

} // namespace detail

inline StateVector classical_step(SchemeSpec::Kind kind, const DynamicalModel& model,
                                  const StateVector& y, double dt) {
    detail::check_state_dim(model, y);
    if (!(dt > 0.0) || !std::isfinite(dt)) throw UsageError("classical_step: dt must be positive and finite");
    std::vector<double> out = y.raw();
    detail::classical_step_raw(kind, model, out, dt);
    return StateVector(std::move(out));
}

// Integrates `steps` fixed steps of the scheme from y0. The denominator value
// is evaluated once for the whole run (the grid is uniform). Step-level
// numerical errors end the run early; the partial trajectory carries a
// divergence marker with the index of the state that failed to materialize.
inline Trajectory integrate(const DynamicalModel& model, const SchemeSpec& scheme,
                            const StateVector& y0, double dt, std::size_t steps) {
    detail::check_state_dim(model, y0);
    if (!(dt > 0.0) || !std::isfinite(dt)) throw UsageError("integrate: dt must be positive and finite");

    double scale = dt; // effective multiplier for the one-stage schemes
    switch (scheme.kind) {
        case SchemeSpec::Kind::nsfd:
            scale = detail::nsfd_scale(scheme.m, denominator_value(scheme.phi, dt));
            break;
        case SchemeSpec::Kind::nonstd_euler:
            scale = denominator_value(scheme.phi, dt);
            break;
        default:
            break;
    }

    Trajectory traj(model.name, scheme, dt, model.dim);
    std::vector<double> y = y0.raw();
    traj.append(y);
    for (std::size_t k = 1; k <= steps; ++k) {
        try {
            switch (scheme.kind) {
                case SchemeSpec::Kind::nsfd:
                case SchemeSpec::Kind::nonstd_euler:
                    detail::advance_raw(model, y, scale);
                    break;
                default:
                    detail::classical_step_raw(scheme.kind, model, y, dt);
                    break;
            }
        } catch (const NumericalError& e) {
            traj.mark_divergence(k, e.what());
            break;
        }
        traj.append(y);
    }
    return traj;
}

} // namespace nsfd
