#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "nsfd/denominator.hpp"
#include "nsfd/errors.hpp"
#include "nsfd/integrators.hpp"
#include "nsfd/model.hpp"
#include "nsfd/state.hpp"

namespace nsfd {

// One cell of the accuracy comparison: max-norm error over the grid and the
// summed norm, both taken against the reference trajectory and excluding the
// shared initial state.
struct ErrorRow {
    double dt = 0.0;
    std::string scheme;
    double error = 0.0;
    double error_T = 0.0;
    bool diverged = false;
};

namespace detail {

// Rounds q to the nearest integer and insists it really is one (tolerance
// 1e-9). Grid alignment works by exact index arithmetic, never interpolation.
inline long long integral_ratio(double q, const char* what) {
    const double rounded = std::llround(q);
    if (!std::isfinite(q) || std::abs(q - rounded) > 1e-9) {
        std::ostringstream msg;
        msg << what << ": " << q << " is not an integer within 1e-9";
        throw UsageError(msg.str());
    }
    return static_cast<long long>(rounded);
}

} // namespace detail

// High-resolution baseline: classical RK4 at step dt_ref over [0, T]. The
// result is meant to be sampled at exact index multiples by compute_errors.
inline Trajectory reference_solution(const DynamicalModel& model, const StateVector& y0, double T,
                                     double dt_ref) {
    if (!(dt_ref > 0.0)) throw UsageError("reference_solution: dt_ref must be positive");
    if (!(T >= 0.0)) throw UsageError("reference_solution: horizon must be nonnegative");
    const long long steps = detail::integral_ratio(T / dt_ref, "reference_solution: T/dt_ref");
    Trajectory traj = integrate(model, SchemeSpec::rk4(), y0, dt_ref, static_cast<std::size_t>(steps));
    if (traj.divergence()) {
        throw NumericalError("reference solution diverged: " + traj.divergence()->message);
    }
    return traj;
}

// Error of a coarse trajectory against the reference, sampled at the shared
// grid points t_k = k*dt. The coarse grid must be index-aligned with the
// reference grid (dt an integer multiple of the reference step) and both runs
// must start from the same state of the same model.
inline ErrorRow compute_errors(const Trajectory& traj, const Trajectory& ref) {
    if (traj.model_name() != ref.model_name()) {
        throw UsageError("compute_errors: trajectories come from different models");
    }
    if (traj.size() == 0 || ref.size() == 0) {
        throw UsageError("compute_errors: trajectories must contain the initial state");
    }
    const auto y0 = traj.state(0);
    const auto r0 = ref.state(0);
    if (y0.size() != r0.size() || !std::equal(y0.begin(), y0.end(), r0.begin())) {
        throw UsageError("compute_errors: trajectories start from different states");
    }
    const long long stride = detail::integral_ratio(traj.dt() / ref.dt(), "compute_errors: dt/dt_ref");
    if (stride < 1) throw UsageError("compute_errors: coarse step is smaller than the reference step");
    const std::size_t last = (traj.size() - 1) * static_cast<std::size_t>(stride);
    if (last >= ref.size()) {
        throw UsageError("compute_errors: reference trajectory does not cover the coarse grid");
    }

    ErrorRow row;
    row.dt = traj.dt();
    row.scheme = traj.scheme().label();
    row.diverged = traj.divergence().has_value();
    for (std::size_t k = 1; k < traj.size(); ++k) {
        const double d = inf_distance(traj.state(k), ref.state(k * static_cast<std::size_t>(stride)));
        row.error = std::max(row.error, d);
        row.error_T += d;
    }
    return row;
}

inline std::vector<SchemeSpec> default_table_schemes() {
    return {SchemeSpec::nsfd(1.5, DenominatorSpec::identity()),
            SchemeSpec::nonstd_euler(DenominatorSpec::exponential(1.5)), SchemeSpec::euler()};
}

struct ErrorTableConfig {
    DynamicalModel model;
    StateVector y0;
    double horizon = 10.0;
    std::vector<double> dts = {1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
    std::vector<SchemeSpec> schemes = default_table_schemes();
    double dt_ref = 1e-5;
};

// Full accuracy sweep: one reference run, then one row per (dt, scheme) in
// dt-major order. A diverged run still yields a row (errors over whatever
// grid points were produced) with the flag set.
inline std::vector<ErrorRow> error_table(const ErrorTableConfig& config) {
    const Trajectory ref = reference_solution(config.model, config.y0, config.horizon, config.dt_ref);
    std::vector<ErrorRow> rows;
    rows.reserve(config.dts.size() * config.schemes.size());
    for (double dt : config.dts) {
        const long long steps = detail::integral_ratio(config.horizon / dt, "error_table: T/dt");
        for (const SchemeSpec& scheme : config.schemes) {
            const Trajectory traj =
                integrate(config.model, scheme, config.y0, dt, static_cast<std::size_t>(steps));
            rows.push_back(compute_errors(traj, ref));
        }
    }
    return rows;
}

} // namespace nsfd
