// Command-line front end. Five subcommands cover the toolkit: simulate
// (trajectory CSV), thresholds (scheme parameter bounds), errors (accuracy
// sweep against an RK4 reference), conservation (law deviation report), and
// equilibria (root search plus classification). Usage errors exit with 2,
// numerical failures with 3, messages on stderr.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "nsfd/nsfd.hpp"

namespace {

constexpr double unset = std::numeric_limits<double>::quiet_NaN();

bool given(double flag) { return !std::isnan(flag); }

struct Options {
    std::string model = "single-species";
    std::vector<std::string> params;
    std::string scheme = "nsfd";
    double m = unset;
    std::string phi = "identity";
    double tau = unset;
    double dt = 1.0;
    long long steps = 100;
    double horizon = unset;
    std::vector<double> y0;
    std::vector<double> dts; // errors subcommand only
    double ref_dt = 1e-5;
    std::string out;
};

double parse_param_value(const std::string& name, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw nsfd::UsageError("parameter '" + name + "': cannot parse value '" + text + "'");
    }
}

nsfd::DynamicalModel build_model(const Options& o) {
    std::map<std::string, double> value;
    std::string kind = "exponential";
    bool kind_given = false;
    for (const std::string& p : o.params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos) {
            throw nsfd::UsageError("--param expects name=value, got '" + p + "'");
        }
        const std::string name = p.substr(0, eq);
        const std::string text = p.substr(eq + 1);
        if (name == "kind") {
            kind = text;
            kind_given = true;
        } else {
            value[name] = parse_param_value(name, text);
        }
    }
    auto take = [&value](const char* key, double fallback) {
        const auto it = value.find(key);
        if (it == value.end()) return fallback;
        const double v = it->second;
        value.erase(it);
        return v;
    };
    auto finish = [&value, &o](nsfd::DynamicalModel model) {
        if (!value.empty()) {
            throw nsfd::UsageError("unknown parameter '" + value.begin()->first + "' for model '" +
                                   o.model + "'");
        }
        return model;
    };

    if (o.model == "single-species") {
        nsfd::BirthFunctionKind birth;
        if (kind == "exponential") {
            birth = nsfd::BirthFunctionKind::exponential(take("a", 1.0), take("b", 12.0));
        } else if (kind == "rational") {
            birth = nsfd::BirthFunctionKind::rational(take("p", 2.0), take("q", 1.0), take("n", 1.0));
        } else if (kind == "reciprocal") {
            birth = nsfd::BirthFunctionKind::reciprocal(take("A", 2.0), take("c", 0.5));
        } else {
            throw nsfd::UsageError("unknown birth function kind '" + kind +
                                   "' (expected exponential, rational, or reciprocal)");
        }
        return finish(nsfd::single_species(birth, take("d", 1.0)));
    }
    if (kind_given) throw nsfd::UsageError("parameter 'kind' applies only to the single-species model");
    if (o.model == "predator-prey") {
        return finish(nsfd::predator_prey(take("A", 6.0), take("D", 5.0), take("E", 7.0)));
    }
    if (o.model == "vaccination") {
        nsfd::VaccinationParams p;
        p.Pi = take("Pi", p.Pi);
        p.beta1 = take("beta1", p.beta1);
        p.beta2 = take("beta2", p.beta2);
        p.mu = take("mu", p.mu);
        p.alpha_star = take("alpha_star", p.alpha_star);
        p.c = take("c", p.c);
        p.xi = take("xi", p.xi);
        return finish(nsfd::vaccination(p));
    }
    if (o.model == "sis-dcl") {
        return finish(nsfd::sis_dcl(take("beta", 0.5), take("gamma", 1.0), take("M", 100.0)));
    }
    throw nsfd::UsageError("unknown model '" + o.model + "'");
}

std::vector<double> default_y0(const nsfd::DynamicalModel& model) {
    if (model.name == "predator-prey") return {4.5, 1.0};
    if (model.name == "vaccination") return {500.0, 2000.0, 100.0};
    if (model.name == "sis-dcl") return {30.0, 20.0};
    return {2.0};
}

nsfd::StateVector initial_state(const nsfd::DynamicalModel& model, const Options& o) {
    return nsfd::StateVector(o.y0.empty() ? default_y0(model) : o.y0);
}

// Without --m the damped scheme uses the model's own m_required, which needs
// every declared equilibrium to be hyperbolic.
double resolve_m(const nsfd::DynamicalModel& model, const Options& o) {
    if (given(o.m)) return o.m;
    try {
        return nsfd::compute_thresholds(model, model.known_equilibria).m_required;
    } catch (const nsfd::UsageError& e) {
        throw nsfd::UsageError(std::string(e.what()) + " (pass --m to choose a weight directly)");
    }
}

nsfd::SchemeSpec resolve_scheme(const nsfd::DynamicalModel& model, const Options& o) {
    if (o.scheme == "euler") return nsfd::SchemeSpec::euler();
    if (o.scheme == "rk2") return nsfd::SchemeSpec::rk2();
    if (o.scheme == "rk4") return nsfd::SchemeSpec::rk4();

    const bool damped = o.scheme == "nsfd";
    const double m = damped ? resolve_m(model, o) : 0.0;
    nsfd::DenominatorSpec phi = nsfd::DenominatorSpec::identity();
    if (o.phi == "exp") {
        if (!given(o.tau)) throw nsfd::UsageError("the exp denominator requires --tau");
        phi = nsfd::DenominatorSpec::exponential(o.tau);
    } else if (o.phi == "exact-gcl" || o.phi == "exact-linear") {
        if (model.conservation.effective_kind() != nsfd::ConservationDecl::Kind::gcl) {
            throw nsfd::UsageError("the " + o.phi +
                                   " denominator needs a model with a generalized conservation law");
        }
        if (o.phi == "exact-gcl") {
            if (!damped) {
                throw nsfd::UsageError(
                    "the exact-gcl denominator belongs to the damped scheme; use exact-linear with "
                    "nonstd-euler");
            }
            phi = nsfd::DenominatorSpec::exact_gcl(m, model.conservation.b1);
        } else {
            phi = nsfd::DenominatorSpec::exact_linear(model.conservation.b1);
        }
    }
    return damped ? nsfd::SchemeSpec::nsfd(m, phi) : nsfd::SchemeSpec::nonstd_euler(phi);
}

long long resolve_steps(const Options& o) {
    if (!given(o.horizon)) return o.steps;
    const double q = o.horizon / o.dt;
    const long long n = std::llround(q);
    if (!std::isfinite(q) || std::abs(q - static_cast<double>(n)) > 1e-9 || n < 0) {
        throw nsfd::UsageError("--horizon must be a whole number of steps of size --dt");
    }
    return n;
}

template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path.empty()) {
        fn(std::cout);
    } else {
        std::ofstream out = nsfd::open_output(path);
        fn(out);
    }
}

void run_simulate(const Options& o) {
    const nsfd::DynamicalModel model = build_model(o);
    const nsfd::SchemeSpec scheme = resolve_scheme(model, o);
    const nsfd::Trajectory traj = nsfd::integrate(model, scheme, initial_state(model, o), o.dt,
                                                  static_cast<std::size_t>(resolve_steps(o)));
    with_output(o.out, [&](std::ostream& out) { nsfd::write_trajectory(out, traj, model.conservation); });
}

void run_thresholds(const Options& o) {
    const nsfd::DynamicalModel model = build_model(o);
    const nsfd::ThresholdReport report = nsfd::compute_thresholds(model, model.known_equilibria);
    with_output(o.out, [&](std::ostream& out) { nsfd::write_thresholds(out, report); });
}

void run_errors(const Options& o) {
    nsfd::ErrorTableConfig config;
    config.model = build_model(o);
    config.y0 = initial_state(config.model, o);
    if (given(o.horizon)) config.horizon = o.horizon;
    if (!o.dts.empty()) config.dts = o.dts;
    config.dt_ref = o.ref_dt;
    const double m = given(o.m) ? o.m : 1.5;
    const double tau = given(o.tau) ? o.tau : 1.5;
    config.schemes = {nsfd::SchemeSpec::nsfd(m, nsfd::DenominatorSpec::identity()),
                      nsfd::SchemeSpec::nonstd_euler(nsfd::DenominatorSpec::exponential(tau)),
                      nsfd::SchemeSpec::euler()};
    const std::vector<nsfd::ErrorRow> rows = nsfd::error_table(config);
    with_output(o.out, [&](std::ostream& out) { nsfd::write_error_table(out, rows); });
}

void run_conservation(const Options& o) {
    const nsfd::DynamicalModel model = build_model(o);
    if (model.conservation.effective_kind() == nsfd::ConservationDecl::Kind::none) {
        throw nsfd::UsageError("model '" + model.name + "' declares no conservation law");
    }
    const nsfd::SchemeSpec scheme = resolve_scheme(model, o);
    const nsfd::Trajectory traj = nsfd::integrate(model, scheme, initial_state(model, o), o.dt,
                                                  static_cast<std::size_t>(resolve_steps(o)));
    const nsfd::ConservationReport report =
        model.conservation.effective_kind() == nsfd::ConservationDecl::Kind::dcl
            ? nsfd::check_dcl(traj, model.conservation)
            : nsfd::check_gcl(traj, model.conservation, scheme);
    with_output(o.out, [&](std::ostream& out) { nsfd::write_conservation(out, report); });
}

void run_equilibria(const Options& o) {
    const nsfd::DynamicalModel model = build_model(o);
    std::vector<nsfd::StateVector> seeds = nsfd::default_seeds(model);
    if (!o.y0.empty()) seeds.push_back(nsfd::StateVector(o.y0));
    std::vector<nsfd::EquilibriumReport> reports;
    for (const nsfd::StateVector& point : nsfd::find_equilibria(model, seeds)) {
        reports.push_back(nsfd::classify(model, point));
    }
    with_output(o.out, [&](std::ostream& out) { nsfd::write_equilibria(out, reports); });
}

void add_model_flags(CLI::App* sub, Options& o) {
    sub->add_option("--model", o.model, "built-in model")
        ->check(CLI::IsMember({"single-species", "predator-prey", "vaccination", "sis-dcl"}))
        ->capture_default_str();
    sub->add_option("--param", o.params,
                    "model parameter override name=value (repeatable); single-species also takes "
                    "kind={exponential|rational|reciprocal}");
}

void add_scheme_flags(CLI::App* sub, Options& o) {
    sub->add_option("--scheme", o.scheme, "integration scheme")
        ->check(CLI::IsMember({"nsfd", "nonstd-euler", "euler", "rk2", "rk4"}))
        ->capture_default_str();
    sub->add_option("--m", o.m, "denominator weight of the damped scheme (default: the model's m_required)");
    sub->add_option("--phi", o.phi, "denominator function")
        ->check(CLI::IsMember({"identity", "exp", "exact-gcl", "exact-linear"}))
        ->capture_default_str();
    sub->add_option("--tau", o.tau, "rate of the exp denominator");
}

void add_grid_flags(CLI::App* sub, Options& o) {
    sub->add_option("--dt", o.dt, "step size")->check(CLI::PositiveNumber)->capture_default_str();
    CLI::Option* steps = sub->add_option("--steps", o.steps, "number of steps")
                             ->check(CLI::NonNegativeNumber)
                             ->capture_default_str();
    CLI::Option* horizon =
        sub->add_option("--horizon", o.horizon, "time horizon T (instead of --steps; T/dt must be whole)");
    steps->excludes(horizon);
    horizon->excludes(steps);
}

void add_y0_flag(CLI::App* sub, Options& o) {
    sub->add_option("--y0", o.y0, "initial state v1,v2,...")->delimiter(',');
}

void add_out_flag(CLI::App* sub, Options& o) {
    sub->add_option("--out", o.out, "output CSV path (default: stdout)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structure-preserving integrators for small dynamical models"};
    app.require_subcommand(1);
    Options o;

    CLI::App* simulate = app.add_subcommand("simulate", "integrate a model and write the trajectory");
    add_model_flags(simulate, o);
    add_scheme_flags(simulate, o);
    add_grid_flags(simulate, o);
    add_y0_flag(simulate, o);
    add_out_flag(simulate, o);
    simulate->callback([&o] { run_simulate(o); });

    CLI::App* thresholds =
        app.add_subcommand("thresholds", "report the scheme parameter bounds m_* and phi_*");
    add_model_flags(thresholds, o);
    add_out_flag(thresholds, o);
    thresholds->callback([&o] { run_thresholds(o); });

    CLI::App* errors =
        app.add_subcommand("errors", "accuracy sweep of the nonstandard schemes against an RK4 reference");
    add_model_flags(errors, o);
    errors->add_option("--dt", o.dts, "step sizes to sweep (repeatable; default 1..1e-5 decades)");
    errors->add_option("--m", o.m, "weight of the damped scheme (default 1.5)");
    errors->add_option("--tau", o.tau, "rate of the exp denominator (default 1.5)");
    errors->add_option("--horizon", o.horizon, "time horizon T (default 10)");
    errors->add_option("--ref-dt", o.ref_dt, "reference step size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_y0_flag(errors, o);
    add_out_flag(errors, o);
    errors->callback([&o] { run_errors(o); });

    CLI::App* conservation =
        app.add_subcommand("conservation", "integrate and report conservation-law deviations");
    add_model_flags(conservation, o);
    add_scheme_flags(conservation, o);
    add_grid_flags(conservation, o);
    add_y0_flag(conservation, o);
    add_out_flag(conservation, o);
    conservation->callback([&o] { run_conservation(o); });

    CLI::App* equilibria =
        app.add_subcommand("equilibria", "find and classify equilibria (--y0 adds a search seed)");
    add_model_flags(equilibria, o);
    add_y0_flag(equilibria, o);
    add_out_flag(equilibria, o);
    equilibria->callback([&o] { run_equilibria(o); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const nsfd::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nsfd::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
