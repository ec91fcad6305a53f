#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "nsfd/errors.hpp"
#include "nsfd/matrix.hpp"
#include "nsfd/model.hpp"
#include "nsfd/state.hpp"

namespace nsfd {

// Per-capita birth rate B(N) for the single-species model. All three forms
// are positive and strictly decreasing on (0, inf); the reciprocal form is
// singular at N = 0 and is only evaluated for N > 0.
struct BirthFunctionKind {
    enum class Kind { exponential, rational, reciprocal };

    Kind kind = Kind::exponential;
    double a = 0.0; // exponential: B(N) = b e^(-aN)
    double b = 0.0;
    double p = 0.0; // rational: B(N) = p / (q + N^n)
    double q = 0.0;
    double n = 0.0;
    double A = 0.0; // reciprocal: B(N) = A/N + c
    double c = 0.0;

    static BirthFunctionKind exponential(double a, double b) {
        if (!(a > 0.0) || !(b > 0.0)) {
            throw UsageError("exponential birth function requires a > 0 and b > 0");
        }
        BirthFunctionKind k;
        k.kind = Kind::exponential;
        k.a = a;
        k.b = b;
        return k;
    }

    static BirthFunctionKind rational(double p, double q, double n) {
        if (!(p > 0.0) || !(q > 0.0) || !(n > 0.0)) {
            throw UsageError("rational birth function requires p, q, n > 0");
        }
        BirthFunctionKind k;
        k.kind = Kind::rational;
        k.p = p;
        k.q = q;
        k.n = n;
        return k;
    }

    static BirthFunctionKind reciprocal(double A, double c) {
        if (!(A > 0.0) || !(c > 0.0)) {
            throw UsageError("reciprocal birth function requires A > 0 and c > 0");
        }
        BirthFunctionKind k;
        k.kind = Kind::reciprocal;
        k.A = A;
        k.c = c;
        return k;
    }

    double value(double N) const {
        switch (kind) {
            case Kind::exponential: return b * std::exp(-a * N);
            case Kind::rational: return p / (q + std::pow(N, n));
            case Kind::reciprocal: return A / N + c;
        }
        throw UsageError("birth function: unknown kind");
    }
};

// dN/dt = B(N) N - d N. The positivity bound is alpha = d because
// f(N) + d N = B(N) N >= 0 for every admissible birth function.
inline DynamicalModel single_species(const BirthFunctionKind& birth, double d) {
    if (!(d > 0.0)) throw UsageError("single-species model requires death rate d > 0");
    switch (birth.kind) {
        case BirthFunctionKind::Kind::exponential:
            if (!(birth.b > d)) {
                throw UsageError("single-species model requires b > d so a positive equilibrium exists");
            }
            break;
        case BirthFunctionKind::Kind::rational:
            if (!(birth.p > birth.q * d)) {
                throw UsageError("single-species model requires p > q*d so a positive equilibrium exists");
            }
            break;
        case BirthFunctionKind::Kind::reciprocal:
            if (!(birth.c < d)) {
                throw UsageError("single-species model requires c < d so the population stays bounded");
            }
            break;
    }

    DynamicalModel model;
    model.name = "single-species";
    model.dim = 1;
    model.alpha = d;
    const bool reciprocal = birth.kind == BirthFunctionKind::Kind::reciprocal;
    model.rhs = [birth, d, reciprocal](const std::vector<double>& y) {
        const double N = y.at(0);
        if (reciprocal && !(N > 0.0)) {
            std::ostringstream msg;
            msg << "single-species reciprocal birth rate is undefined at N = " << N
                << "; states must stay positive";
            throw NumericalError(msg.str());
        }
        return std::vector<double>{birth.value(N) * N - d * N};
    };
    model.analytic_jacobian = [birth, d](const std::vector<double>& y) {
        const double N = y.at(0);
        SquareMatrix J(1);
        switch (birth.kind) {
            case BirthFunctionKind::Kind::exponential:
                J(0, 0) = birth.b * std::exp(-birth.a * N) * (1.0 - birth.a * N) - d;
                break;
            case BirthFunctionKind::Kind::rational: {
                const double Nn = std::pow(N, birth.n);
                const double w = birth.q + Nn;
                J(0, 0) = birth.p * (birth.q + (1.0 - birth.n) * Nn) / (w * w) - d;
                break;
            }
            case BirthFunctionKind::Kind::reciprocal:
                if (!(N > 0.0)) {
                    throw NumericalError("single-species reciprocal birth rate is undefined at N <= 0");
                }
                J(0, 0) = birth.c - d;
                break;
        }
        return J;
    };
    switch (birth.kind) {
        case BirthFunctionKind::Kind::exponential:
            model.known_equilibria = {StateVector{0.0}, StateVector{std::log(birth.b / d) / birth.a}};
            break;
        case BirthFunctionKind::Kind::rational:
            model.known_equilibria = {StateVector{0.0},
                                      StateVector{std::pow(birth.p / d - birth.q, 1.0 / birth.n)}};
            break;
        case BirthFunctionKind::Kind::reciprocal:
            // N = 0 is outside the domain, so only the positive equilibrium
            // is declared.
            model.known_equilibria = {StateVector{birth.A / (d - birth.c)}};
            break;
    }
    model.conservation = ConservationDecl::none();
    model.box_lo = {reciprocal ? 0.01 : 0.0};
    model.box_hi = {10.0};
    return model;
}

// Prey x with linear growth, predator y, Beddington-DeAngelis interaction:
//   dx/dt = x - A x y / (1 + x + y)
//   dy/dt = E x y / (1 + x + y) - D y
// Since y/(1+x+y) < 1, alpha = max{A - 1, D} bounds the negative part.
inline DynamicalModel predator_prey(double A, double D, double E) {
    if (!(A > 0.0) || !(D > 0.0) || !(E > 0.0)) {
        throw UsageError("predator-prey model requires A, D, E > 0");
    }
    if (A == E) {
        throw UsageError(
            "predator-prey model requires A != E; otherwise an equilibrium has an eigenvalue with "
            "vanishing real part and the stability threshold is undefined");
    }

    DynamicalModel model;
    model.name = "predator-prey";
    model.dim = 2;
    model.alpha = std::max(A - 1.0, D);
    model.rhs = [A, D, E](const std::vector<double>& y) {
        const double x = y.at(0);
        const double z = y.at(1);
        const double inter = x * z / (1.0 + x + z);
        return std::vector<double>{x - A * inter, E * inter - D * z};
    };
    model.analytic_jacobian = [A, D, E](const std::vector<double>& y) {
        const double x = y.at(0);
        const double z = y.at(1);
        const double w = 1.0 + x + z;
        const double gx = z * (1.0 + z) / (w * w); // d/dx of xz/w
        const double gz = x * (1.0 + x) / (w * w); // d/dz of xz/w
        SquareMatrix J(2);
        J(0, 0) = 1.0 - A * gx;
        J(0, 1) = -A * gz;
        J(1, 0) = E * gx;
        J(1, 1) = E * gz - D;
        return J;
    };
    model.known_equilibria = {StateVector{0.0, 0.0}};
    // Interior equilibrium from the nullclines A y = 1 + x + y and
    // E x = D (1 + x + y); it is admissible only when both coordinates
    // come out positive.
    if (A * E - A * D - E > 0.0) {
        const double ystar = E / (A * E - A * D - E);
        const double xstar = A * D * ystar / E;
        model.known_equilibria.push_back(StateVector{xstar, ystar});
    }
    model.conservation = ConservationDecl::none();
    model.box_lo = {0.0, 0.0};
    model.box_hi = {10.0, 10.0};
    return model;
}

struct VaccinationParams {
    double Pi = 700.0;       // recruitment
    double beta1 = 1e-4;     // transmission, susceptible
    double beta2 = 1e-6;     // transmission, vaccinated
    double mu = 0.03;        // natural death
    double alpha_star = 0.95; // recovery
    double c = 8.0;          // contact rate
    double xi = 0.95;        // vaccination rate
};

// Basic reproduction number of the vaccination model.
inline double reproduction_number(const VaccinationParams& p) {
    return p.c * p.beta1 * p.Pi / ((p.mu + p.alpha_star) * (p.mu + p.xi)) +
           p.c * p.beta2 * p.Pi * p.xi / (p.mu * (p.mu + p.alpha_star) * (p.mu + p.xi));
}

// Susceptible/vaccinated/infected model with saturated incidence I/(1+I):
//   dS/dt = Pi - c b1 I/(1+I) S - xi S + a* I - mu S
//   dV/dt = xi S - c b2 I/(1+I) V - mu V
//   dI/dt = c b1 I/(1+I) S + c b2 I/(1+I) V - a* I - mu I
// Total population P = S+V+I obeys dP/dt = Pi - mu P, the generalized law.
inline DynamicalModel vaccination(const VaccinationParams& p = {}) {
    if (!(p.Pi > 0.0) || !(p.beta1 > 0.0) || !(p.beta2 > 0.0) || !(p.mu > 0.0) ||
        !(p.alpha_star > 0.0) || !(p.c > 0.0) || !(p.xi > 0.0)) {
        throw UsageError("vaccination model requires all parameters positive");
    }
    const double r0 = reproduction_number(p);
    if (std::abs(r0 - 1.0) <= 1e-9) {
        std::ostringstream msg;
        msg << "vaccination model with reproduction number " << r0
            << ": at 1 the disease-free equilibrium has an eigenvalue with vanishing real part and "
               "the stability threshold is undefined";
        throw UsageError(msg.str());
    }

    DynamicalModel model;
    model.name = "vaccination";
    model.dim = 3;
    model.alpha = std::max({p.c * p.beta1 + p.xi + p.mu, p.c * p.beta2 + p.mu, p.alpha_star + p.mu});
    model.rhs = [p](const std::vector<double>& y) {
        const double S = y.at(0);
        const double V = y.at(1);
        const double I = y.at(2);
        const double inc = I / (1.0 + I);
        const double fS = p.c * p.beta1 * inc * S;
        const double fV = p.c * p.beta2 * inc * V;
        return std::vector<double>{p.Pi - fS - p.xi * S + p.alpha_star * I - p.mu * S,
                                   p.xi * S - fV - p.mu * V,
                                   fS + fV - p.alpha_star * I - p.mu * I};
    };
    model.analytic_jacobian = [p](const std::vector<double>& y) {
        const double S = y.at(0);
        const double V = y.at(1);
        const double I = y.at(2);
        const double inc = I / (1.0 + I);
        const double dinc = 1.0 / ((1.0 + I) * (1.0 + I));
        SquareMatrix J(3);
        J(0, 0) = -p.c * p.beta1 * inc - p.xi - p.mu;
        J(0, 1) = 0.0;
        J(0, 2) = -p.c * p.beta1 * dinc * S + p.alpha_star;
        J(1, 0) = p.xi;
        J(1, 1) = -p.c * p.beta2 * inc - p.mu;
        J(1, 2) = -p.c * p.beta2 * dinc * V;
        J(2, 0) = p.c * p.beta1 * inc;
        J(2, 1) = p.c * p.beta2 * inc;
        J(2, 2) = p.c * p.beta1 * dinc * S + p.c * p.beta2 * dinc * V - p.alpha_star - p.mu;
        return J;
    };
    const double S0 = p.Pi / (p.xi + p.mu);
    model.known_equilibria = {StateVector{S0, p.xi * S0 / p.mu, 0.0}};
    model.conservation = ConservationDecl::gcl(p.Pi, p.mu);
    model.box_lo = {0.0, 0.0, 0.0};
    model.box_hi = {25000.0, 25000.0, 25000.0};
    return model;
}

// Two-compartment susceptible/infected exchange with no demography:
//   dS/dt = gamma I - beta S I,  dI/dt = beta S I - gamma I.
// The two components are written as differences of the same two terms, so the
// sum of the rhs is zero bitwise, not just analytically. The positivity bound
// alpha = max{gamma, beta*M} holds on the operating box [0, M]^2; outside it
// the quadratic term can outrun any linear bound.
inline DynamicalModel sis_dcl(double beta, double gamma, double M = 100.0) {
    if (!(beta > 0.0) || !(gamma > 0.0)) throw UsageError("sis-dcl model requires beta, gamma > 0");
    if (!(M > 0.0)) throw UsageError("sis-dcl model requires a positive operating bound M");

    DynamicalModel model;
    model.name = "sis-dcl";
    model.dim = 2;
    model.alpha = std::max(gamma, beta * M);
    model.rhs = [beta, gamma](const std::vector<double>& y) {
        const double t1 = beta * y.at(0) * y.at(1);
        const double t2 = gamma * y.at(1);
        return std::vector<double>{t2 - t1, t1 - t2};
    };
    model.analytic_jacobian = [beta, gamma](const std::vector<double>& y) {
        const double S = y.at(0);
        const double I = y.at(1);
        SquareMatrix J(2);
        J(0, 0) = -beta * I;
        J(0, 1) = gamma - beta * S;
        J(1, 0) = beta * I;
        J(1, 1) = beta * S - gamma;
        return J;
    };
    model.known_equilibria = {StateVector{0.0, 0.0}};
    model.conservation = ConservationDecl::dcl();
    model.box_lo = {0.0, 0.0};
    model.box_hi = {M, M};
    return model;
}

} // namespace nsfd
