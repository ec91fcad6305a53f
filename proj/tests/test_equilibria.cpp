#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "nsfd/equilibria.hpp"
#include "nsfd/models.hpp"

using namespace nsfd;

namespace {

DynamicalModel scalar_model(std::function<double(double)> f, double alpha = 0.0) {
    DynamicalModel model;
    model.name = "scalar";
    model.dim = 1;
    model.rhs = [f](const std::vector<double>& y) { return std::vector<double>{f(y[0])}; };
    model.alpha = alpha;
    return model;
}

// Companion-style matrix with a prescribed stable spectrum, used to probe the
// continuous-to-discrete eigenvalue map without going through a model.
SquareMatrix stable_matrix(const std::vector<double>& reals,
                           const std::vector<std::pair<double, double>>& pairs) {
    std::size_t n = reals.size() + 2 * pairs.size();
    SquareMatrix a(n);
    std::size_t pos = 0;
    for (double r : reals) a(pos, pos) = r, ++pos;
    for (auto [re, im] : pairs) {
        a(pos, pos) = re;
        a(pos, pos + 1) = im;
        a(pos + 1, pos) = -im;
        a(pos + 1, pos + 1) = re;
        pos += 2;
    }
    return a;
}

double wts(const std::vector<Complex>& lam) {
    double m = 0.0;
    for (const Complex& mu : lam)
        if (mu.real() < 0.0) m = std::max(m, std::norm(mu) / (-2.0 * mu.real()));
    return m;
}

} // namespace

TEST_CASE("equilibrium search on the growth model") {
    const DynamicalModel growth = single_species(BirthFunctionKind::exponential(1.0, 12.0), 1.0);
    const std::vector<StateVector> found =
        find_equilibria(growth, {StateVector{0.5}, StateVector{2.0}, StateVector{5.0}});
    REQUIRE(found.size() == 2);
    CHECK_THAT(found[0][0], Catch::Matchers::WithinAbs(0.0, 1e-10));
    CHECK_THAT(found[1][0], Catch::Matchers::WithinAbs(std::log(12.0), 1e-10));
}

TEST_CASE("equilibrium search on simple fields") {
    const DynamicalModel decay = scalar_model([](double y) { return -y; });
    const std::vector<StateVector> found = find_equilibria(decay, {StateVector{3.0}});
    REQUIRE(found.size() == 1);
    CHECK_THAT(found[0][0], Catch::Matchers::WithinAbs(0.0, 1e-12));

    // No root reachable: f = tanh(y) - 2 has none.
    const DynamicalModel none = scalar_model([](double y) { return std::tanh(y) - 2.0; });
    CHECK(find_equilibria(none, {StateVector{0.0}, StateVector{5.0}}).empty());

    // Singular Jacobian everywhere: the search skips such seeds.
    const DynamicalModel flat = scalar_model([](double) { return 1.0; });
    CHECK(find_equilibria(flat, {StateVector{0.0}}).empty());
}

TEST_CASE("equilibrium search on the predator-prey model") {
    const DynamicalModel pp = predator_prey(6.0, 5.0, 7.0);
    const std::vector<StateVector> found = find_equilibria(pp, {StateVector{5.0, 1.0}});
    bool has_interior = false;
    for (const StateVector& y : found)
        if (inf_distance(y, StateVector{6.0, 1.4}) <= 1e-8) has_interior = true;
    CHECK(has_interior);

    // Default seeds recover every declared equilibrium.
    const std::vector<StateVector> swept = find_equilibria(pp);
    for (const StateVector& star : pp.known_equilibria) {
        bool present = false;
        for (const StateVector& y : swept)
            if (inf_distance(y, star) <= 1e-6) present = true;
        CHECK(present);
    }
}

TEST_CASE("default seed grid") {
    const DynamicalModel pp = predator_prey(6.0, 5.0, 7.0);
    const std::vector<StateVector> seeds = default_seeds(pp);
    CHECK(seeds.size() == 9);
    for (const StateVector& s : seeds) {
        CHECK(s.size() == 2);
        for (double v : s) CHECK((v == 0.0 || v == 5.0 || v == 10.0));
    }
}

TEST_CASE("classification of equilibria") {
    const DynamicalModel pp = predator_prey(6.0, 5.0, 7.0);
    const EquilibriumReport interior = classify(pp, StateVector{6.0, 1.4});
    CHECK(interior.classification == Classification::stable);
    CHECK(interior.hyperbolic);
    REQUIRE(interior.eigenvalues.size() == 2);
    CHECK_THAT(interior.eigenvalues[0].real(), Catch::Matchers::WithinAbs(-5.0 / 84.0, 1e-8));

    const DynamicalModel growth = single_species(BirthFunctionKind::exponential(1.0, 12.0), 1.0);
    CHECK(classify(growth, StateVector{0.0}).classification == Classification::unstable);
    CHECK(classify(growth, StateVector{std::log(12.0)}).classification == Classification::stable);

    const DynamicalModel parabola = scalar_model([](double y) { return y * y; });
    CHECK(classify(parabola, StateVector{0.0}).classification == Classification::non_hyperbolic);
    CHECK_FALSE(classify(parabola, StateVector{0.0}).hyperbolic);

    CHECK_THROWS_AS(classify(growth, StateVector{1.0}), UsageError);

    CHECK(to_string(Classification::stable) == std::string("stable"));
    CHECK(to_string(Classification::unstable) == std::string("unstable"));
    CHECK(to_string(Classification::non_hyperbolic) == std::string("non-hyperbolic"));
}

TEST_CASE("positivity threshold") {
    CHECK(threshold_m_P(1.0) == 1.0);
    CHECK(threshold_m_P(-3.0) == 0.0);
    CHECK(threshold_m_P(0.0) == 0.0);
    CHECK_THAT(threshold_m_P(vaccination().alpha), Catch::Matchers::WithinAbs(0.9808, 1e-12));

    CHECK(threshold_phi_P(1.0) == 1.0);
    CHECK(threshold_phi_P(-1.0) == std::numeric_limits<double>::infinity());
    CHECK(threshold_phi_P(0.0) == std::numeric_limits<double>::infinity());
    CHECK_THAT(threshold_phi_P(5.0), Catch::Matchers::WithinAbs(0.2, 1e-15));
}

TEST_CASE("stability threshold") {
    const DynamicalModel growth = single_species(BirthFunctionKind::exponential(1.0, 12.0), 1.0);
    const double m_growth = threshold_m_S(growth, growth.known_equilibria);
    CHECK_THAT(m_growth, Catch::Matchers::WithinAbs(1.2425, 1e-3));
    CHECK_THAT(m_growth, Catch::Matchers::WithinAbs(std::log(12.0) / 2.0, 1e-9));

    const DynamicalModel pp = predator_prey(6.0, 5.0, 7.0);
    // |lambda|^2 = det = 25/42, -2 Re lambda = 5/42, so the ratio is exactly 5.
    CHECK_THAT(threshold_m_S(pp, pp.known_equilibria), Catch::Matchers::WithinAbs(5.0, 1e-8));

    const DynamicalModel vac = vaccination();
    CHECK_THAT(threshold_m_S(vac, vac.known_equilibria), Catch::Matchers::WithinAbs(0.49, 1e-9));

    // Adding an unstable equilibrium leaves the threshold unchanged.
    const double with_origin = threshold_m_S(growth, growth.known_equilibria);
    const double only_star =
        threshold_m_S(growth, {StateVector{std::log(12.0)}});
    CHECK(with_origin == only_star);

    // No stable equilibrium at all: the threshold degenerates to zero.
    const DynamicalModel up = scalar_model([](double y) { return y; });
    CHECK(threshold_m_S(up, {StateVector{0.0}}) == 0.0);
    CHECK(threshold_phi_S(up, {StateVector{0.0}}) == std::numeric_limits<double>::infinity());

    CHECK_THAT(threshold_phi_S(growth, growth.known_equilibria),
               Catch::Matchers::WithinAbs(0.8049, 1e-3));
    const DynamicalModel two = scalar_model([](double y) { return -2.0 * y; });
    CHECK_THAT(threshold_phi_S(two, {StateVector{0.0}}), Catch::Matchers::WithinAbs(1.0, 1e-9));
    CHECK_THAT(threshold_phi_S(vac, vac.known_equilibria),
               Catch::Matchers::WithinAbs(2.0 / 0.98, 1e-9));
}

TEST_CASE("stability threshold rejects non-hyperbolic equilibria") {
    const DynamicalModel sis = sis_dcl(0.5, 1.0, 100.0);
    try {
        threshold_m_S(sis, sis.known_equilibria);
        FAIL("expected a usage error");
    } catch (const UsageError& e) {
        const std::string what = e.what();
        CHECK(what.find("vanishing real part") != std::string::npos);
        CHECK(what.find("stability threshold") != std::string::npos);
    }
}

TEST_CASE("conservation threshold") {
    CHECK_THAT(threshold_m_GCL(ConservationDecl::gcl(700.0, 0.03)).value(),
               Catch::Matchers::WithinAbs(0.03, 1e-15));
    CHECK(threshold_m_GCL(ConservationDecl::gcl(2.0, 5.0)).value() == 5.0);
    CHECK_FALSE(threshold_m_GCL(ConservationDecl::dcl()).has_value());
    CHECK_FALSE(threshold_m_GCL(ConservationDecl::none()).has_value());

    CHECK_THAT(threshold_phi_GCL(ConservationDecl::gcl(700.0, 0.03)).value(),
               Catch::Matchers::WithinAbs(33.333, 1e-3));
    CHECK(threshold_phi_GCL(ConservationDecl::gcl(1.0, 1.0)).value() == 1.0);
    CHECK_FALSE(threshold_phi_GCL(ConservationDecl::dcl()).has_value());
}

TEST_CASE("combined threshold report") {
    const DynamicalModel vac = vaccination();
    const ThresholdReport report = compute_thresholds(vac, vac.known_equilibria);
    CHECK_THAT(report.m_P, Catch::Matchers::WithinAbs(0.9808, 1e-9));
    CHECK_THAT(report.m_S, Catch::Matchers::WithinAbs(0.49, 1e-9));
    REQUIRE(report.m_GCL.has_value());
    CHECK_THAT(*report.m_GCL, Catch::Matchers::WithinAbs(0.03, 1e-15));
    CHECK_THAT(report.m_required, Catch::Matchers::WithinAbs(0.9808, 1e-9));
    CHECK_THAT(report.phi_P, Catch::Matchers::WithinAbs(1.0196, 1e-3));
    REQUIRE(report.phi_GCL.has_value());
    CHECK_THAT(report.phi_required, Catch::Matchers::WithinAbs(report.phi_P, 1e-15));

    const DynamicalModel growth = single_species(BirthFunctionKind::exponential(1.0, 12.0), 1.0);
    const ThresholdReport g = compute_thresholds(growth, growth.known_equilibria);
    CHECK_FALSE(g.m_GCL.has_value());
    CHECK_FALSE(g.phi_GCL.has_value());
    CHECK_THAT(g.m_required, Catch::Matchers::WithinAbs(std::log(12.0) / 2.0, 1e-9));
    CHECK(g.phi_P == 1.0);
    CHECK_THAT(g.phi_required, Catch::Matchers::WithinAbs(2.0 / std::log(12.0), 1e-9));
}

TEST_CASE("update map linearization") {
    const DynamicalModel growth = single_species(BirthFunctionKind::exponential(1.0, 12.0), 1.0);
    const StateVector star{std::log(12.0)};
    const SquareMatrix jd = discrete_jacobian(growth, star, 1.5, 1.0);
    CHECK_THAT(jd(0, 0), Catch::Matchers::WithinAbs(0.006037340084799836, 1e-12));
    CHECK_THAT(jd(0, 0), Catch::Matchers::WithinAbs(0.00604, 1e-5));

    // Tiny step: the map is close to the identity.
    const SquareMatrix near_id = discrete_jacobian(growth, star, 1.5, 1e-8);
    CHECK_THAT(near_id(0, 0), Catch::Matchers::WithinAbs(1.0, 1e-6));

    const DynamicalModel pp = predator_prey(6.0, 5.0, 7.0);
    const SquareMatrix jpp = discrete_jacobian(pp, StateVector{6.0, 1.4}, 5.1, 1.25);
    CHECK(spectral_radius(eigenvalues(jpp)) < 1.0);

    CHECK_THROWS_AS(discrete_jacobian(growth, star, -2.0, 1.0), UsageError);
    CHECK_THROWS_AS(discrete_jacobian(growth, star, 1.0, 0.0), UsageError);
}

TEST_CASE("weighted update map contracts at and above the stability threshold") {
    const std::vector<SquareMatrix> cases = {
        stable_matrix({-1.0}, {}),
        stable_matrix({-0.5, -3.0}, {}),
        stable_matrix({}, {{-0.1, 2.0}}),
        stable_matrix({-2.0}, {{-0.05, 0.9}}),
        stable_matrix({-0.25, -4.0}, {{-1.0, 5.0}}),
    };
    const std::vector<double> phis = {1e-3, 1e-1, 1.0, 10.0, 1e3};
    for (const SquareMatrix& a : cases) {
        const std::vector<Complex> lam = eigenvalues(a);
        const double m_s = wts(lam);
        for (double extra : {0.0, 0.5, 10.0}) {
            const double m = m_s + extra;
            for (double phi : phis) {
                const double scale = phi / (1.0 + m * phi);
                double rho = 0.0;
                for (const Complex& mu : lam) rho = std::max(rho, std::abs(1.0 + scale * mu));
                CHECK(rho < 1.0 + 1e-12);
            }
        }
    }
}

TEST_CASE("weighted update map preserves instability") {
    // One eigenvalue in the right half plane stays outside the unit circle
    // under 1 + phi/(1 + m phi) * lambda for every admissible weight.
    const std::vector<Complex> lam = {{0.3, 1.0}, {0.3, -1.0}, {-2.0, 0.0}};
    for (double m : {0.0, 1.0, 10.0}) {
        for (double phi : {1e-3, 1e-1, 1.0, 10.0, 1e3}) {
            const double scale = phi / (1.0 + m * phi);
            double rho = 0.0;
            for (const Complex& mu : lam) rho = std::max(rho, std::abs(1.0 + scale * mu));
            CHECK(rho > 1.0);
        }
    }
}
