#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "nsfd/model.hpp"
#include "nsfd/models.hpp"
#include "nsfd/state.hpp"

using namespace nsfd;

TEST_CASE("state vectors reject non-finite entries") {
    CHECK_THROWS_AS(StateVector{std::numeric_limits<double>::quiet_NaN()}, UsageError);
    CHECK_THROWS_AS((StateVector{1.0, std::numeric_limits<double>::infinity()}), UsageError);
    CHECK_THROWS_AS(StateVector(std::vector<double>{-std::numeric_limits<double>::infinity()}),
                    UsageError);
    const StateVector ok{1.0, -2.5, 0.0};
    CHECK(ok.size() == 3);
    CHECK(ok[1] == -2.5);
}

TEST_CASE("state vector helpers") {
    CHECK(StateVector::zeros(4).size() == 4);
    CHECK((StateVector::zeros(2) == StateVector{0.0, 0.0}));
    CHECK(inf_norm(StateVector{1.0, -3.0, 2.0}) == 3.0);
    CHECK(inf_norm(StateVector()) == 0.0);
    CHECK(inf_distance(StateVector{1.0, 2.0}, StateVector{0.5, 4.0}) == 2.0);
    CHECK_THROWS_AS(inf_distance(StateVector{1.0}, StateVector{1.0, 2.0}), UsageError);
}

TEST_CASE("conservation declarations validate their parameters") {
    CHECK(ConservationDecl::none().kind == ConservationDecl::Kind::none);
    CHECK(ConservationDecl::dcl().effective_kind() == ConservationDecl::Kind::dcl);
    const ConservationDecl g = ConservationDecl::gcl(700.0, 0.03);
    CHECK(g.a1 == 700.0);
    CHECK(g.b1 == 0.03);
    CHECK_THROWS_AS(ConservationDecl::gcl(0.0, 1.0), UsageError);
    CHECK_THROWS_AS(ConservationDecl::gcl(1.0, -2.0), UsageError);
    CHECK_THROWS_AS(ConservationDecl::scl_dcl({0}), UsageError);
    const ConservationDecl s = ConservationDecl::scl_gcl({0, 2}, 1.0, 2.0);
    CHECK(s.effective_kind() == ConservationDecl::Kind::gcl);
    CHECK(ConservationDecl::scl_dcl({1, 2}).effective_kind() == ConservationDecl::Kind::dcl);
}

TEST_CASE("eval_rhs on the stock models") {
    const DynamicalModel growth = single_species(BirthFunctionKind::exponential(1.0, 12.0), 1.0);
    const StateVector f = eval_rhs(growth, StateVector{2.0});
    REQUIRE(f.size() == 1);
    CHECK_THAT(f[0], Catch::Matchers::WithinAbs(12.0 * std::exp(-2.0) * 2.0 - 2.0, 1e-14));
    CHECK_THAT(f[0], Catch::Matchers::WithinAbs(1.248047, 1e-6));

    // Declared equilibria are roots of the rhs.
    for (const StateVector& star : growth.known_equilibria) {
        CHECK(inf_norm(eval_rhs(growth, star)) <= 1e-10 * (1.0 + inf_norm(star)));
    }
    const DynamicalModel pp = predator_prey(6.0, 5.0, 7.0);
    CHECK(inf_norm(eval_rhs(pp, StateVector{6.0, 1.4})) <= 1e-10);
}

TEST_CASE("eval_rhs error paths") {
    const DynamicalModel growth = single_species(BirthFunctionKind::exponential(1.0, 12.0), 1.0);
    CHECK_THROWS_AS(eval_rhs(growth, StateVector{1.0, 2.0}), UsageError);

    DynamicalModel bad;
    bad.name = "blowup";
    bad.dim = 1;
    bad.rhs = [](const std::vector<double>& y) {
        return std::vector<double>{1.0 / (y[0] - y[0])}; // always inf/nan
    };
    try {
        eval_rhs(bad, StateVector{3.0});
        FAIL("expected a numerical error");
    } catch (const NumericalError& e) {
        const std::string what = e.what();
        CHECK(what.find("blowup") != std::string::npos);
        CHECK(what.find("(3)") != std::string::npos);
    }

    DynamicalModel short_rhs;
    short_rhs.name = "short";
    short_rhs.dim = 2;
    short_rhs.rhs = [](const std::vector<double>&) { return std::vector<double>{0.0}; };
    CHECK_THROWS_AS(eval_rhs(short_rhs, StateVector{1.0, 2.0}), UsageError);
}

TEST_CASE("eval_rhs is deterministic") {
    const DynamicalModel pp = predator_prey(6.0, 5.0, 7.0);
    const StateVector y{1.25, 0.75};
    const StateVector a = eval_rhs(pp, y);
    const StateVector b = eval_rhs(pp, y);
    CHECK(a == b);
}

TEST_CASE("positivity bound check flags violations only below the slack") {
    const DynamicalModel growth = single_species(BirthFunctionKind::exponential(1.0, 12.0), 1.0);
    std::vector<StateVector> grid;
    for (double x = 0.0; x <= 10.0; x += 0.5) grid.push_back(StateVector{x});
    CHECK(check_condition_C1(growth, grid).ok());

    DynamicalModel shrink;
    shrink.name = "shrink";
    shrink.dim = 1;
    shrink.rhs = [](const std::vector<double>& y) { return std::vector<double>{-2.0 * y[0]}; };
    shrink.alpha = 1.0; // too small: f + y = -y < 0 for y > 0
    const ConditionReport report = check_condition_C1(shrink, {StateVector{1.0}});
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0] == StateVector{1.0});

    CHECK_THROWS_AS(check_condition_C1(shrink, {StateVector{-1.0}}), UsageError);
}

TEST_CASE("tracked population sums") {
    CHECK(total_population(StateVector{1.0, 2.0, 3.0}, ConservationDecl::dcl()) == 6.0);
    CHECK(total_population(StateVector{5000.0, 20000.0, 1000.0}, ConservationDecl::gcl(700.0, 0.03)) ==
          26000.0);
    // Subset law over the second and third components.
    CHECK(total_population(StateVector{1.0, 2.0, 3.0, 4.0}, ConservationDecl::scl_dcl({1, 2})) == 5.0);
    CHECK_THROWS_AS(total_population(StateVector{1.0, 2.0}, ConservationDecl::scl_dcl({0, 5})),
                    UsageError);
}
