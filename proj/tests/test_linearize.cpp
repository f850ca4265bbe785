#include <doctest.h>

#include <random>

#include "quadlin/linearize.hpp"
#include "quadlin/report.hpp"

using namespace quadlin;

TEST_SUITE("linearize") {

TEST_CASE("sum equation") {
    const auto r = check_conditions(QuadEquation::parse("u00+u10+u01"));
    CHECK(r.passed);
    CHECK(r.A == 1.0);
    CHECK(r.B == 1.0);
    CHECK(r.C == 1.0);
    for (double v : r.residuals) CHECK(v <= 1e-12);
    CHECK(!r.failing_condition);
}

TEST_CASE("exp family constants") {
    const auto r = check_conditions(QuadEquation::parse("log(2*exp(u00)+exp(u10)+3*exp(u01))"));
    CHECK(r.passed);
    CHECK(r.A == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.B == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(r.C == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(std::abs(r.A - r.B * r.C) <= 1e-6 * (1 + std::abs(r.A)));
}

TEST_CASE("product equation fails at condition 2 for every seed") {
    const auto eq = QuadEquation::parse("u00*u10 + u01");
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto r = check_conditions(eq, {200, seed, 1e-7});
        CHECK(!r.passed);
        REQUIRE(r.failing_condition);
        CHECK(*r.failing_condition == 2);
        CHECK(r.residuals[4] > 1e-2);
    }
}

TEST_CASE("u00 + u10*u01 never passes") {
    const auto eq = QuadEquation::parse("u00 + u10*u01");
    std::optional<int> first;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto r = check_conditions(eq, {200, seed, 1e-7});
        CHECK(!r.passed);
        REQUIRE(r.failing_condition);
        if (!first) first = r.failing_condition;
        CHECK(r.failing_condition == first);
    }
}

TEST_CASE("estimates are stable across seeds") {
    const auto eq = QuadEquation::parse("1/(2/u00+1/u10+5/u01)");
    const auto a = check_conditions(eq, {200, 1, 1e-7});
    const auto b = check_conditions(eq, {200, 99, 1e-7});
    REQUIRE(a.passed);
    REQUIRE(b.passed);
    CHECK(std::abs(a.A - b.A) <= 1e-8 * std::abs(a.A));
    CHECK(std::abs(a.B - b.B) <= 1e-8 * std::abs(a.B));
    CHECK(std::abs(a.C - b.C) <= 1e-8 * std::abs(a.C));
}

TEST_CASE("passed implies bounded residuals and nonzero constants") {
    const char* eqs[] = {"u00+u10+u01", "log(exp(u00)+exp(u10)+exp(u01))", "1/(1/u00+1/u10+1/u01)",
                         "u00*u10+u01", "u00+u10*u01", "(u00^2+u10^2+u01^2)^(1/2)"};
    for (const char* text : eqs) {
        const auto r = check_conditions(QuadEquation::parse(text));
        INFO(text);
        if (r.passed) {
            for (double v : r.residuals) CHECK(v <= r.tol);
            CHECK(r.consistency <= r.tol);
            CHECK(r.A != 0.0);
            CHECK(r.B != 0.0);
            CHECK(r.C != 0.0);
        }
    }
}

TEST_CASE("affine detection") {
    const auto c = detect_affine_linear(QuadEquation::parse("2*u00 - u10 + 0.5*u01 + 7"));
    REQUIRE(c);
    CHECK(c->a == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(c->b == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(c->c == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c->d == doctest::Approx(7.0).epsilon(1e-12));

    const auto s = detect_affine_linear(QuadEquation::parse("u00+u10+u01"));
    REQUIRE(s);
    CHECK(s->a == doctest::Approx(1.0));
    CHECK(std::abs(s->d) < 1e-12);

    CHECK(!detect_affine_linear(QuadEquation::parse("log(exp(u00)+exp(u10)+exp(u01))")));
}

TEST_CASE("second difference of the exp equation at the origin") {
    // F(x,0,0) = log(e^x + 2); its second derivative at 0 is 2/9.
    const auto eq = QuadEquation::parse("log(exp(u00)+exp(u10)+exp(u01))");
    const double h = 1e-3;
    const double d2 = (eq(h, 0, 0) - 2 * eq(0, 0, 0) + eq(-h, 0, 0)) / (h * h);
    CHECK(d2 == doctest::Approx(2.0 / 9.0).epsilon(1e-5));
    CHECK(max_second_difference(eq) > 1e-9);
}

TEST_CASE("affine equations pass with matching ratios") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    for (int i = 0; i < 20; ++i) {
        double a, b, c;
        do {
            a = coef(rng), b = coef(rng), c = coef(rng);
        } while (std::abs(a) < 0.1 || std::abs(b) < 0.1 || std::abs(c) < 0.1);
        const double d = coef(rng);
        const std::string text = format_number(a) + "*u00 + " + format_number(b) + "*u10 + " +
                                 format_number(c) + "*u01 + " + format_number(d);
        const auto eq = QuadEquation::parse(text);
        const auto r = check_conditions(eq);
        INFO(text);
        REQUIRE(r.passed);
        CHECK(std::abs(r.A - a / b) <= 1e-8 * std::abs(a / b));
        CHECK(std::abs(r.B - a / c) <= 1e-8 * std::abs(a / c));
        CHECK(std::abs(r.C - c / b) <= 1e-8 * std::abs(c / b));
    }
}

TEST_CASE("flat derivatives are reported") {
    CHECK_THROWS_AS(check_conditions(QuadEquation::parse("u10+u01")), DegenerateDerivative);
}

TEST_CASE("report json") {
    const auto j = to_json(check_conditions(QuadEquation::parse("u00*u10+u01")));
    CHECK(j["passed"] == false);
    CHECK(j["failing_condition"] == 2);
    CHECK(j["residuals"].size() == 6);
    CHECK(j["mode"] == "necessary-conditions");
}

}
