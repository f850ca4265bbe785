#include <doctest.h>

#include <cstring>
#include <random>

#include "oracles.hpp"
#include "quadlin/expr.hpp"

using namespace quadlin;

TEST_SUITE("expr") {

TEST_CASE("sum parses left-associatively") {
    const Expression e = parse("u00 + u10 + u01");
    const Expression expected =
        Expression::binary(NodeKind::Add,
                           Expression::binary(NodeKind::Add, Expression::variable(Site::u00),
                                              Expression::variable(Site::u10)),
                           Expression::variable(Site::u01));
    CHECK(e.structurally_equal(expected));
}

TEST_CASE("exp family has eight interior nodes") {
    // log, two additions, two products, three exponentials
    const Expression e = parse("log(2*exp(u00) + exp(u10) + 3*exp(u01))");
    CHECK(e.interior_count() == 8);
}

TEST_CASE("unclosed exponent reports position and expectation") {
    try {
        parse("u00 ^ (1/2");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& err) {
        CHECK(err.position() == 10);
        CHECK(err.expected() == "')'");
    }
}

TEST_CASE("unknown identifiers and unbound parameters") {
    CHECK_THROWS_AS(parse("u00 + w"), UnknownIdentifier);
    CHECK_THROWS_AS(parse("u00 + u11"), UnknownIdentifier);
    CHECK_THROWS_AS(parse("a*u00", {{"a", std::nan("")}}), UnboundParam);
    CHECK_NOTHROW(parse("u11 - u00", {}, ParseOptions{true}));
    const Expression e = parse("a*u00", {{"a", 2.5}});
    CHECK(evaluate(e, {2.0, 0.0, 0.0}) == 5.0);
}

TEST_CASE("partials of u00*u10 + u01") {
    const Expression e = parse("u00*u10 + u01");
    const Dual d = eval_with_partials(e, {2, 3, 5});
    CHECK(d.value == 11.0);
    CHECK(d.d[0] == doctest::Approx(3.0));
    CHECK(d.d[1] == doctest::Approx(2.0));
    CHECK(d.d[2] == doctest::Approx(1.0));
    const auto fd = oracle::central_differences(e, {2, 3, 5});
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(fd[i] - d.d[i]) < 1e-6);
}

TEST_CASE("seeding gives unit partials") {
    const Dual d = eval_with_partials(parse("u00"), {0.3, -7.0, 11.0});
    CHECK(d.d == std::array<double, 3>{1.0, 0.0, 0.0});
}

TEST_CASE("log of zero raises at the log node") {
    try {
        eval_with_partials(parse("log(u00)"), {0, 1, 1});
        FAIL("expected DomainError");
    } catch (const DomainError& err) {
        CHECK(err.node() == "log(u00)");
        CHECK(err.point() == std::vector<double>{0, 1, 1});
    }
}

TEST_CASE("overflow and invalid powers raise instead of producing NaN") {
    CHECK_THROWS_AS(evaluate(parse("exp(exp(u00))"), {10.0, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(evaluate(parse("u00^(1/2)"), {-1.0, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(evaluate(parse("u00/(u10-u01)"), {1.0, 2.0, 2.0}), DomainError);
    CHECK_THROWS_AS(evaluate(parse("u00^(-1)"), {0.0, 0.0, 0.0}), DomainError);
}

TEST_CASE("rationality scan") {
    CHECK(classify_rational(parse("u00/(u10+1)")) == Rationality::rational);
    CHECK(classify_rational(parse("log(exp(u00))")) == Rationality::non_rational);
    CHECK(classify_rational(parse("u00 ^ (1/2)")) == Rationality::non_rational);
    CHECK(classify_rational(parse("u00^(-3)")) == Rationality::rational);
}

TEST_CASE("literals are exact rationals") {
    const Expression e = parse("0.1 + 0.2");
    const Node& lhs = e.node(e.node(e.root()).lhs);
    CHECK(lhs.exact == mpq_class(1, 10));
    CHECK(format_decimal(mpq_class(3, 4)) == "0.75");
    // Leading zeros are decimal, not octal.
    CHECK(parse("0.0875").node(parse("0.0875").root()).exact == mpq_class(7, 80));
    CHECK(parse("u00^(010)").node(parse("u00^(010)").root()).exact == 10);
    CHECK(parse("2.5e-3").node(parse("2.5e-3").root()).exact == mpq_class(1, 400));
}

TEST_CASE("negative literal folds into a constant") {
    const Expression e = parse("-3");
    CHECK(e.node(e.root()).kind == NodeKind::Constant);
    CHECK(e.node(e.root()).exact == -3);
    CHECK(parse("-u00").node(parse("-u00").root()).kind == NodeKind::Neg);
}

TEST_CASE("printing then parsing reproduces random trees") {
    std::mt19937_64 rng(20);
    for (int i = 0; i < 1000; ++i) {
        const Expression e = oracle::random_expression(rng, 6);
        const Expression back = parse(e.to_string());
        INFO(e.to_string());
        REQUIRE(back.structurally_equal(e));
    }
}

TEST_CASE("dual partials agree with central differences on random trees") {
    const auto sweep = oracle::derivative_sweep(101, 1000);
    CHECK(sweep.accepted == 1000);
    CHECK(sweep.nan_escapes == 0);
    CHECK(sweep.mismatches == 0);
    CHECK(sweep.worst <= 1e-5);
}

TEST_CASE("evaluation is bit-deterministic") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> coord(0.2, 1.7);
    for (int i = 0; i < 200; ++i) {
        const Expression e = oracle::random_expression(rng, 5);
        const std::array<double, 3> p{coord(rng), coord(rng), coord(rng)};
        try {
            const Dual a = eval_with_partials(e, p);
            const Dual b = eval_with_partials(e, p);
            CHECK(std::memcmp(&a, &b, sizeof(Dual)) == 0);
        } catch (const DomainError&) {
        }
    }
}

}
