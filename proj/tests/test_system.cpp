#include "doctest.h"

#include "kinkforge/errors.hpp"
#include "kinkforge/system/system.hpp"

using namespace kinkforge;
using namespace kinkforge::system;
using algebra::parse_poly;
using algebra::parse_ratfunc;

TEST_CASE("make_system expands the family") {
    const auto bz = make_system({1, 1, 1, 1, 1}, std::nullopt);
    CHECK(bz.rhs[0] == parse_poly("U - U^2 - U*theta"));
    CHECK(bz.rhs[1] == parse_poly("-B*U*theta"));

    const auto a = make_system({1, 2, 2, 2, 1}, std::nullopt);
    CHECK(a.rhs[0] == parse_poly("U - U^3 - U*theta^2"));
    CHECK(a.rhs[1] == parse_poly("-B*U^2*theta"));

    const auto b = make_system({2, 1, 1, 2, 1}, std::nullopt);
    CHECK(b.rhs[0] == parse_poly("U^2 - U^3 - U^2*theta"));
    CHECK(b.rhs[1] == parse_poly("-B*U^2*theta"));
}

TEST_CASE("make_system rejects B = 0 and zero exponents") {
    CHECK_THROWS_AS(make_system({1, 1, 1, 1, 1}, Rational(0)), InvalidParameter);
    CHECK_THROWS_AS(make_system({0, 1, 1, 1, 1}, std::nullopt), InvalidParameter);
    CHECK_THROWS_AS(make_system({1, 1, 1, 1, 0}, Rational(2)), InvalidParameter);
}

TEST_CASE("bound B is substituted by rhs_bound") {
    const auto s = make_system({1, 1, 1, 1, 1}, Rational(3, 2));
    CHECK(s.rhs_bound(1) == parse_poly("-3/2*U*theta"));
    CHECK(with_B(s, std::nullopt).rhs_bound(1) == parse_poly("-B*U*theta"));
}

TEST_CASE("canonical form is idempotent") {
    for (const auto& alias : builtin_aliases()) {
        const auto s = builtin_system(alias, std::nullopt);
        for (int i = 0; i < s.components(); ++i) CHECK(parse_poly(s.rhs[i].to_string()) == s.rhs[i]);
    }
}

TEST_CASE("system spec documents") {
    const auto bz1 = parse_system_spec(R"({"builtin": "bz", "B": "1"})");
    const auto ref = make_system({1, 1, 1, 1, 1}, Rational(1));
    CHECK(bz1.rhs_bound(0) == ref.rhs_bound(0));
    CHECK(bz1.rhs_bound(1) == ref.rhs_bound(1));

    CHECK_THROWS_AS(parse_system_spec(R"({"builtin": "bz", "B": "0"})"), InvalidParameter);
    CHECK_THROWS_AS(parse_system_spec(R"({"family": {"l": 1}, "B": "0"})"), Error);
    CHECK_THROWS_AS(parse_system_spec("{not json"), ParseError);
    CHECK_THROWS_AS(builtin_system("nope", std::nullopt), InvalidParameter);

    SUBCASE("emit and parse round-trip") {
        for (const auto& alias : builtin_aliases())
            for (const auto& B : {std::optional<Rational>{}, std::optional<Rational>{Rational(7, 3)}}) {
                const auto s = builtin_system(alias, B);
                const std::string text = emit_system_spec(s);
                const auto back = parse_system_spec(text);
                CHECK(emit_system_spec(back) == text);
                CHECK(back.scalar == s.scalar);
                CHECK(back.B == s.B);
                for (int i = 0; i < s.components(); ++i) CHECK(back.rhs_bound(i) == s.rhs_bound(i));
            }
    }
}

TEST_CASE("traveling-wave reduction") {
    SUBCASE("KPP with a = l, b = l*p") {
        const auto ode = reduce_to_traveling_ode(kpp_system(), {parse_ratfunc("l"), parse_ratfunc("l*p"), Rational(0)});
        REQUIRE(ode.equations.size() == 1);
        CHECK(ode.equations[0] == parse_ratfunc("l*p*chi1_1 - l^2*chi1_2 - chi1 + chi1^2"));
    }
    SUBCASE("system (1,1,1,1,1) with a = 1, b = 0") {
        const auto ode = reduce_to_traveling_ode(make_system({1, 1, 1, 1, 1}, std::nullopt), {1, 0, Rational(0)});
        REQUIRE(ode.equations.size() == 2);
        CHECK(ode.equations[0] == parse_ratfunc("-chi1_2 - chi1*(1 - chi1 - chi2)"));
        CHECK(ode.equations[1] == parse_ratfunc("-chi2_2 + B*chi1*chi2"));
    }
    SUBCASE("a = 0 is rejected") {
        CHECK_THROWS_AS(reduce_to_traveling_ode(kpp_system(), {0, 1, Rational(0)}), InvalidParameter);
        CHECK_THROWS_AS((PhaseConstants{0, 1, Rational(0)}.p()), InvalidParameter);
    }
    SUBCASE("reduction commutes with substituting numeric a, b") {
        const auto sys = make_system({1, 2, 1, 2, 1}, std::nullopt);
        const std::map<std::string, algebra::Rational> vals = {{"a", Rational(3, 2)}, {"b", Rational(-5, 7)}};
        const auto sym = reduce_to_traveling_ode(sys, {parse_ratfunc("a"), parse_ratfunc("b"), Rational(0)});
        const auto num = reduce_to_traveling_ode(sys, {Rational(3, 2), Rational(-5, 7), Rational(0)});
        for (std::size_t i = 0; i < sym.equations.size(); ++i) CHECK(sym.equations[i].substitute(vals) == num.equations[i]);
    }
}
