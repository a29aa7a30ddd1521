#include "testing.hpp"

#include <cmath>
#include <string>

#include "rfh/params.hpp"

using namespace rfh;

namespace
{
NetworkParams fig9()
{
    NetworkParams p;
    p.alpha = 4;
    p.eta = 0.1;
    p.d_p = p.d_s = 0.5;
    p.r_g = 3;
    p.r_h = 1;
    p.lambda_p_total = 0.01;
    p.lambda_s = 0.1;
    p.power_p = 1;
    p.power_s = 0.1;
    p.theta_p = p.theta_s = 5;
    return p;
}

NetworkParams fig5(double power_s)
{
    NetworkParams p = fig9();
    p.r_g = 4;
    p.r_h = 1.5;
    p.power_p = 2;
    p.power_s = power_s;
    return p;
}

bool mentions(std::vector<std::string> const& v, std::string const& needle)
{
    for (auto const& s : v)
        if (s.find(needle) != std::string::npos)
            return true;
    return false;
}

// Brute-force ceiling: count slots of edge harvest needed to reach P_s
std::int64_t slots_needed(double power_s, double unit)
{
    std::int64_t m = 1;
    while (m * unit < power_s * (1 - 1e-12))
        ++m;
    return m;
}
}  // namespace

TEST_SUITE("params")
{
TEST_CASE("field table")
{
    auto const& names = param_names();
    CHECK(names.size() == 16);
    NetworkParams p;
    for (std::size_t i = 0; i < names.size(); ++i)
    {
        set_param(p, names[i], 0.5 + i);
        CHECK(get_param(p, names[i]) == rel(0.5 + i));
    }
    CHECK_THROWS_AS(get_param(p, "lambda"), std::invalid_argument);
    CHECK_THROWS_AS(set_param(p, "Alpha", 4), std::invalid_argument);
}

TEST_CASE("active PT density is thinned")
{
    NetworkParams p;
    p.lambda_p_total = 0.04;
    p.access_prob = 0.25;
    CHECK(p.lambda_p() == rel(0.01));
}

TEST_CASE("validation")
{
    CHECK(check(fig9()).empty());
    CHECK_NOTHROW(validate(fig9()));

    auto p = fig9();
    p.alpha = 2;
    CHECK(mentions(check(p), "alpha must exceed 2"));

    p = fig9();
    p.r_g = 2;
    p.r_h = 3;
    CHECK(mentions(check(p), "r_h must be smaller than r_g"));
    CHECK_THROWS_AS(validate(p), ValidationError);

    p = fig9();
    p.alpha = 1.5;
    p.eps_p = 1;
    p.lambda_s = -1;
    p.noise = -1;
    auto problems = check(p);
    CHECK(problems.size() >= 4);
    try
    {
        validate(p);
        FAIL("expected ValidationError");
    }
    catch (ValidationError const& e)
    {
        CHECK(e.problems() == problems);
    }

    p = fig9();
    p.noise = NAN;
    CHECK(check(p) == std::vector<std::string>{"noise must be finite"});

    SUBCASE("no guard zones lift the r_h and d_p relations")
    {
        p = fig9();
        p.r_g = 0;
        p.r_h = 5;
        p.d_p = 2;
        CHECK(check(p).empty());
    }
}

TEST_CASE("assumption warnings never fail validation")
{
    auto p = fig9();
    CHECK(assumption_warnings(p).size() == 0);
    p.power_s = 0.9;
    p.d_p = 2.9;
    auto w = assumption_warnings(p);
    CHECK(w.size() == 2);
    CHECK(check(p).empty());
    CHECK(assumption_warnings(p, 1.0).empty());
}

TEST_CASE("charging geometry")
{
    SUBCASE("two-slot example")
    {
        auto g = charging_geometry(fig5(0.05));
        CHECK(g.m_slots == 2);
        REQUIRE(g.h1);
        CHECK(*g.h1 == rel(std::pow(0.25, -0.25)).epsilon(1e-14));
        CHECK(*g.h1 == rel(1.41421).epsilon(1e-5));
        CHECK_FALSE(g.h2);
    }
    SUBCASE("three-slot example")
    {
        auto g = charging_geometry(fig5(0.1));
        CHECK(g.m_slots == 3);
        REQUIRE(g.h1);
        REQUIRE(g.h2);
        CHECK(*g.h1 == rel(1.18921).epsilon(1e-5));
        CHECK(*g.h2 == rel(1.41421).epsilon(1e-5));
        CHECK(*g.h2 == rel(*g.h1 * std::pow(2.0, 0.25)));
    }
    SUBCASE("threshold goes to the smaller M")
    {
        auto p = fig5(0);
        p.power_s = edge_harvest(p);
        CHECK(charging_geometry(p).m_slots == 1);
        p.power_s = 2 * edge_harvest(p);
        CHECK(charging_geometry(p).m_slots == 2);
        p.power_s = std::nextafter(p.power_s, 1.0) * (1 + 1e-9);
        CHECK(charging_geometry(p).m_slots == 3);
    }
    SUBCASE("zero power")
    {
        CHECK_THROWS_WITH_AS(charging_geometry(fig5(0)),
                             "ST power must be positive",
                             std::invalid_argument);
    }
    SUBCASE("agrees with brute-force slot counting")
    {
        auto p = fig5(0.01);
        double const unit = 0.1 * 2 / std::pow(1.5, 4);
        for (double ps = 0.001; ps < 0.5; ps *= 1.07)
        {
            p.power_s = ps;
            CHECK(charging_geometry(p).m_slots == slots_needed(ps, unit));
        }
    }
    SUBCASE("monotone in P_s, P_p and eta")
    {
        auto p = fig5(0.01);
        std::int64_t prev = 0;
        for (double ps = 0.01; ps < 1; ps += 0.01)
        {
            p.power_s = ps;
            auto m = charging_geometry(p).m_slots;
            CHECK(m >= prev);
            prev = m;
        }
        p.power_s = 0.3;
        prev = charging_geometry(p).m_slots;
        for (double pp = 2; pp < 20; pp += 0.5)
        {
            p.power_p = pp;
            auto m = charging_geometry(p).m_slots;
            CHECK(m <= prev);
            prev = m;
        }
        p = fig5(0.3);
        prev = charging_geometry(p).m_slots;
        for (double eta = 0.1; eta < 1; eta += 0.05)
        {
            p.eta = eta;
            auto m = charging_geometry(p).m_slots;
            CHECK(m <= prev);
            prev = m;
        }
    }
}

TEST_CASE("json round trip and strictness")
{
    auto p = fig9();
    p.noise = 1e-7;
    auto text = params_to_json(p);
    CHECK(params_from_json(text) == p);

    CHECK_THROWS_AS(params_from_json("[1,2]"), std::invalid_argument);
    CHECK_THROWS_AS(params_from_json("{not json"), std::invalid_argument);

    auto with_typo = text;
    with_typo.replace(with_typo.find("\"eta\""), 5, "\"etta\"");
    try
    {
        params_from_json(with_typo);
        FAIL("expected ValidationError");
    }
    catch (ValidationError const& e)
    {
        CHECK(mentions(e.problems(), "unknown key 'etta'"));
        CHECK(mentions(e.problems(), "missing key 'eta'"));
    }

    auto invalid = text;
    invalid.replace(invalid.find("\"alpha\":4.0"), 11, "\"alpha\":2.0");
    CHECK_THROWS_AS(params_from_json(invalid), ValidationError);
}
}
