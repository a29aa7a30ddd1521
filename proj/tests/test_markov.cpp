#include "testing.hpp"

#include <random>

#include "oracles.hpp"
#include "rfh/analytics.hpp"
#include "rfh/markov.hpp"

using namespace rfh;

namespace
{
std::vector<std::vector<double>> rows_of(SquareMatrix const& m)
{
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < m.size(); ++i)
        out.emplace_back(m.row(i).begin(), m.row(i).end());
    return out;
}

void check_stationary(BatteryChain const& c)
{
    auto const& P = c.transition;
    auto const& pi = c.steady.distribution;
    double total = 0;
    for (std::size_t j = 0; j < P.size(); ++j)
    {
        double s = 0;
        for (std::size_t i = 0; i < P.size(); ++i)
            s += pi[i] * P(i, j);
        CHECK(std::fabs(s - pi[j]) <= 1e-10);
        total += pi[j];
    }
    CHECK(total == rel(1).epsilon(1e-12));
}
}  // namespace

TEST_SUITE("markov")
{
TEST_CASE("steady state of small chains")
{
    SUBCASE("symmetric two-state chain")
    {
        ZoneProbabilities z;
        z.p_h = 0.5;
        z.p_g = 0.5;
        auto c = build_chain(ChainKind::single_slot, z);
        CHECK(c.transition.size() == 2);
        CHECK(c.steady.distribution[0] == rel(0.5));
        CHECK(c.steady.distribution[1] == rel(0.5));
        CHECK(c.p_transmit == rel(0.25));
    }
    SUBCASE("hand-solved two-state balance")
    {
        auto s = steady_state({{0.7, 0.3}, {0.6, 0.4}});
        CHECK(s.distribution[0] == rel(2.0 / 3).epsilon(1e-14));
        CHECK(s.distribution[1] == rel(1.0 / 3).epsilon(1e-14));
        CHECK_FALSE(s.reducible);
        CHECK_FALSE(s.degenerate);
    }
    SUBCASE("identity is reducible")
    {
        auto s = steady_state({{1, 0}, {0, 1}});
        CHECK(s.reducible);
        CHECK(s.degenerate);
        CHECK(s.distribution == std::vector<double>{1, 0});
    }
    SUBCASE("double-slot against its closed form")
    {
        ZoneProbabilities z;
        z.p_h = 0.0309;
        z.p_2 = 0.0155;
        z.p_1 = z.p_h - z.p_2;
        z.p_g = 0.754;
        auto c = build_chain(ChainKind::double_slot, z);
        CHECK(c.transition.size() == 3);
        CHECK(c.p_full
              == rel(z.p_h / (z.p_h + z.p_g * (1 + z.p_2 / z.p_h)))
                     .epsilon(1e-12));
        check_stationary(c);
    }
}

TEST_CASE("non-stochastic rows are rejected")
{
    CHECK_THROWS_AS(steady_state({{0.5, 0.6}, {0.5, 0.5}}), std::domain_error);
    CHECK_THROWS_AS(steady_state({{1.2, -0.2}, {0.5, 0.5}}), std::domain_error);
    ZoneProbabilities z;
    z.p_h = 0.3;
    z.p_1 = 0.3;
    z.p_2 = 0.3;  // p_1 + p_2 exceeds p_h
    z.p_g = 0.5;
    CHECK_THROWS_AS(build_chain(ChainKind::double_slot, z), std::domain_error);
}

TEST_CASE("reducible inputs from empty sweeps")
{
    ZoneProbabilities z;
    z.p_h = 0;
    z.p_g = 1;
    auto c = build_chain(ChainKind::single_slot, z);
    CHECK(c.steady.reducible);
    CHECK(c.p_transmit == 0);

    z.p_h = 0.2;
    z.p_g = 0;
    c = build_chain(ChainKind::single_slot, z);
    CHECK(c.steady.reducible);
    CHECK(c.p_transmit == 0);
}

TEST_CASE("bounds collapse when the outer annulus vanishes")
{
    ZoneProbabilities z;
    z.p_h = 0.05;
    z.p_1 = 0.05;
    z.p_g = 0.7;
    auto single = build_chain(ChainKind::single_slot, z);
    ZoneProbabilities zd = z;
    auto dbl = build_chain(ChainKind::double_slot, zd);
    auto up = build_chain(ChainKind::multi_upper, z);
    CHECK(up.p_transmit == rel(dbl.p_transmit).epsilon(1e-14));
    CHECK(up.p_transmit == rel(single.p_transmit).epsilon(1e-14));
    CHECK(up.steady.distribution[0]
          == rel(dbl.steady.distribution[0]).epsilon(1e-14));
}

TEST_CASE("random chains against power iteration and balance equations")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    for (int k = 0; k < 200; ++k)
    {
        ZoneProbabilities z;
        z.p_g = u(rng);
        z.p_h = u(rng);
        double a = u(rng);
        double b = u(rng) * (1 - a);
        z.p_1 = z.p_h * a;
        z.p2_prime = z.p_h * b;
        z.p_3 = z.p_h - z.p_1 - z.p2_prime;
        z.p_2 = z.p_h - z.p_1;

        for (auto kind : {ChainKind::single_slot, ChainKind::double_slot,
                          ChainKind::multi_upper, ChainKind::multi_lower})
        {
            CAPTURE(to_string(kind));
            auto c = build_chain(kind, z);
            check_stationary(c);
            auto ref = oracle::power_iterate(rows_of(c.transition), 60);
            for (std::size_t i = 0; i < ref.size(); ++i)
                CHECK(c.steady.distribution[i]
                      == rel(ref[i]).epsilon(1e-9));
            CHECK(c.p_transmit <= z.p_g);
            CHECK(c.p_transmit >= 0);
        }

        double const lower = build_chain(ChainKind::multi_lower, z).p_transmit;
        double const upper = build_chain(ChainKind::multi_upper, z).p_transmit;
        CHECK(lower <= upper);
        double const q = z.p_1 + z.p2_prime;
        CHECK(lower
              == rel(oracle::three_state_full(q, z.p2_prime, z.p_g)
                                 * z.p_g)
                     .epsilon(1e-12));
    }
}
}
