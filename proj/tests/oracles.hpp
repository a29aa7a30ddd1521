#pragma once
// Reference implementations used only by tests. They are written from the
// model definitions without calling into the library.

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle
{
using hp = boost::multiprecision::cpp_bin_float_50;

//! pi (2/a) Gamma(2/a) Gamma(1 - 2/a) at 50 digits
inline double phi(double alpha)
{
    hp const d = hp(2) / hp(alpha);
    hp const v = boost::math::constants::pi<hp>() * d * boost::math::tgamma(d)
                 * boost::math::tgamma(hp(1) - d);
    return static_cast<double>(v);
}

inline double void_prob(double lambda, double r)
{
    hp const pi = boost::math::constants::pi<hp>();
    return static_cast<double>(exp(-pi * hp(r) * hp(r) * hp(lambda)));
}

//---------------------------------------------------------------------------//
// Stationary laws from the balance equations, solved by hand.
//---------------------------------------------------------------------------//
// Two states: pi0 ph = pi1 pg
inline double single_full(double ph, double pg)
{
    return ph / (ph + pg);
}

// Three states [[1-ph, p2, p1], [0, 1-ph, ph], [pg, 0, 1-pg]]:
// pi1 ph = pi0 p2, pi2 pg = pi0 ph  ->  pi = pi0 [1, p2/ph, ph/pg]
inline double double_full(double ph, double p2, double pg)
{
    double const a = p2 / ph;
    double const b = ph / pg;
    return b / (1 + a + b);
}

// Same layout with leave-empty probability q = x + y and move-to-middle x
inline double three_state_full(double q, double x, double pg)
{
    double const a = x / q;
    double const b = q / pg;
    return b / (1 + a + b);
}

//! Row of P^(2^squarings) in long double (reference for small chains)
inline std::vector<double>
power_iterate(std::vector<std::vector<double>> const& P, int squarings)
{
    std::size_t const n = P.size();
    std::vector<std::vector<long double>> m(n, std::vector<long double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m[i][j] = P[i][j];
    for (int it = 0; it < squarings; ++it)
    {
        std::vector<std::vector<long double>> next(
            n, std::vector<long double>(n, 0.0L));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t j = 0; j < n; ++j)
                    next[i][j] += m[i][k] * m[k][j];
        // Rounding in the row sums would otherwise compound with each squaring
        for (auto& row : next)
        {
            long double sum = 0;
            for (auto v : row)
                sum += v;
            for (auto& v : row)
                v /= sum;
        }
        m.swap(next);
    }
    return {m[0].begin(), m[0].end()};
}

//---------------------------------------------------------------------------//
// Throughput optimum by direct root finding on the constraint curves
//---------------------------------------------------------------------------//
struct P1Case
{
    double theta_p, theta_s, d_p, d_s, alpha, power_p, lambda_p, r_g, eps_p,
        eps_s, noise;
};

struct P1Solution
{
    double mu_p, mu_s, p_s, active, throughput;
};

inline P1Solution solve_p1(P1Case const& c)
{
    double const ph = phi(c.alpha);
    double const d = 2 / c.alpha;
    double const mu_p = -std::log(1 - c.eps_p);
    double const mu_s = -std::log((1 - c.eps_s) * void_prob(c.lambda_p, c.r_g));

    // Largest active density allowed by each constraint at power P
    auto f1 = [&](double P) {
        double budget = mu_p - c.theta_p * std::pow(c.d_p, c.alpha) * c.noise
                                   / c.power_p;
        double a = budget / (std::pow(c.theta_p, d) * c.d_p * c.d_p * ph)
                   - c.lambda_p;
        return a * std::pow(P / c.power_p, -d);
    };
    auto f2 = [&](double P) {
        double budget = mu_s - c.theta_s * std::pow(c.d_s, c.alpha) * c.noise / P;
        return budget / (std::pow(c.theta_s, d) * c.d_s * c.d_s * ph)
               - c.lambda_p * std::pow(P / c.power_p, -d);
    };
    auto g = [&](double P) { return f1(P) - f2(P); };

    std::uintmax_t iters = 500;
    auto [lo, hi] = boost::math::tools::toms748_solve(
        g, 1e-9 * c.power_p, c.power_p,
        boost::math::tools::eps_tolerance<double>(52), iters);
    double const p = 0.5 * (lo + hi);
    double const active = f1(p);
    return {mu_p, mu_s, p, active, active * std::log2(1 + c.theta_s)};
}

}  // namespace oracle
