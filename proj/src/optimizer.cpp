#include "rfh/optimizer.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace rfh
{
namespace
{
constexpr double binding_tolerance = 1e-9;

bool is_binding(double tau, double mu)
{
    return std::fabs(tau - mu) <= binding_tolerance * std::max(1.0, mu);
}

double safe_ratio(double num, double den)
{
    return den > 0 ? num / den : std::numeric_limits<double>::infinity();
}

// Shared tail: evaluate p_t at the optimal power and re-check constraints
OptimizationResult finish_p1(NetworkParams params,
                             double p_s_star,
                             double active_density,
                             double mu_p,
                             double mu_s)
{
    params.power_s = p_s_star;

    OptimizationResult r;
    r.p_s_star = p_s_star;
    r.active_density = active_density;
    r.throughput = spatial_throughput(active_density, 1.0, params.theta_s);
    r.p_t = transmission_probability(params);
    r.lambda_s_lower = safe_ratio(active_density, r.p_t.upper);
    r.lambda_s_upper = safe_ratio(active_density, r.p_t.lower);
    r.lambda_s_recommended = r.lambda_s_lower;
    r.mu_p = mu_p;
    r.mu_s = mu_s;
    r.tau_p = tau_primary(params, active_density);
    r.tau_s = tau_secondary(params, active_density);
    r.primary_binding = is_binding(r.tau_p, mu_p);
    r.secondary_binding = is_binding(r.tau_s, mu_s);

    double const slack = binding_tolerance * std::max(1.0, std::max(mu_p, mu_s));
    if (r.tau_p > mu_p + slack || r.tau_s > mu_s + slack)
        throw std::logic_error("optimum violates an outage constraint");
    return r;
}

double interference_floor(NetworkParams const& p)
{
    return phi(p.alpha) * std::pow(p.theta_p, 2 / p.alpha) * p.d_p * p.d_p
           * p.lambda_p();
}
}  // namespace

//---------------------------------------------------------------------------//
double mu_primary(NetworkParams const& p)
{
    return -std::log1p(-p.eps_p);
}

double mu_secondary(NetworkParams const& p)
{
    // -ln((1 - eps_s) p_g) with p_g = exp(-pi r_g^2 lambda_p)
    return -std::log1p(-p.eps_s) + M_PI * p.r_g * p.r_g * p.lambda_p();
}

double mu_wit(NetworkParams const& p)
{
    return -std::log1p(-p.eps_s);
}

double constraint_primary(NetworkParams const& p, double p_s)
{
    double const d = 2 / p.alpha;
    double const budget = mu_primary(p)
                          - p.theta_p * std::pow(p.d_p, p.alpha) * p.noise
                                / p.power_p;
    double const scale = std::pow(p.theta_p, d) * p.d_p * p.d_p * phi(p.alpha);
    return (budget / scale - p.lambda_p()) * std::pow(p_s / p.power_p, -d);
}

double constraint_secondary(NetworkParams const& p, double p_s)
{
    double const d = 2 / p.alpha;
    double const budget = mu_secondary(p)
                          - p.theta_s * std::pow(p.d_s, p.alpha) * p.noise / p_s;
    double const scale = std::pow(p.theta_s, d) * p.d_s * p.d_s * phi(p.alpha);
    return budget / scale - p.lambda_p() * std::pow(p_s / p.power_p, -d);
}

//---------------------------------------------------------------------------//
OptimizationResult solve_p1_closed_form(NetworkParams const& params)
{
    validate(params);
    if (params.noise != 0)
        throw std::invalid_argument(
            "closed-form optimum requires noise = 0; use the numeric solver");
    if (!(params.power_p > 0))
        throw std::invalid_argument("PT power must be positive");

    double const mu_p = mu_primary(params);
    double const mu_s = mu_secondary(params);
    double const floor = interference_floor(params);
    if (mu_p <= floor)
        throw InfeasibleError("primary constraint unsatisfiable at lambda_s=0");

    double const a = params.alpha;
    double const p_s = params.theta_s / params.theta_p
                       * std::pow(params.d_s / params.d_p, a)
                       * std::pow(mu_s / mu_p, -a / 2) * params.power_p;
    double const active = mu_s * (mu_p - floor)
                          / (std::pow(params.theta_s, 2 / a) * params.d_s
                             * params.d_s * mu_p * phi(a));
    return finish_p1(params, p_s, active, mu_p, mu_s);
}

OptimizationResult
solve_p1_numeric(NetworkParams const& params, BisectionOptions const& opts)
{
    validate(params);
    if (!(params.power_p > 0))
        throw std::invalid_argument("PT power must be positive");

    double const mu_p = mu_primary(params);
    // f1 = coefficient * (P_s/P_p)^(-2/alpha); non-positive means no room
    if (constraint_primary(params, params.power_p) <= 0)
        throw InfeasibleError("primary constraint unsatisfiable at lambda_s=0");

    auto gap = [&](double p_s) {
        return constraint_primary(params, p_s)
               - constraint_secondary(params, p_s);
    };

    double lo = opts.lower_fraction * params.power_p;
    double hi = opts.upper_fraction * params.power_p;
    double const gap_lo = gap(lo);
    double const gap_hi = gap(hi);
    if (!(gap_lo > 0 && gap_hi < 0))
    {
        std::ostringstream os;
        os << "constraints do not intersect in bracket [" << lo << ", " << hi
           << "]: f1-f2 = " << gap_lo << " at low end, " << gap_hi
           << " at high end";
        throw InfeasibleError(os.str());
    }

    for (int i = 0; i < opts.max_iterations; ++i)
    {
        double const mid = 0.5 * (lo + hi);
        double const g = gap(mid);
        if (g == 0)
        {
            lo = hi = mid;
            break;
        }
        (g > 0 ? lo : hi) = mid;
        if (hi - lo <= opts.rel_tolerance * mid)
            break;
    }
    double const p_s = 0.5 * (lo + hi);
    double const active = constraint_primary(params, p_s);
    return finish_p1(params, p_s, active, mu_p, mu_secondary(params));
}

//---------------------------------------------------------------------------//
OptimizationResult solve_p2(NetworkParams const& params)
{
    validate(params);
    if (params.r_g != 0)
        throw std::invalid_argument("sensor-network problem requires r_g = 0");
    if (params.noise != 0)
        throw std::invalid_argument("sensor-network optimum requires noise = 0");
    if (!(params.power_p > 0))
        throw std::invalid_argument("charger power must be positive");

    double const mu = mu_wit(params);
    double const active
        = mu
          / (std::pow(params.theta_s, 2 / params.alpha) * params.d_s
             * params.d_s * phi(params.alpha));

    // Largest single-slot charging power: p_t does not depend on P_s there
    NetworkParams at = params;
    at.power_s = edge_harvest(params);

    OptimizationResult r;
    r.p_s_star = at.power_s;
    r.active_density = active;
    r.throughput = spatial_throughput(active, 1.0, params.theta_s);
    r.p_t = wit_transmission_probability(at);
    r.lambda_s_lower = safe_ratio(active, r.p_t.upper);
    r.lambda_s_upper = safe_ratio(active, r.p_t.lower);
    r.lambda_s_recommended = r.lambda_s_lower;
    r.mu_s = mu;
    r.tau_s = tau_wit(at, active);
    r.secondary_binding = is_binding(r.tau_s, mu);
    r.one_parameter_family = true;
    return r;
}

}  // namespace rfh
