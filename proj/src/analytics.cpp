#include "rfh/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rfh
{
namespace
{
void require_positive_powers(NetworkParams const& p)
{
    if (!(p.power_p > 0))
        throw std::invalid_argument("PT power must be positive");
    if (!(p.power_s > 0))
        throw std::invalid_argument("ST power must be positive");
}

void require_density(double active_density)
{
    if (!(active_density >= 0))
        throw std::invalid_argument("active ST density must be non-negative");
}
}  // namespace

//---------------------------------------------------------------------------//
double phi(double alpha)
{
    if (!(alpha > 2))
        throw std::domain_error("alpha must exceed 2");
    // pi d Gamma(d) Gamma(1-d) with d = 2/alpha, via the reflection formula
    double const d = 2 / alpha;
    double const s = d > 0.5 ? std::sin(M_PI * (1 - d)) : std::sin(M_PI * d);
    return M_PI * M_PI * d / s;
}

double p_guard(double lambda_p_active, double r_g)
{
    return std::exp(-M_PI * r_g * r_g * lambda_p_active);
}

double p_harvest(double lambda_p_active, double r_h)
{
    return -std::expm1(-M_PI * r_h * r_h * lambda_p_active);
}

ZoneProbabilities
zone_probabilities(NetworkParams const& params, ChargingGeometry const& geo)
{
    double const lambda = params.lambda_p();
    double const a = M_PI * lambda;

    ZoneProbabilities z;
    z.p_g = p_guard(lambda, params.r_g);
    z.p_h = p_harvest(lambda, params.r_h);
    if (geo.m_slots == 2)
    {
        double const h1 = geo.h1.value();
        z.p_1 = -std::expm1(-a * h1 * h1);
        z.p_2 = std::exp(-a * h1 * h1) - std::exp(-a * params.r_h * params.r_h);
    }
    else if (geo.m_slots > 2)
    {
        double const h1 = geo.h1.value();
        double const h2 = geo.h2.value();
        z.p_1 = -std::expm1(-a * h1 * h1);
        z.p2_prime = std::exp(-a * h1 * h1) - std::exp(-a * h2 * h2);
        z.p_3 = std::exp(-a * h2 * h2) - std::exp(-a * params.r_h * params.r_h);
    }
    return z;
}

//---------------------------------------------------------------------------//
double TxProbability::value() const
{
    if (!is_exact())
        throw std::logic_error("transmission probability is only bounded");
    return lower;
}

TxProbability transmission_probability(NetworkParams const& params)
{
    auto const geo = charging_geometry(params);
    auto const zones = zone_probabilities(params, geo);

    TxProbability result;
    result.m_slots = geo.m_slots;
    if (geo.m_slots <= 2)
    {
        auto kind = geo.m_slots == 1 ? ChainKind::single_slot
                                     : ChainKind::double_slot;
        result.kind = TxProbability::Kind::exact;
        result.lower = result.upper = build_chain(kind, zones).p_transmit;
    }
    else
    {
        result.kind = TxProbability::Kind::bounds;
        result.lower = build_chain(ChainKind::multi_lower, zones).p_transmit;
        result.upper = build_chain(ChainKind::multi_upper, zones).p_transmit;
    }
    return result;
}

TxProbability wit_transmission_probability(NetworkParams const& params)
{
    if (params.r_g != 0)
        throw std::invalid_argument("WIT setting requires r_g = 0");
    return transmission_probability(params);
}

//---------------------------------------------------------------------------//
namespace closed_form
{
double single_slot(double p_h, double p_g)
{
    if (p_h == 0 || p_g == 0)
        return 0;
    return p_h / (p_h + p_g) * p_g;
}

double double_slot(double p_h, double p_2, double p_g)
{
    if (p_h == 0 || p_g == 0)
        return 0;
    return p_h / (p_h + p_g * (1 + p_2 / p_h)) * p_g;
}

double multi_upper(double p_h, double p2_prime, double p_3, double p_g)
{
    if (p_h == 0 || p_g == 0)
        return 0;
    return p_h / (p_h + p_g * (1 + (p2_prime + p_3) / p_h)) * p_g;
}

double multi_lower(double p_1, double p2_prime, double p_g)
{
    double const q = p_1 + p2_prime;
    if (q == 0 || p_g == 0)
        return 0;
    return q / (q + p_g * (1 + p2_prime / q)) * p_g;
}
}  // namespace closed_form

//---------------------------------------------------------------------------//
double tau_primary(NetworkParams const& p, double active_density)
{
    require_positive_powers(p);
    require_density(active_density);
    double const d = 2 / p.alpha;
    double const interferers
        = p.lambda_p() + active_density * std::pow(p.power_s / p.power_p, d);
    return interferers * std::pow(p.theta_p, d) * p.d_p * p.d_p * phi(p.alpha)
           + p.theta_p * std::pow(p.d_p, p.alpha) * p.noise / p.power_p;
}

double tau_secondary(NetworkParams const& p, double active_density)
{
    require_positive_powers(p);
    require_density(active_density);
    double const d = 2 / p.alpha;
    double interferers = active_density;
    if (p.lambda_p() > 0)
        interferers += p.lambda_p() * std::pow(p.power_s / p.power_p, -d);
    return interferers * std::pow(p.theta_s, d) * p.d_s * p.d_s * phi(p.alpha)
           + p.theta_s * std::pow(p.d_s, p.alpha) * p.noise / p.power_s;
}

double tau_wit(NetworkParams const& p, double active_density)
{
    if (!(p.power_s > 0))
        throw std::invalid_argument("ST power must be positive");
    require_density(active_density);
    double const d = 2 / p.alpha;
    return std::pow(p.theta_s, d) * p.d_s * p.d_s * phi(p.alpha)
               * active_density
           + p.theta_s * std::pow(p.d_s, p.alpha) * p.noise / p.power_s;
}

OutageResult outage_primary(NetworkParams const& p, double active_density)
{
    OutageResult r;
    r.tau = tau_primary(p, active_density);
    r.probability = r.raw = -std::expm1(-r.tau);
    return r;
}

OutageResult outage_secondary(NetworkParams const& p, double active_density)
{
    double const pg = p_guard(p.lambda_p(), p.r_g);
    if (!(pg > 0))
        throw std::domain_error("guard zones cover the plane");

    OutageResult r;
    r.tau = tau_secondary(p, active_density);
    // Outage given the tagged ST is clear of guard zones, taking outage as
    // certain whenever a PT sits inside its guard disk
    r.raw = 1 - std::exp(-r.tau) / pg;
    r.probability = std::clamp(r.raw, 0.0, 1.0);
    r.clamped = r.probability != r.raw;
    return r;
}

OutageResult outage_wit(NetworkParams const& p, double active_density)
{
    OutageResult r;
    r.tau = tau_wit(p, active_density);
    r.probability = r.raw = -std::expm1(-r.tau);
    return r;
}

double spatial_throughput(double p_t, double lambda_s, double theta_s)
{
    return p_t * lambda_s * std::log2(1 + theta_s);
}

double shot_noise_laplace(double s, double power, double density, double alpha)
{
    return std::exp(-std::pow(power * s, 2 / alpha) * density * phi(alpha));
}

}  // namespace rfh
