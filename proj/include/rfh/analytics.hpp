#pragma once

#include <cstdint>

#include "rfh/markov.hpp"
#include "rfh/params.hpp"

namespace rfh
{
//---------------------------------------------------------------------------//
/*!
 * Probabilities that a typical ST lies in each charging region.
 *
 * \c p_g: outside every guard zone. \c p_h: inside some harvesting zone.
 * With two-slot charging the harvesting zone splits into the one-slot disk
 * (\c p_1) and the outer annulus (\c p_2). With more slots it splits into
 * the one-slot disk, the half-battery annulus (\c p2_prime) and the rest
 * (\c p_3). Fields of unused regions are exactly zero.
 */
struct ZoneProbabilities
{
    double p_g = 1;
    double p_h = 0;
    double p_1 = 0;
    double p_2 = 0;
    double p2_prime = 0;
    double p_3 = 0;
};

//! Constant of the Rayleigh-faded shot-noise Laplace exponent
double phi(double alpha);

//! Void probability of the guard disk
double p_guard(double lambda_p_active, double r_g);

//! Probability of at least one active PT within r_h
double p_harvest(double lambda_p_active, double r_h);

ZoneProbabilities
zone_probabilities(NetworkParams const& params, ChargingGeometry const& geo);

//---------------------------------------------------------------------------//
/*!
 * ST transmission probability: exact for one- and two-slot charging,
 * otherwise an interval from the over/under-credited chains.
 */
struct TxProbability
{
    enum class Kind
    {
        exact,
        bounds
    };

    Kind kind = Kind::exact;
    double lower = 0;
    double upper = 0;
    std::int64_t m_slots = 1;

    bool is_exact() const { return kind == Kind::exact; }
    //! Exact value; throws std::logic_error for an interval
    double value() const;
    double midpoint() const { return 0.5 * (lower + upper); }
};

TxProbability transmission_probability(NetworkParams const& params);

//! Same with no guard zones (requires r_g == 0)
TxProbability wit_transmission_probability(NetworkParams const& params);

//---------------------------------------------------------------------------//
/*!
 * Closed-form steady-state transmission probabilities.
 *
 * These are written directly from the balance equations and are kept
 * separate from the generic chain solver so each can check the other.
 */
namespace closed_form
{
double single_slot(double p_h, double p_g);
double double_slot(double p_h, double p_2, double p_g);
double multi_upper(double p_h, double p2_prime, double p_3, double p_g);
double multi_lower(double p_1, double p2_prime, double p_g);
}  // namespace closed_form

//---------------------------------------------------------------------------//
struct OutageResult
{
    double tau = 0;
    double probability = 0;
    //! Unclamped value of the approximation (equals probability unless
    //! clamped)
    double raw = 0;
    bool clamped = false;
};

// Exponents; active_density is the density of transmitting STs p_t lambda_s
double tau_primary(NetworkParams const& params, double active_density);
double tau_secondary(NetworkParams const& params, double active_density);
double tau_wit(NetworkParams const& params, double active_density);

OutageResult outage_primary(NetworkParams const& params, double active_density);
OutageResult
outage_secondary(NetworkParams const& params, double active_density);
OutageResult outage_wit(NetworkParams const& params, double active_density);

double spatial_throughput(double p_t, double lambda_s, double theta_s);

//! E[exp(-s I)] for Rayleigh shot noise of an HPPP with the given density
double shot_noise_laplace(double s, double power, double density, double alpha);

}  // namespace rfh
