#pragma once

#include <stdexcept>

#include "rfh/analytics.hpp"
#include "rfh/params.hpp"

namespace rfh
{
//! The outage constraints admit no positive ST activity.
class InfeasibleError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//---------------------------------------------------------------------------//
struct OptimizationResult
{
    double p_s_star = 0;
    //! Optimal ST density; lower == upper when p_t(P_s*) is exact
    double lambda_s_lower = 0;
    double lambda_s_upper = 0;
    //! Deployment recommendation: density implied by the upper p_t bound
    double lambda_s_recommended = 0;
    double active_density = 0;  //!< p_t(P_s*) lambda_s*
    double throughput = 0;
    TxProbability p_t;

    double mu_p = 0;  //!< -ln(1 - eps_p); zero for the sensor problem
    double mu_s = 0;  //!< -ln((1 - eps_s) p_g), or -ln(1 - eps_s) without
                      //!< guard zones
    double tau_p = 0;  //!< constraint exponents re-evaluated at the optimum
    double tau_s = 0;
    bool primary_binding = false;
    bool secondary_binding = false;

    //! Every (P_s, lambda_s) with the same p_t lambda_s product is optimal
    bool one_parameter_family = false;
};

double mu_primary(NetworkParams const& params);
double mu_secondary(NetworkParams const& params);
double mu_wit(NetworkParams const& params);

/*!
 * Constraint curves in the (P_s, p_t lambda_s) plane.
 *
 * The primary constraint holds iff p_t lambda_s <= f1(P_s) and the
 * secondary iff p_t lambda_s <= f2(P_s); f1 falls and f2 rises with P_s.
 */
double constraint_primary(NetworkParams const& params, double p_s);
double constraint_secondary(NetworkParams const& params, double p_s);

// Throughput maximization with guard zones and no noise, in closed form
OptimizationResult solve_p1_closed_form(NetworkParams const& params);

struct BisectionOptions
{
    double lower_fraction = 1e-9;  //!< bracket low end, times P_p
    double upper_fraction = 1.0;   //!< bracket high end, times P_p
    int max_iterations = 200;
    double rel_tolerance = 1e-12;
};

// Same problem with noise: bisection on f1(P_s) = f2(P_s)
OptimizationResult
solve_p1_numeric(NetworkParams const& params, BisectionOptions const& opts = {});

// Sensor-network problem (r_g = 0, no noise)
OptimizationResult solve_p2(NetworkParams const& params);

}  // namespace rfh
