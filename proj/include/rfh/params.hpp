#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rfh
{
//---------------------------------------------------------------------------//
/*!
 * Physical and protocol constants of the coexisting primary and secondary
 * networks.
 *
 * In the wireless-powered sensor setting the same fields describe chargers
 * (primary side) and information transmitters (secondary side), with
 * \c r_g set to zero.
 *
 * All quantities are linear scale in abstract consistent units. The slot
 * duration is one, so per-slot harvested power and stored energy coincide.
 */
struct NetworkParams
{
    double lambda_p_total = 0;  //!< PT deployment density
    double access_prob = 1;     //!< PT per-slot access probability
    double lambda_s = 0;        //!< ST density
    double power_p = 0;         //!< PT transmit power
    double power_s = 0;         //!< ST transmit power
    double alpha = 4;           //!< path-loss exponent
    double eta = 0.1;           //!< harvesting efficiency
    double r_g = 0;             //!< guard-zone radius
    double r_h = 0;             //!< harvesting-zone radius
    double d_p = 0;             //!< PT to PR link distance
    double d_s = 0;             //!< ST to SR link distance
    double noise = 0;           //!< AWGN power
    double theta_p = 1;         //!< PR SINR target
    double theta_s = 1;         //!< SR SINR target
    double eps_p = 0.1;         //!< primary outage constraint
    double eps_s = 0.1;         //!< secondary outage constraint

    //! Density of PTs active in a given slot
    double lambda_p() const { return access_prob * lambda_p_total; }

    bool operator==(NetworkParams const&) const = default;
};

//! Names of every NetworkParams field, in declaration order
std::vector<std::string> const& param_names();

//! Access a field by name; throws std::invalid_argument for unknown names
double get_param(NetworkParams const& params, std::string_view name);
void set_param(NetworkParams& params, std::string_view name, double value);

//---------------------------------------------------------------------------//
//! Raised when parameters violate one or more invariants.
class ValidationError : public std::invalid_argument
{
  public:
    explicit ValidationError(std::vector<std::string> problems);

    std::vector<std::string> const& problems() const { return problems_; }

  private:
    std::vector<std::string> problems_;
};

// Return params unchanged iff every invariant holds
NetworkParams const& validate(NetworkParams const& params);

// Diagnostics for each violated invariant (empty when valid)
std::vector<std::string> check(NetworkParams const& params);

//---------------------------------------------------------------------------//
/*!
 * Soft modelling assumptions ("much smaller than" relations).
 *
 * Each returned string names a relation whose small side exceeds
 * \c ratio times its large side. These never fail validation.
 */
std::vector<std::string>
assumption_warnings(NetworkParams const& params, double ratio = 0.2);

//---------------------------------------------------------------------------//
/*!
 * Derived charging quantities.
 *
 * \c m_slots is the largest number of harvesting slots needed to fill the
 * battery (the harvest at the zone edge is the smallest). \c h1 bounds the
 * region charging a full battery in one slot; \c h2 the region delivering
 * at least half a battery.
 */
struct ChargingGeometry
{
    std::int64_t m_slots = 1;
    std::optional<double> h1;
    std::optional<double> h2;
};

// Minimum per-slot harvest inside a harvesting zone: eta P_p r_h^-alpha
double edge_harvest(NetworkParams const& params);

ChargingGeometry charging_geometry(NetworkParams const& params);

//---------------------------------------------------------------------------//
// JSON configuration: exactly the NetworkParams field names, all required
NetworkParams params_from_json(std::string const& text);
std::string params_to_json(NetworkParams const& params);

}  // namespace rfh
