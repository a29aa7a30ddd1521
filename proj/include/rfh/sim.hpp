#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rfh/params.hpp"

namespace rfh
{
//---------------------------------------------------------------------------//
// POINT PATTERNS
//---------------------------------------------------------------------------//
struct Vec2
{
    double x = 0;
    double y = 0;
};

enum class Role : std::uint8_t
{
    primary,
    secondary
};

struct Node
{
    Vec2 pos;
    Role role = Role::secondary;
    double battery = 0;   //!< stored energy, at most P_s
    bool active = false;  //!< transmitting in the current slot
};

//! Finite pattern in the square window [-side/2, side/2)^2 (a torus)
struct PointPattern
{
    double side = 0;
    std::vector<Node> nodes;
};

using Rng = std::mt19937_64;

//! Independent stream for one replication
Rng make_stream(std::uint64_t master_seed, std::uint64_t index);

PointPattern
sample_hppp(double density, double side, Role role, Rng& rng);

//! Squared distance with periodic wrap in both coordinates
double torus_distance_sq(Vec2 a, Vec2 b, double side);

//---------------------------------------------------------------------------//
// ESTIMATES
//---------------------------------------------------------------------------//
//! Monte Carlo proportion with a normal-approximation 3-sigma half-width
struct SimEstimate
{
    double mean = 0;
    double half_width = 0;
    std::uint64_t n_samples = 0;
};

/*!
 * Batch-means accumulator for a correlated proportion.
 *
 * Each batch contributes a success count over its trials; the half-width is
 * three standard errors of the ratio estimator across batches, which stays
 * honest when slots within a run are correlated.
 */
class BatchAccumulator
{
  public:
    void add_batch(std::uint64_t successes, std::uint64_t trials);
    void merge(BatchAccumulator const& other);
    SimEstimate estimate() const;

    std::size_t num_batches() const { return batches_.size(); }

  private:
    struct Batch
    {
        std::uint64_t successes;
        std::uint64_t trials;
    };
    std::vector<Batch> batches_;
};

//---------------------------------------------------------------------------//
// CONFIGURATION
//---------------------------------------------------------------------------//
enum class HarvestRule
{
    nearest,      //!< nearest PT only, when within r_h
    sum_in_zone,  //!< every PT within r_h contributes
};

enum class PtActivity
{
    thinning,  //!< each deployed PT accesses the slot independently
    fresh,     //!< an independent HPPP of active PTs every slot
};

enum class InterferenceMode
{
    exact,   //!< active STs from the slotted battery dynamics
    approx,  //!< active STs as an independent HPPP of density p_t lambda_s
};

enum class OutageSide
{
    primary,
    secondary,
    wit,
};

struct SimConfig
{
    double window_side = 0;  //!< 0 selects max(20 r_g, 100)
    std::uint64_t n_slots = 1000;
    std::uint64_t n_replications = 10;
    std::uint64_t master_seed = 1;
    HarvestRule harvest_rule = HarvestRule::nearest;
    PtActivity pt_activity = PtActivity::thinning;
    std::uint64_t batches_per_replication = 10;
    std::int64_t warmup_slots = -1;  //!< negative selects max(10 M, 100)
    unsigned threads = 1;            //!< 0 uses hardware concurrency
};

double resolved_window(SimConfig const& cfg, NetworkParams const& params);
std::uint64_t resolved_warmup(SimConfig const& cfg, NetworkParams const& params);
void validate(SimConfig const& cfg, NetworkParams const& params);

//---------------------------------------------------------------------------//
// SLOT DYNAMICS
//---------------------------------------------------------------------------//
enum class StMode : std::uint8_t
{
    harvesting,
    transmitting,
    idle,
};

struct ModeCounts
{
    std::uint64_t harvesting = 0;
    std::uint64_t transmitting = 0;
    std::uint64_t idle = 0;
};

struct NetworkState
{
    double side = 0;
    PointPattern deployment;  //!< all PTs (used by thinning)
    PointPattern active_pts;  //!< PTs transmitting in the current slot
    PointPattern sts;         //!< STs with battery and transmit marks
    std::vector<StMode> modes;
    ModeCounts counts;
    std::uint64_t slot = 0;
};

// Deploy PTs and STs with empty batteries
NetworkState
initial_state(NetworkParams const& params, SimConfig const& cfg, Rng& rng);

// Draw this slot's active PTs
void draw_pt_activity(NetworkState& state,
                      NetworkParams const& params,
                      PtActivity activity,
                      Rng& rng);

/*!
 * Resolve one slot given the active PTs already in \c state.
 *
 * A full ST outside every guard zone transmits and empties its battery; a
 * full ST inside a guard zone idles. A non-full ST inside a harvesting zone
 * gains eta P_p R^-alpha (capped at P_s); otherwise it idles.
 */
void resolve_slot(NetworkState& state,
                  NetworkParams const& params,
                  HarvestRule rule);

// draw_pt_activity followed by resolve_slot
void step_slot(NetworkState& state,
               NetworkParams const& params,
               SimConfig const& cfg,
               Rng& rng);

//---------------------------------------------------------------------------//
// ESTIMATORS
//---------------------------------------------------------------------------//
// Fraction of (ST, slot) pairs transmitting after warm-up
SimEstimate estimate_p_t(NetworkParams const& params, SimConfig const& cfg);

//! Aggregate ST interference at the origin, one value per measured slot
std::vector<double> interference_samples(NetworkParams const& params,
                                         SimConfig const& cfg,
                                         InterferenceMode mode);

/*!
 * Outage frequency.
 *
 * Approximate mode places the typical receiver at the origin with a
 * dedicated transmitter at the link distance; for the secondary side the
 * PT pattern is rejection-sampled until the dedicated ST is clear of guard
 * zones. Exact mode runs the battery dynamics and scores every active link
 * (each active PT, or each transmitting ST) against all other transmitters.
 */
SimEstimate estimate_outage(NetworkParams const& params,
                            SimConfig const& cfg,
                            OutageSide side,
                            InterferenceMode mode);

//! p_t used for the independent-HPPP surrogate (interval midpoint if bounded)
double surrogate_p_t(NetworkParams const& params);

}  // namespace rfh
