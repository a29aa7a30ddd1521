#include "rfh/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rfh/analytics.hpp"
#include "rfh/parallel.hpp"

namespace rfh
{
namespace
{
// Relative slack for "battery full" against rounding in the harvest sum
constexpr double full_slack = 1e-12;
constexpr double z_score = 3.0;

constexpr std::uint64_t min_rejection_attempts = 10000;
constexpr double min_acceptance_rate = 1e-4;

//---------------------------------------------------------------------------//
/*!
 * Uniform cell grid over the torus for fixed-radius neighbour queries.
 *
 * Cells are at least \c reach wide, so any point within \c reach of a query
 * lies in the 3x3 block around the query cell.
 */
class PtGrid
{
  public:
    PtGrid(std::vector<Node> const& pts, double side, double reach)
        : side_(side)
    {
        n_ = std::max(1, static_cast<int>(std::floor(side / reach)));
        cell_ = side / n_;
        brute_ = n_ < 3;

        start_.assign(static_cast<std::size_t>(n_) * n_ + 1, 0);
        for (auto const& p : pts)
            ++start_[index(p.pos) + 1];
        for (std::size_t i = 1; i < start_.size(); ++i)
            start_[i] += start_[i - 1];
        pos_.resize(pts.size());
        std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
        for (auto const& p : pts)
            pos_[fill[index(p.pos)]++] = p.pos;
    }

    //! Call f(d2) for every point with squared distance <= radius^2
    template<class F>
    void for_each_within(Vec2 q, double radius, F&& f) const
    {
        double const r2 = radius * radius;
        if (brute_)
        {
            for (auto const& p : pos_)
            {
                double d2 = torus_distance_sq(p, q, side_);
                if (d2 <= r2)
                    f(d2);
            }
            return;
        }
        int const cx = coord(q.x);
        int const cy = coord(q.y);
        for (int dy = -1; dy <= 1; ++dy)
        {
            int const y = (cy + dy + n_) % n_;
            for (int dx = -1; dx <= 1; ++dx)
            {
                int const x = (cx + dx + n_) % n_;
                auto const c = static_cast<std::size_t>(y) * n_ + x;
                for (auto k = start_[c]; k < start_[c + 1]; ++k)
                {
                    double d2 = torus_distance_sq(pos_[k], q, side_);
                    if (d2 <= r2)
                        f(d2);
                }
            }
        }
    }

  private:
    double side_;
    double cell_;
    int n_;
    bool brute_;
    std::vector<std::uint32_t> start_;
    std::vector<Vec2> pos_;

    int coord(double v) const
    {
        int c = static_cast<int>(std::floor((v + 0.5 * side_) / cell_));
        return std::clamp(c, 0, n_ - 1);
    }
    std::size_t index(Vec2 p) const
    {
        return static_cast<std::size_t>(coord(p.y)) * n_ + coord(p.x);
    }
};

Vec2 wrap(Vec2 p, double side)
{
    p.x -= side * std::round(p.x / side);
    p.y -= side * std::round(p.y / side);
    return p;
}

Vec2 random_offset(double length, Rng& rng)
{
    std::uniform_real_distribution<double> angle(0.0, 2 * M_PI);
    double const a = angle(rng);
    return {length * std::cos(a), length * std::sin(a)};
}

double exp_fade(Rng& rng)
{
    return std::exponential_distribution<double>(1.0)(rng);
}

//! Sum of faded received powers at \c rx from \c nodes, skipping one index
double faded_sum(std::vector<Node> const& nodes,
                 Vec2 rx,
                 double power,
                 double alpha,
                 double side,
                 Rng& rng,
                 std::size_t skip = std::numeric_limits<std::size_t>::max())
{
    double sum = 0;
    for (std::size_t j = 0; j < nodes.size(); ++j)
    {
        if (j == skip)
            continue;
        double const d2 = torus_distance_sq(nodes[j].pos, rx, side);
        sum += exp_fade(rng) * power * std::pow(d2, -alpha / 2);
    }
    return sum;
}

bool in_outage(double signal, double interference, double noise, double theta)
{
    return signal < theta * (interference + noise);
}

//! Split n slots into batches; returns the batch index of each slot boundary
std::vector<std::uint64_t> batch_edges(std::uint64_t n, std::uint64_t batches)
{
    std::vector<std::uint64_t> edges(batches + 1);
    for (std::uint64_t b = 0; b <= batches; ++b)
        edges[b] = b * n / batches;
    return edges;
}

/*!
 * Run replications in parallel; \c run(rng, acc) fills one accumulator.
 * Accumulators are merged in replication order.
 */
template<class F>
SimEstimate run_replications(SimConfig const& cfg, F&& run)
{
    std::vector<BatchAccumulator> per_rep(cfg.n_replications);
    parallel_for(per_rep.size(), cfg.threads, [&](std::size_t i) {
        Rng rng = make_stream(cfg.master_seed, i);
        run(rng, per_rep[i]);
    });
    BatchAccumulator total;
    for (auto const& acc : per_rep)
        total.merge(acc);
    auto est = total.estimate();
    if (est.n_samples == 0)
        throw std::runtime_error("simulation produced no samples; enlarge the "
                                 "window or the densities");
    return est;
}

//! Sampled slot loop with batch bookkeeping; \c slot() returns (succ, trials)
template<class F>
void sample_batches(SimConfig const& cfg, BatchAccumulator& acc, F&& slot)
{
    auto const edges = batch_edges(cfg.n_slots, cfg.batches_per_replication);
    for (std::size_t b = 0; b + 1 < edges.size(); ++b)
    {
        std::uint64_t succ = 0;
        std::uint64_t trials = 0;
        for (auto s = edges[b]; s < edges[b + 1]; ++s)
        {
            auto [k, n] = slot();
            succ += k;
            trials += n;
        }
        if (trials > 0)
            acc.add_batch(succ, trials);
    }
}
}  // namespace

//---------------------------------------------------------------------------//
Rng make_stream(std::uint64_t master_seed, std::uint64_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32),
                      0x72666875u};
    return Rng(seq);
}

PointPattern sample_hppp(double density, double side, Role role, Rng& rng)
{
    if (!(density >= 0))
        throw std::invalid_argument("density must be non-negative");
    PointPattern pattern;
    pattern.side = side;
    double const mean = density * side * side;
    if (mean <= 0)
        return pattern;

    auto const count = std::poisson_distribution<std::int64_t>(mean)(rng);
    std::uniform_real_distribution<double> coord(-0.5 * side, 0.5 * side);
    pattern.nodes.resize(static_cast<std::size_t>(count));
    for (auto& n : pattern.nodes)
    {
        n.pos.x = coord(rng);
        n.pos.y = coord(rng);
        n.role = role;
    }
    return pattern;
}

double torus_distance_sq(Vec2 a, Vec2 b, double side)
{
    // Valid for coordinate gaps below 1.5 side; the sign of the wrapped gap
    // is irrelevant once squared
    double const half = 0.5 * side;
    double dx = std::fabs(a.x - b.x);
    double dy = std::fabs(a.y - b.y);
    if (dx > half)
        dx = side - dx;
    if (dy > half)
        dy = side - dy;
    return dx * dx + dy * dy;
}

//---------------------------------------------------------------------------//
void BatchAccumulator::add_batch(std::uint64_t successes, std::uint64_t trials)
{
    if (successes > trials)
        throw std::invalid_argument("more successes than trials");
    batches_.push_back({successes, trials});
}

void BatchAccumulator::merge(BatchAccumulator const& other)
{
    batches_.insert(batches_.end(), other.batches_.begin(),
                    other.batches_.end());
}

SimEstimate BatchAccumulator::estimate() const
{
    SimEstimate est;
    double succ = 0;
    for (auto const& b : batches_)
    {
        succ += static_cast<double>(b.successes);
        est.n_samples += b.trials;
    }
    if (est.n_samples == 0)
        return est;

    double const n = static_cast<double>(est.n_samples);
    est.mean = succ / n;
    std::size_t const k = batches_.size();
    if (k < 2)
    {
        est.half_width = z_score * std::sqrt(est.mean * (1 - est.mean) / n);
        return est;
    }
    // Ratio estimator: variance of sum(x_b - mean n_b) / sum(n_b)
    double const n_bar = n / static_cast<double>(k);
    double ss = 0;
    for (auto const& b : batches_)
    {
        double const r = (static_cast<double>(b.successes)
                          - est.mean * static_cast<double>(b.trials))
                         / n_bar;
        ss += r * r;
    }
    est.half_width
        = z_score * std::sqrt(ss / (static_cast<double>(k) * (k - 1)));
    return est;
}

//---------------------------------------------------------------------------//
double resolved_window(SimConfig const& cfg, NetworkParams const& params)
{
    if (cfg.window_side > 0)
        return cfg.window_side;
    return std::max(20 * params.r_g, 100.0);
}

std::uint64_t resolved_warmup(SimConfig const& cfg, NetworkParams const& params)
{
    if (cfg.warmup_slots >= 0)
        return static_cast<std::uint64_t>(cfg.warmup_slots);
    auto const m = charging_geometry(params).m_slots;
    return static_cast<std::uint64_t>(std::max<std::int64_t>(10 * m, 100));
}

void validate(SimConfig const& cfg, NetworkParams const& params)
{
    validate(params);
    if (cfg.n_slots < 1)
        throw std::invalid_argument("slot count must be at least 1");
    if (cfg.n_replications < 1)
        throw std::invalid_argument("replication count must be at least 1");
    if (cfg.batches_per_replication < 1)
        throw std::invalid_argument("batch count must be at least 1");
    double const side = resolved_window(cfg, params);
    double const reach = std::max({params.r_g, params.r_h, params.d_p,
                                   params.d_s});
    if (!(side >= 4 * reach))
        throw std::invalid_argument(
            "window side must be at least 4 times the largest radius");
}

//---------------------------------------------------------------------------//
NetworkState
initial_state(NetworkParams const& params, SimConfig const& cfg, Rng& rng)
{
    NetworkState state;
    state.side = resolved_window(cfg, params);
    state.deployment.side = state.active_pts.side = state.side;
    if (cfg.pt_activity == PtActivity::thinning)
    {
        state.deployment = sample_hppp(params.lambda_p_total, state.side,
                                       Role::primary, rng);
    }
    state.sts = sample_hppp(params.lambda_s, state.side, Role::secondary, rng);
    state.modes.assign(state.sts.nodes.size(), StMode::idle);
    return state;
}

void draw_pt_activity(NetworkState& state,
                      NetworkParams const& params,
                      PtActivity activity,
                      Rng& rng)
{
    if (activity == PtActivity::fresh)
    {
        state.active_pts = sample_hppp(params.lambda_p(), state.side,
                                       Role::primary, rng);
        return;
    }
    std::bernoulli_distribution access(params.access_prob);
    state.active_pts.side = state.side;
    state.active_pts.nodes.clear();
    for (auto const& pt : state.deployment.nodes)
    {
        if (access(rng))
        {
            state.active_pts.nodes.push_back(pt);
            state.active_pts.nodes.back().active = true;
        }
    }
}

void resolve_slot(NetworkState& state,
                  NetworkParams const& params,
                  HarvestRule rule)
{
    double const capacity = params.power_s;
    double const full = capacity * (1 - full_slack);
    double const gain = params.eta * params.power_p;
    double const half_alpha = params.alpha / 2;
    double const rg2 = params.r_g * params.r_g;
    double const rh2 = params.r_h * params.r_h;
    double const reach = std::max(params.r_g, params.r_h);
    bool const guarded = params.r_g > 0;

    PtGrid const grid(state.active_pts.nodes, state.side, reach);
    state.modes.resize(state.sts.nodes.size());
    state.counts = {};

    for (std::size_t i = 0; i < state.sts.nodes.size(); ++i)
    {
        Node& st = state.sts.nodes[i];
        double nearest2 = std::numeric_limits<double>::infinity();
        bool in_guard = false;
        double summed = 0;
        grid.for_each_within(st.pos, reach, [&](double d2) {
            nearest2 = std::min(nearest2, d2);
            in_guard = in_guard || (guarded && d2 <= rg2);
            if (rule == HarvestRule::sum_in_zone && d2 <= rh2)
                summed += gain * std::pow(d2, -half_alpha);
        });

        StMode mode = StMode::idle;
        st.active = false;
        if (st.battery >= full)
        {
            if (!in_guard)
            {
                st.active = true;
                st.battery = 0;
                mode = StMode::transmitting;
            }
        }
        else if (nearest2 <= rh2)
        {
            double const harvest = rule == HarvestRule::nearest
                                       ? gain * std::pow(nearest2, -half_alpha)
                                       : summed;
            st.battery = std::min(capacity, st.battery + harvest);
            if (st.battery >= full)
                st.battery = capacity;
            mode = StMode::harvesting;
        }

        state.modes[i] = mode;
        switch (mode)
        {
            case StMode::harvesting:
                ++state.counts.harvesting;
                break;
            case StMode::transmitting:
                ++state.counts.transmitting;
                break;
            case StMode::idle:
                ++state.counts.idle;
                break;
        }
    }
}

void step_slot(NetworkState& state,
               NetworkParams const& params,
               SimConfig const& cfg,
               Rng& rng)
{
    draw_pt_activity(state, params, cfg.pt_activity, rng);
    resolve_slot(state, params, cfg.harvest_rule);
    ++state.slot;
}

//---------------------------------------------------------------------------//
double surrogate_p_t(NetworkParams const& params)
{
    return transmission_probability(params).midpoint();
}

SimEstimate estimate_p_t(NetworkParams const& params, SimConfig const& cfg)
{
    validate(cfg, params);
    auto const warmup = resolved_warmup(cfg, params);

    return run_replications(cfg, [&](Rng& rng, BatchAccumulator& acc) {
        auto state = initial_state(params, cfg, rng);
        for (std::uint64_t w = 0; w < warmup; ++w)
            step_slot(state, params, cfg, rng);
        std::uint64_t const n_st = state.sts.nodes.size();
        sample_batches(cfg, acc, [&] {
            step_slot(state, params, cfg, rng);
            return std::pair{state.counts.transmitting, n_st};
        });
    });
}

std::vector<double> interference_samples(NetworkParams const& params,
                                         SimConfig const& cfg,
                                         InterferenceMode mode)
{
    validate(cfg, params);
    std::uint64_t const warmup
        = mode == InterferenceMode::exact ? resolved_warmup(cfg, params) : 0;
    double const density
        = mode == InterferenceMode::approx
              ? surrogate_p_t(params) * params.lambda_s
              : 0.0;
    double const side = resolved_window(cfg, params);
    Vec2 const origin{};

    std::vector<std::vector<double>> per_rep(cfg.n_replications);
    parallel_for(per_rep.size(), cfg.threads, [&](std::size_t r) {
        Rng rng = make_stream(cfg.master_seed, r);
        auto& out = per_rep[r];
        out.reserve(cfg.n_slots);
        if (mode == InterferenceMode::approx)
        {
            for (std::uint64_t s = 0; s < cfg.n_slots; ++s)
            {
                auto active = sample_hppp(density, side, Role::secondary, rng);
                out.push_back(faded_sum(active.nodes, origin, params.power_s,
                                        params.alpha, side, rng));
            }
            return;
        }
        auto state = initial_state(params, cfg, rng);
        for (std::uint64_t w = 0; w < warmup; ++w)
            step_slot(state, params, cfg, rng);
        std::vector<Node> tx;
        for (std::uint64_t s = 0; s < cfg.n_slots; ++s)
        {
            step_slot(state, params, cfg, rng);
            tx.clear();
            for (auto const& st : state.sts.nodes)
            {
                if (st.active)
                    tx.push_back(st);
            }
            out.push_back(faded_sum(tx, origin, params.power_s, params.alpha,
                                    side, rng));
        }
    });

    std::vector<double> samples;
    samples.reserve(cfg.n_slots * cfg.n_replications);
    for (auto const& r : per_rep)
        samples.insert(samples.end(), r.begin(), r.end());
    return samples;
}

//---------------------------------------------------------------------------//
namespace
{
SimEstimate outage_approx(NetworkParams const& params,
                          SimConfig const& cfg,
                          OutageSide side_kind)
{
    double const side = resolved_window(cfg, params);
    double const active_density = surrogate_p_t(params) * params.lambda_s;
    double const lambda_p = params.lambda_p();
    double const alpha = params.alpha;
    double const rg2 = params.r_g * params.r_g;
    Vec2 const origin{};

    return run_replications(cfg, [&](Rng& rng, BatchAccumulator& acc) {
        std::uint64_t attempts = 0;
        std::uint64_t accepted = 0;
        sample_batches(cfg, acc, [&]() -> std::pair<std::uint64_t, std::uint64_t> {
            auto sts = sample_hppp(active_density, side, Role::secondary, rng);
            double const i_s = faded_sum(sts.nodes, origin, params.power_s,
                                         alpha, side, rng);
            if (side_kind == OutageSide::primary)
            {
                auto pts = sample_hppp(lambda_p, side, Role::primary, rng);
                double const i_p = faded_sum(pts.nodes, origin, params.power_p,
                                             alpha, side, rng);
                double const signal = exp_fade(rng) * params.power_p
                                      * std::pow(params.d_p, -alpha);
                return {in_outage(signal, i_p + i_s, params.noise,
                                  params.theta_p),
                        1};
            }

            Vec2 const tagged = random_offset(params.d_s, rng);
            double i_p = 0;
            if (side_kind == OutageSide::secondary)
            {
                // Rejection-sample the PT pattern on the tagged ST being
                // clear of every guard zone
                PointPattern pts;
                for (;;)
                {
                    ++attempts;
                    pts = sample_hppp(lambda_p, side, Role::primary, rng);
                    bool clear = std::none_of(
                        pts.nodes.begin(), pts.nodes.end(), [&](Node const& n) {
                            return torus_distance_sq(n.pos, tagged, side) <= rg2;
                        });
                    if (clear)
                    {
                        ++accepted;
                        break;
                    }
                    if (attempts >= min_rejection_attempts
                        && static_cast<double>(accepted)
                               < min_acceptance_rate
                                     * static_cast<double>(attempts))
                    {
                        throw std::runtime_error("conditioning event too rare");
                    }
                }
                i_p = faded_sum(pts.nodes, origin, params.power_p, alpha, side,
                                rng);
            }
            double const signal = exp_fade(rng) * params.power_s
                                  * std::pow(params.d_s, -alpha);
            return {in_outage(signal, i_p + i_s, params.noise, params.theta_s),
                    1};
        });
    });
}

SimEstimate outage_exact(NetworkParams const& params,
                         SimConfig const& cfg,
                         OutageSide side_kind)
{
    auto const warmup = resolved_warmup(cfg, params);
    double const alpha = params.alpha;

    return run_replications(cfg, [&](Rng& rng, BatchAccumulator& acc) {
        auto state = initial_state(params, cfg, rng);
        double const side = state.side;
        for (std::uint64_t w = 0; w < warmup; ++w)
            step_slot(state, params, cfg, rng);

        std::vector<Node> tx;
        sample_batches(cfg, acc, [&]() -> std::pair<std::uint64_t, std::uint64_t> {
            step_slot(state, params, cfg, rng);
            tx.clear();
            for (auto const& st : state.sts.nodes)
            {
                if (st.active)
                    tx.push_back(st);
            }
            auto const& pts = state.active_pts.nodes;
            std::uint64_t outages = 0;

            if (side_kind == OutageSide::primary)
            {
                for (std::size_t k = 0; k < pts.size(); ++k)
                {
                    Vec2 o = random_offset(params.d_p, rng);
                    Vec2 rx = wrap({pts[k].pos.x + o.x, pts[k].pos.y + o.y},
                                   side);
                    double const i = faded_sum(pts, rx, params.power_p, alpha,
                                               side, rng, k)
                                     + faded_sum(tx, rx, params.power_s, alpha,
                                                 side, rng);
                    double const signal = exp_fade(rng) * params.power_p
                                          * std::pow(params.d_p, -alpha);
                    outages += in_outage(signal, i, params.noise,
                                         params.theta_p);
                }
                return {outages, pts.size()};
            }

            for (std::size_t k = 0; k < tx.size(); ++k)
            {
                Vec2 o = random_offset(params.d_s, rng);
                Vec2 rx = wrap({tx[k].pos.x + o.x, tx[k].pos.y + o.y}, side);
                double i = faded_sum(tx, rx, params.power_s, alpha, side, rng,
                                     k);
                if (side_kind == OutageSide::secondary)
                    i += faded_sum(pts, rx, params.power_p, alpha, side, rng);
                double const signal = exp_fade(rng) * params.power_s
                                      * std::pow(params.d_s, -alpha);
                outages += in_outage(signal, i, params.noise, params.theta_s);
            }
            return {outages, tx.size()};
        });
    });
}
}  // namespace

SimEstimate estimate_outage(NetworkParams const& params,
                            SimConfig const& cfg,
                            OutageSide side,
                            InterferenceMode mode)
{
    validate(cfg, params);
    if (side == OutageSide::wit && params.r_g != 0)
        throw std::invalid_argument("WIT outage requires r_g = 0");
    if (side == OutageSide::secondary && !(params.r_g > 0))
        throw std::invalid_argument(
            "secondary outage requires guard zones; use the WIT side");
    if (!(params.power_p > 0 && params.power_s > 0))
        throw std::invalid_argument("transmit powers must be positive");

    return mode == InterferenceMode::approx ? outage_approx(params, cfg, side)
                                            : outage_exact(params, cfg, side);
}

}  // namespace rfh
