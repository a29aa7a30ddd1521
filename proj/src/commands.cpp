#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <stdexcept>

#include "rfh/analytics.hpp"
#include "rfh/cli.hpp"
#include "rfh/optimizer.hpp"
#include "rfh/parallel.hpp"

namespace rfh
{
namespace
{
char const* to_string(PtActivity a)
{
    return a == PtActivity::fresh ? "fresh" : "thinning";
}

char const* to_string(HarvestRule r)
{
    return r == HarvestRule::sum_in_zone ? "sum" : "nearest";
}

char const* to_string(InterferenceMode m)
{
    return m == InterferenceMode::approx ? "approx" : "exact";
}

char const* to_string(Measure m)
{
    switch (m)
    {
        case Measure::p_t:
            return "p_t";
        case Measure::outage_primary:
            return "outage_p";
        case Measure::outage_secondary:
            return "outage_s";
    }
    return "?";
}

char const* to_string(Solver s)
{
    switch (s)
    {
        case Solver::automatic:
            return "auto";
        case Solver::closed_form:
            return "closed";
        case Solver::numeric:
            return "numeric";
        case Solver::sensor:
            return "sensor";
    }
    return "?";
}

std::vector<std::string> sweep_columns(std::vector<SweepSpec> const& sweeps)
{
    std::vector<std::string> cols;
    for (auto const& s : sweeps)
        cols.push_back(s.name);
    return cols;
}

std::vector<std::string> coord_cells(SweepPoint const& p)
{
    std::vector<std::string> cells;
    for (double v : p.coords)
        cells.push_back(format_number(v));
    return cells;
}

template<class... Cols>
void append(std::vector<std::string>& v, Cols&&... cols)
{
    (v.push_back(std::forward<Cols>(cols)), ...);
}

bool has_guard(NetworkParams const& p)
{
    return p.r_g > 0;
}

TxProbability setting_p_t(NetworkParams const& p)
{
    return has_guard(p) ? transmission_probability(p)
                        : wit_transmission_probability(p);
}

OutageResult setting_outage_s(NetworkParams const& p, double active)
{
    return has_guard(p) ? outage_secondary(p, active) : outage_wit(p, active);
}

std::vector<std::string> analyze_row(NetworkParams const& p)
{
    validate(p);
    auto const geo = charging_geometry(p);
    auto const zones = zone_probabilities(p, geo);
    auto const tx = setting_p_t(p);
    double const pt = tx.midpoint();
    double const active = pt * p.lambda_s;
    auto const out_p = outage_primary(p, active);
    auto const out_s = setting_outage_s(p, active);

    std::vector<std::string> row;
    append(row, std::to_string(geo.m_slots), format_number(zones.p_g),
           format_number(zones.p_h),
           tx.is_exact() ? format_number(tx.lower) : std::string{},
           tx.is_exact() ? std::string{} : format_number(tx.lower),
           tx.is_exact() ? std::string{} : format_number(tx.upper),
           format_number(out_p.tau), format_number(out_s.tau),
           format_number(out_p.probability), format_number(out_s.probability),
           format_number(out_s.raw), format_bool(out_s.clamped),
           format_number(spatial_throughput(pt, p.lambda_s, p.theta_s)));
    return row;
}

std::vector<std::string>
optimize_row(NetworkParams const& p, Solver solver)
{
    Solver s = solver;
    if (s == Solver::automatic)
    {
        s = !has_guard(p)   ? Solver::sensor
            : p.noise == 0 ? Solver::closed_form
                            : Solver::numeric;
    }

    std::vector<std::string> row;
    try
    {
        OptimizationResult r;
        switch (s)
        {
            case Solver::closed_form:
                r = solve_p1_closed_form(p);
                break;
            case Solver::numeric:
                r = solve_p1_numeric(p);
                break;
            default:
                r = solve_p2(p);
                break;
        }
        append(row, "ok", to_string(s), format_number(r.p_s_star),
               std::to_string(r.p_t.m_slots), format_number(r.p_t.lower),
               format_number(r.p_t.upper), format_number(r.lambda_s_lower),
               format_number(r.lambda_s_upper),
               format_number(r.lambda_s_recommended),
               format_number(r.active_density), format_number(r.throughput),
               format_bool(r.primary_binding), format_bool(r.secondary_binding),
               format_bool(r.one_parameter_family), std::string{});
    }
    catch (InfeasibleError const& e)
    {
        append(row, "infeasible", to_string(s));
        row.resize(14);
        row.push_back(e.what());
    }
    return row;
}

std::vector<std::string> sim_comments(SimulateOptions const& o)
{
    auto const& c = o.sim;
    return {
        "seed: " + std::to_string(c.master_seed),
        "replications: " + std::to_string(c.n_replications),
        "slots: " + std::to_string(c.n_slots),
        "mode: " + std::string(to_string(o.mode)),
        "measure: " + std::string(to_string(o.measure)),
        "activity: " + std::string(to_string(c.pt_activity)),
        "harvest: " + std::string(to_string(c.harvest_rule)),
        "window: "
            + (c.window_side > 0 ? format_number(c.window_side)
                                 : "auto, max(20 r_g, 100)"),
        "batches: " + std::to_string(c.batches_per_replication),
        "warmup: "
            + (c.warmup_slots >= 0 ? std::to_string(c.warmup_slots)
                                   : "auto, max(10 M, 100)"),
    };
}
}  // namespace

//---------------------------------------------------------------------------//
unsigned env_thread_cap()
{
    char const* env = std::getenv("RFH_THREADS");
    if (!env || !*env)
        return 0;
    unsigned v = 0;
    std::string_view s(env);
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size() || v == 0)
        throw std::invalid_argument("RFH_THREADS must be a positive integer");
    return v;
}

unsigned effective_threads(unsigned requested)
{
    unsigned n = worker_count(requested, static_cast<std::size_t>(-1));
    if (unsigned cap = env_thread_cap())
        n = std::min(n, cap);
    return n;
}

std::vector<std::string> base_comments(std::string_view command,
                                       NetworkParams const& params,
                                       std::vector<SweepSpec> const& sweeps)
{
    std::vector<std::string> lines{
        "rfh " RFH_VERSION,
        "command: " + std::string(command),
        "config: " + params_to_json(params),
    };
    for (auto const& s : sweeps)
        lines.push_back("sweep: " + s.to_string());
    return lines;
}

//---------------------------------------------------------------------------//
Table analyze_table(NetworkParams const& base,
                    std::vector<SweepSpec> const& sweeps,
                    unsigned threads)
{
    auto const points = expand_sweeps(base, sweeps);
    Table t;
    t.columns = sweep_columns(sweeps);
    append(t.columns, "m_slots", "p_g", "p_h", "p_t_exact", "p_t_lower",
           "p_t_upper", "tau_p", "tau_s", "outage_p", "outage_s",
           "outage_s_raw", "outage_s_clamped", "throughput");

    t.rows.resize(points.size());
    parallel_for(points.size(), effective_threads(threads), [&](std::size_t i) {
        auto row = coord_cells(points[i]);
        auto rest = analyze_row(points[i].params);
        row.insert(row.end(), rest.begin(), rest.end());
        t.rows[i] = std::move(row);
    });
    return t;
}

Table optimize_table(NetworkParams const& base,
                     std::vector<SweepSpec> const& sweeps,
                     Solver solver,
                     unsigned threads)
{
    auto const points = expand_sweeps(base, sweeps);
    Table t;
    t.columns = sweep_columns(sweeps);
    append(t.columns, "status", "solver", "p_s_star", "m_slots", "p_t_lower",
           "p_t_upper", "lambda_s_lower", "lambda_s_upper",
           "lambda_s_recommended", "active_density", "throughput",
           "primary_binding", "secondary_binding", "one_parameter_family",
           "message");

    t.rows.resize(points.size());
    parallel_for(points.size(), effective_threads(threads), [&](std::size_t i) {
        auto row = coord_cells(points[i]);
        auto rest = optimize_row(points[i].params, solver);
        row.insert(row.end(), rest.begin(), rest.end());
        t.rows[i] = std::move(row);
    });
    return t;
}

Table simulate_table(NetworkParams const& base,
                     std::vector<SweepSpec> const& sweeps,
                     SimulateOptions const& opts)
{
    auto const points = expand_sweeps(base, sweeps);
    SimConfig cfg = opts.sim;
    cfg.threads = effective_threads(cfg.threads);

    Table t;
    t.columns = sweep_columns(sweeps);
    append(t.columns, "estimate", "half_width", "n", "analytic_lower",
           "analytic_upper");

    for (auto const& pt : points)
    {
        auto const& p = pt.params;
        SimEstimate est;
        double lo = 0;
        double hi = 0;
        if (opts.measure == Measure::p_t)
        {
            est = estimate_p_t(p, cfg);
            auto const tx = setting_p_t(p);
            lo = tx.lower;
            hi = tx.upper;
        }
        else
        {
            double const active = setting_p_t(p).midpoint() * p.lambda_s;
            OutageSide side = OutageSide::primary;
            if (opts.measure == Measure::outage_primary)
            {
                lo = hi = outage_primary(p, active).probability;
            }
            else
            {
                side = has_guard(p) ? OutageSide::secondary : OutageSide::wit;
                lo = hi = setting_outage_s(p, active).probability;
            }
            est = estimate_outage(p, cfg, side, opts.mode);
        }
        auto row = coord_cells(pt);
        append(row, format_number(est.mean), format_number(est.half_width),
               std::to_string(est.n_samples), format_number(lo),
               format_number(hi));
        t.rows.push_back(std::move(row));
    }
    return t;
}

double ks_statistic(std::vector<double> a, std::vector<double> b)
{
    if (a.empty() || b.empty())
        throw std::invalid_argument("KS statistic needs two non-empty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double const na = static_cast<double>(a.size());
    double const nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0;
    while (i < a.size() && j < b.size())
    {
        double const x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x)
            ++i;
        while (j < b.size() && b[j] <= x)
            ++j;
        d = std::max(d, std::fabs(i / na - j / nb));
    }
    return d;
}

Table interference_cdf_table(NetworkParams const& params,
                             SimulateOptions const& opts,
                             double* ks)
{
    if (opts.cdf_points < 2)
        throw std::invalid_argument("CDF needs at least 2 grid points");
    SimConfig cfg = opts.sim;
    cfg.threads = effective_threads(cfg.threads);
    auto exact = interference_samples(params, cfg, InterferenceMode::exact);
    auto approx = interference_samples(params, cfg, InterferenceMode::approx);
    std::sort(exact.begin(), exact.end());
    std::sort(approx.begin(), approx.end());
    if (ks)
        *ks = ks_statistic(exact, approx);

    std::vector<double> pooled(exact);
    pooled.insert(pooled.end(), approx.begin(), approx.end());
    std::sort(pooled.begin(), pooled.end());

    auto ecdf = [](std::vector<double> const& s, double x) {
        auto n = std::upper_bound(s.begin(), s.end(), x) - s.begin();
        return static_cast<double>(n) / static_cast<double>(s.size());
    };

    Table t;
    t.columns = {"interference", "cdf_exact", "cdf_approx"};
    std::size_t const last = pooled.size() - 1;
    double prev = -1;
    for (int k = 0; k < opts.cdf_points; ++k)
    {
        double const x = pooled[last * k / (opts.cdf_points - 1)];
        if (x == prev)
            continue;
        prev = x;
        t.rows.push_back({format_number(x), format_number(ecdf(exact, x)),
                          format_number(ecdf(approx, x))});
    }
    return t;
}

//---------------------------------------------------------------------------//
std::string cmd_analyze(NetworkParams const& base,
                        std::vector<SweepSpec> const& sweeps,
                        unsigned threads)
{
    validate(base);
    auto table = analyze_table(base, sweeps, threads);
    return to_csv(base_comments("analyze", base, sweeps), table);
}

std::string cmd_simulate(NetworkParams const& base,
                         std::vector<SweepSpec> const& sweeps,
                         SimulateOptions const& opts)
{
    validate(base);
    if (opts.sim.n_replications < 1)
        throw std::invalid_argument("replication count must be at least 1");
    auto comments = base_comments("simulate", base, sweeps);
    auto extra = sim_comments(opts);
    comments.insert(comments.end(), extra.begin(), extra.end());
    if (opts.interference_cdf)
    {
        if (!sweeps.empty())
            throw std::invalid_argument(
                "interference CDF output does not take sweeps");
        double ks = 0;
        auto table = interference_cdf_table(base, opts, &ks);
        comments.push_back("interference_cdf: " + std::to_string(opts.cdf_points));
        comments.push_back("ks_statistic: " + format_number(ks));
        return to_csv(comments, table);
    }
    auto table = simulate_table(base, sweeps, opts);
    return to_csv(comments, table);
}

std::string cmd_optimize(NetworkParams const& base,
                         std::vector<SweepSpec> const& sweeps,
                         Solver solver,
                         unsigned threads)
{
    validate(base);
    auto comments = base_comments("optimize", base, sweeps);
    comments.push_back("solver: " + std::string(to_string(solver)));
    return to_csv(comments, optimize_table(base, sweeps, solver, threads));
}

}  // namespace rfh
