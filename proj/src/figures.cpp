#include <cmath>
#include <fstream>
#include <stdexcept>

#include "rfh/analytics.hpp"
#include "rfh/cli.hpp"
#include "rfh/optimizer.hpp"

namespace rfh
{
namespace
{
struct Curve
{
    std::string name;
    std::vector<std::string> notes;
    Table table;
};

NetworkParams common_params()
{
    NetworkParams p;
    p.alpha = 4;
    p.eta = 0.1;
    p.d_p = 0.5;
    p.d_s = 0.5;
    p.theta_p = 5;
    p.theta_s = 5;
    p.lambda_s = 0.1;
    p.access_prob = 1;
    return p;
}

SimConfig sim_config(FigureOptions const& o)
{
    SimConfig c;
    c.master_seed = o.seed;
    c.n_replications = o.replications;
    c.n_slots = o.slots;
    c.pt_activity = PtActivity::fresh;
    c.threads = effective_threads(o.threads);
    return c;
}

std::vector<std::string> sim_notes(SimConfig const& c)
{
    return {"seed: " + std::to_string(c.master_seed),
            "replications: " + std::to_string(c.n_replications),
            "slots: " + std::to_string(c.n_slots), "activity: fresh"};
}

//! Analytic p_t (exact or bounds) against one swept parameter
Curve p_t_curve(std::string name,
                NetworkParams const& base,
                SweepSpec const& x,
                bool wit,
                int which)  // 0 value/midpoint, 1 lower, 2 upper
{
    Curve c{std::move(name), {}, {}};
    c.table.columns = {x.name, "p_t", "m_slots"};
    for (auto const& pt : expand_sweeps(base, {x}))
    {
        auto tx = wit ? wit_transmission_probability(pt.params)
                      : transmission_probability(pt.params);
        double v = which == 1 ? tx.lower : which == 2 ? tx.upper : tx.midpoint();
        c.table.rows.push_back({format_number(pt.coords[0]), format_number(v),
                                std::to_string(tx.m_slots)});
    }
    return c;
}

Curve p_t_exact_curve(std::string name,
                      NetworkParams const& base,
                      SweepSpec const& x)
{
    Curve c{std::move(name), {}, {}};
    c.table.columns = {x.name, "p_t", "m_slots"};
    for (auto const& pt : expand_sweeps(base, {x}))
    {
        auto tx = transmission_probability(pt.params);
        if (!tx.is_exact())
            continue;
        c.table.rows.push_back({format_number(pt.coords[0]),
                                format_number(tx.value()),
                                std::to_string(tx.m_slots)});
    }
    return c;
}

Curve sim_p_t_curve(std::string name,
                    NetworkParams const& base,
                    SweepSpec const& x,
                    SimConfig const& cfg)
{
    Curve c{std::move(name), sim_notes(cfg), {}};
    c.table.columns = {x.name, "p_t", "half_width", "n"};
    for (auto const& pt : expand_sweeps(base, {x}))
    {
        auto est = estimate_p_t(pt.params, cfg);
        c.table.rows.push_back({format_number(pt.coords[0]),
                                format_number(est.mean),
                                format_number(est.half_width),
                                std::to_string(est.n_samples)});
    }
    return c;
}

//! Two p_t figures sharing a layout: one M=1 and one M=2 power
std::vector<Curve> p_t_pair(NetworkParams base,
                            SweepSpec const& x,
                            bool wit,
                            FigureOptions const& o)
{
    std::vector<Curve> out;
    for (auto [label, ps] : {std::pair{"M1", 0.05}, std::pair{"M2", 0.15}})
    {
        base.power_s = ps;
        out.push_back(p_t_curve(std::string(label) + "_analytic", base, x, wit, 0));
        out.back().notes.push_back("power_s: " + format_number(ps));
        if (o.simulate)
        {
            out.push_back(
                sim_p_t_curve(std::string(label) + "_sim", base, x, sim_config(o)));
            out.back().notes.push_back("power_s: " + format_number(ps));
        }
    }
    return out;
}

//! Analytic outage pair (primary, secondary) plus simulated counterparts
std::vector<Curve> outage_curves(NetworkParams const& base,
                                 SweepSpec const& x,
                                 bool theta_db,
                                 FigureOptions const& o)
{
    auto prepare = [&](SweepPoint pt) {
        if (theta_db)
        {
            double lin = std::pow(10.0, pt.coords[0] / 10);
            pt.params.theta_p = pt.params.theta_s = lin;
        }
        return pt;
    };
    NetworkParams grid_base = base;
    SweepSpec grid = x;
    if (theta_db)
        grid.name = "theta_p";

    Curve ap{"primary_analytic", {}, {}};
    Curve as{"secondary_analytic", {}, {}};
    Curve sp{"primary_sim", {}, {}};
    Curve ss{"secondary_sim", {}, {}};
    std::string const xname = theta_db ? "theta_db" : x.name;
    ap.table.columns = {xname, "outage"};
    as.table.columns = {xname, "outage", "raw", "clamped"};
    sp.table.columns = ss.table.columns = {xname, "outage", "half_width", "n"};

    SimConfig cfg = sim_config(o);
    sp.notes = ss.notes = sim_notes(cfg);
    sp.notes.push_back("mode: approx");
    ss.notes.push_back("mode: approx");

    for (auto pt : expand_sweeps(grid_base, {grid}))
    {
        pt = prepare(pt);
        auto const& p = pt.params;
        double const active = transmission_probability(p).midpoint() * p.lambda_s;
        auto const op = outage_primary(p, active);
        auto const os = outage_secondary(p, active);
        auto const xs = format_number(pt.coords[0]);
        ap.table.rows.push_back({xs, format_number(op.probability)});
        as.table.rows.push_back({xs, format_number(os.probability),
                                 format_number(os.raw), format_bool(os.clamped)});
        if (o.simulate)
        {
            auto ep = estimate_outage(p, cfg, OutageSide::primary,
                                      InterferenceMode::approx);
            auto es = estimate_outage(p, cfg, OutageSide::secondary,
                                      InterferenceMode::approx);
            sp.table.rows.push_back({xs, format_number(ep.mean),
                                     format_number(ep.half_width),
                                     std::to_string(ep.n_samples)});
            ss.table.rows.push_back({xs, format_number(es.mean),
                                     format_number(es.half_width),
                                     std::to_string(es.n_samples)});
        }
    }
    std::vector<Curve> out{ap, as};
    if (o.simulate)
    {
        out.push_back(sp);
        out.push_back(ss);
    }
    return out;
}

NetworkParams optimizer_params()
{
    NetworkParams p = common_params();
    p.r_h = 1;
    p.r_g = 3;
    p.power_p = 2;
    p.power_s = 0.1;  // replaced by the optimum
    p.eps_s = 0.3;
    return p;
}

SweepSpec optimizer_grid()
{
    return {"lambda_p_total", 0.001, 0.1, 30, false};
}

std::vector<Curve> optimizer_curves(bool throughput)
{
    std::vector<Curve> out;
    for (double eps_p : {0.1, 0.2, 0.3})
    {
        NetworkParams base = optimizer_params();
        base.eps_p = eps_p;
        std::string tag = "eps_p_" + format_number(eps_p);
        Curve main{throughput ? "throughput_" + tag : "power_" + tag, {}, {}};
        Curve dens{"density_" + tag, {}, {}};
        main.table.columns = {"lambda_p", "status",
                              throughput ? "throughput" : "p_s_star"};
        dens.table.columns = {"lambda_p", "status", "lambda_s_lower",
                              "lambda_s_upper", "lambda_s_recommended"};
        for (auto const& pt : expand_sweeps(base, {optimizer_grid()}))
        {
            auto const xs = format_number(pt.coords[0]);
            try
            {
                auto r = solve_p1_closed_form(pt.params);
                main.table.rows.push_back(
                    {xs, "ok",
                     format_number(throughput ? r.throughput : r.p_s_star)});
                dens.table.rows.push_back(
                    {xs, "ok", format_number(r.lambda_s_lower),
                     format_number(r.lambda_s_upper),
                     format_number(r.lambda_s_recommended)});
            }
            catch (InfeasibleError const&)
            {
                main.table.rows.push_back({xs, "infeasible", ""});
                dens.table.rows.push_back({xs, "infeasible", "", "", ""});
            }
        }
        main.notes.push_back("eps_p: " + format_number(eps_p));
        dens.notes.push_back("eps_p: " + format_number(eps_p));
        out.push_back(std::move(main));
        if (throughput)
            out.push_back(std::move(dens));
    }
    return out;
}

struct FigureData
{
    NetworkParams base;
    std::vector<SweepSpec> sweeps;
    std::vector<Curve> curves;
};

FigureData build_figure(int id, FigureOptions const& o)
{
    FigureData f;
    NetworkParams p = common_params();
    switch (id)
    {
        case 5: {
            p.lambda_p_total = 0.01;
            p.r_g = 4;
            p.r_h = 1.5;
            p.power_p = 2;
            p.power_s = 0.01;
            SweepSpec x{"power_s", 0.01, 0.2, 20, false};
            f.sweeps = {x};
            f.curves.push_back(p_t_exact_curve("p_t_exact", p, x));
            if (o.simulate)
                f.curves.push_back(sim_p_t_curve("p_t_sim", p, x, sim_config(o)));
            f.curves.push_back(p_t_curve("p_t_upper", p, x, false, 2));
            f.curves.push_back(p_t_curve("p_t_lower", p, x, false, 1));
            break;
        }
        case 6: {
            p.r_g = 3;
            p.r_h = 1;
            p.power_p = 1;
            SweepSpec x{"lambda_p_total", 0.001, 0.3, 30, true};
            f.sweeps = {x};
            f.curves = p_t_pair(p, x, false, o);
            break;
        }
        case 7: {
            p.lambda_p_total = 0.01;
            p.r_h = 1;
            p.power_p = 1;
            p.r_g = 1.5;
            SweepSpec x{"r_g", 1.5, 6, 19, false};
            f.sweeps = {x};
            f.curves = p_t_pair(p, x, false, o);
            break;
        }
        case 8: {
            p.r_g = 3;
            p.r_h = 1;
            p.lambda_s = 0.2;
            p.lambda_p_total = 0.01;
            p.power_p = 2;
            p.power_s = 0.1;
            SimulateOptions so;
            so.sim = sim_config(o);
            double ks = 0;
            auto t = interference_cdf_table(p, so, &ks);
            Curve exact{"exact", sim_notes(so.sim), {}};
            Curve approx{"approx", sim_notes(so.sim), {}};
            exact.table.columns = approx.table.columns = {"interference", "cdf"};
            for (auto const& row : t.rows)
            {
                exact.table.rows.push_back({row[0], row[1]});
                approx.table.rows.push_back({row[0], row[2]});
            }
            exact.notes.push_back("ks_statistic: " + format_number(ks));
            approx.notes.push_back("ks_statistic: " + format_number(ks));
            f.curves = {exact, approx};
            break;
        }
        case 9: {
            p.r_g = 3;
            p.r_h = 1;
            p.lambda_p_total = 0.01;
            p.lambda_s = 0.1;
            p.power_p = 1;
            p.power_s = 0.1;
            SweepSpec x{"theta_db", -10, 30, 21, false};
            f.sweeps = {x};
            f.curves = outage_curves(p, x, true, o);
            break;
        }
        case 10: {
            p.r_g = 4;
            p.r_h = 1;
            p.lambda_s = 0.2;
            p.lambda_p_total = 0.01;
            p.power_p = 2;
            p.power_s = 0.01;
            SweepSpec x{"power_s", 0.01, 0.2, 20, false};
            f.sweeps = {x};
            f.curves = outage_curves(p, x, false, o);
            break;
        }
        case 11:
            p = optimizer_params();
            f.sweeps = {optimizer_grid()};
            f.curves = optimizer_curves(false);
            break;
        case 12:
            p = optimizer_params();
            f.sweeps = {optimizer_grid()};
            f.curves = optimizer_curves(true);
            break;
        case 13: {
            p.r_g = 0;
            p.r_h = 1;
            p.power_p = 1;
            SweepSpec x{"lambda_p_total", 0.001, 0.3, 30, true};
            f.sweeps = {x};
            f.curves = p_t_pair(p, x, true, o);
            break;
        }
        default:
            throw std::invalid_argument("unknown figure id "
                                        + std::to_string(id));
    }
    f.base = p;
    return f;
}
}  // namespace

std::vector<int> const& figure_ids()
{
    static std::vector<int> const ids{5, 6, 7, 8, 9, 10, 11, 12, 13};
    return ids;
}

std::vector<std::filesystem::path> cmd_figure(int figure_id,
                                              std::filesystem::path const& out_dir,
                                              FigureOptions const& opts)
{
    auto fig = build_figure(figure_id, opts);
    std::filesystem::create_directories(out_dir);

    std::vector<std::filesystem::path> written;
    std::string const prefix = "figure " + std::to_string(figure_id);
    for (auto const& c : fig.curves)
    {
        auto comments = base_comments(prefix, fig.base, {});
        for (auto const& s : fig.sweeps)
            comments.push_back("x: " + s.to_string());
        comments.push_back("curve: " + c.name);
        comments.insert(comments.end(), c.notes.begin(), c.notes.end());

        auto path = out_dir
                    / ("fig" + std::to_string(figure_id) + "_" + c.name + ".csv");
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw std::runtime_error("cannot open " + path.string());
        write_csv(os, comments, c.table);
        if (!os)
            throw std::runtime_error("failed writing " + path.string());
        written.push_back(path);
    }
    return written;
}

}  // namespace rfh
