#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "rfh/cli.hpp"

namespace
{
std::string read_file(std::string const& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot read config '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void emit(std::string const& text, std::string const& out)
{
    if (out.empty() || out == "-")
    {
        std::cout << text << std::flush;
        if (!std::cout)
            throw std::runtime_error("failed writing to stdout");
        return;
    }
    std::ofstream os(out, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open '" + out + "' for writing");
    os << text;
    os.close();
    if (!os)
        throw std::runtime_error("failed writing '" + out + "'");
}

struct Common
{
    std::string config;
    std::string out;
    std::vector<std::string> sweeps;
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("--config", c.config, "JSON parameter file")->required();
    cmd->add_option("--out", c.out, "Output CSV path (default stdout)");
    cmd->add_option("--sweep", c.sweeps,
                    "Sweep name=start:stop:npoints[:log]; repeat for a "
                    "cartesian product");
    cmd->add_option("--threads", c.threads,
                    "Worker threads (0: all cores, capped by RFH_THREADS)");
}

struct Loaded
{
    rfh::NetworkParams params;
    std::vector<rfh::SweepSpec> sweeps;
};

Loaded load(Common const& c)
{
    Loaded l;
    l.params = rfh::params_from_json(read_file(c.config));
    for (auto const& s : c.sweeps)
        l.sweeps.push_back(rfh::parse_sweep(s));
    for (auto const& w : rfh::assumption_warnings(l.params))
        std::cerr << "warning: " << w << '\n';
    return l;
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spatial throughput analysis of RF-harvesting cognitive "
                 "radio networks"};
    app.set_version_flag("--version", "rfh " RFH_VERSION);
    app.require_subcommand(1);

    Common an;
    auto* analyze = app.add_subcommand("analyze", "Closed-form metrics per point");
    add_common(analyze, an);

    Common sm;
    rfh::SimulateOptions sim_opts;
    sim_opts.sim.threads = 0;
    std::string mode = "exact";
    std::string measure = "p_t";
    std::string activity = "thinning";
    std::string harvest = "nearest";
    std::int64_t replications = static_cast<std::int64_t>(sim_opts.sim.n_replications);
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates");
    add_common(simulate, sm);
    simulate->add_option("--seed", sim_opts.sim.master_seed, "Master seed");
    simulate->add_option("--replications", replications, "Independent replications");
    simulate->add_option("--slots", sim_opts.sim.n_slots, "Measured slots per replication");
    simulate->add_option("--mode", mode, "Interference model for outage")
        ->check(CLI::IsMember({"exact", "approx"}));
    simulate->add_option("--measure", measure, "Quantity to estimate")
        ->check(CLI::IsMember({"p_t", "outage_p", "outage_s"}));
    simulate->add_option("--activity", activity, "PT activity per slot")
        ->check(CLI::IsMember({"thinning", "fresh"}));
    simulate->add_option("--harvest", harvest, "Harvest rule")
        ->check(CLI::IsMember({"nearest", "sum"}));
    simulate->add_option("--window", sim_opts.sim.window_side,
                         "Torus side (0: max(20 r_g, 100))");
    simulate->add_option("--batches", sim_opts.sim.batches_per_replication,
                         "Batches per replication for the CI");
    simulate->add_option("--warmup", sim_opts.sim.warmup_slots,
                         "Discarded slots (negative: max(10 M, 100))");
    simulate->add_flag("--interference-cdf", sim_opts.interference_cdf,
                       "Emit empirical CDFs of exact and approximate I_s");
    simulate->add_option("--cdf-points", sim_opts.cdf_points, "CDF grid size");

    Common op;
    std::string solver = "auto";
    auto* optimize = app.add_subcommand("optimize", "Throughput-optimal ST power and density");
    add_common(optimize, op);
    optimize->add_option("--solver", solver, "Solver")
        ->check(CLI::IsMember({"auto", "closed", "numeric", "sensor"}));

    int figure_id = 0;
    std::string fig_out = ".";
    rfh::FigureOptions fig_opts;
    fig_opts.threads = 0;
    bool no_sim = false;
    auto* figure = app.add_subcommand("figure", "Reproduce figure data, one CSV per curve");
    figure->add_option("id", figure_id, "Figure number (5-13)")->required();
    figure->add_option("--out", fig_out, "Output directory");
    figure->add_option("--seed", fig_opts.seed, "Master seed");
    figure->add_option("--replications", fig_opts.replications, "Replications");
    figure->add_option("--slots", fig_opts.slots, "Measured slots per replication");
    figure->add_option("--threads", fig_opts.threads, "Worker threads");
    figure->add_flag("--no-sim", no_sim, "Analytic curves only");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*analyze)
        {
            auto l = load(an);
            emit(rfh::cmd_analyze(l.params, l.sweeps, an.threads), an.out);
        }
        else if (*simulate)
        {
            auto l = load(sm);
            if (replications < 1)
                throw std::invalid_argument("replication count must be at least 1");
            sim_opts.sim.n_replications = static_cast<std::uint64_t>(replications);
            sim_opts.sim.threads = sm.threads;
            sim_opts.mode = mode == "approx" ? rfh::InterferenceMode::approx
                                             : rfh::InterferenceMode::exact;
            static std::map<std::string, rfh::Measure> const measures{
                {"p_t", rfh::Measure::p_t},
                {"outage_p", rfh::Measure::outage_primary},
                {"outage_s", rfh::Measure::outage_secondary}};
            sim_opts.measure = measures.at(measure);
            sim_opts.sim.pt_activity = activity == "fresh"
                                           ? rfh::PtActivity::fresh
                                           : rfh::PtActivity::thinning;
            sim_opts.sim.harvest_rule = harvest == "sum"
                                            ? rfh::HarvestRule::sum_in_zone
                                            : rfh::HarvestRule::nearest;
            if (sim_opts.sim.pt_activity == rfh::PtActivity::thinning
                && l.params.access_prob > 0.5)
            {
                std::cerr << "warning: thinning with access_prob "
                          << l.params.access_prob
                          << " keeps PT positions nearly static across slots\n";
            }
            emit(rfh::cmd_simulate(l.params, l.sweeps, sim_opts), sm.out);
        }
        else if (*optimize)
        {
            auto l = load(op);
            static std::map<std::string, rfh::Solver> const solvers{
                {"auto", rfh::Solver::automatic},
                {"closed", rfh::Solver::closed_form},
                {"numeric", rfh::Solver::numeric},
                {"sensor", rfh::Solver::sensor}};
            emit(rfh::cmd_optimize(l.params, l.sweeps, solvers.at(solver),
                                   op.threads),
                 op.out);
        }
        else if (*figure)
        {
            fig_opts.simulate = !no_sim;
            for (auto const& p : rfh::cmd_figure(figure_id, fig_out, fig_opts))
                std::cerr << "wrote " << p.string() << '\n';
        }
    }
    catch (rfh::ValidationError const& e)
    {
        std::cerr << "error: invalid parameters\n";
        for (auto const& p : e.problems())
            std::cerr << "  " << p << '\n';
        return 2;
    }
    catch (std::exception const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
