#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rfh/params.hpp"
#include "rfh/sim.hpp"

namespace rfh
{
//---------------------------------------------------------------------------//
// SWEEPS
//---------------------------------------------------------------------------//
struct SweepSpec
{
    std::string name;
    double start = 0;
    double stop = 0;
    int n_points = 2;
    bool log_scale = false;

    //! Grid values; the last one is exactly \c stop
    std::vector<double> values() const;
    std::string to_string() const;
};

//! Parse "name=start:stop:npoints[:log|:lin]"
SweepSpec parse_sweep(std::string_view text);
void validate(SweepSpec const& spec);

struct SweepPoint
{
    NetworkParams params;
    std::vector<double> coords;  //!< one value per sweep, in sweep order
};

//! Cartesian product; the first sweep varies slowest
std::vector<SweepPoint>
expand_sweeps(NetworkParams const& base, std::vector<SweepSpec> const& sweeps);

//---------------------------------------------------------------------------//
// CSV
//---------------------------------------------------------------------------//
//! Shortest round-trip decimal form
std::string format_number(double value);
std::string format_bool(bool value);

//! RFC-4180 quoting when the field needs it
std::string csv_field(std::string_view text);

struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

//! Comment lines are written first, each prefixed with "# "
void write_csv(std::ostream& os,
               std::vector<std::string> const& comments,
               Table const& table);
std::string to_csv(std::vector<std::string> const& comments, Table const& table);

//---------------------------------------------------------------------------//
// COMMANDS
//---------------------------------------------------------------------------//
//! Worker cap from RFH_THREADS (0 when unset, meaning hardware concurrency)
unsigned env_thread_cap();

//! Requested worker count limited by RFH_THREADS
unsigned effective_threads(unsigned requested);

std::vector<std::string>
base_comments(std::string_view command,
              NetworkParams const& params,
              std::vector<SweepSpec> const& sweeps);

Table analyze_table(NetworkParams const& base,
                    std::vector<SweepSpec> const& sweeps,
                    unsigned threads);

enum class Measure
{
    p_t,
    outage_primary,
    outage_secondary,
};

struct SimulateOptions
{
    SimConfig sim;
    Measure measure = Measure::p_t;
    InterferenceMode mode = InterferenceMode::exact;
    //! Empirical CDFs of exact and approximate I_s instead of estimates
    bool interference_cdf = false;
    int cdf_points = 201;
};

Table simulate_table(NetworkParams const& base,
                     std::vector<SweepSpec> const& sweeps,
                     SimulateOptions const& opts);

//! Columns interference, cdf_exact, cdf_approx on a pooled-quantile grid
Table interference_cdf_table(NetworkParams const& params,
                             SimulateOptions const& opts,
                             double* ks = nullptr);

enum class Solver
{
    automatic,
    closed_form,
    numeric,
    sensor,
};

Table optimize_table(NetworkParams const& base,
                     std::vector<SweepSpec> const& sweeps,
                     Solver solver,
                     unsigned threads);

// Full CSV documents, header included
std::string cmd_analyze(NetworkParams const& base,
                        std::vector<SweepSpec> const& sweeps,
                        unsigned threads);
std::string cmd_simulate(NetworkParams const& base,
                         std::vector<SweepSpec> const& sweeps,
                         SimulateOptions const& opts);
std::string cmd_optimize(NetworkParams const& base,
                         std::vector<SweepSpec> const& sweeps,
                         Solver solver,
                         unsigned threads);

//! Two-sample Kolmogorov-Smirnov statistic
double ks_statistic(std::vector<double> a, std::vector<double> b);

//---------------------------------------------------------------------------//
// FIGURES
//---------------------------------------------------------------------------//
struct FigureOptions
{
    bool simulate = true;
    std::uint64_t seed = 1;
    std::uint64_t replications = 10;
    std::uint64_t slots = 2000;
    unsigned threads = 1;
};

std::vector<int> const& figure_ids();

//! Write one CSV per curve into out_dir; returns the paths in order
std::vector<std::filesystem::path> cmd_figure(int figure_id,
                                              std::filesystem::path const& out_dir,
                                              FigureOptions const& opts);

}  // namespace rfh
