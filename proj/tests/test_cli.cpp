#include "testing.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "rfh/analytics.hpp"
#include "rfh/cli.hpp"

using namespace rfh;

namespace
{
NetworkParams base()
{
    NetworkParams p;
    p.alpha = 4;
    p.eta = 0.1;
    p.d_p = p.d_s = 0.5;
    p.r_g = 3;
    p.r_h = 1;
    p.lambda_p_total = 0.01;
    p.lambda_s = 0.1;
    p.power_p = 2;
    p.power_s = 0.1;
    p.theta_p = p.theta_s = 5;
    p.eps_p = 0.2;
    p.eps_s = 0.3;
    return p;
}

std::vector<std::string> split(std::string const& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
        out.push_back(cell);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

std::vector<std::string> data_lines(std::string const& csv)
{
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty() && line[0] != '#')
            out.push_back(line);
    return out;
}

std::string cell(Table const& t, std::size_t row, std::string const& column)
{
    auto it = std::find(t.columns.begin(), t.columns.end(), column);
    REQUIRE(it != t.columns.end());
    return t.rows.at(row).at(static_cast<std::size_t>(it - t.columns.begin()));
}

// Largest ECDF gap, checked at every pooled sample point
double brute_ks(std::vector<double> const& a, std::vector<double> const& b)
{
    auto ecdf = [](std::vector<double> const& v, double x) {
        return static_cast<double>(std::count_if(
                   v.begin(), v.end(), [x](double y) { return y <= x; }))
               / static_cast<double>(v.size());
    };
    double d = 0;
    for (auto const* v : {&a, &b})
        for (double x : *v)
            d = std::max(d, std::fabs(ecdf(a, x) - ecdf(b, x)));
    return d;
}
}  // namespace

TEST_SUITE("cli")
{
TEST_CASE("sweep parsing")
{
    auto s = parse_sweep("lambda_p_total=0.001:0.1:30");
    CHECK(s.name == "lambda_p_total");
    CHECK(s.n_points == 30);
    CHECK_FALSE(s.log_scale);
    auto v = s.values();
    CHECK(v.size() == 30);
    CHECK(v.front() == 0.001);
    CHECK(v.back() == 0.1);
    CHECK(v[1] == rel(0.001 + 0.099 / 29));

    auto l = parse_sweep("power_s=0.01:1:3:log");
    CHECK(l.log_scale);
    auto lv = l.values();
    CHECK(lv[1] == rel(0.1));
    CHECK(lv[2] == 1);
    CHECK(parse_sweep(l.to_string()).values() == lv);
    CHECK(parse_sweep(s.to_string()).values() == v);

    CHECK_THROWS_WITH_AS(parse_sweep("lamda_p=0:1:3"),
                         "sweep: unknown parameter 'lamda_p'",
                         std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep("r_g=1:2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep("r_g=1:2:1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep("r_g=2:1:5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep("r_g=0:1:5:log"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep("r_g=1:2:5:cubic"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep("r_g=a:2:5"), std::invalid_argument);
}

TEST_CASE("sweep expansion")
{
    std::vector<SweepSpec> sweeps{parse_sweep("r_g=2:4:3"),
                                  parse_sweep("power_s=0.1:0.2:2")};
    auto pts = expand_sweeps(base(), sweeps);
    REQUIRE(pts.size() == 6);
    CHECK(pts[0].coords == std::vector<double>{2, 0.1});
    CHECK(pts[1].coords == std::vector<double>{2, 0.2});
    CHECK(pts[2].coords == std::vector<double>{3, 0.1});
    CHECK(pts[5].params.r_g == 4);
    CHECK(pts[5].params.power_s == 0.2);
    CHECK(pts[5].params.alpha == 4);

    CHECK(expand_sweeps(base(), {}).size() == 1);
    sweeps.push_back(parse_sweep("r_g=5:6:2"));
    CHECK_THROWS_AS(expand_sweeps(base(), sweeps), std::invalid_argument);
}

TEST_CASE("csv formatting")
{
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1e-300) == "1e-300");
    CHECK(format_number(NAN) == "nan");
    CHECK(format_number(-INFINITY) == "-inf");
    double x = 0.30000000000000004;
    CHECK(std::stod(format_number(x)) == x);
    CHECK(format_bool(true) == "true");
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");

    Table t{{"a", "b"}, {{"1", "x,y"}}};
    CHECK(to_csv({"note"}, t) == "# note\na,b\n1,\"x,y\"\n");
}

TEST_CASE("thread cap from the environment")
{
    ::unsetenv("RFH_THREADS");
    CHECK(env_thread_cap() == 0);
    CHECK(effective_threads(3) == 3);
    ::setenv("RFH_THREADS", "2", 1);
    CHECK(effective_threads(8) == 2);
    CHECK(effective_threads(1) == 1);
    ::setenv("RFH_THREADS", "zero", 1);
    CHECK_THROWS_AS(env_thread_cap(), std::invalid_argument);
    ::unsetenv("RFH_THREADS");
}

TEST_CASE("analyze")
{
    auto csv = cmd_analyze(base(), {}, 1);
    CHECK(csv.rfind("# rfh ", 0) == 0);
    CHECK(csv.find("# command: analyze") != std::string::npos);
    CHECK(csv.find("# config: {") != std::string::npos);
    CHECK(data_lines(csv).size() == 2);

    auto p = base();
    p.power_s = 0.02;
    auto t = analyze_table(p, {parse_sweep("power_s=0.02:0.5:4")}, 1);
    REQUIRE(t.rows.size() == 4);
    CHECK(cell(t, 0, "m_slots") == "1");
    CHECK(cell(t, 0, "p_t_exact")
          == format_number(transmission_probability(p).value()));
    CHECK(cell(t, 0, "p_t_lower").empty());
    CHECK(cell(t, 3, "p_t_exact").empty());
    CHECK_FALSE(cell(t, 3, "p_t_lower").empty());
    CHECK(std::stoi(cell(t, 3, "m_slots")) > 2);
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        CHECK(t.rows[r].size() == t.columns.size());

    auto w = base();
    w.r_g = 0;
    auto wt = analyze_table(w, {}, 1);
    CHECK(cell(wt, 0, "outage_s").size() > 0);
    CHECK(cell(wt, 0, "p_g") == "1");
}

TEST_CASE("optimize")
{
    auto t = optimize_table(base(), {}, Solver::automatic, 1);
    CHECK(cell(t, 0, "status") == "ok");
    CHECK(cell(t, 0, "solver") == "closed");
    CHECK(std::stod(cell(t, 0, "p_s_star")) == rel(0.24357268142019836, 1e-12));
    CHECK(cell(t, 0, "primary_binding") == "true");

    auto p = base();
    p.eps_p = 1e-6;
    auto bad = optimize_table(p, {}, Solver::automatic, 1);
    CHECK(cell(bad, 0, "status") == "infeasible");
    CHECK(cell(bad, 0, "message").find("unsatisfiable") != std::string::npos);

    p = base();
    p.r_g = 0;
    auto s = optimize_table(p, {}, Solver::automatic, 1);
    CHECK(cell(s, 0, "solver") == "sensor");
    CHECK(cell(s, 0, "one_parameter_family") == "true");

    p = base();
    p.noise = 1e-6;
    CHECK(cell(optimize_table(p, {}, Solver::automatic, 1), 0, "solver")
          == "numeric");
}

TEST_CASE("simulate")
{
    SimulateOptions o;
    o.sim.n_slots = 200;
    o.sim.n_replications = 3;
    o.sim.master_seed = 5;
    o.sim.pt_activity = PtActivity::fresh;
    auto sweeps = std::vector<SweepSpec>{parse_sweep("power_s=0.02:0.1:2")};
    o.sim.threads = 1;
    auto a = cmd_simulate(base(), sweeps, o);
    o.sim.threads = 3;
    auto b = cmd_simulate(base(), sweeps, o);
    CHECK(a == b);
    CHECK(a.find("# seed: 5") != std::string::npos);
    CHECK(data_lines(a).size() == 3);
    auto header = split(data_lines(a)[0]);
    CHECK(std::find(header.begin(), header.end(), "half_width") != header.end());

    o.sim.n_replications = 0;
    CHECK_THROWS_AS(cmd_simulate(base(), sweeps, o), std::invalid_argument);

    o.sim.n_replications = 2;
    o.interference_cdf = true;
    CHECK_THROWS_AS(cmd_simulate(base(), sweeps, o), std::invalid_argument);
    o.cdf_points = 11;
    double ks = -1;
    auto t = interference_cdf_table(base(), o, &ks);
    CHECK(t.columns == std::vector<std::string>{"interference", "cdf_exact", "cdf_approx"});
    CHECK(ks >= 0);
    CHECK(ks <= 1);
    for (std::size_t r = 1; r < t.rows.size(); ++r)
    {
        CHECK(std::stod(t.rows[r][0]) > std::stod(t.rows[r - 1][0]));
        CHECK(std::stod(t.rows[r][1]) >= std::stod(t.rows[r - 1][1]));
    }
}

TEST_CASE("two-sample KS statistic")
{
    CHECK(ks_statistic({1, 2, 3}, {1, 2, 3}) == 0);
    CHECK(ks_statistic({1, 2}, {3, 4}) == 1);
    CHECK_THROWS_AS(ks_statistic({}, {1}), std::invalid_argument);

    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0, 1);
    std::uniform_int_distribution<int> coarse(0, 5);
    for (int k = 0; k < 20; ++k)
    {
        std::vector<double> a(37 + k), b(50);
        for (auto& x : a)
            x = k % 2 ? n(rng) : coarse(rng);
        for (auto& x : b)
            x = k % 2 ? 0.3 + n(rng) : coarse(rng) + (k % 4 == 0);
        CHECK(ks_statistic(a, b) == rel(brute_ks(a, b), 1e-14));
    }
}

TEST_CASE("figures")
{
    CHECK(figure_ids() == std::vector<int>{5, 6, 7, 8, 9, 10, 11, 12, 13});
    auto dir = std::filesystem::temp_directory_path() / "rfh_test_figures";
    std::filesystem::remove_all(dir);
    FigureOptions o;
    o.simulate = false;
    CHECK_THROWS_AS(cmd_figure(4, dir, o), std::invalid_argument);

    auto paths = cmd_figure(11, dir, o);
    CHECK(paths.size() == 3);
    for (auto const& path : paths)
    {
        CHECK(std::filesystem::exists(path));
        CHECK(path.filename().string().rfind("fig11_", 0) == 0);
    }
    std::ifstream in(paths.front());
    std::string first;
    std::getline(in, first);
    CHECK(first.rfind("# rfh ", 0) == 0);
    std::filesystem::remove_all(dir);
}
}
