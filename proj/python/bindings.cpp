#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rfh/analytics.hpp"
#include "rfh/cli.hpp"
#include "rfh/optimizer.hpp"
#include "rfh/sim.hpp"

namespace py = pybind11;
using namespace rfh;

namespace
{
std::vector<SweepSpec> parse_sweeps(std::vector<std::string> const& texts)
{
    std::vector<SweepSpec> out;
    for (auto const& t : texts)
        out.push_back(parse_sweep(t));
    return out;
}

template<class E>
E pick(std::string const& name,
       std::initializer_list<std::pair<char const*, E>> options)
{
    for (auto const& [key, value] : options)
        if (name == key)
            return value;
    throw py::value_error("unknown option '" + name + "'");
}
}  // namespace

PYBIND11_MODULE(_rfh, m)
{
    m.doc() = "RF-powered cognitive radio network model";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);

    py::class_<NetworkParams> params(m, "NetworkParams");
    params.def(py::init<>())
        .def("lambda_p", &NetworkParams::lambda_p)
        .def("to_json", [](NetworkParams const& p) { return params_to_json(p); })
        .def_static("from_json", &params_from_json)
        .def("validate", [](NetworkParams const& p) { validate(p); })
        .def("check", [](NetworkParams const& p) { return check(p); })
        .def("__eq__", [](NetworkParams const& a, NetworkParams const& b) { return a == b; })
        .def("__repr__",
             [](NetworkParams const& p) { return "NetworkParams(" + params_to_json(p) + ")"; });
    for (auto const& name : param_names())
    {
        params.def_property(
            name.c_str(),
            [name](NetworkParams const& p) { return get_param(p, name); },
            [name](NetworkParams& p, double v) { set_param(p, name, v); });
    }

    py::class_<ChargingGeometry>(m, "ChargingGeometry")
        .def_readonly("m_slots", &ChargingGeometry::m_slots)
        .def_readonly("h1", &ChargingGeometry::h1)
        .def_readonly("h2", &ChargingGeometry::h2);
    m.def("charging_geometry", &charging_geometry);
    m.def("edge_harvest", &edge_harvest);

    py::class_<TxProbability>(m, "TxProbability")
        .def_readonly("lower", &TxProbability::lower)
        .def_readonly("upper", &TxProbability::upper)
        .def_readonly("m_slots", &TxProbability::m_slots)
        .def_property_readonly("is_exact", &TxProbability::is_exact)
        .def("value", &TxProbability::value)
        .def("midpoint", &TxProbability::midpoint);

    py::class_<OutageResult>(m, "OutageResult")
        .def_readonly("tau", &OutageResult::tau)
        .def_readonly("probability", &OutageResult::probability)
        .def_readonly("raw", &OutageResult::raw)
        .def_readonly("clamped", &OutageResult::clamped);

    m.def("phi", &phi);
    m.def("p_guard", &p_guard);
    m.def("p_harvest", &p_harvest);
    m.def("transmission_probability", &transmission_probability);
    m.def("wit_transmission_probability", &wit_transmission_probability);
    m.def("outage_primary", &outage_primary);
    m.def("outage_secondary", &outage_secondary);
    m.def("outage_wit", &outage_wit);
    m.def("spatial_throughput", &spatial_throughput);

    py::class_<OptimizationResult>(m, "OptimizationResult")
        .def_readonly("p_s_star", &OptimizationResult::p_s_star)
        .def_readonly("lambda_s_lower", &OptimizationResult::lambda_s_lower)
        .def_readonly("lambda_s_upper", &OptimizationResult::lambda_s_upper)
        .def_readonly("lambda_s_recommended", &OptimizationResult::lambda_s_recommended)
        .def_readonly("active_density", &OptimizationResult::active_density)
        .def_readonly("throughput", &OptimizationResult::throughput)
        .def_readonly("p_t", &OptimizationResult::p_t)
        .def_readonly("primary_binding", &OptimizationResult::primary_binding)
        .def_readonly("secondary_binding", &OptimizationResult::secondary_binding)
        .def_readonly("one_parameter_family", &OptimizationResult::one_parameter_family);
    m.def("solve_p1_closed_form", &solve_p1_closed_form);
    m.def("solve_p1_numeric",
          [](NetworkParams const& p) { return solve_p1_numeric(p); });
    m.def("solve_p2", &solve_p2);

    py::class_<SimEstimate>(m, "SimEstimate")
        .def_readonly("mean", &SimEstimate::mean)
        .def_readonly("half_width", &SimEstimate::half_width)
        .def_readonly("n_samples", &SimEstimate::n_samples);

    m.def(
        "estimate_p_t",
        [](NetworkParams const& p, std::uint64_t slots, std::uint64_t replications,
           std::uint64_t seed, std::string const& activity, unsigned threads) {
            SimConfig c;
            c.n_slots = slots;
            c.n_replications = replications;
            c.master_seed = seed;
            c.threads = threads;
            c.pt_activity = pick<PtActivity>(
                activity, {{"thinning", PtActivity::thinning}, {"fresh", PtActivity::fresh}});
            py::gil_scoped_release release;
            return estimate_p_t(p, c);
        },
        py::arg("params"), py::arg("slots") = 1000, py::arg("replications") = 10,
        py::arg("seed") = 1, py::arg("activity") = "thinning", py::arg("threads") = 1);

    m.def(
        "analyze",
        [](NetworkParams const& p, std::vector<std::string> const& sweeps) {
            return cmd_analyze(p, parse_sweeps(sweeps), 1);
        },
        py::arg("params"), py::arg("sweeps") = std::vector<std::string>{});
    m.def(
        "optimize",
        [](NetworkParams const& p, std::vector<std::string> const& sweeps) {
            return cmd_optimize(p, parse_sweeps(sweeps), Solver::automatic, 1);
        },
        py::arg("params"), py::arg("sweeps") = std::vector<std::string>{});

    m.attr("__version__") = RFH_VERSION;
}
