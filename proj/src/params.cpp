#include "rfh/params.hpp"

#include <array>
#include <cassert>
#include <cmath>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace rfh
{
namespace
{
using Member = double NetworkParams::*;

struct Field
{
    char const* name;
    Member member;
};

constexpr std::array<Field, 16> fields{{
    {"lambda_p_total", &NetworkParams::lambda_p_total},
    {"access_prob", &NetworkParams::access_prob},
    {"lambda_s", &NetworkParams::lambda_s},
    {"power_p", &NetworkParams::power_p},
    {"power_s", &NetworkParams::power_s},
    {"alpha", &NetworkParams::alpha},
    {"eta", &NetworkParams::eta},
    {"r_g", &NetworkParams::r_g},
    {"r_h", &NetworkParams::r_h},
    {"d_p", &NetworkParams::d_p},
    {"d_s", &NetworkParams::d_s},
    {"noise", &NetworkParams::noise},
    {"theta_p", &NetworkParams::theta_p},
    {"theta_s", &NetworkParams::theta_s},
    {"eps_p", &NetworkParams::eps_p},
    {"eps_s", &NetworkParams::eps_s},
}};

Member find_member(std::string_view name)
{
    for (auto const& f : fields)
    {
        if (name == f.name)
            return f.member;
    }
    throw std::invalid_argument("unknown parameter '" + std::string(name)
                                + "'");
}

std::string join(std::vector<std::string> const& items)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < items.size(); ++i)
    {
        if (i)
            os << "; ";
        os << items[i];
    }
    return os.str();
}

// Relative slack absorbing rounding in Ps / (eta Pp r_h^-alpha), so that a
// power exactly at a threshold lands on the smaller slot count.
constexpr double ceiling_slack = 1e-12;
}  // namespace

//---------------------------------------------------------------------------//
std::vector<std::string> const& param_names()
{
    static std::vector<std::string> const names = [] {
        std::vector<std::string> result;
        for (auto const& f : fields)
            result.emplace_back(f.name);
        return result;
    }();
    return names;
}

double get_param(NetworkParams const& params, std::string_view name)
{
    return params.*find_member(name);
}

void set_param(NetworkParams& params, std::string_view name, double value)
{
    params.*find_member(name) = value;
}

//---------------------------------------------------------------------------//
ValidationError::ValidationError(std::vector<std::string> problems)
    : std::invalid_argument("invalid network parameters: " + join(problems))
    , problems_(std::move(problems))
{
}

std::vector<std::string> check(NetworkParams const& p)
{
    std::vector<std::string> problems;
    for (auto const& f : fields)
    {
        if (!std::isfinite(p.*f.member))
            problems.push_back(std::string(f.name) + " must be finite");
    }
    if (!problems.empty())
        return problems;

    if (!(p.alpha > 2))
        problems.emplace_back("alpha must exceed 2");
    if (!(p.eta > 0 && p.eta < 1))
        problems.emplace_back("eta must lie in (0, 1)");
    if (!(p.access_prob >= 0 && p.access_prob <= 1))
        problems.emplace_back("access_prob must lie in [0, 1]");

    for (auto name : {"lambda_p_total", "lambda_s", "power_p", "power_s",
                      "r_g", "d_p", "d_s", "noise"})
    {
        if (get_param(p, name) < 0)
            problems.push_back(std::string(name) + " must be non-negative");
    }
    if (!(p.r_h > 0))
        problems.emplace_back("r_h must be positive");
    if (p.r_g > 0 && !(p.r_h < p.r_g))
        problems.emplace_back("r_h must be smaller than r_g");
    if (p.r_g > 0 && !(p.d_p < p.r_g))
        problems.emplace_back("d_p must be smaller than r_g");
    if (!(p.theta_p > 0))
        problems.emplace_back("theta_p must be positive");
    if (!(p.theta_s > 0))
        problems.emplace_back("theta_s must be positive");
    if (!(p.eps_p > 0 && p.eps_p < 1))
        problems.emplace_back("eps_p must lie in (0, 1)");
    if (!(p.eps_s > 0 && p.eps_s < 1))
        problems.emplace_back("eps_s must lie in (0, 1)");
    return problems;
}

NetworkParams const& validate(NetworkParams const& params)
{
    auto problems = check(params);
    if (!problems.empty())
        throw ValidationError(std::move(problems));
    return params;
}

std::vector<std::string>
assumption_warnings(NetworkParams const& p, double ratio)
{
    std::vector<std::string> warnings;
    auto much_less = [&](double small, double large, char const* what) {
        if (small > ratio * large)
            warnings.emplace_back(what);
    };
    if (p.r_g > 0)
        much_less(p.d_p, p.r_g, "d_p is not much smaller than r_g");
    much_less(p.lambda_p_total, p.lambda_s,
              "lambda_p_total is not much smaller than lambda_s");
    much_less(p.power_s, p.power_p, "power_s is not much smaller than power_p");
    double const mean_in_zone = M_PI * p.r_h * p.r_h * p.lambda_p();
    much_less(mean_in_zone, 1.0, "pi r_h^2 lambda_p is not much smaller than 1");
    return warnings;
}

//---------------------------------------------------------------------------//
double edge_harvest(NetworkParams const& p)
{
    return p.eta * p.power_p * std::pow(p.r_h, -p.alpha);
}

ChargingGeometry charging_geometry(NetworkParams const& p)
{
    validate(p);
    if (!(p.power_s > 0))
        throw std::invalid_argument("ST power must be positive");
    if (!(p.power_p > 0))
        throw std::invalid_argument("PT power must be positive for charging");

    double const ratio = p.power_s / edge_harvest(p);
    double const slots = std::ceil(ratio * (1 - ceiling_slack));
    if (!(slots < 1e15))
        throw std::invalid_argument("charging slot count is unbounded");

    ChargingGeometry result;
    result.m_slots = std::max<std::int64_t>(1, static_cast<std::int64_t>(slots));
    if (result.m_slots >= 2)
    {
        result.h1 = std::pow(p.power_s / (p.eta * p.power_p), -1 / p.alpha);
        assert(*result.h1 < p.r_h);
    }
    if (result.m_slots >= 3)
    {
        result.h2 = std::pow(p.power_s / (2 * p.eta * p.power_p), -1 / p.alpha);
        assert(*result.h1 < *result.h2 && *result.h2 < p.r_h);
    }
    return result;
}

//---------------------------------------------------------------------------//
NetworkParams params_from_json(std::string const& text)
{
    nlohmann::json doc;
    try
    {
        doc = nlohmann::json::parse(text);
    }
    catch (nlohmann::json::parse_error const& e)
    {
        throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw std::invalid_argument("configuration must be a JSON object");

    std::vector<std::string> problems;
    for (auto const& [key, value] : doc.items())
    {
        bool known = false;
        for (auto const& f : fields)
            known = known || key == f.name;
        if (!known)
            problems.push_back("unknown key '" + key + "'");
    }

    NetworkParams params;
    for (auto const& f : fields)
    {
        auto it = doc.find(f.name);
        if (it == doc.end())
            problems.push_back(std::string("missing key '") + f.name + "'");
        else if (!it->is_number())
            problems.push_back(std::string("key '") + f.name
                               + "' must be a number");
        else
            params.*f.member = it->get<double>();
    }
    if (!problems.empty())
        throw ValidationError(std::move(problems));
    return validate(params);
}

std::string params_to_json(NetworkParams const& params)
{
    nlohmann::ordered_json doc;
    for (auto const& f : fields)
        doc[f.name] = params.*f.member;
    return doc.dump();
}

}  // namespace rfh
