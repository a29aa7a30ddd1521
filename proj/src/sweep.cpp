#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <stdexcept>

#include "rfh/cli.hpp"

namespace rfh
{
namespace
{
double parse_double(std::string_view s, std::string_view what)
{
    double v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size())
        throw std::invalid_argument("sweep: bad " + std::string(what) + " '"
                                    + std::string(s) + "'");
    return v;
}

int parse_int(std::string_view s)
{
    int v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size())
        throw std::invalid_argument("sweep: bad point count '" + std::string(s)
                                    + "'");
    return v;
}
}  // namespace

std::vector<double> SweepSpec::values() const
{
    validate(*this);
    std::vector<double> out(n_points);
    double const last = n_points - 1;
    for (int i = 0; i < n_points; ++i)
    {
        double const t = i / last;
        out[i] = log_scale ? start * std::pow(stop / start, t)
                           : start + (stop - start) * t;
    }
    out.front() = start;
    out.back() = stop;
    return out;
}

std::string SweepSpec::to_string() const
{
    return name + "=" + format_number(start) + ":" + format_number(stop) + ":"
           + std::to_string(n_points) + (log_scale ? ":log" : ":lin");
}

SweepSpec parse_sweep(std::string_view text)
{
    auto eq = text.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw std::invalid_argument("sweep: expected name=start:stop:npoints, got '"
                                    + std::string(text) + "'");
    SweepSpec spec;
    spec.name = std::string(text.substr(0, eq));

    std::vector<std::string_view> parts;
    auto rest = text.substr(eq + 1);
    for (;;)
    {
        auto colon = rest.find(':');
        parts.push_back(rest.substr(0, colon));
        if (colon == std::string_view::npos)
            break;
        rest = rest.substr(colon + 1);
    }
    if (parts.size() != 3 && parts.size() != 4)
        throw std::invalid_argument("sweep: expected name=start:stop:npoints[:log], got '"
                                    + std::string(text) + "'");
    spec.start = parse_double(parts[0], "start");
    spec.stop = parse_double(parts[1], "stop");
    spec.n_points = parse_int(parts[2]);
    if (parts.size() == 4)
    {
        if (parts[3] == "log")
            spec.log_scale = true;
        else if (parts[3] != "lin")
            throw std::invalid_argument("sweep: scale must be 'log' or 'lin'");
    }
    validate(spec);
    return spec;
}

void validate(SweepSpec const& spec)
{
    auto const& names = param_names();
    if (std::find(names.begin(), names.end(), spec.name) == names.end())
        throw std::invalid_argument("sweep: unknown parameter '" + spec.name
                                    + "'");
    if (spec.n_points < 2)
        throw std::invalid_argument("sweep: need at least 2 points");
    if (!(spec.start < spec.stop))
        throw std::invalid_argument("sweep: start must be below stop");
    if (spec.log_scale && !(spec.start > 0))
        throw std::invalid_argument("sweep: log scale needs a positive start");
}

std::vector<SweepPoint>
expand_sweeps(NetworkParams const& base, std::vector<SweepSpec> const& sweeps)
{
    std::set<std::string> seen;
    std::vector<std::vector<double>> grids;
    for (auto const& s : sweeps)
    {
        if (!seen.insert(s.name).second)
            throw std::invalid_argument("sweep: parameter '" + s.name
                                        + "' swept twice");
        grids.push_back(s.values());
    }

    std::vector<SweepPoint> points{{base, {}}};
    for (std::size_t k = 0; k < sweeps.size(); ++k)
    {
        std::vector<SweepPoint> next;
        next.reserve(points.size() * grids[k].size());
        for (auto const& p : points)
        {
            for (double v : grids[k])
            {
                SweepPoint q = p;
                set_param(q.params, sweeps[k].name, v);
                q.coords.push_back(v);
                next.push_back(std::move(q));
            }
        }
        points = std::move(next);
    }
    return points;
}

}  // namespace rfh
