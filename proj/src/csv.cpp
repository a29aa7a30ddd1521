#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include "rfh/cli.hpp"

namespace rfh
{
std::string format_number(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, end);
}

std::string format_bool(bool value)
{
    return value ? "true" : "false";
}

std::string csv_field(std::string_view text)
{
    if (text.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(text);
    std::string out = "\"";
    for (char c : text)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_csv(std::ostream& os,
               std::vector<std::string> const& comments,
               Table const& table)
{
    for (auto const& c : comments)
        os << "# " << c << '\n';
    auto write_row = [&](std::vector<std::string> const& row) {
        for (std::size_t i = 0; i < row.size(); ++i)
        {
            if (i)
                os << ',';
            os << csv_field(row[i]);
        }
        os << '\n';
    };
    write_row(table.columns);
    for (auto const& row : table.rows)
        write_row(row);
}

std::string to_csv(std::vector<std::string> const& comments, Table const& table)
{
    std::ostringstream os;
    write_csv(os, comments, table);
    return os.str();
}

}  // namespace rfh
