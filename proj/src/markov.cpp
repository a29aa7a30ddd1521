#include "rfh/markov.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "rfh/analytics.hpp"

namespace rfh
{
namespace
{
constexpr double row_sum_tolerance = 1e-12;
constexpr double pivot_tolerance = 1e-13;

// True if every state can reach every other along positive entries
bool is_irreducible(SquareMatrix const& p)
{
    std::size_t const n = p.size();
    for (std::size_t start = 0; start < n; ++start)
    {
        std::vector<bool> seen(n, false);
        std::vector<std::size_t> stack{start};
        seen[start] = true;
        while (!stack.empty())
        {
            auto i = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < n; ++j)
            {
                if (p(i, j) > 0 && !seen[j])
                {
                    seen[j] = true;
                    stack.push_back(j);
                }
            }
        }
        for (bool s : seen)
        {
            if (!s)
                return false;
        }
    }
    return true;
}

void require_stochastic(SquareMatrix const& p)
{
    for (std::size_t i = 0; i < p.size(); ++i)
    {
        double sum = 0;
        for (double v : p.row(i))
        {
            if (!(v >= 0 && v <= 1))
                throw std::domain_error("transition entry outside [0, 1] in row "
                                        + std::to_string(i));
            sum += v;
        }
        if (std::fabs(sum - 1) > row_sum_tolerance)
            throw std::domain_error("transition row " + std::to_string(i)
                                    + " does not sum to 1 (inconsistent zone "
                                      "probabilities?)");
    }
}
}  // namespace

//---------------------------------------------------------------------------//
SquareMatrix::SquareMatrix(
    std::initializer_list<std::initializer_list<double>> rows)
    : SquareMatrix(rows.size())
{
    std::size_t i = 0;
    for (auto const& r : rows)
    {
        if (r.size() != n_)
            throw std::invalid_argument("matrix rows must have equal length");
        std::size_t j = 0;
        for (double v : r)
            (*this)(i, j++) = v;
        ++i;
    }
}

//---------------------------------------------------------------------------//
SteadyState steady_state(SquareMatrix const& transition)
{
    std::size_t const n = transition.size();
    if (n == 0)
        throw std::invalid_argument("empty transition matrix");
    require_stochastic(transition);

    SteadyState result;
    result.reducible = !is_irreducible(transition);

    // Augmented system [A | b] with A = P^T - I, last row -> normalization
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t j = 0; j < n; ++j)
            a[i][j] = transition(j, i) - (i == j ? 1.0 : 0.0);
    }
    for (std::size_t j = 0; j < n; ++j)
        a[n - 1][j] = 1.0;
    a[n - 1][n] = 1.0;

    for (std::size_t col = 0; col < n; ++col)
    {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
        {
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col]))
                pivot = r;
        }
        if (std::fabs(a[pivot][col]) < pivot_tolerance)
        {
            result.degenerate = true;
            result.reducible = true;
            result.distribution.assign(n, 0.0);
            result.distribution[0] = 1.0;
            return result;
        }
        std::swap(a[col], a[pivot]);
        for (std::size_t r = 0; r < n; ++r)
        {
            if (r == col)
                continue;
            double const factor = a[r][col] / a[col][col];
            if (factor == 0)
                continue;
            for (std::size_t c = col; c <= n; ++c)
                a[r][c] -= factor * a[col][c];
        }
    }

    result.distribution.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        result.distribution[i] = a[i][n] / a[i][i];
    return result;
}

//---------------------------------------------------------------------------//
char const* to_string(ChainKind kind)
{
    switch (kind)
    {
        case ChainKind::single_slot:
            return "single-slot";
        case ChainKind::double_slot:
            return "double-slot";
        case ChainKind::multi_upper:
            return "multi-upper";
        case ChainKind::multi_lower:
            return "multi-lower";
    }
    return "unknown";
}

BatteryChain build_chain(ChainKind kind, ZoneProbabilities const& z)
{
    double const pg = z.p_g;
    double const ph = z.p_h;
    BatteryChain chain;
    chain.kind = kind;

    switch (kind)
    {
        case ChainKind::single_slot:
            chain.transition = SquareMatrix{{1 - ph, ph}, {pg, 1 - pg}};
            break;
        case ChainKind::double_slot:
            chain.transition = SquareMatrix{
                {1 - ph, z.p_2, z.p_1}, {0, 1 - ph, ph}, {pg, 0, 1 - pg}};
            break;
        case ChainKind::multi_upper:
            // Outer annulus credited with half a battery
            chain.transition = SquareMatrix{{1 - ph, z.p2_prime + z.p_3, z.p_1},
                                            {0, 1 - ph, ph},
                                            {pg, 0, 1 - pg}};
            break;
        case ChainKind::multi_lower: {
            // Outer annulus credited with nothing
            double const q = z.p_1 + z.p2_prime;
            chain.transition = SquareMatrix{
                {1 - q, z.p2_prime, z.p_1}, {0, 1 - q, q}, {pg, 0, 1 - pg}};
            break;
        }
    }

    chain.steady = steady_state(chain.transition);
    chain.p_full = chain.steady.distribution.back();
    chain.p_transmit = chain.p_full * pg;
    return chain;
}

}  // namespace rfh
