#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rfh
{
struct ZoneProbabilities;

//---------------------------------------------------------------------------//
//! Dense row-major square matrix (the battery chains are 2x2 or 3x3).
class SquareMatrix
{
  public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}
    SquareMatrix(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t size() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const
    {
        return data_[i * n_ + j];
    }
    std::span<double const> row(std::size_t i) const
    {
        return {data_.data() + i * n_, n_};
    }

  private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

//---------------------------------------------------------------------------//
struct SteadyState
{
    std::vector<double> distribution;
    //! Chain is not irreducible (e.g. never charged, or never allowed out)
    bool reducible = false;
    //! Stationary law is not unique; distribution is all mass on state 0
    bool degenerate = false;
};

/*!
 * Stationary distribution of a row-stochastic matrix.
 *
 * Solves pi (P - I) = 0 with one balance equation replaced by the
 * normalization sum(pi) = 1, by Gaussian elimination with partial pivoting.
 * When the system is singular (several closed classes) the empty-battery
 * distribution [1, 0, ...] is returned with \c degenerate set.
 */
SteadyState steady_state(SquareMatrix const& transition);

//---------------------------------------------------------------------------//
enum class ChainKind
{
    single_slot,
    double_slot,
    multi_upper,
    multi_lower,
};

char const* to_string(ChainKind kind);

struct BatteryChain
{
    ChainKind kind{};
    SquareMatrix transition;
    SteadyState steady;
    double p_full = 0;      //!< battery full at slot start (last state)
    double p_transmit = 0;  //!< p_full * p_g
};

// Assemble the battery chain of the given kind and solve its steady state
BatteryChain build_chain(ChainKind kind, ZoneProbabilities const& zones);

}  // namespace rfh
