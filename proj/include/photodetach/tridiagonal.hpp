#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>

namespace photodetach {

class SolverBreakdown : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thomas algorithm for a tridiagonal system with constant off-diagonals:
///   lower * x[i-1] + diag[i] * x[i] + upper * x[i+1] = rhs[i].
/// `x` may alias `rhs`. `scratch` must hold rhs.size() entries.
template <class T>
void solve_tridiagonal_const(T lower, std::span<const T> diag, T upper, std::span<const T> rhs, std::span<T> x,
                             std::span<T> scratch)
{
    const std::size_t n = diag.size();
    auto& cprime = scratch;
    T den = diag[0];
    if (std::abs(den) == 0.0) throw SolverBreakdown("tridiagonal solve: zero pivot");
    cprime[0] = upper / den;
    x[0] = rhs[0] / den;
    for (std::size_t i = 1; i < n; ++i) {
        den = diag[i] - lower * cprime[i - 1];
        if (std::abs(den) == 0.0) throw SolverBreakdown("tridiagonal solve: zero pivot");
        cprime[i] = upper / den;
        x[i] = (rhs[i] - lower * x[i - 1]) / den;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= cprime[i] * x[i + 1];
}

}  // namespace photodetach
