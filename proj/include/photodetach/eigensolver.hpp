#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "photodetach/grid.hpp"
#include "photodetach/potentials.hpp"

namespace photodetach {

template <class FieldT>
struct EigenResultT {
    double energy = 0.0;
    FieldT state;           // real up to a global phase, unit grid norm
    double residual = 0.0;  // ||H psi - E psi|| in the grid norm
    std::size_t iterations = 0;
};

using EigenResult = EigenResultT<ComplexField2D>;
using EigenResult1D = EigenResultT<ComplexField1D>;

class ConvergenceFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ImaginaryTimeOptions {
    double dt_imag = 0.05;
    double tol = 1e-12;  // on the Rayleigh-quotient change per step
    std::size_t max_iterations = 20000;
    // Filled with the Rayleigh quotient after every step when non-null.
    std::vector<double>* energy_trace = nullptr;
};

/// Ground state of -1/2 Laplacian + V (5-point / 3-point stencil, Dirichlet
/// boundary) by Crank-Nicolson imaginary-time stepping with renormalisation.
/// Stops once the Rayleigh quotient changes by less than tol per step and the
/// residual ||H psi - E psi|| is below 1e-7 ||H psi||.
/// A potential without a bound state converges to the lowest box state and
/// its (non-negative) energy is reported, not treated as an error.
EigenResult imaginary_time_ground(const RealField2D& potential, const ImaginaryTimeOptions& opt = {});
EigenResult1D imaginary_time_ground(const RealField1D& potential, const ImaginaryTimeOptions& opt = {});

struct LowlyingOptions {
    double residual_tol = 1e-9;  // relative: ||H psi - E psi|| <= tol * ||H psi||
    std::size_t max_iterations = 3000;
    std::size_t guard_vectors = 0;  // 0: automatic
};

/// n_states lowest eigenpairs of the discrete Hamiltonian, ascending, by
/// shift-and-invert block subspace iteration with Rayleigh-Ritz projection.
std::vector<EigenResult> lowlying_states(const RealField2D& potential, std::size_t n_states,
                                         const LowlyingOptions& opt = {});
std::vector<EigenResult1D> lowlying_states(const RealField1D& potential, std::size_t n_states,
                                           const LowlyingOptions& opt = {});

/// Number of eigenvalues of the discrete Hamiltonian strictly below `energy`,
/// from the inertia of an LDL^T factorisation of H - energy.
std::size_t count_states_below(const RealField2D& potential, double energy = 0.0);
std::size_t count_states_below(const RealField1D& potential, double energy = 0.0);

/// Applies the discrete Hamiltonian to a field.
ComplexField2D apply_hamiltonian(const RealField2D& potential, const ComplexField2D& psi);
ComplexField1D apply_hamiltonian(const RealField1D& potential, const ComplexField1D& psi);

/// s-wave ground energy of the continuum 2D circular well from matching
/// kappa J1(kappa a)/J0(kappa a) = gamma K1(gamma a)/K0(gamma a).
double well2d_energy_oracle(const WellSpec2D& spec);

}  // namespace photodetach
