#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "photodetach/grid.hpp"
#include "photodetach/laser.hpp"
#include "photodetach/observables.hpp"

namespace photodetach {

/// Multiplicative edge mask cos(pi/2 * (width - d)/width)^strength applied
/// after every full step, d being the distance from the grid edge.
struct Absorber {
    enum class Kind { none, mask };
    Kind kind = Kind::none;
    double width = 0.0;
    double strength = 0.125;
};

struct PropagatorConfig {
    double dt = 0.0;                    // <= 0: derive from steps_per_cycle
    std::size_t steps_per_cycle = 2000;
    Absorber absorber;
    std::size_t observer_stride = 10;
    std::vector<double> snapshot_times;

    double time_step(const PulseSpec& pulse) const;
    void validate(double half_range) const;
};

struct PropagationState {
    ComplexField2D psi;
    double t = 0.0;
    std::size_t step = 0;
};

struct PropagationState1D {
    ComplexField1D psi;
    double t = 0.0;
    std::size_t step = 0;
};

class NumericalBlowup : public std::runtime_error {
public:
    NumericalBlowup(std::size_t step, const std::string& what)
        : std::runtime_error(what + " at step " + std::to_string(step)), step_(step)
    {
    }
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

/// Velocity-gauge propagator on a 2D grid,
///   H = (p_x + A(y,t))^2/2 + p_y^2/2 + V,
/// split into H_x = p_x^2/2 + A p_x + A^2/2 + V/2 and H_y = p_y^2/2 + V/2.
/// One step of size dt is the symmetric product of Crank-Nicolson (Cayley) factors
///   C_y(dt/2) C_x(dt; t + dt/2) C_y(dt/2),
/// each a batch of independent tridiagonal solves along one axis. Every factor
/// is exactly unitary, so without an absorber the norm is conserved to round-off.
/// A depends only on (y, t), so each x-row is a constant-coefficient system.
class AdiPropagator {
public:
    AdiPropagator(const Grid2D& grid, RealField2D potential, const PulseSpec& pulse, const Absorber& absorber = {});

    /// Advances state by dt (which may be negative), field evaluated at t + dt/2.
    void step(PropagationState& state, double dt);

    const Grid2D& grid() const { return grid_; }
    const PulseSpec& pulse() const { return pulse_; }

private:
    void sweep_x(ComplexField2D& psi, double dt, double t_mid);
    void sweep_y(ComplexField2D& psi);
    void factor_y(double dt_half);

    Grid2D grid_;
    RealField2D potential_;
    PulseSpec pulse_;
    std::vector<double> mask_;
    // Thomas factors of 1 + i (dt/4) H_y, one entry per grid point.
    double factored_dt_ = 0.0;
    std::vector<cplx> y_cprime_;
    std::vector<cplx> y_inv_pivot_;
    std::vector<cplx> y_diag_;
    cplx y_off_{};
};

/// Crank-Nicolson propagator for H = (p + A(t))^2/2 + V on a 1D grid (dipole only).
class CnPropagator1D {
public:
    CnPropagator1D(const Grid1D& grid, RealField1D potential, const PulseSpec& pulse, const Absorber& absorber = {});
    void step(PropagationState1D& state, double dt);
    const Grid1D& grid() const { return grid_; }

private:
    Grid1D grid_;
    RealField1D potential_;
    PulseSpec pulse_;
    std::vector<double> mask_;
    std::vector<cplx> diag_, rhs_, scratch_;
};

/// Single-step convenience wrappers.
PropagationState adi_step(PropagationState state, const PulseSpec& pulse, const RealField2D& potential,
                          const PropagatorConfig& cfg);
PropagationState1D cn1d_step(PropagationState1D state, const PulseSpec& pulse, const RealField1D& potential,
                             const PropagatorConfig& cfg);

/// Called at each requested snapshot time; returns the path written (or empty).
using SnapshotSink2D = std::function<std::string(double t, const ComplexField2D& psi)>;
using SnapshotSink1D = std::function<std::string(double t, const ComplexField1D& psi)>;

/// Advances psi0 by n_cycles periods, recording norm, <x>, <y> and the
/// initial-state population every observer_stride steps (and at the end).
RunRecord propagate(const ComplexField2D& psi0, const PulseSpec& pulse, const RealField2D& potential,
                    const PropagatorConfig& cfg, double n_cycles, const SnapshotSink2D& sink = {});
RunRecord propagate1d(const ComplexField1D& psi0, const PulseSpec& pulse, const RealField1D& potential,
                      const PropagatorConfig& cfg, double n_cycles, const SnapshotSink1D& sink = {});

/// Sets the worker count for row/column sweeps. Results do not depend on it.
void set_thread_count(int n);

}  // namespace photodetach
