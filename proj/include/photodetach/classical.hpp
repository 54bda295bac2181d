#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "photodetach/laser.hpp"

namespace photodetach {

/// Uniformly sampled classical trajectory, starting at rest at the origin.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> x, y, vx, vy;

    std::size_t size() const { return times.size(); }
};

class TrajectoryBlowup : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Newton equations for an electron in the plane wave,
///   x'' = -eps0 f (1 - y'/c) cos(ky - wt + phi),  y'' = -(eps0/c) f x' cos(ky - wt + phi),
/// integrated by classic RK4 from rest at the origin. With pulse.dipole the
/// magnetic force is switched off entirely (x'' = -E_x, y'' = 0).
/// Requires dt <= T/200.
Trajectory integrate_newton(const PulseSpec& pulse, double t_end, double dt);

struct PhasePoint {
    double x = 0.0, y = 0.0, vx = 0.0, vy = 0.0;
};

/// Leading-order closed forms for the cosine pulse:
///   x = alpha0 (cos wt - 1), vy = (eps0^2 / 4w^2 c)(1 - cos 2wt).
/// The drift terms vanish for a dipole pulse.
PhasePoint simplified_trajectory(const PulseSpec& pulse, double t);

/// Turning points of the x-quiver for an electron at rest in the mean:
/// cosine (0, -2 alpha0), sine (+alpha0, -alpha0).
std::pair<double, double> turning_points(const PulseSpec& pulse);

/// Time average of vy over samples with t in [t_from, t_to].
double mean_vy(const Trajectory& tr, double t_from, double t_to);

}  // namespace photodetach
