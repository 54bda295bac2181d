#include "photodetach/classical.hpp"

#include <cmath>
#include <stdexcept>

namespace photodetach {

namespace {

struct Deriv {
    double x, y, vx, vy;
};

Deriv rhs(const PulseSpec& p, double t, const PhasePoint& s)
{
    const double ex = electric_field(p, s.y, t);
    if (p.dipole) return {s.vx, s.vy, -ex, 0.0};
    // F = -(E + v x B) with B along z.
    const double bz = magnetic_field(p, s.y, t);
    return {s.vx, s.vy, -ex - s.vy * bz, s.vx * bz};
}

PhasePoint advance(const PhasePoint& s, const Deriv& d, double h)
{
    return {s.x + h * d.x, s.y + h * d.y, s.vx + h * d.vx, s.vy + h * d.vy};
}

}  // namespace

Trajectory integrate_newton(const PulseSpec& pulse, double t_end, double dt)
{
    pulse.validate();
    if (!(dt > 0.0) || dt > pulse.period() / 200.0 * (1.0 + 1e-12))
        throw std::invalid_argument("integrate_newton: dt must lie in (0, T/200]");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("integrate_newton: bad t_end");

    const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
    Trajectory tr;
    tr.times.reserve(steps + 1);
    PhasePoint s;
    auto record = [&](double t) {
        tr.times.push_back(t);
        tr.x.push_back(s.x);
        tr.y.push_back(s.y);
        tr.vx.push_back(s.vx);
        tr.vy.push_back(s.vy);
    };
    record(0.0);
    for (std::size_t n = 0; n < steps; ++n) {
        const double t = static_cast<double>(n) * dt;
        const Deriv k1 = rhs(pulse, t, s);
        const Deriv k2 = rhs(pulse, t + 0.5 * dt, advance(s, k1, 0.5 * dt));
        const Deriv k3 = rhs(pulse, t + 0.5 * dt, advance(s, k2, 0.5 * dt));
        const Deriv k4 = rhs(pulse, t + dt, advance(s, k3, dt));
        s.x += dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
        s.y += dt / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
        s.vx += dt / 6.0 * (k1.vx + 2.0 * k2.vx + 2.0 * k3.vx + k4.vx);
        s.vy += dt / 6.0 * (k1.vy + 2.0 * k2.vy + 2.0 * k3.vy + k4.vy);
        if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.vx) || !std::isfinite(s.vy))
            throw TrajectoryBlowup("integrate_newton: non-finite state at step " + std::to_string(n + 1));
        record(static_cast<double>(n + 1) * dt);
    }
    return tr;
}

PhasePoint simplified_trajectory(const PulseSpec& pulse, double t)
{
    if (pulse.phase != PhaseKind::cosine) throw std::invalid_argument("simplified_trajectory: cosine phase only");
    const double w = pulse.omega;
    const double a0 = pulse.quiver_amplitude();
    PhasePoint p;
    p.x = a0 * (std::cos(w * t) - 1.0);
    p.vx = -(pulse.eps0 / w) * std::sin(w * t);
    if (!pulse.dipole) {
        const double drift = pulse.eps0 * pulse.eps0 / (4.0 * w * w * pulse.c);
        p.vy = drift * (1.0 - std::cos(2.0 * w * t));
        p.y = drift * (t - std::sin(2.0 * w * t) / (2.0 * w));
    }
    return p;
}

std::pair<double, double> turning_points(const PulseSpec& pulse)
{
    const double a0 = pulse.quiver_amplitude();
    if (pulse.phase == PhaseKind::cosine) return {0.0, -2.0 * a0};
    return {a0, -a0};
}

double mean_vy(const Trajectory& tr, double t_from, double t_to)
{
    // Trapezoid average over the sampled window.
    double sum = 0.0, span = 0.0;
    for (std::size_t k = 0; k + 1 < tr.size(); ++k) {
        if (tr.times[k] < t_from - 1e-12 || tr.times[k + 1] > t_to + 1e-12) continue;
        const double h = tr.times[k + 1] - tr.times[k];
        sum += 0.5 * h * (tr.vy[k] + tr.vy[k + 1]);
        span += h;
    }
    if (!(span > 0.0)) throw std::invalid_argument("mean_vy: empty window");
    return sum / span;
}

}  // namespace photodetach
