#include "photodetach/laser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace photodetach {

namespace {

double phase_offset(const PulseSpec& p) { return p.phase == PhaseKind::cosine ? 0.0 : 0.5 * std::numbers::pi; }

double carrier_phase(const PulseSpec& p, double y, double t)
{
    return p.wavenumber() * y - p.omega * t + phase_offset(p);
}

}  // namespace

double PulseSpec::period() const { return 2.0 * std::numbers::pi / omega; }

double PulseSpec::duration() const
{
    if (envelope.kind == Envelope::Kind::rectangular)
        return envelope.cycles > 0.0 ? envelope.cycles * period() : std::numeric_limits<double>::infinity();
    return (2.0 * envelope.ramp_cycles + envelope.flat_cycles) * period();
}

void PulseSpec::validate() const
{
    if (!std::isfinite(eps0) || eps0 < 0.0) throw std::invalid_argument("pulse eps0 must be non-negative");
    if (!std::isfinite(omega) || omega <= 0.0) throw std::invalid_argument("pulse omega must be positive");
    if (!(c > 0.0)) throw std::invalid_argument("speed of light must be positive");
    if (envelope.kind == Envelope::Kind::trapezoid) {
        if (!(envelope.ramp_cycles > 0.0) || envelope.flat_cycles < 0.0)
            throw std::invalid_argument("trapezoid envelope needs ramp_cycles > 0 and flat_cycles >= 0");
    }
}

double envelope_value(const PulseSpec& p, double t)
{
    if (t < 0.0) return 0.0;
    const double T = p.period();
    const auto& e = p.envelope;
    if (e.kind == Envelope::Kind::rectangular) return (e.cycles <= 0.0 || t < e.cycles * T) ? 1.0 : 0.0;
    const double ramp = e.ramp_cycles * T;
    const double flat_end = ramp + e.flat_cycles * T;
    const double end = flat_end + ramp;
    if (t < ramp) return t / ramp;
    if (t < flat_end) return 1.0;
    if (t < end) return (end - t) / ramp;
    return 0.0;
}

double envelope_derivative(const PulseSpec& p, double t)
{
    const auto& e = p.envelope;
    if (e.kind == Envelope::Kind::rectangular || t < 0.0) return 0.0;
    const double T = p.period();
    const double ramp = e.ramp_cycles * T;
    const double flat_end = ramp + e.flat_cycles * T;
    if (t < ramp) return 1.0 / ramp;
    if (t < flat_end) return 0.0;
    if (t < flat_end + ramp) return -1.0 / ramp;
    return 0.0;
}

double vector_potential(const PulseSpec& p, double y, double t)
{
    const double f = envelope_value(p, t);
    if (f == 0.0) return 0.0;
    return p.eps0 / p.omega * f * std::sin(carrier_phase(p, y, t));
}

double electric_field(const PulseSpec& p, double y, double t)
{
    const double f = envelope_value(p, t);
    const double df = envelope_derivative(p, t);
    if (f == 0.0 && df == 0.0) return 0.0;
    const double theta = carrier_phase(p, y, t);
    return p.eps0 * f * std::cos(theta) - p.eps0 / p.omega * df * std::sin(theta);
}

double magnetic_field(const PulseSpec& p, double y, double t)
{
    if (p.dipole) return 0.0;
    const double f = envelope_value(p, t);
    if (f == 0.0) return 0.0;
    return -p.eps0 / p.c * f * std::cos(carrier_phase(p, y, t));
}

double kh_excursion(const PulseSpec& p, double t)
{
    if (t <= 0.0) return 0.0;
    const double a0 = p.quiver_amplitude();
    const double wt = p.omega * t;
    if (p.envelope.kind == Envelope::Kind::rectangular && t <= p.duration()) {
        // -int_0^t (eps0/w) sin(-w t' + phi) dt'
        return p.phase == PhaseKind::cosine ? a0 * (1.0 - std::cos(wt)) : -a0 * std::sin(wt);
    }
    // General envelope: composite Simpson on a fine uniform mesh.
    const double end = std::min(t, p.duration());
    const auto n = static_cast<std::size_t>(std::ceil(end / p.period() * 400.0)) * 2 + 2;
    const double h = end / static_cast<double>(n);
    double s = vector_potential(p, 0.0, 0.0) + vector_potential(p, 0.0, end);
    for (std::size_t k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * vector_potential(p, 0.0, static_cast<double>(k) * h);
    // Once the field is off a zero-momentum electron stays put.
    return -s * h / 3.0;
}

}  // namespace photodetach
