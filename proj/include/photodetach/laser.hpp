#pragma once

namespace photodetach {

inline constexpr double kSpeedOfLight = 137.035999;

enum class PhaseKind { cosine, sine };

/// Pulse envelope. A rectangular envelope is switched on at full amplitude at
/// t = 0 and off after `cycles` periods (cycles <= 0 means never switched off).
/// A trapezoid ramps linearly over `ramp_cycles`, stays flat for `flat_cycles`
/// and ramps down symmetrically.
struct Envelope {
    enum class Kind { rectangular, trapezoid };
    Kind kind = Kind::rectangular;
    double cycles = 0.0;
    double ramp_cycles = 2.0;
    double flat_cycles = 6.0;

    static Envelope rectangular(double cycles) { return {Kind::rectangular, cycles, 0.0, 0.0}; }
    static Envelope trapezoid(double ramp, double flat) { return {Kind::trapezoid, 0.0, ramp, flat}; }
};

/// Linearly polarised plane wave travelling along +y with the field along x.
///
/// The carrier phase is theta = k*y - omega*t + phi with phi = 0 for the cosine
/// pulse and pi/2 for the sine pulse. The vector potential is the primitive:
///   A_x = (eps0/omega) f(t) sin(theta),  E_x = -dA_x/dt,  B_z = -dA_x/dy,
/// so that inside a flat envelope E_x = eps0 cos(theta), B_z = -(eps0/c) cos(theta).
/// k = omega/c without the dipole approximation and k = 0 with it.
struct PulseSpec {
    double eps0 = 15.0;
    double omega = 1.0;
    PhaseKind phase = PhaseKind::cosine;
    Envelope envelope = Envelope::rectangular(0.0);
    bool dipole = false;
    double c = kSpeedOfLight;

    double period() const;
    double wavenumber() const { return dipole ? 0.0 : omega / c; }
    double quiver_amplitude() const { return eps0 / (omega * omega); }
    double duration() const;  // infinite for an open rectangular envelope
    void validate() const;
};

double envelope_value(const PulseSpec& p, double t);
double envelope_derivative(const PulseSpec& p, double t);

double vector_potential(const PulseSpec& p, double y, double t);
double electric_field(const PulseSpec& p, double y, double t);
/// z-component of B; identically zero in the dipole approximation.
double magnetic_field(const PulseSpec& p, double y, double t);

/// Displacement of the binding centre seen from the free electron's rest frame,
/// X(t) = -int_0^t A(0,t') dt'. Cosine phase: X = alpha0 (1 - cos wt).
double kh_excursion(const PulseSpec& p, double t);

}  // namespace photodetach
