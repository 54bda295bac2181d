#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "photodetach/laser.hpp"

using namespace photodetach;
using std::numbers::pi;

namespace {

PulseSpec cosine_pulse(double eps0 = 15.0, bool dipole = false)
{
    PulseSpec p;
    p.eps0 = eps0;
    p.omega = 1.0;
    p.dipole = dipole;
    return p;
}

// Sixth-order central difference.
template <class F>
double derivative(F f, double x, double h)
{
    return (-f(x - 3 * h) + 9 * f(x - 2 * h) - 45 * f(x - h) + 45 * f(x + h) - 9 * f(x + 2 * h) + f(x + 3 * h)) /
           (60 * h);
}

}  // namespace

TEST_CASE("pulse kinematics")
{
    const auto p = cosine_pulse();
    CHECK(p.period() == doctest::Approx(2.0 * pi));
    CHECK(p.quiver_amplitude() == 15.0);
    CHECK(p.wavenumber() == doctest::Approx(1.0 / 137.035999));
    CHECK(cosine_pulse(15.0, true).wavenumber() == 0.0);
    CHECK(p.c == 137.035999);
}

TEST_CASE("pulse validation")
{
    auto p = cosine_pulse();
    p.omega = 0.0;
    CHECK_THROWS(p.validate());
    p = cosine_pulse(-1.0);
    CHECK_THROWS(p.validate());
    p = cosine_pulse();
    p.envelope = Envelope::trapezoid(0.0, 4.0);
    CHECK_THROWS(p.validate());
    CHECK_NOTHROW(cosine_pulse(0.0).validate());
}

TEST_CASE("vector potential values")
{
    const auto p = cosine_pulse();
    CHECK(vector_potential(p, 0.0, 0.0) == 0.0);
    // A = (eps0/w) sin(ky - wt): at wt = pi/2 the potential is -eps0/w.
    CHECK(vector_potential(p, 0.0, pi / 2.0) == doctest::Approx(-15.0));
    double peak = 0.0;
    for (int k = 0; k < 10000; ++k) peak = std::max(peak, std::abs(vector_potential(p, 0.0, k * 2.0 * pi / 10000.0)));
    CHECK(peak == doctest::Approx(15.0).epsilon(1e-6));
}

TEST_CASE("electric field values")
{
    const auto p = cosine_pulse();
    CHECK(electric_field(p, 0.0, 0.0) == 15.0);
    CHECK(std::abs(electric_field(p, 0.0, pi / 2.0)) < 1e-14);
    auto s = p;
    s.phase = PhaseKind::sine;
    CHECK(electric_field(s, 0.0, 0.7) == doctest::Approx(15.0 * std::sin(0.7)));

    const auto d = cosine_pulse(15.0, true);
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> uy(-100.0, 100.0), ut(0.0, 60.0);
    for (int n = 0; n < 50; ++n) {
        const double t = ut(rng);
        CHECK(electric_field(d, uy(rng), t) == electric_field(d, 0.0, t));
    }
}

TEST_CASE("magnetic field values")
{
    const auto p = cosine_pulse();
    CHECK(std::abs(magnetic_field(p, 0.0, 0.0)) == doctest::Approx(0.10946).epsilon(1e-4));
    CHECK(std::abs(magnetic_field(p, 0.0, 0.0)) == doctest::Approx(15.0 / 137.035999).epsilon(1e-14));
    const auto d = cosine_pulse(15.0, true);
    for (double t : {0.0, 0.3, 1.9, 7.1}) CHECK(magnetic_field(d, 2.0, t) == 0.0);

    std::mt19937 rng(2);
    std::uniform_real_distribution<double> uy(-50.0, 50.0), ut(0.0, 60.0);
    for (int n = 0; n < 100; ++n) {
        const double y = uy(rng), t = ut(rng);
        const double e = electric_field(p, y, t);
        if (std::abs(e) < 1e-6) continue;
        // With A_x = (eps0/w) sin(ky - wt) the plane wave has B_z = -E_x / c.
        CHECK(magnetic_field(p, y, t) / e == doctest::Approx(-1.0 / p.c).epsilon(1e-12));
    }
}

TEST_CASE("fields are derivatives of the vector potential")
{
    for (auto env : {Envelope::rectangular(0.0), Envelope::trapezoid(2.0, 3.0)}) {
        auto p = cosine_pulse();
        p.envelope = env;
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> uy(-30.0, 30.0), ut(0.05, 6.9 * 2.0 * pi);
        for (int n = 0; n < 100; ++n) {
            const double y = uy(rng), t = ut(rng);
            // Stay away from the envelope kinks.
            const double cyc = t / p.period();
            if (env.kind == Envelope::Kind::trapezoid &&
                (std::abs(cyc - 2.0) < 0.01 || std::abs(cyc - 5.0) < 0.01 || std::abs(cyc - 7.0) < 0.01))
                continue;
            const double dAdt = derivative([&](double s) { return vector_potential(p, y, s); }, t, 1e-3);
            const double dAdy = derivative([&](double s) { return vector_potential(p, s, t); }, y, 1e-1);
            CHECK(std::abs(electric_field(p, y, t) + dAdt) < 1e-8);
            CHECK(std::abs(magnetic_field(p, y, t) + dAdy) < 1e-8);
        }
    }
}

TEST_CASE("zero DC component and the free-electron velocity identity")
{
    const auto p = cosine_pulse();
    for (double y : {0.0, 13.0}) {
        double sum = 0.0;
        const int n = 4000;
        for (int k = 0; k < n; ++k) sum += electric_field(p, y, 3.1 + (k + 0.5) * p.period() / n);
        CHECK(std::abs(sum / n) < 1e-10);
    }
    for (double t : {0.4, 1.7, 3.3, 9.9}) {
        const double dX = derivative([&](double s) { return kh_excursion(p, s); }, t, 1e-3);
        CHECK(std::abs(-dX - vector_potential(p, 0.0, t)) < 1e-8);
        CHECK(vector_potential(p, 0.0, t) == doctest::Approx(-15.0 * std::sin(t)));
    }
}

TEST_CASE("kh excursion")
{
    const auto p = cosine_pulse();
    CHECK(kh_excursion(p, 0.0) == 0.0);
    CHECK(kh_excursion(p, pi) == doctest::Approx(30.0));
    CHECK(kh_excursion(p, pi / 2.0) == doctest::Approx(15.0));
    for (int k = 0; k < 1000; ++k) {
        const double x = kh_excursion(p, k * 0.01);
        CHECK(x >= -1e-12);
        CHECK(x <= 30.0 + 1e-12);
    }
    auto s = p;
    s.phase = PhaseKind::sine;
    CHECK(kh_excursion(s, pi / 2.0) == doctest::Approx(-15.0));
}

TEST_CASE("trapezoid envelope")
{
    auto p = cosine_pulse();
    p.envelope = Envelope::trapezoid(2.0, 6.0);
    const double T = p.period();
    CHECK(p.duration() == doctest::Approx(10.0 * T));
    CHECK(envelope_value(p, 0.0) == 0.0);
    CHECK(envelope_value(p, T) == doctest::Approx(0.5));
    CHECK(envelope_value(p, 4.0 * T) == 1.0);
    CHECK(envelope_value(p, 9.0 * T) == doctest::Approx(0.5));
    CHECK(envelope_value(p, 10.5 * T) == 0.0);
    CHECK(vector_potential(p, 0.0, 11.0 * T) == 0.0);
    // Excursion is the integral of -A; compare with a plain midpoint sum.
    const double t = 3.3 * T;
    double ref = 0.0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) ref -= vector_potential(p, 0.0, (k + 0.5) * t / n) * t / n;
    CHECK(kh_excursion(p, t) == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("rectangular envelope switches off")
{
    auto p = cosine_pulse();
    p.envelope = Envelope::rectangular(2.0);
    CHECK(envelope_value(p, 1.99 * p.period()) == 1.0);
    CHECK(envelope_value(p, 2.01 * p.period()) == 0.0);
    CHECK(electric_field(p, 0.0, 3.0 * p.period()) == 0.0);
    CHECK(envelope_value(cosine_pulse(), 1e6) == 1.0);
}
