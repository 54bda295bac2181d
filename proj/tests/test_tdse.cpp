#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "photodetach/classical.hpp"
#include "photodetach/eigensolver.hpp"
#include "photodetach/propagator.hpp"

using namespace photodetach;
using std::numbers::pi;

namespace {

ComplexField2D gaussian(const Grid2D& g, double sigma, double x0 = 0.0, double kx = 0.0)
{
    ComplexField2D f(g);
    for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t i = 0; i < g.nx; ++i) {
            const double x = g.x(i) - x0, y = g.y(j);
            f[g.index(i, j)] = std::exp(-(x * x + y * y) / (2.0 * sigma * sigma)) * std::exp(cplx{0.0, kx * g.x(i)});
        }
    return normalize(f);
}

ComplexField1D gaussian1d(const Grid1D& g, double sigma)
{
    ComplexField1D f(g);
    for (std::size_t i = 0; i < g.n; ++i) f[i] = std::exp(-g.x(i) * g.x(i) / (2.0 * sigma * sigma));
    return normalize(f);
}

ComplexField2D random_state(const Grid2D& g, unsigned seed)
{
    std::mt19937 rng(seed);
    std::normal_distribution<double> n;
    ComplexField2D f(g);
    for (auto& v : f.values) v = {n(rng), n(rng)};
    return normalize(f);
}

PulseSpec pulse(double eps0, bool dipole)
{
    PulseSpec p;
    p.eps0 = eps0;
    p.omega = 1.0;
    p.dipole = dipole;
    return p;
}

double max_diff(const ComplexField2D& a, const ComplexField2D& b)
{
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

}  // namespace

TEST_CASE("free Gaussian autocorrelation follows the spreading law")
{
    const double sigma = 1.0;
    const Grid2D g = make_grid(321, 321, 6.4, 6.4);
    const auto psi0 = gaussian(g, sigma);
    const RealField2D V(g);
    AdiPropagator prop(g, V, pulse(0.0, true));
    PropagationState s{psi0, 0.0, 0};
    const double dt = 0.01;
    double worst = 0.0;
    for (int n = 1; n <= 100; ++n) {
        prop.step(s, dt);
        // Each Cartesian factor contributes (1 + i t / 2 sigma^2)^(-1/2).
        const double t = n * dt;
        const double expected = 1.0 / std::sqrt(1.0 + t * t / (4.0 * std::pow(sigma, 4)));
        worst = std::max(worst, std::abs(std::abs(inner_product(psi0, s.psi)) - expected));
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("steps without absorber are unitary")
{
    const Grid2D g = make_grid(64, 48, 10.0, 8.0);
    const auto V = well2d(WellSpec2D{1.0, 2.0}, g);
    for (bool dipole : {true, false}) {
        AdiPropagator prop(g, V, pulse(5.0, dipole));
        PropagationState s{random_state(g, 4), 0.0, 0};
        const double dt = 2.0 * pi / 2000.0;
        for (int n = 0; n < 2000; ++n) {
            const double before = norm_squared(s.psi);
            prop.step(s, dt);
            CHECK(std::abs(norm_squared(s.psi) - before) <= 1e-10);
        }
        CHECK(std::abs(norm_squared(s.psi) - 1.0) <= 1e-8);
    }
}

TEST_CASE("stepping forward then backward restores the state")
{
    const Grid2D g = make_grid(64, 64, 10.0, 10.0);
    const auto V = well2d(WellSpec2D{1.0, 2.0}, g);
    AdiPropagator prop(g, V, pulse(5.0, false));
    const auto psi0 = random_state(g, 5);
    PropagationState s{psi0, 1.234, 0};
    const double dt = 0.05;
    for (int n = 0; n < 20; ++n) prop.step(s, dt);
    for (int n = 0; n < 20; ++n) prop.step(s, -dt);
    ComplexField2D diff(g);
    for (std::size_t k = 0; k < g.size(); ++k) diff[k] = s.psi[k] - psi0[k];
    CHECK(std::sqrt(norm_squared(diff)) < 1e-8);
    CHECK(s.t == doctest::Approx(1.234).epsilon(1e-14));

    const Grid1D g1 = make_grid1d(256, 20.0);
    CnPropagator1D p1(g1, softcore1d(SoftCoreSpec1D{}, g1), pulse(5.0, true));
    const auto q0 = gaussian1d(g1, 1.5);
    PropagationState1D s1{q0, 0.3, 0};
    for (int n = 0; n < 30; ++n) p1.step(s1, dt);
    for (int n = 0; n < 30; ++n) p1.step(s1, -dt);
    double err = 0.0;
    for (std::size_t i = 0; i < g1.n; ++i) err += std::norm(s1.psi[i] - q0[i]) * g1.dx;
    CHECK(std::sqrt(err) < 1e-8);
}

TEST_CASE("dipole and infinite-c nondipole steps coincide")
{
    const Grid2D g = make_grid(48, 48, 8.0, 8.0);
    const auto V = well2d(WellSpec2D{1.0, 2.0}, g);
    auto nd = pulse(5.0, false);
    nd.c = 1e30;
    PropagationState a{random_state(g, 6), 0.0, 0}, b = a;
    AdiPropagator pa(g, V, pulse(5.0, true)), pb(g, V, nd);
    for (int n = 0; n < 50; ++n) {
        pa.step(a, 0.01);
        pb.step(b, 0.01);
    }
    CHECK(max_diff(a.psi, b.psi) < 1e-12);
}

TEST_CASE("weak fields: dipole and nondipole runs agree")
{
    const Grid2D g = make_grid(64, 64, 12.0, 12.0);
    const auto V = well2d(WellSpec2D{1.0, 2.0}, g, WellSampling::cell_average);
    const auto psi0 = imaginary_time_ground(V).state;
    PropagatorConfig cfg;
    cfg.steps_per_cycle = 400;
    ComplexField2D last[2];
    for (int d = 0; d < 2; ++d) {
        PropagationState s{psi0, 0.0, 0};
        AdiPropagator prop(g, V, pulse(0.1, d == 0));
        const double dt = cfg.time_step(prop.pulse());
        for (int n = 0; n < 400; ++n) prop.step(s, dt);
        last[d] = s.psi;
    }
    CHECK(std::abs(inner_product(last[0], last[1])) >= 0.999);
}

TEST_CASE("an eigenstate stays put without a field")
{
    const Grid2D g = make_grid(64, 64, 12.0, 12.0);
    const auto V = well2d(WellSpec2D{1.0, 2.0}, g, WellSampling::cell_average);
    const auto psi0 = imaginary_time_ground(V).state;
    PropagatorConfig cfg;
    cfg.steps_per_cycle = 200;
    cfg.observer_stride = 20;
    const auto rec = propagate(psi0, pulse(0.0, false), V, cfg, 3.0);
    for (double p : rec.pop0) CHECK(p >= 0.9999);
}

TEST_CASE("absorber: norm never increases")
{
    const Grid2D g = make_grid(64, 64, 10.0, 10.0);
    PropagatorConfig cfg;
    cfg.steps_per_cycle = 200;
    cfg.observer_stride = 1;
    cfg.absorber = {Absorber::Kind::mask, 2.0, 0.125};
    const auto rec = propagate(gaussian(g, 1.0, 0.0, 3.0), pulse(2.0, false), RealField2D(g), cfg, 2.0);
    for (std::size_t k = 1; k < rec.size(); ++k) CHECK(rec.norm[k] <= rec.norm[k - 1] + 1e-14);
    CHECK(rec.norm.back() < 0.99);
    CHECK(rec.norm.back() > 0.0);

    PropagatorConfig bad;
    bad.absorber = {Absorber::Kind::mask, 6.0, 0.125};  // half-range 10: must be < 5
    CHECK_THROWS(propagate(gaussian(g, 1.0), pulse(2.0, false), RealField2D(g), bad, 0.1));
}

TEST_CASE("run record bookkeeping")
{
    const Grid2D g = make_grid(32, 32, 8.0, 8.0);
    PropagatorConfig cfg;
    cfg.steps_per_cycle = 100;
    cfg.observer_stride = 7;
    const double T = 2.0 * pi;
    cfg.snapshot_times = {0.0, T, 1.5 * T, 5.0 * T};
    std::vector<double> seen;
    SnapshotSink2D sink = [&](double t, const ComplexField2D&) {
        seen.push_back(t);
        return std::string("snap");
    };
    const auto rec = propagate(gaussian(g, 1.0), pulse(1.0, false), RealField2D(g), cfg, 2.0, sink);
    CHECK(rec.times.size() == rec.norm.size());
    CHECK(rec.times.size() == rec.pop0.size());
    CHECK(rec.times.size() == rec.mean_x.size());
    CHECK(rec.times.size() == rec.mean_y.size());
    CHECK(rec.times.front() == 0.0);
    CHECK(rec.times.back() == 200.0 * (T / 100.0));
    CHECK(rec.times[1] == 7.0 * (T / 100.0));
    REQUIRE(seen.size() == 3);  // 5T lies beyond the run
    CHECK(seen[0] == 0.0);
    CHECK(seen[1] == 100.0 * (T / 100.0));
    CHECK(seen[2] == 150.0 * (T / 100.0));
    CHECK(rec.snapshots.size() == 3);
    for (std::size_t k = 0; k < rec.size(); ++k) {
        CHECK(rec.norm[k] > 0.0);
        CHECK(rec.norm[k] <= 1.0 + 1e-8);
        CHECK(rec.pop0[k] >= 0.0);
        CHECK(rec.pop0[k] <= rec.norm[k] + 1e-10);
    }
}

TEST_CASE("blow-up is reported with the step index")
{
    const Grid2D g = make_grid(16, 16, 4.0, 4.0);
    AdiPropagator prop(g, RealField2D(g), pulse(1.0, true));
    PropagationState s{gaussian(g, 1.0), 0.0, 0};
    prop.step(s, 0.01);
    s.psi[40] = {std::numeric_limits<double>::quiet_NaN(), 0.0};
    try {
        prop.step(s, 0.01);
        FAIL("expected NumericalBlowup");
    } catch (const NumericalBlowup& e) {
        CHECK(e.step() == 2);
    }
    CHECK_THROWS_AS(AdiPropagator(g, RealField2D(make_grid(16, 16, 4.0, 5.0)), pulse(1.0, true)), GridMismatch);
}

TEST_CASE("free electron in a dipole field follows the classical quiver")
{
    const Grid2D g = make_grid(128, 128, 12.0, 12.0);
    const auto p = pulse(1.0, true);
    PropagatorConfig cfg;
    cfg.steps_per_cycle = 400;
    cfg.observer_stride = 4;
    const auto rec = propagate(gaussian(g, 1.5), p, RealField2D(g), cfg, 1.0);
    double sum = 0.0;
    for (std::size_t k = 0; k < rec.size(); ++k) {
        const double d = rec.mean_x[k] - simplified_trajectory(p, rec.times[k]).x;
        sum += d * d;
    }
    CHECK(std::sqrt(sum / rec.size()) <= 0.01 * 2.0 * p.quiver_amplitude());
    CHECK(std::abs(rec.mean_y.back()) < 1e-10);
}

TEST_CASE("1D propagation: unitarity and free spreading")
{
    const Grid1D g = make_grid1d(1601, 16.0);
    const double sigma = 1.0;
    const auto psi0 = gaussian1d(g, sigma);
    CnPropagator1D prop(g, RealField1D(g), pulse(0.0, true));
    PropagationState1D s{psi0, 0.0, 0};
    for (int n = 1; n <= 100; ++n) {
        prop.step(s, 0.01);
        const double t = n * 0.01;
        CHECK(std::abs(norm_squared(s.psi) - 1.0) < 1e-10);
        const double expected = std::pow(1.0 + t * t / (4.0 * std::pow(sigma, 4)), -0.25);
        CHECK(std::abs(std::abs(inner_product(psi0, s.psi)) - expected) < 1e-4);
    }
}

TEST_CASE("results do not depend on the thread count")
{
    const Grid2D g = make_grid(150, 130, 10.0, 10.0);
    const auto V = well2d(WellSpec2D{1.0, 2.0}, g);
    ComplexField2D out[2];
    for (int run = 0; run < 2; ++run) {
        set_thread_count(run == 0 ? 1 : 3);
        AdiPropagator prop(g, V, pulse(5.0, false));
        PropagationState s{random_state(g, 8), 0.0, 0};
        for (int n = 0; n < 10; ++n) prop.step(s, 0.01);
        out[run] = s.psi;
    }
    set_thread_count(1);
    CHECK(out[0].values == out[1].values);
}
