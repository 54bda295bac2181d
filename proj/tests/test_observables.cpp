#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "photodetach/observables.hpp"

using namespace photodetach;
using std::numbers::pi;

namespace {

ComplexField2D sample(const Grid2D& g, auto f)
{
    ComplexField2D out(g);
    for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t i = 0; i < g.nx; ++i) out[g.index(i, j)] = f(g.x(i), g.y(j));
    return out;
}

cplx ring(double x, double y, double cx, double radius, double width)
{
    const double r = std::hypot(x - cx, y);
    return std::exp(-(r - radius) * (r - radius) / (2.0 * width * width));
}

}  // namespace

TEST_CASE("population")
{
    const Grid2D g = make_grid(40, 40, 5.0, 5.0);
    const auto a = normalize(sample(g, [](double x, double y) { return std::exp(-(x * x + y * y)); }));
    const auto b = normalize(sample(g, [](double x, double y) { return x * std::exp(-(x * x + y * y)); }));
    CHECK(population(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(population(b, a)) < 1e-20);

    std::mt19937 rng(9);
    std::normal_distribution<double> n;
    ComplexField2D c(g);
    for (auto& v : c.values) v = {n(rng), n(rng)};
    CHECK(population(c, a) <= norm_squared(c) + 1e-10);
    CHECK_THROWS_AS(population(a, ComplexField2D(make_grid(40, 40, 5.0, 6.0))), GridMismatch);
}

TEST_CASE("expectation values")
{
    const Grid2D g = make_grid(81, 61, 8.0, 6.0);
    const auto even = sample(g, [](double x, double y) { return std::exp(-(x * x + 2.0 * y * y) / 3.0); });
    const auto [mx, my] = expectation_xy(even);
    CHECK(std::abs(mx) < 1e-10);
    CHECK(std::abs(my) < 1e-10);

    const double xs = 1.3;
    const auto shifted = sample(g, [&](double x, double y) { return std::exp(-((x - xs) * (x - xs) + 2.0 * y * y) / 3.0); });
    CHECK(std::abs(expectation_xy(shifted).first - xs) <= g.dx);

    // Normalised internally.
    ComplexField2D scaled = shifted;
    for (auto& v : scaled.values) v *= 0.1;
    CHECK(expectation_xy(scaled).first == doctest::Approx(expectation_xy(shifted).first).epsilon(1e-12));
    CHECK_THROWS(expectation_xy(ComplexField2D(g)));

    const Grid1D g1 = make_grid1d(101, 5.0);
    ComplexField1D f1(g1);
    for (std::size_t i = 0; i < g1.n; ++i) f1[i] = std::exp(-(g1.x(i) + 0.7) * (g1.x(i) + 0.7));
    CHECK(expectation_x(f1) == doctest::Approx(-0.7).epsilon(1e-6));
}

TEST_CASE("ring census of a single isotropic ring")
{
    const Grid2D g = make_grid(201, 201, 10.0, 10.0);
    const auto snap = sample(g, [](double x, double y) { return 0.1 * ring(x, y, 0.0, 5.0, 0.5); });
    const double centers[] = {0.0};
    const auto c = ring_census(snap, centers, 3.0);
    CHECK(c.time == 3.0);
    REQUIRE(c.count(0) == 1);
    CHECK(std::abs(c.ring_radii_per_center[0][0] - 5.0) <= g.dx);
}

TEST_CASE("ring census: two families, ordering and rotation")
{
    const Grid2D g = make_grid(241, 241, 30.0, 30.0);
    auto density = [](double x, double y) {
        const double phi = std::atan2(y, x);
        return 0.05 * (1.0 + 0.3 * std::cos(2.0 * phi)) * (ring(x, y, 0.0, 4.0, 0.6) + ring(x, y, 0.0, 9.0, 0.6)) +
               0.05 * ring(x, y, 16.0, 6.0, 0.6);
    };
    const auto snap = sample(g, density);
    const double centers[] = {0.0, 16.0};
    const auto c = ring_census(snap, centers);
    REQUIRE(c.ring_radii_per_center.size() == 2);
    const auto& r0 = c.ring_radii_per_center[0];
    REQUIRE(r0.size() >= 2);
    for (std::size_t k = 1; k < r0.size(); ++k) CHECK(r0[k] > r0[k - 1]);
    for (double r : r0) CHECK(r > 0.0);
    CHECK(std::abs(r0[0] - 4.0) <= g.dx);
    CHECK(std::abs(r0[1] - 9.0) <= g.dx);

    // Rotating an isotropic snapshot about the census centre leaves the radii alone.
    auto iso = [](double x, double y) { return 0.05 * (ring(x, y, 0.0, 4.0, 0.6) + ring(x, y, 0.0, 11.0, 0.8)); };
    const double th = 0.7;
    const auto a = ring_census(sample(g, iso), std::span<const double>(centers, 1));
    const auto b = ring_census(
        sample(g, [&](double x, double y) { return iso(std::cos(th) * x - std::sin(th) * y, std::sin(th) * x + std::cos(th) * y); }),
        std::span<const double>(centers, 1));
    REQUIRE(a.count(0) == b.count(0));
    for (std::size_t k = 0; k < a.count(0); ++k)
        CHECK(std::abs(a.ring_radii_per_center[0][k] - b.ring_radii_per_center[0][k]) <= g.dx);
}

TEST_CASE("ring census: floor and empty input")
{
    const Grid2D g = make_grid(101, 101, 10.0, 10.0);
    const double centers[] = {0.0};
    CHECK(ring_census(ComplexField2D(g), centers).count(0) == 0);
    // |psi|^2 peaks at 1e-8, below the default floor.
    const auto faint = sample(g, [](double x, double y) { return 1e-4 * ring(x, y, 0.0, 5.0, 0.5); });
    CHECK(ring_census(faint, centers).count(0) == 0);
    RingCensusOptions opt;
    opt.floor = 1e-9;
    CHECK(ring_census(faint, centers, 0.0, opt).count(0) == 1);
}

TEST_CASE("subpeak contrast of constructed fringes")
{
    const Grid1D g = make_grid1d(4001, 40.0);
    ComplexField1D fringes(g);
    // rho = 0.01 (1 + 0.5 cos(2 pi x / 2.5)) on [-30, 0]: crests every 2.5.
    for (std::size_t i = 0; i < g.n; ++i)
        fringes[i] = std::sqrt(0.01 * (1.0 + 0.5 * std::cos(2.0 * pi * g.x(i) / 2.5)));
    const auto r = subpeak_contrast_1d(fringes, -30.0, 0.0);
    CHECK(r.count == 11);  // crests at multiples of 2.5; the two on the band edges do not count
    CHECK(r.contrast == doctest::Approx(0.5).epsilon(1e-3));

    ComplexField1D flat(g);
    for (auto& v : flat.values) v = 0.1;
    const auto f = subpeak_contrast_1d(flat, -30.0, 0.0);
    CHECK(f.count == 0);
    CHECK(f.contrast == 0.0);

    CHECK_THROWS(subpeak_contrast_1d(flat, 0.0, -30.0));
}

TEST_CASE("local maxima per window")
{
    std::vector<double> t, v;
    const double T = 2.0 * pi;
    for (int k = 0; k < 4000; ++k) {
        t.push_back(k * 4.0 * T / 4000.0);
        v.push_back(std::cos(2.0 * t.back() + 0.3));  // two maxima per period
    }
    const auto counts = local_maxima_per_window(t, v, T, 4);
    for (auto c : counts) CHECK(c == 2);
}

TEST_CASE("binding-centre positions")
{
    PulseSpec p;
    p.eps0 = 15.0;
    CHECK(kh_centers(p) == std::array<double, 2>{0.0, 30.0});
    p.phase = PhaseKind::sine;
    CHECK(kh_centers(p) == std::array<double, 2>{-15.0, 15.0});
}
