#include "photodetach/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace photodetach {

namespace {

void require_positive(double v, const char* what)
{
    if (!std::isfinite(v) || v <= 0.0) throw std::invalid_argument(std::string(what) + " must be finite and positive");
}

// Sub-samples per axis used for cell averaging of boundary cells.
constexpr int kCellSamples = 16;

}  // namespace

void WellSpec2D::validate() const
{
    require_positive(radius, "well radius");
    require_positive(depth, "well depth");
}

void WellSpec1D::validate() const
{
    require_positive(half_width, "well half_width");
    require_positive(depth, "well depth");
}

void SoftCoreSpec1D::validate() const
{
    require_positive(strength, "soft-core strength");
    require_positive(smoothing, "soft-core smoothing");
}

void KHSpec::validate() const
{
    well.validate();
    require_positive(eps0, "eps0");
    require_positive(omega, "omega");
}

double well2d_value(const WellSpec2D& spec, double x, double y)
{
    return (x * x + y * y < spec.radius * spec.radius) ? -spec.depth : 0.0;
}

RealField2D well2d(const WellSpec2D& spec, const Grid2D& grid, WellSampling sampling)
{
    spec.validate();
    RealField2D v(grid);
    const double half_diag = 0.5 * std::hypot(grid.dx, grid.dy);
    for (std::size_t j = 0; j < grid.ny; ++j) {
        const double y = grid.y(j);
        for (std::size_t i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i);
            if (sampling == WellSampling::point) {
                v[grid.index(i, j)] = well2d_value(spec, x, y);
                continue;
            }
            const double r = std::hypot(x, y);
            if (r + half_diag < spec.radius) {
                v[grid.index(i, j)] = -spec.depth;
            } else if (r - half_diag >= spec.radius) {
                v[grid.index(i, j)] = 0.0;
            } else {
                int inside = 0;
                for (int sy = 0; sy < kCellSamples; ++sy) {
                    const double yy = y + ((sy + 0.5) / kCellSamples - 0.5) * grid.dy;
                    for (int sx = 0; sx < kCellSamples; ++sx) {
                        const double xx = x + ((sx + 0.5) / kCellSamples - 0.5) * grid.dx;
                        if (xx * xx + yy * yy < spec.radius * spec.radius) ++inside;
                    }
                }
                v[grid.index(i, j)] = -spec.depth * inside / double(kCellSamples * kCellSamples);
            }
        }
    }
    return v;
}

namespace {

// Excursion X = alpha0 (1 - cos w tau) written as 2 alpha0 sin^2 near tau = 0 and
// as 2 alpha0 - 2 alpha0 cos^2 near the far turning point, so the edge tests
// stay exact where the well only grazes an end of the sweep.
struct SweptWell {
    double depth;
    double omega;
    double span;    // 2 alpha0
    double lo, hi;  // x - w, x + w
    double lo_far, hi_far;  // span - lo, span - hi
    double operator()(double tau) const
    {
        const double half = 0.5 * omega * tau;  // in [0, pi] over one period
        if (half <= 0.25 * std::numbers::pi || half >= 0.75 * std::numbers::pi) {
            const double s = std::sin(half);
            const double X = span * s * s;
            return (X > lo && X < hi) ? -depth : 0.0;
        }
        const double c = std::cos(half);
        const double D = span * c * c;  // span - X
        return (D < lo_far && D > hi_far) ? -depth : 0.0;
    }
};

// Phase in [0, pi] at which the excursion reaches s.
double crossing_phase(double s, double span)
{
    if (s <= 0.0) return 0.0;
    if (s >= span) return std::numbers::pi;
    if (2.0 * s < span) return 2.0 * std::asin(std::sqrt(s / span));
    return std::numbers::pi - 2.0 * std::asin(std::sqrt((span - s) / span));
}

// The integrand is piecewise constant in tau, so a panel whose three samples
// agree contributes exactly; otherwise it is halved until the jump is pinned.
double refine_panel(const SweptWell& f, double a, double b, double fa, double fb, int depth)
{
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fa == fm && fm == fb) || depth == 0) return fm * (b - a);
    return refine_panel(f, a, m, fa, fm, depth - 1) + refine_panel(f, m, b, fm, fb, depth - 1);
}

}  // namespace

double kh_numeric(const KHSpec& spec, double x, double y, std::size_t quad_points, KhQuadrature method)
{
    spec.validate();
    if (quad_points < 64) throw std::invalid_argument("kh_numeric needs at least 64 quadrature points");
    if (std::abs(y) >= spec.well.radius) return 0.0;
    const double period = 2.0 * std::numbers::pi / spec.omega;
    const double h = period / static_cast<double>(quad_points);
    const double w = std::sqrt(spec.well.radius * spec.well.radius - y * y);
    const double span = 2.0 * spec.quiver_amplitude();
    const SweptWell f{spec.well.depth, spec.omega, span, x - w, x + w, span - (x - w), span - (x + w)};
    double sum = 0.0;
    if (method == KhQuadrature::midpoint) {
        for (std::size_t m = 0; m < quad_points; ++m) sum += f((static_cast<double>(m) + 0.5) * h);
        return sum / static_cast<double>(quad_points);
    }
    double left = f(0.0);
    for (std::size_t m = 0; m < quad_points; ++m) {
        const double a = static_cast<double>(m) * h;
        const double b = static_cast<double>(m + 1) * h;
        const double right = f(b);
        sum += refine_panel(f, a, b, left, right, 56);
        left = right;
    }
    return sum / period;
}

double kh_analytic(const KHSpec& spec, double x, double y)
{
    const double a = spec.well.radius;
    if (std::abs(y) >= a) return 0.0;
    const double w = std::sqrt(a * a - y * y);
    const double span = 2.0 * spec.quiver_amplitude();
    return -(spec.well.depth / std::numbers::pi) * (crossing_phase(x + w, span) - crossing_phase(x - w, span));
}

RealField2D kh_field(const KHSpec& spec, const Grid2D& grid)
{
    spec.validate();
    RealField2D v(grid);
    for (std::size_t j = 0; j < grid.ny; ++j)
        for (std::size_t i = 0; i < grid.nx; ++i) v[grid.index(i, j)] = kh_analytic(spec, grid.x(i), grid.y(j));
    return v;
}

double well1d_value(const WellSpec1D& spec, double x) { return std::abs(x) < spec.half_width ? -spec.depth : 0.0; }

RealField1D well1d(const WellSpec1D& spec, const Grid1D& grid, WellSampling sampling)
{
    spec.validate();
    RealField1D v(grid);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double x = grid.x(i);
        if (sampling == WellSampling::point) {
            v[i] = well1d_value(spec, x);
        } else {
            const double lo = std::max(x - 0.5 * grid.dx, -spec.half_width);
            const double hi = std::min(x + 0.5 * grid.dx, spec.half_width);
            v[i] = -spec.depth * std::max(0.0, hi - lo) / grid.dx;
        }
    }
    return v;
}

double softcore1d_value(const SoftCoreSpec1D& spec, double x)
{
    return -spec.strength / std::sqrt(x * x + spec.smoothing);
}

RealField1D softcore1d(const SoftCoreSpec1D& spec, const Grid1D& grid)
{
    spec.validate();
    RealField1D v(grid);
    for (std::size_t i = 0; i < grid.n; ++i) v[i] = softcore1d_value(spec, grid.x(i));
    return v;
}

namespace {

// Even-parity matching function in units of the dimensionless z = k*w; its
// root in (0, pi/2) is the ground state.
double even_mismatch(double energy, const WellSpec1D& s)
{
    const double k = std::sqrt(2.0 * (s.depth + energy));
    const double kappa = std::sqrt(-2.0 * energy);
    return k * std::sin(k * s.half_width) - kappa * std::cos(k * s.half_width);
}

template <class F>
double bisect(F&& f, double lo, double hi, int iterations = 200)
{
    double flo = f(lo);
    for (int it = 0; it < iterations && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double well1d_ground_energy(const WellSpec1D& spec)
{
    spec.validate();
    // k*w ranges over (0, min(z0, pi/2)) on the ground branch, where z0 = w*sqrt(2*depth).
    const double z0 = spec.half_width * std::sqrt(2.0 * spec.depth);
    const double z_hi = std::min(z0, 0.5 * std::numbers::pi);
    const double e_lo = -spec.depth + 1e-300;
    const double e_hi = 0.5 * (z_hi / spec.half_width) * (z_hi / spec.half_width) - spec.depth;
    return bisect([&](double e) { return even_mismatch(e, spec); }, e_lo, std::min(e_hi, -1e-300));
}

int well1d_bound_state_count(const WellSpec1D& spec)
{
    spec.validate();
    const double z0 = spec.half_width * std::sqrt(2.0 * spec.depth);
    return 1 + static_cast<int>(std::floor(z0 / (0.5 * std::numbers::pi)));
}

WellSpec1D calibrate_well1d(double target_energy, double half_width)
{
    if (!std::isfinite(target_energy) || target_energy >= 0.0)
        throw std::invalid_argument("calibrate_well1d: target energy must be negative");
    if (!std::isfinite(half_width) || half_width <= 0.0)
        throw std::invalid_argument("calibrate_well1d: half_width must be positive");
    const double kappa = std::sqrt(-2.0 * target_energy);
    // With k = sqrt(2(depth+E)), k tan(k w) = kappa has its ground root for k*w in (0, pi/2).
    // A second (odd) state appears once w*sqrt(2*depth) reaches pi/2.
    const double k = bisect(
        [&](double kk) { return kk * std::sin(kk * half_width) - kappa * std::cos(kk * half_width); }, 0.0,
        0.5 * std::numbers::pi / half_width);
    WellSpec1D spec{half_width, 0.5 * k * k - target_energy};
    if (well1d_bound_state_count(spec) != 1)
        throw std::invalid_argument("calibrate_well1d: no single-bound-state well with this half_width reaches the target");
    return spec;
}

}  // namespace photodetach
