#include "photodetach/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace photodetach {

double population(const ComplexField2D& psi, const ComplexField2D& psi0) { return std::norm(inner_product(psi0, psi)); }
double population(const ComplexField1D& psi, const ComplexField1D& psi0) { return std::norm(inner_product(psi0, psi)); }

std::pair<double, double> expectation_xy(const ComplexField2D& psi)
{
    const auto& g = psi.grid;
    double total = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t j = 0; j < g.ny; ++j) {
        double row = 0.0, row_x = 0.0;
        for (std::size_t i = 0; i < g.nx; ++i) {
            const double rho = std::norm(psi[g.index(i, j)]);
            row += rho;
            row_x += rho * g.x(i);
        }
        total += row;
        sx += row_x;
        sy += row * g.y(j);
    }
    if (!(total > 0.0)) throw std::invalid_argument("expectation_xy: zero field");
    return {sx / total, sy / total};
}

double expectation_x(const ComplexField1D& psi)
{
    double total = 0.0, sx = 0.0;
    for (std::size_t i = 0; i < psi.grid.n; ++i) {
        const double rho = std::norm(psi[i]);
        total += rho;
        sx += rho * psi.grid.x(i);
    }
    if (!(total > 0.0)) throw std::invalid_argument("expectation_x: zero field");
    return sx / total;
}

std::vector<double> radial_profile(const ComplexField2D& snapshot, double center_x, double bin_width)
{
    const auto& g = snapshot.grid;
    const double rmax = std::hypot(std::max(std::abs(g.x0 - center_x), std::abs(g.x_max() - center_x)),
                                   std::max(std::abs(g.y0), std::abs(g.y_max())));
    const auto nbins = static_cast<std::size_t>(rmax / bin_width) + 1;
    std::vector<double> sum(nbins, 0.0);
    std::vector<std::size_t> hits(nbins, 0);
    for (std::size_t j = 0; j < g.ny; ++j) {
        const double y = g.y(j);
        for (std::size_t i = 0; i < g.nx; ++i) {
            const double r = std::hypot(g.x(i) - center_x, y);
            const auto b = static_cast<std::size_t>(r / bin_width + 0.5);
            if (b >= nbins) continue;
            sum[b] += std::norm(snapshot[g.index(i, j)]);
            ++hits[b];
        }
    }
    for (std::size_t b = 0; b < nbins; ++b) sum[b] = hits[b] ? sum[b] / static_cast<double>(hits[b]) : 0.0;
    return sum;
}

namespace {

// Strict-rise, non-strict-fall local maxima so that flat-topped peaks count once.
std::vector<std::size_t> local_maxima(std::span<const double> v, double floor)
{
    std::vector<std::size_t> peaks;
    for (std::size_t k = 1; k + 1 < v.size(); ++k)
        if (v[k] > v[k - 1] && v[k] >= v[k + 1] && v[k] > floor) peaks.push_back(k);
    return peaks;
}

}  // namespace

RingCensus ring_census(const ComplexField2D& snapshot, std::span<const double> centers, double time,
                       const RingCensusOptions& options)
{
    RingCensus census;
    census.time = time;
    const double bin = std::max(snapshot.grid.dx, snapshot.grid.dy);
    const auto min_sep = static_cast<std::size_t>(std::ceil(options.min_separation_steps));
    for (double cx : centers) {
        const auto profile = radial_profile(snapshot, cx, bin);
        auto peaks = local_maxima(profile, options.floor);
        // Merge maxima closer than the separation threshold, keeping the taller one.
        std::vector<std::size_t> kept;
        for (auto p : peaks) {
            if (!kept.empty() && p - kept.back() < min_sep) {
                if (profile[p] > profile[kept.back()]) kept.back() = p;
                continue;
            }
            kept.push_back(p);
        }
        std::vector<double> radii;
        for (auto p : kept) radii.push_back(static_cast<double>(p) * bin);
        census.centers.push_back(cx);
        census.ring_radii_per_center.push_back(std::move(radii));
    }
    return census;
}

SubpeakReport subpeak_contrast_1d(const ComplexField1D& psi, double x_lo, double x_hi, double floor)
{
    if (!(x_lo < x_hi)) throw std::invalid_argument("subpeak_contrast_1d: x_lo must be below x_hi");
    std::vector<double> rho;
    for (std::size_t i = 0; i < psi.grid.n; ++i) {
        const double x = psi.grid.x(i);
        if (x >= x_lo && x <= x_hi) rho.push_back(std::norm(psi[i]));
    }
    SubpeakReport report;
    const auto peaks = local_maxima(rho, floor);
    report.count = peaks.size();
    if (peaks.size() < 2) return report;
    double visibility = 0.0;
    for (std::size_t k = 0; k + 1 < peaks.size(); ++k) {
        const auto first = rho.begin() + static_cast<std::ptrdiff_t>(peaks[k]);
        const auto last = rho.begin() + static_cast<std::ptrdiff_t>(peaks[k + 1]) + 1;
        const double valley = *std::min_element(first, last);
        const double crest = std::min(rho[peaks[k]], rho[peaks[k + 1]]);
        visibility += (crest - valley) / (crest + valley);
    }
    report.contrast = visibility / static_cast<double>(peaks.size() - 1);
    return report;
}

std::array<double, 2> kh_centers(const PulseSpec& pulse)
{
    const double a0 = pulse.quiver_amplitude();
    if (pulse.phase == PhaseKind::cosine) return {0.0, 2.0 * a0};
    return {-a0, a0};
}

std::vector<std::size_t> local_maxima_per_window(std::span<const double> times, std::span<const double> values,
                                                 double period, std::size_t n_windows)
{
    if (times.size() != values.size()) throw std::invalid_argument("local_maxima_per_window: length mismatch");
    std::vector<std::size_t> counts(n_windows, 0);
    for (auto k : local_maxima(values, -1.0)) {
        const auto w = static_cast<std::size_t>(std::floor(times[k] / period));
        if (w < n_windows) ++counts[w];
    }
    return counts;
}

}  // namespace photodetach
