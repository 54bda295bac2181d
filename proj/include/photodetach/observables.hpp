#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "photodetach/grid.hpp"
#include "photodetach/laser.hpp"

namespace photodetach {

struct SnapshotEntry {
    double t = 0.0;
    std::string path;
};

/// Time series of a propagation run plus the snapshots it produced.
struct RunRecord {
    std::vector<double> times;
    std::vector<double> norm;
    std::vector<double> pop0;
    std::vector<double> mean_x;
    std::vector<double> mean_y;
    std::vector<SnapshotEntry> snapshots;

    std::size_t size() const { return times.size(); }
};

/// |<psi0|psi>|^2
double population(const ComplexField2D& psi, const ComplexField2D& psi0);
double population(const ComplexField1D& psi, const ComplexField1D& psi0);

/// (<x>, <y>) normalised by ||psi||^2.
std::pair<double, double> expectation_xy(const ComplexField2D& psi);
double expectation_x(const ComplexField1D& psi);

struct RingCensusOptions {
    double floor = 1e-7;            // minimum angle-averaged density of a ring
    double min_separation_steps = 2.0;  // in units of the larger grid step
};

struct RingCensus {
    double time = 0.0;
    std::vector<double> centers;
    std::vector<std::vector<double>> ring_radii_per_center;

    std::size_t count(std::size_t center) const { return ring_radii_per_center.at(center).size(); }
};

/// Angle-averaged density about (center_x, 0), one bin per grid step.
std::vector<double> radial_profile(const ComplexField2D& snapshot, double center_x, double bin_width);

/// Rings are local maxima of the angle-averaged density around each centre.
/// Centres lie on the polarisation axis (y = 0).
RingCensus ring_census(const ComplexField2D& snapshot, std::span<const double> centers, double time = 0.0,
                       const RingCensusOptions& options = {});

struct SubpeakReport {
    std::size_t count = 0;
    double contrast = 0.0;
};

/// Counts local maxima of |psi|^2 above `floor` inside [x_lo, x_hi]. The
/// contrast is the mean fringe visibility (max-min)/(max+min) over pairs of
/// neighbouring sub-peaks, with min the deepest valley between them.
SubpeakReport subpeak_contrast_1d(const ComplexField1D& psi, double x_lo, double x_hi, double floor = 1e-6);

/// The two binding-centre positions seen by the quivering electron at integer
/// cycles: the extremes of kh_excursion over a cycle, release point first.
/// Cosine phase: (0, 2 alpha0). Sine phase: (-alpha0, +alpha0).
std::array<double, 2> kh_centers(const PulseSpec& pulse);

/// Number of strict local maxima of `values` whose sample time falls in each
/// window [k*period, (k+1)*period), k = 0..n_windows-1.
std::vector<std::size_t> local_maxima_per_window(std::span<const double> times, std::span<const double> values,
                                                 double period, std::size_t n_windows);

}  // namespace photodetach
