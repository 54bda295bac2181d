#pragma once

#include <cstddef>

#include "photodetach/grid.hpp"

namespace photodetach {

/// Radial square well: V = -depth for r < radius, 0 otherwise (r == radius is outside).
struct WellSpec2D {
    double radius = 1.0;
    double depth = 2.0;
    void validate() const;
};

struct WellSpec1D {
    double half_width = 0.5;
    double depth = 1.0;
    void validate() const;
};

/// V(x) = -strength / sqrt(x^2 + smoothing)
struct SoftCoreSpec1D {
    double strength = 1.0;
    double smoothing = 1.0;
    void validate() const;
};

/// Kramers-Henneberger average of a WellSpec2D driven by a cosine field of
/// amplitude eps0 and angular frequency omega.
struct KHSpec {
    WellSpec2D well;
    double eps0 = 15.0;
    double omega = 1.0;
    double quiver_amplitude() const { return eps0 / (omega * omega); }
    void validate() const;
};

/// How a discontinuous well is sampled onto grid nodes.
///  point:        value at the node (the reference contract).
///  cell_average: mean over the node's dx*dy cell. Removes most of the
///                staircase error of the circular boundary.
enum class WellSampling { point, cell_average };

double well2d_value(const WellSpec2D& spec, double x, double y);
RealField2D well2d(const WellSpec2D& spec, const Grid2D& grid, WellSampling sampling = WellSampling::point);

enum class KhQuadrature {
    midpoint,  // plain composite midpoint
    refined,   // composite midpoint; panels whose samples disagree are bisected down to the jump
};

/// Period average of the swept well by numerical quadrature over tau in [0, T).
double kh_numeric(const KHSpec& spec, double x, double y, std::size_t quad_points,
                  KhQuadrature method = KhQuadrature::refined);
/// Closed form of the same average.
double kh_analytic(const KHSpec& spec, double x, double y);
RealField2D kh_field(const KHSpec& spec, const Grid2D& grid);

double well1d_value(const WellSpec1D& spec, double x);
RealField1D well1d(const WellSpec1D& spec, const Grid1D& grid, WellSampling sampling = WellSampling::point);
double softcore1d_value(const SoftCoreSpec1D& spec, double x);
RealField1D softcore1d(const SoftCoreSpec1D& spec, const Grid1D& grid);

/// Even ground-state energy of the continuum 1D finite well (k tan(k w) = kappa).
double well1d_ground_energy(const WellSpec1D& spec);
/// Number of bound states of the continuum 1D finite well.
int well1d_bound_state_count(const WellSpec1D& spec);
/// Depth such that the ground state sits at target_energy and no second state is bound.
WellSpec1D calibrate_well1d(double target_energy, double half_width);

}  // namespace photodetach
