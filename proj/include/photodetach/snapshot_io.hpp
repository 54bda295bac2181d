#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "photodetach/classical.hpp"
#include "photodetach/grid.hpp"
#include "photodetach/observables.hpp"

namespace photodetach {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Little-endian snapshot file:
///   "W2DF" | u32 version=1 | u32 kind | u32 nx | u32 ny |
///   f64 x0 | f64 y0 | f64 dx | f64 dy | f64 t | payload
/// kind 1: complex samples as (re, im) pairs; kind 2: real density.
/// Row-major, x fastest. 1D files have ny = 1 (y0 = 0, dy = 1).
enum class SnapshotKind : std::uint32_t { complex_field = 1, density = 2 };

struct Snapshot {
    SnapshotKind kind = SnapshotKind::complex_field;
    std::uint32_t nx = 0, ny = 0;
    double x0 = 0.0, y0 = 0.0, dx = 0.0, dy = 0.0, t = 0.0;
    std::vector<double> payload;

    bool one_dimensional() const { return ny == 1; }
    ComplexField2D complex2d() const;
    ComplexField1D complex1d() const;
};

void write_snapshot(const std::string& path, const ComplexField2D& psi, double t);
void write_snapshot(const std::string& path, const ComplexField1D& psi, double t);
void write_density(const std::string& path, const ComplexField2D& psi, double t);
void write_density(const std::string& path, const RealField2D& field, double t);
Snapshot read_snapshot(const std::string& path);

/// Header t,norm,pop0,mean_x,mean_y, 17 significant digits.
void write_timeseries_csv(const std::string& path, const RunRecord& record);
/// Header t,x,y,vx,vy,x_simplified,y_simplified. The simplified columns are
/// nan when no closed form exists (sine phase).
void write_trajectory_csv(const std::string& path, const Trajectory& tr, const PulseSpec& pulse);

/// 16-bit binary PGM of |psi|^2 scaled to its maximum, +y up. With
/// log_floor > 0 the grey level is log(max(rho, floor)) mapped onto [floor, max].
void write_pgm(const std::string& path, const ComplexField2D& psi, double log_floor = 0.0);

}  // namespace photodetach
