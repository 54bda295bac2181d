#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "photodetach/eigensolver.hpp"
#include "photodetach/grid.hpp"
#include "photodetach/laser.hpp"
#include "photodetach/potentials.hpp"
#include "photodetach/propagator.hpp"

namespace photodetach {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GridBlock {
    std::size_t nx = 256;
    std::size_t ny = 256;
    double half_range_x = 20.0;
    double half_range_y = 20.0;
    double x_offset = 0.0;  // shifts the grid centre along x
};

struct PotentialBlock {
    enum class Family { well2d, kh, well1d, softcore1d };
    Family family = Family::well2d;
    WellSpec2D well2d;
    WellSampling sampling = WellSampling::cell_average;
    WellSpec1D well1d;
    std::optional<double> target_energy;  // well1d: calibrate depth to this ground energy
    SoftCoreSpec1D softcore;

    bool one_dimensional() const { return family == Family::well1d || family == Family::softcore1d; }
};

struct OutputBlock {
    std::string directory = "out";
    std::vector<double> snapshot_cycles;
    double log_floor = 0.0;  // 0: linear PGM scaling
    double ring_floor = 1e-7;
    double subpeak_floor = 1e-6;
};

/// Parsed and validated run description.
struct RunConfig {
    GridBlock grid;
    PotentialBlock potential;
    PulseSpec pulse;
    PropagatorConfig propagation;
    double n_cycles = 1.0;
    ImaginaryTimeOptions ground;
    OutputBlock output;

    Grid2D grid2d() const;
    Grid1D grid1d() const;
    RealField2D potential2d(const Grid2D& g) const;
    RealField1D potential1d(const Grid1D& g) const;
    void validate() const;
};

/// Line-oriented `section.key = value` text with `#` comments. Sections grid,
/// potential, pulse and propagation are required; ground and output are
/// optional. Unknown keys are errors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace photodetach
