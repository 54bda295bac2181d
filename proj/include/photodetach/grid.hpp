#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace photodetach {

using cplx = std::complex<double>;

/// Uniform Cartesian sampling in 2D. Row-major storage with x as the fast index.
struct Grid2D {
    std::size_t nx = 0;
    std::size_t ny = 0;
    double x0 = 0.0;
    double y0 = 0.0;
    double dx = 0.0;
    double dy = 0.0;

    std::size_t size() const { return nx * ny; }
    std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }
    // Computed from the index every time; never accumulated.
    double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
    double y(std::size_t j) const { return y0 + static_cast<double>(j) * dy; }
    double cell_area() const { return dx * dy; }
    double x_max() const { return x(nx - 1); }
    double y_max() const { return y(ny - 1); }

    void validate() const;
    bool operator==(const Grid2D&) const = default;
};

struct Grid1D {
    std::size_t n = 0;
    double x0 = 0.0;
    double dx = 0.0;

    std::size_t size() const { return n; }
    double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
    double cell_area() const { return dx; }
    double x_max() const { return x(n - 1); }

    void validate() const;
    bool operator==(const Grid1D&) const = default;
};

/// Symmetric grid centred on the origin: dx = 2*half_range_x/(nx-1).
Grid2D make_grid(std::size_t nx, std::size_t ny, double half_range_x, double half_range_y);
/// Grid spanning an arbitrary rectangle [x_lo, x_hi] x [y_lo, y_hi], endpoints included.
Grid2D make_grid(std::size_t nx, std::size_t ny, double x_lo, double x_hi, double y_lo, double y_hi);
Grid1D make_grid1d(std::size_t n, double half_range);

class GridMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

template <class GridT, class T>
struct Field {
    GridT grid;
    std::vector<T> values;

    Field() = default;
    explicit Field(const GridT& g) : grid(g), values(g.size(), T{}) {}
    Field(const GridT& g, std::vector<T> v) : grid(g), values(std::move(v))
    {
        if (values.size() != grid.size())
            throw std::invalid_argument("field length does not match grid size");
    }

    std::size_t size() const { return values.size(); }
    T& operator[](std::size_t k) { return values[k]; }
    const T& operator[](std::size_t k) const { return values[k]; }
    std::span<T> span() { return values; }
    std::span<const T> span() const { return values; }
};

using ComplexField2D = Field<Grid2D, cplx>;
using ComplexField1D = Field<Grid1D, cplx>;
using RealField2D = Field<Grid2D, double>;
using RealField1D = Field<Grid1D, double>;

/// <a|b> = sum conj(a) b * cell area.
cplx inner_product(const ComplexField2D& a, const ComplexField2D& b);
cplx inner_product(const ComplexField1D& a, const ComplexField1D& b);

double norm_squared(const ComplexField2D& psi);
double norm_squared(const ComplexField1D& psi);

/// Returns psi/||psi||; throws on a zero field.
ComplexField2D normalize(ComplexField2D psi);
ComplexField1D normalize(ComplexField1D psi);

bool all_finite(std::span<const cplx> values);

}  // namespace photodetach
