#include "photodetach/grid.hpp"

#include <cmath>
#include <string>

namespace photodetach {

namespace {

void require_extent(double v, const char* name)
{
    if (!std::isfinite(v) || v <= 0.0)
        throw std::invalid_argument(std::string(name) + " must be finite and positive");
}

// Row-wise partial sums combined in index order; the result does not depend
// on how many threads produced the rows.
template <class F>
cplx row_sum(std::size_t rows, std::size_t cols, F&& term)
{
    cplx total{};
    for (std::size_t j = 0; j < rows; ++j) {
        cplx row{};
        for (std::size_t i = 0; i < cols; ++i) row += term(j * cols + i);
        total += row;
    }
    return total;
}

}  // namespace

void Grid2D::validate() const
{
    if (nx < 8 || ny < 8) throw std::invalid_argument("grid needs at least 8 samples per axis");
    require_extent(dx, "dx");
    require_extent(dy, "dy");
    if (!std::isfinite(x0) || !std::isfinite(y0)) throw std::invalid_argument("grid origin must be finite");
}

void Grid1D::validate() const
{
    if (n < 8) throw std::invalid_argument("grid needs at least 8 samples");
    require_extent(dx, "dx");
    if (!std::isfinite(x0)) throw std::invalid_argument("grid origin must be finite");
}

Grid2D make_grid(std::size_t nx, std::size_t ny, double half_range_x, double half_range_y)
{
    require_extent(half_range_x, "half_range_x");
    require_extent(half_range_y, "half_range_y");
    return make_grid(nx, ny, -half_range_x, half_range_x, -half_range_y, half_range_y);
}

Grid2D make_grid(std::size_t nx, std::size_t ny, double x_lo, double x_hi, double y_lo, double y_hi)
{
    if (nx < 8 || ny < 8) throw std::invalid_argument("grid needs at least 8 samples per axis");
    if (!std::isfinite(x_lo) || !std::isfinite(x_hi) || !std::isfinite(y_lo) || !std::isfinite(y_hi))
        throw std::invalid_argument("grid extents must be finite");
    if (!(x_hi > x_lo) || !(y_hi > y_lo)) throw std::invalid_argument("grid extents must be non-empty");
    Grid2D g;
    g.nx = nx;
    g.ny = ny;
    g.x0 = x_lo;
    g.y0 = y_lo;
    g.dx = (x_hi - x_lo) / static_cast<double>(nx - 1);
    g.dy = (y_hi - y_lo) / static_cast<double>(ny - 1);
    g.validate();
    return g;
}

Grid1D make_grid1d(std::size_t n, double half_range)
{
    require_extent(half_range, "half_range");
    if (n < 8) throw std::invalid_argument("grid needs at least 8 samples");
    Grid1D g;
    g.n = n;
    g.x0 = -half_range;
    g.dx = 2.0 * half_range / static_cast<double>(n - 1);
    g.validate();
    return g;
}

cplx inner_product(const ComplexField2D& a, const ComplexField2D& b)
{
    if (!(a.grid == b.grid)) throw GridMismatch("inner_product: grids differ");
    const auto& av = a.values;
    const auto& bv = b.values;
    return row_sum(a.grid.ny, a.grid.nx, [&](std::size_t k) { return std::conj(av[k]) * bv[k]; }) *
           a.grid.cell_area();
}

cplx inner_product(const ComplexField1D& a, const ComplexField1D& b)
{
    if (!(a.grid == b.grid)) throw GridMismatch("inner_product: grids differ");
    cplx s{};
    for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
    return s * a.grid.dx;
}

double norm_squared(const ComplexField2D& psi)
{
    double total = 0.0;
    const std::size_t nx = psi.grid.nx;
    for (std::size_t j = 0; j < psi.grid.ny; ++j) {
        double row = 0.0;
        for (std::size_t i = 0; i < nx; ++i) row += std::norm(psi.values[j * nx + i]);
        total += row;
    }
    return total * psi.grid.cell_area();
}

double norm_squared(const ComplexField1D& psi)
{
    double s = 0.0;
    for (const auto& v : psi.values) s += std::norm(v);
    return s * psi.grid.dx;
}

namespace {

template <class FieldT>
FieldT normalize_impl(FieldT psi)
{
    const double n2 = norm_squared(psi);
    if (!(n2 > 0.0) || !std::isfinite(n2)) throw std::invalid_argument("normalize: field has zero or non-finite norm");
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& v : psi.values) v *= inv;
    return psi;
}

}  // namespace

ComplexField2D normalize(ComplexField2D psi) { return normalize_impl(std::move(psi)); }
ComplexField1D normalize(ComplexField1D psi) { return normalize_impl(std::move(psi)); }

bool all_finite(std::span<const cplx> values)
{
    for (const auto& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

}  // namespace photodetach
