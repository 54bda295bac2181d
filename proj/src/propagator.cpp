#include "photodetach/propagator.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "photodetach/tridiagonal.hpp"

namespace photodetach {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr std::size_t kColumnChunk = 64;

std::vector<double> edge_mask_1d(std::size_t n, double x0, double dx, const Absorber& absorber)
{
    std::vector<double> m(n, 1.0);
    if (absorber.kind == Absorber::Kind::none) return m;
    const double xmax = x0 + static_cast<double>(n - 1) * dx;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = x0 + static_cast<double>(i) * dx;
        const double d = std::min(x - x0, xmax - x);
        if (d < absorber.width)
            m[i] = std::pow(std::cos(0.5 * std::numbers::pi * (absorber.width - d) / absorber.width), absorber.strength);
    }
    return m;
}

void validate_absorber(const Absorber& a, double half_range)
{
    if (a.kind == Absorber::Kind::none) return;
    if (!(a.width > 0.0) || !(a.width < 0.5 * half_range))
        throw std::invalid_argument("absorber width must be positive and below half the grid half-range");
    if (!(a.strength > 0.0)) throw std::invalid_argument("absorber strength must be positive");
}

}  // namespace

double PropagatorConfig::time_step(const PulseSpec& pulse) const
{
    if (dt > 0.0) return dt;
    return pulse.period() / static_cast<double>(steps_per_cycle);
}

void PropagatorConfig::validate(double half_range) const
{
    if (!(dt > 0.0) && steps_per_cycle == 0) throw std::invalid_argument("either dt or steps_per_cycle must be positive");
    if (!std::isfinite(dt)) throw std::invalid_argument("dt must be finite");
    if (observer_stride < 1) throw std::invalid_argument("observer_stride must be at least 1");
    validate_absorber(absorber, half_range);
    for (double t : snapshot_times)
        if (!(t >= 0.0)) throw std::invalid_argument("snapshot times must be non-negative");
}

void set_thread_count(int n) { omp_set_num_threads(std::max(1, n)); }

// ---------------------------------------------------------------------------
// 2D

AdiPropagator::AdiPropagator(const Grid2D& grid, RealField2D potential, const PulseSpec& pulse, const Absorber& absorber)
    : grid_(grid), potential_(std::move(potential)), pulse_(pulse)
{
    grid_.validate();
    pulse_.validate();
    if (!(potential_.grid == grid_)) throw GridMismatch("AdiPropagator: potential grid differs");
    validate_absorber(absorber, 0.5 * std::min(grid_.x_max() - grid_.x0, grid_.y_max() - grid_.y0));
    if (absorber.kind != Absorber::Kind::none) {
        const auto mx = edge_mask_1d(grid_.nx, grid_.x0, grid_.dx, absorber);
        const auto my = edge_mask_1d(grid_.ny, grid_.y0, grid_.dy, absorber);
        mask_.resize(grid_.size());
        for (std::size_t j = 0; j < grid_.ny; ++j)
            for (std::size_t i = 0; i < grid_.nx; ++i) mask_[grid_.index(i, j)] = mx[i] * my[j];
    }
}

void AdiPropagator::factor_y(double dt_half)
{
    const std::size_t nx = grid_.nx, ny = grid_.ny;
    const double a = 0.5 * dt_half;
    const double inv_dy2 = 1.0 / (grid_.dy * grid_.dy);
    y_off_ = -I * (0.5 * a * inv_dy2);
    y_diag_.resize(grid_.size());
    y_cprime_.resize(grid_.size());
    y_inv_pivot_.resize(grid_.size());
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i)
            y_diag_[j * nx + i] = 1.0 + I * a * (inv_dy2 + 0.5 * potential_[j * nx + i]);
    for (std::size_t i = 0; i < nx; ++i) {
        cplx inv = 1.0 / y_diag_[i];
        y_inv_pivot_[i] = inv;
        y_cprime_[i] = y_off_ * inv;
    }
    for (std::size_t j = 1; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const cplx den = y_diag_[j * nx + i] - y_off_ * y_cprime_[(j - 1) * nx + i];
            if (std::abs(den) == 0.0) throw SolverBreakdown("y sweep: zero pivot");
            const cplx inv = 1.0 / den;
            y_inv_pivot_[j * nx + i] = inv;
            y_cprime_[j * nx + i] = y_off_ * inv;
        }
    }
    factored_dt_ = dt_half;
}

// Solves (1 + i a H_y) psi' = (1 - i a H_y) psi for all columns at once,
// walking rows so that memory access stays contiguous.
void AdiPropagator::sweep_y(ComplexField2D& psi)
{
    const std::size_t nx = grid_.nx, ny = grid_.ny;
    const std::size_t nchunks = (nx + kColumnChunk - 1) / kColumnChunk;
    cplx* v = psi.values.data();
    const cplx off = y_off_;
#pragma omp parallel
    {
        std::vector<cplx> prev(kColumnChunk);
#pragma omp for schedule(static)
        for (std::size_t c = 0; c < nchunks; ++c) {
            const std::size_t i0 = c * kColumnChunk;
            const std::size_t i1 = std::min(nx, i0 + kColumnChunk);
            std::fill(prev.begin(), prev.end(), cplx{});
            for (std::size_t j = 0; j < ny; ++j) {
                cplx* row = v + j * nx;
                const cplx* up = (j + 1 < ny) ? v + (j + 1) * nx : nullptr;
                const cplx* wprev = (j > 0) ? v + (j - 1) * nx : nullptr;
                const cplx* diag = y_diag_.data() + j * nx;
                const cplx* inv = y_inv_pivot_.data() + j * nx;
                for (std::size_t i = i0; i < i1; ++i) {
                    const cplx orig = row[i];
                    const cplx neighbours = prev[i - i0] + (up ? up[i] : cplx{});
                    const cplx rhs = 2.0 * orig - (diag[i] * orig + off * neighbours);
                    const cplx w = wprev ? (rhs - off * wprev[i]) * inv[i] : rhs * inv[i];
                    prev[i - i0] = orig;
                    row[i] = w;
                }
            }
            for (std::size_t j = ny - 1; j-- > 0;) {
                cplx* row = v + j * nx;
                const cplx* next = v + (j + 1) * nx;
                const cplx* cp = y_cprime_.data() + j * nx;
                for (std::size_t i = i0; i < i1; ++i) row[i] -= cp[i] * next[i];
            }
        }
    }
}

// Solves (1 + i a H_x) psi' = (1 - i a H_x) psi row by row, a = dt/2.
void AdiPropagator::sweep_x(ComplexField2D& psi, double dt, double t_mid)
{
    const std::size_t nx = grid_.nx, ny = grid_.ny;
    const double a = 0.5 * dt;
    const double inv_dx2 = 1.0 / (grid_.dx * grid_.dx);
    const double inv_2dx = 0.5 / grid_.dx;
#pragma omp parallel
    {
        std::vector<cplx> diag(nx), rhs(nx), scratch(nx);
#pragma omp for schedule(static)
        for (std::size_t j = 0; j < ny; ++j) {
            const double A = vector_potential(pulse_, grid_.y(j), t_mid);
            const cplx lower{-a * A * inv_2dx, -0.5 * a * inv_dx2};
            const cplx upper{a * A * inv_2dx, -0.5 * a * inv_dx2};
            const double common = inv_dx2 + 0.5 * A * A;
            cplx* row = psi.values.data() + j * nx;
            const double* V = potential_.values.data() + j * nx;
            for (std::size_t i = 0; i < nx; ++i) {
                diag[i] = cplx{1.0, a * (common + 0.5 * V[i])};
                cplx m = diag[i] * row[i];
                if (i > 0) m += lower * row[i - 1];
                if (i + 1 < nx) m += upper * row[i + 1];
                rhs[i] = 2.0 * row[i] - m;
            }
            solve_tridiagonal_const<cplx>(lower, diag, upper, rhs, std::span<cplx>(row, nx), scratch);
        }
    }
}

void AdiPropagator::step(PropagationState& state, double dt)
{
    if (!(state.psi.grid == grid_)) throw GridMismatch("AdiPropagator::step: state grid differs");
    if (0.5 * dt != factored_dt_) factor_y(0.5 * dt);
    sweep_y(state.psi);
    sweep_x(state.psi, dt, state.t + 0.5 * dt);
    sweep_y(state.psi);
    if (!mask_.empty())
        for (std::size_t k = 0; k < mask_.size(); ++k) state.psi[k] *= mask_[k];
    ++state.step;
    state.t += dt;
    if (!all_finite(state.psi.span())) throw NumericalBlowup(state.step, "non-finite wavefunction");
}

// ---------------------------------------------------------------------------
// 1D

CnPropagator1D::CnPropagator1D(const Grid1D& grid, RealField1D potential, const PulseSpec& pulse,
                               const Absorber& absorber)
    : grid_(grid), potential_(std::move(potential)), pulse_(pulse)
{
    grid_.validate();
    pulse_.validate();
    if (!(potential_.grid == grid_)) throw GridMismatch("CnPropagator1D: potential grid differs");
    validate_absorber(absorber, 0.5 * (grid_.x_max() - grid_.x0));
    if (absorber.kind != Absorber::Kind::none) mask_ = edge_mask_1d(grid_.n, grid_.x0, grid_.dx, absorber);
    diag_.resize(grid_.n);
    rhs_.resize(grid_.n);
    scratch_.resize(grid_.n);
}

void CnPropagator1D::step(PropagationState1D& state, double dt)
{
    if (!(state.psi.grid == grid_)) throw GridMismatch("CnPropagator1D::step: state grid differs");
    const std::size_t n = grid_.n;
    const double a = 0.5 * dt;
    const double inv_dx2 = 1.0 / (grid_.dx * grid_.dx);
    const double A = vector_potential(pulse_, 0.0, state.t + 0.5 * dt);
    const cplx lower{-a * A * 0.5 / grid_.dx, -0.5 * a * inv_dx2};
    const cplx upper{a * A * 0.5 / grid_.dx, -0.5 * a * inv_dx2};
    auto& psi = state.psi.values;
    for (std::size_t i = 0; i < n; ++i) {
        diag_[i] = cplx{1.0, a * (inv_dx2 + 0.5 * A * A + potential_[i])};
        cplx m = diag_[i] * psi[i];
        if (i > 0) m += lower * psi[i - 1];
        if (i + 1 < n) m += upper * psi[i + 1];
        rhs_[i] = 2.0 * psi[i] - m;
    }
    solve_tridiagonal_const<cplx>(lower, diag_, upper, rhs_, psi, scratch_);
    if (!mask_.empty())
        for (std::size_t i = 0; i < n; ++i) psi[i] *= mask_[i];
    ++state.step;
    state.t += dt;
    if (!all_finite(state.psi.span())) throw NumericalBlowup(state.step, "non-finite wavefunction");
}

PropagationState adi_step(PropagationState state, const PulseSpec& pulse, const RealField2D& potential,
                          const PropagatorConfig& cfg)
{
    AdiPropagator prop(state.psi.grid, potential, pulse, cfg.absorber);
    prop.step(state, cfg.time_step(pulse));
    return state;
}

PropagationState1D cn1d_step(PropagationState1D state, const PulseSpec& pulse, const RealField1D& potential,
                             const PropagatorConfig& cfg)
{
    CnPropagator1D prop(state.psi.grid, potential, pulse, cfg.absorber);
    prop.step(state, cfg.time_step(pulse));
    return state;
}

// ---------------------------------------------------------------------------
// Runs

namespace {

struct Schedule {
    double dt;
    std::size_t total_steps;
    std::map<std::size_t, double> snapshots;  // step -> requested time
};

Schedule make_schedule(const PulseSpec& pulse, const PropagatorConfig& cfg, double n_cycles)
{
    if (!(n_cycles >= 0.0)) throw std::invalid_argument("n_cycles must be non-negative");
    Schedule s;
    s.dt = cfg.time_step(pulse);
    s.total_steps = static_cast<std::size_t>(std::llround(n_cycles * pulse.period() / s.dt));
    for (double t : cfg.snapshot_times) {
        const auto k = static_cast<std::size_t>(std::llround(t / s.dt));
        if (k <= s.total_steps) s.snapshots.emplace(k, t);
    }
    return s;
}

bool observe_now(std::size_t step, std::size_t total, std::size_t stride)
{
    return step % stride == 0 || step == total;
}

}  // namespace

RunRecord propagate(const ComplexField2D& psi0, const PulseSpec& pulse, const RealField2D& potential,
                    const PropagatorConfig& cfg, double n_cycles, const SnapshotSink2D& sink)
{
    const auto& g = psi0.grid;
    cfg.validate(0.5 * std::min(g.x_max() - g.x0, g.y_max() - g.y0));
    const Schedule sched = make_schedule(pulse, cfg, n_cycles);
    AdiPropagator prop(g, potential, pulse, cfg.absorber);
    PropagationState state{psi0, 0.0, 0};
    RunRecord record;

    auto observe = [&] {
        const double n2 = norm_squared(state.psi);
        const auto [mx, my] = expectation_xy(state.psi);
        record.times.push_back(state.t);
        record.norm.push_back(n2);
        record.pop0.push_back(population(state.psi, psi0));
        record.mean_x.push_back(mx);
        record.mean_y.push_back(my);
    };
    auto maybe_snapshot = [&] {
        auto it = sched.snapshots.find(state.step);
        if (it == sched.snapshots.end() || !sink) return;
        auto path = sink(state.t, state.psi);
        record.snapshots.push_back({state.t, std::move(path)});
    };

    observe();
    maybe_snapshot();
    for (std::size_t k = 1; k <= sched.total_steps; ++k) {
        prop.step(state, sched.dt);
        state.t = static_cast<double>(k) * sched.dt;
        if (observe_now(k, sched.total_steps, cfg.observer_stride)) observe();
        maybe_snapshot();
    }
    return record;
}

RunRecord propagate1d(const ComplexField1D& psi0, const PulseSpec& pulse, const RealField1D& potential,
                      const PropagatorConfig& cfg, double n_cycles, const SnapshotSink1D& sink)
{
    cfg.validate(0.5 * (psi0.grid.x_max() - psi0.grid.x0));
    const Schedule sched = make_schedule(pulse, cfg, n_cycles);
    CnPropagator1D prop(psi0.grid, potential, pulse, cfg.absorber);
    PropagationState1D state{psi0, 0.0, 0};
    RunRecord record;

    auto observe = [&] {
        record.times.push_back(state.t);
        record.norm.push_back(norm_squared(state.psi));
        record.pop0.push_back(population(state.psi, psi0));
        record.mean_x.push_back(expectation_x(state.psi));
        record.mean_y.push_back(0.0);
    };
    auto maybe_snapshot = [&] {
        auto it = sched.snapshots.find(state.step);
        if (it == sched.snapshots.end() || !sink) return;
        auto path = sink(state.t, state.psi);
        record.snapshots.push_back({state.t, std::move(path)});
    };

    observe();
    maybe_snapshot();
    for (std::size_t k = 1; k <= sched.total_steps; ++k) {
        prop.step(state, sched.dt);
        state.t = static_cast<double>(k) * sched.dt;
        if (observe_now(k, sched.total_steps, cfg.observer_stride)) observe();
        maybe_snapshot();
    }
    return record;
}

}  // namespace photodetach
