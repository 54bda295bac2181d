#include "photodetach/eigensolver.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "photodetach/tridiagonal.hpp"

namespace photodetach {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Uniform view of the 5-point (2D) and 3-point (1D) Hamiltonians.
struct Stencil {
    std::size_t nx = 0, ny = 1;
    double cx = 0.0, cy = 0.0;  // 1/(2 dx^2), 1/(2 dy^2)
    double cell = 1.0;
    const double* V = nullptr;

    std::size_t size() const { return nx * ny; }

    void apply(const double* in, double* out) const
    {
        for (std::size_t j = 0; j < ny; ++j) {
            for (std::size_t i = 0; i < nx; ++i) {
                const std::size_t k = j * nx + i;
                double s = (2.0 * cx + 2.0 * cy + V[k]) * in[k];
                if (i > 0) s -= cx * in[k - 1];
                if (i + 1 < nx) s -= cx * in[k + 1];
                if (ny > 1) {
                    if (j > 0) s -= cy * in[k - nx];
                    if (j + 1 < ny) s -= cy * in[k + nx];
                }
                out[k] = s;
            }
        }
    }

    SpMat matrix(double shift) const
    {
        std::vector<Eigen::Triplet<double>> t;
        t.reserve(size() * 5);
        for (std::size_t j = 0; j < ny; ++j) {
            for (std::size_t i = 0; i < nx; ++i) {
                const auto k = static_cast<int>(j * nx + i);
                t.emplace_back(k, k, 2.0 * cx + (ny > 1 ? 2.0 * cy : 0.0) + V[k] - shift);
                if (i > 0) t.emplace_back(k, k - 1, -cx);
                if (i + 1 < nx) t.emplace_back(k, k + 1, -cx);
                if (ny > 1) {
                    if (j > 0) t.emplace_back(k, k - static_cast<int>(nx), -cy);
                    if (j + 1 < ny) t.emplace_back(k, k + static_cast<int>(nx), -cy);
                }
            }
        }
        SpMat m(static_cast<int>(size()), static_cast<int>(size()));
        m.setFromTriplets(t.begin(), t.end());
        return m;
    }

    double min_potential() const { return *std::min_element(V, V + size()); }
};

Stencil stencil_of(const RealField2D& v)
{
    v.grid.validate();
    return {v.grid.nx, v.grid.ny, 0.5 / (v.grid.dx * v.grid.dx), 0.5 / (v.grid.dy * v.grid.dy), v.grid.cell_area(),
            v.values.data()};
}

Stencil stencil_of(const RealField1D& v)
{
    v.grid.validate();
    return {v.grid.n, 1, 0.5 / (v.grid.dx * v.grid.dx), 0.0, v.grid.dx, v.values.data()};
}

double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

// Conjugate gradients for (1 + h H) x = b, warm-started from x.
void solve_shifted_cg(const Stencil& H, double h, const std::vector<double>& b, std::vector<double>& x)
{
    const std::size_t n = b.size();
    std::vector<double> r(n), p(n), Ap(n);
    auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
        H.apply(in.data(), out.data());
        for (std::size_t k = 0; k < n; ++k) out[k] = in[k] + h * out[k];
    };
    apply(x, Ap);
    for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - Ap[k];
    p = r;
    double rr = dot(r, r);
    const double target = 1e-28 * dot(b, b);
    for (std::size_t it = 0; it < 5000 && rr > target; ++it) {
        apply(p, Ap);
        const double alpha = rr / dot(p, Ap);
        for (std::size_t k = 0; k < n; ++k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * Ap[k];
        }
        const double rr_new = dot(r, r);
        const double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
    }
    if (rr > 1e-20 * dot(b, b)) throw ConvergenceFailure("imaginary-time linear solve did not converge");
}

// Exact Thomas solve for the 1D case.
void solve_shifted_1d(const Stencil& H, double h, const std::vector<double>& b, std::vector<double>& x)
{
    const std::size_t n = b.size();
    std::vector<double> diag(n), scratch(n);
    for (std::size_t k = 0; k < n; ++k) diag[k] = 1.0 + h * (2.0 * H.cx + H.V[k]);
    solve_tridiagonal_const<double>(-h * H.cx, diag, -h * H.cx, b, x, scratch);
}

std::vector<double> initial_guess(const Stencil& H, double x0, double dx, double y0, double dy)
{
    // Gaussian at the depth-weighted centre of the potential (grid centre if V is flat).
    const double vmax = *std::max_element(H.V, H.V + H.size());
    double wsum = 0.0, cx = 0.0, cy = 0.0;
    for (std::size_t j = 0; j < H.ny; ++j)
        for (std::size_t i = 0; i < H.nx; ++i) {
            const double w = vmax - H.V[j * H.nx + i];
            wsum += w;
            cx += w * (x0 + static_cast<double>(i) * dx);
            cy += w * (y0 + static_cast<double>(j) * dy);
        }
    const double xc = wsum > 0.0 ? cx / wsum : x0 + 0.5 * static_cast<double>(H.nx - 1) * dx;
    const double yc = wsum > 0.0 ? cy / wsum : y0 + 0.5 * static_cast<double>(H.ny - 1) * dy;
    const double lx = static_cast<double>(H.nx - 1) * dx;
    const double ly = H.ny > 1 ? static_cast<double>(H.ny - 1) * dy : lx;
    const double s = 0.15 * std::min(lx, ly);
    std::vector<double> g(H.size());
    for (std::size_t j = 0; j < H.ny; ++j)
        for (std::size_t i = 0; i < H.nx; ++i) {
            const double x = x0 + static_cast<double>(i) * dx - xc;
            const double y = H.ny > 1 ? y0 + static_cast<double>(j) * dy - yc : 0.0;
            g[j * H.nx + i] = std::exp(-(x * x + y * y) / (2.0 * s * s));
        }
    return g;
}

constexpr double kResidualFraction = 1e-7;

struct RawEigen {
    double energy;
    std::vector<double> state;  // unit grid norm
    double residual;
    std::size_t iterations;
};

RawEigen imaginary_time_impl(const Stencil& H, std::vector<double> psi, const ImaginaryTimeOptions& opt)
{
    if (!(opt.dt_imag > 0.0) || !(opt.tol > 0.0)) throw std::invalid_argument("imaginary time: dt and tol must be positive");
    const double h = 0.5 * opt.dt_imag;
    if (1.0 + h * H.min_potential() <= 0.0)
        throw std::invalid_argument("imaginary time: dt_imag too large for this potential depth");
    const std::size_t n = psi.size();
    std::vector<double> Hpsi(n), rhs(n);
    auto normalise = [&](std::vector<double>& v) {
        const double nrm = std::sqrt(dot(v, v) * H.cell);
        for (auto& e : v) e /= nrm;
    };
    normalise(psi);
    H.apply(psi.data(), Hpsi.data());
    double energy = dot(psi, Hpsi) * H.cell;
    for (std::size_t it = 1; it <= opt.max_iterations; ++it) {
        for (std::size_t k = 0; k < n; ++k) rhs[k] = psi[k] - h * Hpsi[k];
        if (H.ny == 1)
            solve_shifted_1d(H, h, rhs, psi);
        else
            solve_shifted_cg(H, h, rhs, psi);
        normalise(psi);
        H.apply(psi.data(), Hpsi.data());
        const double e_new = dot(psi, Hpsi) * H.cell;
        if (opt.energy_trace) opt.energy_trace->push_back(e_new);
        const double change = std::abs(e_new - energy);
        energy = e_new;
        if (change < opt.tol) {
            // The energy settles quadratically faster than the state; also wait for the residual.
            double res = 0.0;
            for (std::size_t k = 0; k < n; ++k) res += (Hpsi[k] - energy * psi[k]) * (Hpsi[k] - energy * psi[k]);
            if (std::sqrt(res) <= kResidualFraction * std::sqrt(dot(Hpsi, Hpsi)))
                return {energy, std::move(psi), std::sqrt(res * H.cell), it};
        }
    }
    throw ConvergenceFailure("imaginary-time propagation did not converge within the iteration cap");
}

void fix_phase(std::vector<double>& v)
{
    const auto it = std::max_element(v.begin(), v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (it != v.end() && *it < 0.0)
        for (auto& e : v) e = -e;
}

std::vector<RawEigen> lowlying_impl(const Stencil& H, std::size_t n_states, const LowlyingOptions& opt)
{
    const std::size_t N = H.size();
    if (n_states < 1) throw std::invalid_argument("lowlying_states: need at least one state");
    const std::size_t guard = opt.guard_vectors ? opt.guard_vectors : std::max<std::size_t>(4, n_states);
    const std::size_t m = std::min(N, n_states + guard);
    if (n_states > m || n_states + 1 > N) throw ConvergenceFailure("lowlying_states: more states requested than the grid supports");

    const SpMat Hm = H.matrix(0.0);
    SpMat identity(static_cast<int>(N), static_cast<int>(N));
    identity.setIdentity();

    // H >= min V for the Dirichlet Laplacian, so this shift is below the spectrum.
    double sigma = H.min_potential() - 1e-2 * (1.0 + std::abs(H.min_potential()));
    Eigen::SimplicialLDLT<SpMat> ldlt;
    auto factor = [&](double s) {
        ldlt.compute(Hm - s * identity);
        return ldlt.info() == Eigen::Success && (ldlt.vectorD().array() <= 0.0).count() == 0;
    };
    if (!factor(sigma)) throw ConvergenceFailure("lowlying_states: factorisation failed");

    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> normal;
    Mat X(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(m));
    for (Eigen::Index c = 0; c < X.cols(); ++c)
        for (Eigen::Index r = 0; r < X.rows(); ++r) X(r, c) = normal(rng);

    bool refined = false;
    Vec theta;
    Mat HX;
    std::vector<double> res(n_states);
    for (std::size_t it = 1; it <= opt.max_iterations; ++it) {
        Mat Y = ldlt.solve(X);
        Eigen::HouseholderQR<Mat> qr(Y);
        Mat Q = qr.householderQ() * Mat::Identity(Y.rows(), Y.cols());
        Mat HQ = Hm * Q;
        Mat T = Q.transpose() * HQ;
        T = 0.5 * (T + T.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Mat> es(T);
        theta = es.eigenvalues();
        X = Q * es.eigenvectors();
        HX = HQ * es.eigenvectors();

        bool done = true;
        for (std::size_t k = 0; k < n_states; ++k) {
            const auto kk = static_cast<Eigen::Index>(k);
            const double r = (HX.col(kk) - theta(kk) * X.col(kk)).norm();
            res[k] = r;
            if (r > opt.residual_tol * HX.col(kk).norm()) done = false;
        }
        if (done) {
            std::vector<RawEigen> out;
            const double scale = 1.0 / std::sqrt(H.cell);
            for (std::size_t k = 0; k < n_states; ++k) {
                const auto kk = static_cast<Eigen::Index>(k);
                std::vector<double> v(X.col(kk).data(), X.col(kk).data() + N);
                for (auto& e : v) e *= scale;
                fix_phase(v);
                out.push_back({theta(kk), std::move(v), res[k], it});
            }
            return out;
        }
        // Once the lowest pair has settled, move the shift just below it.
        if (!refined && m > n_states && res[0] < 0.1 * (theta(1) - theta(0))) {
            const double gap = theta(static_cast<Eigen::Index>(n_states)) - theta(0);
            const double candidate = theta(0) - std::max({0.25 * gap, 10.0 * res[0], 1e-12});
            refined = true;
            if (candidate > sigma && !factor(candidate)) {
                factor(sigma);
            } else if (candidate > sigma) {
                sigma = candidate;
            }
        }
    }
    throw ConvergenceFailure("lowlying_states: subspace iteration did not converge");
}

std::size_t count_below_impl(const Stencil& H, double energy)
{
    Eigen::SimplicialLDLT<SpMat> ldlt(H.matrix(energy));
    if (ldlt.info() != Eigen::Success) throw ConvergenceFailure("count_states_below: factorisation failed");
    return static_cast<std::size_t>((ldlt.vectorD().array() < 0.0).count());
}

template <class FieldT>
FieldT to_field(const decltype(FieldT::grid)& g, const std::vector<double>& v)
{
    FieldT f(g);
    for (std::size_t k = 0; k < v.size(); ++k) f[k] = cplx{v[k], 0.0};
    return f;
}

}  // namespace

EigenResult imaginary_time_ground(const RealField2D& potential, const ImaginaryTimeOptions& opt)
{
    const Stencil H = stencil_of(potential);
    const auto& g = potential.grid;
    auto raw = imaginary_time_impl(H, initial_guess(H, g.x0, g.dx, g.y0, g.dy), opt);
    return {raw.energy, to_field<ComplexField2D>(g, raw.state), raw.residual, raw.iterations};
}

EigenResult1D imaginary_time_ground(const RealField1D& potential, const ImaginaryTimeOptions& opt)
{
    const Stencil H = stencil_of(potential);
    const auto& g = potential.grid;
    auto raw = imaginary_time_impl(H, initial_guess(H, g.x0, g.dx, 0.0, 0.0), opt);
    return {raw.energy, to_field<ComplexField1D>(g, raw.state), raw.residual, raw.iterations};
}

std::vector<EigenResult> lowlying_states(const RealField2D& potential, std::size_t n_states, const LowlyingOptions& opt)
{
    std::vector<EigenResult> out;
    for (auto& r : lowlying_impl(stencil_of(potential), n_states, opt))
        out.push_back({r.energy, to_field<ComplexField2D>(potential.grid, r.state), r.residual, r.iterations});
    return out;
}

std::vector<EigenResult1D> lowlying_states(const RealField1D& potential, std::size_t n_states,
                                           const LowlyingOptions& opt)
{
    std::vector<EigenResult1D> out;
    for (auto& r : lowlying_impl(stencil_of(potential), n_states, opt))
        out.push_back({r.energy, to_field<ComplexField1D>(potential.grid, r.state), r.residual, r.iterations});
    return out;
}

std::size_t count_states_below(const RealField2D& potential, double energy)
{
    return count_below_impl(stencil_of(potential), energy);
}

std::size_t count_states_below(const RealField1D& potential, double energy)
{
    return count_below_impl(stencil_of(potential), energy);
}

namespace {

template <class FieldT, class PotT>
FieldT apply_h(const PotT& potential, const FieldT& psi)
{
    if (!(potential.grid == psi.grid)) throw GridMismatch("apply_hamiltonian: grids differ");
    const Stencil H = stencil_of(potential);
    const std::size_t n = psi.size();
    std::vector<double> re(n), im(n), hre(n), him(n);
    for (std::size_t k = 0; k < n; ++k) {
        re[k] = psi[k].real();
        im[k] = psi[k].imag();
    }
    H.apply(re.data(), hre.data());
    H.apply(im.data(), him.data());
    FieldT out(psi.grid);
    for (std::size_t k = 0; k < n; ++k) out[k] = cplx{hre[k], him[k]};
    return out;
}

}  // namespace

ComplexField2D apply_hamiltonian(const RealField2D& potential, const ComplexField2D& psi)
{
    return apply_h(potential, psi);
}

ComplexField1D apply_hamiltonian(const RealField1D& potential, const ComplexField1D& psi)
{
    return apply_h(potential, psi);
}

double well2d_energy_oracle(const WellSpec2D& spec)
{
    spec.validate();
    const double a = spec.radius;
    const double v0 = spec.depth;
    // kappa J1(kappa a) K0(gamma a) - gamma K1(gamma a) J0(kappa a): negative at the
    // bottom of the well, positive where kappa a reaches the first zero of J0 or E -> 0-.
    auto mismatch = [&](double e) {
        const double kappa = std::sqrt(2.0 * (v0 + e));
        const double gamma = std::sqrt(-2.0 * e);
        return kappa * std::cyl_bessel_j(1.0, kappa * a) * std::cyl_bessel_k(0.0, gamma * a) -
               gamma * std::cyl_bessel_k(1.0, gamma * a) * std::cyl_bessel_j(0.0, kappa * a);
    };
    constexpr double j0_first_zero = 2.404825557695773;
    double lo = -v0 * (1.0 - 1e-15);
    double hi = std::min(-1e-200, 0.5 * (j0_first_zero / a) * (j0_first_zero / a) - v0);
    double flo = mismatch(lo);
    for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = mismatch(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace photodetach
