#include "photodetach/runner.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "photodetach/classical.hpp"
#include "photodetach/config.hpp"
#include "photodetach/eigensolver.hpp"
#include "photodetach/observables.hpp"
#include "photodetach/propagator.hpp"
#include "photodetach/snapshot_io.hpp"

namespace photodetach {

namespace {

namespace fs = std::filesystem;

struct Context {
    RunConfig cfg;
    fs::path out_dir;
    std::ostream& out;
};

std::string tag(double cycles) { return fmt::format("T{:g}", cycles); }

void report(Context& ctx, std::ofstream& file, const std::string& line)
{
    ctx.out << line << '\n';
    file << line << '\n';
}

std::ofstream open_report(const Context& ctx, const std::string& name)
{
    std::ofstream f(ctx.out_dir / name, std::ios::trunc);
    if (!f) throw IoError("cannot open '" + (ctx.out_dir / name).string() + "' for writing");
    return f;
}

int ground_state(Context& ctx)
{
    auto rep = open_report(ctx, "ground_state.txt");
    if (ctx.cfg.potential.one_dimensional()) {
        const auto V = ctx.cfg.potential1d(ctx.cfg.grid1d());
        const auto g = imaginary_time_ground(V, ctx.cfg.ground);
        write_snapshot((ctx.out_dir / "ground_state.w2df").string(), g.state, 0.0);
        report(ctx, rep, fmt::format("energy = {:.12g}", g.energy));
        report(ctx, rep, fmt::format("bound_states = {}", count_states_below(V, 0.0)));
        report(ctx, rep, fmt::format("iterations = {}", g.iterations));
    } else {
        const auto V = ctx.cfg.potential2d(ctx.cfg.grid2d());
        const auto g = imaginary_time_ground(V, ctx.cfg.ground);
        write_snapshot((ctx.out_dir / "ground_state.w2df").string(), g.state, 0.0);
        report(ctx, rep, fmt::format("energy = {:.12g}", g.energy));
        report(ctx, rep, fmt::format("bound_states = {}", count_states_below(V, 0.0)));
        report(ctx, rep, fmt::format("iterations = {}", g.iterations));
    }
    return 0;
}

PropagatorConfig propagation_config(const RunConfig& cfg)
{
    PropagatorConfig pc = cfg.propagation;
    pc.snapshot_times.clear();
    for (double c : cfg.output.snapshot_cycles) pc.snapshot_times.push_back(c * cfg.pulse.period());
    return pc;
}

void summarise_run(Context& ctx, std::ofstream& rep, const RunRecord& rec)
{
    write_timeseries_csv((ctx.out_dir / "timeseries.csv").string(), rec);
    std::ofstream manifest(ctx.out_dir / "snapshots.txt", std::ios::trunc);
    for (const auto& s : rec.snapshots) manifest << fmt::format("{:.17g} {}\n", s.t, s.path);
    const std::size_t last = rec.size() - 1;
    report(ctx, rep, fmt::format("final_norm = {:.12g}", rec.norm[last]));
    report(ctx, rep, fmt::format("final_pop0 = {:.12g}", rec.pop0[last]));
    report(ctx, rep, fmt::format("final_mean_x = {:.12g}", rec.mean_x[last]));
    report(ctx, rep, fmt::format("final_mean_y = {:.12g}", rec.mean_y[last]));
    report(ctx, rep, fmt::format("snapshots = {}", rec.snapshots.size()));
}

int propagate2d(Context& ctx)
{
    if (ctx.cfg.potential.one_dimensional()) throw ConfigError("potential.family: propagate needs a 2D potential");
    const auto grid = ctx.cfg.grid2d();
    const auto V = ctx.cfg.potential2d(grid);
    auto rep = open_report(ctx, "propagate.txt");
    const auto g = imaginary_time_ground(V, ctx.cfg.ground);
    report(ctx, rep, fmt::format("ground_energy = {:.12g}", g.energy));
    const double period = ctx.cfg.pulse.period();
    const double log_floor = ctx.cfg.output.log_floor;
    const fs::path dir = ctx.out_dir;
    SnapshotSink2D sink = [&](double t, const ComplexField2D& psi) {
        const std::string name = tag(t / period);
        const auto path = (dir / ("psi_" + name + ".w2df")).string();
        write_snapshot(path, psi, t);
        write_pgm((dir / ("density_" + name + ".pgm")).string(), psi, log_floor);
        return path;
    };
    const auto rec = propagate(g.state, ctx.cfg.pulse, V, propagation_config(ctx.cfg), ctx.cfg.n_cycles, sink);
    summarise_run(ctx, rep, rec);
    return 0;
}

int propagate_1d(Context& ctx)
{
    if (!ctx.cfg.potential.one_dimensional()) throw ConfigError("potential.family: propagate1d needs a 1D potential");
    if (!ctx.cfg.pulse.dipole) throw ConfigError("pulse.dipole: the 1D model is dipole only");
    const auto grid = ctx.cfg.grid1d();
    const auto V = ctx.cfg.potential1d(grid);
    auto rep = open_report(ctx, "propagate1d.txt");
    const auto g = imaginary_time_ground(V, ctx.cfg.ground);
    report(ctx, rep, fmt::format("ground_energy = {:.12g}", g.energy));
    const double period = ctx.cfg.pulse.period();
    const fs::path dir = ctx.out_dir;
    SnapshotSink1D sink = [&](double t, const ComplexField1D& psi) {
        const auto path = (dir / ("psi_" + tag(t / period) + ".w2df")).string();
        write_snapshot(path, psi, t);
        return path;
    };
    const auto rec = propagate1d(g.state, ctx.cfg.pulse, V, propagation_config(ctx.cfg), ctx.cfg.n_cycles, sink);
    summarise_run(ctx, rep, rec);
    return 0;
}

int classical(Context& ctx)
{
    const auto& p = ctx.cfg.pulse;
    const double dt = ctx.cfg.propagation.time_step(p);
    const auto tr = integrate_newton(p, ctx.cfg.n_cycles * p.period(), dt);
    write_trajectory_csv((ctx.out_dir / "trajectory.csv").string(), tr, p);
    auto rep = open_report(ctx, "classical.txt");
    const std::size_t last = tr.size() - 1;
    report(ctx, rep, fmt::format("final_t = {:.12g}", tr.times[last]));
    report(ctx, rep, fmt::format("final_x = {:.12g}", tr.x[last]));
    report(ctx, rep, fmt::format("final_y = {:.12g}", tr.y[last]));
    if (p.phase == PhaseKind::cosine) {
        const auto s = simplified_trajectory(p, tr.times[last]);
        report(ctx, rep, fmt::format("final_x_simplified = {:.12g}", s.x));
        report(ctx, rep, fmt::format("final_y_simplified = {:.12g}", s.y));
    }
    const auto [near, far] = turning_points(p);
    report(ctx, rep, fmt::format("turning_points = {:.12g}, {:.12g}", near, far));
    return 0;
}

int kh_scan(Context& ctx)
{
    if (ctx.cfg.potential.one_dimensional()) throw ConfigError("potential.family: kh-scan needs a 2D well");
    const auto grid = ctx.cfg.grid2d();
    const KHSpec spec{ctx.cfg.potential.well2d, ctx.cfg.pulse.eps0, ctx.cfg.pulse.omega};
    const auto V = kh_field(spec, grid);
    write_density((ctx.out_dir / "kh_potential.w2df").string(), V, 0.0);
    const auto states = lowlying_states(V, 2);
    auto rep = open_report(ctx, "kh_report.txt");
    report(ctx, rep, fmt::format("bound_states = {}", count_states_below(V, 0.0)));
    for (std::size_t k = 0; k < states.size(); ++k) {
        write_snapshot((ctx.out_dir / fmt::format("kh_state{}.w2df", k + 1)).string(), states[k].state, 0.0);
        report(ctx, rep, fmt::format("E{} = {:.12g}", k + 1, states[k].energy));
        report(ctx, rep, fmt::format("residual{} = {:.3e}", k + 1, states[k].residual));
    }
    return 0;
}

int analyze(Context& ctx, const std::vector<std::string>& inputs)
{
    if (inputs.empty()) throw std::invalid_argument("analyze needs at least one --input snapshot");
    auto rep = open_report(ctx, "analysis.txt");
    const auto centers = kh_centers(ctx.cfg.pulse);
    for (const auto& path : inputs) {
        const Snapshot s = read_snapshot(path);
        if (s.one_dimensional()) {
            const auto r = subpeak_contrast_1d(s.complex1d(), std::min(centers[0], centers[1]),
                                               std::max(centers[0], centers[1]), ctx.cfg.output.subpeak_floor);
            report(ctx, rep, fmt::format("{}: t = {:.12g} subpeaks = {} contrast = {:.6g}", path, s.t, r.count, r.contrast));
        } else {
            RingCensusOptions opt;
            opt.floor = ctx.cfg.output.ring_floor;
            const auto census = ring_census(s.complex2d(), centers, s.t, opt);
            for (std::size_t c = 0; c < census.centers.size(); ++c) {
                std::string radii;
                for (double r : census.ring_radii_per_center[c]) radii += fmt::format("{}{:.4g}", radii.empty() ? "" : " ", r);
                report(ctx, rep, fmt::format("{}: t = {:.12g} center = {:.6g} rings = {} radii = [{}]", path, s.t,
                                             census.centers[c], census.count(c), radii));
            }
        }
    }
    return 0;
}

}  // namespace

int run_command(const std::string& command, const RunOptions& options, std::ostream& out, std::ostream& err)
{
    try {
        if (options.config_path.empty()) throw ConfigError("--config is required");
        RunConfig cfg = load_config(options.config_path);
        if (options.out_dir) cfg.output.directory = *options.out_dir;
        if (options.dipole) cfg.pulse.dipole = *options.dipole;
        if (options.snapshot_cycles) cfg.output.snapshot_cycles = *options.snapshot_cycles;
        if (options.log_floor) cfg.output.log_floor = *options.log_floor;
        cfg.validate();
        if (options.threads < 0) throw std::invalid_argument("--threads must be non-negative");
        if (options.threads > 0) set_thread_count(options.threads);

        Context ctx{cfg, fs::path(cfg.output.directory), out};
        fs::create_directories(ctx.out_dir);
        if (command == "ground-state") return ground_state(ctx);
        if (command == "propagate") return propagate2d(ctx);
        if (command == "propagate1d") return propagate_1d(ctx);
        if (command == "classical") return classical(ctx);
        if (command == "kh-scan") return kh_scan(ctx);
        if (command == "analyze") return analyze(ctx, options.inputs);
        throw std::invalid_argument("unknown command '" + command + "'");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace photodetach
