#include "photodetach/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace photodetach {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Entry {
    std::string value;
    int line = 0;
};

class Table {
public:
    explicit Table(const std::string& text)
    {
        std::istringstream in(text);
        std::string raw;
        int line = 0;
        while (std::getline(in, raw)) {
            ++line;
            const auto hash = raw.find('#');
            const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
            if (s.empty()) continue;
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError(fmt::format("line {}: expected 'section.key = value'", line));
            const std::string key = trim(s.substr(0, eq));
            const std::string value = trim(s.substr(eq + 1));
            const auto dot = key.find('.');
            if (dot == std::string::npos || dot == 0 || dot + 1 == key.size() || key.find('.', dot + 1) != std::string::npos)
                throw ConfigError(fmt::format("line {}: key '{}' is not of the form section.key", line, key));
            if (value.empty()) throw ConfigError(fmt::format("line {}: empty value for '{}'", line, key));
            if (entries_.count(key)) throw ConfigError(fmt::format("line {}: duplicate key '{}'", line, key));
            entries_[key] = {value, line};
            sections_.insert(key.substr(0, dot));
        }
    }

    bool has_section(const std::string& s) const { return sections_.count(s) > 0; }

    const Entry* find(const std::string& key)
    {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return nullptr;
        used_.insert(key);
        return &it->second;
    }

    void number(const std::string& key, double& out)
    {
        if (const Entry* e = find(key)) {
            double v = 0.0;
            const char* end = e->value.data() + e->value.size();
            const auto r = std::from_chars(e->value.data(), end, v);
            if (r.ec != std::errc{} || r.ptr != end || !std::isfinite(v))
                throw ConfigError(fmt::format("line {}: {}: '{}' is not a finite number", e->line, key, e->value));
            out = v;
        }
    }

    void count(const std::string& key, std::size_t& out)
    {
        if (const Entry* e = find(key)) {
            unsigned long long v = 0;
            const char* end = e->value.data() + e->value.size();
            const auto r = std::from_chars(e->value.data(), end, v);
            if (r.ec != std::errc{} || r.ptr != end)
                throw ConfigError(fmt::format("line {}: {}: '{}' is not a non-negative integer", e->line, key, e->value));
            out = static_cast<std::size_t>(v);
        }
    }

    void text(const std::string& key, std::string& out)
    {
        if (const Entry* e = find(key)) out = e->value;
    }

    template <class Enum>
    void choice(const std::string& key, Enum& out, const std::map<std::string, Enum>& options)
    {
        if (const Entry* e = find(key)) {
            const auto it = options.find(e->value);
            if (it == options.end()) {
                std::string names;
                for (const auto& [k, v] : options) names += (names.empty() ? "" : ", ") + k;
                throw ConfigError(fmt::format("line {}: {}: '{}' is not one of {}", e->line, key, e->value, names));
            }
            out = it->second;
        }
    }

    void flag(const std::string& key, bool& out)
    {
        choice(key, out, std::map<std::string, bool>{{"on", true}, {"off", false}, {"true", true}, {"false", false}});
    }

    void number_list(const std::string& key, std::vector<double>& out)
    {
        if (const Entry* e = find(key)) {
            out.clear();
            std::istringstream in(e->value);
            std::string item;
            while (std::getline(in, item, ',')) {
                item = trim(item);
                double v = 0.0;
                const char* end = item.data() + item.size();
                const auto r = std::from_chars(item.data(), end, v);
                if (item.empty() || r.ec != std::errc{} || r.ptr != end || !std::isfinite(v))
                    throw ConfigError(fmt::format("line {}: {}: bad list item '{}'", e->line, key, item));
                out.push_back(v);
            }
        }
    }

    void reject_unused() const
    {
        for (const auto& [key, e] : entries_)
            if (!used_.count(key)) throw ConfigError(fmt::format("line {}: unknown key '{}'", e.line, key));
    }

private:
    std::map<std::string, Entry> entries_;
    std::set<std::string> sections_;
    std::set<std::string> used_;
};

[[noreturn]] void invalid(const std::string& key, const std::string& why)
{
    throw ConfigError(fmt::format("{}: {}", key, why));
}

}  // namespace

Grid2D RunConfig::grid2d() const
{
    return make_grid(grid.nx, grid.ny, grid.x_offset - grid.half_range_x, grid.x_offset + grid.half_range_x,
                     -grid.half_range_y, grid.half_range_y);
}

Grid1D RunConfig::grid1d() const
{
    Grid1D g = make_grid1d(grid.nx, grid.half_range_x);
    g.x0 += grid.x_offset;
    return g;
}

RealField2D RunConfig::potential2d(const Grid2D& g) const
{
    switch (potential.family) {
    case PotentialBlock::Family::well2d:
        return well2d(potential.well2d, g, potential.sampling);
    case PotentialBlock::Family::kh:
        return kh_field(KHSpec{potential.well2d, pulse.eps0, pulse.omega}, g);
    default:
        throw ConfigError("potential.family: not a 2D potential");
    }
}

RealField1D RunConfig::potential1d(const Grid1D& g) const
{
    switch (potential.family) {
    case PotentialBlock::Family::well1d: {
        const WellSpec1D spec =
            potential.target_energy ? calibrate_well1d(*potential.target_energy, potential.well1d.half_width)
                                    : potential.well1d;
        return well1d(spec, g, potential.sampling);
    }
    case PotentialBlock::Family::softcore1d:
        return softcore1d(potential.softcore, g);
    default:
        throw ConfigError("potential.family: not a 1D potential");
    }
}

void RunConfig::validate() const
{
    if (grid.nx < 8) invalid("grid.nx", "must be at least 8");
    if (!potential.one_dimensional() && grid.ny < 8) invalid("grid.ny", "must be at least 8");
    if (!(grid.half_range_x > 0.0)) invalid("grid.half_range_x", "must be positive");
    if (!(grid.half_range_y > 0.0)) invalid("grid.half_range_y", "must be positive");
    if (!(potential.well2d.radius > 0.0)) invalid("potential.radius", "must be positive");
    if (!(potential.well2d.depth > 0.0)) invalid("potential.depth", "must be positive");
    if (!(potential.well1d.half_width > 0.0)) invalid("potential.half_width", "must be positive");
    if (!(potential.well1d.depth > 0.0)) invalid("potential.depth", "must be positive");
    if (potential.target_energy && !(*potential.target_energy < 0.0)) invalid("potential.target_energy", "must be negative");
    if (!(potential.softcore.strength > 0.0)) invalid("potential.strength", "must be positive");
    if (!(potential.softcore.smoothing > 0.0)) invalid("potential.smoothing", "must be positive");
    if (!(pulse.eps0 >= 0.0)) invalid("pulse.eps0", "must be non-negative");
    if (!(pulse.omega > 0.0)) invalid("pulse.omega", "must be positive");
    if (!(pulse.c > 0.0)) invalid("pulse.c", "must be positive");
    if (pulse.envelope.kind == Envelope::Kind::trapezoid &&
        (!(pulse.envelope.ramp_cycles > 0.0) || !(pulse.envelope.flat_cycles >= 0.0)))
        invalid("pulse.ramp_cycles", "trapezoid needs ramp_cycles > 0 and flat_cycles >= 0");
    if (!(n_cycles > 0.0)) invalid("propagation.n_cycles", "must be positive");
    if (propagation.dt < 0.0) invalid("propagation.dt", "must be positive (or 0 to use steps_per_cycle)");
    if (propagation.dt == 0.0 && propagation.steps_per_cycle == 0) invalid("propagation.steps_per_cycle", "must be positive");
    if (propagation.observer_stride < 1) invalid("propagation.observer_stride", "must be at least 1");
    if (propagation.absorber.kind == Absorber::Kind::mask) {
        const double half = potential.one_dimensional() ? grid.half_range_x : std::min(grid.half_range_x, grid.half_range_y);
        if (!(propagation.absorber.width > 0.0) || !(propagation.absorber.width < 0.5 * half))
            invalid("propagation.absorber_width", "must be positive and below half the grid half-range");
        if (!(propagation.absorber.strength > 0.0)) invalid("propagation.absorber_strength", "must be positive");
    }
    if (!(ground.dt_imag > 0.0)) invalid("ground.dt_imag", "must be positive");
    if (!(ground.tol > 0.0)) invalid("ground.tol", "must be positive");
    for (double c : output.snapshot_cycles)
        if (c < 0.0 || c > n_cycles) invalid("output.snapshot_cycles", "cycles must lie within [0, n_cycles]");
    if (output.log_floor < 0.0) invalid("output.log_floor", "must be non-negative");
    try {
        pulse.validate();
    } catch (const std::exception& e) {
        invalid("pulse", e.what());
    }
}

RunConfig parse_config(const std::string& text)
{
    Table t(text);
    std::string missing;
    for (const char* s : {"grid", "potential", "pulse", "propagation"})
        if (!t.has_section(s)) missing += (missing.empty() ? "" : ", ") + std::string(s);
    if (!missing.empty()) throw ConfigError("missing required sections: " + missing);

    RunConfig c;
    t.count("grid.nx", c.grid.nx);
    t.count("grid.ny", c.grid.ny);
    t.number("grid.half_range_x", c.grid.half_range_x);
    t.number("grid.half_range_y", c.grid.half_range_y);
    t.number("grid.x_offset", c.grid.x_offset);

    using F = PotentialBlock::Family;
    t.choice("potential.family", c.potential.family,
             std::map<std::string, F>{{"well2d", F::well2d}, {"kh", F::kh}, {"well1d", F::well1d}, {"softcore1d", F::softcore1d}});
    t.number("potential.radius", c.potential.well2d.radius);
    double depth = std::numeric_limits<double>::quiet_NaN();
    t.number("potential.depth", depth);
    if (!std::isnan(depth)) {
        c.potential.well2d.depth = depth;
        c.potential.well1d.depth = depth;
    }
    t.number("potential.half_width", c.potential.well1d.half_width);
    double target = 0.0;
    if (t.find("potential.target_energy")) {
        t.number("potential.target_energy", target);
        c.potential.target_energy = target;
    }
    t.number("potential.strength", c.potential.softcore.strength);
    t.number("potential.smoothing", c.potential.softcore.smoothing);
    t.choice("potential.sampling", c.potential.sampling,
             std::map<std::string, WellSampling>{{"point", WellSampling::point}, {"cell_average", WellSampling::cell_average}});

    t.number("pulse.eps0", c.pulse.eps0);
    t.number("pulse.omega", c.pulse.omega);
    t.number("pulse.c", c.pulse.c);
    t.choice("pulse.phase", c.pulse.phase,
             std::map<std::string, PhaseKind>{{"cosine", PhaseKind::cosine}, {"sine", PhaseKind::sine}});
    t.choice("pulse.envelope", c.pulse.envelope.kind,
             std::map<std::string, Envelope::Kind>{{"rectangular", Envelope::Kind::rectangular},
                                                   {"trapezoid", Envelope::Kind::trapezoid}});
    t.number("pulse.cycles", c.pulse.envelope.cycles);
    t.number("pulse.ramp_cycles", c.pulse.envelope.ramp_cycles);
    t.number("pulse.flat_cycles", c.pulse.envelope.flat_cycles);
    t.flag("pulse.dipole", c.pulse.dipole);

    t.number("propagation.n_cycles", c.n_cycles);
    t.number("propagation.dt", c.propagation.dt);
    t.count("propagation.steps_per_cycle", c.propagation.steps_per_cycle);
    t.count("propagation.observer_stride", c.propagation.observer_stride);
    t.choice("propagation.absorber", c.propagation.absorber.kind,
             std::map<std::string, Absorber::Kind>{{"none", Absorber::Kind::none}, {"mask", Absorber::Kind::mask}});
    t.number("propagation.absorber_width", c.propagation.absorber.width);
    t.number("propagation.absorber_strength", c.propagation.absorber.strength);

    t.number("ground.dt_imag", c.ground.dt_imag);
    t.number("ground.tol", c.ground.tol);
    t.count("ground.max_iterations", c.ground.max_iterations);

    t.text("output.directory", c.output.directory);
    t.number_list("output.snapshot_cycles", c.output.snapshot_cycles);
    t.number("output.log_floor", c.output.log_floor);
    t.number("output.ring_floor", c.output.ring_floor);
    t.number("output.subpeak_floor", c.output.subpeak_floor);

    t.reject_unused();
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace photodetach
