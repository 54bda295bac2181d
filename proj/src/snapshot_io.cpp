#include "photodetach/snapshot_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include <fmt/format.h>

namespace photodetach {

namespace {

constexpr char kMagic[4] = {'W', '2', 'D', 'F'};
constexpr std::uint32_t kVersion = 1;

class Writer {
public:
    explicit Writer(const std::string& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc)
    {
        if (!out_) throw IoError("cannot open '" + path + "' for writing");
    }

    void u32(std::uint32_t v)
    {
        unsigned char b[4];
        for (int k = 0; k < 4; ++k) b[k] = static_cast<unsigned char>(v >> (8 * k));
        buf_.insert(buf_.end(), b, b + 4);
    }

    void f64(double v)
    {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        unsigned char b[8];
        for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(bits >> (8 * k));
        buf_.insert(buf_.end(), b, b + 8);
    }

    void raw(const char* p, std::size_t n) { buf_.insert(buf_.end(), p, p + n); }

    void finish()
    {
        out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
        out_.close();
        if (!out_) throw IoError("write to '" + path_ + "' failed");
    }

private:
    std::string path_;
    std::ofstream out_;
    std::vector<char> buf_;
};

class Reader {
public:
    Reader(const std::string& path, std::vector<unsigned char> data) : path_(path), data_(std::move(data)) {}

    std::uint32_t u32()
    {
        need(4);
        std::uint32_t v = 0;
        for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(data_[pos_ + static_cast<std::size_t>(k)]) << (8 * k);
        pos_ += 4;
        return v;
    }

    double f64()
    {
        need(8);
        std::uint64_t v = 0;
        for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(data_[pos_ + static_cast<std::size_t>(k)]) << (8 * k);
        pos_ += 8;
        return std::bit_cast<double>(v);
    }

    void magic()
    {
        need(4);
        if (std::memcmp(data_.data(), kMagic, 4) != 0) throw IoError("'" + path_ + "' is not a W2DF snapshot");
        pos_ += 4;
    }

    std::size_t remaining() const { return data_.size() - pos_; }

private:
    void need(std::size_t n) const
    {
        if (pos_ + n > data_.size()) throw IoError("'" + path_ + "' is truncated");
    }

    std::string path_;
    std::vector<unsigned char> data_;
    std::size_t pos_ = 0;
};

void header(Writer& w, SnapshotKind kind, std::size_t nx, std::size_t ny, double x0, double y0, double dx, double dy,
            double t)
{
    w.raw(kMagic, 4);
    w.u32(kVersion);
    w.u32(static_cast<std::uint32_t>(kind));
    w.u32(static_cast<std::uint32_t>(nx));
    w.u32(static_cast<std::uint32_t>(ny));
    w.f64(x0);
    w.f64(y0);
    w.f64(dx);
    w.f64(dy);
    w.f64(t);
}

std::ofstream open_text(const std::string& path)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

void write_snapshot(const std::string& path, const ComplexField2D& psi, double t)
{
    const auto& g = psi.grid;
    Writer w(path);
    header(w, SnapshotKind::complex_field, g.nx, g.ny, g.x0, g.y0, g.dx, g.dy, t);
    for (const auto& v : psi.values) {
        w.f64(v.real());
        w.f64(v.imag());
    }
    w.finish();
}

void write_snapshot(const std::string& path, const ComplexField1D& psi, double t)
{
    const auto& g = psi.grid;
    Writer w(path);
    header(w, SnapshotKind::complex_field, g.n, 1, g.x0, 0.0, g.dx, 1.0, t);
    for (const auto& v : psi.values) {
        w.f64(v.real());
        w.f64(v.imag());
    }
    w.finish();
}

void write_density(const std::string& path, const ComplexField2D& psi, double t)
{
    const auto& g = psi.grid;
    Writer w(path);
    header(w, SnapshotKind::density, g.nx, g.ny, g.x0, g.y0, g.dx, g.dy, t);
    for (const auto& v : psi.values) w.f64(std::norm(v));
    w.finish();
}

void write_density(const std::string& path, const RealField2D& field, double t)
{
    const auto& g = field.grid;
    Writer w(path);
    header(w, SnapshotKind::density, g.nx, g.ny, g.x0, g.y0, g.dx, g.dy, t);
    for (double v : field.values) w.f64(v);
    w.finish();
}

Snapshot read_snapshot(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    Reader r(path, std::move(data));
    r.magic();
    if (const auto v = r.u32(); v != kVersion) throw IoError(fmt::format("'{}': unsupported version {}", path, v));
    Snapshot s;
    const auto kind = r.u32();
    if (kind != 1 && kind != 2) throw IoError(fmt::format("'{}': unknown kind {}", path, kind));
    s.kind = static_cast<SnapshotKind>(kind);
    s.nx = r.u32();
    s.ny = r.u32();
    s.x0 = r.f64();
    s.y0 = r.f64();
    s.dx = r.f64();
    s.dy = r.f64();
    s.t = r.f64();
    const std::size_t count = static_cast<std::size_t>(s.nx) * s.ny * (kind == 1 ? 2 : 1);
    if (r.remaining() != count * 8) throw IoError(fmt::format("'{}': payload size does not match header", path));
    s.payload.resize(count);
    for (auto& v : s.payload) v = r.f64();
    return s;
}

ComplexField2D Snapshot::complex2d() const
{
    if (kind != SnapshotKind::complex_field) throw IoError("snapshot holds a density, not a complex field");
    Grid2D g{nx, ny, x0, y0, dx, dy};
    ComplexField2D f(g);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = cplx{payload[2 * k], payload[2 * k + 1]};
    return f;
}

ComplexField1D Snapshot::complex1d() const
{
    if (kind != SnapshotKind::complex_field) throw IoError("snapshot holds a density, not a complex field");
    if (ny != 1) throw IoError("snapshot is two-dimensional");
    Grid1D g{nx, x0, dx};
    ComplexField1D f(g);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = cplx{payload[2 * k], payload[2 * k + 1]};
    return f;
}

void write_timeseries_csv(const std::string& path, const RunRecord& rec)
{
    auto out = open_text(path);
    out << "t,norm,pop0,mean_x,mean_y\n";
    for (std::size_t k = 0; k < rec.size(); ++k)
        out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", rec.times[k], rec.norm[k], rec.pop0[k],
                           rec.mean_x[k], rec.mean_y[k]);
    if (!out) throw IoError("write to '" + path + "' failed");
}

void write_trajectory_csv(const std::string& path, const Trajectory& tr, const PulseSpec& pulse)
{
    auto out = open_text(path);
    out << "t,x,y,vx,vy,x_simplified,y_simplified\n";
    const bool closed_form = pulse.phase == PhaseKind::cosine;
    for (std::size_t k = 0; k < tr.size(); ++k) {
        double xs = std::numeric_limits<double>::quiet_NaN(), ys = xs;
        if (closed_form) {
            const auto p = simplified_trajectory(pulse, tr.times[k]);
            xs = p.x;
            ys = p.y;
        }
        out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", tr.times[k], tr.x[k], tr.y[k],
                           tr.vx[k], tr.vy[k], xs, ys);
    }
    if (!out) throw IoError("write to '" + path + "' failed");
}

void write_pgm(const std::string& path, const ComplexField2D& psi, double log_floor)
{
    const auto& g = psi.grid;
    std::vector<double> rho(psi.size());
    for (std::size_t k = 0; k < rho.size(); ++k) rho[k] = std::norm(psi[k]);
    const double top = *std::max_element(rho.begin(), rho.end());
    auto level = [&](double v) -> double {
        if (!(top > 0.0)) return 0.0;
        if (log_floor > 0.0) {
            if (top <= log_floor) return 0.0;
            return (std::log(std::max(v, log_floor)) - std::log(log_floor)) / (std::log(top) - std::log(log_floor));
        }
        return v / top;
    };
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "P5\n" << g.nx << ' ' << g.ny << "\n65535\n";
    std::vector<char> row(2 * g.nx);
    for (std::size_t jj = 0; jj < g.ny; ++jj) {
        const std::size_t j = g.ny - 1 - jj;
        for (std::size_t i = 0; i < g.nx; ++i) {
            const auto q = static_cast<std::uint16_t>(std::lround(65535.0 * std::clamp(level(rho[g.index(i, j)]), 0.0, 1.0)));
            row[2 * i] = static_cast<char>(q >> 8);
            row[2 * i + 1] = static_cast<char>(q & 0xff);
        }
        out.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
    if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace photodetach
