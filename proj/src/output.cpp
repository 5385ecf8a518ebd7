#include "qlbeam/output.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "qlbeam/error.hpp"

namespace qlbeam {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

[[noreturn]] void io_fail(const std::filesystem::path &path, const std::string &what) {
    throw Error(ErrorKind::io_error, path.string() + ": " + what);
}

template <typename T>
void put_le(std::string &buf, T value) {
    std::array<char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    buf.append(bytes.data(), bytes.size());
}

template <typename T>
T get_le(const char *p) {
    std::array<char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), p, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

std::string slurp(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) io_fail(path, "cannot open for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spill(const std::filesystem::path &path, const std::string &data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) io_fail(path, "cannot open for writing");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) io_fail(path, "write failed");
}

double parse_field(const std::filesystem::path &path, std::size_t line, const std::string &text) {
    if (text == "nan") return std::nan("");
    const char *begin = text.c_str();
    char *end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        io_fail(path, "line " + std::to_string(line) + ": bad number '" + text + "'");
    }
    return v;
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_moment_csv(const std::filesystem::path &path, std::span<const MomentRow> rows) {
    std::string out = kMomentCsvHeader;
    out += '\n';
    for (const auto &r : rows) {
        const auto &m = r.moments;
        for (double v : {m.z, m.mean_x, m.mean_p, m.sigma_x, m.sigma_p, m.sigma_xp, m.emittance_rms,
                         m.uncertainty_product(), r.negativity_volume}) {
            out += format_number(v);
            out += ',';
        }
        out += format_number(r.r3);
        out += '\n';
    }
    spill(path, out);
}

std::vector<MomentRow> read_moment_csv(const std::filesystem::path &path) {
    std::istringstream in(slurp(path));
    std::string line;
    if (!std::getline(in, line) || line != kMomentCsvHeader) io_fail(path, "missing moment header");
    std::vector<MomentRow> rows;
    std::size_t n = 1;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        std::vector<double> f;
        std::istringstream fields(line);
        std::string cell;
        while (std::getline(fields, cell, ',')) f.push_back(parse_field(path, n, cell));
        if (f.size() != 10) io_fail(path, "line " + std::to_string(n) + ": expected 10 columns");
        MomentRow r{};
        r.moments.z = f[0];
        r.moments.mean_x = f[1];
        r.moments.mean_p = f[2];
        r.moments.sigma_x = f[3];
        r.moments.sigma_p = f[4];
        r.moments.sigma_xp = f[5];
        r.moments.emittance_rms = f[6];
        r.negativity_volume = f[8];
        r.r3 = f[9];
        rows.push_back(r);
    }
    return rows;
}

void write_grid_dump(const std::filesystem::path &path, const QuasiDistribution &rho,
                     double epsilon) {
    const auto &g = rho.grid;
    std::string buf;
    buf.reserve(kGridDumpHeaderBytes + rho.values.size() * 8);
    buf.append("MBGD", 4);
    put_le<std::uint32_t>(buf, kGridDumpVersion);
    put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(g.x.size()));
    put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(g.p.size()));
    for (double v : {g.x.length(), g.p.length(), g.x.center(), g.p.center(), rho.z, epsilon}) {
        put_le<double>(buf, v);
    }
    for (double v : rho.values) put_le<double>(buf, v);
    spill(path, buf);
}

GridDump read_grid_dump(const std::filesystem::path &path) {
    const std::string data = slurp(path);
    if (data.size() < kGridDumpHeaderBytes || data.compare(0, 4, "MBGD") != 0) {
        io_fail(path, "not an MBGD grid dump");
    }
    const char *p = data.data();
    const auto version = get_le<std::uint32_t>(p + 4);
    if (version != kGridDumpVersion) io_fail(path, "unsupported dump version " + std::to_string(version));
    const std::size_t nx = get_le<std::uint32_t>(p + 8);
    const std::size_t np = get_le<std::uint32_t>(p + 12);
    double h[6];
    for (int k = 0; k < 6; ++k) h[k] = get_le<double>(p + 16 + 8 * k);
    if (data.size() != kGridDumpHeaderBytes + nx * np * 8) {
        io_fail(path, "size does not match " + std::to_string(nx) + "x" + std::to_string(np) + " grid");
    }
    QuasiDistribution rho{PhaseGrid{AxisGrid(nx, h[0], h[2]), AxisGrid(np, h[1], h[3])},
                          std::vector<double>(nx * np), h[4], DistributionKind::wigner};
    for (std::size_t k = 0; k < nx * np; ++k) {
        rho.values[k] = get_le<double>(p + kGridDumpHeaderBytes + 8 * k);
    }
    bool negative = false;
    for (double v : rho.values) negative = negative || v < 0.0;
    if (!negative) rho.kind = DistributionKind::classical;
    return GridDump{version, h[5], std::move(rho)};
}

void write_heatmap(const std::filesystem::path &path, const QuasiDistribution &rho) {
    const std::size_t nx = rho.grid.x.size();
    const std::size_t np = rho.grid.p.size();
    const auto [lo_it, hi_it] = std::minmax_element(rho.values.begin(), rho.values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    const double span = hi > lo ? hi - lo : 1.0;

    std::string buf = "P5\n" + std::to_string(nx) + " " + std::to_string(np) + "\n255\n";
    const std::size_t header = buf.size();
    buf.resize(header + nx * np);
    for (std::size_t row = 0; row < np; ++row) {
        const std::size_t ip = np - 1 - row;
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double t = (rho.at(ix, ip) - lo) / span;
            buf[header + row * nx + ix] = static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * t)));
        }
    }
    spill(path, buf);
    spill(path.string() + ".txt", "min " + format_number(lo) + "\nmax " + format_number(hi) + "\n");
}

}  // namespace qlbeam
