#include "betaimex/output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace betaimex {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& p, std::ios::openmode mode = std::ios::out) {
    std::ofstream os(p, mode | std::ios::trunc);
    if (!os) throw OutputError(p, "cannot open for writing");
    return os;
}

void finish(std::ofstream& os, const fs::path& p) {
    os.flush();
    if (!os) throw OutputError(p, "write failed");
}

}  // namespace

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t fnv1a64(std::span<const double> values) {
    return fnv1a64(std::span<const unsigned char>(reinterpret_cast<const unsigned char*>(values.data()),
                                                  values.size() * sizeof(double)));
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    auto os = open_out(path);
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_double(r[i]);
        os << '\n';
    }
    finish(os, path);
}

void write_json(const fs::path& path, const Json& j) {
    auto os = open_out(path);
    os << j.dump(2) << '\n';
    finish(os, path);
}

void write_pgm(const fs::path& path, const StabilityGrid& g, bool binary) {
    auto os = open_out(path, std::ios::out | std::ios::binary);
    os << (binary ? "P5" : "P2") << '\n' << g.nx << ' ' << g.ny << '\n' << 255 << '\n';
    for (int iy = g.ny - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            const unsigned char v = g.stable(ix, iy) ? 255 : 0;
            if (binary) os.put(static_cast<char>(v));
            else os << static_cast<int>(v) << (ix + 1 == g.nx ? '\n' : ' ');
        }
    }
    finish(os, path);
}

void write_field(const fs::path& base, const SpectralField2D& f, double t) {
    fs::path bin = base;
    bin += ".bin";
    fs::path meta = base;
    meta += ".json";
    {
        auto os = open_out(bin, std::ios::out | std::ios::binary);
        os.write(reinterpret_cast<const char*>(f.values.data()),
                 static_cast<std::streamsize>(f.values.size() * sizeof(double)));
        finish(os, bin);
    }
    Json j;
    j["nx"] = f.grid.nx;
    j["ny"] = f.grid.ny;
    j["Lx"] = f.grid.lx;
    j["Ly"] = f.grid.ly;
    j["x0"] = f.grid.x0;
    j["y0"] = f.grid.y0;
    j["t"] = t;
    j["layout"] = "row-major float64, index iy * nx + ix";
    j["checksum_fnv1a64"] = hex64(fnv1a64(f.values));
    write_json(meta, j);
}

SpectralField2D read_field(const fs::path& base) {
    fs::path bin = base;
    bin += ".bin";
    fs::path meta = base;
    meta += ".json";
    std::ifstream ms(meta);
    if (!ms) throw OutputError(meta, "cannot open for reading");
    const Json j = Json::parse(ms);
    Grid2D g(j.at("nx").get<int>(), j.at("ny").get<int>(), j.at("Lx").get<double>(), j.at("Ly").get<double>(),
             j.value("x0", 0.0), j.value("y0", 0.0));
    SpectralField2D f(g);
    std::ifstream bs(bin, std::ios::binary);
    if (!bs) throw OutputError(bin, "cannot open for reading");
    bs.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!bs) throw OutputError(bin, "truncated field file");
    if (hex64(fnv1a64(f.values)) != j.at("checksum_fnv1a64").get<std::string>())
        throw OutputError(bin, "checksum mismatch");
    return f;
}

void write_manifest(const fs::path& dir, const std::string& command, const Json& config, std::uint64_t seed,
                    const std::vector<std::string>& outputs) {
    Json j;
    j["command"] = command;
    j["library"] = kLibraryName;
    j["version"] = kLibraryVersion;
    j["seed"] = seed;
    j["config"] = config;
    j["outputs"] = outputs;
    write_json(dir / "manifest.json", j);
}

void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw OutputError(dir, "cannot create directory: " + ec.message());
}

}  // namespace betaimex
