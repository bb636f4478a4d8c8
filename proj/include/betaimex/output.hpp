#pragma once

#include "betaimex/spectral.hpp"
#include "betaimex/stability.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace betaimex {

using Json = nlohmann::ordered_json;

inline constexpr const char* kLibraryName = "betaimex";
inline constexpr const char* kLibraryVersion = "1.0.0";

class OutputError : public std::runtime_error {
public:
    OutputError(const std::filesystem::path& p, const std::string& what)
        : std::runtime_error(p.string() + ": " + what) {}
};

std::uint64_t fnv1a64(std::span<const unsigned char> bytes);
std::uint64_t fnv1a64(std::span<const double> values);
std::string hex64(std::uint64_t v);

// %.17g cells; an empty row set gives a header-only file.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
std::string format_double(double v);

void write_json(const std::filesystem::path& path, const Json& j);

// Stable cells are 255, unstable 0; the first image row is the top of the window (im_hi).
void write_pgm(const std::filesystem::path& path, const StabilityGrid& g, bool binary = true);

// <base>.bin holds row-major doubles; <base>.json holds {nx, ny, Lx, Ly, t, checksum}.
void write_field(const std::filesystem::path& base, const SpectralField2D& f, double t);
SpectralField2D read_field(const std::filesystem::path& base);

// manifest.json: config echo, library name/version and seed. No timestamps, so reruns are byte-identical.
void write_manifest(const std::filesystem::path& dir, const std::string& command, const Json& config,
                    std::uint64_t seed, const std::vector<std::string>& outputs);

void ensure_directory(const std::filesystem::path& dir);

}  // namespace betaimex
