#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "pafour/error.hpp"
#include "pafour/grid.hpp"

namespace pafour {

// Grid file: one line of JSON header, then n_x * n_y little-endian doubles
// with the first axis outermost.

inline constexpr int grid_file_version = 1;

namespace detail {

inline std::uint64_t to_little_endian(std::uint64_t v)
{
    if constexpr (std::endian::native == std::endian::little) {
        return v;
    } else {
        std::uint64_t r = 0;
        for (int i = 0; i < 8; ++i) {
            r = (r << 8) | ((v >> (8 * i)) & 0xffu);
        }
        return r;
    }
}

} // namespace detail

inline void write_grid(std::ostream& os, const RealGrid2D& g)
{
    const nlohmann::json header = {{"version", grid_file_version},
                                   {"n_x", g.nx()},
                                   {"n_y", g.ny()},
                                   {"step", g.step()},
                                   {"axis_kind", to_string(g.kind())},
                                   {"dtype", "f64le"}};
    os << header.dump() << '\n';
    std::vector<unsigned char> payload(8 * g.values().size());
    for (std::size_t i = 0; i < g.values().size(); ++i) {
        const std::uint64_t bits = detail::to_little_endian(std::bit_cast<std::uint64_t>(g.values()[i]));
        std::memcpy(payload.data() + 8 * i, &bits, 8);
    }
    os.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    if (!os) {
        throw FormatError("failed to write grid payload");
    }
}

inline RealGrid2D read_grid(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line)) {
        throw FormatError("missing grid header");
    }
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed grid header: ") + e.what());
    }
    std::size_t nx = 0;
    std::size_t ny = 0;
    double step = 0.0;
    std::string kind;
    std::string dtype;
    try {
        if (header.at("version").get<int>() != grid_file_version) {
            throw FormatError("unsupported grid file version");
        }
        nx = header.at("n_x").get<std::size_t>();
        ny = header.at("n_y").get<std::size_t>();
        step = header.at("step").get<double>();
        kind = header.at("axis_kind").get<std::string>();
        dtype = header.at("dtype").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("incomplete grid header: ") + e.what());
    }
    if (dtype != "f64le") {
        throw FormatError("unsupported dtype '" + dtype + "'");
    }
    if (kind != "image" && kind != "data") {
        throw FormatError("unknown axis_kind '" + kind + "'");
    }
    if (nx == 0 || ny == 0 || nx > (std::size_t{1} << 28) / ny || !(step > 0.0)) {
        throw FormatError("bad grid dimensions");
    }
    RealGrid2D g(nx, ny, step, kind == "image" ? AxisKind::image : AxisKind::data);
    std::vector<unsigned char> payload(8 * nx * ny);
    is.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    if (static_cast<std::size_t>(is.gcount()) != payload.size()) {
        throw FormatError("grid payload is truncated");
    }
    if (is.peek() != std::char_traits<char>::eof()) {
        throw FormatError("trailing bytes after grid payload");
    }
    for (std::size_t i = 0; i < nx * ny; ++i) {
        std::uint64_t bits = 0;
        std::memcpy(&bits, payload.data() + 8 * i, 8);
        g.values()[i] = std::bit_cast<double>(detail::to_little_endian(bits));
    }
    return g;
}

inline void write_grid_file(const std::string& path, const RealGrid2D& g)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw FormatError("cannot open '" + path + "' for writing");
    }
    write_grid(os, g);
}

inline RealGrid2D read_grid_file(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw FormatError("cannot open '" + path + "'");
    }
    return read_grid(is);
}

/// Display mapping: lo -> 0, hi -> 255, clamped.
inline std::uint8_t display_level(double v, double lo = -0.4, double hi = 1.0)
{
    if (!std::isfinite(v)) {
        return 0;
    }
    const double s = std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
    return static_cast<std::uint8_t>(std::lround(255.0 * s));
}

/// Binary PGM; width runs along the first axis, rows along the second.
inline void write_pgm(std::ostream& os, const RealGrid2D& g, double lo = -0.4, double hi = 1.0)
{
    os << "P5\n" << g.nx() << ' ' << g.ny() << "\n255\n";
    std::vector<unsigned char> raster(g.nx() * g.ny());
    for (std::size_t j = 0; j < g.ny(); ++j) {
        for (std::size_t i = 0; i < g.nx(); ++i) {
            raster[j * g.nx() + i] = display_level(g(i, j), lo, hi);
        }
    }
    os.write(reinterpret_cast<const char*>(raster.data()), static_cast<std::streamsize>(raster.size()));
    if (!os) {
        throw FormatError("failed to write PGM raster");
    }
}

inline void write_pgm_file(const std::string& path, const RealGrid2D& g, double lo = -0.4, double hi = 1.0)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw FormatError("cannot open '" + path + "' for writing");
    }
    write_pgm(os, g, lo, hi);
}

} // namespace pafour
