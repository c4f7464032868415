#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pafour/error.hpp"

namespace pafour {

/// Which pair of coordinates the second axis carries.
enum class AxisKind { image, data };

inline const char* to_string(AxisKind kind) { return kind == AxisKind::image ? "image" : "data"; }

/// Sample layout of a square grid: n samples per axis with spacing step = X / n.
struct GridSpec {
    std::size_t n = 0;
    double step = 0.0;

    static GridSpec unit_square(std::size_t n) { return {n, 1.0 / static_cast<double>(n)}; }

    double extent() const { return step * static_cast<double>(n); }
    double coord(std::size_t i) const { return step * static_cast<double>(i); }

    void validate() const
    {
        if (n == 0 || n % 2 != 0) {
            throw ValidationError(ValidationError::Code::odd_length,
                                  "grid size must be even and positive");
        }
        if (!(step > 0.0) || !std::isfinite(step)) {
            throw ValidationError(ValidationError::Code::bad_parameter, "grid step must be positive");
        }
    }
};

/// Real samples on an nx x ny grid; sample (i, j) sits at (i * step, j * step).
/// Stored row-major with the first axis (x / detector position) outermost.
class RealGrid2D {
public:
    RealGrid2D() = default;

    RealGrid2D(std::size_t nx, std::size_t ny, double step, AxisKind kind)
        : nx_(nx), ny_(ny), step_(step), kind_(kind), values_(nx * ny, 0.0)
    {
    }

    RealGrid2D(const GridSpec& spec, AxisKind kind) : RealGrid2D(spec.n, spec.n, spec.step, kind) {}

    std::size_t nx() const noexcept { return nx_; }
    std::size_t ny() const noexcept { return ny_; }
    double step() const noexcept { return step_; }
    AxisKind kind() const noexcept { return kind_; }
    bool square() const noexcept { return nx_ == ny_; }
    GridSpec spec() const { return {nx_, step_}; }

    double& operator()(std::size_t i, std::size_t j) { return values_[i * ny_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * ny_ + j]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    bool same_shape(const RealGrid2D& other) const
    {
        return nx_ == other.nx_ && ny_ == other.ny_;
    }

    bool operator==(const RealGrid2D&) const = default;

private:
    std::size_t nx_ = 0;
    std::size_t ny_ = 0;
    double step_ = 1.0;
    AxisKind kind_ = AxisKind::image;
    std::vector<double> values_;
};

inline void require_same_shape(const RealGrid2D& a, const RealGrid2D& b, const char* what)
{
    if (!a.same_shape(b)) {
        throw ValidationError(ValidationError::Code::shape_mismatch,
                              std::string(what) + ": grid shapes differ");
    }
}

} // namespace pafour
