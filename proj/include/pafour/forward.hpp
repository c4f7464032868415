#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "pafour/error.hpp"
#include "pafour/grid.hpp"
#include "pafour/parallel.hpp"
#include "pafour/quadrature.hpp"

// Forward models for the line-detector geometry: detectors on y = 0, unit
// sound speed, so time is measured in length units. Data grids index
// (detector position x, time t); image grids index (x, depth y).

namespace pafour {

// ---------------------------------------------------------------------------
// Phantoms

/// f(x) = (2/a) sqrt(a^2 - |x - x0|^2) inside the disk of radius a.
struct CirclePhantom {
    double x0 = 0.5;
    double y0 = 0.5;
    double a = 0.1;

    void validate(double extent = 1.0) const
    {
        if (!(a > 0.0)) {
            throw ValidationError(ValidationError::Code::bad_parameter, "circle radius must be positive");
        }
        if (!(y0 - a > 0.0) || !(x0 - a > 0.0) || !(x0 + a < extent) || !(y0 + a < extent)) {
            throw ValidationError(ValidationError::Code::outside_domain,
                                  "circle must lie inside (0, X)^2 above the detector line");
        }
    }

    double operator()(double x, double y) const
    {
        const double r2 = (x - x0) * (x - x0) + (y - y0) * (y - y0);
        return r2 < a * a ? (2.0 / a) * std::sqrt(a * a - r2) : 0.0;
    }
};

struct Ellipse {
    double cx = 0.0;
    double cy = 0.0;
    double semi_x = 0.0;
    double semi_y = 0.0;
    double angle = 0.0; ///< counter-clockwise rotation, radians
    double amplitude = 0.0;

    bool contains(double x, double y) const
    {
        const double dx = x - cx;
        const double dy = y - cy;
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        const double u = (dx * c + dy * s) / semi_x;
        const double v = (-dx * s + dy * c) / semi_y;
        return u * u + v * v <= 1.0;
    }

    double half_extent_x() const
    {
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        return std::hypot(semi_x * c, semi_y * s);
    }

    double half_extent_y() const
    {
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        return std::hypot(semi_x * s, semi_y * c);
    }
};

using EllipseSet = std::vector<Ellipse>;

/// The 10-ellipse Shepp-Logan head (modified intensities in [0, 1]), scaled
/// isotropically so its bounding box fits [0.15X, 0.85X] x [0.2X, 0.9X].
inline EllipseSet shepp_logan(double extent = 1.0)
{
    struct Row {
        double amplitude, a, b, x, y, degrees;
    };
    static constexpr Row table[] = {
        {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
        {-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0},
        {-0.2, 0.11, 0.31, 0.22, 0.0, -18.0},
        {-0.2, 0.16, 0.41, -0.22, 0.0, 18.0},
        {0.1, 0.21, 0.25, 0.0, 0.35, 0.0},
        {0.1, 0.046, 0.046, 0.0, 0.1, 0.0},
        {0.1, 0.046, 0.046, 0.0, -0.1, 0.0},
        {0.1, 0.046, 0.023, -0.08, -0.605, 0.0},
        {0.1, 0.023, 0.023, 0.0, -0.606, 0.0},
        {0.1, 0.023, 0.046, 0.06, -0.605, 0.0},
    };
    const double scale = std::min(0.7 / (2.0 * 0.69), 0.7 / (2.0 * 0.92)) * extent;
    const double cx = 0.5 * extent;
    const double cy = 0.55 * extent;
    EllipseSet set;
    for (const auto& row : table) {
        set.push_back({cx + scale * row.x, cy + scale * row.y, scale * row.a, scale * row.b,
                       row.degrees * std::numbers::pi / 180.0, row.amplitude});
    }
    return set;
}

inline void validate_ellipses(const EllipseSet& set, double extent)
{
    for (const auto& e : set) {
        if (!(e.semi_x > 0.0) || !(e.semi_y > 0.0)) {
            throw ValidationError(ValidationError::Code::bad_parameter, "ellipse semi-axes must be positive");
        }
        const double hx = e.half_extent_x();
        const double hy = e.half_extent_y();
        if (!(e.cx - hx > 0.0) || !(e.cx + hx < extent) || !(e.cy - hy > 0.0) || !(e.cy + hy < extent)) {
            throw ValidationError(ValidationError::Code::outside_domain,
                                  "ellipse must lie inside (0, X)^2 above the detector line");
        }
    }
}

inline RealGrid2D sample_circle(const CirclePhantom& p, const GridSpec& spec)
{
    spec.validate();
    p.validate(spec.extent());
    RealGrid2D f(spec, AxisKind::image);
    for (std::size_t i = 0; i < spec.n; ++i) {
        for (std::size_t j = 0; j < spec.n; ++j) {
            f(i, j) = p(spec.coord(i), spec.coord(j));
        }
    }
    return f;
}

inline RealGrid2D sample_shepp_logan(const EllipseSet& set, const GridSpec& spec)
{
    spec.validate();
    validate_ellipses(set, spec.extent());
    RealGrid2D f(spec, AxisKind::image);
    for (std::size_t i = 0; i < spec.n; ++i) {
        for (std::size_t j = 0; j < spec.n; ++j) {
            double v = 0.0;
            for (const auto& e : set) {
                if (e.contains(spec.coord(i), spec.coord(j))) {
                    v += e.amplitude;
                }
            }
            f(i, j) = v;
        }
    }
    return f;
}

// ---------------------------------------------------------------------------
// Analytic data of the circular phantom

/// Pressure on the detector line generated by CirclePhantom.
///
/// The phantom is the depth projection of a homogeneous ball, so the 2D data is
/// the line integral of the 3D ball response. With d the detector-to-centre
/// distance and s_pm = sqrt((t +- a)^2 - d^2) taken on the principal branch,
///   (1/a) Re[(s_+ - s_-) - t log((s_+ + t + a) / (s_- + t - a))].
inline double circle_forward_analytic(const CirclePhantom& p, double x, double t)
{
    if (!(t > 0.0)) {
        return 0.0;
    }
    using C = std::complex<double>;
    const double d2 = (x - p.x0) * (x - p.x0) + p.y0 * p.y0;
    const C s_plus = std::sqrt(C((t + p.a) * (t + p.a) - d2, 0.0));
    const C s_minus = std::sqrt(C((t - p.a) * (t - p.a) - d2, 0.0));
    const C value = (s_plus - s_minus) - t * std::log((s_plus + (t + p.a)) / (s_minus + (t - p.a)));
    return value.real() / p.a;
}

inline RealGrid2D circle_data(const CirclePhantom& p, const GridSpec& spec)
{
    spec.validate();
    p.validate(spec.extent());
    RealGrid2D g(spec, AxisKind::data);
    for (std::size_t i = 0; i < spec.n; ++i) {
        for (std::size_t j = 0; j < spec.n; ++j) {
            g(i, j) = circle_forward_analytic(p, spec.coord(i), spec.coord(j));
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Spherical means and d'Alembert data

namespace detail {

/// Bilinear interpolation of an image grid, zero outside [0, X]^2 and beyond the
/// last stored sample.
inline double interpolate_image(const RealGrid2D& f, double x, double y)
{
    const double extent = f.step() * static_cast<double>(f.nx());
    if (x < 0.0 || y < 0.0 || x > extent || y > extent) {
        return 0.0;
    }
    const double fx = x / f.step();
    const double fy = y / f.step();
    const auto i0 = static_cast<std::size_t>(fx);
    const auto j0 = static_cast<std::size_t>(fy);
    const double ux = fx - static_cast<double>(i0);
    const double uy = fy - static_cast<double>(j0);
    auto at = [&](std::size_t i, std::size_t j) {
        return (i < f.nx() && j < f.ny()) ? f(i, j) : 0.0;
    };
    return (1.0 - ux) * ((1.0 - uy) * at(i0, j0) + uy * at(i0, j0 + 1))
        + ux * ((1.0 - uy) * at(i0 + 1, j0) + uy * at(i0 + 1, j0 + 1));
}

inline std::size_t angular_nodes(double r, double step)
{
    return 2 * std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::numbers::pi * r / step)));
}

} // namespace detail

/// Mean of f over the circle of radius r centred at (x, 0).
///
/// Midpoint rule with 2 ceil(pi r / step) equispaced angles. The lower half of
/// the circle lies outside the image domain and contributes zero.
inline double spherical_mean(const RealGrid2D& f, double x, double r)
{
    if (r <= 0.0) {
        return detail::interpolate_image(f, x, 0.0);
    }
    const std::size_t count = detail::angular_nodes(r, f.step());
    const double dtheta = 2.0 * std::numbers::pi / static_cast<double>(count);
    double sum = 0.0;
    for (std::size_t k = 0; k < count / 2; ++k) {
        const double theta = (static_cast<double>(k) + 0.5) * dtheta;
        sum += detail::interpolate_image(f, x + r * std::cos(theta), r * std::sin(theta));
    }
    return sum / static_cast<double>(count);
}

/// Data g(x_i, t_j) = d/dt int_0^t r M(x_i, r) / sqrt(t^2 - r^2) dr.
///
/// The Abel integral becomes t int_0^{pi/2} sin(u) M(t sin u) du (no endpoint
/// singularity), evaluated with composite Gauss-Legendre. Spherical means are
/// tabulated per detector on a radius grid of half the sample step. The time
/// derivative is a centered difference of Abel values at t_j +- step/2; the
/// t = 0 row is zero.
inline RealGrid2D dalembert_forward(const RealGrid2D& f, std::size_t threads = 0)
{
    if (!f.square()) {
        throw ValidationError(ValidationError::Code::non_square, "dalembert_forward needs a square image");
    }
    const GridSpec spec = f.spec();
    spec.validate();
    const std::size_t n = spec.n;
    const double dt = spec.step;
    const double dr = 0.5 * dt;
    const std::size_t radii = 2 * n + 2;
    const auto& rule = gauss_rule<8>();
    RealGrid2D g(spec, AxisKind::data);

    parallel_for(n, threads, [&](std::size_t i) {
        const double x = spec.coord(i);
        std::vector<double> means(radii + 1);
        for (std::size_t k = 0; k <= radii; ++k) {
            means[k] = spherical_mean(f, x, static_cast<double>(k) * dr);
        }
        auto mean_at = [&](double r) {
            const double pos = r / dr;
            const auto k = std::min(static_cast<std::size_t>(pos), radii - 1);
            const double u = pos - static_cast<double>(k);
            return (1.0 - u) * means[k] + u * means[k + 1];
        };
        auto abel_at = [&](double t) {
            const std::size_t panels = std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(t / dr)));
            return t * integrate_composite(rule, 0.0, 0.5 * std::numbers::pi, panels, [&](double u) {
                return std::sin(u) * mean_at(t * std::sin(u));
            });
        };
        // Centered differences over the staggered times t_j -+ dt/2.
        double previous = abel_at(0.5 * dt);
        for (std::size_t j = 1; j < n; ++j) {
            const double next = abel_at((static_cast<double>(j) + 0.5) * dt);
            g(i, j) = (next - previous) / dt;
            previous = next;
        }
        g(i, 0) = 0.0;
    });
    return g;
}

// ---------------------------------------------------------------------------
// Smooth aperture cutoff

/// Mollifier parameter epsilon (squared length) and aperture side X.
struct CutoffSpec {
    double epsilon = 0.0;
    double extent = 1.0;

    /// epsilon = (multiple * step)^2.
    static CutoffSpec from_step(double step, double multiple = 5.0, double extent = 1.0)
    {
        return {(multiple * step) * (multiple * step), extent};
    }
};

namespace detail {

/// Radial bump supported on x^2 + t^2 < epsilon, unnormalized.
///
/// Written as exp(-1 / (1 - rho^2/epsilon)^4): the same support and shape
/// family as exp(-1 / (epsilon - rho^2)^4), but without underflowing to zero
/// when epsilon is a small fraction of the aperture.
inline double bump(double rho2_over_eps)
{
    if (rho2_over_eps >= 1.0) {
        return 0.0;
    }
    const double s = 1.0 - rho2_over_eps;
    const double s2 = s * s;
    return std::exp(-1.0 / (s2 * s2));
}

class CutoffIntegrator {
public:
    explicit CutoffIntegrator(double epsilon) : epsilon_(epsilon), radius_(std::sqrt(epsilon))
    {
        mass_ = integrate(-radius_, radius_, radius_ + 1.0, -radius_ - 1.0);
    }

    double radius() const { return radius_; }

    /// Fraction of mollifier mass at offsets (a, b) with x - a in [0, X] and t - b in [0, X].
    double weight(double x, double t, double extent) const
    {
        const double a_lo = std::max(-radius_, x - extent);
        const double a_hi = std::min(radius_, x);
        if (a_hi <= a_lo) {
            return 0.0;
        }
        return std::clamp(integrate(a_lo, a_hi, t, t - extent) / mass_, 0.0, 1.0);
    }

private:
    // Integral over a in [a_lo, a_hi] of the mass with b in [b_lo, b_hi].
    double integrate(double a_lo, double a_hi, double b_hi, double b_lo) const
    {
        const auto& rule = gauss_rule<30>();
        return integrate_composite(rule, a_lo, a_hi, 2, [&](double a) {
            const double beta2 = epsilon_ - a * a;
            if (beta2 <= 0.0) {
                return 0.0;
            }
            const double beta = std::sqrt(beta2);
            const double lo = std::max(-beta, b_lo);
            const double hi = std::min(beta, b_hi);
            if (hi <= lo) {
                return 0.0;
            }
            return integrate_composite(rule, lo, hi, 2, [&](double b) {
                return bump((a * a + b * b) / epsilon_);
            });
        });
    }

    double epsilon_;
    double radius_;
    double mass_;
};

} // namespace detail

/// Samples of the aperture indicator of [0, X]^2 smoothed by the normalized mollifier.
inline RealGrid2D build_cutoff(const CutoffSpec& cutoff, const GridSpec& spec)
{
    spec.validate();
    if (!(cutoff.epsilon > 0.0) || !(cutoff.extent > 0.0)) {
        throw ValidationError(ValidationError::Code::bad_parameter, "cutoff needs epsilon > 0 and X > 0");
    }
    const detail::CutoffIntegrator integrator(cutoff.epsilon);
    const double rho = integrator.radius();
    const double X = cutoff.extent;
    RealGrid2D w(spec, AxisKind::data);
    for (std::size_t i = 0; i < spec.n; ++i) {
        const double x = spec.coord(i);
        for (std::size_t j = 0; j < spec.n; ++j) {
            const double t = spec.coord(j);
            const double inside = std::min({x, X - x, t, X - t});
            if (inside >= rho) {
                w(i, j) = 1.0;
            } else if (inside <= -rho) {
                w(i, j) = 0.0;
            } else {
                w(i, j) = integrator.weight(x, t, X);
            }
        }
    }
    return w;
}

inline RealGrid2D apply_cutoff(const RealGrid2D& g, const RealGrid2D& w)
{
    require_same_shape(g, w, "apply_cutoff");
    RealGrid2D out = g;
    auto dst = out.values();
    auto src = w.values();
    for (std::size_t k = 0; k < dst.size(); ++k) {
        dst[k] *= src[k];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Noise

/// g + eta with eta i.i.d. N(0, (level * max|g|)^2), drawn in storage order
/// from a 64-bit Mersenne Twister seeded with `seed`.
inline RealGrid2D add_gaussian_noise(const RealGrid2D& g, double level, std::uint64_t seed)
{
    if (!(level >= 0.0)) {
        throw ValidationError(ValidationError::Code::bad_parameter, "noise level must be non-negative");
    }
    RealGrid2D out = g;
    if (level == 0.0) {
        return out;
    }
    double peak = 0.0;
    for (double v : g.values()) {
        peak = std::max(peak, std::fabs(v));
    }
    const double sigma = level * peak;
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : out.values()) {
        v += sigma * normal(engine);
    }
    return out;
}

} // namespace pafour
