#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pafour/error.hpp"
#include "pafour/fft.hpp"
#include "pafour/grid.hpp"
#include "pafour/nufft.hpp"
#include "pafour/parallel.hpp"
#include "pafour/windows.hpp"

// Fourier reconstruction for line detectors. For data g_{m,n} (detector m,
// time n) every method computes
//   g~_{k,n}  = sum_m e^{-i k m 2pi/N} g_{m,n}                (exact FFTs)
//   g^_{k,l} ~= sum_n e^{-i w_{k,l} n 2pi/N} g~_{k,n},   w_{k,l} = sign(l) sqrt(k^2 + l^2)
//   f^_{k,l}  = weight(k, l) g^_{k,l}
// and returns the real part of the inverse 2D FFT of f^. The methods differ
// only in how g^_{k,l} is obtained.

namespace pafour {

enum class Method { nufft, direct, nearest, linear, trunc_sinc, backprojection };

/// What happens to spectral nodes with k^2 + l^2 > (N/2)^2.
enum class BandLimit { zero, wrap };

/// Spectral weight: `axial` is 2|l| / sqrt(k^2 + l^2); `literal_k` uses 2k / w_{k,l}
/// and exists for A/B comparison only.
enum class WeightVariant { axial, literal_k };

inline std::string_view method_name(Method m)
{
    switch (m) {
    case Method::nufft: return "nufft";
    case Method::direct: return "direct";
    case Method::nearest: return "nearest";
    case Method::linear: return "linear";
    case Method::trunc_sinc: return "trunc-sinc";
    case Method::backprojection: return "backprojection";
    }
    return "unknown";
}

inline Method parse_method(std::string_view name)
{
    for (auto m : {Method::nufft, Method::direct, Method::nearest, Method::linear, Method::trunc_sinc,
                   Method::backprojection}) {
        if (method_name(m) == name) {
            return m;
        }
    }
    if (name == "trunc_sinc") {
        return Method::trunc_sinc;
    }
    throw ValidationError(ValidationError::Code::bad_parameter, "unknown method '" + std::string(name) + "'");
}

struct ReconConfig {
    Method method = Method::nufft;
    double c = 2.0;                ///< oversampling factor (Fourier methods)
    double k_interp = 3.0;         ///< interpolation length (nufft, trunc_sinc)
    std::optional<double> alpha;   ///< Kaiser-Bessel support; see window_alpha()
    BandLimit band_limit = BandLimit::zero;
    WeightVariant weight = WeightVariant::axial;
    PhaseConvention phase = PhaseConvention::shifted;
    std::size_t threads = 0;       ///< 0 = hardware concurrency

    /// 0.99 pi (2c - 1), but never below pi: the window has to stay positive on [-pi, pi],
    /// which at c = 1 leaves only the limit value pi.
    double window_alpha() const
    {
        return alpha.value_or(std::max(0.99 * std::numbers::pi * (2.0 * c - 1.0), std::numbers::pi));
    }

    void validate() const
    {
        if (method == Method::backprojection || method == Method::direct) {
            return;
        }
        if (!(c >= 1.0)) {
            throw ValidationError(ValidationError::Code::bad_parameter, "oversampling c must be >= 1");
        }
        if ((method == Method::nearest || method == Method::linear) && c != std::floor(c)) {
            throw ValidationError(ValidationError::Code::bad_parameter,
                                  "interpolation methods need an integer oversampling factor");
        }
        if ((method == Method::nufft || method == Method::trunc_sinc) && !(k_interp > 0.0)) {
            throw ValidationError(ValidationError::Code::bad_parameter, "interpolation length K must be positive");
        }
        if (method == Method::nufft && alpha && !(*alpha > 0.0)) {
            throw ValidationError(ValidationError::Code::bad_parameter, "alpha must be positive");
        }
    }
};

// ---------------------------------------------------------------------------
// Index helpers

/// Signed frequency for FFT-ordered index i of an n-point transform: [-n/2, n/2).
inline std::int64_t signed_frequency(std::size_t i, std::size_t n)
{
    const auto si = static_cast<std::int64_t>(i);
    const auto sn = static_cast<std::int64_t>(n);
    return si < sn / 2 ? si : si - sn;
}

/// Node w_{k,l} = sign(l) sqrt(k^2 + l^2), with sign(0) = +1.
inline double spectral_node(std::int64_t k, std::int64_t l)
{
    const double radius = std::sqrt(static_cast<double>(k * k + l * l));
    return l < 0 ? -radius : radius;
}

/// 2|l| / sqrt(k^2 + l^2); zero on the whole l = 0 row, including the DC term.
inline double spectral_weight(std::int64_t k, std::int64_t l)
{
    if (l == 0) {
        return 0.0;
    }
    const double al = static_cast<double>(l < 0 ? -l : l);
    return 2.0 * al / std::sqrt(static_cast<double>(k * k + l * l));
}

inline double spectral_weight(std::int64_t k, std::int64_t l, WeightVariant variant)
{
    if (variant == WeightVariant::axial) {
        return spectral_weight(k, l);
    }
    if (l == 0) {
        return 0.0;
    }
    return 2.0 * static_cast<double>(k) / spectral_node(k, l);
}

/// Keep nodes inside the representable band |w| <= N/2.
inline bool band_limit_keep(std::int64_t k, std::int64_t l, std::size_t n)
{
    const auto half = static_cast<std::int64_t>(n / 2);
    return k * k + l * l <= half * half;
}

// ---------------------------------------------------------------------------
// Shared pipeline

/// N x N complex array in FFT order, row k (detector frequency), column n.
struct DetectorSpectrum {
    std::size_t n = 0;
    std::vector<cplx> values;

    std::span<const cplx> row(std::size_t k) const { return {values.data() + k * n, n}; }
};

namespace detail {

inline void require_square_even(const RealGrid2D& g)
{
    if (!g.square()) {
        throw ValidationError(ValidationError::Code::non_square, "reconstruction needs a square grid");
    }
    if (g.nx() == 0 || g.nx() % 2 != 0) {
        throw ValidationError(ValidationError::Code::odd_length, "reconstruction needs an even grid size");
    }
}

} // namespace detail

/// Exact transforms along the detector axis, one per time sample.
inline DetectorSpectrum time_axis_dft(const RealGrid2D& g)
{
    detail::require_square_even(g);
    const std::size_t n = g.nx();
    DetectorSpectrum out{n, std::vector<cplx>(n * n)};
    std::vector<cplx> column(n);
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t m = 0; m < n; ++m) {
            column[m] = g(m, t);
        }
        fft::transform(column, fft::Direction::forward);
        for (std::size_t k = 0; k < n; ++k) {
            out.values[k * n + t] = column[k];
        }
    }
    return out;
}

/// Spectral nodes evaluated for one detector frequency, with their l indices.
struct ColumnNodes {
    std::vector<std::size_t> l_index;
    std::vector<double> omega;
};

inline ColumnNodes column_nodes(std::size_t k_index, std::size_t n, BandLimit band)
{
    const std::int64_t k = signed_frequency(k_index, n);
    ColumnNodes nodes;
    nodes.l_index.reserve(n);
    nodes.omega.reserve(n);
    for (std::size_t li = 0; li < n; ++li) {
        const std::int64_t l = signed_frequency(li, n);
        if (band == BandLimit::zero && !band_limit_keep(k, l, n)) {
            continue;
        }
        nodes.l_index.push_back(li);
        nodes.omega.push_back(spectral_node(k, l));
    }
    return nodes;
}

namespace detail {

/// Runs evaluate(nodes, rows, outs) once per |k|: the detector frequencies k
/// and -k share their spectral nodes, so both rows are handed over together.
/// Then applies the spectral weight and inverts with the 2D FFT.
template <class Evaluate>
RealGrid2D spectral_reconstruct(const RealGrid2D& g, const ReconConfig& cfg, Evaluate&& evaluate)
{
    const DetectorSpectrum spectrum = time_axis_dft(g);
    const std::size_t n = spectrum.n;
    std::vector<cplx> image_spectrum(n * n);

    parallel_for(n / 2 + 1, cfg.threads, [&](std::size_t group) {
        const ColumnNodes nodes = column_nodes(group, n, cfg.band_limit);
        std::vector<std::size_t> rows_k{group};
        if (group != 0 && group != n / 2) {
            rows_k.push_back(n - group);
        }
        std::vector<std::vector<cplx>> values(rows_k.size(), std::vector<cplx>(nodes.omega.size()));
        std::vector<std::span<const cplx>> rows;
        std::vector<std::span<cplx>> outs;
        for (std::size_t r = 0; r < rows_k.size(); ++r) {
            rows.push_back(spectrum.row(rows_k[r]));
            outs.emplace_back(values[r]);
        }
        evaluate(nodes, std::span<const std::span<const cplx>>(rows), std::span<const std::span<cplx>>(outs));
        for (std::size_t r = 0; r < rows_k.size(); ++r) {
            const std::size_t ki = rows_k[r];
            const std::int64_t k = signed_frequency(ki, n);
            for (std::size_t e = 0; e < nodes.omega.size(); ++e) {
                const std::size_t li = nodes.l_index[e];
                const double w = spectral_weight(k, signed_frequency(li, n), cfg.weight);
                image_spectrum[ki * n + li] = w * values[r][e];
            }
        }
    });

    fft::transform_2d(image_spectrum, n, n, fft::Direction::backward);
    RealGrid2D f(n, n, g.step(), AxisKind::image);
    const double scale = 1.0 / static_cast<double>(n * n);
    for (std::size_t i = 0; i < n * n; ++i) {
        f.values()[i] = image_spectrum[i].real() * scale;
    }
    return f;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Methods

/// Exact summation of every spectral node: O(N^3).
inline RealGrid2D reconstruct_direct(const RealGrid2D& g, const ReconConfig& cfg = {})
{
    detail::require_square_even(g);
    const std::size_t n = g.nx();
    const double nd = static_cast<double>(n);
    return detail::spectral_reconstruct(g, cfg, [&](const ColumnNodes& nodes, auto rows, auto outs) {
        std::vector<cplx> kernel(n);
        for (std::size_t e = 0; e < nodes.omega.size(); ++e) {
            const double omega = nodes.omega[e];
            for (std::size_t t = 0; t < n; ++t) {
                const double turns = std::fmod(omega * static_cast<double>(t), nd);
                const double phase = -2.0 * std::numbers::pi * turns / nd;
                kernel[t] = cplx(std::cos(phase), std::sin(phase));
            }
            for (std::size_t r = 0; r < rows.size(); ++r) {
                cplx acc{};
                for (std::size_t t = 0; t < n; ++t) {
                    acc += kernel[t] * rows[r][t];
                }
                outs[r][e] = acc;
            }
        }
    });
}

namespace detail {

template <class Window>
RealGrid2D reconstruct_windowed(const RealGrid2D& g, const ReconConfig& cfg, const Window& window)
{
    detail::require_square_even(g);
    const std::size_t n = g.nx();
    return spectral_reconstruct(g, cfg, [&](const ColumnNodes& nodes, auto rows, auto outs) {
        const NufftPlan<Window> plan(n, nodes.omega, cfg.c, cfg.k_interp, window, cfg.phase);
        std::vector<cplx> scratch;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            plan.execute(rows[r], outs[r], scratch);
        }
    });
}

} // namespace detail

/// Nonuniform-FFT reconstruction with the Kaiser-Bessel window: O(N^2 log N).
inline RealGrid2D reconstruct_nufft(const RealGrid2D& g, const ReconConfig& cfg)
{
    cfg.validate();
    return detail::reconstruct_windowed(g, cfg, KaiserBesselWindow(cfg.window_alpha(), cfg.k_interp));
}

/// Same pipeline with the characteristic function of [-c pi, c pi] as window,
/// i.e. truncated sinc interpolation.
inline RealGrid2D reconstruct_trunc_sinc(const RealGrid2D& g, const ReconConfig& cfg)
{
    cfg.validate();
    return detail::reconstruct_windowed(g, cfg, RectWindow::for_oversampling(cfg.c));
}

/// Zero-padded FFT to the grid j/c, then nearest-neighbour or linear
/// interpolation at each spectral node.
inline RealGrid2D reconstruct_interp(const RealGrid2D& g, const ReconConfig& cfg)
{
    cfg.validate();
    if (cfg.method != Method::nearest && cfg.method != Method::linear) {
        throw ValidationError(ValidationError::Code::bad_parameter, "reconstruct_interp needs nearest or linear");
    }
    detail::require_square_even(g);
    const std::size_t n = g.nx();
    const auto m = static_cast<std::size_t>(cfg.c) * n;
    const auto sm = static_cast<std::int64_t>(m);
    const bool nearest = cfg.method == Method::nearest;
    return detail::spectral_reconstruct(g, cfg, [&](const ColumnNodes& nodes, auto rows, auto outs) {
        std::vector<cplx> padded(m);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            std::fill(padded.begin(), padded.end(), cplx{});
            std::copy(rows[r].begin(), rows[r].end(), padded.begin());
            fft::transform(padded, fft::Direction::forward);
            auto at = [&](std::int64_t j) { return padded[static_cast<std::size_t>(((j % sm) + sm) % sm)]; };
            for (std::size_t e = 0; e < nodes.omega.size(); ++e) {
                const double pos = nodes.omega[e] * cfg.c;
                if (nearest) {
                    outs[r][e] = at(static_cast<std::int64_t>(std::llround(pos)));
                } else {
                    const double base = std::floor(pos);
                    const double frac = pos - base;
                    const auto j = static_cast<std::int64_t>(base);
                    outs[r][e] = (1.0 - frac) * at(j) + frac * at(j + 1);
                }
            }
        }
    });
}

/// Time-domain back-projection
///   f(x, y) = -(2y/pi) int ( int_r^inf q(x', t) / sqrt(t^2 - r^2) dt ) dx',
///   q = d/dt (g / t),  r = |(x, y) - (x', 0)|.
///
/// The inner integral is tabulated per detector on the radius grid r_j = j step
/// (substitution t = sqrt(r^2 + u^2), N-node trapezoid in u) and interpolated
/// linearly per pixel; the outer integral is a trapezoid over detectors. O(N^3).
inline RealGrid2D reconstruct_backprojection(const RealGrid2D& g, std::size_t threads = 0)
{
    detail::require_square_even(g);
    const std::size_t n = g.nx();
    const double dt = g.step();
    const double t_max = dt * static_cast<double>(n - 1);

    // q(x_p, t_j)
    std::vector<double> q(n * n);
    for (std::size_t p = 0; p < n; ++p) {
        std::vector<double> v(n);
        for (std::size_t j = 1; j < n; ++j) {
            v[j] = g(p, j) / (dt * static_cast<double>(j));
        }
        v[0] = (-3.0 * g(p, 0) + 4.0 * g(p, 1) - g(p, 2)) / (2.0 * dt);
        double* qp = q.data() + p * n;
        qp[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dt);
        for (std::size_t j = 1; j + 1 < n; ++j) {
            qp[j] = (v[j + 1] - v[j - 1]) / (2.0 * dt);
        }
        qp[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * dt);
    }

    // h(x_p, r_j), r_j = j dt, j = 0..n-1; zero beyond the recorded time window.
    std::vector<double> h(n * (n + 1), 0.0);
    parallel_for(n, threads, [&](std::size_t p) {
        const double* qp = q.data() + p * n;
        auto q_at = [&](double t) {
            const double pos = t / dt;
            const auto j = static_cast<std::size_t>(pos);
            if (j + 1 >= n) {
                return j + 1 == n && pos <= static_cast<double>(n - 1) ? qp[n - 1] : 0.0;
            }
            const double u = pos - static_cast<double>(j);
            return (1.0 - u) * qp[j] + u * qp[j + 1];
        };
        for (std::size_t j = 1; j < n; ++j) {
            const double r = dt * static_cast<double>(j);
            const double upper = std::sqrt(std::max(0.0, t_max * t_max - r * r));
            if (upper <= 0.0) {
                continue;
            }
            const double du = upper / static_cast<double>(n - 1);
            double sum = 0.0;
            for (std::size_t s = 0; s < n; ++s) {
                const double u = du * static_cast<double>(s);
                const double t = std::sqrt(r * r + u * u);
                const double weight = (s == 0 || s + 1 == n) ? 0.5 : 1.0;
                sum += weight * q_at(t) / t;
            }
            h[p * (n + 1) + j] = sum * du;
        }
    });

    RealGrid2D f(n, n, dt, AxisKind::image);
    parallel_for(n, threads, [&](std::size_t i) {
        const double x = dt * static_cast<double>(i);
        for (std::size_t j = 1; j < n; ++j) {
            const double y = dt * static_cast<double>(j);
            double sum = 0.0;
            for (std::size_t p = 0; p < n; ++p) {
                const double dx = x - dt * static_cast<double>(p);
                const double r = std::sqrt(dx * dx + y * y);
                const double pos = r / dt;
                const auto rj = static_cast<std::size_t>(pos);
                if (rj >= n) {
                    continue;
                }
                const double u = pos - static_cast<double>(rj);
                const double* hp = h.data() + p * (n + 1);
                const double value = (1.0 - u) * hp[rj] + u * hp[rj + 1];
                sum += ((p == 0 || p + 1 == n) ? 0.5 : 1.0) * value;
            }
            f(i, j) = -(2.0 * y / std::numbers::pi) * sum * dt;
        }
    });
    return f;
}

/// Dispatch on cfg.method.
inline RealGrid2D reconstruct(const RealGrid2D& g, const ReconConfig& cfg)
{
    cfg.validate();
    switch (cfg.method) {
    case Method::nufft: return reconstruct_nufft(g, cfg);
    case Method::direct: return reconstruct_direct(g, cfg);
    case Method::nearest:
    case Method::linear: return reconstruct_interp(g, cfg);
    case Method::trunc_sinc: return reconstruct_trunc_sinc(g, cfg);
    case Method::backprojection: return reconstruct_backprojection(g, cfg.threads);
    }
    throw ValidationError(ValidationError::Code::bad_parameter, "unknown method");
}

} // namespace pafour
