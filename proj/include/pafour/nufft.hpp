#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "pafour/error.hpp"
#include "pafour/fft.hpp"
#include "pafour/windows.hpp"

namespace pafour {

using cplx = std::complex<double>;

/// Phase factor attached to each interpolation weight.
///  - shifted:      e^{-i pi (omega - j/c)}, the identity that makes the
///                  evaluation exact in the untruncated limit.
///  - shifted_by_c: e^{-i pi (omega - j/c) / c}, kept only so tests can show
///                  that it does not reproduce the direct sum for c != 1.
enum class PhaseConvention { shifted, shifted_by_c };

/// Exact evaluation of sum_n g_n e^{-i omega_k n 2 pi / N} by direct summation.
inline std::vector<cplx> direct_dft(std::span<const cplx> g, std::span<const double> nodes)
{
    const std::size_t n = g.size();
    std::vector<cplx> out(nodes.size());
    const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const long double omega = nodes[k];
        std::complex<long double> acc{0.0L, 0.0L};
        for (std::size_t m = 0; m < n; ++m) {
            const long double turns = std::fmod(omega * static_cast<long double>(m),
                                                static_cast<long double>(n));
            const long double phase = -two_pi * turns / static_cast<long double>(n);
            acc += std::complex<long double>(std::cos(phase), std::sin(phase))
                * std::complex<long double>(g[m].real(), g[m].imag());
        }
        out[k] = cplx(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
    }
    return out;
}

/// Precomputed nonuniform DFT: window deconvolution, oversampled FFT of
/// length cN, and a short windowed interpolation per node.
///
/// A plan is immutable after construction; execute() may be called
/// concurrently from several threads.
template <class Window>
class NufftPlan {
public:
    NufftPlan(std::size_t n, std::span<const double> nodes, double c, double k_interp,
              Window window, PhaseConvention phase = PhaseConvention::shifted)
        : n_(n), c_(c), k_interp_(k_interp), window_(window), phase_(phase)
    {
        validate();
        build_deconvolution();
        build_weights(nodes);
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t oversampled_size() const noexcept { return m_; }
    std::size_t node_count() const noexcept { return offsets_.size() - 1; }
    double oversampling() const noexcept { return c_; }
    double interpolation_length() const noexcept { return k_interp_; }
    const Window& window() const noexcept { return window_; }

    /// True when the rect window's sinc series is summed over every periodic
    /// image instead of being truncated.
    bool full_series() const noexcept { return full_series_; }

    std::size_t weights_for_node(std::size_t k) const { return offsets_[k + 1] - offsets_[k]; }

    /// Scratch-buffer variant for hot loops; scratch is resized as needed.
    void execute(std::span<const cplx> g, std::span<cplx> out, std::vector<cplx>& scratch) const
    {
        if (g.size() != n_) {
            throw ValidationError(ValidationError::Code::length_mismatch,
                                  "nufft input length " + std::to_string(g.size())
                                      + " does not match plan length " + std::to_string(n_));
        }
        if (out.size() != node_count()) {
            throw ValidationError(ValidationError::Code::length_mismatch,
                                  "nufft output length does not match node count");
        }
        scratch.assign(m_, cplx{});
        for (std::size_t i = 0; i < n_; ++i) {
            scratch[i] = g[i] * deconvolution_[i];
        }
        fft::transform(scratch, fft::Direction::forward);
        for (std::size_t k = 0; k + 1 < offsets_.size(); ++k) {
            cplx acc{};
            for (std::size_t e = offsets_[k]; e < offsets_[k + 1]; ++e) {
                acc += weights_[e] * scratch[indices_[e]];
            }
            out[k] = acc;
        }
    }

    std::vector<cplx> execute(std::span<const cplx> g) const
    {
        std::vector<cplx> out(node_count());
        std::vector<cplx> scratch;
        execute(g, out, scratch);
        return out;
    }

private:
    static constexpr bool is_rect = std::is_same_v<Window, RectWindow>;

    static double support_of(const Window& w)
    {
        if constexpr (is_rect) {
            return w.half_width();
        } else {
            return w.alpha();
        }
    }

    void validate()
    {
        using Code = ValidationError::Code;
        if (n_ == 0 || n_ % 2 != 0) {
            throw ValidationError(Code::odd_length, "nufft length must be even and positive");
        }
        if (!(c_ >= 1.0) || !(k_interp_ > 0.0)) {
            throw ValidationError(Code::bad_parameter, "nufft needs c >= 1 and K > 0");
        }
        const double m = c_ * static_cast<double>(n_);
        const double m_rounded = std::round(m);
        if (std::fabs(m - m_rounded) > 1e-9 * m || static_cast<std::uint64_t>(m_rounded) % 2 != 0) {
            throw ValidationError(Code::odd_oversampled_length,
                                  "oversampled length cN must be an even integer");
        }
        m_ = static_cast<std::size_t>(m_rounded);
        const double limit = std::numbers::pi * (2.0 * c_ - 1.0);
        const double support = support_of(window_);
        // Support exactly at the limit is accepted: alpha = 3 pi at c = 2 and the
        // c = 1 sinc series both sit there, and the overlap is a single edge point.
        if (support > limit * (1.0 + 1e-12)) {
            throw ValidationError(Code::window_too_wide,
                                  "window support must not exceed pi(2c - 1)");
        }
    }

    void build_deconvolution()
    {
        deconvolution_.resize(n_);
        // Fourier coefficients of the 2 pi c periodic extension carry 1/(2 pi c).
        const double scale = 1.0 / (2.0 * std::numbers::pi * c_);
        for (std::size_t i = 0; i < n_; ++i) {
            const double theta = 2.0 * std::numbers::pi * static_cast<double>(i)
                    / static_cast<double>(n_)
                - std::numbers::pi;
            const double psi = window_.value(theta);
            if (!(psi > 0.0)) {
                throw ValidationError(ValidationError::Code::window_too_narrow,
                                      "window must be positive on [-pi, pi]");
            }
            deconvolution_[i] = scale / psi;
        }
    }

    cplx phase(double x) const
    {
        const double arg = phase_ == PhaseConvention::shifted ? -std::numbers::pi * x
                                                              : -std::numbers::pi * x / c_;
        return {std::cos(arg), std::sin(arg)};
    }

    std::uint32_t wrap(std::int64_t j) const
    {
        const auto m = static_cast<std::int64_t>(m_);
        return static_cast<std::uint32_t>(((j % m) + m) % m);
    }

    // Sum over p of e^{-i pi (x - pN)} 2 sin(c pi (x - pN)) / (x - pN), using
    // sum_p 1/(x - pN) = (pi/N) cot(pi x / N).
    cplx periodized_rect(double x) const
    {
        const double period = static_cast<double>(n_);
        const double nearest = std::round(x / period) * period;
        const double h = window_.half_width();
        if (std::fabs(x - nearest) < 1e-13 * (1.0 + std::fabs(x))) {
            return cplx(2.0 * h, 0.0);
        }
        const double kernel = 2.0 * std::sin(h * x) * (std::numbers::pi / period)
            / std::tan(std::numbers::pi * x / period);
        return phase(x) * kernel;
    }

    void build_weights(std::span<const double> nodes)
    {
        if constexpr (is_rect) {
            const double h = window_.half_width();
            full_series_ = 2.0 * k_interp_ >= static_cast<double>(n_)
                && std::fabs(h - c_ * std::numbers::pi) <= 1e-12 * h
                && phase_ == PhaseConvention::shifted;
        }
        offsets_.reserve(nodes.size() + 1);
        offsets_.push_back(0);
        const std::size_t per_node = full_series_
            ? m_
            : static_cast<std::size_t>(std::ceil(2.0 * c_ * k_interp_)) + 1;
        indices_.reserve(nodes.size() * per_node);
        weights_.reserve(nodes.size() * per_node);
        for (double omega : nodes) {
            if (!std::isfinite(omega)) {
                throw ValidationError(ValidationError::Code::bad_parameter, "non-finite nufft node");
            }
            if (full_series_) {
                for (std::size_t j = 0; j < m_; ++j) {
                    const double x = omega - static_cast<double>(j) / c_;
                    indices_.push_back(static_cast<std::uint32_t>(j));
                    if constexpr (is_rect) {
                        weights_.push_back(periodized_rect(x));
                    }
                }
            } else {
                const auto lo = static_cast<std::int64_t>(std::ceil(c_ * (omega - k_interp_)));
                const auto hi = static_cast<std::int64_t>(std::floor(c_ * (omega + k_interp_)));
                // x drops by 1/c per step, so the phase advances by a fixed rotation.
                cplx rot = phase(lo == hi ? 0.0 : -1.0 / c_);
                cplx ph = phase(omega - static_cast<double>(lo) / c_);
                for (std::int64_t j = lo; j <= hi; ++j) {
                    const double x = omega - static_cast<double>(j) / c_;
                    indices_.push_back(wrap(j));
                    weights_.push_back(ph * window_.spectrum(x));
                    ph *= rot;
                }
            }
            offsets_.push_back(indices_.size());
        }
    }

    std::size_t n_;
    std::size_t m_ = 0;
    double c_;
    double k_interp_;
    Window window_;
    PhaseConvention phase_;
    bool full_series_ = false;
    std::vector<double> deconvolution_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> indices_;
    std::vector<cplx> weights_;
};

/// Convenience wrappers mirroring plan/execute.
template <class Window>
NufftPlan<Window> plan(std::size_t n, std::span<const double> nodes, double c, double k_interp,
                       Window window)
{
    return NufftPlan<Window>(n, nodes, c, k_interp, std::move(window));
}

template <class Window>
std::vector<cplx> execute(const NufftPlan<Window>& p, std::span<const cplx> g)
{
    return p.execute(g);
}

} // namespace pafour
