#pragma once

#include <cmath>
#include <numbers>

#include "pafour/bessel.hpp"
#include "pafour/error.hpp"

namespace pafour {

namespace detail {

/// sinh(v)/v scaled by e^{-shift}; accurate for small v and finite for large v.
inline double sinhc_scaled(double v, double shift)
{
    if (v < 1e-3) {
        const double v2 = v * v;
        return (1.0 + v2 / 6.0 + v2 * v2 / 120.0) * std::exp(-shift);
    }
    return 0.5 * std::exp(v - shift) * (1.0 - std::exp(-2.0 * v)) / v;
}

inline double sinc_unnormalized(double v)
{
    if (std::fabs(v) < 1e-4) {
        return 1.0 - v * v / 6.0;
    }
    return std::sin(v) / v;
}

} // namespace detail

/// Kaiser-Bessel window with support [-alpha, alpha] and spectral cutoff K.
///
/// Evaluations are done in scaled form, so alpha * K may exceed the range
/// where I0 itself is representable.
class KaiserBesselWindow {
public:
    KaiserBesselWindow(double alpha, double k) : alpha_(alpha), k_(k)
    {
        if (!(alpha > 0.0) || !(k > 0.0) || !std::isfinite(alpha) || !std::isfinite(k)) {
            throw ValidationError(ValidationError::Code::bad_parameter,
                                  "Kaiser-Bessel window needs alpha > 0 and K > 0");
        }
        log_norm_ = log_bessel_i0(alpha_ * k_);
        inv_norm_scaled_ = 1.0 / bessel_i0_scaled(alpha_ * k_);
    }

    /// alpha slightly below the aliasing limit pi(2c - 1) for oversampling c.
    static KaiserBesselWindow for_oversampling(double c, double k, double fraction = 0.99)
    {
        return KaiserBesselWindow(fraction * std::numbers::pi * (2.0 * c - 1.0), k);
    }

    double alpha() const noexcept { return alpha_; }
    double k() const noexcept { return k_; }

    /// I0(K sqrt(alpha^2 - theta^2)) / I0(alpha K) on the support, 0 outside.
    double value(double theta) const
    {
        const double d = alpha_ * alpha_ - theta * theta;
        if (d < 0.0) {
            return 0.0;
        }
        const double arg = k_ * std::sqrt(d);
        return std::exp(log_bessel_i0(arg) - log_norm_);
    }

    /// Fourier transform of value(); the real continuation is used for |omega| > K.
    double spectrum(double omega) const
    {
        const double s2 = k_ * k_ - omega * omega;
        const double ak = alpha_ * k_;
        const double inv_i0_scaled = inv_norm_scaled_;
        if (s2 > 0.0) {
            const double v = alpha_ * std::sqrt(s2);
            return 2.0 * alpha_ * detail::sinhc_scaled(v, ak) * inv_i0_scaled;
        }
        const double edge = 2.0 * alpha_ * std::exp(-ak) * inv_i0_scaled;
        if (s2 == 0.0) {
            return edge;
        }
        return edge * detail::sinc_unnormalized(alpha_ * std::sqrt(-s2));
    }

    /// log of spectrum(0); used for ratios that would otherwise underflow.
    double log_spectrum_at_zero() const
    {
        const double ak = alpha_ * k_;
        return std::log(2.0 * alpha_) + std::log(detail::sinhc_scaled(ak, 0.0)) - log_norm_;
    }

private:
    double alpha_;
    double k_;
    double log_norm_;
    double inv_norm_scaled_;
};

/// Characteristic function of [-h, h].
class RectWindow {
public:
    explicit RectWindow(double half_width) : half_width_(half_width)
    {
        if (!(half_width >= std::numbers::pi) || !std::isfinite(half_width)) {
            throw ValidationError(ValidationError::Code::window_too_narrow,
                                  "rect window half-width must be at least pi");
        }
    }

    static RectWindow for_oversampling(double c) { return RectWindow(c * std::numbers::pi); }

    double half_width() const noexcept { return half_width_; }

    double value(double theta) const { return std::fabs(theta) <= half_width_ ? 1.0 : 0.0; }

    /// 2 sin(h omega) / omega, with the limit 2h at the origin.
    double spectrum(double omega) const
    {
        return 2.0 * half_width_ * detail::sinc_unnormalized(half_width_ * omega);
    }

private:
    double half_width_;
};

inline double kb_eval(const KaiserBesselWindow& w, double theta) { return w.value(theta); }
inline double kb_spectrum(const KaiserBesselWindow& w, double omega) { return w.spectrum(omega); }
inline double rect_spectrum(const RectWindow& w, double omega) { return w.spectrum(omega); }

} // namespace pafour
