#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "pafour/error.hpp"
#include "pafour/fft.hpp"
#include "pafour/forward.hpp"
#include "pafour/grid.hpp"
#include "pafour/parallel.hpp"
#include "pafour/recon.hpp"

namespace pafour {

/// ||f - f_ref|| / ||f_ref|| in the discrete l2 norm.
inline double rel_l2_error(const RealGrid2D& f, const RealGrid2D& f_ref)
{
    require_same_shape(f, f_ref, "rel_l2_error");
    long double num = 0.0L;
    long double den = 0.0L;
    const auto a = f.values();
    const auto b = f_ref.values();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const long double d = static_cast<long double>(a[i]) - b[i];
        num += d * d;
        den += static_cast<long double>(b[i]) * b[i];
    }
    if (den == 0.0L) {
        throw ValidationError(ValidationError::Code::zero_reference, "reference grid has zero norm");
    }
    return static_cast<double>(std::sqrt(num / den));
}

struct BenchmarkRecord {
    Method method = Method::direct;
    double c = 0.0;
    double k_interp = 0.0;
    double alpha = 0.0;
    double error = 0.0;   ///< relative l2 error against the direct reconstruction
    double seconds = 0.0; ///< median wall time
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

struct BenchmarkOptions {
    std::size_t repeats = 3;
    std::size_t warmups = 1;
    double noise = 0.0;
    std::uint64_t seed = 0;
    double cutoff_multiple = 5.0; ///< cutoff epsilon = (multiple * step)^2
};

/// Benchmark data: analytic circle data windowed by the cutoff, optionally noisy.
inline RealGrid2D benchmark_data(const CirclePhantom& phantom, std::size_t n, const BenchmarkOptions& opt)
{
    const GridSpec spec = GridSpec::unit_square(n);
    spec.validate();
    RealGrid2D g = apply_cutoff(circle_data(phantom, spec),
                                build_cutoff(CutoffSpec::from_step(spec.step, opt.cutoff_multiple), spec));
    if (opt.noise > 0.0) {
        g = add_gaussian_noise(g, opt.noise, opt.seed);
    }
    return g;
}

namespace detail {

template <class F>
double median_seconds(std::size_t warmups, std::size_t repeats, F&& run)
{
    for (std::size_t i = 0; i < warmups; ++i) {
        run();
    }
    std::vector<double> times;
    for (std::size_t i = 0; i < std::max<std::size_t>(repeats, 1); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        run();
        times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

} // namespace detail

/// Runs every method on the same data, sequentially. The direct reconstruction
/// is computed once as the error reference; for a direct row that run also
/// serves as its warmup.
inline std::vector<BenchmarkRecord> run_benchmark(const std::vector<ReconConfig>& methods,
                                                  const CirclePhantom& phantom, std::size_t n,
                                                  const BenchmarkOptions& opt = {})
{
    if (n == 0 || n % 2 != 0) {
        throw ValidationError(ValidationError::Code::odd_length, "benchmark size must be even");
    }
    const RealGrid2D g = benchmark_data(phantom, n, opt);
    ReconConfig direct_cfg;
    direct_cfg.method = Method::direct;
    if (!methods.empty()) {
        direct_cfg.threads = methods.front().threads;
    }
    const RealGrid2D reference = reconstruct(g, direct_cfg);

    std::vector<BenchmarkRecord> records;
    for (const ReconConfig& cfg : methods) {
        BenchmarkRecord rec;
        rec.method = cfg.method;
        rec.n = n;
        rec.seed = opt.seed;
        const bool fourier = cfg.method != Method::direct && cfg.method != Method::backprojection;
        rec.c = fourier ? cfg.c : 0.0;
        rec.k_interp = cfg.method == Method::nufft || cfg.method == Method::trunc_sinc ? cfg.k_interp : 0.0;
        rec.alpha = cfg.method == Method::nufft ? cfg.window_alpha() : 0.0;

        RealGrid2D f;
        const std::size_t warmups = cfg.method == Method::direct ? 0 : opt.warmups;
        rec.seconds = detail::median_seconds(warmups, opt.repeats, [&] { f = reconstruct(g, cfg); });
        rec.error = rel_l2_error(f, reference);
        records.push_back(rec);
    }
    return records;
}

/// Text table: header `method,c,K,error,seconds`, one row per record.
inline void write_benchmark_text(std::ostream& os, const std::vector<BenchmarkRecord>& records)
{
    os << "method,c,K,error,seconds\n";
    char buf[160];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%s,%g,%g,%.6e,%.6e\n", std::string(method_name(r.method)).c_str(),
                      r.c, r.k_interp, r.error, r.seconds);
        os << buf;
    }
}

inline nlohmann::json benchmark_json(const std::vector<BenchmarkRecord>& records, std::size_t threads = 0)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : records) {
        rows.push_back({{"method", method_name(r.method)},
                        {"c", r.c},
                        {"K", r.k_interp},
                        {"alpha", r.alpha},
                        {"error", r.error},
                        {"seconds", r.seconds},
                        {"n", r.n},
                        {"seed", r.seed}});
    }
    return {{"records", rows},
            {"metadata",
             {{"threads", threads == 0 ? default_thread_count() : threads},
              {"hardware_concurrency", std::thread::hardware_concurrency()},
              {"timing", "median of 3 after 1 warmup"},
              {"reference", "direct"}}}};
}

struct SamplingReport {
    double omega_index = 0.0; ///< essential bandwidth in frequency-index units
    double omega = 0.0;       ///< the same in angular frequency, omega_index * 2 pi / X
    double step = 0.0;
    bool nyquist_ok = false;
};

/// Smallest radius (index units) of the centred spectrum holding energy_fraction
/// of the total |F f|^2, and whether step <= pi / Omega.
inline SamplingReport sampling_check(const RealGrid2D& f, double energy_fraction = 0.999)
{
    if (!(energy_fraction > 0.0 && energy_fraction < 1.0)) {
        throw ValidationError(ValidationError::Code::bad_parameter, "energy fraction must lie in (0, 1)");
    }
    const std::size_t nx = f.nx();
    const std::size_t ny = f.ny();
    std::vector<fft::cplx> spec(nx * ny);
    for (std::size_t i = 0; i < spec.size(); ++i) {
        spec[i] = f.values()[i];
    }
    fft::transform_2d(spec, nx, ny, fft::Direction::forward);

    auto signed_index = [](std::size_t i, std::size_t n) {
        return i < n / 2 ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(n);
    };
    std::vector<std::pair<double, double>> bins; // (radius, energy)
    bins.reserve(spec.size());
    double total = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const double e = std::norm(spec[i * ny + j]);
            bins.emplace_back(std::hypot(signed_index(i, nx), signed_index(j, ny)), e);
            total += e;
        }
    }
    std::sort(bins.begin(), bins.end());

    SamplingReport report;
    report.step = f.step();
    if (total > 0.0) {
        double acc = 0.0;
        for (const auto& [radius, e] : bins) {
            acc += e;
            if (acc >= energy_fraction * total) {
                report.omega_index = radius;
                break;
            }
        }
    }
    const double extent = f.step() * static_cast<double>(std::max(nx, ny));
    report.omega = report.omega_index * 2.0 * std::numbers::pi / extent;
    report.nyquist_ok = report.omega == 0.0 || report.step <= std::numbers::pi / report.omega;
    return report;
}

} // namespace pafour
