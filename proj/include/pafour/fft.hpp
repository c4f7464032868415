#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <tuple>

#include <fftw3.h>

namespace pafour::fft {

using cplx = std::complex<double>;

enum class Direction { forward, backward };

namespace detail {

// FFTW planning is not thread-safe, execution with the new-array interface is.
// Plans are created once per (shape, direction) and live until exit.
class PlanCache {
public:
    static PlanCache& instance()
    {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(int rank, int n0, int n1, Direction dir)
    {
        const Key key{rank, n0, n1, dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD};
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(key); it != plans_.end()) {
            return it->second;
        }
        const std::size_t count = static_cast<std::size_t>(n0) * (rank == 2 ? n1 : 1);
        auto* scratch = fftw_alloc_complex(count);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fftw_plan plan = rank == 1
            ? fftw_plan_dft_1d(n0, scratch, scratch, std::get<3>(key), flags)
            : fftw_plan_dft_2d(n0, n1, scratch, scratch, std::get<3>(key), flags);
        fftw_free(scratch);
        plans_.emplace(key, plan);
        return plan;
    }

    PlanCache(const PlanCache&) = delete;
    PlanCache& operator=(const PlanCache&) = delete;

private:
    using Key = std::tuple<int, int, int, int>;

    PlanCache() = default;
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_) {
            fftw_destroy_plan(plan);
        }
    }

    std::mutex mutex_;
    std::map<Key, fftw_plan> plans_;
};

inline fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

} // namespace detail

/// Unnormalized in-place 1D DFT: forward uses e^{-2 pi i jn/M}, backward e^{+2 pi i jn/M}.
inline void transform(std::span<cplx> data, Direction dir)
{
    if (data.empty()) {
        return;
    }
    auto plan = detail::PlanCache::instance().get(1, static_cast<int>(data.size()), 0, dir);
    fftw_execute_dft(plan, detail::as_fftw(data.data()), detail::as_fftw(data.data()));
}

/// Unnormalized in-place 2D DFT of a row-major n0 x n1 array.
inline void transform_2d(std::span<cplx> data, std::size_t n0, std::size_t n1, Direction dir)
{
    auto plan = detail::PlanCache::instance().get(2, static_cast<int>(n0), static_cast<int>(n1), dir);
    fftw_execute_dft(plan, detail::as_fftw(data.data()), detail::as_fftw(data.data()));
}

} // namespace pafour::fft
