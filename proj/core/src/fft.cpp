#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace fsosnr::detail {

namespace {
// FFTW's planner is not re-entrant; execution of distinct plans is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}
} // namespace

void fft_inplace(std::vector<Complex>& data, FftDirection dir)
{
    if (data.empty()) return;
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    const int sign = dir == FftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD;

    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
}

} // namespace fsosnr::detail
