#include "fft.hpp"

#include <mutex>
#include <vector>

namespace dnls {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
    std::vector<std::complex<double>> a(n), b(n);
    auto* in = reinterpret_cast<fftw_complex*>(a.data());
    auto* out = reinterpret_cast<fftw_complex*>(b.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_FORWARD, flags);
    backward_ = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_BACKWARD, flags);
}

FftPlan::~FftPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
}

void FftPlan::forward(const std::complex<double>* in, std::complex<double>* out) const {
    // FFTW never writes to the input of an out-of-place c2c transform.
    fftw_execute_dft(forward_,
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void FftPlan::backward(const std::complex<double>* in, std::complex<double>* out) const {
    fftw_execute_dft(backward_,
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

}  // namespace dnls
