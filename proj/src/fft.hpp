#pragma once

#include <complex>
#include <cstddef>

#include <fftw3.h>

namespace dnls {

// Out-of-place complex FFTW plans for one transform length. Execution goes
// through fftw_execute_dft on caller-owned arrays, which FFTW documents as
// thread-safe; only planning is serialized.
class FftPlan {
public:
    explicit FftPlan(std::size_t n);
    ~FftPlan();
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    void forward(const std::complex<double>* in, std::complex<double>* out) const;
    void backward(const std::complex<double>* in, std::complex<double>* out) const;

private:
    std::size_t n_;
    fftw_plan forward_;
    fftw_plan backward_;
};

}  // namespace dnls
