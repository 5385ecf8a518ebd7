#include "qlbeam/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <utility>
#include <vector>

#include "qlbeam/error.hpp"

namespace qlbeam {

namespace {

// The FFTW planner is not reentrant.
std::mutex &planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_plan make_plan(std::size_t n, std::size_t count, std::size_t stride, std::size_t dist,
                    int sign) {
    const std::size_t span = (count - 1) * dist + (n - 1) * stride + 1;
    std::vector<std::complex<double>> scratch(span);
    int len = static_cast<int>(n);
    auto *buf = reinterpret_cast<fftw_complex *>(scratch.data());
    std::lock_guard lock(planner_mutex());
    fftw_plan plan = fftw_plan_many_dft(1, &len, static_cast<int>(count), buf, nullptr,
                                        static_cast<int>(stride), static_cast<int>(dist), buf,
                                        nullptr, static_cast<int>(stride), static_cast<int>(dist),
                                        sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw Error(ErrorKind::invalid_argument, "FFTW could not create a plan");
    return plan;
}

}  // namespace

FftBatch::FftBatch(std::size_t n, std::size_t count, std::size_t stride, std::size_t dist)
    : n_(n) {
    forward_plan_ = make_plan(n, count, stride, dist, FFTW_FORWARD);
    backward_plan_ = make_plan(n, count, stride, dist, FFTW_BACKWARD);
}

FftBatch::~FftBatch() { release(); }

FftBatch::FftBatch(FftBatch &&other) noexcept
    : n_(other.n_),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      backward_plan_(std::exchange(other.backward_plan_, nullptr)) {}

FftBatch &FftBatch::operator=(FftBatch &&other) noexcept {
    if (this != &other) {
        release();
        n_ = other.n_;
        forward_plan_ = std::exchange(other.forward_plan_, nullptr);
        backward_plan_ = std::exchange(other.backward_plan_, nullptr);
    }
    return *this;
}

void FftBatch::release() noexcept {
    std::lock_guard lock(planner_mutex());
    if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (backward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
    forward_plan_ = backward_plan_ = nullptr;
}

void FftBatch::forward(std::complex<double> *data) const {
    auto *buf = reinterpret_cast<fftw_complex *>(data);
    fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), buf, buf);
}

void FftBatch::backward(std::complex<double> *data) const {
    auto *buf = reinterpret_cast<fftw_complex *>(data);
    fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), buf, buf);
}

}  // namespace qlbeam
