#pragma once

#include <complex>
#include <cstddef>

namespace qlbeam {

/// Batch of equal-length in-place complex FFTs over a strided layout: element k
/// of transform b lives at data[b * dist + k * stride]. Transforms are
/// unnormalized (backward(forward(v)) == n * v).
class FftBatch {
  public:
    FftBatch(std::size_t n, std::size_t count, std::size_t stride, std::size_t dist);
    ~FftBatch();
    FftBatch(const FftBatch &) = delete;
    FftBatch &operator=(const FftBatch &) = delete;
    FftBatch(FftBatch &&other) noexcept;
    FftBatch &operator=(FftBatch &&other) noexcept;

    void forward(std::complex<double> *data) const;
    void backward(std::complex<double> *data) const;

    std::size_t length() const noexcept { return n_; }

  private:
    void release() noexcept;

    std::size_t n_ = 0;
    void *forward_plan_ = nullptr;
    void *backward_plan_ = nullptr;
};

}  // namespace qlbeam
