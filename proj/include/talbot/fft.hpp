#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include <fftw3.h>

namespace talbot::fft {

using cplx = std::complex<double>;

enum class Direction { forward, backward };

/// Unnormalized out-of-place DFT of length in.size() via a cached FFTW plan.
/// forward:  out_k = sum_j in_j e^{-2 pi i jk/n}
/// backward: out_j = sum_k in_k e^{+2 pi i jk/n}
/// Safe to call concurrently; plans are created under a lock.
void execute(Direction dir, std::span<const cplx> in, std::span<cplx> out);

/// FFTW-aligned buffer with in-place plans, for hot loops.
class AlignedBuffer {
 public:
  explicit AlignedBuffer(std::size_t n);
  ~AlignedBuffer();
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;
  AlignedBuffer(AlignedBuffer&& other) noexcept;
  AlignedBuffer& operator=(AlignedBuffer&& other) noexcept;

  std::size_t size() const { return n_; }
  cplx* data() { return reinterpret_cast<cplx*>(data_); }
  const cplx* data() const { return reinterpret_cast<const cplx*>(data_); }
  std::span<cplx> span() { return {data(), n_}; }
  cplx& operator[](std::size_t i) { return data()[i]; }

  void forward_inplace();
  void backward_inplace();

 private:
  void release() noexcept;

  std::size_t n_ = 0;
  fftw_complex* data_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

}  // namespace talbot::fft
