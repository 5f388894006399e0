#include "talbot/fft.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace talbot::fft {
namespace {

// FFTW's planner is not thread safe; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan cached_plan(std::size_t n, Direction dir) {
  static std::map<std::pair<std::size_t, int>, fftw_plan> cache;
  const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
  std::lock_guard lock(planner_mutex());
  auto it = cache.find({n, sign});
  if (it != cache.end()) return it->second;

  auto* a = fftw_alloc_complex(n);
  auto* b = fftw_alloc_complex(n);
  fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), a, b, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(a);
  fftw_free(b);
  if (p == nullptr) throw std::runtime_error("fft: FFTW failed to create a plan");
  cache.emplace(std::make_pair(n, sign), p);
  return p;
}

}  // namespace

void execute(Direction dir, std::span<const cplx> in, std::span<cplx> out) {
  if (in.size() != out.size()) throw std::invalid_argument("fft::execute: size mismatch");
  if (in.empty()) return;
  if (in.data() == out.data()) throw std::invalid_argument("fft::execute: in-place call not supported");
  fftw_plan p = cached_plan(in.size(), dir);
  // FFTW never writes to the input of an out-of-place complex DFT.
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

AlignedBuffer::AlignedBuffer(std::size_t n) : n_(n) {
  data_ = fftw_alloc_complex(n);
  if (data_ == nullptr) throw std::bad_alloc();
  std::lock_guard lock(planner_mutex());
  fwd_ = fftw_plan_dft_1d(static_cast<int>(n), data_, data_, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_1d(static_cast<int>(n), data_, data_, FFTW_BACKWARD, FFTW_ESTIMATE);
  for (std::size_t i = 0; i < n; ++i) data()[i] = cplx{};
}

AlignedBuffer::~AlignedBuffer() { release(); }

AlignedBuffer::AlignedBuffer(AlignedBuffer&& other) noexcept
    : n_(std::exchange(other.n_, 0)),
      data_(std::exchange(other.data_, nullptr)),
      fwd_(std::exchange(other.fwd_, nullptr)),
      bwd_(std::exchange(other.bwd_, nullptr)) {}

AlignedBuffer& AlignedBuffer::operator=(AlignedBuffer&& other) noexcept {
  if (this != &other) {
    release();
    n_ = std::exchange(other.n_, 0);
    data_ = std::exchange(other.data_, nullptr);
    fwd_ = std::exchange(other.fwd_, nullptr);
    bwd_ = std::exchange(other.bwd_, nullptr);
  }
  return *this;
}

void AlignedBuffer::release() noexcept {
  std::lock_guard lock(planner_mutex());
  if (fwd_) fftw_destroy_plan(fwd_);
  if (bwd_) fftw_destroy_plan(bwd_);
  if (data_) fftw_free(data_);
  fwd_ = bwd_ = nullptr;
  data_ = nullptr;
}

void AlignedBuffer::forward_inplace() { fftw_execute(fwd_); }
void AlignedBuffer::backward_inplace() { fftw_execute(bwd_); }

}  // namespace talbot::fft
