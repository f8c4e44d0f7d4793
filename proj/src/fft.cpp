#include "onsager/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace onsager::fft {
namespace {

enum class Kind { kR2C3, kC2R3, kR2C2, kC2R2 };

using PlanKey = std::tuple<Kind, int, int, int>;

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(Kind kind, int a, int b, int c) {
    std::lock_guard lock(mutex_);
    const PlanKey key{kind, a, b, c};
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    fftw_plan plan = make(kind, a, b, c);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  // FFTW_ESTIMATE never touches the arrays, so scratch buffers suffice.
  static fftw_plan make(Kind kind, int n1, int n2, int n3) {
    constexpr unsigned kFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    switch (kind) {
      case Kind::kR2C3: {
        std::vector<double> r(static_cast<std::size_t>(n1) * n2 * n3);
        std::vector<fftw_complex> z(static_cast<std::size_t>(n1 / 2 + 1) * n2 * n3);
        return fftw_plan_dft_r2c_3d(n3, n2, n1, r.data(), z.data(), kFlags);
      }
      case Kind::kC2R3: {
        std::vector<double> r(static_cast<std::size_t>(n1) * n2 * n3);
        std::vector<fftw_complex> z(static_cast<std::size_t>(n1 / 2 + 1) * n2 * n3);
        return fftw_plan_dft_c2r_3d(n3, n2, n1, z.data(), r.data(), kFlags);
      }
      case Kind::kR2C2:
      case Kind::kC2R2: {
        const int planes = n3;
        const int shape[2] = {n2, n1};
        const int rdist = n1 * n2;
        const int cdist = (n1 / 2 + 1) * n2;
        std::vector<double> r(static_cast<std::size_t>(rdist) * planes);
        std::vector<fftw_complex> z(static_cast<std::size_t>(cdist) * planes);
        if (kind == Kind::kR2C2) {
          return fftw_plan_many_dft_r2c(2, shape, planes, r.data(), nullptr, 1, rdist, z.data(), nullptr, 1,
                                        cdist, kFlags);
        }
        return fftw_plan_many_dft_c2r(2, shape, planes, z.data(), nullptr, 1, cdist, r.data(), nullptr, 1,
                                      rdist, kFlags);
      }
    }
    return nullptr;
  }

  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

// c2r transforms overwrite their input; keep a per-thread copy.
std::vector<Complex>& scratch() {
  thread_local std::vector<Complex> buffer;
  return buffer;
}

}  // namespace

std::size_t half_size(Dims dims) {
  return static_cast<std::size_t>(dims.n1 / 2 + 1) * static_cast<std::size_t>(dims.n2) *
         static_cast<std::size_t>(dims.n3);
}

void forward3(Dims dims, std::span<const double> in, std::span<Complex> out) {
  fftw_plan plan = cache().get(Kind::kR2C3, dims.n1, dims.n2, dims.n3);
  fftw_execute_dft_r2c(plan, const_cast<double*>(in.data()), as_fftw(out.data()));
}

void inverse3(Dims dims, std::span<const Complex> in, std::span<double> out) {
  fftw_plan plan = cache().get(Kind::kC2R3, dims.n1, dims.n2, dims.n3);
  auto& buf = scratch();
  buf.assign(in.begin(), in.end());
  fftw_execute_dft_c2r(plan, as_fftw(buf.data()), out.data());
}

void forward2_planes(int n1, int n2, int planes, std::span<const double> in, std::span<Complex> out) {
  fftw_plan plan = cache().get(Kind::kR2C2, n1, n2, planes);
  fftw_execute_dft_r2c(plan, const_cast<double*>(in.data()), as_fftw(out.data()));
}

void inverse2_planes(int n1, int n2, int planes, std::span<const Complex> in, std::span<double> out) {
  fftw_plan plan = cache().get(Kind::kC2R2, n1, n2, planes);
  auto& buf = scratch();
  buf.assign(in.begin(), in.end());
  fftw_execute_dft_c2r(plan, as_fftw(buf.data()), out.data());
}

}  // namespace onsager::fft
