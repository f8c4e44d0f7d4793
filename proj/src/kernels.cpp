#include "onsager/kernels.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace onsager::kernels {
namespace {

constexpr int kBlocks = 64;

inline int wrap_add(int i, int s, int n) {
  int r = (i + s) % n;
  return r < 0 ? r + n : r;
}

double sup_increment_serial(const Vec3View& u, Dims d, std::array<int, 3> s) {
  double best = 0.0;
  for (int k = 0; k < d.n3; ++k) {
    const int k2 = static_cast<int>(wrap_add(k, s[2], d.n3));
    for (int j = 0; j < d.n2; ++j) {
      const int j2 = static_cast<int>(wrap_add(j, s[1], d.n2));
      const std::size_t row = static_cast<std::size_t>(d.n1) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(d.n2) * k);
      const std::size_t row2 = static_cast<std::size_t>(d.n1) * (static_cast<std::size_t>(j2) + static_cast<std::size_t>(d.n2) * k2);
      for (int i = 0; i < d.n1; ++i) {
        const int i2 = static_cast<int>(wrap_add(i, s[0], d.n1));
        double acc = 0.0;
        for (int c = 0; c < 3; ++c) {
          const double diff = u[static_cast<std::size_t>(c)][row2 + i2] - u[static_cast<std::size_t>(c)][row + i];
          acc += diff * diff;
        }
        best = std::max(best, acc);
      }
    }
  }
  return std::sqrt(best);
}

// Row-segmented variant: each x-row splits into two contiguous runs so the
// inner loops carry no modulo arithmetic and vectorize.
double sup_increment_rows(const Vec3View& u, Dims d, std::array<int, 3> s, int k_begin, int k_end) {
  const int sx = ((s[0] % d.n1) + d.n1) % d.n1;
  double best = 0.0;
  for (int k = k_begin; k < k_end; ++k) {
    const int k2 = static_cast<int>(wrap_add(k, s[2], d.n3));
    for (int j = 0; j < d.n2; ++j) {
      const int j2 = static_cast<int>(wrap_add(j, s[1], d.n2));
      const std::size_t row = static_cast<std::size_t>(d.n1) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(d.n2) * k);
      const std::size_t row2 = static_cast<std::size_t>(d.n1) * (static_cast<std::size_t>(j2) + static_cast<std::size_t>(d.n2) * k2);
      const double* a0 = u[0].data() + row;
      const double* a1 = u[1].data() + row;
      const double* a2 = u[2].data() + row;
      const double* b0 = u[0].data() + row2;
      const double* b1 = u[1].data() + row2;
      const double* b2 = u[2].data() + row2;
      const int run = d.n1 - sx;
      for (int i = 0; i < run; ++i) {
        const double x = b0[i + sx] - a0[i], y = b1[i + sx] - a1[i], z = b2[i + sx] - a2[i];
        best = std::max(best, x * x + y * y + z * z);
      }
      for (int i = run; i < d.n1; ++i) {
        const double x = b0[i - run] - a0[i], y = b1[i - run] - a1[i], z = b2[i - run] - a2[i];
        best = std::max(best, x * x + y * y + z * z);
      }
    }
  }
  return best;
}

inline double plane_weight(std::span<const double> w, std::size_t n, std::size_t plane) {
  return w.empty() ? 1.0 : w[n / plane];
}

double contract_range(const SymTensor& t, const Gradient& g, std::span<const double> w, std::size_t plane,
                      std::size_t begin, std::size_t end) {
  double s = 0.0;
  for (std::size_t n = begin; n < end; ++n) {
    const double v = t[0][n] * g[0][n] + t[1][n] * g[4][n] + t[2][n] * g[8][n] + t[3][n] * (g[1][n] + g[3][n]) +
                     t[4][n] * (g[2][n] + g[6][n]) + t[5][n] * (g[5][n] + g[7][n]);
    s += plane_weight(w, n, plane) * v;
  }
  return s;
}

double contract_outer_range(const Vec3View& a, const Gradient& g, std::span<const double> w, std::size_t plane,
                            std::size_t begin, std::size_t end) {
  double s = 0.0;
  for (std::size_t n = begin; n < end; ++n) {
    const double x = a[0][n], y = a[1][n], z = a[2][n];
    const double v = x * (x * g[0][n] + y * g[1][n] + z * g[2][n]) + y * (x * g[3][n] + y * g[4][n] + z * g[5][n]) +
                     z * (x * g[6][n] + y * g[7][n] + z * g[8][n]);
    s += plane_weight(w, n, plane) * v;
  }
  return s;
}

template <class F>
double blocked_sum(std::size_t total, F&& range_sum) {
  std::array<double, kBlocks> partial{};
#pragma omp parallel for schedule(static)
  for (int b = 0; b < kBlocks; ++b) {
    const std::size_t begin = total * static_cast<std::size_t>(b) / kBlocks;
    const std::size_t end = total * static_cast<std::size_t>(b + 1) / kBlocks;
    partial[static_cast<std::size_t>(b)] = range_sum(begin, end);
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

}  // namespace

Vec3View view(const GridField& f) { return {f.component(0), f.component(1), f.component(2)}; }

double sup_increment(const Vec3View& u, Dims dims, std::array<int, 3> shift, Backend backend) {
  if (backend == Backend::kSerial) return sup_increment_serial(u, dims, shift);
  double best = 0.0;
#pragma omp parallel for schedule(static) reduction(max : best)
  for (int k = 0; k < dims.n3; ++k) best = std::max(best, sup_increment_rows(u, dims, shift, k, k + 1));
  return std::sqrt(best);
}

std::vector<double> sup_increments(const Vec3View& u, Dims dims, const std::vector<std::array<int, 3>>& shifts,
                                   Backend backend) {
  std::vector<double> out(shifts.size());
  if (backend == Backend::kSerial) {
    for (std::size_t s = 0; s < shifts.size(); ++s) out[s] = sup_increment_serial(u, dims, shifts[s]);
    return out;
  }
  const long count = static_cast<long>(shifts.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long s = 0; s < count; ++s) {
    out[static_cast<std::size_t>(s)] = std::sqrt(sup_increment_rows(u, dims, shifts[static_cast<std::size_t>(s)], 0, dims.n3));
  }
  return out;
}

double contract(const SymTensor& t, const Gradient& g, Dims dims, std::span<const double> plane_weights,
                Backend backend) {
  const std::size_t total = dims.total();
  const std::size_t plane = static_cast<std::size_t>(dims.n1) * static_cast<std::size_t>(dims.n2);
  if (backend == Backend::kSerial) {
    double s = 0.0;
    for (std::size_t n = 0; n < total; ++n) {
      double v = 0.0;
      for (std::size_t p = 0; p < 6; ++p) {
        const int i = kSymPairs[p][0];
        const int j = kSymPairs[p][1];
        v += t[p][n] * (i == j ? g[static_cast<std::size_t>(3 * i + j)][n]
                               : g[static_cast<std::size_t>(3 * i + j)][n] + g[static_cast<std::size_t>(3 * j + i)][n]);
      }
      s += plane_weight(plane_weights, n, plane) * v;
    }
    return s;
  }
  return blocked_sum(total, [&](std::size_t b, std::size_t e) { return contract_range(t, g, plane_weights, plane, b, e); });
}

double contract_outer(const Vec3View& a, const Gradient& g, Dims dims, std::span<const double> plane_weights,
                      Backend backend) {
  const std::size_t total = dims.total();
  const std::size_t plane = static_cast<std::size_t>(dims.n1) * static_cast<std::size_t>(dims.n2);
  if (backend == Backend::kSerial) {
    double s = 0.0;
    for (std::size_t n = 0; n < total; ++n) {
      double v = 0.0;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          v += a[static_cast<std::size_t>(i)][n] * a[static_cast<std::size_t>(j)][n] * g[static_cast<std::size_t>(3 * i + j)][n];
        }
      }
      s += plane_weight(plane_weights, n, plane) * v;
    }
    return s;
  }
  return blocked_sum(total,
                     [&](std::size_t b, std::size_t e) { return contract_outer_range(a, g, plane_weights, plane, b, e); });
}

void accumulate_outer(double w, const Vec3View& delta, SymTensor& out, Backend backend) {
  const long total = static_cast<long>(delta[0].size());
  if (backend == Backend::kSerial) {
    for (long n = 0; n < total; ++n) {
      for (std::size_t p = 0; p < 6; ++p) {
        out[p][static_cast<std::size_t>(n)] += w * delta[static_cast<std::size_t>(kSymPairs[p][0])][static_cast<std::size_t>(n)] *
                                               delta[static_cast<std::size_t>(kSymPairs[p][1])][static_cast<std::size_t>(n)];
      }
    }
    return;
  }
  const double* x = delta[0].data();
  const double* y = delta[1].data();
  const double* z = delta[2].data();
  double* t0 = out[0].data();
  double* t1 = out[1].data();
  double* t2 = out[2].data();
  double* t3 = out[3].data();
  double* t4 = out[4].data();
  double* t5 = out[5].data();
#pragma omp parallel for schedule(static)
  for (long n = 0; n < total; ++n) {
    const double wx = w * x[n], wy = w * y[n];
    t0[n] += wx * x[n];
    t1[n] += wy * y[n];
    t2[n] += w * z[n] * z[n];
    t3[n] += wx * y[n];
    t4[n] += wx * z[n];
    t5[n] += wy * z[n];
  }
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace onsager::kernels
