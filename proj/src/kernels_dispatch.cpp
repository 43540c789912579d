#include "isowalk/kernels.hpp"

#include <stdexcept>

namespace isowalk::kernels {

bool cpu_supports_avx2() {
#if defined(ISOWALK_HAVE_AVX2_BUILD) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

namespace {
Backend pick_default() { return cpu_supports_avx2() ? Backend::Avx2 : Backend::Scalar; }
Backend g_backend = pick_default();
}  // namespace

Backend active_backend() { return g_backend; }

std::string backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

void force_backend(Backend b) {
  if (b == Backend::Avx2 && !cpu_supports_avx2())
    throw std::runtime_error("avx2 backend not available on this cpu/build");
  g_backend = b;
}

void reset_backend() { g_backend = pick_default(); }

void wrap01_add(double* xs, std::size_t n, double t) {
#if defined(ISOWALK_HAVE_AVX2_BUILD)
  if (g_backend == Backend::Avx2) return detail::wrap01_add_avx2(xs, n, t);
#endif
  detail::wrap01_add_scalar(xs, n, t);
}

double circle_min_dist(const double* xs, std::size_t n, double q) {
#if defined(ISOWALK_HAVE_AVX2_BUILD)
  if (g_backend == Backend::Avx2) return detail::circle_min_dist_avx2(xs, n, q);
#endif
  return detail::circle_min_dist_scalar(xs, n, q);
}

void rotate3(double* x, double* y, double* z, std::size_t n, const double r[9]) {
#if defined(ISOWALK_HAVE_AVX2_BUILD)
  if (g_backend == Backend::Avx2) return detail::rotate3_avx2(x, y, z, n, r);
#endif
  detail::rotate3_scalar(x, y, z, n, r);
}

double dot3_max(const double* x, const double* y, const double* z, std::size_t n,
                double ax, double ay, double az) {
  if (n == 0) throw std::invalid_argument("dot3_max: empty input");
#if defined(ISOWALK_HAVE_AVX2_BUILD)
  if (g_backend == Backend::Avx2) return detail::dot3_max_avx2(x, y, z, n, ax, ay, az);
#endif
  return detail::dot3_max_scalar(x, y, z, n, ax, ay, az);
}

std::size_t count_dot3_ge(const double* x, const double* y, const double* z, std::size_t n,
                          double ax, double ay, double az, double c) {
#if defined(ISOWALK_HAVE_AVX2_BUILD)
  if (g_backend == Backend::Avx2) return detail::count_dot3_ge_avx2(x, y, z, n, ax, ay, az, c);
#endif
  return detail::count_dot3_ge_scalar(x, y, z, n, ax, ay, az, c);
}

}  // namespace isowalk::kernels
