#include "isowalk/kernels.hpp"

#if defined(ISOWALK_HAVE_AVX2_BUILD)

#include <immintrin.h>

#include <cmath>

namespace isowalk::kernels::detail {

namespace {
const __m256d kSignMask = _mm256_set1_pd(-0.0);

inline double hmin(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  double m = lanes[0];
  for (int i = 1; i < 4; ++i)
    if (lanes[i] < m) m = lanes[i];
  return m;
}

inline double hmax(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  double m = lanes[0];
  for (int i = 1; i < 4; ++i)
    if (lanes[i] > m) m = lanes[i];
  return m;
}
}  // namespace

void wrap01_add_avx2(double* xs, std::size_t n, double t) {
  const __m256d vt = _mm256_set1_pd(t);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(xs + i);
    v = _mm256_add_pd(v, vt);
    __m256d m = _mm256_cmp_pd(v, one, _CMP_GE_OQ);
    v = _mm256_sub_pd(v, _mm256_and_pd(m, one));
    _mm256_storeu_pd(xs + i, v);
  }
  for (; i < n; ++i) {
    double y = xs[i] + t;
    if (y >= 1.0) y -= 1.0;
    xs[i] = y;
  }
}

double circle_min_dist_avx2(const double* xs, std::size_t n, double q) {
  double best = 0.5;
  const __m256d vq = _mm256_set1_pd(q);
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d vbest = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(xs + i);
    __m256d d = _mm256_andnot_pd(kSignMask, _mm256_sub_pd(v, vq));
    d = _mm256_min_pd(d, _mm256_sub_pd(one, d));
    vbest = _mm256_min_pd(vbest, d);
  }
  double lanemin = hmin(vbest);
  if (lanemin < best) best = lanemin;
  for (; i < n; ++i) {
    double d = std::fabs(xs[i] - q);
    double w = 1.0 - d;
    if (w < d) d = w;
    if (d < best) best = d;
  }
  return best;
}

void rotate3_avx2(double* x, double* y, double* z, std::size_t n, const double r[9]) {
  __m256d r0 = _mm256_set1_pd(r[0]), r1 = _mm256_set1_pd(r[1]), r2 = _mm256_set1_pd(r[2]);
  __m256d r3 = _mm256_set1_pd(r[3]), r4 = _mm256_set1_pd(r[4]), r5 = _mm256_set1_pd(r[5]);
  __m256d r6 = _mm256_set1_pd(r[6]), r7 = _mm256_set1_pd(r[7]), r8 = _mm256_set1_pd(r[8]);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d px = _mm256_loadu_pd(x + i);
    __m256d py = _mm256_loadu_pd(y + i);
    __m256d pz = _mm256_loadu_pd(z + i);
    __m256d nx = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(r0, px), _mm256_mul_pd(r1, py)),
                               _mm256_mul_pd(r2, pz));
    __m256d ny = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(r3, px), _mm256_mul_pd(r4, py)),
                               _mm256_mul_pd(r5, pz));
    __m256d nz = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(r6, px), _mm256_mul_pd(r7, py)),
                               _mm256_mul_pd(r8, pz));
    _mm256_storeu_pd(x + i, nx);
    _mm256_storeu_pd(y + i, ny);
    _mm256_storeu_pd(z + i, nz);
  }
  for (; i < n; ++i) {
    double px = x[i], py = y[i], pz = z[i];
    double nx = (r[0] * px + r[1] * py) + r[2] * pz;
    double ny = (r[3] * px + r[4] * py) + r[5] * pz;
    double nz = (r[6] * px + r[7] * py) + r[8] * pz;
    x[i] = nx;
    y[i] = ny;
    z[i] = nz;
  }
}

double dot3_max_avx2(const double* x, const double* y, const double* z, std::size_t n,
                     double ax, double ay, double az) {
  const __m256d vax = _mm256_set1_pd(ax), vay = _mm256_set1_pd(ay), vaz = _mm256_set1_pd(az);
  __m256d vbest = _mm256_set1_pd(-HUGE_VAL);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(x + i), vax),
                      _mm256_mul_pd(_mm256_loadu_pd(y + i), vay)),
        _mm256_mul_pd(_mm256_loadu_pd(z + i), vaz));
    vbest = _mm256_max_pd(vbest, d);
  }
  double best = hmax(vbest);
  for (; i < n; ++i) {
    double d = (x[i] * ax + y[i] * ay) + z[i] * az;
    if (d > best) best = d;
  }
  return best;
}

std::size_t count_dot3_ge_avx2(const double* x, const double* y, const double* z,
                               std::size_t n, double ax, double ay, double az, double c) {
  const __m256d vax = _mm256_set1_pd(ax), vay = _mm256_set1_pd(ay), vaz = _mm256_set1_pd(az);
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t cnt = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(x + i), vax),
                      _mm256_mul_pd(_mm256_loadu_pd(y + i), vay)),
        _mm256_mul_pd(_mm256_loadu_pd(z + i), vaz));
    int mask = _mm256_movemask_pd(_mm256_cmp_pd(d, vc, _CMP_GE_OQ));
    cnt += static_cast<std::size_t>(__builtin_popcount(mask));
  }
  for (; i < n; ++i) {
    double d = (x[i] * ax + y[i] * ay) + z[i] * az;
    if (d >= c) ++cnt;
  }
  return cnt;
}

}  // namespace isowalk::kernels::detail

#endif  // ISOWALK_HAVE_AVX2_BUILD
