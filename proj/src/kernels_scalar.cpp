#include "isowalk/kernels.hpp"

#include <cmath>

namespace isowalk::kernels::detail {

void wrap01_add_scalar(double* xs, std::size_t n, double t) {
  for (std::size_t i = 0; i < n; ++i) {
    double y = xs[i] + t;
    if (y >= 1.0) y -= 1.0;
    xs[i] = y;
  }
}

double circle_min_dist_scalar(const double* xs, std::size_t n, double q) {
  double best = 0.5;
  for (std::size_t i = 0; i < n; ++i) {
    double d = std::fabs(xs[i] - q);
    double w = 1.0 - d;
    if (w < d) d = w;
    if (d < best) best = d;
  }
  return best;
}

void rotate3_scalar(double* x, double* y, double* z, std::size_t n, const double r[9]) {
  for (std::size_t i = 0; i < n; ++i) {
    double px = x[i], py = y[i], pz = z[i];
    double nx = (r[0] * px + r[1] * py) + r[2] * pz;
    double ny = (r[3] * px + r[4] * py) + r[5] * pz;
    double nz = (r[6] * px + r[7] * py) + r[8] * pz;
    x[i] = nx;
    y[i] = ny;
    z[i] = nz;
  }
}

double dot3_max_scalar(const double* x, const double* y, const double* z, std::size_t n,
                       double ax, double ay, double az) {
  double best = (x[0] * ax + y[0] * ay) + z[0] * az;
  for (std::size_t i = 1; i < n; ++i) {
    double d = (x[i] * ax + y[i] * ay) + z[i] * az;
    if (d > best) best = d;
  }
  return best;
}

std::size_t count_dot3_ge_scalar(const double* x, const double* y, const double* z,
                                 std::size_t n, double ax, double ay, double az, double c) {
  std::size_t cnt = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = (x[i] * ax + y[i] * ay) + z[i] * az;
    if (d >= c) ++cnt;
  }
  return cnt;
}

}  // namespace isowalk::kernels::detail
