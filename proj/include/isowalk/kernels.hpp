#pragma once

#include <cstddef>
#include <string>

// Data-parallel inner loops with a scalar reference implementation and an
// AVX2 variant selected at runtime. Both paths perform the same operations in
// the same per-element order (the TUs are built with -ffp-contract=off), so
// results agree bit for bit; the equivalence tests assert exactly that.

namespace isowalk::kernels {

enum class Backend { Scalar, Avx2 };

Backend active_backend();
std::string backend_name(Backend b);
bool cpu_supports_avx2();
// Override the dispatch (tests and the CLI flag). Throws if the requested
// backend is not available on this CPU/build.
void force_backend(Backend b);
void reset_backend();

// xs[i] <- xs[i] + t, wrapped back into [0,1). Requires xs[i], t in [0,1).
void wrap01_add(double* xs, std::size_t n, double t);

// min over i of circle distance between xs[i] and q (circumference 1).
double circle_min_dist(const double* xs, std::size_t n, double q);

// In-place rotation of SoA unit vectors by the row-major 3x3 matrix r.
void rotate3(double* x, double* y, double* z, std::size_t n, const double r[9]);

// max over i of x[i]*ax + y[i]*ay + z[i]*az. n must be positive.
double dot3_max(const double* x, const double* y, const double* z, std::size_t n,
                double ax, double ay, double az);

// count of i with x[i]*ax + y[i]*ay + z[i]*az >= c.
std::size_t count_dot3_ge(const double* x, const double* y, const double* z, std::size_t n,
                          double ax, double ay, double az, double c);

namespace detail {
void wrap01_add_scalar(double* xs, std::size_t n, double t);
double circle_min_dist_scalar(const double* xs, std::size_t n, double q);
void rotate3_scalar(double* x, double* y, double* z, std::size_t n, const double r[9]);
double dot3_max_scalar(const double* x, const double* y, const double* z, std::size_t n,
                       double ax, double ay, double az);
std::size_t count_dot3_ge_scalar(const double* x, const double* y, const double* z,
                                 std::size_t n, double ax, double ay, double az, double c);

#if defined(ISOWALK_HAVE_AVX2_BUILD)
void wrap01_add_avx2(double* xs, std::size_t n, double t);
double circle_min_dist_avx2(const double* xs, std::size_t n, double q);
void rotate3_avx2(double* x, double* y, double* z, std::size_t n, const double r[9]);
double dot3_max_avx2(const double* x, const double* y, const double* z, std::size_t n,
                     double ax, double ay, double az);
std::size_t count_dot3_ge_avx2(const double* x, const double* y, const double* z,
                               std::size_t n, double ax, double ay, double az, double c);
#endif
}  // namespace detail

}  // namespace isowalk::kernels
