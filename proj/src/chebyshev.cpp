#include "qprecon/chebyshev.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "qprecon/kernels.hpp"

namespace qprecon {

namespace {
// fftw planning is not thread-safe; execution is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

std::vector<double> cheb_coeffs_from_gauss(const std::vector<double>& values) {
  const int M = static_cast<int>(values.size());
  if (M == 0) return {};
  std::vector<double> in(values), out(static_cast<size_t>(M));
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan = fftw_plan_r2r_1d(M, in.data(), out.data(), FFTW_REDFT10, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
  // REDFT10: Y_k = 2 sum_j x_j cos(pi k (j + 1/2) / M)
  for (int k = 0; k < M; ++k) out[static_cast<size_t>(k)] /= M;
  out[0] *= 0.5;
  return out;
}

double ChebSeries::operator()(double x) const { return cheb_eval(coeffs, x); }

ChebSeries chebyshev_coeffs(const ScalarFn& g, int d) {
  if (d < 0) throw Error(ErrorKind::InvalidArgument, "degree must be nonnegative");
  const long M = 4L * (d + 1);
  RVector x = chebyshev_gauss_points(M);
  std::vector<double> v(static_cast<size_t>(M));
  for (long j = 0; j < M; ++j) v[static_cast<size_t>(j)] = g(x(j));
  std::vector<double> c = cheb_coeffs_from_gauss(v);
  c.resize(static_cast<size_t>(d) + 1);
  ChebSeries s;
  s.coeffs = std::move(c);
  s.degree = d;
  return s;
}

double chebyshev_truncation_bound(int r, double deriv_sup, int d) {
  double fact = 1.0;
  for (int i = 2; i <= r + 1; ++i) fact *= i;
  return 32.0 * std::pow(8.0, r) * fact * deriv_sup / std::pow(static_cast<double>(d), r);
}

double gevrey_degree(double C, double R, double sigma, double eps) {
  if (!(C > 0 && R > 0 && sigma > 0 && eps > 0))
    throw Error(ErrorKind::InvalidArgument, "gevrey_degree needs positive inputs");
  return std::ceil(8.0 * std::numbers::e * R * std::pow(std::log(32.0 * C * R / eps) + 2.0, sigma + 1.0));
}

std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int m) {
  const int n = static_cast<int>(xs.size()) - 1;
  std::vector<std::vector<double>> c(static_cast<size_t>(n + 1), std::vector<double>(static_cast<size_t>(m + 1), 0.0));
  double c1 = 1.0, c4 = xs[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[static_cast<size_t>(i)] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[static_cast<size_t>(i)] - xs[static_cast<size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[static_cast<size_t>(i)][static_cast<size_t>(k)] =
              c1 * (k * c[static_cast<size_t>(i - 1)][static_cast<size_t>(k - 1)] -
                    c5 * c[static_cast<size_t>(i - 1)][static_cast<size_t>(k)]) / c2;
        c[static_cast<size_t>(i)][0] = -c1 * c5 * c[static_cast<size_t>(i - 1)][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[static_cast<size_t>(j)][static_cast<size_t>(k)] =
            (c4 * c[static_cast<size_t>(j)][static_cast<size_t>(k)] - k * c[static_cast<size_t>(j)][static_cast<size_t>(k - 1)]) / c3;
      c[static_cast<size_t>(j)][0] = c4 * c[static_cast<size_t>(j)][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<size_t>(n + 1));
  for (int i = 0; i <= n; ++i) w[static_cast<size_t>(i)] = c[static_cast<size_t>(i)][static_cast<size_t>(m)];
  return w;
}

double fd_derivative(const ScalarFn& g, double y, int k, double h, int order) {
  if (k == 0) return g(y);
  const int half = (k + 1) / 2 - 1 + order / 2;
  std::vector<double> xs;
  for (int i = -half; i <= half; ++i) xs.push_back(y + i * h);
  const std::vector<double> w = fd_weights(y, xs, k);
  double s = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) s += w[i] * g(xs[i]);
  return s;
}

}  // namespace qprecon
