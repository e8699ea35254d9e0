#include "trifpp/exact_laws.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace trifpp {

namespace {

BigInt factorial(int m) {
  BigInt f = 1;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

// h(k) from its asymptotic series; relative error below 1e-26 for k >= 2^16.
double h_asymptotic(double k) {
  double inv = 1.0 / k;
  double s = 1.0 - inv / 8.0 + inv * inv / 128.0 + 5.0 * inv * inv * inv / 1024.0 -
             21.0 * inv * inv * inv * inv / 32768.0;
  return s / std::sqrt(std::numbers::pi * k);
}

}  // namespace

BigInt double_factorial(int m) {
  if (m < -1) throw std::invalid_argument("double_factorial: argument below -1");
  BigInt f = 1;
  for (int i = m; i > 1; i -= 2) f *= i;
  return f;
}

TriCount count_tri(int n, int p) {
  if (n < 0 || p < 1) throw std::invalid_argument("count_tri: need n >= 0 and p >= 1");
  TriCount out{n, p, 0};
  if (n == 0 && p == 1) return out;
  // 4^(n-1) is moved to the denominator as 4 when n = 0.
  BigInt num = BigInt(p) * factorial(2 * p) * double_factorial(2 * p + 3 * n - 5);
  BigInt den = factorial(p) * factorial(p) * factorial(n) * double_factorial(2 * p + n - 1);
  if (n >= 1) {
    num <<= 2 * (n - 1);
  } else {
    den *= 4;
  }
  BigInt rem = num % den;
  if (rem != 0) throw std::logic_error("count_tri: non-integral count");
  out.value = num / den;
  return out;
}

double ZExact::value() const {
  return static_cast<double>(a) + static_cast<double>(b) / kSqrt3;
}

ZExact z_exact(int p) {
  if (p < 1) throw std::invalid_argument("z_exact: p must be positive");
  ZExact z;
  if (p == 1) {
    // (2 - sqrt3) / 4 = 1/2 - (3/4) / sqrt3
    z.a = BigRational(1, 2);
    z.b = BigRational(-3, 4);
    return z;
  }
  BigInt six_p = 1;
  for (int i = 0; i < p; ++i) six_p *= 6;
  z.a = 0;
  z.b = BigRational(six_p * double_factorial(2 * p - 5), 8 * factorial(p));
  return z;
}

double z_scaled(std::int64_t p) {
  if (p < 1) throw std::invalid_argument("z_scaled: p must be positive");
  return LawTables::instance().z_scaled(p);
}

double log_z(std::int64_t p) {
  return std::log(z_scaled(p)) + static_cast<double>(p) * std::log(kAlpha);
}

double z_boltzmann(int p) {
  if (p < 1) throw std::invalid_argument("z_boltzmann: p must be positive");
  if (p <= 250) return z_scaled(p) * std::pow(kAlpha, p);
  return std::exp(log_z(p));
}

double z_generating_series(double z) {
  if (!(std::abs(z) < 1.0 / 12.0)) {
    throw std::domain_error("z_generating_series: |z| must be below 1/12");
  }
  if (z == 0.0) return (2.0 - kSqrt3) / 4.0;
  double t = std::expm1(1.5 * std::log1p(-12.0 * z));
  return 0.5 + t / (24.0 * kSqrt3 * z);
}

double h_stationary(std::int64_t k) {
  if (k < 0) throw std::invalid_argument("h_stationary: k must be non-negative");
  return LawTables::instance().h(k);
}

double log_c(std::int64_t p) {
  if (p < 1) throw std::invalid_argument("log_c: p must be positive");
  double dp = static_cast<double>(p);
  return (dp - 2.0) * std::log(3.0) + std::log(dp) + dp * std::log(4.0) +
         std::log(h_stationary(p)) - std::log(4.0 * std::sqrt(2.0 * std::numbers::pi));
}

double theta_pmf(std::int64_t k) {
  if (k < 0) return 0.0;
  return LawTables::instance().theta(k);
}

double theta_pmf_by_ratio(std::int64_t k) {
  if (k < 0) return 0.0;
  double t = 0.75;
  for (std::int64_t i = 0; i < k; ++i) {
    t *= static_cast<double>(2 * i + 1) / static_cast<double>(2 * (i + 3));
  }
  return t;
}

double theta_survival(std::int64_t k) {
  if (k <= 0) return 1.0;
  return LawTables::instance().theta_tail(k);
}

double theta_sizebiased_survival(std::int64_t k) {
  if (k <= 1) return 1.0;
  double dk = static_cast<double>(k);
  return h_stationary(k) * (3.0 * dk + 1.0) / (dk + 1.0);
}

double g_theta_iter(int r, double x) {
  if (!(x >= 0.0 && x < 1.0)) throw std::domain_error("g_theta_iter: x must lie in [0,1)");
  if (r < 0) throw std::invalid_argument("g_theta_iter: r must be non-negative");
  if (r == 0) return x;
  double s = r + 1.0 / std::sqrt(1.0 - x);
  return 1.0 - 1.0 / (s * s);
}

double g_theta(double x) { return g_theta_iter(1, x); }

double prob_one_survivor(std::int64_t p, int r) {
  if (p < 1 || r < 1) throw std::invalid_argument("prob_one_survivor: need p, r >= 1");
  double a = 1.0 / (r + 1.0);
  return static_cast<double>(p) * a * a * a *
         std::exp(static_cast<double>(p - 1) * std::log1p(-a * a));
}

double perimeter_pmf(int r, std::int64_t p) {
  return 2.0 * h_stationary(p) * prob_one_survivor(p, r);
}

std::vector<double> convolve_truncated(const std::vector<double>& a, const std::vector<double>& b,
                                       int m_max) {
  std::vector<double> c(m_max + 1, 0.0);
  int na = std::min<int>(a.size(), m_max + 1);
  for (int i = 0; i < na; ++i) {
    if (a[i] == 0.0) continue;
    int nb = std::min<int>(b.size(), m_max + 1 - i);
    for (int j = 0; j < nb; ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

GwTable gw_generation_pmf(int p_start, int r, int m_max, std::size_t budget_bytes) {
  if (p_start < 1 || r < 1 || m_max < 0) {
    throw std::invalid_argument("gw_generation_pmf: need p_start, r >= 1 and m_max >= 0");
  }
  if (static_cast<std::size_t>(m_max + 1) * sizeof(double) * 4 > budget_bytes) {
    throw std::length_error("gw_generation_pmf: table exceeds memory budget");
  }
  const LawTables& t = LawTables::instance();
  std::vector<double> a(m_max + 1);
  for (int m = 0; m <= m_max; ++m) a[m] = t.theta(m);
  double err = 0.0;
  for (int level = 2; level <= r; ++level) {
    std::vector<double> next(m_max + 1, 0.0);
    std::vector<double> pw(m_max + 1, 0.0);
    pw[0] = 1.0;
    double cert = 0.0;
    for (std::int64_t j = 0;; ++j) {
      double tj = t.theta(j);
      for (int m = 0; m <= m_max; ++m) next[m] += tj * pw[m];
      double mass = 0.0;
      for (double v : pw) mass += v;
      // a^{*j} restricted to [0, m_max] has non-increasing mass in j
      cert = t.theta_tail(j + 1) * mass;
      if (cert < 1e-17 || mass < 1e-300) break;
      pw = convolve_truncated(pw, a, m_max);
    }
    err += cert;
    a = std::move(next);
  }
  std::vector<double> out = a;
  for (int i = 1; i < p_start; ++i) out = convolve_truncated(out, a, m_max);
  GwTable g;
  g.pmf = std::move(out);
  g.truncation_bound = p_start * err;
  double s = 0.0;
  for (double v : g.pmf) s += v;
  g.beyond_mass = 1.0 - s;
  return g;
}

const LawTables& LawTables::instance() {
  static const LawTables tables;
  return tables;
}

LawTables::LawTables() {
  const std::int64_t n = kHead + 3;
  h_.resize(n);
  h_[0] = 1.0;
  for (std::int64_t k = 0; k + 1 < n; ++k) {
    h_[k + 1] = h_[k] * static_cast<double>(2 * k + 1) / static_cast<double>(2 * k + 2);
  }
  // Z(p) 12^-p through the ratio Z(p+1)/Z(p) = 6(2p-3)/(p+1), p >= 2.
  zs_.assign(n, 0.0);
  zs_[1] = (2.0 - kSqrt3) / 4.0 / kAlpha;
  zs_[2] = (3.0 * kSqrt3 / 4.0) / (kAlpha * kAlpha);
  for (std::int64_t p = 2; p + 1 < n; ++p) {
    zs_[p + 1] = zs_[p] * 6.0 * static_cast<double>(2 * p - 3) /
                 (static_cast<double>(p + 1) * kAlpha);
  }
  theta_.resize(kHead + 1);
  survival_.resize(kHead + 2);
  sb_survival_.resize(kHead + 2);
  for (std::int64_t k = 0; k <= kHead; ++k) {
    // theta(k) = (12 sqrt3)^-1 12^(1-k) Z(k+2) = 144 z_scaled(k+2) / sqrt3
    theta_[k] = 144.0 * zs_[k + 2] / kSqrt3;
  }
  for (std::int64_t k = 0; k <= kHead + 1; ++k) {
    double dk = static_cast<double>(k);
    survival_[k] = h_[k] / (dk + 1.0);
    sb_survival_[k] = k == 0 ? 1.0 : h_[k] * (3.0 * dk + 1.0) / (dk + 1.0);
  }
}

double LawTables::h(std::int64_t k) const {
  if (k < static_cast<std::int64_t>(h_.size())) return h_[k];
  return h_asymptotic(static_cast<double>(k));
}

double LawTables::theta(std::int64_t k) const {
  if (k < 0) return 0.0;
  if (k <= kHead) return theta_[k];
  double dk = static_cast<double>(k);
  return 1.5 * h(k) / ((dk + 1.0) * (dk + 2.0));
}

double LawTables::theta_tail(std::int64_t k) const {
  if (k <= 0) return 1.0;
  if (k <= kHead + 1) return survival_[k];
  return h(k) / (static_cast<double>(k) + 1.0);
}

double LawTables::z_scaled(std::int64_t p) const {
  if (p < static_cast<std::int64_t>(zs_.size())) return zs_[p];
  double dp = static_cast<double>(p);
  return kSqrt3 * h(p - 2) / (96.0 * dp * (dp - 1.0));
}

std::vector<double> LawTables::theta_convolution(int q, int m_max) const {
  std::vector<double> a(m_max + 1);
  for (int m = 0; m <= m_max; ++m) a[m] = theta(m);
  std::vector<double> out(m_max + 1, 0.0);
  out[0] = 1.0;
  for (int i = 0; i < q; ++i) out = convolve_truncated(out, a, m_max);
  return out;
}

}  // namespace trifpp
