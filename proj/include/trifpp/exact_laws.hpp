#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <vector>

namespace trifpp {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Critical weight 12*sqrt(3) of type I triangulations and the perimeter growth rate 12.
inline constexpr double kSqrt3 = 1.7320508075688772935;
inline constexpr double kRho = 12.0 * kSqrt3;
inline constexpr double kAlpha = 12.0;

struct TriCount {
  int n = 0;
  int p = 1;
  BigInt value;
};

// m!! with the convention (-1)!! = 1.
BigInt double_factorial(int m);

// Number of type I triangulations of the p-gon with n inner vertices.
TriCount count_tri(int n, int p);

// Z(p) = a + b / sqrt(3) with rational a, b.
struct ZExact {
  BigRational a;
  BigRational b;
  double value() const;
};

ZExact z_exact(int p);
double z_boltzmann(int p);
// Z(p) * 12^-p, finite for every p.
double z_scaled(std::int64_t p);
double log_z(std::int64_t p);
double z_generating_series(double z);

// h(k) = 4^-k binom(2k, k).
double h_stationary(std::int64_t k);
// C(p) = 3^(p-2) p (2p)! / (4 sqrt(2 pi) (p!)^2), on log scale.
double log_c(std::int64_t p);

double theta_pmf(std::int64_t k);
double theta_pmf_by_ratio(std::int64_t k);
// P(theta >= k) = h(k) / (k + 1).
double theta_survival(std::int64_t k);
// P(theta_bar >= k) = h(k) (3k + 1) / (k + 1) for k >= 1, where theta_bar(k) = k theta(k).
double theta_sizebiased_survival(std::int64_t k);

double g_theta(double x);
double g_theta_iter(int r, double x);

// P_p(Y_r = 1) = p (r+1)^-3 (1 - (r+1)^-2)^(p-1).
double prob_one_survivor(std::int64_t p, int r);
// P(L_r = p) for the hull perimeter of the UIPT.
double perimeter_pmf(int r, std::int64_t p);

struct GwTable {
  std::vector<double> pmf;      // P(Y = m) for m = 0..m_max, each a lower bound
  double truncation_bound = 0;  // mass possibly missing from pmf entries
  double beyond_mass = 0;       // 1 - sum(pmf)
};

// Law of the generation-r size of a theta-GW forest started from p_start individuals.
GwTable gw_generation_pmf(int p_start, int r, int m_max, std::size_t budget_bytes = 64u << 20);

// Truncated convolution of two sequences on {0..m_max}.
std::vector<double> convolve_truncated(const std::vector<double>& a, const std::vector<double>& b,
                                       int m_max);

// Immutable tables shared by samplers.
class LawTables {
 public:
  static const LawTables& instance();

  static constexpr std::int64_t kHead = 1 << 16;

  double theta(std::int64_t k) const;
  double theta_tail(std::int64_t k) const;  // P(theta >= k)
  double z_scaled(std::int64_t p) const;
  double h(std::int64_t k) const;

  // Q_q(m) = P(sum of q theta draws = m) for m <= m_max.
  std::vector<double> theta_convolution(int q, int m_max) const;

  const std::vector<double>& theta_head() const { return theta_; }
  const std::vector<double>& survival_head() const { return survival_; }
  const std::vector<double>& sizebiased_survival_head() const { return sb_survival_; }

 private:
  LawTables();
  std::vector<double> theta_;
  std::vector<double> survival_;
  std::vector<double> sb_survival_;
  std::vector<double> h_;
  std::vector<double> zs_;
};

}  // namespace trifpp
