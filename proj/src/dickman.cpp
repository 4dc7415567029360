#include <cmath>
#include <vector>

#include <gmpxx.h>

#include "artin/error.hpp"
#include "artin/series.hpp"

namespace artin {

namespace {

// rho integrated one unit interval at a time. On [k, k+1] write
// rho(u) = sum_i a_i z^i with z = k + 1 - u. Substituting into
// u rho'(u) = -rho(u - 1), whose delayed argument has the same z on
// [k-1, k] with coefficients b_i, gives
//   a_{m+1} = (b_m + m a_m) / ((k + 1)(m + 1)),
// independent of a_0, and continuity at u = k fixes a_0 = b_0 - sum_{i>=1} a_i.
// Every a_i with i >= 1 is positive, so the double-precision Horner sum keeps
// full relative accuracy. The subtraction for a_0 cancels roughly log2(u log u)
// bits per interval, which the working precision absorbs.
class DickmanSeries {
 public:
  static constexpr int kMax = 20;
  static constexpr int kTerms = 640;
  static constexpr mp_bitcnt_t kBits = 704;

  DickmanSeries() : coeffs_(kMax) {
    std::vector<mpf_class> prev(kTerms, mpf_class(0, kBits));
    prev[0] = 1;  // rho = 1 on [0, 1]
    std::vector<mpf_class> cur(kTerms, mpf_class(0, kBits));
    for (int k = 1; k < kMax; ++k) {
      mpf_class tail(0, kBits);
      for (int m = 0; m + 1 < kTerms; ++m) {
        cur[m + 1] = (prev[m] + m * cur[m]) / ((k + 1) * (m + 1));
        tail += cur[m + 1];
      }
      cur[0] = prev[0] - tail;

      auto& out = coeffs_[k];
      const double a0 = cur[0].get_d();
      for (int i = 0; i < kTerms; ++i) {
        const double a = cur[i].get_d();
        if (i > 0 && a < a0 * 1e-20) break;
        out.push_back(a);
      }
      prev.swap(cur);
    }
  }

  double at(double alpha) const {
    if (alpha <= 1.0) return 1.0;
    int k = static_cast<int>(alpha);
    if (k >= kMax) k = kMax - 1;  // alpha = 20 is z = 0 on [19, 20]
    const double z = (k + 1) - alpha;
    const auto& a = coeffs_[k];
    double r = 0.0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) r = r * z + *it;
    return r;
  }

 private:
  std::vector<std::vector<double>> coeffs_;  // [k] for u in [k, k+1]
};

}  // namespace

double dickman_rho(double alpha) {
  if (!(alpha >= 0.0)) fail(ErrorCode::InvalidArgument, "dickman_rho needs alpha >= 0");
  if (alpha > DickmanSeries::kMax) fail(ErrorCode::InvalidArgument, "dickman_rho supports alpha <= 20");
  static const DickmanSeries series;
  return series.at(alpha);
}

}  // namespace artin
