#include "gridrisk/mvn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/erf.hpp>

#include "gridrisk/errors.hpp"
#include "gridrisk/rng.hpp"

namespace gridrisk {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double inverse_erf(double x) {
  if (!(x > -1.0 && x < 1.0)) throw DomainError("inverse_erf argument must lie in (-1, 1)");
  return boost::math::erf_inv(x);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal quantile requires p in (0, 1)");
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

namespace {

// Gauss–Legendre pairs used by the bivariate algorithm (Drezner–Wesolowsky
// integrand; Genz's hybrid with the high-correlation expansion).
constexpr double kW6[3] = {0.1713244923791704, 0.3607615730481386, 0.4679139345726910};
constexpr double kX6[3] = {0.9324695142031521, 0.6612093864662645, 0.2386191860831969};
constexpr double kW12[6] = {0.04717533638651183, 0.1069393259953184, 0.1600783285433462,
                            0.2031674267230659,  0.2334925365383548, 0.2491470458134028};
constexpr double kX12[6] = {0.9815606342467192, 0.9041172563704749, 0.7699026741943047,
                            0.5873179542866175, 0.3678314989981802, 0.1252334085114689};
constexpr double kW20[10] = {0.01761400713915212, 0.04060142980038694, 0.06267204833410907,
                             0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
                             0.1316886384491766,  0.1420961093183820,  0.1491729864726037,
                             0.1527533871307258};
constexpr double kX20[10] = {0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
                             0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
                             0.5108670019508271, 0.3737060887154195, 0.2277858511416451,
                             0.07652652113349734};

constexpr double kTwoPi = 6.283185307179586476925286766559;

// P(X > dh, Y > dk) for standard bivariate normal with correlation r.
double bvn_upper(double dh, double dk, double r) {
  const double* w;
  const double* x;
  int lg;
  const double ar = std::abs(r);
  if (ar < 0.3) {
    lg = 3;
    w = kW6;
    x = kX6;
  } else if (ar < 0.75) {
    lg = 6;
    w = kW12;
    x = kX12;
  } else {
    lg = 10;
    w = kW20;
    x = kX20;
  }

  double h = dh, k = dk;
  double hk = h * k;
  double bvn = 0.0;
  if (ar < 0.925) {
    if (ar > 0.0) {
      const double hs = (h * h + k * k) / 2.0;
      const double asr = std::asin(r);
      for (int i = 0; i < lg; ++i) {
        for (int is = -1; is <= 1; is += 2) {
          const double sn = std::sin(asr * (is * x[i] + 1.0) / 2.0);
          bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
        }
      }
      bvn *= asr / (2.0 * kTwoPi);
    }
    bvn += normal_cdf(-h) * normal_cdf(-k);
  } else {
    if (r < 0.0) {
      k = -k;
      hk = -hk;
    }
    if (ar < 1.0) {
      const double as = (1.0 - r) * (1.0 + r);
      double a = std::sqrt(as);
      const double bs = (h - k) * (h - k);
      const double c = (4.0 - hk) / 8.0;
      const double d = (12.0 - hk) / 16.0;
      double asr = -(bs / as + hk) / 2.0;
      if (asr > -100.0) {
        bvn = a * std::exp(asr) *
              (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
      }
      if (-hk < 100.0) {
        const double b = std::sqrt(bs);
        bvn -= std::exp(-hk / 2.0) * std::sqrt(kTwoPi) * normal_cdf(-b / a) * b *
               (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
      }
      a /= 2.0;
      for (int i = 0; i < lg; ++i) {
        for (int is = -1; is <= 1; is += 2) {
          const double xs = a * (is * x[i] + 1.0) * a * (is * x[i] + 1.0);
          const double rs = std::sqrt(1.0 - xs);
          asr = -(bs / xs + hk) / 2.0;
          if (asr > -100.0) {
            bvn += a * w[i] * std::exp(asr) *
                   (std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs -
                    (1.0 + c * xs * (1.0 + d * xs)));
          }
        }
      }
      bvn = -bvn / kTwoPi;
    }
    if (r > 0.0) {
      bvn += normal_cdf(-std::max(h, k));
    } else {
      bvn = -bvn;
      if (k > h) bvn += normal_cdf(k) - normal_cdf(h);
    }
  }
  return std::max(0.0, std::min(1.0, bvn));
}

}  // namespace

double bivariate_normal_cdf(double h, double k, double rho) {
  if (std::abs(rho) > 1.0) throw DomainError("correlation outside [-1, 1]");
  if (rho >= 1.0 - 1e-15) return normal_cdf(std::min(h, k));
  if (rho <= -1.0 + 1e-15) return std::max(0.0, normal_cdf(h) + normal_cdf(k) - 1.0);
  return bvn_upper(-h, -k, rho);
}

namespace {

// Cholesky with variables sorted by ascending upper limit (Genz's
// reordering); tiny diagonal entries are floored rather than failed so
// near-singular (comonotone-limit) matrices remain evaluable.
struct CholPlan {
  int k;
  std::vector<double> lower;  // row-major k*k
  std::vector<double> b;      // reordered limits
};

CholPlan make_plan(const std::vector<double>& b, const std::vector<double>& corr) {
  const int k = static_cast<int>(b.size());
  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int c) { return b[static_cast<std::size_t>(a)] < b[static_cast<std::size_t>(c)]; });

  CholPlan plan;
  plan.k = k;
  plan.b.resize(static_cast<std::size_t>(k));
  std::vector<double> a(static_cast<std::size_t>(k * k));
  for (int i = 0; i < k; ++i) {
    plan.b[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    for (int j = 0; j < k; ++j) {
      a[static_cast<std::size_t>(i * k + j)] =
          corr[static_cast<std::size_t>(order[static_cast<std::size_t>(i)] * k +
                                        order[static_cast<std::size_t>(j)])];
    }
  }

  plan.lower.assign(static_cast<std::size_t>(k * k), 0.0);
  for (int j = 0; j < k; ++j) {
    double diag = a[static_cast<std::size_t>(j * k + j)];
    for (int m = 0; m < j; ++m) diag -= plan.lower[static_cast<std::size_t>(j * k + m)] * plan.lower[static_cast<std::size_t>(j * k + m)];
    if (diag < 1e-28) diag = 1e-28;
    const double ljj = std::sqrt(diag);
    plan.lower[static_cast<std::size_t>(j * k + j)] = ljj;
    for (int i = j + 1; i < k; ++i) {
      double s = a[static_cast<std::size_t>(i * k + j)];
      for (int m = 0; m < j; ++m) {
        s -= plan.lower[static_cast<std::size_t>(i * k + m)] * plan.lower[static_cast<std::size_t>(j * k + m)];
      }
      plan.lower[static_cast<std::size_t>(i * k + j)] = s / ljj;
    }
  }
  return plan;
}

// Genz separation-of-variables integrand over the unit cube, with the last
// two variables closed in one exact bivariate evaluation:
//   e_1 = Phi(b_1/l_11);  y_{i-1} = Phi^-1(w_{i-1} e_{i-1});
//   e_i = Phi((b_i - sum_j l_ij y_j)/l_ii);
//   f = e_1 ... e_{k-2} * Phi2(c_{k-1}, c_k; rho_cond).
// Closing the tail pair drops the integration dimension to k-2 and removes
// most of the variance.
double transformed_integrand(const CholPlan& plan, const double* w) {
  const int k = plan.k;
  double e = normal_cdf(plan.b[0] / plan.lower[0]);
  double f = e;
  double y[8];
  for (int i = 1; i < k - 2; ++i) {
    const double u = std::min(std::max(w[i - 1] * e, 1e-300), 1.0 - 1e-16);
    y[i - 1] = normal_quantile(u);
    double num = plan.b[static_cast<std::size_t>(i)];
    for (int j = 0; j < i; ++j) num -= plan.lower[static_cast<std::size_t>(i * k + j)] * y[j];
    e = normal_cdf(num / plan.lower[static_cast<std::size_t>(i * k + i)]);
    f *= e;
  }
  {
    const int i = k - 2;
    const double u = std::min(std::max(w[i - 1] * e, 1e-300), 1.0 - 1e-16);
    y[i - 1] = normal_quantile(u);
  }
  const int p = k - 2, q = k - 1;
  double cp = plan.b[static_cast<std::size_t>(p)];
  double cq = plan.b[static_cast<std::size_t>(q)];
  for (int j = 0; j < k - 2; ++j) {
    cp -= plan.lower[static_cast<std::size_t>(p * k + j)] * y[j];
    cq -= plan.lower[static_cast<std::size_t>(q * k + j)] * y[j];
  }
  const double lqq = plan.lower[static_cast<std::size_t>(q * k + q)];
  const double lqp = plan.lower[static_cast<std::size_t>(q * k + p)];
  const double sq = std::sqrt(lqp * lqp + lqq * lqq);
  const double clamp = 38.0;
  const double h = std::min(std::max(cp / plan.lower[static_cast<std::size_t>(p * k + p)], -clamp), clamp);
  const double g = std::min(std::max(cq / sq, -clamp), clamp);
  double rho = lqp / sq;
  rho = std::min(std::max(rho, -1.0), 1.0);
  return f * bivariate_normal_cdf(h, g, rho);
}

constexpr double kRichtmyer[4] = {
    1.4142135623730951,  // sqrt 2
    1.7320508075688772,  // sqrt 3
    2.2360679774997896,  // sqrt 5
    2.6457513110645907,  // sqrt 7
};

}  // namespace

MvnResult mvn_cdf(const std::vector<double>& b, const std::vector<double>& corr,
                  double abs_tol) {
  const int k = static_cast<int>(b.size());
  if (k < 1 || k > 5) throw DomainError("mvn_cdf supports 1 <= k <= 5");
  if (corr.size() != static_cast<std::size_t>(k) * static_cast<std::size_t>(k)) {
    throw DomainError("correlation matrix size mismatch");
  }

  MvnResult res;
  if (k == 1) {
    res.value = normal_cdf(b[0]);
    res.abs_error_estimate = 1e-15;
    return res;
  }
  if (k == 2) {
    res.value = bivariate_normal_cdf(b[0], b[1], corr[1]);
    res.abs_error_estimate = 1e-14;
    res.tolerance_met = res.abs_error_estimate <= abs_tol;
    res.points_used = 20;
    return res;
  }

  const CholPlan plan = make_plan(b, corr);
  const int dim = k - 2;  // the tail pair is closed analytically
  constexpr int kShifts = 12;

  // Fixed shift set: evaluation is a deterministic function of (b, corr).
  double shifts[kShifts][4];
  {
    std::uint64_t s = 0x5bd1e995u ^ (static_cast<std::uint64_t>(k) << 32);
    for (auto& row : shifts) {
      for (int d = 0; d < 4; ++d) row[d] = static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53;
    }
  }

  std::uint64_t n = dim == 1 ? (1u << 7) : (1u << 10);
  constexpr std::uint64_t kMaxPointsPerShift = 1u << 19;
  for (;;) {
    double est[kShifts];
    for (int s = 0; s < kShifts; ++s) {
      double acc = 0.0;
      for (std::uint64_t j = 1; j <= n; ++j) {
        double w[4];
        for (int d = 0; d < dim; ++d) {
          const double v = std::fmod(static_cast<double>(j) * kRichtmyer[d] + shifts[s][d], 1.0);
          w[d] = std::abs(2.0 * v - 1.0);  // baker's transform
        }
        acc += transformed_integrand(plan, w);
      }
      est[s] = acc / static_cast<double>(n);
    }
    double mean = 0.0;
    for (double e : est) mean += e;
    mean /= kShifts;
    double var = 0.0;
    for (double e : est) var += (e - mean) * (e - mean);
    var /= (kShifts - 1);
    const double err = 3.0 * std::sqrt(var / kShifts);

    res.value = std::min(1.0, std::max(0.0, mean));
    res.abs_error_estimate = err;
    res.points_used = n * kShifts;
    if (err <= abs_tol || n >= kMaxPointsPerShift) {
      res.tolerance_met = err <= abs_tol;
      return res;
    }
    n *= 4;
  }
}

}  // namespace gridrisk
