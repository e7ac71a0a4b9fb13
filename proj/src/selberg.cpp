#include <spinspec/selberg.hpp>
#include <spinspec/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace spinspec {

namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double sinhc(double x) {
  if (std::abs(x) < 1e-4) {
    double x2 = x * x;
    return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sinh(x) / x;
}

// t * coth(pi t), smooth through t = 0 and overflow-safe at large t.
double t_coth_pi_t(double t) {
  double x = M_PI * t;
  if (std::abs(x) < 1e-4) return (1.0 + x * x / 3.0 - x * x * x * x / 45.0) / M_PI;
  if (std::abs(x) > 19.0) return t * (1.0 + 2.0 * std::exp(-2.0 * std::abs(x)));
  return t * std::cosh(x) / std::sinh(x);
}

double kernel_times_t(Weight w, double t) {
  return w == Weight::Scalar ? t * std::tanh(M_PI * t) : t_coth_pi_t(t);
}

}  // namespace

double h_hat(const TestFamily& fam, int a, double lambda) {
  double d = fam.delta();
  double u = lambda - 0.25;
  if (u >= 0) {
    double t = std::sqrt(u);
    return std::cos(a * d * t) * std::pow(sinc(d * t), fam.m);
  }
  double s = std::sqrt(-u);
  return std::cosh(a * d * s) * std::pow(sinhc(d * s), fam.m);
}

double cardinal_bspline(int k, double u) {
  if (u <= 0 || u >= k) return 0;
  // N_k(u) = 1/(k-1)! sum_i (-1)^i C(k,i) (u-i)_+^{k-1}
  double acc = 0, binom = 1, fact = 1;
  for (int i = 2; i < k; ++i) fact *= i;
  for (int i = 0; i <= k; ++i) {
    if (u - i <= 0) break;
    acc += (i % 2 ? -1.0 : 1.0) * binom * std::pow(u - i, k - 1);
    binom = binom * (k - i) / (i + 1);
  }
  return acc / fact;
}

double pair_function_value(const TestFamily& fam, int a, int b, double x) {
  double d = fam.delta();
  auto hh = [&](double t) { return cardinal_bspline(2 * fam.m, t / (2 * d) + fam.m) / (2 * d); };
  return 0.25 * (hh(x + (a + b) * d) + hh(x + (a - b) * d) + hh(x - (a - b) * d) +
                 hh(x - (a + b) * d));
}

namespace {

// J(c) = Int_0^inf t K(t) cos(c delta t) sinc(delta t)^{2m} dt, integrated
// over the oscillation panels between consecutive zeros of sin(delta t).
double identity_J(const TestFamily& fam, Weight w, int c, double tol) {
  double d = fam.delta();
  auto f = [&](double t) {
    return kernel_times_t(w, t) * std::cos(c * d * t) * std::pow(sinc(d * t), 2 * fam.m);
  };
  double panel = M_PI / d;
  double acc = 0;
  int quiet = 0;
  for (int k = 0; k < 100000; ++k) {
    double a = k * panel, b = (k + 1) * panel;
    double v = integrate_adaptive(f, a, b, tol / 8);
    acc += v;
    // analytic tail bound: |integrand| <= K_inf t (delta t)^{-2m}
    double kinf = (w == Weight::Scalar) ? 1.0 : 1.0 / std::tanh(M_PI * b);
    double tail = kinf * std::pow(d, -2.0 * fam.m) * std::pow(b, 2.0 - 2.0 * fam.m) /
                  (2.0 * fam.m - 2.0);
    if (tail < tol / 4) return acc;
    quiet = std::abs(v) < tol / 16 ? quiet + 1 : 0;
    if (quiet >= 4) return acc;
  }
  throw QuadratureError("identity_J: panel sum did not settle", acc);
}

struct JKey {
  int m, n, c, weight;
  double L;
  bool operator<(const JKey& o) const {
    return std::tie(m, n, c, weight, L) < std::tie(o.m, o.n, o.c, o.weight, o.L);
  }
};

double identity_J_cached(const TestFamily& fam, Weight w, int c, double tol) {
  static std::map<JKey, double> cache;
  static std::mutex mu;
  JKey key{fam.m, fam.n, c, w == Weight::Scalar ? 0 : 1, fam.L};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  double v = identity_J(fam, w, c, tol);
  std::lock_guard<std::mutex> lock(mu);
  cache[key] = v;
  return v;
}

}  // namespace

double identity_term(const TestFamily& fam, int a, int b, Weight w, double volume,
                     const SelbergOptions& opt) {
  if (fam.m < 1) throw std::invalid_argument("identity_term: need m >= 1 for decay");
  return volume / (4 * M_PI) *
         (identity_J_cached(fam, w, a + b, opt.quad_tol) +
          identity_J_cached(fam, w, std::abs(a - b), opt.quad_tol));
}

double elliptic_term(const TestFamily& fam, int a, int b, const EllipticClassData& ec, Weight w,
                     const SelbergOptions& opt) {
  if (!(ec.theta > 0 && ec.theta < M_PI))
    throw std::domain_error("elliptic_term: theta outside (0, pi)");
  double d = fam.delta();
  double cos2t = std::cos(2 * ec.theta);
  double support = (2.0 * fam.m + a + b) * d;
  auto integrand = [&](double u) {
    double H = pair_function_value(fam, a, b, u);
    if (w == Weight::Scalar) return H * std::cosh(u / 2) / (std::cosh(u) - cos2t);
    return H / (std::cosh(u) - cos2t);
  };
  // integrate knot interval by knot interval; knots sit on the delta grid
  double acc = 0;
  long kmax = std::lround(support / d);
  for (long k = -kmax; k < kmax; ++k) acc += gauss20(integrand, k * d, (k + 1) * d);
  // Real part of the printed class term: scalar 1/(2M) Int H cosh(u/2)/(...),
  // spinor (tr/2)/(2M) Int H/(...), times the convention's class count.
  double factor;
  if (w == Weight::Scalar) {
    factor = opt.elliptic_scalar_count / (2.0 * ec.order);
  } else {
    double half_trace = ec.chi * std::abs(std::cos(ec.theta));
    factor = opt.elliptic_spinor_count * half_trace / (2.0 * ec.order);
  }
  return factor * acc;
}

GramMatrix gram_matrix(const GeodesicSpectrum& spectrum, const TestFamily& fam, Weight w,
                       const SelbergOptions& opt) {
  if (spectrum.cutoff < fam.L - 1e-12)
    throw CompletenessError("gram_matrix: spectrum cutoff " + std::to_string(spectrum.cutoff) +
                            " is below the family support " + std::to_string(fam.L));
  const int n = fam.n;
  GramMatrix out;
  out.weight = w;
  {
    std::ostringstream os;
    os << spectrum.surface_id << "/" << spectrum.spin_label << " L=" << spectrum.cutoff
       << " family(m=" << fam.m << ",n=" << fam.n << ",L=" << fam.L << ")";
    out.provenance = os.str();
  }
  // Surface volume from the identity: not stored in the spectrum; recompute
  // from the surface id.
  double volume = surface_by_id(spectrum.surface_id).signature.volume();

  out.A.resize(n, n);
  for (int a = 1; a <= n; ++a) {
    for (int b = a; b <= n; ++b) {
      double v = identity_term(fam, a, b, w, volume, opt);
      for (const auto& c : spectrum.classes) {
        double H = pair_function_value(fam, a, b, c.length);
        if (H == 0) continue;
        double term = c.primitive_length / (2 * std::sinh(c.length / 2)) * H;
        if (w == Weight::Spinor) term *= c.chi;
        v += term;
      }
      for (const auto& e : spectrum.elliptic) v += elliptic_term(fam, a, b, e, w, opt);
      out.A(a - 1, b - 1) = v;
      out.A(b - 1, a - 1) = v;
    }
  }
  return out;
}

namespace {

// The Gram matrix is positive semidefinite in exact arithmetic but can pick
// up rounding eigenvalues of either sign; factor with an escalating relative
// jitter until the decomposition succeeds.
Eigen::LDLT<Eigen::MatrixXd> factor_with_jitter(const Eigen::MatrixXd& A) {
  double scale = A.trace() / A.rows();
  for (double jit : {0.0, 1e-14, 1e-12, 1e-10}) {
    Eigen::MatrixXd J = A;
    if (jit > 0) J.diagonal().array() += jit * scale;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(J);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) return ldlt;
  }
  throw ConditioningError("gram factorization failed; reduce n or increase L");
}

}  // namespace

double exclusion_value(const GramMatrix& gram, const TestFamily& fam, double lambda) {
  const int n = (int)gram.A.rows();
  Eigen::LDLT<Eigen::MatrixXd> ldlt = factor_with_jitter(gram.A);
  Eigen::VectorXd c(n);
  for (int a = 1; a <= n; ++a) c(a - 1) = h_hat(fam, a, lambda);
  double quad = c.dot(ldlt.solve(c));
  if (!(quad > 0)) throw ConditioningError("exclusion_value: quadratic form not positive");
  return 1.0 / quad;
}

ExclusionCurve scan(const GramMatrix& gram, const TestFamily& fam, double lo, double hi,
                    double step, int level) {
  if (step <= 0) throw std::invalid_argument("scan: grid step must be positive");
  ExclusionCurve curve;
  curve.level = level;
  Eigen::LDLT<Eigen::MatrixXd> ldlt = factor_with_jitter(gram.A);
  const int n = (int)gram.A.rows();
  std::vector<double> grid;
  for (double l = lo; l <= hi + 1e-12; l += step) grid.push_back(l);
  if (lo <= 0.25 && 0.25 <= hi &&
      std::none_of(grid.begin(), grid.end(), [](double l) { return l == 0.25; })) {
    grid.push_back(0.25);
    std::sort(grid.begin(), grid.end());
  }
  Eigen::VectorXd c(n);
  for (double l : grid) {
    for (int a = 1; a <= n; ++a) c(a - 1) = h_hat(fam, a, l);
    double quad = c.dot(ldlt.solve(c));
    curve.lambda.push_back(l);
    curve.value.push_back(quad > 0 ? 1.0 / quad : std::numeric_limits<double>::infinity());
  }
  // maximal runs with I >= level
  size_t i = 0;
  while (i < curve.value.size()) {
    if (curve.value[i] >= level) {
      size_t j = i;
      while (j + 1 < curve.value.size() && curve.value[j + 1] >= level) ++j;
      curve.intervals.push_back({curve.lambda[i], curve.lambda[j]});
      i = j + 1;
    } else {
      ++i;
    }
  }
  return curve;
}

std::pair<double, double> first_interval_above(const ExclusionCurve& curve, double min_lo) {
  for (const auto& iv : curve.intervals)
    if (iv.first > min_lo) return iv;
  return {0, 0};
}

std::pair<double, double> find_first_interval(const GramMatrix& gram, const TestFamily& fam,
                                              int level, double lo, double hi,
                                              double coarse_step) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt = factor_with_jitter(gram.A);
  const int n = (int)gram.A.rows();
  Eigen::VectorXd c(n);
  auto I = [&](double l) {
    for (int a = 1; a <= n; ++a) c(a - 1) = h_hat(fam, a, l);
    double quad = c.dot(ldlt.solve(c));
    return quad > 0 ? 1.0 / quad : std::numeric_limits<double>::infinity();
  };
  auto zoom_peak = [&](double a, double b) {
    // iterative grid zoom toward the local maximum of I on [a,b]
    for (int round = 0; round < 18 && b - a > 1e-11; ++round) {
      double best = a, bestv = -1;
      for (int k = 0; k <= 24; ++k) {
        double x = a + (b - a) * k / 24.0;
        double v = I(x);
        if (v > bestv) {
          bestv = v;
          best = x;
        }
      }
      double w = (b - a) / 24.0 * 2.5;
      a = std::max(a, best - w);
      b = std::min(b, best + w);
    }
    return 0.5 * (a + b);
  };
  auto crossing = [&](double inside, double outside) {
    // bisect the I = level crossing between a point with I >= level and one below
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (inside + outside);
      if (I(mid) >= level)
        inside = mid;
      else
        outside = mid;
    }
    return inside;
  };

  std::vector<double> grid, val;
  for (double l = lo; l <= hi + 1e-12; l += coarse_step) {
    grid.push_back(l);
    val.push_back(I(l));
  }
  for (size_t k = 0; k + 1 < grid.size(); ++k) {
    bool candidate = val[k] >= level;
    double peak = grid[k];
    if (!candidate && k > 0 && val[k] > val[k - 1] && val[k] >= val[k + 1] &&
        val[k] > 0.02 * level) {
      peak = zoom_peak(grid[k - 1], grid[k + 1]);
      candidate = I(peak) >= level;
    }
    if (!candidate) continue;
    // expand to the level crossings on both sides
    double left_out = peak, right_out = peak;
    while (I(left_out) >= level && left_out > lo) left_out -= coarse_step;
    while (I(right_out) >= level && right_out < hi) right_out += coarse_step;
    double a = crossing(peak, left_out);
    double b = crossing(peak, right_out);
    if (a > lo) return {a, b};
  }
  return {0, 0};
}

}  // namespace spinspec
