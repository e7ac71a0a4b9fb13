#pragma once

// Adaptive Gauss-Kronrod panels plus fixed Gauss-Legendre rules for smooth
// piecewise integrands.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace spinspec {

struct QuadratureError : std::runtime_error {
  double achieved;
  QuadratureError(const std::string& what, double got)
      : std::runtime_error(what), achieved(got) {}
};

namespace quad_detail {

// 15-point Kronrod nodes/weights on [-1,1] with the embedded 7-point Gauss rule.
inline const double kKronrodX[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
inline const double kKronrodW[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
inline const double kGaussW[7] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                                  0.417959183673469, 0.381830050505119, 0.279705391489277,
                                  0.129484966168870};

}  // namespace quad_detail

// One GK15 evaluation: returns the Kronrod value and an error estimate.
inline std::pair<double, double> gk15(const std::function<double(double)>& f, double a,
                                      double b) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double kron = 0, gauss = 0;
  for (int i = 0; i < 15; ++i) {
    double v = f(mid + half * quad_detail::kKronrodX[i]);
    kron += quad_detail::kKronrodW[i] * v;
    if (i % 2 == 1) gauss += quad_detail::kGaussW[i / 2] * v;
  }
  kron *= half;
  gauss *= half;
  double err = std::pow(200.0 * std::abs(kron - gauss), 1.5);
  return {kron, std::max(err, 1e-300)};
}

// Adaptive bisection to an absolute tolerance; throws QuadratureError with
// the achieved estimate when the panel budget runs out.
inline double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                 double abs_tol, int max_panels = 200000) {
  struct Panel {
    double a, b, val, err;
  };
  auto [v0, e0] = gk15(f, a, b);
  std::vector<Panel> heap = {{a, b, v0, e0}};
  double total_err = e0;
  int used = 1;
  while (total_err > abs_tol) {
    if (used >= max_panels) {
      double val = 0;
      for (auto& p : heap) val += p.val;
      throw QuadratureError("integrate_adaptive: tolerance not reached", val);
    }
    // split the worst panel
    size_t worst = 0;
    for (size_t i = 1; i < heap.size(); ++i)
      if (heap[i].err > heap[worst].err) worst = i;
    Panel p = heap[worst];
    double mid = 0.5 * (p.a + p.b);
    auto [v1, e1] = gk15(f, p.a, mid);
    auto [v2, e2] = gk15(f, mid, p.b);
    total_err += e1 + e2 - p.err;
    heap[worst] = {p.a, mid, v1, e1};
    heap.push_back({mid, p.b, v2, e2});
    ++used;
  }
  double val = 0;
  for (auto& p : heap) val += p.val;
  return val;
}

// Fixed 20-point Gauss-Legendre on [a,b]; exact through degree 39.
inline double gauss20(const std::function<double(double)>& f, double a, double b) {
  static const double X[10] = {0.076526521133497, 0.227785851141645, 0.373706088715420,
                               0.510867001950827, 0.636053680726515, 0.746331906460151,
                               0.839116971822219, 0.912234428251326, 0.963971927277914,
                               0.993128599185095};
  static const double W[10] = {0.152753387130726, 0.149172986472604, 0.142096109318382,
                               0.131688638449177, 0.118194531961518, 0.101930119817240,
                               0.083276741576705, 0.062672048334109, 0.040601429800387,
                               0.017614007139152};
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0;
  for (int i = 0; i < 10; ++i)
    acc += W[i] * (f(mid + half * X[i]) + f(mid - half * X[i]));
  return acc * half;
}

}  // namespace spinspec
