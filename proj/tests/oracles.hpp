#pragma once

// Test-only oracles, kept independent of the series-product implementation
// path in src/series.cpp:
//  * a float contour-integration oracle for F_m (trapezoid on a circle),
//  * the closed Pochhammer-sum form of F_m in exact rationals,
//  * a plain floating-point Gauss series evaluator.

#include <spinspec/poly.hpp>
#include <spinspec/series.hpp>
#include <complex>
#include <stdexcept>

namespace spinspec::oracle {

using cd = std::complex<double>;

inline cd hyp2f1_cd(cd a, cd b, cd c, cd z, int cap = 20000) {
  cd sum = 1.0, term = 1.0;
  for (int k = 0; k < cap; ++k) {
    cd num = (a + double(k)) * (b + double(k));
    if (std::abs(num) == 0.0) return sum;
    term *= num * z / ((c + double(k)) * double(k + 1));
    sum += term;
    if (std::abs(term) < 1e-17 * (1.0 + std::abs(sum)) && k > 4) return sum;
  }
  return sum;
}

// F_m via numerical residue extraction on the circle |z| = r0. All
// fractional powers ride on (1-z), so the integrand is single valued.
inline double F_contour(long m, const WeightQuad& w, double lambda, int nodes = 2048,
                        double r0 = 0.45) {
  double n1 = to_double(w.n1), n2 = to_double(w.n2), n3 = to_double(w.n3), n4 = to_double(w.n4);
  double rr = 1.0 - double(m) - n1 - n2;
  double a = rr + (n1 - n2), b = rr - (n3 - n4), c = 2.0 * rr;
  bool spinor = w.spinor_channel();
  double shift = spinor ? (n2 - n1) : 0.0;
  double epref = -(n2 + n3) + (spinor ? (n1 - n2) : 0.0);
  cd Delta = 0.5 + cd(0.0, 1.0) * std::sqrt(cd(lambda - 0.25, 0.0));
  cd acc = 0.0;
  for (int k = 0; k < nodes; ++k) {
    double th = 2.0 * M_PI * (k + 0.5) / nodes;
    cd z = std::polar(r0, th);
    cd G = hyp2f1_cd(a, b, c, z);
    cd pref = std::pow(1.0 - z, cd(epref));
    cd H = hyp2f1_cd(Delta + shift, 1.0 - Delta + shift, 1.0, z / (z - 1.0));
    acc += std::pow(z, -double(m)) * G * pref * H;
  }
  acc /= double(nodes);
  return acc.real();
}

// The closed sum form of F_m (valid for n23+n14 >= 0, which covers all four
// in-scope weight patterns), as an exact rational polynomial in lambda.
inline RationalPoly F_closed_sum(long m, const WeightQuad& w) {
  const Rat n23 = w.n2 - w.n3, n14 = w.n1 - w.n4;
  if (n23 + n14 < 0) throw std::invalid_argument("F_closed_sum: pattern out of scope");
  RationalPoly lambda = RationalPoly::variable();
  RationalPoly total;
  for (long i = 0; i <= m; ++i) {
    RationalPoly prod = RationalPoly::constant(Rat(1));
    for (long l = 0; l < i; ++l) {
      Rat cc = n23 + l;
      prod = prod * (lambda + RationalPoly::constant(cc + cc * cc));
    }
    Rat denom_i = factorial_rat(i) * pochhammer(1 + n14 + n23, i);
    for (long j = 0; i + j <= m; ++j) {
      long k = m - i - j;
      Rat num = pochhammer(1 - m - 2 * w.n1, j) * pochhammer(1 - m - w.n1 - n23 - w.n4, j) *
                pochhammer(2 * w.n2 + i, k);
      Rat den = denom_i * factorial_rat(j) * factorial_rat(k) *
                pochhammer(2 - 2 * m - 2 * w.n1 - 2 * w.n2, j);
      Rat coef = ((i % 2) ? Rat(-1) : Rat(1)) * num / den;
      total = total + coef * prod;
    }
  }
  return total;
}

}  // namespace spinspec::oracle
