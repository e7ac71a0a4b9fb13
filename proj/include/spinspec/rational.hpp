#pragma once

// Exact rational scalar layer. GMP supplies the integer/rational arithmetic;
// everything downstream (kernel polynomials, Sturm chains, certificates)
// works in these types and never touches floating point.

#include <gmpxx.h>
#include <cstdint>
#include <cmath>
#include <string>
#include <stdexcept>

namespace spinspec {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline Rat rat_pow(const Rat& x, long e) {
  if (e < 0) {
    if (x == 0) throw std::domain_error("rat_pow: 0^negative");
    return 1 / rat_pow(x, -e);
  }
  Rat r = 1, b = x;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

// Rising factorial (x)_k = x (x+1) ... (x+k-1).
inline Rat pochhammer(const Rat& x, long k) {
  Rat r = 1;
  for (long i = 0; i < k; ++i) r *= x + i;
  return r;
}

inline Rat factorial_rat(long n) {
  Rat r = 1;
  for (long i = 2; i <= n; ++i) r *= i;
  return r;
}

inline double to_double(const Rat& x) { return x.get_d(); }

inline std::string rat_str(const Rat& x) { return x.get_str(); }

inline Rat rat_parse(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  r.canonicalize();
  return r;
}

// Exact conversion: every finite double is a dyadic rational.
inline Rat rat_from_double_exact(double x) {
  if (!std::isfinite(x)) throw std::domain_error("rat_from_double_exact: non-finite");
  Rat r;
  mpq_set_d(r.get_mpq_t(), x);
  return r;
}

// Continued-fraction rounding: best rational approximation of x with
// denominator <= bound. Deterministic; returns x itself when x is already
// representable within the bound.
inline Rat rationalize(double x, const Int& denominator_bound) {
  Rat target = rat_from_double_exact(x);
  if (target.get_den() <= denominator_bound) return target;
  // Stern-Brocot style convergents of the continued fraction of |x|.
  bool neg = target < 0;
  Rat t = neg ? Rat(-target) : target;
  Int p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Rat frac = t;
  while (true) {
    Int a = frac.get_num() / frac.get_den();  // floor (frac >= 0)
    Int p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > denominator_bound) {
      // Best semiconvergent with denominator within bound.
      Int k = (denominator_bound - q0) / q1;
      Int ps = k * p1 + p0, qs = k * q1 + q0;
      Rat conv(p1, q1);
      conv.canonicalize();
      if (qs > 0 && k * 2 >= a) {
        Rat semi(ps, qs);
        semi.canonicalize();
        if (abs(semi - t) < abs(conv - t)) conv = semi;
      }
      return neg ? Rat(-conv) : conv;
    }
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    Rat rem = frac - Rat(a);
    if (rem == 0) {
      Rat conv(p1, q1);
      conv.canonicalize();
      return neg ? Rat(-conv) : conv;
    }
    frac = 1 / rem;
  }
}

inline int sign(const Rat& x) { return sgn(x); }
inline int sign(const Int& x) { return sgn(x); }

}  // namespace spinspec
