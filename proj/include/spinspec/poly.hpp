#pragma once

// Dense polynomials in the Laplace eigenvalue over exact rationals, plus the
// Sturm-chain machinery used to certify polynomial nonnegativity on a ray.

#include <spinspec/rational.hpp>
#include <vector>
#include <string>

namespace spinspec {

struct RationalPoly {
  // coeff[i] multiplies lambda^i; trailing zeros are trimmed away.
  std::vector<Rat> coeff;

  RationalPoly() = default;
  explicit RationalPoly(Rat constant) {
    if (constant != 0) coeff.push_back(std::move(constant));
  }
  static RationalPoly variable();          // lambda
  static RationalPoly constant(Rat c) { return RationalPoly(std::move(c)); }

  bool is_zero() const { return coeff.empty(); }
  long degree() const { return static_cast<long>(coeff.size()) - 1; }  // -1 for zero poly
  const Rat& leading() const { return coeff.back(); }
  Rat at(long i) const { return (i >= 0 && i < (long)coeff.size()) ? coeff[i] : Rat(0); }

  void trim();
  Rat eval(const Rat& x) const;
  double eval_double(double x) const;

  RationalPoly derivative() const;
  // p(shift + x) as a polynomial in x.
  RationalPoly shifted(const Rat& shift) const;

  bool operator==(const RationalPoly& o) const { return coeff == o.coeff; }
  std::string str() const;
};

RationalPoly operator+(const RationalPoly& a, const RationalPoly& b);
RationalPoly operator-(const RationalPoly& a, const RationalPoly& b);
RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
RationalPoly operator*(const Rat& s, const RationalPoly& a);

// Outcome of the exact nonnegativity check q(lambda) >= 0 for lambda in
// [ray_start, infinity). The Sturm data doubles as the certificate
// transcript: distinct roots strictly right of the ray start, sign at the
// start, sign of the leading coefficient.
struct RayPositivity {
  bool nonneg = false;
  bool identically_zero = false;
  int sign_at_start = 0;
  int sign_leading = 0;
  long variations_at_start = -1;
  long variations_at_inf = -1;
  long roots_on_ray = -1;  // distinct roots in (ray_start, inf)
  std::string reason;
};

// Exact check that q >= 0 on [ray_start, inf). Sound: accepts only genuinely
// nonnegative polynomials. Mildly conservative: a polynomial with an interior
// root of even multiplicity (touching zero) is rejected.
RayPositivity check_nonneg_on_ray(const RationalPoly& q, const Rat& ray_start);

// Number of distinct real roots of q in the open interval (0, inf),
// via a signed primitive pseudo-remainder (Sturm) chain over the integers.
// Also reports the sign-variation counts at 0+ and +inf.
long count_roots_positive_axis(const RationalPoly& q, long* var_at_zero = nullptr,
                               long* var_at_inf = nullptr);

}  // namespace spinspec
