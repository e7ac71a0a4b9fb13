#include <doctest.h>
#include <spinspec/poly.hpp>
#include <spinspec/rational.hpp>

using namespace spinspec;

static RationalPoly from_coeffs(std::initializer_list<long> cs) {
  RationalPoly p;
  for (long c : cs) p.coeff.push_back(Rat(c));
  p.trim();
  return p;
}

TEST_CASE("rational helpers") {
  CHECK(pochhammer(Rat(3), 4) == Rat(3 * 4 * 5 * 6));
  CHECK(pochhammer(Rat(-2), 3) == Rat(0));
  CHECK(rat_pow(Rat(2, 3), 3) == Rat(8, 27));
  CHECK(rationalize(1.0 / 3.0, Int(100)) == Rat(1, 3));
  CHECK(rationalize(0.3333333333, Int(100)) == Rat(1, 3));
  CHECK(rationalize(0.25, Int(100)) == Rat(1, 4));
  // already-rational input with a small denominator comes back unchanged
  CHECK(rationalize(to_double(Rat(7, 16)), Int(1000)) == Rat(7, 16));
  // continued-fraction error bound: |x - p/q| <= 1/(q*bound)
  double x = 0.123456789;
  Rat r = rationalize(x, Int(1 << 20));
  CHECK(std::abs(to_double(r) - x) < 1.0 / (1 << 20));
}

TEST_CASE("polynomial arithmetic and shift") {
  RationalPoly p = from_coeffs({1, -2, 1});  // (1-x)^2
  CHECK(p.eval(Rat(1)) == Rat(0));
  CHECK(p.eval(Rat(3)) == Rat(4));
  RationalPoly q = p.shifted(Rat(1));  // p(1+x) = x^2
  CHECK(q == from_coeffs({0, 0, 1}));
  CHECK((p * p).degree() == 4);
  CHECK(p.derivative() == from_coeffs({-2, 2}));
}

TEST_CASE("sturm root counts on the positive axis") {
  // x - 1: one root in (0,inf)
  CHECK(count_roots_positive_axis(from_coeffs({-1, 1})) == 1);
  // x^2 + 1: none
  CHECK(count_roots_positive_axis(from_coeffs({1, 0, 1})) == 0);
  // (x-1)(x-2)(x+3) = x^3 - 7x + 6: two positive roots
  CHECK(count_roots_positive_axis(from_coeffs({6, -7, 0, 1})) == 2);
  // (x-1)^2: one distinct positive root
  CHECK(count_roots_positive_axis(from_coeffs({1, -2, 1})) == 1);
  // x^2(x-5): root at zero ignored, one positive root
  CHECK(count_roots_positive_axis(from_coeffs({0, 0, -5, 1})) == 1);
}

TEST_CASE("ray nonnegativity") {
  // q = lambda - 1 on [2, inf): positive
  RationalPoly q = from_coeffs({-1, 1});
  auto r = check_nonneg_on_ray(q, Rat(2));
  CHECK(r.nonneg);
  CHECK(r.roots_on_ray == 0);
  // q = 5 - lambda on [4, inf): leading coefficient test fails
  auto r2 = check_nonneg_on_ray(from_coeffs({5, -1}), Rat(4));
  CHECK_FALSE(r2.nonneg);
  CHECK(r2.sign_leading < 0);
  // q = (lambda-3)^2 + 1 on [0,inf)
  auto r3 = check_nonneg_on_ray(from_coeffs({10, -6, 1}), Rat(0));
  CHECK(r3.nonneg);
  // zero polynomial is accepted with equality
  auto r4 = check_nonneg_on_ray(RationalPoly{}, Rat(0));
  CHECK(r4.nonneg);
  CHECK(r4.identically_zero);
  // boundary root is fine: lambda - 2 on [2, inf)
  auto r5 = check_nonneg_on_ray(from_coeffs({-2, 1}), Rat(2));
  CHECK(r5.nonneg);
  // interior root rejected: lambda - 2 on [1, inf) dies at the start sign
  auto r6 = check_nonneg_on_ray(from_coeffs({-2, 1}), Rat(1));
  CHECK_FALSE(r6.nonneg);
  // (lambda-2)(lambda-3) on [1, inf): positive at start, two interior roots
  auto r7 = check_nonneg_on_ray(from_coeffs({6, -5, 1}), Rat(1));
  CHECK_FALSE(r7.nonneg);
  CHECK(r7.roots_on_ray == 2);
}
