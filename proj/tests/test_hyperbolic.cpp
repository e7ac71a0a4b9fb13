#include <doctest.h>
#include <spinspec/hyperbolic.hpp>
#include <random>

using namespace spinspec;

namespace {

std::mt19937 rng(12345);

cplx random_point(double rmax = 0.9) {
  std::uniform_real_distribution<double> rad(0.0, rmax), ang(0.0, 2 * M_PI);
  return std::polar(rad(rng), ang(rng));
}

GroupElement random_element() {
  std::uniform_real_distribution<double> ang(0.0, 2 * M_PI);
  GroupElement t = translation_to(random_point(0.95));
  GroupElement r = rotation_about_origin(ang(rng));
  GroupElement g = compose(t, r);
  if (rng() & 1) g = g.negated();
  return g;
}

GroupElement bolza_gen(int k) {
  double l = 2 * std::acosh(1.0 / std::tan(M_PI / 8));
  return {cplx(std::cosh(l / 2), 0), std::polar(std::sinh(l / 2), M_PI * k / 4)};
}

}  // namespace

TEST_CASE("compose basics") {
  GroupElement g = random_element();
  GroupElement id{};
  CHECK(approx_equal(compose(g, id), g, 1e-14));
  CHECK(approx_equal(compose(g, g.inverse()), id, 1e-12));
  GroupElement m = id.negated();
  CHECK(approx_equal(compose(m, m), id, 1e-15));  // the center has order 2
}

TEST_CASE("geodesic length") {
  GroupElement b1 = bolza_gen(1);
  double expect = 2 * std::acosh(1.0 / std::tan(M_PI / 8));
  CHECK(geodesic_length(b1) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(expect == doctest::Approx(3.05714).epsilon(1e-5));
  // trace = +-2cosh(1) has length 2
  GroupElement t{cplx(std::cosh(1.0), 0), cplx(std::sinh(1.0), 0)};
  CHECK(geodesic_length(t) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(geodesic_length(t.negated()) == doctest::Approx(2.0).epsilon(1e-13));
  GroupElement rot = rotation_about_origin(1.0);
  CHECK_THROWS_AS(geodesic_length(rot), std::domain_error);
}

TEST_CASE("apply") {
  cplx z = random_point();
  GroupElement id{};
  CHECK(apply(id, z) == z);
  CHECK(apply(id.negated(), z) == z);  // center acts trivially, exactly
  GroupElement g = random_element();
  CHECK(apply(g.negated(), z) == apply(g, z));
  // Bolza generator displaces the origin by its translation length
  GroupElement b1 = bolza_gen(1);
  cplx moved = apply(b1, cplx(0, 0));
  CHECK(dist(cplx(0, 0), moved) == doctest::Approx(geodesic_length(b1)).epsilon(1e-12));
  CHECK_THROWS_AS(apply(g, cplx(1.2, 0)), std::domain_error);
}

TEST_CASE("dist") {
  CHECK(dist(cplx(0, 0), cplx(0, 0)) == 0.0);
  CHECK(dist(cplx(0, 0), cplx(std::tanh(0.5), 0)) == doctest::Approx(1.0).epsilon(1e-13));
  for (int i = 0; i < 1000; ++i) {
    cplx z = random_point(), w = random_point();
    GroupElement g = random_element();
    CHECK(dist(z, w) == doctest::Approx(dist(apply(g, z), apply(g, w))).epsilon(1e-9));
  }
  for (int i = 0; i < 1000; ++i) {
    cplx a = random_point(), b = random_point(), c = random_point();
    CHECK(dist(a, c) <= dist(a, b) + dist(b, c) + 1e-12);
  }
}

TEST_CASE("axis distance") {
  GroupElement b1 = bolza_gen(1);
  CHECK(axis_distance(b1, cplx(0, 0)) == doctest::Approx(0.0).epsilon(1e-7));
  // displacement at distance rho obeys cosh(d/2) = cosh(l/2) cosh(rho)
  for (int i = 0; i < 200; ++i) {
    GroupElement h = random_element();
    cplx x = random_point();
    GroupElement conj = compose(compose(h, b1), h.inverse());
    double lhs = axis_distance(conj, x);
    double rhs = axis_distance(b1, apply(h.inverse(), x));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    double d = displacement_from(conj, x);
    CHECK(std::cosh(d / 2) ==
          doctest::Approx(std::cosh(geodesic_length(conj) / 2) * std::cosh(lhs)).epsilon(1e-9));
  }
}

TEST_CASE("classification stable under conjugation") {
  for (int i = 0; i < 1000; ++i) {
    GroupElement g = random_element(), h = random_element();
    GroupElement c = compose(compose(h, g), h.inverse());
    auto a = classify(g), b = classify(c);
    CHECK(a.kind == b.kind);
    if (a.kind == IsometryKind::Hyperbolic)
      CHECK(a.length == doctest::Approx(b.length).epsilon(1e-8));
  }
}

TEST_CASE("length of powers") {
  for (int i = 0; i < 100; ++i) {
    GroupElement g = random_element();
    if (classify(g).kind != IsometryKind::Hyperbolic) continue;
    GroupElement p = g;
    for (int n = 2; n <= 5; ++n) {
      p = compose(p, g);
      CHECK(geodesic_length(p) ==
            doctest::Approx(n * geodesic_length(g)).epsilon(1e-9));
    }
  }
}

TEST_CASE("elliptic classification of order-k lifts") {
  for (int k : {3, 5, 7, 9}) {
    GroupElement lift = rotation_about(cplx(0.3, 0.2), 2 * M_PI / k).negated();
    auto c = classify(lift);
    CHECK(c.kind == IsometryKind::Elliptic);
    REQUIRE(c.order.has_value());
    CHECK(*c.order == k);
    CHECK(lift.trace() == doctest::Approx(-2 * std::cos(M_PI / k)).epsilon(1e-12));
  }
}
