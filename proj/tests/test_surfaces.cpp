#include <doctest.h>
#include <spinspec/surfaces.hpp>
#include <algorithm>
#include <random>
#include <set>

using namespace spinspec;

TEST_CASE("triangle group 3,3,5") {
  SurfaceModel m = triangle_group(3, 3, 5);
  CHECK(m.volume == doctest::Approx(4 * M_PI / 15).epsilon(1e-12));
  CHECK(m.signature.volume() == doctest::Approx(0.837758).epsilon(1e-5));
  // order-k lifts power to +identity
  GroupElement x = m.generators[0];
  GroupElement x3 = compose(compose(x, x), x);
  CHECK(approx_equal(x3, GroupElement{}, 1e-10));
  // all relations hold on the forced lifts
  for (auto& rel : m.relations)
    CHECK(approx_equal(m.word_element(rel), GroupElement{}, 1e-8));
  CHECK(m.dirichlet_radius > 0);
  CHECK(spin_structures(m).size() == 1);
  CHECK_THROWS(spin_structures(triangle_group(2, 3, 7)));
}

TEST_CASE("euclidean and spherical triangle signatures rejected") {
  CHECK_THROWS_AS(triangle_group(2, 3, 6), std::invalid_argument);
  CHECK_THROWS_AS(triangle_group(2, 3, 5), std::invalid_argument);
}

TEST_CASE("schwarz map vertex cross-check") {
  // The rescaled Schwarz function evaluated at 1 with Gauss summation lands
  // on the order-r vertex; its modulus must match the law-of-cosines side
  // between the p and r vertices.
  auto check = [](int p, int q, int r) {
    double al = 1.0 / p, be = 1.0 / q, ga = 1.0 / r;
    double a = (1 - al - be - ga) / 2, b = (1 - al + be - ga) / 2, c = 1 - al;
    double ap = (1 + al - be - ga) / 2, bp = (1 + al + be - ga) / 2, cp = 1 + al;
    auto gauss = [](double a_, double b_, double c_) {
      return std::tgamma(c_) * std::tgamma(c_ - a_ - b_) /
             (std::tgamma(c_ - a_) * std::tgamma(c_ - b_));
    };
    double nu = std::sqrt((std::cos(M_PI * (al + be)) + std::cos(M_PI * ga)) /
                          (std::cos(M_PI * (al - be)) + std::cos(M_PI * ga)) *
                          (std::cos(M_PI * (al - be - ga)) + 1) /
                          (std::cos(M_PI * (al + be + ga)) + 1)) *
                std::tgamma(ap) * std::tgamma(bp) / std::tgamma(cp) * std::tgamma(c) /
                (std::tgamma(a) * std::tgamma(b));
    double s1 = nu * gauss(ap, bp, cp) / gauss(a, b, c);
    double A = M_PI / p, B = M_PI / q, C = M_PI / r;
    double side_pr =
        std::acosh((std::cos(A) * std::cos(C) + std::cos(B)) / (std::sin(A) * std::sin(C)));
    CHECK(std::abs(s1) == doctest::Approx(std::tanh(side_pr / 2)).epsilon(1e-10));
  };
  check(3, 3, 5);
  check(3, 3, 7);
  check(3, 5, 9);
}

TEST_CASE("bolza") {
  SurfaceModel m = bolza();
  double l = 2 * std::acosh(1.0 / std::tan(M_PI / 8));
  for (auto& g : m.generators) {
    CHECK(classify(g).kind == IsometryKind::Hyperbolic);
    CHECK(geodesic_length(g) == doctest::Approx(l).epsilon(1e-12));
  }
  // octagon pairing relation evaluates to +identity on the reference lifts
  CHECK(approx_equal(m.word_element(m.relations[0]), GroupElement{}, 1e-9));
  CHECK(m.volume == doctest::Approx(4 * M_PI).epsilon(1e-12));
  CHECK(spin_structures(m).size() == 16);
  // side pairing alphabet is the 8 paper generators
  CHECK(m.side_pairing.size() == 8);
  std::set<std::pair<int, int>> letters;
  for (auto& w : m.side_pairing) {
    REQUIRE(w.size() == 1);
    letters.insert({std::abs(w[0]), w[0] > 0 ? 1 : -1});
  }
  CHECK(letters.size() == 8);
  // maximin edge distance: half the generator displacement, foot at midpoint
  bool warn = true;
  CHECK(maximin_edge_distance(m, &warn) == doctest::Approx(l / 2).epsilon(1e-9));
  CHECK_FALSE(warn);
}

TEST_CASE("torus one three") {
  SurfaceModel m = torus_one_three();
  GroupElement e = m.word_element({1, 2, -1, -2});
  auto c = classify(e);
  CHECK(c.kind == IsometryKind::Elliptic);
  CHECK(std::abs(e.trace()) == doctest::Approx(1.0).epsilon(1e-10));  // +-2cos(pi/3)
  CHECK(m.volume == doctest::Approx(4 * M_PI / 3).epsilon(1e-12));
  CHECK(spin_structures(m).size() == 4);
  CHECK(m.side_pairing.size() == 8);
  // the paper's alphabet: g1, g2, g1 g2, g2 g1 and inverses
  std::set<GenWord> expect = {{1},  {2},  {1, 2},  {2, 1},
                              {-1}, {-2}, {-2, -1}, {-1, -2}};
  std::set<GenWord> got(m.side_pairing.begin(), m.side_pairing.end());
  CHECK(got == expect);
}

TEST_CASE("riemann roch") {
  Signature s335{0, {3, 3, 5}};
  CHECK(riemann_roch(s335, 3) == 1);
  CHECK(riemann_roch(s335, 6) == 1);
  CHECK(riemann_roch(Signature{2, {}}, 2) == 2);
  CHECK_THROWS(riemann_roch(Signature{0, {2, 3, 7}}, 3));

  std::mt19937 rng(4242);
  for (int trial = 0; trial < 20; ++trial) {
    Signature sig;
    sig.genus = rng() % 4;
    int cones = rng() % 4;
    for (int i = 0; i < cones; ++i) sig.cone_orders.push_back(3 + 2 * (rng() % 6));
    if (!sig.is_hyperbolic()) {
      --trial;
      continue;
    }
    CHECK(riemann_roch(sig, 2) == sig.genus);
    // monotone in each cone order for fixed n >= 3
    for (long n : {3L, 5L}) {
      Signature bigger = sig;
      for (auto& k : bigger.cone_orders) k += 2;
      CHECK(riemann_roch(bigger, n) >= riemann_roch(sig, n));
    }
  }
}

TEST_CASE("harmonic spinor cap") {
  CHECK(harmonic_spinor_cap(2) == 1);
  CHECK(harmonic_spinor_cap(3) == 2);
  CHECK(harmonic_spinor_cap(0) == 0);
}

TEST_CASE("gauss-bonnet volume permutation invariant") {
  Signature a{0, {3, 5, 9}}, b{0, {9, 3, 5}};
  CHECK(a.volume() == doctest::Approx(b.volume()).epsilon(1e-15));
}

TEST_CASE("maximin edge distance lower bound and brute force") {
  for (auto id : {"triangle:3,3,5", "bolza", "torus13sym"}) {
    SurfaceModel m = surface_by_id(id);
    double min_half_disp = 1e9;
    for (auto& w : m.side_pairing)
      min_half_disp = std::min(min_half_disp, displacement(m.word_element(w)) / 2);
    CHECK(m.dirichlet_radius >= min_half_disp - 1e-12);
    // brute force: sample every edge densely, take the max over edges of the
    // min sampled distance to the base point
    double brute = 0;
    for (auto& [a, b] : m.edges) {
      double lo = 1e9;
      for (int i = 0; i <= 2000; ++i) {
        cplx k = to_klein(a) + (to_klein(b) - to_klein(a)) * (double(i) / 2000);
        lo = std::min(lo, dist(cplx(0, 0), from_klein(k)));
      }
      brute = std::max(brute, lo);
    }
    CHECK(m.dirichlet_radius == doctest::Approx(brute).epsilon(1e-6));
  }
}

TEST_CASE("spin structure relation words evaluate to identity") {
  for (auto id : {"triangle:3,3,5", "bolza", "torus13sym"}) {
    SurfaceModel m = surface_by_id(id);
    for (auto& spin : spin_structures(m))
      for (auto& rel : m.relations)
        CHECK(approx_equal(m.lifted_word(rel, spin), GroupElement{}, 1e-8));
  }
}
