#pragma once

// Sign-carrying SU(1,1) matrix algebra on the Poincare disk. An element is
// stored by the top row (a, b) of [[a, b], [conj b, conj a]] with
// |a|^2 - |b|^2 = 1. The element and its negation are distinct: this is the
// double cover, not its projectivization, and the trace sign is the spin
// multiplier data.

#include <complex>
#include <cstdio>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace spinspec {

struct Tolerances {
  double eps_det = 1e-12;    // determinant drift allowed on construction
  double eps_class = 1e-10;  // |trace| classification margin around 2
  double dedup_grid = 1e-9;  // rounding grid for matrix-entry deduplication
  double eps_trace = 1e-8;   // |trace| grouping width for length classes
};

template <typename S = double>
struct DiskIsometry {
  using C = std::complex<S>;
  C a{1, 0}, b{0, 0};

  DiskIsometry() = default;
  DiskIsometry(C a_, C b_) : a(a_), b(b_) {}

  S det() const { return std::norm(a) - std::norm(b); }
  S trace() const { return 2 * a.real(); }
  DiskIsometry inverse() const { return {std::conj(a), -b}; }
  DiskIsometry negated() const { return {-a, -b}; }

  bool operator==(const DiskIsometry& o) const { return a == o.a && b == o.b; }
};

using GroupElement = DiskIsometry<double>;
using cplx = std::complex<double>;

template <typename S>
DiskIsometry<S> compose(const DiskIsometry<S>& g, const DiskIsometry<S>& h,
                        double eps_det = 1e-12) {
  DiskIsometry<S> r{g.a * h.a + g.b * std::conj(h.b), g.a * h.b + g.b * std::conj(h.a)};
  // Rounding in the product entries scales with the input magnitudes even
  // when the result is small, so the determinant check is relative to the
  // product of the input scales; it exists to catch corrupt inputs, not to
  // bound honest float noise. No renormalization: rescaling would inject
  // noise of order eps * scale^2 into the entries, which is what actually
  // breaks deduplication at large radii, while the raw drift stays tiny
  // over the word lengths in play.
  S scale2 = (std::norm(g.a) + std::norm(g.b)) * (std::norm(h.a) + std::norm(h.b));
  S drift = std::abs(r.det() - S(1));
  if (drift > 1e3 * eps_det * std::max(S(1), scale2))
    throw std::runtime_error("compose: determinant drift");
  return r;
}

template <typename S>
DiskIsometry<S> identity_element() {
  return DiskIsometry<S>{};
}

template <typename S>
std::complex<S> apply(const DiskIsometry<S>& g, const std::complex<S>& z) {
  if (std::norm(z) >= S(1)) throw std::domain_error("apply: point outside open disk");
  return (g.a * z + g.b) / (std::conj(g.b) * z + std::conj(g.a));
}

template <typename S>
S dist(const std::complex<S>& z, const std::complex<S>& w) {
  S dz = std::norm(z - w);
  S den = (S(1) - std::norm(z)) * (S(1) - std::norm(w));
  if (den <= S(0)) throw std::domain_error("dist: point outside open disk");
  return S(2) * std::asinh(std::sqrt(dz / den));
}

// d(0, g.0) = 2 acosh |a|.
template <typename S>
S displacement(const DiskIsometry<S>& g) {
  S m = std::abs(g.a);
  return m <= S(1) ? S(0) : S(2) * std::acosh(m);
}

// SU(1,1) translation moving 0 to w along the geodesic through both.
template <typename S>
DiskIsometry<S> translation_to(const std::complex<S>& w) {
  S r = std::abs(w);
  if (r == S(0)) return identity_element<S>();
  if (r >= S(1)) throw std::domain_error("translation_to: target outside disk");
  S d = S(2) * std::atanh(r);
  std::complex<S> dir = w / r;
  return {std::complex<S>(std::cosh(d / 2), 0), dir * std::complex<S>(std::sinh(d / 2), 0)};
}

// Lift of the rotation by geometric angle psi about the origin with
// a = exp(i psi / 2); the other lift is its negation.
template <typename S>
DiskIsometry<S> rotation_about_origin(S psi) {
  return {std::polar(S(1), psi / 2), std::complex<S>(0, 0)};
}

template <typename S>
DiskIsometry<S> rotation_about(const std::complex<S>& center, S psi) {
  DiskIsometry<S> t = translation_to(center);
  return compose(compose(t, rotation_about_origin(psi)), t.inverse());
}

template <typename S>
S displacement_from(const DiskIsometry<S>& g, const std::complex<S>& x) {
  DiskIsometry<S> t = translation_to(x);
  return displacement(compose(compose(t.inverse(), g), t));
}

enum class IsometryKind { Identity, Elliptic, Parabolic, Hyperbolic };

struct IsometryClass {
  IsometryKind kind = IsometryKind::Identity;
  int identity_sign = +1;          // Identity only
  double angle = 0.0;              // Elliptic: matrix rotation angle in (0, 2pi)
  std::optional<int> order;        // Elliptic: k with g^k = +identity, if small
  double length = 0.0;             // Hyperbolic: translation length
};

template <typename S>
S geodesic_length_unchecked(const DiskIsometry<S>& g) {
  return S(2) * std::acosh(std::abs(g.trace()) / 2);
}

inline IsometryClass classify(const GroupElement& g, const Tolerances& tol = {}) {
  IsometryClass c;
  double tr = g.trace();
  double abstr = std::abs(tr);
  if (abstr > 2 + tol.eps_class) {
    c.kind = IsometryKind::Hyperbolic;
    c.length = geodesic_length_unchecked(g);
    return c;
  }
  if (abstr >= 2 - tol.eps_class) {
    if (std::abs(g.b) < tol.eps_class && std::abs(std::imag(g.a)) < tol.eps_class) {
      c.kind = IsometryKind::Identity;
      c.identity_sign = tr >= 0 ? +1 : -1;
    } else {
      c.kind = IsometryKind::Parabolic;
    }
    return c;
  }
  c.kind = IsometryKind::Elliptic;
  // Conjugate the fixed point to the origin and read the rotation angle of
  // the lift: a = exp(i psi/2) up to the conjugation, with arg in (-pi, pi].
  // The fixed point inside the disk solves conj(b) z^2 + (conj(a)-a) z - b = 0.
  cplx fix;
  if (std::abs(g.b) < 1e-15) {
    fix = 0;
  } else {
    cplx A = std::conj(g.b), B = std::conj(g.a) - g.a, C = -g.b;
    cplx disc = std::sqrt(B * B - 4.0 * A * C);
    cplx r1 = (-B + disc) / (2.0 * A), r2 = (-B - disc) / (2.0 * A);
    fix = std::abs(r1) < std::abs(r2) ? r1 : r2;
  }
  GroupElement t = translation_to(fix);
  GroupElement rot = compose(compose(t.inverse(), g), t);
  double half = std::arg(rot.a);  // (-pi, pi]
  double psi = 2 * half;
  if (psi <= 0) psi += 4 * M_PI;  // lift angle lives in (0, 4pi); fold to (0, 2pi)
  if (psi > 2 * M_PI) psi -= 2 * M_PI;
  c.angle = psi;
  for (int k = 2; k <= 256; ++k) {
    double a = std::remainder(k * half, 2 * M_PI);
    if (std::abs(a) < 1e-9) {
      c.order = k;
      break;
    }
  }
  return c;
}

template <typename S>
S geodesic_length(const DiskIsometry<S>& g, const Tolerances& tol = {}) {
  if (std::abs(g.trace()) <= 2 + tol.eps_class)
    throw std::domain_error("geodesic_length: element is not hyperbolic");
  return geodesic_length_unchecked(g);
}

// Distance from x to the axis of a hyperbolic g, from
// cosh(d(x,gx)/2) = cosh(l/2) cosh(rho).
template <typename S>
S axis_distance(const DiskIsometry<S>& g, const std::complex<S>& x, const Tolerances& tol = {}) {
  if (std::abs(g.trace()) <= 2 + tol.eps_class)
    throw std::domain_error("axis_distance: element is not hyperbolic");
  DiskIsometry<S> t = translation_to(x);
  DiskIsometry<S> h = compose(compose(t.inverse(), g), t);
  S ratio = std::abs(h.a) / (std::abs(g.trace()) / 2);
  return ratio <= S(1) ? S(0) : std::acosh(ratio);
}

// Quantized key for set semantics over the double cover. Entries rounded to
// the dedup grid; callers re-check candidates within a neighbor cell.
struct ElementKey {
  std::int64_t q[4];
  bool operator==(const ElementKey& o) const {
    return q[0] == o.q[0] && q[1] == o.q[1] && q[2] == o.q[2] && q[3] == o.q[3];
  }
};

struct ElementKeyHash {
  size_t operator()(const ElementKey& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (int i = 0; i < 4; ++i) {
      h ^= static_cast<std::uint64_t>(k.q[i]);
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

inline ElementKey element_key(const GroupElement& g, double grid) {
  auto q = [&](double x) { return static_cast<std::int64_t>(std::llround(x / grid)); };
  return ElementKey{{q(g.a.real()), q(g.a.imag()), q(g.b.real()), q(g.b.imag())}};
}

inline bool approx_equal(const GroupElement& g, const GroupElement& h, double eps) {
  return std::abs(g.a - h.a) <= eps && std::abs(g.b - h.b) <= eps;
}

inline bool approx_equal_up_to_sign(const GroupElement& g, const GroupElement& h, double eps) {
  return approx_equal(g, h, eps) || approx_equal(g, h.negated(), eps);
}

// Klein model: geodesics are straight chords, so polygon clipping is
// Euclidean there.
inline cplx to_klein(cplx z) { return 2.0 * z / (1.0 + std::norm(z)); }
inline cplx from_klein(cplx k) {
  double n = std::norm(k);
  if (n >= 1.0) throw std::domain_error("from_klein: outside disk");
  return k / (1.0 + std::sqrt(1.0 - n));
}

}  // namespace spinspec
