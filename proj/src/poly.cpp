#include <spinspec/poly.hpp>

#include <algorithm>
#include <sstream>

namespace spinspec {

RationalPoly RationalPoly::variable() {
  RationalPoly p;
  p.coeff = {Rat(0), Rat(1)};
  return p;
}

void RationalPoly::trim() {
  while (!coeff.empty() && coeff.back() == 0) coeff.pop_back();
}

Rat RationalPoly::eval(const Rat& x) const {
  Rat r = 0;
  for (auto it = coeff.rbegin(); it != coeff.rend(); ++it) r = r * x + *it;
  return r;
}

double RationalPoly::eval_double(double x) const {
  double r = 0;
  for (auto it = coeff.rbegin(); it != coeff.rend(); ++it) r = r * x + to_double(*it);
  return r;
}

RationalPoly RationalPoly::derivative() const {
  RationalPoly d;
  for (size_t i = 1; i < coeff.size(); ++i) d.coeff.push_back(Rat(long(i)) * coeff[i]);
  d.trim();
  return d;
}

RationalPoly RationalPoly::shifted(const Rat& shift) const {
  // Horner in (shift + x): fold from the top coefficient down.
  RationalPoly r;
  for (auto it = coeff.rbegin(); it != coeff.rend(); ++it) {
    // r = r * (shift + x) + c
    RationalPoly next;
    next.coeff.assign(r.coeff.size() + 1, Rat(0));
    for (size_t i = 0; i < r.coeff.size(); ++i) {
      next.coeff[i] += shift * r.coeff[i];
      next.coeff[i + 1] += r.coeff[i];
    }
    if (next.coeff.empty()) next.coeff.push_back(Rat(0));
    next.coeff[0] += *it;
    next.trim();
    r = std::move(next);
  }
  return r;
}

std::string RationalPoly::str() const {
  if (coeff.empty()) return "0";
  std::ostringstream os;
  for (long i = degree(); i >= 0; --i) {
    if (coeff[i] == 0) continue;
    if (os.tellp() > 0) os << " + ";
    os << rat_str(coeff[i]);
    if (i >= 1) os << "*l";
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

RationalPoly operator+(const RationalPoly& a, const RationalPoly& b) {
  RationalPoly r;
  r.coeff.resize(std::max(a.coeff.size(), b.coeff.size()), Rat(0));
  for (size_t i = 0; i < a.coeff.size(); ++i) r.coeff[i] += a.coeff[i];
  for (size_t i = 0; i < b.coeff.size(); ++i) r.coeff[i] += b.coeff[i];
  r.trim();
  return r;
}

RationalPoly operator-(const RationalPoly& a, const RationalPoly& b) {
  RationalPoly r;
  r.coeff.resize(std::max(a.coeff.size(), b.coeff.size()), Rat(0));
  for (size_t i = 0; i < a.coeff.size(); ++i) r.coeff[i] += a.coeff[i];
  for (size_t i = 0; i < b.coeff.size(); ++i) r.coeff[i] -= b.coeff[i];
  r.trim();
  return r;
}

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  RationalPoly r;
  r.coeff.assign(a.coeff.size() + b.coeff.size() - 1, Rat(0));
  for (size_t i = 0; i < a.coeff.size(); ++i) {
    if (a.coeff[i] == 0) continue;
    for (size_t j = 0; j < b.coeff.size(); ++j) r.coeff[i + j] += a.coeff[i] * b.coeff[j];
  }
  r.trim();
  return r;
}

RationalPoly operator*(const Rat& s, const RationalPoly& a) {
  if (s == 0) return {};
  RationalPoly r = a;
  for (auto& c : r.coeff) c *= s;
  return r;
}

namespace {

using ZPoly = std::vector<Int>;  // trailing zeros trimmed, never empty unless zero

void ztrim(ZPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Scale a rational polynomial by the lcm of denominators and divide out the
// integer content; the result is a primitive integer polynomial that is a
// positive multiple of the input.
ZPoly to_primitive(const RationalPoly& q) {
  Int l = 1;
  for (const auto& c : q.coeff) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  ZPoly p(q.coeff.size());
  for (size_t i = 0; i < q.coeff.size(); ++i) {
    Rat scaled = q.coeff[i] * l;
    p[i] = scaled.get_num();  // denominator is 1 by construction
  }
  Int content = 0;
  for (auto& c : p) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
  if (content > 1)
    for (auto& c : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), content.get_mpz_t());
  ztrim(p);
  return p;
}

void make_primitive(ZPoly& p) {
  Int content = 0;
  for (auto& c : p) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
  if (content > 1)
    for (auto& c : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), content.get_mpz_t());
}

ZPoly zderiv(const ZPoly& p) {
  ZPoly d;
  for (size_t i = 1; i < p.size(); ++i) d.push_back(Int(long(i)) * p[i]);
  ztrim(d);
  return d;
}

// Pseudo-remainder of a by b together with the sign of the implicit
// multiplier lc(b)^steps, so the caller can recover the sign of the true
// remainder.
ZPoly pseudo_rem(ZPoly a, const ZPoly& b, int* multiplier_sign) {
  const Int& d = b.back();
  long n = (long)b.size() - 1;
  int msign = 1;
  while ((long)a.size() - 1 >= n && !a.empty()) {
    long k = (long)a.size() - 1;
    Int lead = a.back();
    // a = d*a - lead * x^{k-n} * b
    for (auto& c : a) c *= d;
    for (long i = 0; i <= n; ++i) a[k - n + i] -= lead * b[i];
    msign *= (sign(d) < 0) ? -1 : 1;
    ztrim(a);
  }
  *multiplier_sign = msign;
  return a;
}

long variations(const std::vector<int>& signs) {
  long v = 0;
  int prev = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++v;
    prev = s;
  }
  return v;
}

}  // namespace

long count_roots_positive_axis(const RationalPoly& q, long* var_at_zero, long* var_at_inf) {
  ZPoly p0 = to_primitive(q);
  if (p0.empty() || p0.size() == 1) {
    if (var_at_zero) *var_at_zero = 0;
    if (var_at_inf) *var_at_inf = 0;
    return 0;
  }
  // Strip any x^k factor: roots at 0 are not in the open interval.
  size_t lead_zeros = 0;
  while (lead_zeros < p0.size() && p0[lead_zeros] == 0) ++lead_zeros;
  if (lead_zeros) p0.erase(p0.begin(), p0.begin() + lead_zeros);

  std::vector<ZPoly> chain;
  chain.push_back(p0);
  ZPoly p1 = zderiv(p0);
  make_primitive(p1);
  if (!p1.empty()) chain.push_back(p1);
  while (chain.size() >= 2) {
    const ZPoly& a = chain[chain.size() - 2];
    const ZPoly& b = chain.back();
    if ((long)b.size() - 1 <= 0) break;  // constant: chain complete
    int msign = 1;
    ZPoly r = pseudo_rem(a, b, &msign);
    if (r.empty()) break;  // common factor; generalized Sturm still counts distinct roots
    // Sturm wants the negated true remainder, up to a positive factor.
    if (msign > 0)
      for (auto& c : r) c = -c;
    make_primitive(r);
    chain.push_back(std::move(r));
  }

  std::vector<int> s0, sinf;
  for (const auto& p : chain) {
    s0.push_back(p.empty() ? 0 : sign(p.front()));
    sinf.push_back(p.empty() ? 0 : sign(p.back()));
  }
  long v0 = variations(s0), vi = variations(sinf);
  if (var_at_zero) *var_at_zero = v0;
  if (var_at_inf) *var_at_inf = vi;
  return v0 - vi;
}

RayPositivity check_nonneg_on_ray(const RationalPoly& q, const Rat& ray_start) {
  RayPositivity out;
  if (q.is_zero()) {
    out.nonneg = true;
    out.identically_zero = true;
    out.reason = "identically zero";
    return out;
  }
  RationalPoly shifted = q.shifted(ray_start);
  out.sign_at_start = sign(shifted.at(0));
  out.sign_leading = sign(shifted.leading());
  if (shifted.degree() == 0) {
    out.nonneg = out.sign_at_start >= 0;
    out.reason = out.nonneg ? "nonnegative constant" : "negative constant";
    return out;
  }
  if (out.sign_at_start < 0) {
    out.nonneg = false;
    out.reason = "negative at ray start";
    return out;
  }
  if (out.sign_leading <= 0) {
    out.nonneg = false;
    out.reason = "leading coefficient not positive";
    return out;
  }
  out.roots_on_ray =
      count_roots_positive_axis(shifted, &out.variations_at_start, &out.variations_at_inf);
  if (out.roots_on_ray == 0) {
    out.nonneg = true;
    out.reason = "no roots on open ray";
  } else {
    out.nonneg = false;
    out.reason = "sturm found interior roots";
  }
  return out;
}

}  // namespace spinspec
