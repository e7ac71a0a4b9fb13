#include <spinspec/series.hpp>

#include <mutex>
#include <sstream>

namespace spinspec {

bool WeightQuad::in_scope() const {
  if (!(n1 > 0 && n2 > 0 && n3 > 0 && n4 > 0)) return false;
  for (const Rat* v : {&n1, &n2, &n3, &n4})
    if (v->get_den() != 1 && v->get_den() != 2) return false;
  return scalar_channel() || spinor_channel();
}

std::string WeightQuad::str() const {
  std::ostringstream os;
  os << "(" << rat_str(n1) << "," << rat_str(n2) << "," << rat_str(n3) << "," << rat_str(n4)
     << ")";
  return os.str();
}

LambdaSeries operator+(const LambdaSeries& a, const LambdaSeries& b) {
  LambdaSeries r(std::min(a.order, b.order));
  for (long k = 0; k <= r.order; ++k) r.coeff[k] = a.coeff[k] + b.coeff[k];
  return r;
}

LambdaSeries operator*(const LambdaSeries& a, const LambdaSeries& b) {
  LambdaSeries r(std::min(a.order, b.order));
  for (long i = 0; i <= r.order; ++i) {
    if (a.coeff[i].is_zero()) continue;
    for (long j = 0; i + j <= r.order; ++j) {
      if (b.coeff[j].is_zero()) continue;
      r.coeff[i + j] = r.coeff[i + j] + a.coeff[i] * b.coeff[j];
    }
  }
  return r;
}

LambdaSeries lift_series(const std::vector<Rat>& c, long N) {
  LambdaSeries s(N);
  for (long k = 0; k <= N && k < (long)c.size(); ++k)
    if (c[k] != 0) s.coeff[k] = RationalPoly::constant(c[k]);
  return s;
}

std::vector<Rat> hyp2f1_series(const Rat& a, const Rat& b, const Rat& c, long N) {
  std::vector<Rat> s(N + 1);
  Rat term = 1;
  s[0] = term;
  for (long k = 0; k < N; ++k) {
    Rat num = (a + k) * (b + k);
    if (num == 0) break;  // series terminates
    Rat den = (c + k) * (k + 1);
    if (den == 0) throw PoleError("hyp2f1_series: pole in (c)_k before termination");
    term *= num / den;
    s[k + 1] = term;
  }
  return s;
}

std::vector<Rat> binomial_series(const Rat& e, long N) {
  std::vector<Rat> s(N + 1);
  Rat term = 1;
  s[0] = term;
  for (long k = 0; k < N; ++k) {
    term *= -(e - k) / (k + 1);  // (1-z)^e: coefficient ratio
    s[k + 1] = term;
  }
  return s;
}

std::vector<Rat> block_G_series(const Rat& p, const WeightQuad& w, long N) {
  return hyp2f1_series(p - w.n12(), p + w.n34(), 2 * p, N);
}

namespace {

// (z/(z-1))^1 = -z -z^2 -z^3 - ...
std::vector<Rat> w_of_z(long N) {
  std::vector<Rat> s(N + 1, Rat(-1));
  s[0] = 0;
  return s;
}

std::vector<Rat> series_mul(const std::vector<Rat>& a, const std::vector<Rat>& b, long N) {
  std::vector<Rat> r(N + 1);
  for (long i = 0; i <= N; ++i) {
    if (a.size() <= (size_t)i || a[i] == 0) continue;
    for (long j = 0; i + j <= N; ++j) {
      if (b.size() <= (size_t)j || b[j] == 0) continue;
      r[i + j] += a[i] * b[j];
    }
  }
  return r;
}

}  // namespace

LambdaSeries block_H(const WeightQuad& w, long N) {
  // Spinor pattern carries (1-z)^{n12} outside and shifts the Gauss
  // parameters by n21; scalar pattern has neither.
  const bool spinor = w.spinor_channel();
  const Rat shift = spinor ? w.n21() : Rat(0);

  LambdaSeries H(N);
  std::vector<Rat> wz = w_of_z(N);
  std::vector<Rat> wpow(N + 1);
  wpow[0] = 1;  // w^0
  RationalPoly P = RationalPoly::constant(Rat(1));
  const RationalPoly lambda = RationalPoly::variable();
  for (long l = 0; l <= N; ++l) {
    if (l > 0) {
      // P_l = P_{l-1} * (lambda + (shift+l-1) + (shift+l-1)^2) / l^2
      Rat c = shift + (l - 1);
      RationalPoly lin = lambda + RationalPoly::constant(c + c * c);
      P = Rat(1, l * l) * (P * lin);
      wpow = series_mul(wpow, wz, N);
    }
    for (long k = l; k <= N; ++k) {
      if (wpow[k] == 0) continue;
      H.coeff[k] = H.coeff[k] + wpow[k] * P;
    }
  }
  if (spinor) {
    LambdaSeries pref = lift_series(binomial_series(w.n12(), N), N);
    H = pref * H;
  }
  return H;
}

RationalPoly F_poly(long m, const WeightQuad& w) {
  if (m < 0) throw std::invalid_argument("F_poly: m must be nonnegative");
  const long N = m + 4;
  const Rat r = 1 - m - w.n1 - w.n2;
  // z^r * z^{n1+n2} = z^{1-m}: the global power is an integer, so the
  // coefficient of z^1 of the full product is the z^m coefficient of the
  // series part.
  Rat total_power = r + w.n1 + w.n2;
  if (total_power.get_den() != 1) throw std::logic_error("F_poly: fractional net z power");

  WeightQuad negated{-w.n1, -w.n2, -w.n3, -w.n4};
  std::vector<Rat> G = block_G_series(r, negated, N);
  std::vector<Rat> pref = binomial_series(-(w.n2 + w.n3), N);
  LambdaSeries prod = lift_series(series_mul(G, pref, N), N) * block_H(w, N);
  RationalPoly F = prod.coeff[m];
  if (F.degree() > m) throw std::logic_error("F_poly: degree bound violated");
  return F;
}

Rat orthogonality_check(long m1, long m2, const WeightQuad& w) {
  if (m1 < 0 || m2 < 0) throw std::invalid_argument("orthogonality_check: negative index");
  if (m2 > m1) return Rat(0);  // net z power exceeds 1
  const long N = m1 - m2 + 2;
  const Rat r1 = 1 - m1 - w.n1 - w.n2;
  const Rat p2 = m2 + w.n1 + w.n2;
  WeightQuad negated{-w.n1, -w.n2, -w.n3, -w.n4};
  std::vector<Rat> A = block_G_series(r1, negated, N);
  std::vector<Rat> B = block_G_series(p2, w, N);
  std::vector<Rat> prod = series_mul(A, B, N);
  return prod[m1 - m2];
}

const FTable& FTable::get(const WeightQuad& w, long Lambda) {
  static std::map<WeightQuad, FTable> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  FTable& t = cache[w];
  t.pattern = w;
  while ((long)t.F.size() <= Lambda) t.F.push_back(F_poly((long)t.F.size(), w));
  return t;
}

}  // namespace spinspec
