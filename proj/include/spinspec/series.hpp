#pragma once

// Truncated power series in the cross-ratio variable z whose coefficients are
// exact rational polynomials in the Laplace eigenvalue. Realizes the channel
// block functions and the residue pairing that produces the kernel
// polynomials F_m, all in integer arithmetic.

#include <spinspec/poly.hpp>
#include <map>
#include <stdexcept>
#include <vector>

namespace spinspec {

// Correlator weight labels (n1,n2,n3,n4), half-integers stored exactly.
// Four shapes occur: (n,n,n,n), (n/2,n/2,n/2,n/2), (n,n/2,n/2,n) and
// (n,n/2,n,n/2).
struct WeightQuad {
  Rat n1, n2, n3, n4;

  Rat n12() const { return n1 - n2; }
  Rat n21() const { return n2 - n1; }
  Rat n34() const { return n3 - n4; }
  bool scalar_channel() const { return n3 == n2 && n4 == n1; }
  bool spinor_channel() const { return n3 == n1 && n4 == n2 && !(n1 == n2); }
  bool in_scope() const;
  std::string str() const;

  bool operator<(const WeightQuad& o) const {
    if (n1 != o.n1) return n1 < o.n1;
    if (n2 != o.n2) return n2 < o.n2;
    if (n3 != o.n3) return n3 < o.n3;
    return n4 < o.n4;
  }
  bool operator==(const WeightQuad& o) const {
    return n1 == o.n1 && n2 == o.n2 && n3 == o.n3 && n4 == o.n4;
  }
};

inline WeightQuad quad_nnnn(const Rat& n) { return {n, n, n, n}; }
inline WeightQuad quad_hhhh(const Rat& n) { return {n / 2, n / 2, n / 2, n / 2}; }
inline WeightQuad quad_nhhn(const Rat& n) { return {n, n / 2, n / 2, n}; }
inline WeightQuad quad_nhnh(const Rat& n) { return {n, n / 2, n, n / 2}; }

struct PoleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Power series in z truncated at order N; coefficient of z^k is an exact
// rational polynomial in lambda.
struct LambdaSeries {
  long order = 0;                    // retains coefficients of z^0 .. z^order
  std::vector<RationalPoly> coeff;   // size order+1

  explicit LambdaSeries(long N = 0) : order(N), coeff(N + 1) {}
  static LambdaSeries one(long N) {
    LambdaSeries s(N);
    s.coeff[0] = RationalPoly::constant(Rat(1));
    return s;
  }
};

LambdaSeries operator+(const LambdaSeries& a, const LambdaSeries& b);
LambdaSeries operator*(const LambdaSeries& a, const LambdaSeries& b);

// Plain rational series lifted into LambdaSeries as lambda-constants.
LambdaSeries lift_series(const std::vector<Rat>& c, long N);

// Gauss series sum_k (a)_k (b)_k / ((c)_k k!) z^k truncated at N.
// Throws PoleError if (c)_k vanishes before the numerator terminates.
std::vector<Rat> hyp2f1_series(const Rat& a, const Rat& b, const Rat& c, long N);

// Generalized binomial series of (1-z)^e truncated at N.
std::vector<Rat> binomial_series(const Rat& e, long N);

// s-channel block: z^p 2F1(p - n12, p + n34, 2p; z), returned as the series
// factor multiplying z^p. The unified argument rule reproduces both channel
// specializations of the block function.
std::vector<Rat> block_G_series(const Rat& p, const WeightQuad& w, long N);

// t-channel block with the eigenvalue kept polynomial: the Gauss series in
// w(z) = z/(z-1) built from (D+a+l)(1-D+a+l) = lambda + (a+l) + (a+l)^2,
// multiplied by the channel prefactor (1-z)^{n12} in the spinor pattern.
LambdaSeries block_H(const WeightQuad& w, long N);

// Kernel polynomial F_m: coefficient of z^1 in
//   G_{1-m-n1-n2}(-n1,-n2,-n3,-n4; z) * z^{n1+n2} (1-z)^{-(n2+n3)} * H(w; z).
// Exact polynomial in lambda of degree <= m.
RationalPoly F_poly(long m, const WeightQuad& w);

// Residue pairing of the dual block against the direct block; exactly
// delta_{m1,m2}.
Rat orthogonality_check(long m1, long m2, const WeightQuad& w);

// Memoized table of F_m for m = 0..Lambda, one pattern.
struct FTable {
  WeightQuad pattern;
  std::vector<RationalPoly> F;  // index m

  static const FTable& get(const WeightQuad& w, long Lambda);
};

}  // namespace spinspec
