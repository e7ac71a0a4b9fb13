#pragma once

// The constraint systems built from the kernel polynomials, the float LP
// search for candidate functionals, and the exact rational verifier that
// turns candidates into certificates.

#include <spinspec/lp.hpp>
#include <spinspec/series.hpp>
#include <array>
#include <optional>
#include <string>
#include <vector>

namespace spinspec {

enum class SystemMode { LinPro0, Sdp1, Sdp2, Sdp3 };
std::string mode_name(SystemMode m);
SystemMode mode_from_name(const std::string& s);

// Pattern order used everywhere: 0 = (n,n,n,n), 1 = (n/2,n/2,n/2,n/2),
// 2 = (n,n/2,n/2,n), 3 = (n,n/2,n,n/2).
struct CrossingSystem {
  SystemMode mode = SystemMode::Sdp1;
  long n = 3;
  long Lambda = 10;
  long ell_n = 1, ell_half = 1;  // multiplicities entering sdp3
  std::array<std::vector<RationalPoly>, 4> F;          // F[pattern][m]
  std::array<std::vector<std::vector<double>>, 4> Ff;  // float coefficient copies

  int vector_count() const {
    switch (mode) {
      case SystemMode::LinPro0: return 1;
      case SystemMode::Sdp1:
      case SystemMode::Sdp2: return 4;
      case SystemMode::Sdp3: return 6;
    }
    return 0;
  }
  // Exact value of the spinor-channel discrete-series point (n/2)(1 - n/2).
  Rat discrete_lambda() const { return Rat(n, 2) * (1 - Rat(n, 2)); }
};

CrossingSystem assemble(SystemMode mode, long n, long Lambda, long ell_n = 1, long ell_half = 1);

// Exact-rational functional: one coefficient vector per constraint family.
struct Functional {
  std::vector<std::vector<Rat>> alpha;
};

struct FloatFunctional {
  std::vector<Eigen::VectorXd> alpha;
  double margin = 0;
};

struct SearchOptions {
  double lambda_span_factor = 40.0;  // sample up to lambda* + factor * Lambda
  int lambda_samples = 2000;
  int psd_directions = 16;
  int max_refine_rounds = 8;
  long denominator_bits = 24;
  double margin_min = 1e-9;
  double variable_box = 100.0;
};

// Discretized relaxation of the chosen system: a margin-maximizing LP over
// sampled continuum conditions (PSD constraints linearized over boundary
// directions). A candidate is only a candidate; infeasibility of the
// relaxation proves nothing.
std::optional<FloatFunctional> lp_search(
    const CrossingSystem& sys, double lambda0_star, double lambda_half_star,
    const SearchOptions& opt = {},
    const std::vector<std::pair<int, double>>& extra_samples = {});

// Continued-fraction rounding of each entry (after snapping to a dyadic grid
// so the common denominator stays a small power of two).
Functional rationalize_functional(const FloatFunctional& f, long denominator_bits);

struct ConditionRecord {
  std::string id;
  std::string kind;   // "sign" | "equality" | "point" | "ray" | "ray-det"
  bool ok = false;
  std::string detail;  // exact witness: sign values or Sturm counts
};

struct Certificate {
  SystemMode mode = SystemMode::Sdp1;
  long n = 0, Lambda = 0, ell_n = 1, ell_half = 1;
  Rat lambda0_star, lambda_half_star;
  Functional functional;
  std::vector<ConditionRecord> transcript;
  bool accepted = false;
  std::string conclusion;
};

// Exact verification of every condition of the mode; accepted certificates
// carry the excluded statement.
Certificate verify(const CrossingSystem& sys, const Functional& f, const Rat& lambda0_star,
                   const Rat& lambda_half_star);

void save_certificate(const Certificate& cert, const std::string& path);
Certificate load_certificate(const std::string& path);
// Re-run verification on the stored functional; throws if the stored
// transcript does not reproduce.
Certificate replay_certificate(const std::string& path);

// One search probe: lp_search + rationalize + verify, with a few rounds of
// cutting-plane refinement driven by exact rejection witnesses.
std::optional<Certificate> search_certificate(const CrossingSystem& sys, const Rat& lambda0_star,
                                              const Rat& lambda_half_star,
                                              const SearchOptions& opt = {});

enum class BisectAxis { Lambda0, LambdaHalf };

struct BisectResult {
  bool verified = false;
  double value = 0;  // smallest verified lambda* on the chosen axis
  Certificate certificate;
  int probes = 0;
};

// Bisect the chosen axis downward from hi; every accepted probe must verify
// exactly. Returns the smallest verified value (within tol) and its
// certificate; verified=false when even hi fails.
BisectResult bisect_bound(const CrossingSystem& sys, BisectAxis axis, const Rat& fixed_other,
                          double lo, double hi, double tol, const SearchOptions& opt = {});

// The two-identity analytic bound for surfaces carrying ell harmonic
// spinors: lambda_1 <= ell/(ell-1), with the exact combined-identity
// coefficients exhibited.
struct HyperellipticBound {
  long ell = 0;
  Rat bound;
  RationalPoly q_square_coeff;  // multiplies Q^2: lambda
  RationalPoly t_coeff;         // multiplies T: lambda (ell-1)/ell - 1
  bool verified = false;
};
HyperellipticBound analytic_hyperelliptic_bound(long genus);

}  // namespace spinspec
