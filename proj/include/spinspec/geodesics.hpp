#pragma once

// Enumeration of the conjugacy classes of hyperbolic elements up to a length
// cutoff, with primitive lengths, winding numbers and spin multiplier signs,
// plus the elliptic conjugacy-class data feeding the trace formula.

#include <spinspec/surfaces.hpp>
#include <string>
#include <vector>

namespace spinspec {

struct ConjugacyClass {
  double length = 0;
  double primitive_length = 0;
  int winding = 1;
  int chi = +1;  // sign of the lifted representative's trace
  GroupElement representative;
};

struct EllipticClassData {
  double theta = 0;     // class angle in (0, pi): pi j / order for the j-th power
  int order = 0;        // cone order
  int chi = +1;         // sign of the lifted power's trace
  int count_convention = 1;  // entry convention tag (j = 1..order-1, PSL angle)
};

struct EnumerationMeta {
  std::uint64_t words_expanded = 0;
  std::uint64_t tiles = 0;
  double wall_seconds = 0;  // in-memory only; never serialized
  bool complete = false;
};

struct GeodesicSpectrum {
  std::string surface_id;
  std::string spin_label;
  double cutoff = 0;
  double dirichlet_radius = 0;
  cplx base_point{0, 0};
  std::vector<ConjugacyClass> classes;  // ascending by length
  std::vector<EllipticClassData> elliptic;
  EnumerationMeta meta;
};

struct EnumerationOptions {
  std::uint64_t tile_budget = 20'000'000;
  int threads = 1;
  Tolerances tol;
  // The breadth-first walk keeps tiles up to threshold + slack; only
  // in-threshold elements are returned. The side-pairing walk is complete
  // without slack for Dirichlet domains, but symmetric base points produce
  // exact distance ties at the boundary, so a margin is kept and a test
  // compares against a much larger one.
  double slack = 0.75;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AmbiguityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All distinct lifted translates tau with d(x, tau x) <= 2 acosh(cosh R cosh(L/2)),
// breadth-first over the side-pairing alphabet. Includes the identity.
std::vector<GroupElement> enumerate_translates(const SurfaceModel& model,
                                               const SpinStructure& spin, double L,
                                               const EnumerationOptions& opt = {},
                                               EnumerationMeta* meta = nullptr);

GeodesicSpectrum hyperbolic_classes(const SurfaceModel& model, const SpinStructure& spin,
                                    double L, const EnumerationOptions& opt = {});

std::vector<EllipticClassData> elliptic_classes(const SurfaceModel& model,
                                                const SpinStructure& spin);

void save_spectrum(const GeodesicSpectrum& spec, const std::string& path);
GeodesicSpectrum load_spectrum(const std::string& path);
// Load and validate identity against the requesting context.
GeodesicSpectrum load_spectrum_checked(const std::string& path, const std::string& surface_id,
                                       const std::string& spin_label, double min_cutoff);

}  // namespace spinspec
