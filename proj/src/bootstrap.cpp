#include <spinspec/bootstrap.hpp>
#include <spinspec/poly.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace spinspec {

namespace {
using json = nlohmann::ordered_json;
}

std::string mode_name(SystemMode m) {
  switch (m) {
    case SystemMode::LinPro0: return "linpro0";
    case SystemMode::Sdp1: return "sdp1";
    case SystemMode::Sdp2: return "sdp2";
    case SystemMode::Sdp3: return "sdp3";
  }
  return "?";
}

SystemMode mode_from_name(const std::string& s) {
  if (s == "linpro0") return SystemMode::LinPro0;
  if (s == "sdp1") return SystemMode::Sdp1;
  if (s == "sdp2") return SystemMode::Sdp2;
  if (s == "sdp3") return SystemMode::Sdp3;
  throw std::invalid_argument("unknown system mode '" + s + "'");
}

CrossingSystem assemble(SystemMode mode, long n, long Lambda, long ell_n, long ell_half) {
  if (n % 2 != 1 || n < 1) throw std::invalid_argument("assemble: n must be odd and positive");
  if (Lambda < 2) throw std::invalid_argument("assemble: Lambda must be at least 2");
  CrossingSystem sys;
  sys.mode = mode;
  sys.n = n;
  sys.Lambda = Lambda;
  sys.ell_n = ell_n;
  sys.ell_half = ell_half;
  WeightQuad quads[4] = {quad_nnnn(Rat(n)), quad_hhhh(Rat(n)), quad_nhhn(Rat(n)),
                         quad_nhnh(Rat(n))};
  for (int p = 0; p < 4; ++p) {
    const FTable& t = FTable::get(quads[p], Lambda);
    sys.F[p].assign(t.F.begin(), t.F.begin() + Lambda + 1);
    sys.Ff[p].resize(Lambda + 1);
    for (long m = 0; m <= Lambda; ++m) {
      sys.Ff[p][m].resize(sys.F[p][m].coeff.size());
      for (size_t k = 0; k < sys.F[p][m].coeff.size(); ++k)
        sys.Ff[p][m][k] = to_double(sys.F[p][m].coeff[k]);
    }
  }
  return sys;
}

namespace {

double eval_float(const std::vector<double>& coeff, double x) {
  double r = 0;
  for (auto it = coeff.rbegin(); it != coeff.rend(); ++it) r = r * x + *it;
  return r;
}

// ---- float LP construction -------------------------------------------------

struct Row {
  Eigen::VectorXd a;   // over the alpha variables only
  double rhs = 0;
  int rel = +1;        // -1 <=, 0 =, +1 >=
  bool margined = false;
  int family = -1;     // continuum family id for refinement bookkeeping
  double lambda = 0;
};

struct RowBuilder {
  const CrossingSystem& sys;
  int K, width, N;
  explicit RowBuilder(const CrossingSystem& s)
      : sys(s), K(s.vector_count()), width((int)s.Lambda + 1), N(K * width) {}

  int idx(int vec, long m) const { return vec * width + (int)m; }

  Eigen::VectorXd zero() const { return Eigen::VectorXd::Zero(N); }

  // coefficient row of sum_m alpha_{vec;m} F^{pattern}_m(lambda)
  void add_poly(Eigen::VectorXd& r, int vec, int pattern, double lambda, double scale) const {
    for (long m = 0; m <= sys.Lambda; ++m)
      r(idx(vec, m)) += scale * eval_float(sys.Ff[pattern][m], lambda);
  }
};

// Sampled lambda grid for one ray: Chebyshev-extrema nodes on
// [start, start+span], which control polynomial wiggle between samples far
// better than any monotone clustering; the ray endpoint is the k=0 node.
std::vector<double> ray_grid(double start, double span, int samples) {
  std::vector<double> g;
  for (int k = 0; k <= samples; ++k)
    g.push_back(start + span * 0.5 * (1.0 - std::cos(M_PI * k / samples)));
  return g;
}

// All continuum rows for the system; family ids: 0 = scalar-ray matrix (or
// plain polynomial for linpro0/sdp3 families 0..1), see per-mode comments.
std::vector<Row> continuum_rows(const CrossingSystem& sys, const RowBuilder& rb,
                                double lambda0_star, double lambda_half_star,
                                const SearchOptions& opt,
                                const std::vector<std::pair<int, double>>& extra) {
  std::vector<Row> rows;
  double span = opt.lambda_span_factor * sys.Lambda;
  auto push_poly = [&](int family, int vec, int pattern, double lambda, double coef = 1.0) {
    Row r;
    r.a = rb.zero();
    rb.add_poly(r.a, vec, pattern, lambda, coef);
    r.margined = true;
    r.family = family;
    r.lambda = lambda;
    rows.push_back(std::move(r));
  };
  auto push_pair = [&](int family, int vec1, int pat1, int vec2, int pat2, double c1, double c2,
                       double lambda) {
    Row r;
    r.a = rb.zero();
    rb.add_poly(r.a, vec1, pat1, lambda, c1);
    rb.add_poly(r.a, vec2, pat2, lambda, c2);
    r.margined = true;
    r.family = family;
    r.lambda = lambda;
    rows.push_back(std::move(r));
  };
  auto psd_rows = [&](int family, int vec11, int vec22, int vec12, double lambda) {
    // u^T M u >= 0 over boundary directions u = (cos phi, sin phi)
    for (int j = 0; j < opt.psd_directions; ++j) {
      double phi = M_PI * (j + 0.5) / opt.psd_directions;
      double cu = std::cos(phi), su = std::sin(phi);
      Row r;
      r.a = rb.zero();
      rb.add_poly(r.a, vec11, 0, lambda, cu * cu);  // F^{NNNN}
      rb.add_poly(r.a, vec22, 1, lambda, su * su);  // F^{HHHH}
      rb.add_poly(r.a, vec12, 2, lambda, cu * su);  // off-diagonal 2 * 1/2 * cos sin
      r.margined = true;
      r.family = family;
      r.lambda = lambda;
      rows.push_back(std::move(r));
    }
  };

  std::vector<double> grid0 = ray_grid(lambda0_star, span, opt.lambda_samples);
  std::vector<double> gridh = ray_grid(lambda_half_star, span, opt.lambda_samples);
  for (auto [family, lambda] : extra) {
    if (family == 0) grid0.push_back(lambda);
    else gridh.push_back(lambda);
  }

  switch (sys.mode) {
    case SystemMode::LinPro0:
      for (double l : grid0) push_poly(0, 0, 1, l);
      break;
    case SystemMode::Sdp1:
    case SystemMode::Sdp2:
      for (double l : grid0) psd_rows(0, 0, 1, 2, l);
      for (double l : gridh) push_poly(1, 3, 3, l);
      break;
    case SystemMode::Sdp3:
      for (double l : grid0) {
        psd_rows(0, 1, 3, 4, l);
        push_pair(0, 0, 0, 1, 0, 1.0, -1.0 / sys.ell_n, l);
        push_pair(0, 2, 1, 3, 1, 1.0, -1.0 / sys.ell_half, l);
      }
      for (double l : gridh) push_poly(1, 5, 3, l);
      break;
  }
  return rows;
}

// Finite rows: sign conditions, the discrete-series point condition and the
// normalization equality.
std::vector<Row> finite_rows(const CrossingSystem& sys, const RowBuilder& rb) {
  std::vector<Row> rows;
  const long Lam = sys.Lambda;
  auto sign_row = [&](std::initializer_list<std::pair<int, double>> terms, long m) {
    Row r;
    r.a = rb.zero();
    for (auto [vec, coef] : terms) r.a(rb.idx(vec, m)) = coef;
    r.rel = -1;  // <= 0
    rows.push_back(std::move(r));
  };
  auto point_row = [&](int vec, double coef, int rel) {
    Row r;
    r.a = rb.zero();
    double lq = to_double(sys.discrete_lambda());
    rb.add_poly(r.a, vec, 3, lq, coef);
    r.rel = rel;
    r.margined = true;
    rows.push_back(std::move(r));
  };
  auto normalization = [&](std::initializer_list<std::pair<int, int>> vec_pattern) {
    Row r;
    r.a = rb.zero();
    for (auto [vec, pat] : vec_pattern) rb.add_poly(r.a, vec, pat, 0.0, 1.0);
    r.rel = 0;
    r.rhs = 1.0;
    rows.push_back(std::move(r));
  };

  switch (sys.mode) {
    case SystemMode::LinPro0:
      for (long m = 0; 2 * m <= Lam; ++m) sign_row({{0, 1.0}}, 2 * m);
      normalization({{0, 1}});
      break;
    case SystemMode::Sdp1:
      for (long m = 0; 2 * m <= Lam; ++m) sign_row({{0, 1.0}}, 2 * m);
      for (long m = 0; 2 * m <= Lam; ++m) sign_row({{1, 1.0}}, 2 * m);
      for (long m = 0; m <= Lam; ++m)
        sign_row({{2, 1.0}, {3, (m % 2) ? -1.0 : 1.0}}, m);
      point_row(3, 1.0, +1);
      normalization({{0, 0}, {1, 1}, {2, 2}});
      break;
    case SystemMode::Sdp2: {
      for (long m = 0; 2 * m <= Lam; ++m) sign_row({{0, 1.0}}, 2 * m);
      // alpha_{2;2m} - delta_{2m,0} S4 <= 0 with S4 = sum alpha_4 F^{NHNH}(lq)
      double lq = to_double(sys.discrete_lambda());
      for (long m = 0; 2 * m <= Lam; ++m) {
        Row r;
        r.a = rb.zero();
        r.a(rb.idx(1, 2 * m)) = 1.0;
        if (m == 0) rb.add_poly(r.a, 3, 3, lq, -1.0);
        r.rel = -1;
        rows.push_back(std::move(r));
      }
      for (long m = 0; m <= Lam; ++m)
        sign_row({{2, 1.0}, {3, (m % 2) ? -1.0 : 1.0}}, m);
      normalization({{0, 0}, {1, 1}, {2, 2}});
      break;
    }
    case SystemMode::Sdp3: {
      double lq = to_double(sys.discrete_lambda());
      double ratio = double(sys.ell_half + 1) / double(sys.ell_n);
      normalization({{1, 0}, {3, 1}, {4, 2}});
      for (long m = 0; 2 * m <= Lam; ++m) sign_row({{0, 1.0}, {1, 1.0}}, 2 * m);
      for (long m = 0; 2 * m <= Lam; ++m) {
        Row r;
        r.a = rb.zero();
        r.a(rb.idx(2, 2 * m)) = 1.0;
        r.a(rb.idx(3, 2 * m)) = 1.0;
        if (m == 0) rb.add_poly(r.a, 5, 3, lq, -ratio);
        r.rel = -1;
        rows.push_back(std::move(r));
      }
      for (long m = 0; 2 * m + 1 <= Lam; ++m)
        sign_row({{1, 1.0}, {0, -1.0}}, 2 * m + 1);
      for (long m = 0; 2 * m + 1 <= Lam; ++m)
        sign_row({{3, 1.0}, {2, -1.0}}, 2 * m + 1);
      for (long m = 0; m <= Lam; ++m)
        sign_row({{4, 1.0}, {5, (m % 2) ? -1.0 : 1.0}}, m);
      break;
    }
  }
  return rows;
}

LPResult solve_margin_lp(const std::vector<const Row*>& working, int N, double box,
                         double margin) {
  // Feasibility with a fixed margin on the normalized rows, minimizing the
  // l1 norm of alpha via the standard positive/negative split: tame
  // functionals survive exact verification, while margin maximization
  // rewards wild cancellations between sample points. box is unused beyond
  // sanity (the l1 objective keeps the solution bounded).
  (void)box;
  int M = (int)working.size();
  int nv = 2 * N;  // alpha = p - q, p,q >= 0
  LinearProgram lp;
  lp.A = Eigen::MatrixXd::Zero(M, nv);
  lp.b = Eigen::VectorXd::Zero(M);
  lp.c = Eigen::VectorXd::Ones(nv);
  lp.rel.assign(M, -1);
  for (int i = 0; i < M; ++i) {
    const Row& r = *working[i];
    double norm = r.a.norm();
    double scale = norm > 1e-300 ? 1.0 / norm : 1.0;
    lp.A.row(i).head(N) = r.a * scale;
    lp.A.row(i).tail(N) = -r.a * scale;
    lp.b(i) = r.rhs * scale + (r.margined ? margin : 0.0);
    lp.rel[i] = r.rel;
  }
  LPResult res = solve_lp(lp);
  if (res.status == LPStatus::Optimal) {
    Eigen::VectorXd alpha = res.x.head(N) - res.x.tail(N);
    res.x = alpha;
  }
  return res;
}

}  // namespace

std::optional<FloatFunctional> lp_search(const CrossingSystem& sys, double lambda0_star,
                                         double lambda_half_star, const SearchOptions& opt,
                                         const std::vector<std::pair<int, double>>& extra) {
  RowBuilder rb(sys);
  std::vector<Row> fixed = finite_rows(sys, rb);
  std::vector<Row> cont = continuum_rows(sys, rb, lambda0_star, lambda_half_star, opt, extra);

  // working set: all finite rows, ray endpoints, a coarse subsample, extras
  std::vector<char> active(cont.size(), 0);
  size_t stride = std::max<size_t>(1, cont.size() / 48);
  for (size_t i = 0; i < cont.size(); i += stride) active[i] = 1;
  for (size_t i = 0; i < cont.size(); ++i)
    if (cont[i].lambda <= lambda0_star + 1e-12 || cont[i].lambda <= lambda_half_star + 1e-12)
      active[i] = 1;

  const double margin = std::max(opt.margin_min, 1e-5);
  Eigen::VectorXd alpha;
  for (int round = 0; round < 60; ++round) {
    std::vector<const Row*> working;
    for (auto& r : fixed) working.push_back(&r);
    for (size_t i = 0; i < cont.size(); ++i)
      if (active[i]) working.push_back(&cont[i]);
    LPResult res = solve_margin_lp(working, rb.N, opt.variable_box, margin);
    if (getenv("SPINSPEC_LP_DEBUG"))
      std::fprintf(stderr, "[lp round %d] rows=%zu status=%d obj=%g\n", round, working.size(),
                   int(res.status), res.objective);
    if (res.status != LPStatus::Optimal) return std::nullopt;
    alpha = res.x.head(rb.N);
    // violated rows against half the required margin
    std::vector<std::pair<double, size_t>> violated;
    for (size_t i = 0; i < cont.size(); ++i) {
      if (active[i]) continue;
      double w = std::max(cont[i].a.norm(), 1e-30);
      double v = cont[i].a.dot(alpha) / w - 0.5 * margin;
      if (v < 0) violated.push_back({v, i});
    }
    if (violated.empty()) {
      FloatFunctional out;
      out.margin = margin;
      for (int k = 0; k < rb.K; ++k)
        out.alpha.push_back(alpha.segment(k * rb.width, rb.width));
      return out;
    }
    std::sort(violated.begin(), violated.end());
    for (size_t k = 0; k < violated.size() && k < 64; ++k) active[violated[k].second] = 1;
    // prune rows far from binding so the working set stays small
    if (working.size() > 360) {
      for (size_t i = 0; i < cont.size(); ++i) {
        if (!active[i]) continue;
        double w = std::max(cont[i].a.norm(), 1e-30);
        if (cont[i].a.dot(alpha) / w > 20 * margin && cont[i].lambda > 1e-9)
          active[i] = 0;
      }
    }
  }
  return std::nullopt;
}

Functional rationalize_functional(const FloatFunctional& f, long denominator_bits) {
  Functional out;
  Int bound = Int(1) << (denominator_bits + 2);
  double grid = std::ldexp(1.0, -(int)denominator_bits);
  for (const auto& vec : f.alpha) {
    std::vector<Rat> v;
    for (int i = 0; i < vec.size(); ++i) {
      double snapped = std::round(vec(i) / grid) * grid;
      v.push_back(rationalize(snapped, bound));
    }
    out.alpha.push_back(std::move(v));
  }
  return out;
}

// ---- exact verification ----------------------------------------------------

namespace {

RationalPoly combo(const std::vector<RationalPoly>& F, const std::vector<Rat>& a) {
  RationalPoly q;
  for (size_t m = 0; m < a.size() && m < F.size(); ++m)
    if (a[m] != 0) q = q + a[m] * F[m];
  return q;
}

Rat combo_at_zero(const std::vector<RationalPoly>& F, const std::vector<Rat>& a) {
  Rat s = 0;
  for (size_t m = 0; m < a.size() && m < F.size(); ++m) s += a[m] * F[m].at(0);
  return s;
}

Rat combo_at(const std::vector<RationalPoly>& F, const std::vector<Rat>& a, const Rat& x) {
  Rat s = 0;
  for (size_t m = 0; m < a.size() && m < F.size(); ++m) s += a[m] * F[m].eval(x);
  return s;
}

struct Checker {
  std::vector<ConditionRecord>& rec;
  bool all_ok = true;

  void sign_le0(const std::string& id, const Rat& v) {
    ConditionRecord r{id, "sign", v <= 0, "value " + rat_str(v)};
    all_ok &= r.ok;
    rec.push_back(std::move(r));
  }
  void point_ge0(const std::string& id, const Rat& v) {
    ConditionRecord r{id, "point", v >= 0, "value " + rat_str(v)};
    all_ok &= r.ok;
    rec.push_back(std::move(r));
  }
  void equality_one(const std::string& id, const Rat& v) {
    ConditionRecord r{id, "equality", v == 1, "value " + rat_str(v)};
    all_ok &= r.ok;
    rec.push_back(std::move(r));
  }
  void ray(const std::string& id, const RationalPoly& q, const Rat& start,
           const std::string& kind = "ray") {
    RayPositivity p = check_nonneg_on_ray(q, start);
    std::ostringstream os;
    os << p.reason << "; start_sign " << p.sign_at_start << " lead_sign " << p.sign_leading;
    if (p.roots_on_ray >= 0)
      os << " sturm_roots " << p.roots_on_ray << " (V0 " << p.variations_at_start << ", Vinf "
         << p.variations_at_inf << ")";
    ConditionRecord r{id, kind, p.nonneg, os.str()};
    all_ok &= r.ok;
    rec.push_back(std::move(r));
  }
};

}  // namespace

Certificate verify(const CrossingSystem& sys, const Functional& f, const Rat& lambda0_star,
                   const Rat& lambda_half_star) {
  if ((int)f.alpha.size() != sys.vector_count())
    throw std::invalid_argument("verify: functional has wrong number of vectors");
  for (const auto& v : f.alpha)
    if ((long)v.size() != sys.Lambda + 1)
      throw std::invalid_argument("verify: functional vector length != Lambda+1");

  Certificate cert;
  cert.mode = sys.mode;
  cert.n = sys.n;
  cert.Lambda = sys.Lambda;
  cert.ell_n = sys.ell_n;
  cert.ell_half = sys.ell_half;
  cert.lambda0_star = lambda0_star;
  cert.lambda_half_star = lambda_half_star;
  cert.functional = f;
  Checker ck{cert.transcript};
  const long Lam = sys.Lambda;
  const Rat lq = sys.discrete_lambda();
  auto id_of = [](const std::string& base, long m) { return base + "[" + std::to_string(m) + "]"; };

  switch (sys.mode) {
    case SystemMode::LinPro0: {
      const auto& a = f.alpha[0];
      for (long m = 0; 2 * m <= Lam; ++m) ck.sign_le0(id_of("c1.alpha_even", 2 * m), a[2 * m]);
      ck.equality_one("c2.normalization", combo_at_zero(sys.F[1], a));
      ck.ray("c3.scalar_ray", combo(sys.F[1], a), lambda0_star);
      cert.conclusion = "lambda_1^(0) < " + rat_str(lambda0_star);
      break;
    }
    case SystemMode::Sdp1:
    case SystemMode::Sdp2: {
      const auto& a1 = f.alpha[0];
      const auto& a2 = f.alpha[1];
      const auto& a3 = f.alpha[2];
      const auto& a4 = f.alpha[3];
      Rat S4 = combo_at(sys.F[3], a4, lq);
      for (long m = 0; 2 * m <= Lam; ++m) ck.sign_le0(id_of("c1.alpha1_even", 2 * m), a1[2 * m]);
      Rat norm = combo_at_zero(sys.F[0], a1) + combo_at_zero(sys.F[1], a2) +
                 combo_at_zero(sys.F[2], a3);
      ck.equality_one("c2.normalization", norm);
      if (sys.mode == SystemMode::Sdp1) {
        for (long m = 0; 2 * m <= Lam; ++m) ck.sign_le0(id_of("c3.alpha2_even", 2 * m), a2[2 * m]);
      } else {
        for (long m = 0; 2 * m <= Lam; ++m)
          ck.sign_le0(id_of("c3.alpha2_even_coupled", 2 * m),
                      a2[2 * m] - (m == 0 ? S4 : Rat(0)));
      }
      for (long m = 0; m <= Lam; ++m)
        ck.sign_le0(id_of("c4.alpha3_pm_alpha4", m), a3[m] + ((m % 2) ? -a4[m] : a4[m]));
      if (sys.mode == SystemMode::Sdp1) ck.point_ge0("c5.discrete_series", S4);
      ck.ray("c6.spinor_ray", combo(sys.F[3], a4), lambda_half_star);
      RationalPoly D1 = combo(sys.F[0], a1);
      RationalPoly D2 = combo(sys.F[1], a2);
      RationalPoly off = Rat(1, 2) * combo(sys.F[2], a3);
      ck.ray("c7.matrix_diag1", D1, lambda0_star);
      ck.ray("c7.matrix_diag2", D2, lambda0_star);
      ck.ray("c7.matrix_det", D1 * D2 - off * off, lambda0_star, "ray-det");
      cert.conclusion = "lambda_1^(0) < " + rat_str(lambda0_star) + " or lambda_1^(1/2) < " +
                        rat_str(lambda_half_star);
      break;
    }
    case SystemMode::Sdp3: {
      const auto& a1 = f.alpha[0];
      const auto& a2 = f.alpha[1];
      const auto& a3 = f.alpha[2];
      const auto& a4 = f.alpha[3];
      const auto& a5 = f.alpha[4];
      const auto& a6 = f.alpha[5];
      Rat S6 = combo_at(sys.F[3], a6, lq);
      Rat ratio = Rat(sys.ell_half + 1, sys.ell_n);
      Rat norm = combo_at_zero(sys.F[0], a2) + combo_at_zero(sys.F[1], a4) +
                 combo_at_zero(sys.F[2], a5);
      ck.equality_one("c1.normalization", norm);
      for (long m = 0; 2 * m <= Lam; ++m)
        ck.sign_le0(id_of("c2.a1+a2_even", 2 * m), a1[2 * m] + a2[2 * m]);
      for (long m = 0; 2 * m <= Lam; ++m)
        ck.sign_le0(id_of("c3.a3+a4_even_coupled", 2 * m),
                    a3[2 * m] + a4[2 * m] - (m == 0 ? ratio * S6 : Rat(0)));
      for (long m = 0; 2 * m + 1 <= Lam; ++m)
        ck.sign_le0(id_of("c4.a2-a1_odd", 2 * m + 1), a2[2 * m + 1] - a1[2 * m + 1]);
      for (long m = 0; 2 * m + 1 <= Lam; ++m)
        ck.sign_le0(id_of("c5.a4-a3_odd", 2 * m + 1), a4[2 * m + 1] - a3[2 * m + 1]);
      for (long m = 0; m <= Lam; ++m)
        ck.sign_le0(id_of("c6.a5_pm_a6", m), a5[m] + ((m % 2) ? -a6[m] : a6[m]));
      std::vector<Rat> t7(Lam + 1), t8(Lam + 1);
      for (long m = 0; m <= Lam; ++m) {
        t7[m] = a1[m] - a2[m] / sys.ell_n;
        t8[m] = a3[m] - a4[m] / sys.ell_half;
      }
      ck.ray("c7.scalar_ray_nnnn", combo(sys.F[0], t7), lambda0_star);
      ck.ray("c8.scalar_ray_hhhh", combo(sys.F[1], t8), lambda0_star);
      ck.ray("c9.spinor_ray", combo(sys.F[3], a6), lambda_half_star);
      RationalPoly D1 = combo(sys.F[0], a2);
      RationalPoly D2 = combo(sys.F[1], a4);
      RationalPoly off = Rat(1, 2) * combo(sys.F[2], a5);
      ck.ray("c10.matrix_diag1", D1, lambda0_star);
      ck.ray("c10.matrix_diag2", D2, lambda0_star);
      ck.ray("c10.matrix_det", D1 * D2 - off * off, lambda0_star, "ray-det");
      cert.conclusion = "lambda_1^(0) < " + rat_str(lambda0_star) + " or lambda_1^(1/2) < " +
                        rat_str(lambda_half_star);
      break;
    }
  }
  cert.accepted = ck.all_ok;
  return cert;
}

// ---- search: LP candidate -> exact repair -> verify ------------------------

namespace {

// Tiny exact repairs that restore the finite conditions a rounded candidate
// may violate at the last ulp, then rescale so the normalization holds
// exactly (every other condition is homogeneous in alpha).
bool repair_functional(const CrossingSystem& sys, Functional& f) {
  const long Lam = sys.Lambda;
  auto clampv = [&](std::vector<Rat>& v, long m) {
    if (v[m] > 0) v[m] = 0;
  };
  switch (sys.mode) {
    case SystemMode::LinPro0:
      for (long m = 0; 2 * m <= Lam; ++m) clampv(f.alpha[0], 2 * m);
      break;
    case SystemMode::Sdp1:
    case SystemMode::Sdp2: {
      for (long m = 0; 2 * m <= Lam; ++m) clampv(f.alpha[0], 2 * m);
      if (sys.mode == SystemMode::Sdp1)
        for (long m = 0; 2 * m <= Lam; ++m) clampv(f.alpha[1], 2 * m);
      // pair condition: push alpha3 down when needed
      for (long m = 0; m <= Lam; ++m) {
        Rat v = f.alpha[2][m] + ((m % 2) ? -f.alpha[3][m] : f.alpha[3][m]);
        if (v > 0) f.alpha[2][m] -= v;
      }
      if (sys.mode == SystemMode::Sdp2) {
        Rat S4 = combo_at(sys.F[3], f.alpha[3], sys.discrete_lambda());
        for (long m = 0; 2 * m <= Lam; ++m) {
          Rat v = f.alpha[1][2 * m] - (m == 0 ? S4 : Rat(0));
          if (v > 0) f.alpha[1][2 * m] -= v;
        }
      }
      break;
    }
    case SystemMode::Sdp3: {
      Rat S6 = combo_at(sys.F[3], f.alpha[5], sys.discrete_lambda());
      Rat ratio = Rat(sys.ell_half + 1, sys.ell_n);
      for (long m = 0; 2 * m <= Lam; ++m) {
        Rat v = f.alpha[0][2 * m] + f.alpha[1][2 * m];
        if (v > 0) f.alpha[0][2 * m] -= v;
      }
      for (long m = 0; 2 * m <= Lam; ++m) {
        Rat v = f.alpha[2][2 * m] + f.alpha[3][2 * m] - (m == 0 ? ratio * S6 : Rat(0));
        if (v > 0) f.alpha[2][2 * m] -= v;
      }
      for (long m = 0; 2 * m + 1 <= Lam; ++m) {
        Rat v = f.alpha[1][2 * m + 1] - f.alpha[0][2 * m + 1];
        if (v > 0) f.alpha[0][2 * m + 1] += v;
      }
      for (long m = 0; 2 * m + 1 <= Lam; ++m) {
        Rat v = f.alpha[3][2 * m + 1] - f.alpha[2][2 * m + 1];
        if (v > 0) f.alpha[2][2 * m + 1] += v;
      }
      for (long m = 0; m <= Lam; ++m) {
        Rat v = f.alpha[4][m] + ((m % 2) ? -f.alpha[5][m] : f.alpha[5][m]);
        if (v > 0) f.alpha[4][m] -= v;
      }
      break;
    }
  }
  // exact normalization by homogeneous rescaling
  Rat norm;
  switch (sys.mode) {
    case SystemMode::LinPro0: norm = combo_at_zero(sys.F[1], f.alpha[0]); break;
    case SystemMode::Sdp1:
    case SystemMode::Sdp2:
      norm = combo_at_zero(sys.F[0], f.alpha[0]) + combo_at_zero(sys.F[1], f.alpha[1]) +
             combo_at_zero(sys.F[2], f.alpha[2]);
      break;
    case SystemMode::Sdp3:
      norm = combo_at_zero(sys.F[0], f.alpha[1]) + combo_at_zero(sys.F[1], f.alpha[3]) +
             combo_at_zero(sys.F[2], f.alpha[4]);
      break;
  }
  if (norm <= 0) return false;
  for (auto& v : f.alpha)
    for (auto& x : v) x /= norm;
  return true;
}

// Approximate violation points of a failing ray condition, used as
// cutting planes for the next LP round.
std::vector<std::pair<int, double>> violation_points(const CrossingSystem& sys,
                                                     const Functional& f, double l0, double lh,
                                                     const SearchOptions& opt) {
  std::vector<std::pair<int, double>> pts;
  auto scan_min = [&](const RationalPoly& q, double start, int family) {
    // cut at every negative local minimum; a failing polynomial usually
    // oscillates through a whole band, and plugging only the global dip
    // lets it migrate a few sample widths each round
    double span = opt.lambda_span_factor * sys.Lambda;
    const int K = 6000;
    std::vector<double> grid(K + 1), val(K + 1);
    for (int k = 0; k <= K; ++k) {
      grid[k] = start + span * 0.5 * (1.0 - std::cos(M_PI * k / K));
      val[k] = q.eval_double(grid[k]);
    }
    for (int k = 1; k < K; ++k) {
      if (val[k] < 0 && val[k] <= val[k - 1] && val[k] <= val[k + 1]) {
        double width = std::max(grid[k + 1] - grid[k - 1], 1e-6);
        for (int j = -2; j <= 2; ++j) pts.push_back({family, std::max(start, grid[k] + j * width / 3)});
      }
    }
    if (val[K] < 0) pts.push_back({family, grid[K]});
  };
  switch (sys.mode) {
    case SystemMode::LinPro0:
      scan_min(combo(sys.F[1], f.alpha[0]), l0, 0);
      break;
    case SystemMode::Sdp1:
    case SystemMode::Sdp2: {
      RationalPoly D1 = combo(sys.F[0], f.alpha[0]);
      RationalPoly D2 = combo(sys.F[1], f.alpha[1]);
      RationalPoly off = Rat(1, 2) * combo(sys.F[2], f.alpha[2]);
      scan_min(D1, l0, 0);
      scan_min(D2, l0, 0);
      scan_min(D1 * D2 - off * off, l0, 0);
      scan_min(combo(sys.F[3], f.alpha[3]), lh, 1);
      break;
    }
    case SystemMode::Sdp3: {
      std::vector<Rat> t7(sys.Lambda + 1), t8(sys.Lambda + 1);
      for (long m = 0; m <= sys.Lambda; ++m) {
        t7[m] = f.alpha[0][m] - f.alpha[1][m] / sys.ell_n;
        t8[m] = f.alpha[2][m] - f.alpha[3][m] / sys.ell_half;
      }
      scan_min(combo(sys.F[0], t7), l0, 0);
      scan_min(combo(sys.F[1], t8), l0, 0);
      RationalPoly D1 = combo(sys.F[0], f.alpha[1]);
      RationalPoly D2 = combo(sys.F[1], f.alpha[3]);
      RationalPoly off = Rat(1, 2) * combo(sys.F[2], f.alpha[4]);
      scan_min(D1, l0, 0);
      scan_min(D2, l0, 0);
      scan_min(D1 * D2 - off * off, l0, 0);
      scan_min(combo(sys.F[3], f.alpha[5]), lh, 1);
      break;
    }
  }
  return pts;
}

}  // namespace

std::optional<Certificate> search_certificate(const CrossingSystem& sys, const Rat& lambda0_star,
                                              const Rat& lambda_half_star,
                                              const SearchOptions& opt) {
  double l0 = to_double(lambda0_star), lh = to_double(lambda_half_star);
  // Start with a strict margin so the candidate sits well inside the cone;
  // relax only when the sampled LP itself turns infeasible.
  for (double margin : {1e-3, 1e-4, 1e-5}) {
    if (margin < opt.margin_min) break;
    SearchOptions o = opt;
    o.margin_min = margin;
    std::vector<std::pair<int, double>> extra;
    for (int round = 0; round <= opt.max_refine_rounds; ++round) {
      auto cand = lp_search(sys, l0, lh, o, extra);
      if (!cand) break;  // infeasible at this margin: relax
      Functional f = rationalize_functional(*cand, opt.denominator_bits);
      if (!repair_functional(sys, f)) break;
      Certificate cert = verify(sys, f, lambda0_star, lambda_half_star);
      if (cert.accepted) return cert;
      auto pts = violation_points(sys, f, l0, lh, opt);
      if (pts.empty()) break;  // rejection without a float witness
      extra.insert(extra.end(), pts.begin(), pts.end());
    }
  }
  return std::nullopt;
}

BisectResult bisect_bound(const CrossingSystem& sys, BisectAxis axis, const Rat& fixed_other,
                          double lo, double hi, double tol, const SearchOptions& opt) {
  BisectResult out;
  auto probe = [&](double value) -> std::optional<Certificate> {
    Rat v = rationalize(value, Int(1000000));
    ++out.probes;
    if (axis == BisectAxis::Lambda0) return search_certificate(sys, v, fixed_other, opt);
    return search_certificate(sys, fixed_other, v, opt);
  };
  auto cert = probe(hi);
  if (!cert) return out;
  out.verified = true;
  out.value = hi;
  out.certificate = *cert;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    auto c = probe(mid);
    if (c) {
      hi = mid;
      out.value = mid;
      out.certificate = *c;
    } else {
      lo = mid;
    }
  }
  return out;
}

HyperellipticBound analytic_hyperelliptic_bound(long genus) {
  if (genus < 3) throw std::invalid_argument("analytic_hyperelliptic_bound: need genus >= 3");
  HyperellipticBound out;
  out.ell = (genus + 1) / 2;
  out.bound = Rat(out.ell, out.ell - 1);
  // m = 0 and m = 1 identities of the weight-(1/2,...) channel with n = 1;
  // the combination (1/2, -1) eliminates the constant and exhibits the
  // coefficients lambda (on Q^2) and lambda (ell-1)/ell - 1 (on T).
  WeightQuad w = quad_hhhh(Rat(1));
  RationalPoly F0 = F_poly(0, w);
  RationalPoly F1 = F_poly(1, w);
  Rat c0(1, 2), c1(-1);
  Rat constant = c0 * F0.at(0) + c1 * F1.at(0);
  out.q_square_coeff = c0 * F0 + c1 * F1;
  Rat ell(out.ell);
  out.t_coeff = (c0 * -(1 + 1 / ell)) * F0 + (c1 * (1 - 1 / ell)) * F1;

  RationalPoly expected_q = RationalPoly::variable();
  RationalPoly expected_t = Rat((out.ell - 1), 1) / ell * RationalPoly::variable() -
                            RationalPoly::constant(Rat(1));
  out.verified = (constant == 0) && (out.q_square_coeff == expected_q) &&
                 (out.t_coeff == expected_t) &&
                 check_nonneg_on_ray(out.t_coeff, out.bound).nonneg &&
                 out.t_coeff.eval(out.bound) == 0;
  return out;
}

// ---- certificate files -----------------------------------------------------

void save_certificate(const Certificate& cert, const std::string& path) {
  json j;
  j["system"] = {{"mode", mode_name(cert.mode)},
                 {"n", cert.n},
                 {"Lambda", cert.Lambda},
                 {"ell_n", cert.ell_n},
                 {"ell_half", cert.ell_half}};
  j["lambda0_star"] = rat_str(cert.lambda0_star);
  j["lambda_half_star"] = rat_str(cert.lambda_half_star);
  json alpha = json::array();
  for (const auto& vec : cert.functional.alpha) {
    json v = json::array();
    for (const auto& x : vec) v.push_back(rat_str(x));
    alpha.push_back(v);
  }
  j["alpha"] = alpha;
  json tr = json::array();
  for (const auto& r : cert.transcript)
    tr.push_back({{"condition_id", r.id},
                  {"kind", r.kind},
                  {"result", r.ok ? "pass" : "fail"},
                  {"detail", r.detail}});
  j["transcript"] = tr;
  j["accepted"] = cert.accepted;
  j["conclusion"] = cert.conclusion;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_certificate: cannot write " + path);
  out << j.dump(1) << "\n";
}

Certificate load_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_certificate: cannot read " + path);
  json j = json::parse(in);
  Certificate cert;
  cert.mode = mode_from_name(j["system"]["mode"]);
  cert.n = j["system"]["n"];
  cert.Lambda = j["system"]["Lambda"];
  cert.ell_n = j["system"]["ell_n"];
  cert.ell_half = j["system"]["ell_half"];
  cert.lambda0_star = rat_parse(j["lambda0_star"]);
  cert.lambda_half_star = rat_parse(j["lambda_half_star"]);
  for (const auto& vec : j["alpha"]) {
    std::vector<Rat> v;
    for (const auto& x : vec) v.push_back(rat_parse(x.get<std::string>()));
    cert.functional.alpha.push_back(std::move(v));
  }
  for (const auto& t : j["transcript"])
    cert.transcript.push_back(
        {t["condition_id"], t["kind"], t["result"] == "pass", t["detail"]});
  cert.accepted = j["accepted"];
  cert.conclusion = j["conclusion"];
  return cert;
}

Certificate replay_certificate(const std::string& path) {
  Certificate stored = load_certificate(path);
  CrossingSystem sys = assemble(stored.mode, stored.n, stored.Lambda, stored.ell_n,
                                stored.ell_half);
  Certificate fresh = verify(sys, stored.functional, stored.lambda0_star,
                             stored.lambda_half_star);
  if (fresh.accepted != stored.accepted ||
      fresh.transcript.size() != stored.transcript.size())
    throw std::runtime_error("replay_certificate: transcript does not reproduce");
  for (size_t i = 0; i < fresh.transcript.size(); ++i)
    if (fresh.transcript[i].ok != stored.transcript[i].ok ||
        fresh.transcript[i].id != stored.transcript[i].id)
      throw std::runtime_error("replay_certificate: condition " + fresh.transcript[i].id +
                               " does not reproduce");
  return fresh;
}

}  // namespace spinspec
