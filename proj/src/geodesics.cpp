#include <spinspec/geodesics.hpp>
#include <spinspec/sha256.hpp>

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>
#include <unordered_map>

namespace spinspec {

namespace {

using json = nlohmann::ordered_json;

// Dedup store over the double cover: quantized-key hash with neighbor-cell
// probing near grid boundaries, exact re-check at matched keys.
class ElementSet {
 public:
  explicit ElementSet(double grid) : grid_(grid) {}

  // Returns the index of g, inserting it when new; `inserted` reports which.
  int find_or_insert(const GroupElement& g, std::vector<GroupElement>& store, bool* inserted) {
    double vals[4] = {g.a.real(), g.a.imag(), g.b.real(), g.b.imag()};
    std::int64_t base[4];
    int wobble[4] = {0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) {
      double q = vals[i] / grid_;
      base[i] = std::llround(q);
      double frac = q - base[i];
      if (frac > 0.5 - 1e-3) wobble[i] = +1;
      else if (frac < -0.5 + 1e-3) wobble[i] = -1;
    }
    // Probe the base cell plus boundary-adjacent neighbors.
    for (int mask = 0; mask < 16; ++mask) {
      ElementKey k;
      bool valid = true;
      for (int i = 0; i < 4; ++i) {
        int off = (mask >> i) & 1;
        if (off && wobble[i] == 0) { valid = false; break; }
        k.q[i] = base[i] + (off ? wobble[i] : 0);
      }
      if (!valid) continue;
      auto it = map_.find(k);
      if (it != map_.end() && approx_equal(store[it->second], g, 4 * grid_)) {
        *inserted = false;
        return it->second;
      }
    }
    int idx = (int)store.size();
    store.push_back(g);
    ElementKey k;
    for (int i = 0; i < 4; ++i) k.q[i] = base[i];
    map_.emplace(k, idx);
    *inserted = true;
    return idx;
  }

  int find(const GroupElement& g, const std::vector<GroupElement>& store) const {
    double vals[4] = {g.a.real(), g.a.imag(), g.b.real(), g.b.imag()};
    std::int64_t base[4];
    int wobble[4] = {0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) {
      double q = vals[i] / grid_;
      base[i] = std::llround(q);
      double frac = q - base[i];
      if (frac > 0.5 - 1e-3) wobble[i] = +1;
      else if (frac < -0.5 + 1e-3) wobble[i] = -1;
    }
    for (int mask = 0; mask < 16; ++mask) {
      ElementKey k;
      bool valid = true;
      for (int i = 0; i < 4; ++i) {
        int off = (mask >> i) & 1;
        if (off && wobble[i] == 0) { valid = false; break; }
        k.q[i] = base[i] + (off ? wobble[i] : 0);
      }
      if (!valid) continue;
      auto it = map_.find(k);
      if (it != map_.end() && approx_equal(store[it->second], g, 4 * grid_)) return it->second;
    }
    return -1;
  }

 private:
  double grid_;
  std::unordered_map<ElementKey, int, ElementKeyHash> map_;
};

std::string canonical_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::vector<GroupElement> enumerate_translates(const SurfaceModel& model,
                                               const SpinStructure& spin, double L,
                                               const EnumerationOptions& opt,
                                               EnumerationMeta* meta) {
  if (L <= 0) throw std::invalid_argument("enumerate_translates: cutoff must be positive");
  auto t0 = std::chrono::steady_clock::now();
  const double R = model.dirichlet_radius;
  const double threshold = 2.0 * std::acosh(std::cosh(R) * std::cosh(L / 2));

  std::vector<GroupElement> alphabet;
  for (const auto& w : model.side_pairing) alphabet.push_back(model.lifted_word(w, spin));

  double slack = std::max(0.0, opt.slack);
  const double amax_keep = std::cosh((threshold + slack) / 2) + 1e-12;
  const double amax = std::cosh(threshold / 2) + 1e-12;  // |a| cut for d(0, g 0) <= threshold

  std::vector<GroupElement> store;
  ElementSet set(opt.tol.dedup_grid);
  bool inserted = false;
  set.find_or_insert(GroupElement{}, store, &inserted);

  EnumerationMeta m;
  std::vector<int> frontier = {0};
  const int threads = std::max(1, opt.threads);
  while (!frontier.empty()) {
    // Expand the frontier in parallel chunks; merge preserves frontier order
    // so the result is independent of the thread count.
    std::vector<std::vector<GroupElement>> produced(threads);
    auto work = [&](int t) {
      size_t lo = frontier.size() * t / threads, hi = frontier.size() * (t + 1) / threads;
      for (size_t i = lo; i < hi; ++i) {
        GroupElement base = store[frontier[i]];
        for (const auto& a : alphabet) produced[t].push_back(compose(base, a));
      }
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
      for (auto& th : pool) th.join();
    }
    std::vector<int> next;
    for (auto& chunk : produced) {
      for (auto& g : chunk) {
        ++m.words_expanded;
        if (std::abs(g.a) > amax_keep) continue;
        int idx = set.find_or_insert(g, store, &inserted);
        if (inserted) next.push_back(idx);
      }
    }
    if (store.size() > opt.tile_budget)
      throw ResourceError("enumerate_translates: tile budget exceeded");
    frontier = std::move(next);
  }
  std::vector<GroupElement> out;
  out.reserve(store.size());
  for (const auto& g : store)
    if (std::abs(g.a) <= amax) out.push_back(g);
  m.tiles = out.size();
  m.complete = true;
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (meta) *meta = m;
  return out;
}

std::vector<EllipticClassData> elliptic_classes(const SurfaceModel& model,
                                                const SpinStructure& spin) {
  std::vector<EllipticClassData> out;
  for (const auto& cone : model.cone_points) {
    GroupElement gen = model.lifted_word(cone.word, spin);
    GroupElement pw;
    for (int j = 1; j < cone.order; ++j) {
      pw = compose(pw, gen);
      EllipticClassData e;
      e.theta = M_PI * j / cone.order;
      e.order = cone.order;
      e.chi = pw.trace() >= 0 ? +1 : -1;
      e.count_convention = 1;
      out.push_back(e);
    }
  }
  return out;
}

GeodesicSpectrum hyperbolic_classes(const SurfaceModel& model, const SpinStructure& spin,
                                    double L, const EnumerationOptions& opt) {
  GeodesicSpectrum spec;
  spec.surface_id = model.id;
  spec.spin_label = spin.label;
  spec.cutoff = L;
  spec.dirichlet_radius = model.dirichlet_radius;
  spec.base_point = model.base_point;
  spec.elliptic = elliptic_classes(model, spin);

  const double R = model.dirichlet_radius;
  const Tolerances& tol = opt.tol;
  // Conjugator ball: the quoted cosh(l/4) radius misses minimal conjugators
  // in practice ([0;3,3,5] systole pairs need 1.571 against a 1.273 bound);
  // sliding the conjugator along the axis by centralizer powers gives the
  // sound radius 2R + l/2. Use the larger of the two, and enumerate far
  // enough that the ball is available.
  auto conj_bound = [&](double len) {
    return std::max(2 * std::acosh(std::cosh(R) * std::cosh(len / 4)), 2 * R + len / 2) + 1e-9;
  };
  double L_enum = L;
  {
    double need = std::cosh(R + L / 4) / std::cosh(R);
    if (need > std::cosh(L / 2)) L_enum = 2 * std::acosh(need) + 1e-9;
  }
  std::vector<GroupElement> T = enumerate_translates(model, spin, L_enum, opt, &spec.meta);

  // Hyperbolic translates whose axis passes within R of the base point.
  struct Member {
    GroupElement g;
    double abstr;
    double length;
  };
  std::vector<Member> members;
  for (const auto& g : T) {
    double abstr = std::abs(g.trace());
    if (abstr <= 2 + tol.eps_class) continue;
    double len = 2 * std::acosh(abstr / 2);
    if (len > L + 1e-10) continue;
    if (axis_distance(g, cplx(0, 0), tol) > R + 1e-9) continue;
    members.push_back({g, abstr, len});
  }
  std::sort(members.begin(), members.end(),
            [](const Member& x, const Member& y) { return x.abstr < y.abstr; });

  // Conjugator balls are reused across groups of equal length.
  std::vector<std::pair<double, GroupElement>> by_disp;
  for (const auto& g : T) by_disp.push_back({std::abs(g.a), g});
  std::sort(by_disp.begin(), by_disp.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });

  size_t i = 0;
  std::vector<ConjugacyClass> classes;
  while (i < members.size()) {
    size_t j = i + 1;
    while (j < members.size() && members[j].abstr - members[j - 1].abstr <= tol.eps_trace) ++j;
    // group [i, j): same |trace| within tolerance
    double len = members[i].length;
    double conj_amax = std::cosh(conj_bound(len) / 2);  // |a| bound for conjugators
    std::vector<Member> group(members.begin() + i, members.begin() + j);

    // bucket index of the group members for orbit lookups; matching is
    // up-to-sign with explicit re-checks, so key collisions are harmless
    std::unordered_map<ElementKey, std::vector<int>, ElementKeyHash> buckets;
    for (size_t k = 0; k < group.size(); ++k) {
      buckets[element_key(group[k].g, tol.dedup_grid)].push_back((int)k);
      buckets[element_key(group[k].g.negated(), tol.dedup_grid)].push_back((int)k);
    }
    auto find_members = [&](const GroupElement& g) {
      std::vector<int> hits;
      double vals[4] = {g.a.real(), g.a.imag(), g.b.real(), g.b.imag()};
      std::int64_t base[4];
      int wobble[4] = {0, 0, 0, 0};
      for (int d = 0; d < 4; ++d) {
        double q = vals[d] / tol.dedup_grid;
        base[d] = std::llround(q);
        double frac = q - base[d];
        if (frac > 0.5 - 1e-3) wobble[d] = +1;
        else if (frac < -0.5 + 1e-3) wobble[d] = -1;
      }
      for (int mask = 0; mask < 16; ++mask) {
        ElementKey key;
        bool valid = true;
        for (int d = 0; d < 4; ++d) {
          int off = (mask >> d) & 1;
          if (off && wobble[d] == 0) { valid = false; break; }
          key.q[d] = base[d] + (off ? wobble[d] : 0);
        }
        if (!valid) continue;
        auto it = buckets.find(key);
        if (it == buckets.end()) continue;
        for (int idx : it->second)
          if (approx_equal_up_to_sign(group[idx].g, g, 1e-8)) hits.push_back(idx);
      }
      return hits;
    };

    std::vector<int> owner(group.size(), -1);
    for (size_t k = 0; k < group.size(); ++k) {
      if (owner[k] >= 0) continue;
      owner[k] = (int)k;
      for (const auto& [disp_a, tau] : by_disp) {
        if (disp_a > conj_amax + 1e-12) break;
        GroupElement conj = compose(compose(tau, group[k].g), tau.inverse());
        for (int member : find_members(conj))
          if (owner[member] < 0) owner[member] = (int)k;
      }
    }

    // Each orbit representative becomes one conjugacy class.
    size_t classes_before = classes.size();
    for (size_t k = 0; k < group.size(); ++k) {
      if (owner[k] != (int)k) continue;
      ConjugacyClass c;
      c.representative = group[k].g;
      c.length = group[k].length;
      c.primitive_length = c.length;
      c.winding = 1;
      c.chi = group[k].g.trace() >= 0 ? +1 : -1;
      // chi must be a class function: verify across the orbit
      for (size_t mbr = 0; mbr < group.size(); ++mbr)
        if (owner[mbr] == (int)k && ((group[mbr].g.trace() >= 0 ? 1 : -1) != c.chi))
          throw AmbiguityError("hyperbolic_classes: trace sign varies inside a class");
      classes.push_back(c);
    }

    // Several classes inside one trace group are fine (inverse pairs), but
    // only when their traces genuinely coincide: a spread well above float
    // noise yet inside the grouping width means eps_trace is too loose.
    if (classes.size() - classes_before > 1) {
      double span = group.back().abstr - group.front().abstr;
      if (span > 0.05 * tol.eps_trace)
        throw AmbiguityError("hyperbolic_classes: equal-length group spans " +
                             std::to_string(span) + "; tighten eps_trace");
    }
    i = j;
  }

  std::sort(classes.begin(), classes.end(),
            [](const ConjugacyClass& a, const ConjugacyClass& b) { return a.length < b.length; });

  // Winding: test whether a representative is conjugate to a power of a
  // shorter class; largest power wins, giving the primitive length.
  for (size_t c = 0; c < classes.size(); ++c) {
    double len = classes[c].length;
    double conj_amax = std::cosh(conj_bound(len) / 2);
    int best_k = 1;
    size_t best_src = c;
    for (size_t s = 0; s < c && best_k == 1; ++s) {
      if (classes[s].length <= 0) continue;
      double ratio = len / classes[s].length;
      int k = (int)std::lround(ratio);
      if (k < 2 || std::abs(ratio - k) > 1e-6) continue;
      GroupElement pw;
      for (int t = 0; t < k; ++t) pw = compose(pw, classes[s].representative);
      // conjugate (up to sign) to our representative?
      for (const auto& [disp_a, tau] : by_disp) {
        if (disp_a > conj_amax + 1e-12) break;
        GroupElement conj = compose(compose(tau, pw), tau.inverse());
        if (approx_equal_up_to_sign(conj, classes[c].representative, 1e-7)) {
          // signs must in fact agree: both live in the spin lift
          if (!approx_equal(conj, classes[c].representative, 1e-7))
            throw AmbiguityError("hyperbolic_classes: power conjugate only up to sign");
          best_k = k * classes[s].winding;
          best_src = s;
          break;
        }
      }
    }
    if (best_k > 1) {
      classes[c].winding = best_k;
      classes[c].primitive_length = classes[best_src].primitive_length;
    }
  }
  spec.classes = std::move(classes);
  return spec;
}

// --------------------------------------------------------------------------
// cache file: JSON with fixed key order; sha256 over the serialization of
// everything except the checksum itself.

namespace {

json spectrum_body(const GeodesicSpectrum& s) {
  json j;
  j["format_version"] = 1;
  j["surface"] = s.surface_id;
  j["spin"] = s.spin_label;
  j["L"] = canonical_double(s.cutoff);
  j["R"] = canonical_double(s.dirichlet_radius);
  j["base_point"] = {canonical_double(s.base_point.real()), canonical_double(s.base_point.imag())};
  json cl = json::array();
  for (const auto& c : s.classes) {
    json e;
    e["len"] = canonical_double(c.length);
    e["len0"] = canonical_double(c.primitive_length);
    e["winding"] = c.winding;
    e["chi"] = c.chi;
    e["rep"] = {canonical_double(c.representative.a.real()),
                canonical_double(c.representative.a.imag()),
                canonical_double(c.representative.b.real()),
                canonical_double(c.representative.b.imag())};
    cl.push_back(e);
  }
  j["classes"] = cl;
  json el = json::array();
  for (const auto& e : s.elliptic) {
    json x;
    x["theta"] = canonical_double(e.theta);
    x["order"] = e.order;
    x["chi"] = e.chi;
    x["convention"] = e.count_convention;
    el.push_back(x);
  }
  j["elliptic"] = el;
  return j;
}

}  // namespace

void save_spectrum(const GeodesicSpectrum& spec, const std::string& path) {
  json j = spectrum_body(spec);
  j["sha256"] = Sha256::of(j.dump());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_spectrum: cannot write " + path);
  out << j.dump(1) << "\n";
}

GeodesicSpectrum load_spectrum(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_spectrum: cannot read " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const std::exception& e) {
    throw std::runtime_error("load_spectrum: parse failure in " + path + ": " + e.what());
  }
  if (!j.contains("format_version") || j["format_version"] != 1)
    throw std::runtime_error("load_spectrum: unsupported format version in " + path);
  std::string stored = j["sha256"];
  json body = j;
  body.erase("sha256");
  if (Sha256::of(body.dump()) != stored)
    throw std::runtime_error("load_spectrum: checksum mismatch in " + path);

  GeodesicSpectrum s;
  s.surface_id = j["surface"];
  s.spin_label = j["spin"];
  s.cutoff = std::stod(j["L"].get<std::string>());
  s.dirichlet_radius = std::stod(j["R"].get<std::string>());
  s.base_point = cplx(std::stod(j["base_point"][0].get<std::string>()),
                      std::stod(j["base_point"][1].get<std::string>()));
  for (const auto& e : j["classes"]) {
    ConjugacyClass c;
    c.length = std::stod(e["len"].get<std::string>());
    c.primitive_length = std::stod(e["len0"].get<std::string>());
    c.winding = e["winding"];
    c.chi = e["chi"];
    c.representative =
        GroupElement{cplx(std::stod(e["rep"][0].get<std::string>()),
                          std::stod(e["rep"][1].get<std::string>())),
                     cplx(std::stod(e["rep"][2].get<std::string>()),
                          std::stod(e["rep"][3].get<std::string>()))};
    s.classes.push_back(c);
  }
  for (const auto& e : j["elliptic"]) {
    EllipticClassData x;
    x.theta = std::stod(e["theta"].get<std::string>());
    x.order = e["order"];
    x.chi = e["chi"];
    x.count_convention = e["convention"];
    s.elliptic.push_back(x);
  }
  s.meta.complete = true;
  return s;
}

GeodesicSpectrum load_spectrum_checked(const std::string& path, const std::string& surface_id,
                                       const std::string& spin_label, double min_cutoff) {
  GeodesicSpectrum s = load_spectrum(path);
  if (s.surface_id != surface_id || s.spin_label != spin_label)
    throw std::runtime_error("load_spectrum: cache identity mismatch (" + s.surface_id + "/" +
                             s.spin_label + " vs requested " + surface_id + "/" + spin_label +
                             ")");
  if (s.cutoff < min_cutoff - 1e-12)
    throw std::runtime_error("load_spectrum: cached cutoff too small");
  return s;
}

}  // namespace spinspec
