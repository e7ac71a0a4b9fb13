#pragma once

// Catalog of surface/orbifold models: lifted generators, spin structures,
// Dirichlet-domain data and topological invariants.

#include <spinspec/hyperbolic.hpp>
#include <string>
#include <vector>

namespace spinspec {

struct Signature {
  int genus = 0;
  std::vector<int> cone_orders;

  bool is_hyperbolic() const;
  bool spin_admissible() const;  // all cone orders odd
  double volume() const;         // Gauss-Bonnet
  std::string str() const;       // "[g; k1,...,kr]"
};

// A word in the model's generators: entries +i / -i mean generator i-1 or
// its inverse (1-based so the sign is readable).
using GenWord = std::vector<int>;

struct SpinStructure {
  std::vector<int> signs;  // one per free generator, +1 / -1
  std::string label;       // "+-+" bitstring over free generators
};

struct SurfaceModel {
  std::string id;
  Signature signature;

  std::vector<GroupElement> generators;  // reference lifts, sign-fixed
  std::vector<std::string> generator_names;
  std::vector<IsometryClass> generator_kinds;
  std::vector<int> free_generators;      // indices whose lift sign a spin structure may flip
  std::vector<GenWord> relations;        // must evaluate to +identity on a valid lift

  struct ConePoint {
    GenWord word;  // elliptic element generating the cone stabilizer
    int order;
  };
  std::vector<ConePoint> cone_points;

  cplx base_point{0, 0};
  double dirichlet_radius = 0;
  double volume = 0;
  bool foot_outside_edge_warning = false;

  // Dirichlet polygon of the base point: side-pairing alphabet (as words in
  // the generators) and polygon edges in disk coordinates, edge i paired by
  // alphabet letter edge_letter[i].
  std::vector<GenWord> side_pairing;
  std::vector<std::pair<cplx, cplx>> edges;
  std::vector<int> edge_letter;

  Tolerances tol;

  // Reference-lift evaluation of a word.
  GroupElement word_element(const GenWord& w) const;
  // Signed lift of generator i under a spin structure.
  GroupElement lifted_generator(int i, const SpinStructure& spin) const;
  GroupElement lifted_word(const GenWord& w, const SpinStructure& spin) const;
};

// Cataloged models. Construction computes the Dirichlet polygon of the base
// point, the side-pairing alphabet and the maximin edge distance.
SurfaceModel triangle_group(int p, int q, int r);
SurfaceModel bolza();
SurfaceModel torus_one_three();

// Resolve "triangle:p,q,r" | "bolza" | "torus13sym".
SurfaceModel surface_by_id(const std::string& id);

// All sign vectors on the free generators whose lifts satisfy every relation
// with value +identity.
std::vector<SpinStructure> spin_structures(const SurfaceModel& model);
SpinStructure spin_by_label(const SurfaceModel& model, const std::string& label);

// Riemann-Roch multiplicity: number of weight-n holomorphic modular forms.
long riemann_roch(const Signature& sig, long n);

// Hitchin bound on the number of harmonic spinors: floor((g+1)/2).
long harmonic_spinor_cap(long genus);

// Maximin edge distance R(D) over the stored Dirichlet polygon.
double maximin_edge_distance(const SurfaceModel& model, bool* foot_warning = nullptr);

// Dirichlet polygon of the origin for the group generated by `letters`
// (evaluated reference elements), found by clipping in the Klein model.
// Returns edges, the index of the letter pairing each edge, and the list of
// candidate words per active letter.
struct DirichletPolygon {
  std::vector<std::pair<cplx, cplx>> edges_klein;
  std::vector<int> active_candidate;  // per edge: index into the candidate list
  bool closed = false;                // polygon compact and inside the disk
};
DirichletPolygon dirichlet_polygon(const std::vector<GroupElement>& candidates);

}  // namespace spinspec
