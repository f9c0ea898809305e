// Orbit machinery: degree-descending reduction through the four center
// reflections, classification of (-2)-classes onto the sixteen curve orbits,
// classification of isotropic classes onto the 29 pencil rays with fiber and
// Mordell-Weil data, bounded exact vector enumeration, and finite-ball
// verification of the dual-graph characterizations.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "elat/coxeter.hpp"
#include "elat/group.hpp"
#include "elat/model.hpp"

namespace elat {

enum class ReductionVerdict { InFundamentalDomain, DegreeNonPositive };

struct ReductionResult {
  LatticeVector representative;
  // Letters in application order: applying them to the representative
  // (first letter first) recovers the input.
  std::vector<int> word;
  int steps = 0;
  ReductionVerdict verdict = ReductionVerdict::InFundamentalDomain;
};

// Degree descent: while (x,H) > 0 and some (x,G_i) < 0, apply the center
// reflection with the smallest such i. Errors when (x,H) < 0 on input;
// degree-zero inputs are legal (six curve classes have degree zero).
ReductionResult sigma_reduce(const LatticeVector& x, const EnriquesModel& m);

// The orbit invariant: pairings with the six degree-zero curve classes, in
// pair order 12, 13, 14, 23, 24, 34. Constant on reflection orbits and
// pairwise distinct on the sixteen curve classes.
std::array<Rat, 6> orbit_sextuple(const LatticeVector& x, const EnriquesModel& m);

enum class CurveVerdict { Curve, NegativeDegree, ReducedNotACurve };

struct CurveClassification {
  CurveVerdict verdict = CurveVerdict::ReducedNotACurve;
  std::optional<RootLabel> label;  // set iff verdict == Curve
  std::vector<int> word;           // reduction word (application order)
  LatticeVector representative;
  std::array<Rat, 6> sextuple{};
};

// Requires (x,x) == -2. Negative degree means not effective; otherwise the
// reduction lands on one of the sixteen curve classes or the class is not in
// a curve orbit.
CurveClassification classify_curve_class(const LatticeVector& x, const EnriquesModel& m);

struct FiberInfo {
  ComponentType type;
  int component_index = 0;   // into the parabolic diagram's component list
  int null_multiplier = 0;   // component kernel null vector == this * f
  bool contains_center = false;  // component touches the 4C configuration
  bool is_multiple = false;      // multiple fiber (effective class f, not 2f)
  LatticeVector fiber_class;     // effective fiber class (f or 2f)
};

struct PencilTypeData {
  int type_index = 0;  // 1..5, the five diagram families
  ParabolicSubdiagram diagram;
  LatticeVector half_fiber;      // f: primitive in the unimodular overlattice
  std::vector<FiberInfo> fibers; // all-4C components carry no fiber, dropped
  int mordell_weil_rank = 0;     // count of all-4C components
};

enum class PencilVerdict { Pencil, NotNefReduced, NoRayMatch };

struct PencilClassification {
  PencilVerdict verdict = PencilVerdict::NoRayMatch;
  int type_index = 0;                   // set iff verdict == Pencil
  std::optional<std::size_t> ray_index; // into OrbitContext::pencil_types
  bool input_multiple = false;          // input was twice the primitive class
  LatticeVector reduced;                // sigma-reduced primitive class
  std::vector<int> word;
  std::optional<RootLabel> witness;     // NotNefReduced: curve met negatively
};

// Precomputed classification context: the diagram, the curve lattice, its
// unimodular overlattice, and the 29 pencil rays in canonical order.
struct OrbitContext {
  EnriquesModel model;
  CoxeterDiagram diagram;
  Sublattice curves;    // lattice generated by the 16 curve classes
  Sublattice ambient;   // even unimodular overlattice
  std::vector<PencilTypeData> pencil_types;
};

OrbitContext build_orbit_context(const EnriquesModel& m);

// Requires x in the overlattice, x*x == 0, (x,H) > 0, content 1 or 2.
PencilClassification classify_pencil(const LatticeVector& x, const OrbitContext& ctx);

// All curve-lattice vectors with the given self-pairing (-2 or 0) and degree
// in (0, max_degree], in canonical order (degree, then coordinates).
std::vector<LatticeVector> enumerate_vectors(const OrbitContext& ctx, int norm,
                                             int max_degree, bool primitive_only);
// Same result computed with the outermost search level split across OpenMP
// threads (0 = library default).
std::vector<LatticeVector> enumerate_vectors_parallel(const OrbitContext& ctx, int norm,
                                                      int max_degree, bool primitive_only,
                                                      int threads = 0);

// Content of x in the given sublattice (gcd of its basis coordinates);
// nullopt when x is not a member.
std::optional<Int> lattice_content(const Sublattice& s, const LatticeVector& x);

struct CurveGraph {
  int max_word_len = 0;
  std::vector<LatticeVector> vertices;  // canonical order (degree, coords)
  std::vector<int> seed; // index (0..15) of the curve class whose orbit this is
  QMat weights;          // pairwise pairings
};

// Applies all reduced sigma-words up to the length bound to the sixteen
// curve classes and records the resulting finite weighted dual graph.
CurveGraph orbit_ball(const EnriquesModel& m, int max_word_len);

struct CharacterizationEntry {
  std::string vertex;       // curve class name
  std::string property;     // "I3_triangle", "I8_cycle", "IV*_end", "no_IV*_end"
  bool satisfied = false;
  std::vector<int> witness; // vertex indices in the ball (empty for none)
};

struct CharacterizationReport {
  bool all_pass = false;
  int ball_word_len = 0;
  std::vector<CharacterizationEntry> entries;
};

// Existence witnesses: a triangle (I3) through every conic class, an
// eight-cycle (I8) through every tetrahedral class, a IV* diagram ending at
// every vertex class; and bounded-ball evidence that no IV* ends at an edge
// class. Failures are report entries, not exceptions.
CharacterizationReport verify_orbit_characterizations(const CurveGraph& ball,
                                                      const EnriquesModel& m);

// Exact vector <-> text in the fixed basis: comma-separated rationals, or a
// signed sum of class labels like "E1+E12+F12" / "H-E13-E24".
std::string vector_to_string(const LatticeVector& x);
std::optional<LatticeVector> parse_vector(const std::string& text, const EnriquesModel& m);

}  // namespace elat
