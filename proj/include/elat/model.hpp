// The rank-10 hyperbolic lattice model: ten tetrahedral curve classes spanning
// the coordinate lattice, six conic-pair classes solved from prescribed
// pairings, four non-effective reflection centers, and the degree form H.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "elat/lattice.hpp"

namespace elat {

enum class Family { EVertex, EEdge, F, G };

// Configuration tag used in census reports.
enum class Configuration { TenA, SixB, FourC };

struct RootLabel {
  Family family = Family::EVertex;
  int i = 0;  // 1-based; for pair labels i < j
  int j = 0;

  std::string name() const;
  Configuration configuration() const;
  bool operator==(const RootLabel&) const = default;
};

inline constexpr int kNumClasses = 20;
inline constexpr int kNumCurves = 16;
inline constexpr int kRank = 10;

class EnriquesModel {
 public:
  // Construction happens through build_model() or model_from_json().
  EnriquesModel(std::array<RootLabel, kNumClasses> labels,
                std::vector<LatticeVector> classes, GramMatrix gram10,
                GramMatrix gram20, LatticeVector h);

  const std::array<RootLabel, kNumClasses>& labels() const { return labels_; }
  const RootLabel& label(int idx) const { return labels_.at(static_cast<std::size_t>(idx)); }
  const LatticeVector& class_vector(int idx) const { return classes_.at(static_cast<std::size_t>(idx)); }
  const LatticeVector& class_vector(const std::string& name) const;
  int index_of(const std::string& name) const;  // -1 if unknown

  const GramMatrix& gram10() const { return gram10_; }
  const GramMatrix& gram20() const { return gram20_; }
  const LatticeVector& h() const { return h_; }

  Rat pairing(int a, int b) const { return gram20_(static_cast<std::size_t>(a), static_cast<std::size_t>(b)); }
  Rat degree(const LatticeVector& x) const { return inner_product(gram10_, x, h_); }

 private:
  std::array<RootLabel, kNumClasses> labels_;
  std::vector<LatticeVector> classes_;
  GramMatrix gram10_;
  GramMatrix gram20_;
  LatticeVector h_;
};

// Builds the model from the tetrahedral adjacency rule and the prescribed
// pairing tables, then cross-checks every table; throws on any failure.
EnriquesModel build_model();

struct TableCheck {
  std::string name;
  bool pass = false;
  std::string detail;  // first offending entry when failing
};

struct TableReport {
  bool pass = false;
  std::vector<TableCheck> checks;
};

TableReport verify_tables(const EnriquesModel& m);

// Index layout helpers (fixed class order: E1..E4, E12..E34, F12..F34, G1..G4).
int vertex_index(int i);              // E_i, i in 1..4
int edge_index(int i, int j);         // E_ij, 1 <= i < j <= 4
int conic_index(int i, int j);        // F_ij
int center_index(int i);              // G_i
std::optional<RootLabel> parse_label(const std::string& name);

// Applies an index permutation (perm[k] = image of k+1, 1-based values) to a
// label: E_i -> E_{p(i)}, E_ij -> E_{p(i)p(j)}, F likewise, G_i -> G_{p(i)}.
RootLabel permute_label(const RootLabel& l, const std::array<int, 4>& perm);

// A finite-index sublattice of the rank-10 ambient space, described by a
// Hermite-form basis. Coordinates are exact; membership tests are integral.
struct Sublattice {
  ZMat basis2;   // rows: doubled ambient coordinates of the basis vectors
  ZMat gram;     // Gram matrix in this basis (integral)
  std::vector<LatticeVector> basis;  // ambient rational coordinates

  std::size_t rank() const { return basis2.rows(); }
  // Integral coordinates of x in this basis; nullopt when x is not a member.
  std::optional<std::vector<Int>> coords(const LatticeVector& x) const;
  LatticeVector from_coords(const std::vector<Int>& c) const;
};

// Lattice generated by the vectors of the given class indices.
Sublattice span_of_classes(const EnriquesModel& m, const std::vector<int>& idxs);

// Lattice generated by all 16 curve classes.
Sublattice curve_lattice(const EnriquesModel& m);

// The even unimodular overlattice: curve lattice plus half the eight-cycle
// class H - E13 - E24. Construction is checked (even, determinant -1).
Sublattice ambient_even_unimodular(const EnriquesModel& m);

struct LatticeInvariants {
  std::size_t rank = 0;
  std::vector<Int> smith;  // invariants of the Gram in a lattice basis
  Rat det;                 // determinant of that Gram
};

LatticeInvariants curve_lattice_invariants(const EnriquesModel& m,
                                           const std::vector<int>& idxs);

// JSON serialization; the golden artifact in data/ is produced by this.
std::string model_to_json(const EnriquesModel& m);
// Parses without enforcing table invariants (verify_tables reports on them).
EnriquesModel model_from_json(const std::string& text);

}  // namespace elat
