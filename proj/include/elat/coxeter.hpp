// Coxeter diagram machinery for the 20 reflective classes: enumeration of
// negative-semidefinite subdiagrams, affine type recognition, the maximal
// parabolic census, the finite-volume criterion, and diagram automorphisms.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "elat/model.hpp"

namespace elat {

// Edge-weighted diagram on the classes: weight(a,b) is the pairing between
// the two (-2)-classes, always 0, 1 or 2 here.
class CoxeterDiagram {
 public:
  static CoxeterDiagram from_model(const EnriquesModel& m);

  CoxeterDiagram(std::vector<std::string> names, std::vector<Configuration> tags,
                 std::vector<std::vector<int>> weights);

  // Diagram induced on a subset of vertices (indices into this diagram).
  CoxeterDiagram induced(const std::vector<int>& vertices) const;

  int size() const { return static_cast<int>(names_.size()); }
  int weight(int a, int b) const {
    return weights_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }
  Configuration tag(int v) const { return tags_[static_cast<std::size_t>(v)]; }
  const std::string& name(int v) const { return names_[static_cast<std::size_t>(v)]; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::vector<Configuration> tags_;
  std::vector<std::vector<int>> weights_;
};

// Fraction-free semidefiniteness of the form restricted to a subset.
struct SubsetShape {
  bool semidefinite = false;
  int corank = 0;  // dimension of the kernel when semidefinite
};
SubsetShape subset_shape(const CoxeterDiagram& d, const std::vector<int>& s);
bool is_negative_semidefinite(const CoxeterDiagram& d, const std::vector<int>& s);

struct ComponentType {
  char series = 'A';  // 'A', 'D' or 'E' (affine)
  int rank = 0;
  std::string to_string() const { return std::string(1, series) + std::to_string(rank) + "~"; }
  auto operator<=>(const ComponentType&) const = default;
};

struct ParabolicSubdiagram {
  std::vector<int> vertices;                 // sorted diagram indices
  std::vector<std::vector<int>> components;  // sorted; ordered by (rank desc, type)
  std::vector<ComponentType> types;          // parallel to components
  std::array<int, 3> census{};               // vertex counts in 10A / 6B / 4C
  int rank = 0;                              // sum of affine component ranks
  std::string type_string;                   // e.g. "E7~+A1~"
  int family_index = 0;                      // 1..5 for the known rank-8 families
};

// All negative-semidefinite subsets (sorted vertex lists, lexicographic).
std::vector<std::vector<int>> enumerate_semidefinite_subsets(const CoxeterDiagram& d);
// Reference implementation: scans all 2^n subsets (n <= 25 enforced).
std::vector<std::vector<int>> enumerate_semidefinite_subsets_naive(const CoxeterDiagram& d);
// Same scan split over OpenMP threads (0 = library default), same output.
std::vector<std::vector<int>> enumerate_semidefinite_subsets_parallel(const CoxeterDiagram& d,
                                                                      int threads = 0);

// Classifies the subset as a parabolic subdiagram (every connected component
// affine); nullopt when it is not. Throws when the template classification
// and the exact-kernel cross-check disagree.
std::optional<ParabolicSubdiagram> analyze_parabolic(const CoxeterDiagram& d,
                                                     const std::vector<int>& s);

// Inclusion-maximal parabolic subdiagrams, canonically ordered
// (rank descending, family index, vertex list).
std::vector<ParabolicSubdiagram> maximal_parabolics(const CoxeterDiagram& d);

struct FiniteVolumeReport {
  bool finite_volume = false;
  int target_rank = 0;
  std::vector<ParabolicSubdiagram> rank_target;  // parabolics of the target rank
  // Each connected affine subdiagram with the index (into rank_target) of a
  // parabolic having it as a component, or -1 when none exists.
  std::vector<std::pair<std::vector<int>, int>> witnesses;
};

// Finite-volume criterion: every connected affine subdiagram must occur as a
// component of a parabolic subdiagram of the target rank.
FiniteVolumeReport check_finite_volume(const CoxeterDiagram& d, int target_rank);

// All vertex permutations preserving the weight matrix.
std::vector<std::vector<int>> diagram_automorphisms(const CoxeterDiagram& d);

}  // namespace elat
