// Diagram machinery: affine recognition on known shapes, the maximal
// parabolic census, oracle agreement between the pruned and exhaustive
// enumerations, the finite-volume criterion and diagram automorphisms.
#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "elat/coxeter.hpp"
#include "elat/group.hpp"

using namespace elat;

namespace {

const EnriquesModel& model() {
  static EnriquesModel m = build_model();
  return m;
}

const CoxeterDiagram& diagram() {
  static CoxeterDiagram d = CoxeterDiagram::from_model(model());
  return d;
}

std::vector<int> indices_of(const std::vector<std::string>& names) {
  std::vector<int> out;
  for (const auto& n : names) {
    int k = model().index_of(n);
    REQUIRE(k >= 0);
    out.push_back(k);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("diagram weights are the pairings and stay within {0,1,2}") {
  const auto& d = diagram();
  REQUIRE(d.size() == kNumClasses);
  for (int a = 0; a < d.size(); ++a) {
    CHECK(d.weight(a, a) == 0);
    for (int b = 0; b < d.size(); ++b) {
      CHECK(d.weight(a, b) == d.weight(b, a));
      if (a != b) {
        CHECK(d.weight(a, b) >= 0);
        CHECK(d.weight(a, b) <= 2);
        CHECK(Rat(d.weight(a, b)) == model().pairing(a, b));
      }
    }
  }
  CHECK_THROWS(CoxeterDiagram({"a", "b"}, {Configuration::TenA, Configuration::TenA},
                              {{0, 3}, {3, 0}}));
}

TEST_CASE("affine shape recognition on hand-built subsets") {
  const auto& d = diagram();
  auto hexagon = indices_of({"E1", "E12", "E2", "E23", "E3", "E13"});
  auto p = analyze_parabolic(d, hexagon);
  REQUIRE(p.has_value());
  CHECK(p->type_string == "A5~");
  CHECK(p->rank == 5);
  CHECK(p->census == std::array<int, 3>{6, 0, 0});

  auto pair = analyze_parabolic(d, indices_of({"E12", "F12"}));
  REQUIRE(pair.has_value());
  CHECK(pair->type_string == "A1~");
  CHECK(pair->rank == 1);

  // A finite (negative definite) subset is not parabolic.
  CHECK(!analyze_parabolic(d, indices_of({"E1"})).has_value());
  CHECK(!analyze_parabolic(d, indices_of({"E1", "E12"})).has_value());
  // An indefinite subset is not parabolic either.
  std::vector<int> all(kNumClasses);
  for (int k = 0; k < kNumClasses; ++k) all[static_cast<std::size_t>(k)] = k;
  CHECK(!analyze_parabolic(d, all).has_value());
  // Affine plus an attached vertex is indefinite.
  auto seven = indices_of({"E1", "E12", "E2", "E23", "E3", "E13", "F23"});
  CHECK(!is_negative_semidefinite(d, seven));
}

TEST_CASE("subset shapes: corank counts kernel dimensions exactly") {
  const auto& d = diagram();
  SubsetShape hex = subset_shape(d, indices_of({"E1", "E12", "E2", "E23", "E3", "E13"}));
  CHECK(hex.semidefinite);
  CHECK(hex.corank == 1);
  CoxeterDiagram pairs({"a", "b", "c", "d"},
                       {Configuration::TenA, Configuration::TenA, Configuration::TenA,
                        Configuration::TenA},
                       {{0, 2, 0, 0}, {2, 0, 0, 0}, {0, 0, 0, 2}, {0, 0, 2, 0}});
  SubsetShape two = subset_shape(pairs, {0, 1, 2, 3});
  CHECK(two.semidefinite);
  CHECK(two.corank == 2);
  SubsetShape fin = subset_shape(d, indices_of({"E1", "E12", "E2"}));
  CHECK(fin.semidefinite);
  CHECK(fin.corank == 0);
  // Three mutually heavy vertices carry the positive vector (1,1,1).
  CHECK(!subset_shape(d, indices_of({"G1", "G2", "G3"})).semidefinite);
  // A single heavy pair is affine no matter which families it joins.
  SubsetShape eg = subset_shape(d, indices_of({"E1", "G1"}));
  CHECK(eg.semidefinite);
  CHECK(eg.corank == 1);
}

TEST_CASE("maximal parabolic census: 29 subdiagrams in five families") {
  auto maxp = maximal_parabolics(diagram());
  REQUIRE(maxp.size() == 29);
  std::map<std::string, int> mult;
  std::map<std::string, std::set<std::array<int, 3>>> censuses;
  for (const auto& p : maxp) {
    CHECK(p.rank == 8);
    mult[p.type_string] += 1;
    censuses[p.type_string].insert(p.census);
    int total = p.census[0] + p.census[1] + p.census[2];
    CHECK(total == static_cast<int>(p.vertices.size()));
  }
  CHECK(mult == std::map<std::string, int>{{"E7~+A1~", 12},
                                           {"E6~+A2~", 4},
                                           {"D6~+A1~+A1~", 6},
                                           {"A7~+A1~", 3},
                                           {"A5~+A2~+A1~", 4}});
  CHECK(censuses["E7~+A1~"] == std::set<std::array<int, 3>>{{8, 1, 1}});
  CHECK(censuses["E6~+A2~"] == std::set<std::array<int, 3>>{{7, 3, 0}});
  CHECK(censuses["D6~+A1~+A1~"] == std::set<std::array<int, 3>>{{8, 1, 2}});
  CHECK(censuses["A7~+A1~"] == std::set<std::array<int, 3>>{{8, 2, 0}});
  CHECK(censuses["A5~+A2~+A1~"] == std::set<std::array<int, 3>>{{7, 3, 1}});
}

TEST_CASE("the known eight-cycle with a heavy pair is among the 29") {
  auto want = indices_of({"E1", "E12", "E2", "E23", "E3", "E34", "E4", "E14", "F13", "F24"});
  auto maxp = maximal_parabolics(diagram());
  bool found = false;
  for (const auto& p : maxp) {
    if (p.vertices == want) {
      found = true;
      CHECK(p.type_string == "A7~+A1~");
      CHECK(p.census == std::array<int, 3>{8, 2, 0});
    }
  }
  CHECK(found);
}

TEST_CASE("pruned enumeration agrees with the exhaustive scan on random subdiagrams") {
  std::mt19937 rng(101);
  std::vector<int> all(kNumClasses);
  for (int k = 0; k < kNumClasses; ++k) all[static_cast<std::size_t>(k)] = k;
  for (int trial = 0; trial < 25; ++trial) {
    std::shuffle(all.begin(), all.end(), rng);
    std::size_t n = 5 + static_cast<std::size_t>(trial % 8);  // up to 12 vertices
    std::vector<int> subset(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n));
    std::sort(subset.begin(), subset.end());
    CoxeterDiagram sub = diagram().induced(subset);
    CHECK(enumerate_semidefinite_subsets(sub) == enumerate_semidefinite_subsets_naive(sub));
  }
}

TEST_CASE("parallel scan equals the serial scan on a fourteen-vertex subdiagram") {
  std::vector<int> subset;
  for (int k = 0; k < 14; ++k) subset.push_back(k);
  CoxeterDiagram sub = diagram().induced(subset);
  CHECK(enumerate_semidefinite_subsets_parallel(sub) == enumerate_semidefinite_subsets_naive(sub));
  CHECK(enumerate_semidefinite_subsets_parallel(sub, 2) ==
        enumerate_semidefinite_subsets_naive(sub));
}

TEST_CASE("finite-volume criterion holds with every affine subdiagram witnessed") {
  auto rep = check_finite_volume(diagram(), 8);
  CHECK(rep.finite_volume);
  CHECK(rep.target_rank == 8);
  CHECK(rep.rank_target.size() == 29);
  CHECK(rep.witnesses.size() == 68);
  for (const auto& [verts, witness] : rep.witnesses) {
    REQUIRE(witness >= 0);
    const auto& p = rep.rank_target[static_cast<std::size_t>(witness)];
    CHECK(std::find(p.components.begin(), p.components.end(), verts) != p.components.end());
  }
}

TEST_CASE("the ten degree-bearing classes alone do not satisfy the criterion") {
  std::vector<int> first_ten;
  for (int k = 0; k < 10; ++k) first_ten.push_back(k);
  CoxeterDiagram sub = diagram().induced(first_ten);
  auto rep = check_finite_volume(sub, 8);
  CHECK(!rep.finite_volume);
  CHECK(rep.rank_target.empty());
}

TEST_CASE("diagram automorphisms match the 24 index permutations") {
  auto autos = diagram_automorphisms(diagram());
  REQUIRE(autos.size() == 24);
  std::set<std::vector<int>> found(autos.begin(), autos.end());
  std::set<std::vector<int>> image;
  for (const auto& p : all_permutations()) {
    std::vector<int> perm(kNumClasses);
    for (int k = 0; k < kNumClasses; ++k) {
      perm[static_cast<std::size_t>(k)] =
          model().index_of(permute_label(model().label(k), p.img).name());
    }
    image.insert(std::move(perm));
  }
  CHECK(found == image);
}

TEST_CASE("automorphisms of a plain path are the two reversals") {
  CoxeterDiagram path({"a", "b", "c"},
                      {Configuration::TenA, Configuration::TenA, Configuration::TenA},
                      {{0, 1, 0}, {1, 0, 1}, {0, 1, 0}});
  auto autos = diagram_automorphisms(path);
  std::set<std::vector<int>> expect{{0, 1, 2}, {2, 1, 0}};
  CHECK(std::set<std::vector<int>>(autos.begin(), autos.end()) == expect);
}
