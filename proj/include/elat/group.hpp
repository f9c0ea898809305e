// The automorphism group as a semidirect product: index permutations acting
// on the free product of the four center reflections. Elements are kept in
// normal form (permutation, reduced word) and act faithfully on the lattice.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "elat/model.hpp"

namespace elat {

struct Perm4 {
  std::array<int, 4> img{1, 2, 3, 4};  // img[k] = image of k+1 (1-based)

  static Perm4 identity() { return {}; }
  int operator()(int v) const { return img[static_cast<std::size_t>(v - 1)]; }
  bool is_identity() const { return img == std::array<int, 4>{1, 2, 3, 4}; }
  Perm4 compose(const Perm4& other) const;  // apply `other` first, then this
  Perm4 inverse() const;
  auto operator<=>(const Perm4&) const = default;
};

std::vector<Perm4> all_permutations();

// Normal form (perm, word): the word letters (values 1..4, adjacent letters
// distinct) apply left to right, then the permutation.
struct GroupElement {
  Perm4 perm;
  std::vector<int> word;
  bool operator==(const GroupElement&) const = default;
};

GroupElement identity_element();
GroupElement sigma_element(int i);
GroupElement perm_element(const Perm4& p);

// Validates letters and cancels adjacent equal letters until reduced.
GroupElement normal_form(const Perm4& perm, const std::vector<int>& raw_word);

// Group law with h applied first: (pi,u)*(rho,v) = (pi rho, v ++ rho^{-1}(u)).
GroupElement multiply(const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupElement& g);

// 10x10 integral matrix acting on coordinate columns: each sigma_i is the
// reflection in the center class G_i, the permutation permutes labels.
ZMat to_isometry(const GroupElement& g, const EnriquesModel& m);
ZMat reflection_matrix(const EnriquesModel& m, int class_index);
LatticeVector apply_isometry(const ZMat& iso, const LatticeVector& x);
bool is_isometry(const ZMat& iso, const EnriquesModel& m);
std::string isometry_key(const ZMat& iso);  // canonical string, for hashing

// The pairings between the center classes and the sixteen curve classes are
// all even (hypothesis of the semidirect-product decomposition).
bool check_parity(const EnriquesModel& m);

// Image of a word over the 20 reflection generators (given as class indices
// in application order) under the projection onto the free product: curve
// reflections die, center reflections survive as sigma letters.
// Requires check_parity; empty image means kernel membership.
GroupElement project_to_W4C(const EnriquesModel& m, const std::vector<int>& reflection_word);

// All reduced words of length <= max_len over the four letters.
std::vector<std::vector<int>> reduced_words_up_to(int max_len);

// Text forms. Permutations use cycle notation "(1 2)(3 4)" or "id"; words
// are space-separated "s1 s2"; reflection words mix "s1" and class labels
// prefixed with r, e.g. "rE1 s4 rE1".
std::string perm_to_string(const Perm4& p);
std::optional<Perm4> parse_perm(const std::string& text);
std::string word_to_string(const std::vector<int>& word);
std::optional<std::vector<int>> parse_sigma_word(const std::string& text);
std::string element_to_string(const GroupElement& g);
std::optional<std::vector<int>> parse_reflection_word(const EnriquesModel& m,
                                                      const std::string& text);

}  // namespace elat
