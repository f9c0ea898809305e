// Integral lattice primitives: Gram matrices, pairings, (-2)-reflections,
// definiteness classification, determinant, kernel, Smith invariants.
#pragma once

#include <cstddef>
#include <vector>

#include "elat/matrix.hpp"
#include "elat/rational.hpp"

namespace elat {

using LatticeVector = QVec;

class GramMatrix {
 public:
  GramMatrix() = default;
  explicit GramMatrix(QMat entries);

  std::size_t dim() const { return m_.rows(); }
  const QMat& entries() const { return m_; }
  const Rat& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

 private:
  QMat m_;
};

Rat inner_product(const GramMatrix& g, const LatticeVector& x, const LatticeVector& y);

// Reflection in a root of square -2:  x + (x,e)*e.
LatticeVector reflect(const GramMatrix& g, const LatticeVector& x, const LatticeVector& e);

enum class DefinitenessKind {
  NegativeDefinite,
  NegativeSemidefinite,
  Indefinite,
  Other,
};

struct Definiteness {
  DefinitenessKind kind = DefinitenessKind::Other;
  std::size_t corank = 0;  // meaningful for NegativeSemidefinite only

  bool operator==(const Definiteness&) const = default;
};

Definiteness classify_definiteness(const GramMatrix& g);

Rat lattice_determinant(const GramMatrix& g);

std::vector<LatticeVector> kernel_basis(const GramMatrix& g);

// Smith invariants of an integer Gram matrix; throws on non-integer entries.
std::vector<Int> smith_invariants(const GramMatrix& g);

}  // namespace elat
