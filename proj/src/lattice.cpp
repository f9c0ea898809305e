#include "elat/lattice.hpp"

namespace elat {

GramMatrix::GramMatrix(QMat entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("Gram matrix must be square");
  for (std::size_t i = 0; i < m_.rows(); ++i)
    for (std::size_t j = i + 1; j < m_.cols(); ++j)
      if (m_(i, j) != m_(j, i)) throw std::invalid_argument("Gram matrix must be symmetric");
}

Rat inner_product(const GramMatrix& g, const LatticeVector& x, const LatticeVector& y) {
  if (x.size() != g.dim() || y.size() != g.dim())
    throw std::invalid_argument("inner_product: vector dimension mismatch");
  Rat s(0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    Rat row(0);
    for (std::size_t j = 0; j < y.size(); ++j)
      if (y[j] != 0) row += g(i, j) * y[j];
    s += x[i] * row;
  }
  return s;
}

LatticeVector reflect(const GramMatrix& g, const LatticeVector& x, const LatticeVector& e) {
  if (inner_product(g, e, e) != -2)
    throw std::invalid_argument("reflect: center must have square -2");
  const Rat c = inner_product(g, x, e);
  LatticeVector y = x;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += c * e[i];
  return y;
}

Definiteness classify_definiteness(const GramMatrix& g) {
  const Inertia in = inertia_of(g.entries());
  Definiteness d;
  if (in.positive == 0 && in.zero == 0) {
    d.kind = DefinitenessKind::NegativeDefinite;
  } else if (in.positive == 0) {
    d.kind = DefinitenessKind::NegativeSemidefinite;
    d.corank = in.zero;
  } else if (in.negative > 0) {
    d.kind = DefinitenessKind::Indefinite;
  } else {
    d.kind = DefinitenessKind::Other;
  }
  return d;
}

Rat lattice_determinant(const GramMatrix& g) { return determinant(g.entries()); }

std::vector<LatticeVector> kernel_basis(const GramMatrix& g) {
  return kernel_basis_of(g.entries());
}

std::vector<Int> smith_invariants(const GramMatrix& g) {
  const std::size_t n = g.dim();
  ZMat m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Rat& x = g(i, j);
      if (denominator(x) != 1)
        throw std::invalid_argument("smith_invariants: non-integer entry");
      m(i, j) = numerator(x);
    }
  return smith_normal_form(m);
}

}  // namespace elat
