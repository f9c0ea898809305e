#include "elat/matrix.hpp"

#include <algorithm>
#include <cstdlib>

namespace elat {

Inertia inertia_of(const QMat& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("inertia_of: matrix not square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (a(i, j) != a(j, i)) throw std::invalid_argument("inertia_of: matrix not symmetric");

  QMat m = a;
  std::vector<std::size_t> act(n);
  for (std::size_t i = 0; i < n; ++i) act[i] = i;
  Inertia res;

  while (!act.empty()) {
    // Prefer a nonzero diagonal pivot among the active indices.
    std::size_t piv = act.size();
    for (std::size_t k = 0; k < act.size(); ++k)
      if (m(act[k], act[k]) != 0) { piv = k; break; }

    if (piv == act.size()) {
      // All active diagonal entries vanish. Any nonzero off-diagonal entry can
      // be pushed onto the diagonal by the congruence row_i += row_j.
      std::size_t bi = act.size(), bj = act.size();
      for (std::size_t k = 0; k < act.size() && bi == act.size(); ++k)
        for (std::size_t l = k + 1; l < act.size(); ++l)
          if (m(act[k], act[l]) != 0) { bi = k; bj = l; break; }
      if (bi == act.size()) {
        res.zero += act.size();
        break;
      }
      std::size_t i = act[bi], j = act[bj];
      for (std::size_t c = 0; c < n; ++c) m(i, c) += m(j, c);
      for (std::size_t r = 0; r < n; ++r) m(r, i) += m(r, j);
      piv = bi;
    }

    std::size_t p = act[piv];
    const Rat d = m(p, p);
    if (d > 0) ++res.positive; else ++res.negative;
    for (std::size_t k = 0; k < act.size(); ++k) {
      std::size_t r = act[k];
      if (r == p || m(r, p) == 0) continue;
      const Rat f = m(r, p) / d;
      for (std::size_t c = 0; c < n; ++c) m(r, c) -= f * m(p, c);
      for (std::size_t c = 0; c < n; ++c) m(c, r) -= f * m(c, p);
    }
    act.erase(act.begin() + static_cast<std::ptrdiff_t>(piv));
  }
  return res;
}

Rat determinant(const QMat& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("determinant: matrix not square");
  QMat m = a;
  Rat det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t r = c; r < n; ++r)
      if (m(r, c) != 0) { piv = r; break; }
    if (piv == n) return Rat(0);
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m(r, c) == 0) continue;
      const Rat f = m(r, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return det;
}

QVec solve_linear(const QMat& a, const QVec& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("solve_linear: matrix not square");
  if (b.size() != n) throw std::invalid_argument("solve_linear: size mismatch");
  QMat m(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = a(i, j);
    m(i, n) = b[i];
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t r = c; r < n; ++r)
      if (m(r, c) != 0) { piv = r; break; }
    if (piv == n) throw std::invalid_argument("solve_linear: singular matrix");
    if (piv != c)
      for (std::size_t j = 0; j <= n; ++j) std::swap(m(piv, j), m(c, j));
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m(r, c) == 0) continue;
      const Rat f = m(r, c) / m(c, c);
      for (std::size_t j = c; j <= n; ++j) m(r, j) -= f * m(c, j);
    }
  }
  QVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = m(i, n) / m(i, i);
  return x;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(QMat& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = m.rows();
    for (std::size_t i = r; i < m.rows(); ++i)
      if (m(i, c) != 0) { piv = i; break; }
    if (piv == m.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
    const Rat d = m(r, c);
    for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) /= d;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      const Rat f = m(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t rank_of(const QMat& a) {
  QMat m = a;
  return rref(m).size();
}

std::vector<QVec> kernel_basis_of(const QMat& a) {
  QMat m = a;
  const std::vector<std::size_t> pivots = rref(m);
  std::vector<bool> is_pivot(a.cols(), false);
  for (std::size_t c : pivots) is_pivot[c] = true;

  std::vector<QVec> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    QVec v(a.cols(), Rat(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, free);

    Int lcm = 1;
    for (const Rat& x : v) lcm = boost::multiprecision::lcm(lcm, denominator(x));
    Int gcd = 0;
    std::vector<Int> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      w[i] = numerator(v[i]) * (lcm / denominator(v[i]));
      gcd = boost::multiprecision::gcd(gcd, w[i]);
    }
    if (gcd == 0) gcd = 1;
    Int sign = 1;
    for (const Int& x : w)
      if (x != 0) { sign = (x > 0) ? 1 : -1; break; }
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = Rat(w[i] * sign, gcd);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Int> smith_normal_form(const ZMat& a) {
  ZMat m = a;
  const std::size_t rows = m.rows(), cols = m.cols();
  const std::size_t dim = std::min(rows, cols);
  std::vector<Int> diag(dim, Int(0));

  auto abs_int = [](const Int& x) { return x < 0 ? Int(-x) : x; };

  std::size_t t = 0;
  while (t < dim) {
    // Locate the smallest nonzero entry of the trailing submatrix.
    std::size_t bi = rows, bj = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (m(i, j) != 0 && (bi == rows || abs_int(m(i, j)) < abs_int(m(bi, bj)))) { bi = i; bj = j; }
    if (bi == rows) break;
    for (std::size_t j = 0; j < cols; ++j) std::swap(m(t, j), m(bi, j));
    for (std::size_t i = 0; i < rows; ++i) std::swap(m(i, t), m(i, bj));

    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (m(i, t) == 0) continue;
        Int q = m(i, t) / m(t, t);
        for (std::size_t j = 0; j < cols; ++j) m(i, j) -= q * m(t, j);
        if (m(i, t) != 0) {
          for (std::size_t j = 0; j < cols; ++j) std::swap(m(t, j), m(i, j));
          dirty = true;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (m(t, j) == 0) continue;
        Int q = m(t, j) / m(t, t);
        for (std::size_t i = 0; i < rows; ++i) m(i, j) -= q * m(i, t);
        if (m(t, j) != 0) {
          for (std::size_t i = 0; i < rows; ++i) std::swap(m(i, t), m(i, j));
          dirty = true;
        }
      }
      if (!dirty) {
        // Pivot must divide every remaining entry; fold a violator in and redo.
        for (std::size_t i = t + 1; i < rows && !dirty; ++i)
          for (std::size_t j = t + 1; j < cols && !dirty; ++j)
            if (m(i, j) % m(t, t) != 0) {
              for (std::size_t c = 0; c < cols; ++c) m(t, c) += m(i, c);
              dirty = true;
            }
      }
    }
    diag[t] = abs_int(m(t, t));
    ++t;
  }
  return diag;
}

ZMat hermite_normal_form(const ZMat& a) {
  ZMat m = a;
  const std::size_t rows = m.rows(), cols = m.cols();
  auto abs_int = [](const Int& x) { return x < 0 ? Int(-x) : x; };

  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    while (true) {
      std::size_t piv = rows;
      for (std::size_t i = r; i < rows; ++i)
        if (m(i, c) != 0 && (piv == rows || abs_int(m(i, c)) < abs_int(m(piv, c)))) piv = i;
      if (piv == rows) break;
      if (piv != r)
        for (std::size_t j = 0; j < cols; ++j) std::swap(m(piv, j), m(r, j));
      bool below = false;
      for (std::size_t i = r + 1; i < rows; ++i) {
        if (m(i, c) == 0) continue;
        Int q = m(i, c) / m(r, c);
        for (std::size_t j = 0; j < cols; ++j) m(i, j) -= q * m(r, j);
        if (m(i, c) != 0) below = true;
      }
      if (!below) break;
    }
    if (m(r, c) == 0) continue;
    if (m(r, c) < 0)
      for (std::size_t j = 0; j < cols; ++j) m(r, j) = -m(r, j);
    for (std::size_t i = 0; i < r; ++i) {
      Int q = m(i, c) / m(r, c);
      if (m(i, c) - q * m(r, c) < 0) --q;
      if (q != 0)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) -= q * m(r, j);
    }
    ++r;
  }

  ZMat out(r, cols);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = m(i, j);
  return out;
}

}  // namespace elat
