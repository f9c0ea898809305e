#include "elat/orbits.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace elat {

namespace {

Rat pair_with_center(const EnriquesModel& m, const LatticeVector& x, int i) {
  return inner_product(m.gram10(), x, m.class_vector(center_index(i)));
}

// floor(sqrt(p/q)) for a nonnegative rational.
Int floor_sqrt_rat(const Rat& r) {
  if (r < 0) throw std::invalid_argument("floor_sqrt_rat: negative input");
  Int p = numerator(r), q = denominator(r);
  Int pq = p * q;
  return boost::multiprecision::sqrt(pq) / q;
}

// ---------------------------------------------------------------------------
// Integer fast path for reduction and classification. Every class vector has
// half-integral coordinates, so for y = 2x all pairings are integer dot
// products: (x, class_k) = (y . u_k) / 4 with u_k = gram * (2 class_k).
// Reduction loops, nef tests and ray matches then run in 64-bit arithmetic.
// The exact rational code below remains the fallback for inputs outside this
// range (non-half-integral coordinates or oversized entries), so the public
// behaviour is unchanged.

using YVec = std::array<long long, kRank>;
constexpr long long kYLimit = 1LL << 40;

struct FastKit {
  bool ok = false;
  std::array<YVec, kRank> g{};         // the basis Gram matrix
  std::array<YVec, kNumClasses> cls2{};  // doubled class vectors
  std::array<YVec, kNumClasses + 1> u{};  // u[k] = g * cls2[k]; the last row is g * (2H)
};

bool fits_small(const Rat& r, long long& out) {
  if (denominator(r) != 1) return false;
  const Int& n = numerator(r);
  if (n > kYLimit || n < -kYLimit) return false;
  out = static_cast<long long>(n);
  return true;
}

std::optional<YVec> to_y(const LatticeVector& x) {
  YVec y{};
  for (std::size_t j = 0; j < static_cast<std::size_t>(kRank); ++j) {
    if (!fits_small(x[j] * 2, y[j])) return std::nullopt;
  }
  return y;
}

LatticeVector from_y(const YVec& y) {
  LatticeVector x(kRank);
  for (std::size_t j = 0; j < static_cast<std::size_t>(kRank); ++j) x[j] = Rat(y[j], 2);
  return x;
}

long long dot_y(const YVec& a, const YVec& b) {
  long long s = 0;
  for (std::size_t j = 0; j < static_cast<std::size_t>(kRank); ++j) s += a[j] * b[j];
  return s;
}

FastKit make_fast_kit(const EnriquesModel& m) {
  FastKit kit;
  for (std::size_t i = 0; i < static_cast<std::size_t>(kRank); ++i) {
    for (std::size_t j = 0; j < static_cast<std::size_t>(kRank); ++j) {
      if (!fits_small(m.gram10()(i, j), kit.g[i][j])) return kit;
    }
  }
  for (int k = 0; k < kNumClasses; ++k) {
    auto yk = to_y(m.class_vector(k));
    if (!yk) return kit;
    kit.cls2[static_cast<std::size_t>(k)] = *yk;
  }
  auto yh = to_y(m.h());
  if (!yh) return kit;
  for (std::size_t k = 0; k <= static_cast<std::size_t>(kNumClasses); ++k) {
    const YVec& src = k < static_cast<std::size_t>(kNumClasses) ? kit.cls2[k] : *yh;
    for (std::size_t i = 0; i < static_cast<std::size_t>(kRank); ++i) {
      kit.u[k][i] = dot_y(kit.g[i], src);
    }
  }
  kit.ok = true;
  return kit;
}

// Quadruple degree and center pairings: sign tests need no division.
long long deg4_of(const FastKit& kit, const YVec& y) { return dot_y(y, kit.u[kNumClasses]); }
long long center4_of(const FastKit& kit, const YVec& y, int i) {
  return dot_y(y, kit.u[static_cast<std::size_t>(15 + i)]);
}

struct FastReduction {
  bool ok = false;  // false: left the integer range, redo rationally
  YVec y{};
  std::vector<int> applied;
  bool in_domain = false;
};

FastReduction fast_sigma(const FastKit& kit, YVec y) {
  FastReduction out;
  while (deg4_of(kit, y) > 0) {
    int pick = 0;
    long long p4 = 0;
    for (int i = 1; i <= 4; ++i) {
      p4 = center4_of(kit, y, i);
      if (p4 < 0) {
        pick = i;
        break;
      }
    }
    if (pick == 0) break;
    if (p4 % 4 != 0) return out;  // non-integral pairing: leave to the rational path
    // Reflecting in G_pick adds 2*(y/2, G_pick) < 0 to the degree, so the
    // loop strictly descends and terminates.
    long long t = p4 / 4;
    const YVec& c2 = kit.cls2[static_cast<std::size_t>(15 + pick)];
    bool over = false;
    for (std::size_t j = 0; j < static_cast<std::size_t>(kRank); ++j) {
      y[j] += t * c2[j];
      if (y[j] > kYLimit || y[j] < -kYLimit) over = true;
    }
    if (over) return out;
    out.applied.push_back(pick);
  }
  out.in_domain = true;
  for (int i = 1; i <= 4; ++i) {
    if (center4_of(kit, y, i) < 0) out.in_domain = false;
  }
  out.y = y;
  out.ok = true;
  return out;
}

}  // namespace

ReductionResult sigma_reduce(const LatticeVector& x, const EnriquesModel& m) {
  if (x.size() != static_cast<std::size_t>(kRank)) {
    throw std::invalid_argument("sigma_reduce: need 10 coordinates");
  }
  if (FastKit kit = make_fast_kit(m); kit.ok) {
    if (auto y = to_y(x)) {
      if (deg4_of(kit, *y) < 0) throw std::invalid_argument("sigma_reduce: degree is negative");
      FastReduction fr = fast_sigma(kit, *y);
      if (fr.ok) {
        ReductionResult out;
        out.representative = from_y(fr.y);
        out.steps = static_cast<int>(fr.applied.size());
        out.verdict = fr.in_domain ? ReductionVerdict::InFundamentalDomain
                                   : ReductionVerdict::DegreeNonPositive;
        out.word.assign(fr.applied.rbegin(), fr.applied.rend());
        return out;
      }
    }
  }
  if (m.degree(x) < 0) throw std::invalid_argument("sigma_reduce: degree is negative");
  LatticeVector cur = x;
  std::vector<int> applied;
  while (m.degree(cur) > 0) {
    int pick = 0;
    for (int i = 1; i <= 4; ++i) {
      if (pair_with_center(m, cur, i) < 0) {
        pick = i;
        break;
      }
    }
    if (pick == 0) break;
    // Reflecting in G_pick adds 2*(cur,G_pick) < 0 to the degree, so the
    // loop strictly descends and terminates.
    cur = reflect(m.gram10(), cur, m.class_vector(center_index(pick)));
    applied.push_back(pick);
  }
  ReductionResult out;
  out.representative = cur;
  out.steps = static_cast<int>(applied.size());
  bool in_domain = true;
  for (int i = 1; i <= 4; ++i) {
    if (pair_with_center(m, cur, i) < 0) in_domain = false;
  }
  out.verdict = in_domain ? ReductionVerdict::InFundamentalDomain
                          : ReductionVerdict::DegreeNonPositive;
  // Recorded in application order: the last reflection applied during the
  // descent is the first one that rebuilds the input from the representative.
  out.word.assign(applied.rbegin(), applied.rend());
  return out;
}

std::array<Rat, 6> orbit_sextuple(const LatticeVector& x, const EnriquesModel& m) {
  std::array<Rat, 6> out;
  for (int k = 0; k < 6; ++k) {
    out[static_cast<std::size_t>(k)] = inner_product(m.gram10(), x, m.class_vector(4 + k));
  }
  return out;
}

CurveClassification classify_curve_class(const LatticeVector& x, const EnriquesModel& m) {
  if (x.size() == static_cast<std::size_t>(kRank)) {
    if (FastKit kit = make_fast_kit(m); kit.ok) {
      if (auto y0 = to_y(x)) {
        const YVec& y = *y0;
        YVec gy{};
        for (std::size_t i = 0; i < static_cast<std::size_t>(kRank); ++i) {
          gy[i] = dot_y(kit.g[i], y);
        }
        if (dot_y(y, gy) != -8) {  // 4 * (x, x)
          throw std::invalid_argument("classify_curve_class: self-pairing must be -2");
        }
        CurveClassification out;
        for (std::size_t k = 0; k < 6; ++k) out.sextuple[k] = Rat(dot_y(y, kit.u[4 + k]), 4);
        out.representative = x;
        if (deg4_of(kit, y) < 0) {
          out.verdict = CurveVerdict::NegativeDegree;
          return out;
        }
        FastReduction fr = fast_sigma(kit, y);
        if (fr.ok) {
          out.word.assign(fr.applied.rbegin(), fr.applied.rend());
          out.representative = from_y(fr.y);
          if (!fr.in_domain) {
            out.verdict = CurveVerdict::NegativeDegree;
            return out;
          }
          for (int k = 0; k < kNumCurves; ++k) {
            if (fr.y != kit.cls2[static_cast<std::size_t>(k)]) continue;
            out.verdict = CurveVerdict::Curve;
            out.label = m.label(k);
            for (std::size_t j = 0; j < 6; ++j) {
              if (dot_y(kit.cls2[static_cast<std::size_t>(k)], kit.u[4 + j]) !=
                  dot_y(y, kit.u[4 + j])) {
                throw std::logic_error("classify_curve_class: orbit invariant mismatch");
              }
            }
            return out;
          }
          out.verdict = CurveVerdict::ReducedNotACurve;
          return out;
        }
      }
    }
  }
  if (inner_product(m.gram10(), x, x) != -2) {
    throw std::invalid_argument("classify_curve_class: self-pairing must be -2");
  }
  CurveClassification out;
  out.sextuple = orbit_sextuple(x, m);
  out.representative = x;
  if (m.degree(x) < 0) {
    out.verdict = CurveVerdict::NegativeDegree;
    return out;
  }
  ReductionResult red = sigma_reduce(x, m);
  out.word = red.word;
  out.representative = red.representative;
  if (red.verdict == ReductionVerdict::DegreeNonPositive) {
    out.verdict = CurveVerdict::NegativeDegree;
    return out;
  }
  for (int k = 0; k < kNumCurves; ++k) {
    if (red.representative == m.class_vector(k)) {
      out.verdict = CurveVerdict::Curve;
      out.label = m.label(k);
      if (orbit_sextuple(m.class_vector(k), m) != out.sextuple) {
        throw std::logic_error("classify_curve_class: orbit invariant mismatch");
      }
      return out;
    }
  }
  out.verdict = CurveVerdict::ReducedNotACurve;
  return out;
}

std::optional<Int> lattice_content(const Sublattice& s, const LatticeVector& x) {
  auto c = s.coords(x);
  if (!c) return std::nullopt;
  Int g = 0;
  for (const Int& v : *c) g = boost::multiprecision::gcd(g, v);
  return boost::multiprecision::abs(g);
}

OrbitContext build_orbit_context(const EnriquesModel& m) {
  OrbitContext ctx{m, CoxeterDiagram::from_model(m), curve_lattice(m),
                   ambient_even_unimodular(m), {}};
  auto parabolics = maximal_parabolics(ctx.diagram);
  for (const auto& p : parabolics) {
    PencilTypeData data;
    data.diagram = p;
    data.type_index = p.family_index;

    // Null vector of each component: the one-dimensional kernel of its Gram,
    // with positive integer marks, pushed back to ambient coordinates.
    std::vector<LatticeVector> nulls;
    for (const auto& comp : p.components) {
      QMat g(comp.size(), comp.size());
      for (std::size_t a = 0; a < comp.size(); ++a) {
        for (std::size_t b = 0; b < comp.size(); ++b) {
          g(a, b) = m.pairing(comp[a], comp[b]);
        }
      }
      auto ker = kernel_basis_of(g);
      if (ker.size() != 1) throw std::logic_error("pencil data: component kernel not one-dimensional");
      LatticeVector n(kRank, Rat(0));
      for (std::size_t a = 0; a < comp.size(); ++a) {
        if (ker[0][a] <= 0) throw std::logic_error("pencil data: non-positive null marks");
        for (std::size_t c = 0; c < kRank; ++c) n[c] += ker[0][a] * m.class_vector(comp[a])[c];
      }
      nulls.push_back(std::move(n));
    }
    auto content = lattice_content(ctx.ambient, nulls[0]);
    if (!content || *content == 0) throw std::logic_error("pencil data: null vector outside the lattice");
    LatticeVector f(kRank);
    for (std::size_t c = 0; c < kRank; ++c) f[c] = nulls[0][c] / Rat(*content);

    // All component nulls must be small integer multiples of the primitive f.
    std::vector<int> mult;
    for (const auto& n : nulls) {
      std::size_t nz = 0;
      while (nz < kRank && f[nz] == 0) ++nz;
      if (nz == kRank) throw std::logic_error("pencil data: zero half-fiber");
      Rat q = n[nz] / f[nz];
      LatticeVector scaled(kRank);
      for (std::size_t c = 0; c < kRank; ++c) scaled[c] = q * f[c];
      if (scaled != n || denominator(q) != 1 || (numerator(q) != 1 && numerator(q) != 2)) {
        throw std::logic_error("pencil data: component null is not f or 2f");
      }
      mult.push_back(static_cast<int>(numerator(q)));
    }

    LatticeVector two_f(kRank);
    for (std::size_t c = 0; c < kRank; ++c) two_f[c] = 2 * f[c];
    for (std::size_t k = 0; k < p.components.size(); ++k) {
      bool any_center = false, all_center = true;
      for (int v : p.components[k]) {
        bool is_center = ctx.diagram.tag(v) == Configuration::FourC;
        any_center = any_center || is_center;
        all_center = all_center && is_center;
      }
      if (all_center) {
        // No effective fiber here: the classes are not effective. This is
        // exactly where the Mordell-Weil rank comes from.
        data.mordell_weil_rank += 1;
        continue;
      }
      FiberInfo fi;
      fi.type = p.types[k];
      fi.component_index = static_cast<int>(k);
      fi.null_multiplier = mult[k];
      fi.contains_center = any_center;
      // A component made of curves with null vector exactly f is a multiple
      // fiber. A mixed component's effective fiber is 2f (twice the sum of
      // its curve part and the center), hence never multiple.
      fi.is_multiple = !any_center && mult[k] == 1;
      fi.fiber_class = fi.is_multiple ? f : two_f;
      data.fibers.push_back(std::move(fi));
    }
    data.half_fiber = f;
    ctx.pencil_types.push_back(std::move(data));
  }
  return ctx;
}

namespace {

// Fast pencil classification on y = 2x. Ambient (the even unimodular
// overlattice) membership and content are read off the pairings with its
// basis: unimodularity makes "all pairings integral" equivalent to
// membership, and the gcd of the pairings equal to the gcd of the
// coordinates. Returns nullopt when the input leaves the 64-bit range.
std::optional<PencilClassification> classify_pencil_fast(const LatticeVector& x,
                                                         const OrbitContext& ctx) {
  const EnriquesModel& m = ctx.model;
  FastKit kit = make_fast_kit(m);
  if (!kit.ok) return std::nullopt;
  auto y0 = to_y(x);
  if (!y0) return std::nullopt;
  if (ctx.ambient.basis.size() != static_cast<std::size_t>(kRank)) return std::nullopt;
  std::array<YVec, kRank> w{};  // w[j] = gram * (2 b_j) for the ambient basis
  for (std::size_t j = 0; j < static_cast<std::size_t>(kRank); ++j) {
    auto b2 = to_y(ctx.ambient.basis[j]);
    if (!b2) return std::nullopt;
    for (std::size_t i = 0; i < static_cast<std::size_t>(kRank); ++i) {
      w[j][i] = dot_y(kit.g[i], *b2);
    }
  }
  const YVec& y = *y0;
  YVec gy{};
  for (std::size_t i = 0; i < static_cast<std::size_t>(kRank); ++i) gy[i] = dot_y(kit.g[i], y);
  if (dot_y(y, gy) != 0) {
    throw std::invalid_argument("classify_pencil: class is not isotropic");
  }
  long long content = 0;
  for (std::size_t j = 0; j < static_cast<std::size_t>(kRank); ++j) {
    long long t = dot_y(y, w[j]);
    if (t % 4 != 0) throw std::invalid_argument("classify_pencil: class is outside the lattice");
    content = std::gcd(content, t / 4);
  }
  if (content == 0) throw std::invalid_argument("classify_pencil: zero class");
  if (deg4_of(kit, y) <= 0) {
    throw std::invalid_argument("classify_pencil: degree must be positive");
  }
  if (content > 2) {
    throw std::invalid_argument("classify_pencil: content " + std::to_string(content) +
                                " exceeds 2 (not a pencil class)");
  }
  PencilClassification out;
  out.input_multiple = (content == 2);
  YVec yf{};
  for (std::size_t j = 0; j < static_cast<std::size_t>(kRank); ++j) {
    if (y[j] % content != 0) return std::nullopt;  // cannot happen for lattice members
    yf[j] = y[j] / content;
  }
  FastReduction fr = fast_sigma(kit, yf);
  if (!fr.ok) return std::nullopt;
  if (!fr.in_domain) {
    throw std::logic_error("classify_pencil: isotropic reduction left the positive cone");
  }
  out.reduced = from_y(fr.y);
  out.word.assign(fr.applied.rbegin(), fr.applied.rend());
  for (int k = 0; k < kNumCurves; ++k) {
    if (dot_y(fr.y, kit.u[static_cast<std::size_t>(k)]) < 0) {
      out.verdict = PencilVerdict::NotNefReduced;
      out.witness = m.label(k);
      return out;
    }
  }
  for (std::size_t idx = 0; idx < ctx.pencil_types.size(); ++idx) {
    const LatticeVector& hf = ctx.pencil_types[idx].half_fiber;
    bool match = true;
    for (std::size_t j = 0; j < static_cast<std::size_t>(kRank); ++j) {
      const Rat& r = hf[j];
      bool eq = denominator(r) == 1 ? numerator(r) * 2 == fr.y[j] : (denominator(r) == 2 && numerator(r) == fr.y[j]);
      if (!eq) {
        match = false;
        break;
      }
    }
    if (!match) continue;
    out.verdict = PencilVerdict::Pencil;
    out.ray_index = idx;
    out.type_index = ctx.pencil_types[idx].type_index;
    return out;
  }
  out.verdict = PencilVerdict::NoRayMatch;
  return out;
}

}  // namespace

PencilClassification classify_pencil(const LatticeVector& x, const OrbitContext& ctx) {
  const EnriquesModel& m = ctx.model;
  if (x.size() != static_cast<std::size_t>(kRank)) {
    throw std::invalid_argument("classify_pencil: need 10 coordinates");
  }
  if (auto fast = classify_pencil_fast(x, ctx)) return *fast;
  if (inner_product(m.gram10(), x, x) != 0) {
    throw std::invalid_argument("classify_pencil: class is not isotropic");
  }
  auto content = lattice_content(ctx.ambient, x);
  if (!content) throw std::invalid_argument("classify_pencil: class is outside the lattice");
  if (*content == 0) throw std::invalid_argument("classify_pencil: zero class");
  if (m.degree(x) <= 0) throw std::invalid_argument("classify_pencil: degree must be positive");
  if (*content > 2) {
    throw std::invalid_argument("classify_pencil: content " + content->str() +
                                " exceeds 2 (not a pencil class)");
  }
  PencilClassification out;
  out.input_multiple = (*content == 2);
  LatticeVector f0(kRank);
  for (std::size_t c = 0; c < kRank; ++c) f0[c] = x[c] / Rat(*content);
  ReductionResult red = sigma_reduce(f0, m);
  if (red.verdict != ReductionVerdict::InFundamentalDomain) {
    throw std::logic_error("classify_pencil: isotropic reduction left the positive cone");
  }
  out.reduced = red.representative;
  out.word = red.word;
  for (int k = 0; k < kNumCurves; ++k) {
    if (inner_product(m.gram10(), out.reduced, m.class_vector(k)) < 0) {
      out.verdict = PencilVerdict::NotNefReduced;
      out.witness = m.label(k);
      return out;
    }
  }
  for (std::size_t idx = 0; idx < ctx.pencil_types.size(); ++idx) {
    if (out.reduced == ctx.pencil_types[idx].half_fiber) {
      out.verdict = PencilVerdict::Pencil;
      out.ray_index = idx;
      out.type_index = ctx.pencil_types[idx].type_index;
      return out;
    }
  }
  out.verdict = PencilVerdict::NoRayMatch;
  return out;
}

namespace {

// --------------------------------------------------------------------------
// Bounded enumeration. Candidates live in the ellipsoid c^T B c <= bound of
// the positive-definite integer form B = w w^T - 2A (so that the value is
// deg^2 - 2 norm). Variables are fixed from the last coordinate down; the
// feasibility test for a partial assignment is the exact Schur complement of
// the still-free block. Each Schur complement becomes an integer matrix
// after scaling by the determinant of the eliminated block, so the whole
// search runs in 128-bit integer arithmetic. A one-time margin computation
// per call proves (with arbitrary-precision bounds) that no intermediate
// quantity can overflow; out-of-range requests are rejected up front.

using I128 = __int128;
using U128 = unsigned __int128;

int bit_length_u128(U128 v) {
  auto hi = static_cast<unsigned long long>(v >> 64);
  auto lo = static_cast<unsigned long long>(v);
  if (hi != 0) return 128 - __builtin_clzll(hi);
  if (lo != 0) return 64 - __builtin_clzll(lo);
  return 0;
}

U128 isqrt_u128(U128 v) {
  if (v == 0) return 0;
  U128 x = U128(1) << (bit_length_u128(v) / 2 + 1);
  for (;;) {
    U128 y = (x + v / x) >> 1;
    if (y >= x) break;
    x = y;
  }
  while (x * x > v) --x;
  while ((x + 1) * (x + 1) <= v) ++x;
  return x;
}

I128 floor_div_i128(I128 a, I128 b) {  // b > 0
  I128 q = a / b;
  if (a % b != 0 && a < 0) --q;
  return q;
}

constexpr std::size_t kFpRank = 10;

struct FpSetup {
  std::size_t n = 0;
  long long bound = 0;  // deg^2 - 2*norm at the degree cap
  long long norm = 0;
  long long max_degree = 0;
  bool primitive_only = false;
  std::array<long long, kFpRank> w{};  // degree functional in basis coordinates
  // Level k: integer Schur form m[k] (row-major, size (n-k) x (n-k)) on the
  // variables k..n-1 with scale q_k, i.e. (suffix^T m[k] suffix) / q_k is the
  // minimum of the full form over the free variables 0..k-1.
  std::array<std::vector<I128>, kFpRank> m;
  std::array<I128, kFpRank> qbound{};  // q_k * bound
};

FpSetup fp_setup(const OrbitContext& ctx, int norm, int max_degree, bool primitive_only) {
  if (norm != -2 && norm != 0) throw std::invalid_argument("enumerate_vectors: norm must be -2 or 0");
  if (max_degree < 1) throw std::invalid_argument("enumerate_vectors: max_degree must be positive");
  FpSetup fp;
  fp.n = ctx.curves.rank();
  if (fp.n != kFpRank) throw std::logic_error("enumerate_vectors: unexpected lattice rank");
  auto hc = ctx.curves.coords(ctx.model.h());
  if (!hc) throw std::logic_error("enumerate_vectors: degree form outside the curve lattice");
  for (std::size_t i = 0; i < fp.n; ++i) {
    Int wi = 0;
    for (std::size_t j = 0; j < fp.n; ++j) wi += ctx.curves.gram(i, j) * (*hc)[j];
    fp.w[i] = static_cast<long long>(wi);
  }
  fp.bound = static_cast<long long>(max_degree) * max_degree - 2 * norm;
  fp.norm = norm;
  fp.max_degree = max_degree;
  fp.primitive_only = primitive_only;

  QMat b(fp.n, fp.n);
  for (std::size_t i = 0; i < fp.n; ++i) {
    for (std::size_t j = 0; j < fp.n; ++j) {
      b(i, j) = Rat(Int(fp.w[i]) * Int(fp.w[j]) - 2 * ctx.curves.gram(i, j));
    }
  }

  // Exact per-coordinate bounds |c_k| <= sqrt(bound * (B^{-1})_kk), used only
  // to certify that the 128-bit arithmetic below cannot overflow.
  Rat det_b = determinant(b);
  if (det_b <= 0) throw std::logic_error("enumerate_vectors: search form is not positive definite");
  Int cmax_all = 0;
  for (std::size_t k = 0; k < fp.n; ++k) {
    QMat minor(fp.n - 1, fp.n - 1);
    for (std::size_t i = 0, ii = 0; i < fp.n; ++i) {
      if (i == k) continue;
      for (std::size_t j = 0, jj = 0; j < fp.n; ++j) {
        if (j == k) continue;
        minor(ii, jj) = b(i, j);
        ++jj;
      }
      ++ii;
    }
    Rat inv_kk = determinant(minor) / det_b;
    Int ck = floor_sqrt_rat(Rat(fp.bound) * inv_kk) + 1;
    cmax_all = std::max(cmax_all, ck);
  }

  // Successive Schur complements with exact rational elimination, then the
  // minimal integer scaling of each level.
  Int max_entry = 0, max_qb = 0;
  QMat g = b;
  for (std::size_t k = 0; k < fp.n; ++k) {
    std::size_t size = fp.n - k;
    Int q = 1;
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = 0; j < size; ++j) q = boost::multiprecision::lcm(q, denominator(g(i, j)));
    }
    std::vector<Int> scaled(size * size);
    Int gcd_all = q;
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = 0; j < size; ++j) {
        Rat v = g(i, j) * q;
        scaled[i * size + j] = numerator(v);
        gcd_all = boost::multiprecision::gcd(gcd_all, scaled[i * size + j]);
      }
    }
    if (gcd_all > 1) {
      q /= gcd_all;
      for (auto& v : scaled) v /= gcd_all;
    }
    if (scaled[0] <= 0) throw std::logic_error("enumerate_vectors: search form is not positive definite");
    fp.m[k].resize(size * size);
    Int qb = q * fp.bound;
    max_qb = std::max(max_qb, qb);
    const Int limit = Int(1) << 62;
    if (boost::multiprecision::abs(qb) >= limit) {
      throw std::invalid_argument("enumerate_vectors: degree bound exceeds the integer search range");
    }
    for (std::size_t e = 0; e < scaled.size(); ++e) {
      max_entry = std::max(max_entry, Int(boost::multiprecision::abs(scaled[e])));
      if (boost::multiprecision::abs(scaled[e]) >= limit) {
        throw std::invalid_argument("enumerate_vectors: degree bound exceeds the integer search range");
      }
      fp.m[k][e] = static_cast<I128>(static_cast<long long>(scaled[e]));
    }
    fp.qbound[k] = static_cast<I128>(static_cast<long long>(qb));
    if (size > 1) {
      // Eliminate the leading variable of this level.
      QMat next(size - 1, size - 1);
      const Rat& pivot = g(0, 0);
      for (std::size_t i = 1; i < size; ++i) {
        for (std::size_t j = 1; j < size; ++j) {
          next(i - 1, j - 1) = g(i, j) - g(0, i) * g(0, j) / pivot;
        }
      }
      g = std::move(next);
    }
  }

  // Certified margins: with |c| <= C and |entries| <= M, the linear form is
  // at most 9*M*C, the quadratic tail at most 81*M*C^2, the discriminant at
  // most beta^2 + M*(gamma + qb), and every range probe stays within C + 2.
  Int c_probe = cmax_all + 2;
  Int beta_max = Int(fp.n - 1) * max_entry * c_probe;
  Int gamma_max = Int((fp.n - 1) * (fp.n - 1)) * max_entry * c_probe * c_probe;
  Int disc_max = beta_max * beta_max + max_entry * (gamma_max + max_qb);
  Int eval_max = max_entry * c_probe * c_probe + 2 * beta_max * c_probe + gamma_max + max_qb;
  Int safe = Int(1) << 125;
  if (disc_max >= safe || eval_max >= safe) {
    throw std::invalid_argument("enumerate_vectors: degree bound exceeds the integer search range");
  }
  return fp;
}

using FpHit = std::pair<long long, std::array<long long, kFpRank>>;  // (degree, coordinates)

struct FpLevel {
  I128 alpha = 0, beta = 0, gamma = 0, qb = 0;
  long long lo = 0, hi = 0;
  bool empty = true;
};

// Range of the leading variable at this level given the fixed suffix: exact
// integer roots of alpha c^2 + 2 beta c + gamma <= q_k * bound, with the
// floor-sqrt endpoints corrected by direct evaluation.
FpLevel fp_level(const FpSetup& fp, std::size_t k, const std::array<long long, kFpRank>& c) {
  FpLevel lv;
  const std::size_t size = fp.n - k;
  const std::vector<I128>& m = fp.m[k];
  lv.alpha = m[0];
  lv.qb = fp.qbound[k];
  for (std::size_t j = 1; j < size; ++j) {
    I128 cj = c[k + j];
    if (cj == 0) continue;
    lv.beta += m[j] * cj;
    I128 row = 0;
    for (std::size_t i = 1; i < size; ++i) {
      if (c[k + i] != 0) row += m[i * size + j] * c[k + i];
    }
    lv.gamma += row * cj;
  }
  I128 disc = lv.beta * lv.beta - lv.alpha * (lv.gamma - lv.qb);
  if (disc < 0) return lv;
  auto value = [&lv](I128 x) { return lv.alpha * x * x + 2 * lv.beta * x + lv.gamma; };
  I128 s = static_cast<I128>(isqrt_u128(static_cast<U128>(disc)));
  I128 lo = floor_div_i128(-lv.beta - s, lv.alpha);
  I128 hi = floor_div_i128(-lv.beta + s, lv.alpha);
  while (value(hi + 1) <= lv.qb) ++hi;
  while (hi >= lo && value(hi) > lv.qb) --hi;
  while (value(lo - 1) <= lv.qb) --lo;
  while (lo <= hi && value(lo) > lv.qb) ++lo;
  if (lo > hi) return lv;
  lv.empty = false;
  lv.lo = static_cast<long long>(lo);
  lv.hi = static_cast<long long>(hi);
  return lv;
}

void fp_finalize(const FpSetup& fp, const std::array<long long, kFpRank>& c, I128 value,
                 std::vector<FpHit>& out) {
  long long deg = 0;
  for (std::size_t i = 0; i < fp.n; ++i) deg += c[i] * fp.w[i];
  if (deg <= 0 || deg > fp.max_degree) return;
  // value = deg^2 - 2*norm for the exact quadratic form.
  I128 twice_norm = static_cast<I128>(deg) * deg - value;
  if (twice_norm != 2 * static_cast<I128>(fp.norm)) return;
  if (fp.primitive_only) {
    long long g = 0;
    for (long long v : c) g = std::gcd(g, v);
    if (g != 1) return;
  }
  out.emplace_back(deg, c);
}

void fp_recurse(const FpSetup& fp, std::size_t k, std::array<long long, kFpRank>& c,
                std::vector<FpHit>& out) {
  FpLevel lv = fp_level(fp, k, c);
  if (lv.empty) return;
  for (long long u = lv.lo; u <= lv.hi; ++u) {
    c[k] = u;
    if (k == 0) {
      // Level 0 is the full form: its value is the evaluated quadratic.
      I128 value = lv.alpha * u * u + 2 * lv.beta * u + lv.gamma;
      fp_finalize(fp, c, value, out);
    } else {
      fp_recurse(fp, k - 1, c, out);
    }
  }
  c[k] = 0;
}

std::vector<LatticeVector> fp_collect(const OrbitContext& ctx, std::vector<FpHit>& hits) {
  std::vector<std::pair<long long, LatticeVector>> tagged;
  tagged.reserve(hits.size());
  std::vector<Int> coords(kFpRank);
  for (auto& [deg, c] : hits) {
    for (std::size_t i = 0; i < kFpRank; ++i) coords[i] = c[i];
    tagged.emplace_back(deg, ctx.curves.from_coords(coords));
  }
  std::sort(tagged.begin(), tagged.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first < y.first : x.second < y.second;
  });
  std::vector<LatticeVector> out;
  out.reserve(tagged.size());
  for (auto& [deg, v] : tagged) out.push_back(std::move(v));
  return out;
}

}  // namespace

std::vector<LatticeVector> enumerate_vectors(const OrbitContext& ctx, int norm,
                                             int max_degree, bool primitive_only) {
  FpSetup fp = fp_setup(ctx, norm, max_degree, primitive_only);
  std::vector<FpHit> hits;
  std::array<long long, kFpRank> c{};
  fp_recurse(fp, fp.n - 1, c, hits);
  return fp_collect(ctx, hits);
}

std::vector<LatticeVector> enumerate_vectors_parallel(const OrbitContext& ctx, int norm,
                                                      int max_degree, bool primitive_only,
                                                      int threads) {
  FpSetup fp = fp_setup(ctx, norm, max_degree, primitive_only);
  const std::size_t top = fp.n - 1;
  std::array<long long, kFpRank> c0{};
  FpLevel lv = fp_level(fp, top, c0);
  if (lv.empty) return {};
  std::vector<long long> candidates;
  for (long long u = lv.lo; u <= lv.hi; ++u) candidates.push_back(u);
  std::vector<std::vector<FpHit>> buckets(candidates.size());
#ifdef _OPENMP
  int t = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(t)
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    std::array<long long, kFpRank> c{};
    c[top] = candidates[k];
    fp_recurse(fp, top - 1, c, buckets[k]);
  }
#else
  (void)threads;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    std::array<long long, kFpRank> c{};
    c[top] = candidates[k];
    fp_recurse(fp, top - 1, c, buckets[k]);
  }
#endif
  std::vector<FpHit> hits;
  for (auto& b : buckets) {
    for (auto& h : b) hits.push_back(std::move(h));
  }
  return fp_collect(ctx, hits);
}

CurveGraph orbit_ball(const EnriquesModel& m, int max_word_len) {
  if (max_word_len < 0) throw std::invalid_argument("orbit_ball: negative word length");
  struct Node {
    LatticeVector v;
    int seed;
    int last;  // letter that produced it (0 for seeds)
  };
  std::map<LatticeVector, int> index;
  std::vector<Node> nodes;
  std::vector<int> frontier;
  for (int k = 0; k < kNumCurves; ++k) {
    nodes.push_back({m.class_vector(k), k, 0});
    index[m.class_vector(k)] = k;
    frontier.push_back(k);
  }
  for (int depth = 1; depth <= max_word_len; ++depth) {
    std::vector<int> next;
    for (int id : frontier) {
      for (int letter = 1; letter <= 4; ++letter) {
        if (letter == nodes[static_cast<std::size_t>(id)].last) continue;
        LatticeVector w = reflect(m.gram10(), nodes[static_cast<std::size_t>(id)].v,
                                  m.class_vector(center_index(letter)));
        if (index.count(w)) continue;
        int nid = static_cast<int>(nodes.size());
        index[w] = nid;
        nodes.push_back({std::move(w), nodes[static_cast<std::size_t>(id)].seed, letter});
        next.push_back(nid);
      }
    }
    frontier = std::move(next);
  }
  // Canonical vertex order: by degree, then coordinates.
  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    Rat da = m.degree(nodes[a].v), db = m.degree(nodes[b].v);
    return da != db ? da < db : nodes[a].v < nodes[b].v;
  });
  CurveGraph g;
  g.max_word_len = max_word_len;
  for (std::size_t k : order) {
    g.vertices.push_back(nodes[k].v);
    g.seed.push_back(nodes[k].seed);
  }
  const std::size_t v = g.vertices.size();
  g.weights = QMat(v, v);
  for (std::size_t a = 0; a < v; ++a) {
    for (std::size_t b = 0; b < v; ++b) {
      g.weights(a, b) = inner_product(m.gram10(), g.vertices[a], g.vertices[b]);
    }
  }
  return g;
}

namespace {

// Finds an induced copy of the pattern (full weight matrix, distinct
// vertices) with the anchor position pinned to the anchor vertex.
std::optional<std::vector<int>> find_induced_pattern(const CurveGraph& ball,
                                                     const std::vector<std::vector<int>>& pat,
                                                     int anchor_pos, int anchor_vertex) {
  const int kk = static_cast<int>(pat.size());
  const int vv = static_cast<int>(ball.vertices.size());
  // Assignment order: breadth-first from the anchor through pattern edges so
  // every new position is adjacent to an assigned one.
  std::vector<int> order{anchor_pos};
  std::vector<bool> in_order(static_cast<std::size_t>(kk), false);
  in_order[static_cast<std::size_t>(anchor_pos)] = true;
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (int p = 0; p < kk; ++p) {
      if (!in_order[static_cast<std::size_t>(p)] &&
          pat[static_cast<std::size_t>(order[head])][static_cast<std::size_t>(p)] != 0) {
        order.push_back(p);
        in_order[static_cast<std::size_t>(p)] = true;
      }
    }
  }
  for (int p = 0; p < kk; ++p) {
    if (!in_order[static_cast<std::size_t>(p)]) order.push_back(p);  // disconnected patterns
  }
  std::vector<int> assign(static_cast<std::size_t>(kk), -1);
  std::vector<bool> used(static_cast<std::size_t>(vv), false);
  assign[static_cast<std::size_t>(anchor_pos)] = anchor_vertex;
  used[static_cast<std::size_t>(anchor_vertex)] = true;
  auto rec = [&](auto&& self, std::size_t step) -> bool {
    if (step == order.size()) return true;
    int pos = order[step];
    for (int cand = 0; cand < vv; ++cand) {
      if (used[static_cast<std::size_t>(cand)]) continue;
      bool ok = true;
      for (std::size_t done = 0; done < step; ++done) {
        int q = order[done];
        if (ball.weights(static_cast<std::size_t>(cand), static_cast<std::size_t>(assign[static_cast<std::size_t>(q)])) !=
            pat[static_cast<std::size_t>(pos)][static_cast<std::size_t>(q)]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      assign[static_cast<std::size_t>(pos)] = cand;
      used[static_cast<std::size_t>(cand)] = true;
      if (self(self, step + 1)) return true;
      used[static_cast<std::size_t>(cand)] = false;
      assign[static_cast<std::size_t>(pos)] = -1;
    }
    return false;
  };
  if (rec(rec, 1)) return assign;
  return std::nullopt;
}

std::vector<std::vector<int>> triangle_pattern() {
  std::vector<std::vector<int>> p(3, std::vector<int>(3, 1));
  for (int i = 0; i < 3; ++i) p[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 0;
  return p;
}

std::vector<std::vector<int>> cycle_pattern(int n) {
  std::vector<std::vector<int>> p(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) {
    int j = (i + 1) % n;
    p[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
    p[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = 1;
  }
  return p;
}

// IV* shape: center 0, arms 0-1-2, 0-3-4, 0-5-6; position 2 is an arm end.
std::vector<std::vector<int>> ivstar_pattern() {
  std::vector<std::vector<int>> p(7, std::vector<int>(7, 0));
  auto edge = [&p](int a, int b) {
    p[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 1;
    p[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 1;
  };
  edge(0, 1);
  edge(1, 2);
  edge(0, 3);
  edge(3, 4);
  edge(0, 5);
  edge(5, 6);
  return p;
}

}  // namespace

CharacterizationReport verify_orbit_characterizations(const CurveGraph& ball,
                                                      const EnriquesModel& m) {
  CharacterizationReport rep;
  rep.ball_word_len = ball.max_word_len;
  // Locate the sixteen representatives inside the ball.
  std::vector<int> rep_vertex(kNumCurves, -1);
  for (std::size_t v = 0; v < ball.vertices.size(); ++v) {
    for (int k = 0; k < kNumCurves; ++k) {
      if (ball.vertices[v] == m.class_vector(k)) rep_vertex[static_cast<std::size_t>(k)] = static_cast<int>(v);
    }
  }
  auto add_entry = [&rep](const std::string& vertex, const std::string& property,
                          bool satisfied, std::vector<int> witness) {
    rep.entries.push_back({vertex, property, satisfied, std::move(witness)});
  };
  auto run = [&](int class_index, const std::string& property,
                 const std::vector<std::vector<int>>& pat, int anchor_pos, bool expect_found) {
    int v = rep_vertex[static_cast<std::size_t>(class_index)];
    if (v < 0) {
      add_entry(m.label(class_index).name(), property, false, {});
      return;
    }
    auto found = find_induced_pattern(ball, pat, anchor_pos, v);
    bool satisfied = expect_found ? found.has_value() : !found.has_value();
    add_entry(m.label(class_index).name(), property, satisfied,
              found ? *found : std::vector<int>{});
  };
  for (int k = 10; k < 16; ++k) run(k, "I3_triangle", triangle_pattern(), 0, true);
  for (int k = 0; k < 10; ++k) run(k, "I8_cycle", cycle_pattern(8), 0, true);
  for (int k = 0; k < 4; ++k) run(k, "IV*_end", ivstar_pattern(), 2, true);
  for (int k = 4; k < 10; ++k) run(k, "no_IV*_end", ivstar_pattern(), 2, false);
  rep.all_pass = std::all_of(rep.entries.begin(), rep.entries.end(),
                             [](const CharacterizationEntry& e) { return e.satisfied; });
  return rep;
}

std::string vector_to_string(const LatticeVector& x) {
  std::string out;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (k) out += ",";
    out += rat_to_string(x[k]);
  }
  return out;
}

std::optional<LatticeVector> parse_vector(const std::string& text, const EnriquesModel& m) {
  std::string t;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  }
  if (t.empty()) return std::nullopt;
  if (t.find(',') != std::string::npos) {
    std::vector<Rat> coords;
    std::size_t pos = 0;
    while (pos <= t.size()) {
      std::size_t comma = t.find(',', pos);
      std::string piece = t.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      try {
        coords.push_back(rat_from_string(piece));
      } catch (const std::exception&) {
        return std::nullopt;
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (coords.size() != kRank) return std::nullopt;
    return coords;
  }
  // Signed sum of labels with optional integer coefficients: "2F12-E1+H".
  LatticeVector acc(kRank, Rat(0));
  std::size_t pos = 0;
  while (pos < t.size()) {
    Int sign = 1;
    if (t[pos] == '+' || t[pos] == '-') {
      sign = t[pos] == '-' ? -1 : 1;
      ++pos;
    }
    std::size_t digits = pos;
    while (digits < t.size() && std::isdigit(static_cast<unsigned char>(t[digits]))) ++digits;
    Int coeff = 1;
    if (digits > pos) {
      coeff = Int(t.substr(pos, digits - pos));
      pos = digits;
      if (pos < t.size() && t[pos] == '*') ++pos;
    }
    std::size_t end = pos;
    while (end < t.size() && (std::isalnum(static_cast<unsigned char>(t[end])))) ++end;
    if (end == pos) return std::nullopt;
    std::string label = t.substr(pos, end - pos);
    const LatticeVector* vec = nullptr;
    LatticeVector tmp;
    if (label == "H") {
      vec = &m.h();
    } else {
      int idx = m.index_of(label);
      if (idx < 0) return std::nullopt;
      vec = &m.class_vector(idx);
    }
    for (std::size_t k = 0; k < kRank; ++k) acc[k] += Rat(sign * coeff) * (*vec)[k];
    pos = end;
  }
  return acc;
}

}  // namespace elat
