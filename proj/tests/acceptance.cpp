// Acceptance gate: twelve pass/fail criteria covering the intersection
// tables, the parabolic census and finite-volume criterion, the orbit
// classifications with bounded enumeration, the group arithmetic with a
// faithfulness sweep, and the oracle-equivalence suites. One line per
// criterion; exit status is nonzero when any criterion fails.
#include <chrono>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>

#include "elat/coxeter.hpp"
#include "elat/group.hpp"
#include "elat/model.hpp"
#include "elat/orbits.hpp"

using namespace elat;

namespace {

struct Criterion {
  int number = 0;
  std::string title;
  double limit_seconds = 0;  // 0 = no limit
  bool pass = false;
  double elapsed = 0;
  std::string detail;
};

std::vector<Criterion> g_results;
std::vector<std::string> g_notes;

template <class F>
void criterion(int number, const std::string& title, double limit_seconds, F&& body) {
  Criterion c;
  c.number = number;
  c.title = title;
  c.limit_seconds = limit_seconds;
  auto t0 = std::chrono::steady_clock::now();
  try {
    c.detail = body();
    c.pass = true;
  } catch (const std::exception& e) {
    c.pass = false;
    c.detail = e.what();
  }
  c.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (c.pass && limit_seconds > 0 && c.elapsed > limit_seconds) {
    c.pass = false;
    c.detail = "exceeded the time limit";
  }
  std::printf("%s  %2d  %-58s %7.3fs%s\n", c.pass ? "PASS" : "FAIL", c.number, title.c_str(),
              c.elapsed,
              limit_seconds > 0 ? (" (limit " + std::to_string(static_cast<int>(limit_seconds)) + "s)").c_str()
                                : "");
  if (!c.detail.empty()) std::printf("          %s\n", c.detail.c_str());
  g_results.push_back(std::move(c));
}

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

LatticeVector apply_letters(const EnriquesModel& m, LatticeVector x, const std::vector<int>& w) {
  for (int l : w) x = reflect(m.gram10(), x, m.class_vector(center_index(l)));
  return x;
}

// Integer verification kit for the bounded enumerations: with y = 2x every
// pairing is an integer dot product, (x, class_k) = (y . u_k) / 4 where
// u_k = gram * (2 class_k). This keeps the independent per-vector checks
// (reflection round-trips, witness signs) cheap at six-digit vector counts.
using YVec = std::array<long long, kRank>;

struct PairingKit {
  std::array<YVec, kRank> g{};
  std::array<YVec, kNumClasses> cls2{};
  std::array<YVec, kNumClasses> u{};
};

long long dot_y(const YVec& a, const YVec& b) {
  long long s = 0;
  for (std::size_t j = 0; j < static_cast<std::size_t>(kRank); ++j) s += a[j] * b[j];
  return s;
}

YVec to_y(const LatticeVector& x) {
  YVec y{};
  for (std::size_t j = 0; j < static_cast<std::size_t>(kRank); ++j) {
    Rat t = x[j] * 2;
    if (denominator(t) != 1) fail("coordinates are not half-integral");
    y[j] = static_cast<long long>(numerator(t));
  }
  return y;
}

PairingKit make_pairing_kit(const EnriquesModel& m) {
  PairingKit kit;
  for (std::size_t i = 0; i < static_cast<std::size_t>(kRank); ++i) {
    for (std::size_t j = 0; j < static_cast<std::size_t>(kRank); ++j) {
      Rat e = m.gram10()(i, j);
      if (denominator(e) != 1) fail("Gram entries are not integral");
      kit.g[i][j] = static_cast<long long>(numerator(e));
    }
  }
  for (int k = 0; k < kNumClasses; ++k) {
    kit.cls2[static_cast<std::size_t>(k)] = to_y(m.class_vector(k));
  }
  for (std::size_t k = 0; k < static_cast<std::size_t>(kNumClasses); ++k) {
    for (std::size_t i = 0; i < static_cast<std::size_t>(kRank); ++i) {
      kit.u[k][i] = dot_y(kit.g[i], kit.cls2[k]);
    }
  }
  return kit;
}

YVec apply_letters_y(const PairingKit& kit, YVec y, const std::vector<int>& w) {
  for (int l : w) {
    std::size_t c = static_cast<std::size_t>(center_index(l));
    long long p4 = dot_y(y, kit.u[c]);
    if (p4 % 4 != 0) fail("reflection pairing is not integral");
    for (std::size_t j = 0; j < static_cast<std::size_t>(kRank); ++j) {
      y[j] += (p4 / 4) * kit.cls2[c][j];
    }
  }
  return y;
}

}  // namespace

int main() {
  EnriquesModel m = build_model();
  CoxeterDiagram diagram = CoxeterDiagram::from_model(m);
  OrbitContext ctx = build_orbit_context(m);

  criterion(1, "basis Gram matrix has determinant -64", 1.0, [&]() -> std::string {
    EnriquesModel fresh = build_model();
    Rat det = lattice_determinant(fresh.gram10());
    if (det != -64) fail("determinant " + rat_to_string(det));
    Inertia in = inertia_of(fresh.gram10().entries());
    if (in.positive != 1 || in.negative != 9) fail("signature is not (1,9)");
    return "";
  });

  criterion(2, "all twenty classes reproduce the intersection tables", 1.0, [&]() -> std::string {
    TableReport rep = verify_tables(m);
    if (!rep.pass) {
      for (const auto& c : rep.checks) {
        if (!c.pass) fail(c.name + ": " + c.detail);
      }
    }
    return std::to_string(rep.checks.size()) + " table checks pass";
  });

  criterion(3, "pairings of distinct classes lie in {0, 1, 2}", 0, [&]() -> std::string {
    for (int a = 0; a < kNumClasses; ++a) {
      for (int b = 0; b < kNumClasses; ++b) {
        if (a == b) continue;
        Rat v = m.pairing(a, b);
        if (denominator(v) != 1 || v < 0 || v > 2) {
          fail(m.label(a).name() + "." + m.label(b).name() + " = " + rat_to_string(v));
        }
      }
    }
    return "no dotted or higher-weight edges anywhere in the diagram";
  });

  criterion(4, "maximal parabolic census: 29 in five families (pruned + full scan)", 30.0,
            [&]() -> std::string {
    auto t0 = std::chrono::steady_clock::now();
    auto maxp = maximal_parabolics(diagram);
    double pruned_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (pruned_s > 2.0) fail("pruned census took too long");
    if (maxp.size() != 29) fail("census size " + std::to_string(maxp.size()));
    std::map<std::string, int> mult;
    std::map<std::string, std::set<std::array<int, 3>>> census;
    for (const auto& p : maxp) {
      if (p.rank != 8) fail("rank " + std::to_string(p.rank) + " maximal parabolic");
      mult[p.type_string] += 1;
      census[p.type_string].insert(p.census);
    }
    const std::map<std::string, std::pair<int, std::array<int, 3>>> expected{
        {"E7~+A1~", {12, {8, 1, 1}}},
        {"E6~+A2~", {4, {7, 3, 0}}},
        {"D6~+A1~+A1~", {6, {8, 1, 2}}},
        {"A7~+A1~", {3, {8, 2, 0}}},
        {"A5~+A2~+A1~", {4, {7, 3, 1}}}};
    if (mult.size() != expected.size()) fail("unexpected family list");
    for (const auto& [type, want] : expected) {
      if (mult[type] != want.first) {
        fail(type + " multiplicity " + std::to_string(mult[type]));
      }
      if (census[type].size() != 1 || *census[type].begin() != want.second) {
        fail(type + " vertex census is not constant across the family");
      }
    }
    // Exhaustive 2^20 oracle: the pruned enumeration must match it exactly.
    auto pruned_all = enumerate_semidefinite_subsets(diagram);
    auto naive_all = enumerate_semidefinite_subsets_naive(diagram);
    if (pruned_all != naive_all) fail("pruned and exhaustive subset scans disagree");
    return "pruned " + std::to_string(pruned_s).substr(0, 5) + "s; scans agree on " +
           std::to_string(naive_all.size()) + " semidefinite subsets";
  });

  criterion(5, "finite-volume criterion: every affine subdiagram extends", 0,
            [&]() -> std::string {
    FiniteVolumeReport rep = check_finite_volume(diagram, 8);
    if (!rep.finite_volume) fail("criterion fails");
    for (const auto& [verts, witness] : rep.witnesses) {
      if (witness < 0) fail("a connected affine subdiagram has no witness");
    }
    return std::to_string(rep.witnesses.size()) +
           " connected affine subdiagrams, each a component of a rank-8 parabolic";
  });

  criterion(6, "diagram automorphism group has order 24 (the index action)", 0,
            [&]() -> std::string {
    auto autos = diagram_automorphisms(diagram);
    if (autos.size() != 24) fail("order " + std::to_string(autos.size()));
    std::set<std::vector<int>> found(autos.begin(), autos.end());
    std::set<std::vector<int>> image;
    for (const auto& p : all_permutations()) {
      std::vector<int> perm(kNumClasses);
      for (int k = 0; k < kNumClasses; ++k) {
        perm[static_cast<std::size_t>(k)] = m.index_of(permute_label(m.label(k), p.img).name());
      }
      image.insert(std::move(perm));
    }
    if (found != image) fail("group differs from the index-permutation image");
    return "";
  });

  criterion(7, "center reflections act by the stated formulas", 0, [&]() -> std::string {
    auto want = parse_vector("2E1+2E2+2E3-E4+2E12+2E13+2E23", m);
    if (!want) fail("internal: formula vector did not parse");
    if (apply_isometry(to_isometry(sigma_element(4), m), m.class_vector("E4")) != *want) {
      fail("sigma_4(E4) mismatch");
    }
    for (int i = 1; i <= 4; ++i) {
      ZMat iso = to_isometry(sigma_element(i), m);
      if (!is_isometry(iso, m)) fail("sigma matrix is not an isometry");
      for (int j = 1; j <= 4; ++j) {
        if (j != i &&
            apply_isometry(iso, m.class_vector(vertex_index(j))) != m.class_vector(vertex_index(j))) {
          fail("sigma moves a vertex class it should fix");
        }
      }
      for (int k = 4; k < 10; ++k) {
        if (apply_isometry(iso, m.class_vector(k)) != m.class_vector(k)) {
          fail("sigma moves an edge class");
        }
      }
    }
    return "";
  });

  criterion(8, "curve orbits: distinct invariants; all (-2)-classes of degree <= 8 classified",
            60.0, [&]() -> std::string {
    std::set<std::array<Rat, 6>> sextuples;
    for (int k = 0; k < kNumCurves; ++k) sextuples.insert(orbit_sextuple(m.class_vector(k), m));
    if (sextuples.size() != kNumCurves) fail("sextuple invariants collide");
    for (int i = 1; i <= 4; ++i) {
      auto c = classify_curve_class(m.class_vector(center_index(i)), m);
      if (c.verdict != CurveVerdict::NegativeDegree) fail("a center class was not rejected");
    }
    PairingKit kit = make_pairing_kit(m);
    auto roots = enumerate_vectors_parallel(ctx, -2, 8, false);
    std::size_t curves = 0, negative = 0, outside = 0;
    for (const auto& v : roots) {
      CurveClassification c = classify_curve_class(v, m);
      switch (c.verdict) {
        case CurveVerdict::Curve:
          if (apply_letters_y(kit, to_y(c.representative), c.word) != to_y(v)) {
            fail("round-trip failure");
          }
          ++curves;
          break;
        case CurveVerdict::NegativeDegree: ++negative; break;
        case CurveVerdict::ReducedNotACurve: ++outside; break;
      }
    }
    if (curves + negative + outside != roots.size()) fail("classification lost vectors");
    return std::to_string(roots.size()) + " classes: " + std::to_string(curves) +
           " effective, " + std::to_string(negative) + " negative after reduction, " +
           std::to_string(outside) + " outside the curve orbits";
  });

  criterion(9, "pencils: 29 rays, fiber/MW table, isotropic classes land or witness",
            60.0, [&]() -> std::string {
    if (ctx.pencil_types.size() != 29) fail("ray count " + std::to_string(ctx.pencil_types.size()));
    std::set<LatticeVector> rays;
    for (const auto& p : ctx.pencil_types) rays.insert(p.half_fiber);
    if (rays.size() != 29) fail("rays are not pairwise distinct");

    const std::map<int, std::tuple<std::string, int, int>> expected{
        {1, {"E7~+A1~", 0, 12}},
        {2, {"E6~+A2~", 0, 4}},
        {3, {"D6~+A1~", 1, 6}},
        {4, {"A7~+A1~", 0, 3}},
        {5, {"A5~+A2~+A1~", 0, 4}}};
    std::map<int, int> count;
    for (const auto& p : ctx.pencil_types) {
      count[p.type_index] += 1;
      std::string fibers;
      std::vector<std::string> marks;
      for (const auto& f : p.fibers) {
        if (!fibers.empty()) fibers += "+";
        fibers += f.type.to_string();
        if (f.is_multiple) marks.push_back(f.type.to_string());
      }
      const auto& [wf, wmw, wc] = expected.at(p.type_index);
      if (fibers != wf) fail("type " + std::to_string(p.type_index) + " fibers " + fibers);
      if (p.mordell_weil_rank != wmw) fail("type " + std::to_string(p.type_index) + " MW rank");
      if (p.type_index == 5 && marks != std::vector<std::string>{"A5~"}) {
        fail("type 5 multiple-fiber mark is not exactly on the A5~ component");
      }
      int fiber_rank_sum = 0;
      for (const auto& f : p.fibers) fiber_rank_sum += f.type.rank;
      if (p.mordell_weil_rank != 8 - fiber_rank_sum) fail("MW rank inconsistent with fiber ranks");
    }
    for (const auto& [t, want] : expected) {
      if (count[t] != std::get<2>(want)) fail("type " + std::to_string(t) + " count");
    }

    PairingKit kit = make_pairing_kit(m);
    auto isotropic = enumerate_vectors_parallel(ctx, 0, 8, true);
    std::set<std::size_t> hit;
    std::size_t pencils = 0, not_nef = 0;
    for (const auto& v : isotropic) {
      PencilClassification c = classify_pencil(v, ctx);
      if (c.verdict == PencilVerdict::Pencil) {
        ++pencils;
        hit.insert(*c.ray_index);
      } else if (c.verdict == PencilVerdict::NotNefReduced) {
        if (!c.witness) fail("missing witness");
        int widx = m.index_of(c.witness->name());
        if (widx < 0) fail("witness label is not a class");
        if (dot_y(to_y(c.reduced), kit.u[static_cast<std::size_t>(widx)]) >= 0) {
          fail("witness does not verify");
        }
        ++not_nef;
      } else {
        fail("an isotropic class matched no ray and produced no witness");
      }
    }
    if (hit.size() != 29) {
      fail("only " + std::to_string(hit.size()) + " of 29 rays reached by degree <= 8");
    }
    g_notes.push_back(
        "criterion 9: not every primitive isotropic class of positive degree lands on a ray "
        "under reduction - E1+E12+F12 is primitive, isotropic, already reduced, and pairs to "
        "-1 with E1; classes like it are reported NotNefReduced with a verified witness (" +
        std::to_string(not_nef) + " of " + std::to_string(isotropic.size()) +
        " classes of degree <= 8). Every class either lands on a ray or carries a witness, and "
        "all 29 rays are reached.");
    g_notes.push_back(
        "criterion 9: the type-3 A1~ fiber {E_ij, F_ij} is computed as a multiple fiber (its "
        "two classes are effective curves summing to the primitive half-fiber); the reference "
        "table prints that row without a multiplicity mark. The required mark on the type-5 "
        "A5~ component is verified exactly.");
    return std::to_string(isotropic.size()) + " isotropic classes: " + std::to_string(pencils) +
           " on rays (all 29 reached), " + std::to_string(not_nef) + " with verified witnesses";
  });

  criterion(10, "group arithmetic: involutions, conjugation, faithfulness to length 6",
            60.0, [&]() -> std::string {
    for (int i = 1; i <= 4; ++i) {
      if (multiply(sigma_element(i), sigma_element(i)) != identity_element()) {
        fail("a generator is not an involution");
      }
    }
    for (const auto& p : all_permutations()) {
      GroupElement pe = perm_element(p);
      for (int i = 1; i <= 4; ++i) {
        if (multiply(multiply(pe, sigma_element(i)), inverse(pe)) != sigma_element(p(i))) {
          fail("conjugation does not relabel the generators");
        }
      }
    }
    // Faithfulness sweep: all reduced words of length <= 6 under all 24
    // permutations give pairwise distinct isometries. Word matrices are
    // accumulated incrementally along the prefix tree.
    std::array<ZMat, 5> s_mat;
    for (int i = 1; i <= 4; ++i) {
      s_mat[static_cast<std::size_t>(i)] = reflection_matrix(m, center_index(i));
    }
    std::vector<ZMat> p_mats;
    for (const auto& p : all_permutations()) p_mats.push_back(to_isometry(perm_element(p), m));
    std::set<std::string> keys;
    std::size_t total = 0;
    struct Node {
      ZMat mat;
      int last;
      int depth;
    };
    std::vector<Node> stack{{ZMat::identity(kRank), 0, 0}};
    while (!stack.empty()) {
      Node n = std::move(stack.back());
      stack.pop_back();
      for (const auto& pm : p_mats) {
        keys.insert(isometry_key(pm * n.mat));
        ++total;
      }
      if (n.depth == 6) continue;
      for (int l = 1; l <= 4; ++l) {
        if (l == n.last) continue;
        stack.push_back({s_mat[static_cast<std::size_t>(l)] * n.mat, l, n.depth + 1});
      }
    }
    if (total != 34968) fail("expected 24 * 1457 = 34968 elements, saw " + std::to_string(total));
    if (keys.size() != total) {
      fail("only " + std::to_string(keys.size()) + " distinct isometries");
    }
    // Spot-check the incremental matrices against the direct construction.
    std::mt19937 rng(41);
    std::uniform_int_distribution<int> letter(1, 4);
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<int> w;
      for (int k = 0; k < 6; ++k) {
        int l = letter(rng);
        if (!w.empty() && w.back() == l) l = (l % 4) + 1;
        w.push_back(l);
      }
      GroupElement g = normal_form(Perm4::identity(), w);
      ZMat direct = to_isometry(g, m);
      ZMat inc = ZMat::identity(kRank);
      for (int l : g.word) inc = s_mat[static_cast<std::size_t>(l)] * inc;
      if (direct != inc) fail("incremental word matrix mismatch");
    }
    return "34968 pairwise distinct isometries";
  });

  criterion(11, "parity and the projection onto the reflection letters", 0, [&]() -> std::string {
    if (!check_parity(m)) fail("a center pairs oddly with a curve");
    for (int k = 0; k < kNumCurves; ++k) {
      if (project_to_W4C(m, {k}) != identity_element()) fail("a curve reflection survives");
    }
    auto word = parse_reflection_word(m, "rE1 s4 rE1");
    if (!word || project_to_W4C(m, *word) != sigma_element(4)) {
      fail("conjugated letter does not project to itself");
    }
    std::mt19937 rng(43);
    std::uniform_int_distribution<int> len(0, 8);
    std::uniform_int_distribution<int> letter(0, kNumClasses - 1);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<int> u, v;
      int nu = len(rng), nv = len(rng);
      for (int k = 0; k < nu; ++k) u.push_back(letter(rng));
      for (int k = 0; k < nv; ++k) v.push_back(letter(rng));
      std::vector<int> uv = u;
      uv.insert(uv.end(), v.begin(), v.end());
      if (project_to_W4C(m, uv) != multiply(project_to_W4C(m, v), project_to_W4C(m, u))) {
        fail("projection is not multiplicative");
      }
    }
    return "projection kills the 16 curve letters and is multiplicative (100 random pairs)";
  });

  criterion(12, "oracle equivalence: subset scans and reduction round-trips", 0,
            [&]() -> std::string {
    std::mt19937 rng(47);
    std::vector<int> all(kNumClasses);
    for (int k = 0; k < kNumClasses; ++k) all[static_cast<std::size_t>(k)] = k;
    for (int trial = 0; trial < 30; ++trial) {
      std::shuffle(all.begin(), all.end(), rng);
      std::size_t n = 5 + static_cast<std::size_t>(trial % 8);
      std::vector<int> subset(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n));
      std::sort(subset.begin(), subset.end());
      CoxeterDiagram sub = diagram.induced(subset);
      if (enumerate_semidefinite_subsets(sub) != enumerate_semidefinite_subsets_naive(sub)) {
        fail("pruned and exhaustive scans disagree on an induced subdiagram");
      }
    }
    std::uniform_int_distribution<int> seed(0, kNumCurves - 1);
    std::uniform_int_distribution<int> len(0, 6);
    std::uniform_int_distribution<int> letter(1, 4);
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<int> w;
      int nw = len(rng);
      for (int k = 0; k < nw; ++k) {
        int l = letter(rng);
        if (!w.empty() && w.back() == l) l = (l % 4) + 1;
        w.push_back(l);
      }
      LatticeVector x = apply_letters(m, m.class_vector(seed(rng)), w);
      CurveClassification c = classify_curve_class(x, m);
      if (c.verdict != CurveVerdict::Curve) fail("an orbit member failed to classify");
      if (apply_letters(m, c.representative, c.word) != x) fail("round-trip failure");
      if (orbit_sextuple(x, m) != c.sextuple) fail("invariant mismatch");
    }
    return "30 induced subdiagram scans agree; 1000 reduction round-trips recover their inputs";
  });

  int passed = 0;
  for (const auto& c : g_results) passed += c.pass ? 1 : 0;
  for (const auto& n : g_notes) std::printf("\nNOTE: %s\n", n.c_str());
  std::printf("\n%d/%d criteria passed\n", passed, static_cast<int>(g_results.size()));
  return passed == static_cast<int>(g_results.size()) ? 0 : 1;
}
