// Orbit machinery: reduction traces, curve and pencil classification with
// their frozen counterexamples, bounded enumeration, orbit balls, and the
// randomized reduction round-trip suite.
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "elat/orbits.hpp"

using namespace elat;

namespace {

const EnriquesModel& model() {
  static EnriquesModel m = build_model();
  return m;
}

const OrbitContext& context() {
  static OrbitContext ctx = build_orbit_context(model());
  return ctx;
}

LatticeVector named(const std::string& text) {
  auto v = parse_vector(text, model());
  REQUIRE(v.has_value());
  return *v;
}

LatticeVector apply_letters(LatticeVector x, const std::vector<int>& letters) {
  const auto& m = model();
  for (int l : letters) x = reflect(m.gram10(), x, m.class_vector(center_index(l)));
  return x;
}

}  // namespace

TEST_CASE("reduction: fundamental-domain members are fixed") {
  for (int k = 0; k < kNumCurves; ++k) {
    ReductionResult r = sigma_reduce(model().class_vector(k), model());
    CHECK(r.verdict == ReductionVerdict::InFundamentalDomain);
    CHECK(r.steps == 0);
    CHECK(r.word.empty());
    CHECK(r.representative == model().class_vector(k));
  }
}

TEST_CASE("reduction trace: a two-step translate returns its word in application order") {
  LatticeVector x = apply_letters(model().class_vector("E4"), {4, 2});
  ReductionResult r = sigma_reduce(x, model());
  CHECK(r.verdict == ReductionVerdict::InFundamentalDomain);
  CHECK(r.representative == model().class_vector("E4"));
  CHECK(r.word == std::vector<int>{4, 2});
  CHECK(r.steps == 2);
  CHECK(apply_letters(r.representative, r.word) == x);
}

TEST_CASE("reduction of a center class leaves the effective cone") {
  ReductionResult r = sigma_reduce(model().class_vector("G4"), model());
  CHECK(r.verdict == ReductionVerdict::DegreeNonPositive);
  CHECK(model().degree(r.representative) < 0);
  CHECK_THROWS_AS(sigma_reduce(r.representative, model()), std::invalid_argument);
}

TEST_CASE("the sixteen sextuple invariants are pairwise distinct") {
  std::set<std::array<Rat, 6>> seen;
  for (int k = 0; k < kNumCurves; ++k) {
    seen.insert(orbit_sextuple(model().class_vector(k), model()));
  }
  CHECK(seen.size() == kNumCurves);
}

TEST_CASE("curve classification on classes, translates and centers") {
  auto direct = classify_curve_class(model().class_vector("E1"), model());
  CHECK(direct.verdict == CurveVerdict::Curve);
  CHECK(direct.label->name() == "E1");
  CHECK(direct.word.empty());

  auto moved = classify_curve_class(named("2E1+2E2+2E3-E4+2E12+2E13+2E23"), model());
  CHECK(moved.verdict == CurveVerdict::Curve);
  CHECK(moved.label->name() == "E4");
  CHECK(moved.word == std::vector<int>{4});

  for (int i = 1; i <= 4; ++i) {
    auto center = classify_curve_class(model().class_vector(center_index(i)), model());
    CHECK(center.verdict == CurveVerdict::NegativeDegree);
    CHECK(!center.label.has_value());
  }

  CHECK_THROWS_AS(classify_curve_class(model().h(), model()), std::invalid_argument);
}

TEST_CASE("pencil rays: 29, distinct, isotropic, primitive, with consistent MW ranks") {
  const auto& ctx = context();
  REQUIRE(ctx.pencil_types.size() == 29);
  std::set<LatticeVector> rays;
  std::map<int, int> count;
  int outside_curve_lattice = 0;
  for (const auto& p : ctx.pencil_types) {
    rays.insert(p.half_fiber);
    count[p.type_index] += 1;
    CHECK(inner_product(model().gram10(), p.half_fiber, p.half_fiber) == 0);
    CHECK(model().degree(p.half_fiber) > 0);
    auto content = lattice_content(ctx.ambient, p.half_fiber);
    REQUIRE(content.has_value());
    CHECK(*content == 1);
    if (!ctx.curves.coords(p.half_fiber).has_value()) ++outside_curve_lattice;
    int fiber_rank_sum = 0;
    for (const auto& f : p.fibers) fiber_rank_sum += f.type.rank;
    CHECK(p.mordell_weil_rank == 8 - fiber_rank_sum);
    // Reduction fixes every ray: they lie in the fundamental domain.
    ReductionResult r = sigma_reduce(p.half_fiber, model());
    CHECK(r.steps == 0);
  }
  CHECK(rays.size() == 29);
  CHECK(count == std::map<int, int>{{1, 12}, {2, 4}, {3, 6}, {4, 3}, {5, 4}});
  // Types 2 and 4 have half-fibers outside the curve lattice.
  CHECK(outside_curve_lattice == 7);
}

TEST_CASE("per-type fiber content and degrees") {
  const auto& ctx = context();
  const std::map<int, std::string> fiber_types{{1, "E7~+A1~"},
                                               {2, "E6~+A2~"},
                                               {3, "D6~+A1~"},
                                               {4, "A7~+A1~"},
                                               {5, "A5~+A2~+A1~"}};
  const std::map<int, int> degrees{{1, 4}, {2, 3}, {3, 2}, {4, 2}, {5, 3}};
  const std::map<int, int> mw{{1, 0}, {2, 0}, {3, 1}, {4, 0}, {5, 0}};
  for (const auto& p : ctx.pencil_types) {
    std::string types;
    for (const auto& f : p.fibers) {
      if (!types.empty()) types += "+";
      types += f.type.to_string();
    }
    CHECK(types == fiber_types.at(p.type_index));
    CHECK(model().degree(p.half_fiber) == degrees.at(p.type_index));
    CHECK(p.mordell_weil_rank == mw.at(p.type_index));
    for (const auto& f : p.fibers) {
      CHECK((f.null_multiplier == 1 || f.null_multiplier == 2));
      CHECK(f.is_multiple == (!f.contains_center && f.null_multiplier == 1));
      if (f.is_multiple) {
        CHECK(f.fiber_class == p.half_fiber);
      }
    }
    // The multiple-fiber marks: the A5~ in type 5 and the curve pair in type 3.
    std::vector<std::string> marks;
    for (const auto& f : p.fibers) {
      if (f.is_multiple) marks.push_back(f.type.to_string());
    }
    if (p.type_index == 3) CHECK(marks == std::vector<std::string>{"A1~"});
    if (p.type_index == 5) CHECK(marks == std::vector<std::string>{"A5~"});
    if (p.type_index == 1 || p.type_index == 2 || p.type_index == 4) CHECK(marks.empty());
  }
}

TEST_CASE("pencil classification by ray, by double class, and the frozen counterexample") {
  const auto& ctx = context();
  for (std::size_t k = 0; k < ctx.pencil_types.size(); ++k) {
    PencilClassification c = classify_pencil(ctx.pencil_types[k].half_fiber, ctx);
    CHECK(c.verdict == PencilVerdict::Pencil);
    CHECK(c.ray_index == k);
    CHECK(!c.input_multiple);
    CHECK(c.type_index == ctx.pencil_types[k].type_index);

    LatticeVector twice = ctx.pencil_types[k].half_fiber;
    for (auto& v : twice) v *= 2;
    PencilClassification c2 = classify_pencil(twice, ctx);
    CHECK(c2.verdict == PencilVerdict::Pencil);
    CHECK(c2.ray_index == k);
    CHECK(c2.input_multiple);
  }

  // A primitive isotropic class of positive degree that reduces to a
  // non-nef chamber vector: it meets E1 negatively and matches no ray.
  PencilClassification bad = classify_pencil(named("E1+E12+F12"), ctx);
  CHECK(bad.verdict == PencilVerdict::NotNefReduced);
  REQUIRE(bad.witness.has_value());
  CHECK(bad.witness->name() == "E1");
  CHECK(inner_product(model().gram10(), bad.reduced, model().class_vector("E1")) < 0);

  CHECK_THROWS_AS(classify_pencil(model().h(), ctx), std::invalid_argument);       // norm 4
  CHECK_THROWS_AS(classify_pencil(named("E1"), ctx), std::invalid_argument);       // norm -2
  LatticeVector quadruple = ctx.pencil_types[0].half_fiber;
  for (auto& v : quadruple) v *= 4;
  CHECK_THROWS_AS(classify_pencil(quadruple, ctx), std::invalid_argument);         // content 4
}

TEST_CASE("enumeration: frozen counts and serial/parallel agreement") {
  const auto& ctx = context();
  auto r1 = enumerate_vectors(ctx, -2, 1, false);
  CHECK(r1.size() == 128);
  auto r2 = enumerate_vectors(ctx, -2, 2, false);
  CHECK(r2.size() == 496);
  CHECK(enumerate_vectors_parallel(ctx, -2, 2, false) == r2);
  CHECK(enumerate_vectors_parallel(ctx, -2, 2, false, 3) == r2);
  auto iso = enumerate_vectors(ctx, 0, 3, true);
  CHECK(iso.size() == 134);
  CHECK(enumerate_vectors_parallel(ctx, 0, 3, true) == iso);

  for (const auto& v : r2) {
    CHECK(inner_product(model().gram10(), v, v) == -2);
    Rat d = model().degree(v);
    CHECK(d > 0);
    CHECK(d <= 2);
    CHECK(ctx.curves.coords(v).has_value());
  }
  // Canonical order: degree, then coordinates.
  for (std::size_t k = 0; k + 1 < r2.size(); ++k) {
    Rat da = model().degree(r2[k]), db = model().degree(r2[k + 1]);
    CHECK((da < db || (da == db && r2[k] < r2[k + 1])));
  }

  int pencils = 0, not_nef = 0, no_match = 0;
  std::set<std::size_t> hit;
  for (const auto& v : iso) {
    PencilClassification c = classify_pencil(v, ctx);
    switch (c.verdict) {
      case PencilVerdict::Pencil:
        ++pencils;
        hit.insert(*c.ray_index);
        break;
      case PencilVerdict::NotNefReduced: ++not_nef; break;
      case PencilVerdict::NoRayMatch: ++no_match; break;
    }
  }
  CHECK(pencils == 10);
  CHECK(not_nef == 124);
  CHECK(no_match == 0);
  // Degree <= 3 reaches exactly the type-3 and type-5 rays (degrees 2 and 3).
  CHECK(hit.size() == 10);
}

TEST_CASE("lattice content distinguishes the two lattices") {
  const auto& ctx = context();
  const PencilTypeData* type2 = nullptr;
  for (const auto& p : ctx.pencil_types) {
    if (p.type_index == 2) type2 = &p;
  }
  REQUIRE(type2 != nullptr);
  CHECK(!ctx.curves.coords(type2->half_fiber).has_value());
  CHECK(lattice_content(ctx.ambient, type2->half_fiber) == Int(1));
  LatticeVector twice = type2->half_fiber;
  for (auto& v : twice) v *= 2;
  CHECK(lattice_content(ctx.curves, twice) == Int(1));
  CHECK(lattice_content(ctx.ambient, twice) == Int(2));
  // Integer vectors always lie in the curve lattice (the basis classes are
  // curves); the half-fiber above is the genuine distinguishing example.
  CHECK(lattice_content(ctx.curves, model().class_vector("G1")) == Int(1));
  CHECK(lattice_content(ctx.ambient, model().class_vector("G1")) == Int(1));
}

TEST_CASE("orbit balls grow with frozen sizes and keep exact pairings") {
  const auto& m = model();
  CurveGraph b0 = orbit_ball(m, 0);
  CHECK(b0.vertices.size() == 16);
  CurveGraph b1 = orbit_ball(m, 1);
  CHECK(b1.vertices.size() == 32);
  CurveGraph b2 = orbit_ball(m, 2);
  CHECK(b2.vertices.size() == 80);
  for (std::size_t a = 0; a < b1.vertices.size(); ++a) {
    CHECK(inner_product(m.gram10(), b1.vertices[a], b1.vertices[a]) == -2);
    CHECK(m.degree(b1.vertices[a]) >= 0);
    CHECK(b1.seed[a] >= 0);
    CHECK(b1.seed[a] < kNumCurves);
    for (std::size_t bb = 0; bb < b1.vertices.size(); ++bb) {
      CHECK(b1.weights(a, bb) == inner_product(m.gram10(), b1.vertices[a], b1.vertices[bb]));
    }
  }
}

TEST_CASE("dual-graph characterizations hold on the unit ball") {
  const auto& m = model();
  CurveGraph ball = orbit_ball(m, 1);
  CharacterizationReport rep = verify_orbit_characterizations(ball, m);
  CHECK(rep.all_pass);
  CHECK(rep.entries.size() == 26);
  int triangles = 0, cycles = 0, ends = 0, non_ends = 0;
  for (const auto& e : rep.entries) {
    CHECK(e.satisfied);
    if (e.property == "I3_triangle") ++triangles;
    if (e.property == "I8_cycle") ++cycles;
    if (e.property == "IV*_end") ++ends;
    if (e.property == "no_IV*_end") ++non_ends;
    if (e.property != "no_IV*_end") CHECK(!e.witness.empty());
  }
  CHECK(triangles == 6);
  CHECK(cycles == 10);
  CHECK(ends == 4);
  CHECK(non_ends == 6);
}

TEST_CASE("randomized reduction round-trips recover their inputs") {
  const auto& m = model();
  std::mt19937 rng(37);
  std::uniform_int_distribution<int> seed(0, kNumCurves - 1);
  std::uniform_int_distribution<int> len(0, 6);
  std::uniform_int_distribution<int> letter(1, 4);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<int> w;
    int n = len(rng);
    for (int k = 0; k < n; ++k) {
      int l = letter(rng);
      if (!w.empty() && w.back() == l) l = (l % 4) + 1;
      w.push_back(l);
    }
    LatticeVector x = apply_letters(m.class_vector(seed(rng)), w);
    CurveClassification c = classify_curve_class(x, m);
    REQUIRE(c.verdict == CurveVerdict::Curve);
    CHECK(apply_letters(c.representative, c.word) == x);
    CHECK(orbit_sextuple(x, m) == c.sextuple);
    CHECK(c.representative == m.class_vector(c.label->name()));
  }
}

TEST_CASE("vector parsing: labels, coordinates, failures") {
  const auto& m = model();
  CHECK(named("H") == m.h());
  CHECK(named("H-E13-E24") == LatticeVector{1, 1, 1, 1, 1, 0, 1, 1, 0, 1});
  CHECK(named("2*G1-F23") == [&] {
    LatticeVector v = m.class_vector("G1");
    for (auto& c : v) c *= 2;
    const LatticeVector& f = m.class_vector("F23");
    for (std::size_t k = 0; k < v.size(); ++k) v[k] -= f[k];
    return v;
  }());
  CHECK(named("0,0,1,1,-1,1/2,1/2,1/2,1/2,1") == m.class_vector("F12"));
  CHECK(!parse_vector("E5", m).has_value());
  CHECK(!parse_vector("1,2,3", m).has_value());
  CHECK(!parse_vector("E1++E2", m).has_value());
  CHECK(!parse_vector("", m).has_value());
  for (int k = 0; k < kNumClasses; ++k) {
    auto round = parse_vector(vector_to_string(m.class_vector(k)), m);
    REQUIRE(round.has_value());
    CHECK(*round == m.class_vector(k));
  }
}
