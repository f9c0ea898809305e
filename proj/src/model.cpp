#include "elat/model.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace elat {

namespace {

constexpr std::array<std::pair<int, int>, 6> kPairs = {
    {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}};

int pair_slot(int i, int j) {
  for (std::size_t k = 0; k < kPairs.size(); ++k) {
    if (kPairs[k].first == i && kPairs[k].second == j) return static_cast<int>(k);
  }
  throw std::invalid_argument("pair_slot: bad index pair");
}

std::array<RootLabel, kNumClasses> make_labels() {
  std::array<RootLabel, kNumClasses> out{};
  for (int i = 1; i <= 4; ++i) out[static_cast<std::size_t>(i - 1)] = {Family::EVertex, i, 0};
  for (std::size_t k = 0; k < 6; ++k)
    out[4 + k] = {Family::EEdge, kPairs[k].first, kPairs[k].second};
  for (std::size_t k = 0; k < 6; ++k)
    out[10 + k] = {Family::F, kPairs[k].first, kPairs[k].second};
  for (int i = 1; i <= 4; ++i) out[static_cast<std::size_t>(15 + i)] = {Family::G, i, 0};
  return out;
}

bool in_pair(int i, int a, int b) { return i == a || i == b; }

}  // namespace

std::string RootLabel::name() const {
  switch (family) {
    case Family::EVertex: return "E" + std::to_string(i);
    case Family::EEdge: return "E" + std::to_string(i) + std::to_string(j);
    case Family::F: return "F" + std::to_string(i) + std::to_string(j);
    case Family::G: return "G" + std::to_string(i);
  }
  throw std::logic_error("RootLabel::name: bad family");
}

Configuration RootLabel::configuration() const {
  switch (family) {
    case Family::EVertex:
    case Family::EEdge: return Configuration::TenA;
    case Family::F: return Configuration::SixB;
    case Family::G: return Configuration::FourC;
  }
  throw std::logic_error("RootLabel::configuration: bad family");
}

int vertex_index(int i) {
  if (i < 1 || i > 4) throw std::invalid_argument("vertex_index: out of range");
  return i - 1;
}

int edge_index(int i, int j) {
  if (i > j) std::swap(i, j);
  return 4 + pair_slot(i, j);
}

int conic_index(int i, int j) {
  if (i > j) std::swap(i, j);
  return 10 + pair_slot(i, j);
}

int center_index(int i) {
  if (i < 1 || i > 4) throw std::invalid_argument("center_index: out of range");
  return 15 + i;
}

std::optional<RootLabel> parse_label(const std::string& name) {
  if (name.size() < 2 || name.size() > 3) return std::nullopt;
  char fam = name[0];
  auto digit = [](char c) { return c >= '1' && c <= '4' ? c - '0' : 0; };
  int a = digit(name[1]);
  int b = name.size() == 3 ? digit(name[2]) : 0;
  if (a == 0 || (name.size() == 3 && b == 0)) return std::nullopt;
  if (name.size() == 2) {
    if (fam == 'E') return RootLabel{Family::EVertex, a, 0};
    if (fam == 'G') return RootLabel{Family::G, a, 0};
    return std::nullopt;
  }
  if (a >= b) return std::nullopt;
  if (fam == 'E') return RootLabel{Family::EEdge, a, b};
  if (fam == 'F') return RootLabel{Family::F, a, b};
  return std::nullopt;
}

RootLabel permute_label(const RootLabel& l, const std::array<int, 4>& perm) {
  auto p = [&](int v) { return perm[static_cast<std::size_t>(v - 1)]; };
  RootLabel out = l;
  if (l.family == Family::EVertex || l.family == Family::G) {
    out.i = p(l.i);
  } else {
    int a = p(l.i), b = p(l.j);
    if (a > b) std::swap(a, b);
    out.i = a;
    out.j = b;
  }
  return out;
}

EnriquesModel::EnriquesModel(std::array<RootLabel, kNumClasses> labels,
                             std::vector<LatticeVector> classes, GramMatrix gram10,
                             GramMatrix gram20, LatticeVector h)
    : labels_(labels),
      classes_(std::move(classes)),
      gram10_(std::move(gram10)),
      gram20_(std::move(gram20)),
      h_(std::move(h)) {
  if (classes_.size() != kNumClasses) throw std::invalid_argument("EnriquesModel: need 20 classes");
  for (const auto& c : classes_) {
    if (c.size() != kRank) throw std::invalid_argument("EnriquesModel: class vectors must have 10 coordinates");
  }
  if (gram10_.dim() != kRank) throw std::invalid_argument("EnriquesModel: gram10 must be 10x10");
  if (gram20_.dim() != kNumClasses) throw std::invalid_argument("EnriquesModel: gram20 must be 20x20");
  if (h_.size() != kRank) throw std::invalid_argument("EnriquesModel: H must have 10 coordinates");
}

const LatticeVector& EnriquesModel::class_vector(const std::string& name) const {
  int idx = index_of(name);
  if (idx < 0) throw std::invalid_argument("unknown class label: " + name);
  return classes_[static_cast<std::size_t>(idx)];
}

int EnriquesModel::index_of(const std::string& name) const {
  for (int k = 0; k < kNumClasses; ++k) {
    if (labels_[static_cast<std::size_t>(k)].name() == name) return k;
  }
  return -1;
}

EnriquesModel build_model() {
  auto labels = make_labels();

  // Gram of the basis classes: every class has self-pairing -2; a vertex
  // meets an edge exactly when its index lies on that edge; all other
  // distinct pairs are disjoint.
  QMat g10(kRank, kRank);
  for (std::size_t a = 0; a < kRank; ++a) {
    for (std::size_t b = 0; b < kRank; ++b) {
      const RootLabel& la = labels[a];
      const RootLabel& lb = labels[b];
      Rat v = 0;
      if (a == b) {
        v = -2;
      } else if (la.family == Family::EVertex && lb.family == Family::EEdge) {
        v = in_pair(la.i, lb.i, lb.j) ? 1 : 0;
      } else if (la.family == Family::EEdge && lb.family == Family::EVertex) {
        v = in_pair(lb.i, la.i, la.j) ? 1 : 0;
      }
      g10(a, b) = v;
    }
  }
  GramMatrix gram10(g10);

  std::vector<LatticeVector> classes(kNumClasses, LatticeVector(kRank, Rat(0)));
  for (std::size_t k = 0; k < kRank; ++k) classes[k][k] = 1;

  // Each conic-pair class is pinned down by its pairings against the basis:
  // orthogonal to every vertex class, pairing 2 with its namesake edge and 0
  // with the other edges. The Gram matrix is invertible, so the linear solve
  // has exactly one (rational) solution.
  for (std::size_t k = 0; k < 6; ++k) {
    QVec rhs(kRank, Rat(0));
    rhs[static_cast<std::size_t>(4 + k)] = 2;
    classes[10 + k] = solve_linear(g10, rhs);
  }

  // Reflection centers: the six curves disjoint from a vertex class form a
  // hexagon; the center is that hexagon sum minus the vertex class.
  for (int i = 1; i <= 4; ++i) {
    LatticeVector g(kRank, Rat(0));
    for (int v = 1; v <= 4; ++v) {
      if (v != i) g[static_cast<std::size_t>(vertex_index(v))] += 1;
    }
    for (const auto& [a, b] : kPairs) {
      if (!in_pair(i, a, b)) g[static_cast<std::size_t>(edge_index(a, b))] += 1;
    }
    g[static_cast<std::size_t>(vertex_index(i))] -= 1;
    classes[static_cast<std::size_t>(center_index(i))] = g;
  }

  LatticeVector h(kRank, Rat(1));

  QMat g20(kNumClasses, kNumClasses);
  for (std::size_t a = 0; a < kNumClasses; ++a) {
    for (std::size_t b = 0; b < kNumClasses; ++b) {
      Rat v = inner_product(gram10, classes[a], classes[b]);
      if (denominator(v) != 1) {
        throw std::logic_error("build_model: non-integral pairing between " +
                               labels[a].name() + " and " + labels[b].name());
      }
      g20(a, b) = v;
    }
  }
  GramMatrix gram20(g20);

  EnriquesModel m(labels, std::move(classes), std::move(gram10), std::move(gram20),
                  std::move(h));
  TableReport rep = verify_tables(m);
  if (!rep.pass) {
    std::string what = "build_model: table verification failed:";
    for (const auto& c : rep.checks) {
      if (!c.pass) what += " [" + c.name + ": " + c.detail + "]";
    }
    throw std::logic_error(what);
  }
  return m;
}

TableReport verify_tables(const EnriquesModel& m) {
  TableReport rep;
  auto check = [&rep](const std::string& name, auto&& body) {
    TableCheck c;
    c.name = name;
    c.pass = true;
    body(c);
    rep.checks.push_back(std::move(c));
  };
  auto fail = [](TableCheck& c, const std::string& detail) {
    if (c.pass) {
      c.pass = false;
      c.detail = detail;
    }
  };
  const auto& L = m.labels();
  auto expect = [&](TableCheck& c, int a, int b, const Rat& want) {
    if (m.pairing(a, b) != want) {
      fail(c, "(" + L[static_cast<std::size_t>(a)].name() + "," +
                  L[static_cast<std::size_t>(b)].name() + ") = " +
                  rat_to_string(m.pairing(a, b)) + ", expected " + rat_to_string(want));
    }
  };

  check("self_pairings", [&](TableCheck& c) {
    for (int a = 0; a < kNumClasses; ++a) expect(c, a, a, Rat(-2));
  });

  check("tetrahedral_adjacency", [&](TableCheck& c) {
    for (int a = 0; a < kRank; ++a) {
      for (int b = 0; b < kRank; ++b) {
        if (a == b) continue;
        const RootLabel &la = L[static_cast<std::size_t>(a)], &lb = L[static_cast<std::size_t>(b)];
        Rat want = 0;
        if (la.family == Family::EVertex && lb.family == Family::EEdge && in_pair(la.i, lb.i, lb.j)) want = 1;
        if (la.family == Family::EEdge && lb.family == Family::EVertex && in_pair(lb.i, la.i, la.j)) want = 1;
        expect(c, a, b, want);
      }
    }
  });

  check("conic_vs_vertices", [&](TableCheck& c) {
    for (const auto& [i, j] : kPairs)
      for (int v = 1; v <= 4; ++v) expect(c, conic_index(i, j), vertex_index(v), Rat(0));
  });

  check("conic_vs_edges", [&](TableCheck& c) {
    for (const auto& [i, j] : kPairs) {
      for (const auto& [a, b] : kPairs) {
        Rat want = (i == a && j == b) ? 2 : 0;
        expect(c, conic_index(i, j), edge_index(a, b), want);
      }
    }
  });

  // Pairings inside the conic family follow from the solved coordinates:
  // complementary pairs meet with multiplicity 2, pairs sharing one index
  // with multiplicity 1.
  check("conic_internal", [&](TableCheck& c) {
    for (const auto& [i, j] : kPairs) {
      for (const auto& [a, b] : kPairs) {
        if (i == a && j == b) continue;
        int shared = (in_pair(i, a, b) ? 1 : 0) + (in_pair(j, a, b) ? 1 : 0);
        Rat want = shared == 0 ? 2 : 1;
        expect(c, conic_index(i, j), conic_index(a, b), want);
      }
    }
  });

  check("center_vs_vertices", [&](TableCheck& c) {
    for (int i = 1; i <= 4; ++i)
      for (int v = 1; v <= 4; ++v) expect(c, center_index(i), vertex_index(v), Rat(i == v ? 2 : 0));
  });

  check("center_vs_edges", [&](TableCheck& c) {
    for (int i = 1; i <= 4; ++i)
      for (const auto& [a, b] : kPairs) expect(c, center_index(i), edge_index(a, b), Rat(0));
  });

  check("center_vs_conics", [&](TableCheck& c) {
    for (int i = 1; i <= 4; ++i)
      for (const auto& [a, b] : kPairs)
        expect(c, center_index(i), conic_index(a, b), Rat(in_pair(i, a, b) ? 0 : 2));
  });

  check("center_internal", [&](TableCheck& c) {
    for (int i = 1; i <= 4; ++i)
      for (int j = 1; j <= 4; ++j)
        if (i != j) expect(c, center_index(i), center_index(j), Rat(2));
  });

  check("gram20_matches_coordinates", [&](TableCheck& c) {
    for (int a = 0; a < kNumClasses; ++a) {
      for (int b = 0; b < kNumClasses; ++b) {
        Rat v = inner_product(m.gram10(), m.class_vector(a), m.class_vector(b));
        if (v != m.pairing(a, b)) {
          fail(c, "stored (" + L[static_cast<std::size_t>(a)].name() + "," +
                      L[static_cast<std::size_t>(b)].name() + ") = " +
                      rat_to_string(m.pairing(a, b)) + " but coordinates give " + rat_to_string(v));
        }
      }
    }
  });

  check("gram20_symmetric_integral", [&](TableCheck& c) {
    for (int a = 0; a < kNumClasses; ++a) {
      for (int b = 0; b < kNumClasses; ++b) {
        if (denominator(m.pairing(a, b)) != 1) fail(c, "non-integral pairing at (" + std::to_string(a) + "," + std::to_string(b) + ")");
        if (m.pairing(a, b) != m.pairing(b, a)) fail(c, "asymmetry at (" + std::to_string(a) + "," + std::to_string(b) + ")");
      }
    }
  });

  check("degree_form", [&](TableCheck& c) {
    Rat h2 = inner_product(m.gram10(), m.h(), m.h());
    if (h2 != 4) fail(c, "(H,H) = " + rat_to_string(h2) + ", expected 4");
    for (int a = 0; a < kNumClasses; ++a) {
      const RootLabel& la = L[static_cast<std::size_t>(a)];
      Rat want = 0;
      switch (la.family) {
        case Family::EVertex: want = 1; break;
        case Family::EEdge: want = 0; break;
        case Family::F: want = 2; break;
        case Family::G: want = 2; break;
      }
      Rat got = m.degree(m.class_vector(a));
      if (got != want) fail(c, "(H," + la.name() + ") = " + rat_to_string(got) + ", expected " + rat_to_string(want));
    }
    // H is the sum of the ten basis classes.
    LatticeVector s(kRank, Rat(0));
    for (int a = 0; a < kRank; ++a)
      for (std::size_t k = 0; k < kRank; ++k) s[k] += m.class_vector(a)[k];
    if (s != m.h()) fail(c, "H differs from the sum of the ten basis classes");
  });

  check("basis_determinant", [&](TableCheck& c) {
    Rat d = lattice_determinant(m.gram10());
    if (d != -64) fail(c, "det = " + rat_to_string(d) + ", expected -64");
  });

  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(),
                          [](const TableCheck& c) { return c.pass; });
  return rep;
}

std::optional<std::vector<Int>> Sublattice::coords(const LatticeVector& x) const {
  // Solve c * basis2 = 2x over the integers by back-substitution along the
  // Hermite pivots.
  std::vector<Rat> y(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) y[k] = 2 * x[k];

  const std::size_t r = basis2.rows();
  const std::size_t n = basis2.cols();
  std::vector<Int> c(r, Int(0));
  for (std::size_t row = 0; row < r; ++row) {
    std::size_t piv = 0;
    while (piv < n && basis2(row, piv) == 0) ++piv;
    if (piv == n) throw std::logic_error("Sublattice::coords: zero basis row");
    Rat q = y[piv] / Rat(basis2(row, piv));
    if (denominator(q) != 1) return std::nullopt;
    Int qi = numerator(q);
    for (std::size_t k = 0; k < n; ++k) y[k] -= Rat(qi * basis2(row, k));
    c[row] = qi;
  }
  for (const Rat& v : y) {
    if (v != 0) return std::nullopt;
  }
  return c;
}

LatticeVector Sublattice::from_coords(const std::vector<Int>& c) const {
  if (c.size() != basis2.rows()) throw std::invalid_argument("from_coords: coordinate count mismatch");
  LatticeVector out(basis2.cols(), Rat(0));
  for (std::size_t row = 0; row < basis2.rows(); ++row) {
    for (std::size_t k = 0; k < basis2.cols(); ++k) {
      out[k] += Rat(c[row] * basis2(row, k)) / 2;
    }
  }
  return out;
}

namespace {

// Builds a Sublattice from generator rows given in doubled ambient
// coordinates (so half-integral vectors stay integral).
Sublattice sublattice_from_doubled_rows(const EnriquesModel& m, const ZMat& rows) {
  Sublattice s;
  s.basis2 = hermite_normal_form(rows);
  const std::size_t r = s.basis2.rows();
  s.basis.resize(r);
  for (std::size_t k = 0; k < r; ++k) {
    LatticeVector v(kRank, Rat(0));
    for (std::size_t c = 0; c < kRank; ++c) v[c] = Rat(s.basis2(k, c)) / 2;
    s.basis[k] = v;
  }
  s.gram = ZMat(r, r);
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = 0; b < r; ++b) {
      Rat v = inner_product(m.gram10(), s.basis[a], s.basis[b]);
      if (denominator(v) != 1) throw std::logic_error("sublattice Gram is not integral");
      s.gram(a, b) = numerator(v);
    }
  }
  return s;
}

}  // namespace

Sublattice span_of_classes(const EnriquesModel& m, const std::vector<int>& idxs) {
  if (idxs.empty()) throw std::invalid_argument("span_of_classes: empty selection");
  ZMat rows(idxs.size(), kRank);
  for (std::size_t r = 0; r < idxs.size(); ++r) {
    const LatticeVector& v = m.class_vector(idxs[r]);
    for (std::size_t c = 0; c < kRank; ++c) {
      Rat d = 2 * v[c];
      if (denominator(d) != 1) throw std::logic_error("span_of_classes: coordinates not half-integral");
      rows(r, c) = numerator(d);
    }
  }
  return sublattice_from_doubled_rows(m, rows);
}

Sublattice curve_lattice(const EnriquesModel& m) {
  std::vector<int> idxs(kNumCurves);
  std::iota(idxs.begin(), idxs.end(), 0);
  return span_of_classes(m, idxs);
}

Sublattice ambient_even_unimodular(const EnriquesModel& m) {
  Sublattice curves = curve_lattice(m);
  // Append half the eight-cycle class H - E13 - E24; in doubled coordinates
  // that is the class itself.
  ZMat rows(curves.basis2.rows() + 1, kRank);
  for (std::size_t r = 0; r < curves.basis2.rows(); ++r)
    for (std::size_t c = 0; c < kRank; ++c) rows(r, c) = curves.basis2(r, c);
  LatticeVector s = m.h();
  s[static_cast<std::size_t>(edge_index(1, 3))] -= 1;
  s[static_cast<std::size_t>(edge_index(2, 4))] -= 1;
  for (std::size_t c = 0; c < kRank; ++c) {
    rows(curves.basis2.rows(), c) = numerator(s[c]);
  }
  Sublattice amb = sublattice_from_doubled_rows(m, rows);
  if (amb.rank() != kRank) throw std::logic_error("ambient lattice: wrong rank");
  QMat g(kRank, kRank);
  for (std::size_t a = 0; a < kRank; ++a)
    for (std::size_t b = 0; b < kRank; ++b) g(a, b) = Rat(amb.gram(a, b));
  if (determinant(g) != -1) throw std::logic_error("ambient lattice: determinant is not -1");
  for (std::size_t a = 0; a < kRank; ++a) {
    if (amb.gram(a, a) % 2 != 0) throw std::logic_error("ambient lattice: odd diagonal");
  }
  // Every curve class must be a member.
  for (int k = 0; k < kNumCurves; ++k) {
    if (!amb.coords(m.class_vector(k))) throw std::logic_error("ambient lattice: curve class missing");
  }
  return amb;
}

LatticeInvariants curve_lattice_invariants(const EnriquesModel& m,
                                           const std::vector<int>& idxs) {
  Sublattice s = span_of_classes(m, idxs);
  LatticeInvariants out;
  out.rank = s.rank();
  QMat g(s.rank(), s.rank());
  ZMat gi(s.rank(), s.rank());
  for (std::size_t a = 0; a < s.rank(); ++a) {
    for (std::size_t b = 0; b < s.rank(); ++b) {
      g(a, b) = Rat(s.gram(a, b));
      gi(a, b) = s.gram(a, b);
    }
  }
  out.det = determinant(g);
  out.smith = smith_normal_form(gi);
  return out;
}

std::string model_to_json(const EnriquesModel& m) {
  nlohmann::ordered_json j;
  j["format"] = "elat-model";
  j["version"] = 1;
  std::vector<std::string> basis_order;
  for (int k = 0; k < kRank; ++k) basis_order.push_back(m.label(k).name());
  j["basis_order"] = basis_order;
  std::vector<std::string> labels;
  for (int k = 0; k < kNumClasses; ++k) labels.push_back(m.label(k).name());
  j["labels"] = labels;
  nlohmann::ordered_json classes = nlohmann::ordered_json::object();
  for (int k = 0; k < kNumClasses; ++k) {
    std::vector<std::string> coords;
    for (const Rat& v : m.class_vector(k)) coords.push_back(rat_to_string(v));
    classes[m.label(k).name()] = coords;
  }
  j["classes"] = classes;
  std::vector<std::string> hc;
  for (const Rat& v : m.h()) hc.push_back(rat_to_string(v));
  j["H"] = hc;
  auto gram_to_json = [](const GramMatrix& g) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t a = 0; a < g.dim(); ++a) {
      std::vector<std::string> row;
      for (std::size_t b = 0; b < g.dim(); ++b) row.push_back(rat_to_string(g(a, b)));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  j["gram10"] = gram_to_json(m.gram10());
  j["gram20"] = gram_to_json(m.gram20());
  return j.dump(2) + "\n";
}

EnriquesModel model_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.at("format").get<std::string>() != "elat-model") {
    throw std::invalid_argument("model_from_json: unrecognized format tag");
  }
  std::vector<std::string> names = j.at("labels").get<std::vector<std::string>>();
  if (names.size() != kNumClasses) throw std::invalid_argument("model_from_json: need 20 labels");
  std::array<RootLabel, kNumClasses> labels{};
  for (std::size_t k = 0; k < names.size(); ++k) {
    auto l = parse_label(names[k]);
    if (!l) throw std::invalid_argument("model_from_json: bad label " + names[k]);
    labels[k] = *l;
  }
  auto parse_vec = [](const nlohmann::json& a) {
    QVec v;
    for (const auto& e : a) {
      if (e.is_string()) {
        v.push_back(rat_from_string(e.get<std::string>()));
      } else {
        v.push_back(Rat(e.get<long long>()));
      }
    }
    return v;
  };
  std::vector<LatticeVector> classes;
  const auto& cj = j.at("classes");
  for (const auto& name : names) classes.push_back(parse_vec(cj.at(name)));
  auto parse_gram = [&parse_vec](const nlohmann::json& a) {
    std::vector<QVec> rows;
    for (const auto& r : a) rows.push_back(parse_vec(r));
    QMat g(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != g.cols()) throw std::invalid_argument("model_from_json: ragged Gram matrix");
      for (std::size_t k = 0; k < rows[i].size(); ++k) g(i, k) = rows[i][k];
    }
    return g;
  };
  GramMatrix g10(parse_gram(j.at("gram10")));
  GramMatrix g20(parse_gram(j.at("gram20")));
  LatticeVector h = parse_vec(j.at("H"));
  return EnriquesModel(labels, std::move(classes), std::move(g10), std::move(g20), h);
}

}  // namespace elat
