#include "elat/coxeter.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace elat {

namespace {

using I128 = __int128;

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

// Connected components of the induced subdiagram, each sorted.
std::vector<std::vector<int>> subset_components(const CoxeterDiagram& d,
                                                const std::vector<int>& s) {
  Dsu dsu(static_cast<int>(s.size()));
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = a + 1; b < s.size(); ++b) {
      if (d.weight(s[a], s[b]) != 0) dsu.unite(static_cast<int>(a), static_cast<int>(b));
    }
  }
  std::map<int, std::vector<int>> groups;
  for (std::size_t a = 0; a < s.size(); ++a) groups[dsu.find(static_cast<int>(a))].push_back(s[a]);
  std::vector<std::vector<int>> out;
  for (auto& [root, verts] : groups) out.push_back(std::move(verts));
  return out;
}

// Fraction-free positive-semidefinite test of the negated form on a subset.
// Bareiss elimination with exact divisions; zero pivots must have a zero
// active row (each contributes one kernel dimension).
SubsetShape shape_of(const CoxeterDiagram& d, const std::vector<int>& s) {
  const int k = static_cast<int>(s.size());
  if (k == 0) return {true, 0};
  std::array<std::array<I128, 20>, 20> b{};
  for (int a = 0; a < k; ++a) {
    for (int c = 0; c < k; ++c) {
      b[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)] =
          a == c ? 2 : -d.weight(s[static_cast<std::size_t>(a)], s[static_cast<std::size_t>(c)]);
    }
  }
  I128 prev = 1;
  int corank = 0;
  for (int t = 0; t < k; ++t) {
    I128 p = b[static_cast<std::size_t>(t)][static_cast<std::size_t>(t)];
    if (p < 0) return {false, 0};
    if (p == 0) {
      for (int j = t + 1; j < k; ++j) {
        if (b[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)] != 0) return {false, 0};
      }
      ++corank;
      continue;
    }
    for (int i = t + 1; i < k; ++i) {
      for (int j = i; j < k; ++j) {
        I128 v = (b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * p -
                  b[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] *
                      b[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)]) /
                 prev;
        b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
        b[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
      }
    }
    prev = p;
  }
  return {true, corank};
}

// Affine template recognition on a connected all-weight-checked component.
std::optional<ComponentType> classify_component(const CoxeterDiagram& d,
                                                const std::vector<int>& comp) {
  const int k = static_cast<int>(comp.size());
  if (k < 2) return std::nullopt;
  int edge_count = 0;
  bool has_double = false;
  std::vector<int> degree(static_cast<std::size_t>(k), 0);
  for (int a = 0; a < k; ++a) {
    for (int c = a + 1; c < k; ++c) {
      int w = d.weight(comp[static_cast<std::size_t>(a)], comp[static_cast<std::size_t>(c)]);
      if (w == 0) continue;
      ++edge_count;
      if (w == 2) has_double = true;
      ++degree[static_cast<std::size_t>(a)];
      ++degree[static_cast<std::size_t>(c)];
    }
  }
  if (has_double) {
    if (k == 2 && edge_count == 1) return ComponentType{'A', 1};
    return std::nullopt;
  }
  if (edge_count == k && k >= 3 &&
      std::all_of(degree.begin(), degree.end(), [](int x) { return x == 2; })) {
    return ComponentType{'A', k - 1};
  }
  if (edge_count != k - 1) return std::nullopt;  // not a tree
  int max_deg = *std::max_element(degree.begin(), degree.end());
  auto count_deg = [&](int v) { return static_cast<int>(std::count(degree.begin(), degree.end(), v)); };
  if (max_deg == 4) {
    if (k == 5 && count_deg(4) == 1 && count_deg(1) == 4) return ComponentType{'D', 4};
    return std::nullopt;
  }
  if (max_deg == 3 && count_deg(3) == 2) {
    // Both branch vertices must carry exactly two leaves.
    for (int a = 0; a < k; ++a) {
      if (degree[static_cast<std::size_t>(a)] != 3) continue;
      int leaves = 0;
      for (int c = 0; c < k; ++c) {
        if (c != a && d.weight(comp[static_cast<std::size_t>(a)], comp[static_cast<std::size_t>(c)]) != 0 &&
            degree[static_cast<std::size_t>(c)] == 1) {
          ++leaves;
        }
      }
      if (leaves != 2) return std::nullopt;
    }
    return ComponentType{'D', k - 1};
  }
  if (max_deg == 3 && count_deg(3) == 1) {
    // Arm lengths from the unique branch vertex, descending.
    int branch = 0;
    while (degree[static_cast<std::size_t>(branch)] != 3) ++branch;
    std::vector<int> arms;
    for (int c = 0; c < k; ++c) {
      if (c == branch || d.weight(comp[static_cast<std::size_t>(branch)], comp[static_cast<std::size_t>(c)]) == 0) continue;
      int len = 1;
      int prev = branch, cur = c;
      while (true) {
        int next = -1;
        for (int x = 0; x < k; ++x) {
          if (x != prev && x != cur &&
              d.weight(comp[static_cast<std::size_t>(cur)], comp[static_cast<std::size_t>(x)]) != 0) {
            next = x;
            break;
          }
        }
        if (next < 0) break;
        prev = cur;
        cur = next;
        ++len;
      }
      arms.push_back(len);
    }
    std::sort(arms.rbegin(), arms.rend());
    if (arms == std::vector<int>{2, 2, 2}) return ComponentType{'E', 6};
    if (arms == std::vector<int>{3, 3, 1}) return ComponentType{'E', 7};
    if (arms == std::vector<int>{5, 2, 1}) return ComponentType{'E', 8};
    return std::nullopt;
  }
  return std::nullopt;  // plain path (definite) or unrecognized shape
}

// Exact cross-check that a component is affine: its form must have a
// one-dimensional kernel spanned by a strictly positive vector.
bool affine_kernel_check(const CoxeterDiagram& d, const std::vector<int>& comp) {
  const std::size_t k = comp.size();
  QMat g(k, k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t c = 0; c < k; ++c) {
      g(a, c) = a == c ? Rat(-2) : Rat(d.weight(comp[a], comp[c]));
    }
  }
  auto ker = kernel_basis_of(g);
  if (ker.size() != 1) return false;
  return std::all_of(ker[0].begin(), ker[0].end(), [](const Rat& v) { return v > 0; });
}

int family_index_of(const std::string& type_string) {
  if (type_string == "E7~+A1~") return 1;
  if (type_string == "E6~+A2~") return 2;
  if (type_string == "D6~+A1~+A1~") return 3;
  if (type_string == "A7~+A1~") return 4;
  if (type_string == "A5~+A2~+A1~") return 5;
  return 0;
}

bool canonical_less(const ParabolicSubdiagram& a, const ParabolicSubdiagram& b) {
  int fa = a.family_index == 0 ? 99 : a.family_index;
  int fb = b.family_index == 0 ? 99 : b.family_index;
  return std::tie(b.rank, fa, a.type_string, a.vertices) <
         std::tie(a.rank, fb, b.type_string, b.vertices);
}

}  // namespace

CoxeterDiagram::CoxeterDiagram(std::vector<std::string> names,
                               std::vector<Configuration> tags,
                               std::vector<std::vector<int>> weights)
    : names_(std::move(names)), tags_(std::move(tags)), weights_(std::move(weights)) {
  const std::size_t n = names_.size();
  if (tags_.size() != n || weights_.size() != n) {
    throw std::invalid_argument("CoxeterDiagram: size mismatch");
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (weights_[a].size() != n) throw std::invalid_argument("CoxeterDiagram: ragged weights");
    if (weights_[a][a] != 0) throw std::invalid_argument("CoxeterDiagram: nonzero diagonal");
    for (std::size_t b = 0; b < n; ++b) {
      if (weights_[a][b] != weights_[b][a]) throw std::invalid_argument("CoxeterDiagram: asymmetric weights");
      if (weights_[a][b] < 0 || weights_[a][b] > 2) {
        throw std::invalid_argument("CoxeterDiagram: weights must be 0, 1 or 2");
      }
    }
  }
}

CoxeterDiagram CoxeterDiagram::from_model(const EnriquesModel& m) {
  std::vector<std::string> names;
  std::vector<Configuration> tags;
  std::vector<std::vector<int>> w(kNumClasses, std::vector<int>(kNumClasses, 0));
  for (int a = 0; a < kNumClasses; ++a) {
    names.push_back(m.label(a).name());
    tags.push_back(m.label(a).configuration());
    for (int b = 0; b < kNumClasses; ++b) {
      if (a == b) continue;
      const Rat& v = m.pairing(a, b);
      if (denominator(v) != 1 || v < 0 || v > 2) {
        throw std::logic_error("from_model: pairing outside {0,1,2} between " +
                               m.label(a).name() + " and " + m.label(b).name());
      }
      w[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = static_cast<int>(numerator(v));
    }
  }
  return CoxeterDiagram(std::move(names), std::move(tags), std::move(w));
}

CoxeterDiagram CoxeterDiagram::induced(const std::vector<int>& vertices) const {
  std::vector<std::string> names;
  std::vector<Configuration> tags;
  std::vector<std::vector<int>> w(vertices.size(), std::vector<int>(vertices.size(), 0));
  for (std::size_t a = 0; a < vertices.size(); ++a) {
    names.push_back(name(vertices[a]));
    tags.push_back(tag(vertices[a]));
    for (std::size_t b = 0; b < vertices.size(); ++b) {
      if (a != b) w[a][b] = weight(vertices[a], vertices[b]);
    }
  }
  return CoxeterDiagram(std::move(names), std::move(tags), std::move(w));
}

SubsetShape subset_shape(const CoxeterDiagram& d, const std::vector<int>& s) {
  return shape_of(d, s);
}

bool is_negative_semidefinite(const CoxeterDiagram& d, const std::vector<int>& s) {
  return shape_of(d, s).semidefinite;
}

std::vector<std::vector<int>> enumerate_semidefinite_subsets(const CoxeterDiagram& d) {
  std::vector<std::vector<int>> out;
  out.push_back({});
  std::vector<int> cur;
  const int n = d.size();
  // Negative-semidefinite subsets form a downward-closed family, so depth
  // first extension by larger vertices visits each exactly once.
  auto rec = [&](auto&& self, int last) -> void {
    for (int v = last + 1; v < n; ++v) {
      cur.push_back(v);
      if (shape_of(d, cur).semidefinite) {
        out.push_back(cur);
        self(self, v);
      }
      cur.pop_back();
    }
  };
  rec(rec, -1);
  return out;
}

std::vector<std::vector<int>> enumerate_semidefinite_subsets_naive(const CoxeterDiagram& d) {
  const int n = d.size();
  if (n > 25) throw std::invalid_argument("naive enumeration limited to 25 vertices");
  std::vector<std::vector<int>> out;
  std::vector<int> s;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    s.clear();
    for (int v = 0; v < n; ++v) {
      if (mask & (1u << v)) s.push_back(v);
    }
    if (shape_of(d, s).semidefinite) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> enumerate_semidefinite_subsets_parallel(const CoxeterDiagram& d,
                                                                      int threads) {
  const int n = d.size();
  if (n > 25) throw std::invalid_argument("naive enumeration limited to 25 vertices");
#ifndef _OPENMP
  (void)threads;
  return enumerate_semidefinite_subsets_naive(d);
#else
  const std::uint32_t total = 1u << n;
  int t = threads > 0 ? threads : omp_get_max_threads();
  std::vector<std::vector<std::vector<int>>> buckets(static_cast<std::size_t>(t));
#pragma omp parallel num_threads(t)
  {
    int me = omp_get_thread_num();
    std::vector<int> s;
#pragma omp for schedule(static)
    for (std::int64_t mask = 0; mask < static_cast<std::int64_t>(total); ++mask) {
      s.clear();
      for (int v = 0; v < n; ++v) {
        if (mask & (1u << v)) s.push_back(v);
      }
      if (shape_of(d, s).semidefinite) buckets[static_cast<std::size_t>(me)].push_back(s);
    }
  }
  std::vector<std::vector<int>> out;
  for (auto& b : buckets) {
    for (auto& s : b) out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
#endif
}

std::optional<ParabolicSubdiagram> analyze_parabolic(const CoxeterDiagram& d,
                                                     const std::vector<int>& s_in) {
  std::vector<int> s = s_in;
  std::sort(s.begin(), s.end());
  if (s.empty()) return std::nullopt;
  SubsetShape shape = shape_of(d, s);
  if (!shape.semidefinite) return std::nullopt;
  auto comps = subset_components(d, s);
  std::vector<ComponentType> types;
  for (const auto& c : comps) {
    auto t = classify_component(d, c);
    if (!t) {
      // Not an affine shape: the component must be definite, which the
      // corank accounting confirms.
      if (shape.corank >= static_cast<int>(comps.size())) {
        throw std::logic_error("analyze_parabolic: corank inconsistent with non-affine component");
      }
      return std::nullopt;
    }
    types.push_back(*t);
  }
  if (shape.corank != static_cast<int>(comps.size())) {
    throw std::logic_error("analyze_parabolic: template/corank disagreement");
  }
  for (std::size_t k = 0; k < comps.size(); ++k) {
    if (!affine_kernel_check(d, comps[k])) {
      throw std::logic_error("analyze_parabolic: kernel cross-check failed");
    }
    if (types[k].rank != static_cast<int>(comps[k].size()) - 1) {
      throw std::logic_error("analyze_parabolic: rank/size mismatch");
    }
  }

  std::vector<std::size_t> order(comps.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(types[b].rank, types[a].series, comps[a]) <
           std::tie(types[a].rank, types[b].series, comps[b]);
  });

  ParabolicSubdiagram p;
  p.vertices = s;
  for (std::size_t k : order) {
    p.components.push_back(comps[k]);
    p.types.push_back(types[k]);
    p.rank += types[k].rank;
    if (!p.type_string.empty()) p.type_string += "+";
    p.type_string += types[k].to_string();
  }
  for (int v : s) {
    p.census[static_cast<std::size_t>(d.tag(v))] += 1;
  }
  p.family_index = family_index_of(p.type_string);
  return p;
}

std::vector<ParabolicSubdiagram> maximal_parabolics(const CoxeterDiagram& d) {
  auto subsets = enumerate_semidefinite_subsets(d);
  std::vector<ParabolicSubdiagram> paras;
  std::vector<std::uint32_t> masks;
  for (const auto& s : subsets) {
    auto p = analyze_parabolic(d, s);
    if (!p) continue;
    std::uint32_t m = 0;
    for (int v : s) m |= 1u << v;
    paras.push_back(std::move(*p));
    masks.push_back(m);
  }
  std::vector<ParabolicSubdiagram> out;
  for (std::size_t a = 0; a < paras.size(); ++a) {
    bool maximal = true;
    for (std::size_t b = 0; b < paras.size(); ++b) {
      if (a != b && (masks[a] & masks[b]) == masks[a] && masks[a] != masks[b]) {
        maximal = false;
        break;
      }
    }
    if (maximal) out.push_back(paras[a]);
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

FiniteVolumeReport check_finite_volume(const CoxeterDiagram& d, int target_rank) {
  FiniteVolumeReport rep;
  rep.target_rank = target_rank;
  auto subsets = enumerate_semidefinite_subsets(d);
  std::vector<ParabolicSubdiagram> paras;
  for (const auto& s : subsets) {
    auto p = analyze_parabolic(d, s);
    if (p) paras.push_back(std::move(*p));
  }
  for (const auto& p : paras) {
    if (p.rank == target_rank) rep.rank_target.push_back(p);
  }
  std::sort(rep.rank_target.begin(), rep.rank_target.end(), canonical_less);

  bool all_witnessed = true;
  for (const auto& p : paras) {
    if (p.components.size() != 1) continue;  // connected affine subdiagrams only
    int witness = -1;
    for (std::size_t k = 0; k < rep.rank_target.size(); ++k) {
      const auto& cand = rep.rank_target[k].components;
      if (std::find(cand.begin(), cand.end(), p.vertices) != cand.end()) {
        witness = static_cast<int>(k);
        break;
      }
    }
    if (witness < 0) all_witnessed = false;
    rep.witnesses.emplace_back(p.vertices, witness);
  }
  rep.finite_volume = !rep.witnesses.empty() && all_witnessed;
  return rep;
}

std::vector<std::vector<int>> diagram_automorphisms(const CoxeterDiagram& d) {
  const int n = d.size();
  // Per-vertex invariant: sorted multiset of incident weights.
  std::vector<std::vector<int>> profile(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a != b) profile[static_cast<std::size_t>(a)].push_back(d.weight(a, b));
    }
    std::sort(profile[static_cast<std::size_t>(a)].begin(), profile[static_cast<std::size_t>(a)].end());
  }
  std::vector<std::vector<int>> out;
  std::vector<int> img(static_cast<std::size_t>(n), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  auto rec = [&](auto&& self, int v) -> void {
    if (v == n) {
      out.push_back(img);
      return;
    }
    for (int c = 0; c < n; ++c) {
      if (used[static_cast<std::size_t>(c)]) continue;
      if (profile[static_cast<std::size_t>(v)] != profile[static_cast<std::size_t>(c)]) continue;
      bool ok = true;
      for (int u = 0; u < v; ++u) {
        if (d.weight(v, u) != d.weight(c, img[static_cast<std::size_t>(u)])) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      img[static_cast<std::size_t>(v)] = c;
      used[static_cast<std::size_t>(c)] = true;
      self(self, v + 1);
      used[static_cast<std::size_t>(c)] = false;
      img[static_cast<std::size_t>(v)] = -1;
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace elat
