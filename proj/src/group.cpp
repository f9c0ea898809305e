#include "elat/group.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace elat {

namespace {

std::vector<int> reduce_word(const std::vector<int>& raw) {
  std::vector<int> out;
  for (int letter : raw) {
    if (letter < 1 || letter > 4) throw std::invalid_argument("word letters must be 1..4");
    if (!out.empty() && out.back() == letter) {
      out.pop_back();
    } else {
      out.push_back(letter);
    }
  }
  return out;
}

}  // namespace

Perm4 Perm4::compose(const Perm4& other) const {
  Perm4 out;
  for (int v = 1; v <= 4; ++v) {
    out.img[static_cast<std::size_t>(v - 1)] = (*this)(other(v));
  }
  return out;
}

Perm4 Perm4::inverse() const {
  Perm4 out;
  for (int v = 1; v <= 4; ++v) {
    out.img[static_cast<std::size_t>((*this)(v)-1)] = v;
  }
  return out;
}

std::vector<Perm4> all_permutations() {
  std::array<int, 4> a{1, 2, 3, 4};
  std::vector<Perm4> out;
  do {
    out.push_back(Perm4{a});
  } while (std::next_permutation(a.begin(), a.end()));
  return out;
}

GroupElement identity_element() { return {}; }

GroupElement sigma_element(int i) {
  if (i < 1 || i > 4) throw std::invalid_argument("sigma index must be 1..4");
  return {Perm4::identity(), {i}};
}

GroupElement perm_element(const Perm4& p) { return {p, {}}; }

GroupElement normal_form(const Perm4& perm, const std::vector<int>& raw_word) {
  return {perm, reduce_word(raw_word)};
}

GroupElement multiply(const GroupElement& g, const GroupElement& h) {
  // h applies first; h's permutation drags g's letters across the seam.
  Perm4 rho_inv = h.perm.inverse();
  std::vector<int> combined = h.word;
  combined.reserve(h.word.size() + g.word.size());
  for (int letter : g.word) combined.push_back(rho_inv(letter));
  return {g.perm.compose(h.perm), reduce_word(combined)};
}

GroupElement inverse(const GroupElement& g) {
  std::vector<int> w(g.word.rbegin(), g.word.rend());
  for (int& letter : w) letter = g.perm(letter);
  return {g.perm.inverse(), std::move(w)};
}

ZMat reflection_matrix(const EnriquesModel& m, int class_index) {
  const LatticeVector& e = m.class_vector(class_index);
  // x -> x + (x, e) e for a (-2)-class e.
  QVec p(kRank, Rat(0));
  for (std::size_t j = 0; j < kRank; ++j) {
    QVec basis_j(kRank, Rat(0));
    basis_j[j] = 1;
    p[j] = inner_product(m.gram10(), basis_j, e);
  }
  ZMat out(kRank, kRank);
  for (std::size_t i = 0; i < kRank; ++i) {
    for (std::size_t j = 0; j < kRank; ++j) {
      Rat v = (i == j ? Rat(1) : Rat(0)) + e[i] * p[j];
      if (denominator(v) != 1) {
        throw std::logic_error("reflection_matrix: non-integral entry for " +
                               m.label(class_index).name());
      }
      out(i, j) = numerator(v);
    }
  }
  return out;
}

ZMat to_isometry(const GroupElement& g, const EnriquesModel& m) {
  ZMat acc = ZMat::identity(kRank);
  for (int letter : g.word) {
    acc = reflection_matrix(m, center_index(letter)) * acc;
  }
  if (!g.perm.is_identity()) {
    ZMat p(kRank, kRank);
    for (int j = 0; j < static_cast<int>(kRank); ++j) {
      RootLabel image = permute_label(m.label(j), g.perm.img);
      int i = m.index_of(image.name());
      if (i < 0 || i >= static_cast<int>(kRank)) {
        throw std::logic_error("to_isometry: permutation leaves the basis block");
      }
      p(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = 1;
    }
    acc = p * acc;
  }
  return acc;
}

LatticeVector apply_isometry(const ZMat& iso, const LatticeVector& x) {
  if (iso.cols() != x.size()) throw std::invalid_argument("apply_isometry: size mismatch");
  LatticeVector y(iso.rows(), Rat(0));
  for (std::size_t i = 0; i < iso.rows(); ++i) {
    for (std::size_t j = 0; j < iso.cols(); ++j) {
      if (iso(i, j) != 0) y[i] += Rat(iso(i, j)) * x[j];
    }
  }
  return y;
}

bool is_isometry(const ZMat& iso, const EnriquesModel& m) {
  const std::size_t n = kRank;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      Rat v = 0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (iso(i, a) != 0 && iso(j, b) != 0) {
            v += Rat(iso(i, a)) * m.gram10()(i, j) * Rat(iso(j, b));
          }
        }
      }
      if (v != m.gram10()(a, b)) return false;
    }
  }
  return true;
}

std::string isometry_key(const ZMat& iso) {
  std::ostringstream os;
  for (std::size_t i = 0; i < iso.rows(); ++i) {
    for (std::size_t j = 0; j < iso.cols(); ++j) {
      os << iso(i, j) << ",";
    }
  }
  return os.str();
}

bool check_parity(const EnriquesModel& m) {
  for (int i = 1; i <= 4; ++i) {
    for (int c = 0; c < kNumCurves; ++c) {
      Rat v = m.pairing(center_index(i), c);
      if (denominator(v) != 1 || numerator(v) % 2 != 0) return false;
    }
  }
  return true;
}

GroupElement project_to_W4C(const EnriquesModel& m, const std::vector<int>& reflection_word) {
  if (!check_parity(m)) {
    throw std::logic_error("project_to_W4C: parity precondition failed");
  }
  std::vector<int> letters;
  for (int idx : reflection_word) {
    if (idx < 0 || idx >= kNumClasses) throw std::invalid_argument("reflection index out of range");
    if (idx >= kNumCurves) letters.push_back(idx - kNumCurves + 1);
  }
  return {Perm4::identity(), reduce_word(letters)};
}

std::vector<std::vector<int>> reduced_words_up_to(int max_len) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self) -> void {
    out.push_back(cur);
    if (static_cast<int>(cur.size()) == max_len) return;
    for (int letter = 1; letter <= 4; ++letter) {
      if (!cur.empty() && cur.back() == letter) continue;
      cur.push_back(letter);
      self(self);
      cur.pop_back();
    }
  };
  rec(rec);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

std::string perm_to_string(const Perm4& p) {
  if (p.is_identity()) return "id";
  std::array<bool, 5> seen{};
  std::string out;
  for (int start = 1; start <= 4; ++start) {
    if (seen[static_cast<std::size_t>(start)] || p(start) == start) continue;
    out += "(";
    int v = start;
    bool first = true;
    do {
      seen[static_cast<std::size_t>(v)] = true;
      if (!first) out += " ";
      out += std::to_string(v);
      first = false;
      v = p(v);
    } while (v != start);
    out += ")";
  }
  return out;
}

std::optional<Perm4> parse_perm(const std::string& text) {
  std::string t;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c)) && c != ',') t += c;
  }
  if (t.empty() || t == "id" || t == "()" || t == "e") return Perm4::identity();
  Perm4 out;
  std::array<bool, 5> used{};
  std::size_t pos = 0;
  while (pos < t.size()) {
    if (t[pos] != '(') return std::nullopt;
    std::size_t close = t.find(')', pos);
    if (close == std::string::npos) return std::nullopt;
    std::vector<int> cycle;
    for (std::size_t k = pos + 1; k < close; ++k) {
      if (t[k] < '1' || t[k] > '4') return std::nullopt;
      cycle.push_back(t[k] - '0');
    }
    if (cycle.size() < 2) return std::nullopt;
    for (int v : cycle) {
      if (used[static_cast<std::size_t>(v)]) return std::nullopt;  // cycles must be disjoint
      used[static_cast<std::size_t>(v)] = true;
    }
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      out.img[static_cast<std::size_t>(cycle[k] - 1)] = cycle[(k + 1) % cycle.size()];
    }
    pos = close + 1;
  }
  return out;
}

std::string word_to_string(const std::vector<int>& word) {
  if (word.empty()) return "e";
  std::string out;
  for (std::size_t k = 0; k < word.size(); ++k) {
    if (k) out += " ";
    out += "s" + std::to_string(word[k]);
  }
  return out;
}

std::optional<std::vector<int>> parse_sigma_word(const std::string& text) {
  std::istringstream is(text);
  std::vector<int> out;
  std::string tok;
  while (is >> tok) {
    if (tok == "e" || tok == "id") continue;
    if (tok.size() == 2 && tok[0] == 's' && tok[1] >= '1' && tok[1] <= '4') {
      out.push_back(tok[1] - '0');
    } else {
      return std::nullopt;
    }
  }
  return out;
}

std::string element_to_string(const GroupElement& g) {
  return "(" + perm_to_string(g.perm) + ", " + word_to_string(g.word) + ")";
}

std::optional<std::vector<int>> parse_reflection_word(const EnriquesModel& m,
                                                      const std::string& text) {
  std::istringstream is(text);
  std::vector<int> out;
  std::string tok;
  while (is >> tok) {
    if (tok == "e" || tok == "id") continue;
    if (tok.size() == 2 && tok[0] == 's' && tok[1] >= '1' && tok[1] <= '4') {
      out.push_back(center_index(tok[1] - '0'));
      continue;
    }
    if (tok.size() >= 2 && tok[0] == 'r') {
      int idx = m.index_of(tok.substr(1));
      if (idx >= 0) {
        out.push_back(idx);
        continue;
      }
    }
    return std::nullopt;
  }
  return out;
}

}  // namespace elat
