#include "heisfock/polynomial.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>

namespace heisfock {

namespace {

cplx pow_small(cplx base, int e) {
  cplx r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string format_complex(cplx z) {
  const double im = z.imag();
  std::string out = format_double(z.real());
  if (im >= 0.0 || std::isnan(im)) out += "+";
  out += format_double(im);
  out += "i";
  return out;
}

double parse_double(std::string_view sv) {
  double x = 0.0;
  auto res = std::from_chars(sv.data(), sv.data() + sv.size(), x);
  if (res.ec != std::errc() || res.ptr != sv.data() + sv.size())
    throw std::invalid_argument("bad numeric literal: '" + std::string(sv) + "'");
  return x;
}

cplx parse_complex(std::string_view sv) {
  if (sv.empty()) throw std::invalid_argument("empty coefficient");
  if (sv.back() != 'i') return cplx(parse_double(sv), 0.0);
  sv.remove_suffix(1);
  // Split at the sign that starts the imaginary part (skip position 0 and
  // exponent signs).
  for (std::size_t p = sv.size(); p-- > 1;) {
    if ((sv[p] == '+' || sv[p] == '-') && sv[p - 1] != 'e' && sv[p - 1] != 'E') {
      const double re = parse_double(sv.substr(0, p));
      const double im = sv[p] == '+' ? parse_double(sv.substr(p + 1))
                                     : -parse_double(sv.substr(p + 1));
      return cplx(re, im);
    }
  }
  return cplx(0.0, parse_double(sv));  // pure imaginary "2i"
}

std::string_view trim(std::string_view sv) {
  while (!sv.empty() && sv.front() == ' ') sv.remove_prefix(1);
  while (!sv.empty() && sv.back() == ' ') sv.remove_suffix(1);
  return sv;
}

}  // namespace

HoloPoly::HoloPoly(StructurePtr s, std::map<Monomial, cplx> terms)
    : s_(std::move(s)), terms_(std::move(terms)) {
  wdeg_ = recompute_weighted_degree();
}

HoloPoly HoloPoly::from_terms(StructurePtr s, std::map<Monomial, cplx> terms) {
  for (auto it = terms.begin(); it != terms.end();) {
    if (static_cast<int>(it->first.size()) != s->dim())
      throw std::invalid_argument("monomial length does not match the structure");
    for (int e : it->first)
      if (e < 0) throw std::invalid_argument("negative exponent in monomial");
    it = (it->second == cplx(0.0)) ? terms.erase(it) : std::next(it);
  }
  return HoloPoly(std::move(s), std::move(terms));
}

int HoloPoly::recompute_weighted_degree() const {
  int deg = -1;
  const int n = s_->n();
  for (const auto& [mono, coef] : terms_) {
    int d = 0;
    for (int i = 0; i < static_cast<int>(mono.size()); ++i)
      d += (i < n) ? mono[i] : 2 * mono[i];
    deg = std::max(deg, d);
  }
  return deg;
}

HoloPoly HoloPoly::zero(StructurePtr s) { return HoloPoly(std::move(s), {}); }

HoloPoly HoloPoly::constant(StructurePtr s, cplx value) {
  std::map<Monomial, cplx> t;
  if (value != cplx(0.0)) t[Monomial(s->dim(), 0)] = value;
  return HoloPoly(std::move(s), std::move(t));
}

HoloPoly HoloPoly::coordinate(StructurePtr s, int index) {
  if (index < 0 || index >= s->dim())
    throw std::invalid_argument("coordinate index out of range");
  Monomial m(s->dim(), 0);
  m[index] = 1;
  std::map<Monomial, cplx> t;
  t[std::move(m)] = 1.0;
  return HoloPoly(std::move(s), std::move(t));
}

HoloPoly HoloPoly::operator+(const HoloPoly& o) const {
  auto t = terms_;
  for (const auto& [mono, coef] : o.terms_) t[mono] += coef;
  return from_terms(s_, std::move(t));
}

HoloPoly HoloPoly::operator-(const HoloPoly& o) const {
  auto t = terms_;
  for (const auto& [mono, coef] : o.terms_) t[mono] -= coef;
  return from_terms(s_, std::move(t));
}

HoloPoly HoloPoly::operator*(const HoloPoly& o) const {
  std::map<Monomial, cplx> t;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) {
      Monomial m(ma.size());
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      t[std::move(m)] += ca * cb;
    }
  return from_terms(s_, std::move(t));
}

HoloPoly HoloPoly::operator*(cplx z) const {
  auto t = terms_;
  for (auto& [mono, coef] : t) coef *= z;
  return from_terms(s_, std::move(t));
}

HoloPoly HoloPoly::partial(int index) const {
  std::map<Monomial, cplx> t;
  for (const auto& [mono, coef] : terms_) {
    if (mono[index] == 0) continue;
    Monomial m = mono;
    const int e = m[index]--;
    t[std::move(m)] += coef * static_cast<double>(e);
  }
  return from_terms(s_, std::move(t));
}

cplx HoloPoly::evaluate(const GroupElement& g) const {
  check_element(*s_, g);
  const int n = s_->n();
  cplx total = 0.0;
  for (const auto& [mono, coef] : terms_) {
    cplx v = coef;
    for (int i = 0; i < static_cast<int>(mono.size()); ++i)
      if (mono[i] > 0) v *= pow_small(i < n ? g.w[i] : g.c[i - n], mono[i]);
    total += v;
  }
  return total;
}

std::string HoloPoly::to_string() const {
  if (terms_.empty()) return "0+0i";
  const int n = s_->n();
  std::string out;
  for (const auto& [mono, coef] : terms_) {
    if (!out.empty()) out += " + ";
    out += format_complex(coef);
    for (int i = 0; i < static_cast<int>(mono.size()); ++i) {
      if (mono[i] == 0) continue;
      out += " * ";
      out += (i < n) ? "w" + std::to_string(i + 1) : "c" + std::to_string(i - n + 1);
      if (mono[i] > 1) out += "^" + std::to_string(mono[i]);
    }
  }
  return out;
}

HoloPoly parse_poly(StructurePtr s, const std::string& literal) {
  HoloPoly result = HoloPoly::zero(s);
  std::string_view rest = trim(literal);
  if (rest.empty()) throw std::invalid_argument("empty polynomial literal");
  while (true) {
    const auto cut = rest.find(" + ");
    std::string_view term = trim(cut == std::string_view::npos ? rest : rest.substr(0, cut));
    HoloPoly p = HoloPoly::zero(s);
    bool first = true;
    while (!term.empty()) {
      const auto star = term.find('*');
      std::string_view factor = trim(star == std::string_view::npos ? term : term.substr(0, star));
      term = star == std::string_view::npos ? std::string_view{} : trim(term.substr(star + 1));
      if (factor.empty()) throw std::invalid_argument("empty factor in polynomial literal");
      if (first) {
        p = HoloPoly::constant(s, parse_complex(factor));
        first = false;
        continue;
      }
      int exp = 1;
      if (const auto caret = factor.find('^'); caret != std::string_view::npos) {
        exp = static_cast<int>(parse_double(factor.substr(caret + 1)));
        if (exp < 0) throw std::invalid_argument("negative exponent");
        factor = factor.substr(0, caret);
      }
      if (factor.size() < 2 || (factor[0] != 'w' && factor[0] != 'c'))
        throw std::invalid_argument("bad variable '" + std::string(factor) + "'");
      const int one_based = static_cast<int>(parse_double(factor.substr(1)));
      const int index = factor[0] == 'w' ? one_based - 1 : s->n() + one_based - 1;
      if (index < 0 || index >= s->dim() || (factor[0] == 'w' && one_based > s->n()) ||
          (factor[0] == 'c' && one_based > s->N()))
        throw std::invalid_argument("variable '" + std::string(factor) +
                                    "' out of range for this structure");
      for (int i = 0; i < exp; ++i) p = p * HoloPoly::coordinate(s, index);
    }
    result = result + p;
    if (cut == std::string_view::npos) break;
    rest = rest.substr(cut + 3);
  }
  return result;
}

LieVector basis_vector(const HeisenbergStructure& s, int index) {
  LieVector h{Eigen::VectorXcd::Zero(s.n()), Eigen::VectorXcd::Zero(s.N())};
  if (index < s.n())
    h.w[index] = 1.0;
  else
    h.c[index - s.n()] = 1.0;
  return h;
}

HoloPoly dir_derive(const HoloPoly& f, const LieVector& v) {
  check_element(*f.structure(), v);
  const auto& s = *f.structure();
  HoloPoly out = HoloPoly::zero(f.structure());
  for (int j = 0; j < s.n(); ++j)
    if (v.w[j] != cplx(0.0)) out = out + f.partial(j) * v.w[j];
  for (int l = 0; l < s.N(); ++l)
    if (v.c[l] != cplx(0.0)) out = out + f.partial(s.n() + l) * v.c[l];
  return out;
}

HoloPoly lie_derive(const HoloPoly& f, const LieVector& h) {
  check_element(*f.structure(), h);
  const auto& s = *f.structure();
  HoloPoly out = HoloPoly::zero(f.structure());
  for (int j = 0; j < s.n(); ++j)
    if (h.w[j] != cplx(0.0)) out = out + f.partial(j) * h.w[j];
  for (int l = 0; l < s.N(); ++l) {
    HoloPoly dcl = f.partial(s.n() + l);
    if (dcl.is_zero()) continue;
    if (h.c[l] != cplx(0.0)) out = out + dcl * h.c[l];
    // the omega(w, A)/2 drift of the left-invariant field
    const Eigen::VectorXcd u = s.omega_matrix(l) * h.w;
    HoloPoly lin = HoloPoly::zero(f.structure());
    for (int i = 0; i < s.n(); ++i)
      if (u[i] != cplx(0.0))
        lin = lin + HoloPoly::coordinate(f.structure(), i) * (0.5 * u[i]);
    if (!lin.is_zero()) out = out + dcl * lin;
  }
  return out;
}

HoloPoly substitute_cut(const HoloPoly& f, int m) {
  const auto& s = *f.structure();
  if (m < 0 || m > s.n()) throw std::invalid_argument("projection level out of range");
  std::map<HoloPoly::Monomial, cplx> t;
  for (const auto& [mono, coef] : f.terms()) {
    bool cut = false;
    for (int j = m; j < s.n() && !cut; ++j) cut = mono[j] > 0;
    if (!cut) t[mono] = coef;
  }
  return HoloPoly::from_terms(f.structure(), std::move(t));
}

GradedTensor taylor_tensor(const HoloPoly& f, int max_rank) {
  if (max_rank < f.weighted_degree())
    throw std::invalid_argument("max_rank truncates the Taylor tensor below the weighted degree");
  const auto& s = *f.structure();
  GradedTensor out(f.structure(), max_rank);
  const GroupElement e = identity_element(s);
  std::vector<int> rev;  // word letters, innermost derivative first
  std::vector<int> word;
  const std::function<void(const HoloPoly&)> rec = [&](const HoloPoly& p) {
    word.assign(rev.rbegin(), rev.rend());
    out.set(word, p.evaluate(e));
    if (static_cast<int>(rev.size()) == max_rank || p.is_zero()) return;
    for (int j = 0; j < s.dim(); ++j) {
      rev.push_back(j);
      rec(lie_derive(p, basis_vector(s, j)));
      rev.pop_back();
    }
  };
  rec(f);
  return out;
}

namespace {

/// Partitions of {0..k-1} into blocks of size <= 2, built by pairing the
/// smallest free position with nothing or with each later free position.
void enumerate_pair_partitions(
    int k, const std::function<void(const std::vector<std::pair<int, int>>&,
                                    const std::vector<int>&)>& visit) {
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> singles;
  std::vector<bool> used(k, false);
  const std::function<void(int)> rec = [&](int from) {
    int p = from;
    while (p < k && used[p]) ++p;
    if (p == k) {
      visit(pairs, singles);
      return;
    }
    used[p] = true;
    singles.push_back(p);
    rec(p + 1);
    singles.pop_back();
    for (int q = p + 1; q < k; ++q) {
      if (used[q]) continue;
      used[q] = true;
      pairs.emplace_back(p, q);
      rec(p + 1);
      pairs.pop_back();
      used[q] = false;
    }
    used[p] = false;
  };
  rec(0);
}

}  // namespace

cplx partition_derivative(const HoloPoly& f, const std::vector<LieVector>& word,
                          const GroupElement& g) {
  const auto& s = *f.structure();
  check_element(s, g);
  const int k = static_cast<int>(word.size());
  if (k > 8) throw std::invalid_argument("derivative word longer than the combinatorial guard (8)");
  for (const auto& h : word) check_element(s, h);
  if (k == 0) return f.evaluate(g);
  cplx total = 0.0;
  enumerate_pair_partitions(k, [&](const std::vector<std::pair<int, int>>& pairs,
                                   const std::vector<int>& singles) {
    // Block values: singleton p -> left-invariant field of word[p] at g;
    // pair (p,q), p<q -> [word[q], word[p]]/2, the later-applied derivative
    // in the first bracket slot.  The linear derivative is symmetric, so
    // block order within the product is immaterial.
    HoloPoly d = f;
    for (const auto& [p, q] : pairs) {
      LieVector b = bracket(s, word[q], word[p]);
      b.c *= 0.5;
      d = dir_derive(d, b);
      if (d.is_zero()) return;
    }
    for (int p : singles) {
      LieVector v = word[p];
      v.c += 0.5 * s.omega(g.w, word[p].w);
      d = dir_derive(d, v);
      if (d.is_zero()) return;
    }
    total += d.evaluate(g);
  });
  return total;
}

LieVector gamma_defect(const HeisenbergStructure& s, int m,
                       const GroupElement& g1, const GroupElement& g2) {
  check_element(s, g1);
  check_element(s, g2);
  const GroupElement p1 = project(s, m, g1);
  const GroupElement p2 = project(s, m, g2);
  return {Eigen::VectorXcd::Zero(s.n()),
          0.5 * (s.omega(g1.w, g2.w) - s.omega(p1.w, p2.w))};
}

GradedTensor cylinder_taylor_tensor(const HoloPoly& f, int m, int max_rank) {
  return taylor_tensor(substitute_cut(f, m), max_rank);
}

GradedTensor cylinder_taylor_tensor_kappa(const HoloPoly& f, int m,
                                          int max_rank) {
  const auto& s = *f.structure();
  if (m < 0 || m > s.n()) throw std::invalid_argument("projection level out of range");
  if (max_rank < f.weighted_degree())
    throw std::invalid_argument("max_rank truncates the Taylor tensor below the weighted degree");
  const GradedTensor fhat = taylor_tensor(f, std::max(0, f.weighted_degree()));
  GradedTensor out(f.structure(), max_rank);
  std::vector<int> u;
  std::vector<int> built;
  for (int k = 0; k <= max_rank; ++k) {
    u.assign(k, 0);
    bool more = true;
    while (more) {
      cplx total = 0.0;
      enumerate_pair_partitions(
          k, [&](const std::vector<std::pair<int, int>>& pairs,
                 const std::vector<int>& singles) {
            // Gamma blocks vanish unless both letters are horizontal and at
            // least one is cut; projected singletons vanish when cut.
            for (int p : singles)
              if (u[p] < s.n() && u[p] >= m) return;
            std::vector<Eigen::VectorXcd> gammas;
            gammas.reserve(pairs.size());
            for (const auto& [p, q] : pairs) {
              const int i = u[p], j = u[q];
              if (i >= s.n() || j >= s.n()) return;      // central letter: zero bracket
              if (i < m && j < m) return;                // Gamma vanishes inside the range
              gammas.push_back(0.5 * s.omega_entry(i, j));
            }
            // Expand each Gamma over the center basis and contract with fhat.
            const int np = static_cast<int>(gammas.size());
            std::vector<int> pick(np, 0);
            bool more_l = true;
            while (more_l) {
              cplx coeff = 1.0;
              built.clear();
              for (int p = 0; p < np; ++p) {
                coeff *= gammas[p][pick[p]];
                built.push_back(s.n() + pick[p]);
              }
              for (int p : singles) built.push_back(u[p]);
              if (coeff != cplx(0.0)) total += coeff * fhat.at(built);
              more_l = np > 0;
              if (np > 0) {
                int pos = np - 1;
                while (pos >= 0 && ++pick[pos] == s.N()) pick[pos--] = 0;
                more_l = pos >= 0;
              }
            }
          });
      out.set(u, total);
      more = k > 0;
      if (k > 0) {
        int pos = k - 1;
        while (pos >= 0 && ++u[pos] == s.dim()) u[pos--] = 0;
        more = pos >= 0;
      }
    }
  }
  return out;
}

cplx reconstruct(const GradedTensor& alpha, const GroupElement& g) {
  const auto& s = *alpha.structure();
  check_element(s, g);
  double kfact = 1.0;
  cplx total = 0.0;
  std::vector<int> word;
  for (int k = 0; k <= alpha.max_rank(); ++k) {
    if (k > 0) kfact *= k;
    word.assign(k, 0);
    bool more = true;
    cplx block = 0.0;
    while (more) {
      cplx coords = 1.0;
      for (int j : word) coords *= (j < s.n()) ? g.w[j] : g.c[j - s.n()];
      block += alpha.at(word) * coords;
      more = k > 0;
      if (k > 0) {
        int pos = k - 1;
        while (pos >= 0 && ++word[pos] == s.dim()) word[pos--] = 0;
        more = pos >= 0;
      }
    }
    total += block / kfact;
  }
  return total;
}

HoloPoly reconstruct_poly(const GradedTensor& alpha) {
  const auto& s = *alpha.structure();
  std::map<HoloPoly::Monomial, cplx> terms;
  double kfact = 1.0;
  std::vector<int> word;
  for (int k = 0; k <= alpha.max_rank(); ++k) {
    if (k > 0) kfact *= k;
    word.assign(k, 0);
    bool more = true;
    while (more) {
      const cplx v = alpha.at(word);
      if (v != cplx(0.0)) {
        HoloPoly::Monomial mono(s.dim(), 0);
        for (int j : word) ++mono[j];
        terms[std::move(mono)] += v / kfact;
      }
      more = k > 0;
      if (k > 0) {
        int pos = k - 1;
        while (pos >= 0 && ++word[pos] == s.dim()) word[pos--] = 0;
        more = pos >= 0;
      }
    }
  }
  return HoloPoly::from_terms(alpha.structure(), std::move(terms));
}

}  // namespace heisfock
