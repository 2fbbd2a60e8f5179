#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rfdg/error.hpp"
#include "rfdg/gauss_rational.hpp"
#include "rfdg/graph.hpp"

namespace rfdg {

// s_mu s_nu^*, with source(mu) == source(nu).
struct Monomial {
  Path mu;
  Path nu;

  std::size_t length() const { return mu.length() + nu.length(); }
  auto operator<=>(const Monomial&) const = default;
  bool operator==(const Monomial&) const = default;
};

inline Monomial vertex_monomial(int v) { return {trivial_path(v), trivial_path(v)}; }

// Linear combination of monomials over Q(i); zero coefficients are never stored.
class SymElement {
 public:
  using Terms = std::map<Monomial, GaussRational>;

  SymElement() = default;
  SymElement(const Monomial& m, GaussRational c = 1) { add(m, std::move(c)); }

  // Monomials with mismatched sources are zero and are dropped.
  void add(const Monomial& m, const GaussRational& c) {
    if (c.is_zero() || m.mu.base != m.nu.base) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  SymElement& operator+=(const SymElement& o) {
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  SymElement& operator-=(const SymElement& o) {
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
  }
  SymElement& operator*=(const GaussRational& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend SymElement operator+(SymElement a, const SymElement& b) { return a += b; }
  friend SymElement operator-(SymElement a, const SymElement& b) { return a -= b; }
  friend SymElement operator*(const GaussRational& s, SymElement a) { return a *= s; }
  SymElement operator-() const { return GaussRational(-1) * *this; }

  bool operator==(const SymElement& o) const { return terms_ == o.terms_; }

 private:
  Terms terms_;
};

inline SymElement gen_vertex(const Graph& g, int v) {
  if (v < 0 || v >= g.num_vertices()) throw Error(ErrorCode::UnknownId, "vertex index out of range");
  return SymElement(vertex_monomial(v));
}
inline SymElement gen_vertex(const Graph& g, std::string_view v) { return gen_vertex(g, g.vertex(v)); }

// s_e = s_e p_{s(e)}: mu = (e), nu = trivial at s(e).
inline SymElement gen_edge(const Graph& g, int e) {
  if (e < 0 || e >= g.num_edges()) throw Error(ErrorCode::UnknownId, "edge index out of range");
  return SymElement(Monomial{Path{g.src(e), {e}}, trivial_path(g.src(e))});
}
inline SymElement gen_edge(const Graph& g, std::string_view e) { return gen_edge(g, g.edge(e)); }

inline SymElement path_element(const Path& p) { return SymElement(Monomial{p, trivial_path(p.base)}); }

inline SymElement adjoint(const SymElement& x) {
  SymElement out;
  for (const auto& [m, c] : x.terms()) out.add(Monomial{m.nu, m.mu}, c.conj());
  return out;
}

// (s_mu s_nu^*)(s_sigma s_tau^*): s_nu^* s_sigma cancels edge by edge from the
// range end using s_e^* s_f = delta_{e,f} p_{s(e)}.
inline std::optional<Monomial> multiply(const Graph& g, const Monomial& a, const Monomial& b) {
  const Path& nu = a.nu;
  const Path& sigma = b.mu;
  if (range(g, nu) != range(g, sigma)) return std::nullopt;
  const auto& x = nu.edges;
  const auto& y = sigma.edges;
  const std::size_t common = std::min(x.size(), y.size());
  if (!std::equal(x.end() - common, x.end(), y.end() - common)) return std::nullopt;

  if (x.size() <= y.size()) {
    // s_nu^* s_sigma = s_rest with rest = sigma minus its suffix nu
    Path mu{sigma.base, std::vector<int>(y.begin(), y.end() - common)};
    mu.edges.insert(mu.edges.end(), a.mu.edges.begin(), a.mu.edges.end());
    return Monomial{std::move(mu), b.nu};
  }
  // s_nu^* s_sigma = s_rest^* with rest = nu minus its suffix sigma
  Path nu2{nu.base, std::vector<int>(x.begin(), x.end() - common)};
  nu2.edges.insert(nu2.edges.end(), b.nu.edges.begin(), b.nu.edges.end());
  return Monomial{a.mu, std::move(nu2)};
}

inline SymElement multiply(const Graph& g, const SymElement& x, const SymElement& y) {
  SymElement out;
  for (const auto& [ma, ca] : x.terms())
    for (const auto& [mb, cb] : y.terms())
      if (auto m = multiply(g, ma, mb)) out.add(*m, ca * cb);
  return out;
}

// ---- special-edge normal form --------------------------------------------------

// gamma(v): least incoming edge of a regular vertex.
inline std::optional<int> special_edge(const Graph& g, int v) {
  const auto& in = g.in_edges(v);
  if (in.empty()) return std::nullopt;
  return in.front();
}

inline bool reducible(const Graph& g, const Monomial& m) {
  if (m.mu.edges.empty() || m.nu.edges.empty()) return false;
  int f = m.mu.edges.front();
  return f == m.nu.edges.front() && special_edge(g, g.rng(f)) == f;
}

// One application of p_v = sum_{r(e)=v} s_e s_e^* at the junction of m:
// s_{mu' f} s_{nu' f}^* -> s_mu' s_nu'^* - sum_{e != f, r(e) = r(f)} s_{mu' e} s_{nu' e}^*.
inline SymElement rewrite_once(const Graph& g, const Monomial& m) {
  const int f = m.mu.edges.front();
  const int v = g.rng(f);
  Path mu{v, std::vector<int>(m.mu.edges.begin() + 1, m.mu.edges.end())};
  Path nu{v, std::vector<int>(m.nu.edges.begin() + 1, m.nu.edges.end())};
  SymElement out(Monomial{mu, nu});
  for (int e : g.in_edges(v)) {
    if (e == f) continue;
    Path me{g.src(e), {e}}, ne{g.src(e), {e}};
    me.edges.insert(me.edges.end(), mu.edges.begin(), mu.edges.end());
    ne.edges.insert(ne.edges.end(), nu.edges.begin(), nu.edges.end());
    out.add(Monomial{std::move(me), std::move(ne)}, GaussRational(-1));
  }
  return out;
}

// Rewrites replace a monomial by one strictly shorter monomial plus monomials
// whose junction edges differ from the special edge, so this terminates.
inline SymElement normal_form(const Graph& g, const SymElement& x) {
  SymElement out;
  std::vector<std::pair<Monomial, GaussRational>> work(x.terms().begin(), x.terms().end());
  while (!work.empty()) {
    auto [m, c] = std::move(work.back());
    work.pop_back();
    if (!reducible(g, m)) {
      out.add(m, c);
      continue;
    }
    const SymElement step = rewrite_once(g, m);
    for (const auto& [m2, c2] : step.terms()) work.emplace_back(m2, c * c2);
  }
  return out;
}

// Same system, but each step rewrites one randomly chosen reducible term of the
// running element, letting cancellations happen mid-way.
template <class Rng>
SymElement normal_form_random_order(const Graph& g, SymElement x, Rng& rng) {
  for (;;) {
    std::vector<Monomial> redexes;
    for (const auto& [m, c] : x.terms())
      if (reducible(g, m)) redexes.push_back(m);
    if (redexes.empty()) return x;
    std::uniform_int_distribution<std::size_t> pick(0, redexes.size() - 1);
    const Monomial m = redexes[pick(rng)];
    const GaussRational c = x.terms().at(m);
    x.add(m, -c);
    x += c * rewrite_once(g, m);
  }
}

inline bool is_zero(const Graph& g, const SymElement& x) { return normal_form(g, x).empty(); }

// Paths starting at v of length <= max_len, depth-first, edges in id order.
inline std::vector<Path> paths_from(const Graph& g, int v, std::size_t max_len) {
  std::vector<Path> out;
  std::vector<Path> stack{trivial_path(v)};
  while (!stack.empty()) {
    Path p = std::move(stack.back());
    stack.pop_back();
    if (p.length() < max_len) {
      const auto& outs = g.out_edges(range(g, p));
      for (auto it = outs.rbegin(); it != outs.rend(); ++it) {
        Path q = p;
        q.edges.push_back(*it);
        stack.push_back(std::move(q));
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

// Normal-form monomials with |mu|, |nu| <= max_len, sorted.
inline std::vector<Monomial> basis_monomials(const Graph& g, std::size_t max_len) {
  std::vector<Monomial> out;
  for (int v = 0; v < g.num_vertices(); ++v) {
    auto ps = paths_from(g, v, max_len);
    for (const auto& mu : ps)
      for (const auto& nu : ps) {
        Monomial m{mu, nu};
        if (!reducible(g, m)) out.push_back(std::move(m));
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Random linear combination of short generator words (p_v, s_e, s_e^*) with
// small Gaussian-integer coefficients. Words often multiply out to zero.
template <class Rng>
SymElement random_element(const Graph& g, Rng& rng, int terms = 4, int max_word = 3) {
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::uniform_int_distribution<int> word_len(1, max_word);
  const int gens = g.num_vertices() + 2 * g.num_edges();
  std::uniform_int_distribution<int> pick(0, gens - 1);
  auto generator = [&](int i) {
    if (i < g.num_vertices()) return gen_vertex(g, i);
    i -= g.num_vertices();
    return i < g.num_edges() ? gen_edge(g, i) : adjoint(gen_edge(g, i - g.num_edges()));
  };
  SymElement out;
  for (int t = 0; t < terms; ++t) {
    SymElement w = generator(pick(rng));
    for (int len = word_len(rng); len > 1; --len) w = multiply(g, w, generator(pick(rng)));
    out += GaussRational(mpq_class(coeff(rng)), mpq_class(coeff(rng))) * w;
  }
  return out;
}

// ---- JSON ----------------------------------------------------------------------

inline ordered_json sym_to_json(const Graph& g, const SymElement& x) {
  ordered_json arr = ordered_json::array();
  for (const auto& [m, c] : x.terms()) {
    ordered_json t;
    t["mu"] = edge_ids(g, m.mu.edges);
    if (m.mu.trivial()) t["mu_base"] = g.vertex_id(m.mu.base);
    t["nu"] = edge_ids(g, m.nu.edges);
    if (m.nu.trivial()) t["nu_base"] = g.vertex_id(m.nu.base);
    auto parts = c.to_strings();
    t["coeff"] = std::vector<std::string>(parts.begin(), parts.end());
    arr.push_back(std::move(t));
  }
  return arr;
}

inline SymElement sym_from_json(const Graph& g, const ordered_json& arr) {
  if (!arr.is_array()) throw Error(ErrorCode::SchemaViolation, "element must be a JSON array of terms");
  auto read_path = [&](const ordered_json& t, const char* key, const char* base_key) {
    auto ids = t.at(key).get<std::vector<std::string>>();
    if (ids.empty()) {
      if (!t.contains(base_key)) throw Error(ErrorCode::SchemaViolation, std::string("trivial path needs ") + base_key);
      return trivial_path(g.vertex(t.at(base_key).get<std::string>()));
    }
    return make_path(g, ids);
  };
  SymElement out;
  for (const auto& t : arr) {
    auto coeff = t.at("coeff").get<std::vector<std::string>>();
    if (coeff.size() != 4) throw Error(ErrorCode::SchemaViolation, "coeff must have four parts");
    Monomial m{read_path(t, "mu", "mu_base"), read_path(t, "nu", "nu_base")};
    if (m.mu.base != m.nu.base) throw Error(ErrorCode::SchemaViolation, "monomial sources differ");
    out.add(m, GaussRational::from_strings({coeff[0], coeff[1], coeff[2], coeff[3]}));
  }
  return out;
}

}  // namespace rfdg
