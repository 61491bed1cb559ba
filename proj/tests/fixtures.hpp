// Sample monoids and brute-force oracles shared by the tests. The oracles
// follow the definitions directly and share no code with the library beyond
// the table accessors.

#ifndef SACT_TESTS_FIXTURES_HPP_
#define SACT_TESTS_FIXTURES_HPP_

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "sact/act.hpp"
#include "sact/formula.hpp"
#include "sact/monoid.hpp"

namespace fixtures {

  using sact::Act;
  using sact::Monoid;

  inline Monoid trivial() {
    return sact::validate_monoid({{0}}, 0, {"1"});
  }

  inline Monoid z2() {
    return sact::validate_monoid({{0, 1}, {1, 0}}, 0, {"1", "g"});
  }

  // 1 > e, f > 0 with ef = 0.
  inline Monoid diamond() {
    return sact::validate_monoid({{0, 1, 2, 3}, {1, 1, 3, 3}, {2, 3, 2, 3}, {3, 3, 3, 3}}, 0, {"1", "e", "f", "0"});
  }

  // 1 > e > 0.
  inline Monoid chain() {
    return sact::validate_monoid({{0, 1, 2}, {1, 1, 2}, {2, 2, 2}}, 0, {"1", "e", "0"});
  }

  // Identity adjoined to two right zeros: x·eᵢ = eᵢ.
  inline Monoid right_zero() {
    return sact::validate_monoid({{0, 1, 2}, {1, 1, 2}, {2, 1, 2}}, 0, {"1", "e1", "e2"});
  }

  // 1, a, 0 with a² = 0.
  inline Monoid nil() {
    return sact::validate_monoid({{0, 1, 2}, {1, 2, 2}, {2, 2, 2}}, 0, {"1", "a", "0"});
  }

  inline std::set<std::size_t> set_of(sact::ElementSet const& X) {
    auto m = X.members();
    return {m.begin(), m.end()};
  }

  inline std::vector<std::vector<std::size_t>> permutations_fixing_zero(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<std::size_t>> out;
    do {
      out.push_back(p);
    } while (std::next_permutation(p.begin() + (n > 0 ? 1 : 0), p.end()));
    return out;
  }

  // Tables with identity 0 (rows a·b) that are associative, found by trying
  // every filling of the non-identity block.
  inline std::vector<std::vector<std::size_t>> brute_monoid_tables(std::size_t n) {
    std::vector<std::vector<std::size_t>> out;
    std::size_t const                     k = (n - 1) * (n - 1);
    std::vector<std::size_t>              fill(k, 0);
    while (true) {
      std::vector<std::size_t> t(n * n);
      for (std::size_t a = 0; a < n; ++a) {
        t[a] = a;
        t[a * n] = a;
      }
      for (std::size_t i = 0; i < k; ++i) {
        t[(1 + i / (n - 1)) * n + 1 + i % (n - 1)] = fill[i];
      }
      bool assoc = true;
      for (std::size_t a = 0; a < n && assoc; ++a) {
        for (std::size_t b = 0; b < n && assoc; ++b) {
          for (std::size_t c = 0; c < n && assoc; ++c) {
            assoc = t[t[a * n + b] * n + c] == t[a * n + t[b * n + c]];
          }
        }
      }
      if (assoc) {
        out.push_back(t);
      }
      std::size_t i = k;
      while (i > 0 && ++fill[i - 1] == n) {
        fill[--i] = 0;
      }
      if (i == 0) {
        break;
      }
    }
    return out;
  }

  inline bool tables_isomorphic(std::vector<std::size_t> const& x, std::vector<std::size_t> const& y, std::size_t n) {
    for (auto const& p : permutations_fixing_zero(n)) {
      bool ok = true;
      for (std::size_t a = 0; a < n && ok; ++a) {
        for (std::size_t b = 0; b < n && ok; ++b) {
          ok = p[x[a * n + b]] == y[p[a] * n + p[b]];
        }
      }
      if (ok) {
        return true;
      }
    }
    return false;
  }

  // Number of isomorphism classes among the given tables.
  inline std::size_t iso_classes(std::vector<std::vector<std::size_t>> const& tables, std::size_t n) {
    std::vector<std::vector<std::size_t>> reps;
    for (auto const& t : tables) {
      bool fresh = true;
      for (auto const& r : reps) {
        if (tables_isomorphic(t, r, n)) {
          fresh = false;
          break;
        }
      }
      if (fresh) {
        reps.push_back(t);
      }
    }
    return reps.size();
  }

  // a is act-regular iff some homomorphism φ: Sa → S has φ(a)·a = a.
  inline bool regular_by_homomorphism(Act const& A, std::size_t a) {
    Monoid const&            M = A.monoid();
    std::vector<std::size_t> orbit;
    for (std::size_t s = 0; s < M.size(); ++s) {
      if (std::find(orbit.begin(), orbit.end(), A(s, a)) == orbit.end()) {
        orbit.push_back(A(s, a));
      }
    }
    std::vector<std::size_t> phi(orbit.size(), 0);
    auto                     index = [&](std::size_t p) {
      return static_cast<std::size_t>(std::find(orbit.begin(), orbit.end(), p) - orbit.begin());
    };
    while (true) {
      bool hom = true;
      for (std::size_t s = 0; s < M.size() && hom; ++s) {
        for (std::size_t i = 0; i < orbit.size() && hom; ++i) {
          hom = phi[index(A(s, orbit[i]))] == M(s, phi[i]);
        }
      }
      if (hom && A(phi[index(a)], a) == a) {
        return true;
      }
      std::size_t i = phi.size();
      while (i > 0 && ++phi[i - 1] == M.size()) {
        phi[--i] = 0;
      }
      if (i == 0) {
        return false;
      }
    }
  }

  // Regular part as the union of all subsets of S closed under left
  // multiplication whose members are all regular in ₛS.
  inline std::set<std::size_t> brute_regular_part(Monoid const& M) {
    auto const            S = sact::regular_representation(M);
    std::set<std::size_t> out;
    for (std::size_t mask = 1; mask < (std::size_t(1) << M.size()); ++mask) {
      bool ok = true;
      for (std::size_t a = 0; a < M.size() && ok; ++a) {
        if ((mask >> a) & 1u) {
          ok = regular_by_homomorphism(S, a);
          for (std::size_t s = 0; s < M.size() && ok; ++s) {
            ok = (mask >> M(s, a)) & 1u;
          }
        }
      }
      if (ok) {
        for (std::size_t a = 0; a < M.size(); ++a) {
          if ((mask >> a) & 1u) {
            out.insert(a);
          }
        }
      }
    }
    return out;
  }

  // All assignments of the free variables (over every variable, projected)
  // satisfying the formula, with params fixed.
  inline std::vector<sact::Tuple> brute_solutions(sact::Formula const& phi, Act const& A, sact::Params const& params) {
    std::size_t const        nv = phi.variable_count();
    std::vector<std::size_t> val(nv, 0);
    std::set<sact::Tuple>    out;
    std::vector<std::size_t> open;
    for (std::size_t v = 0; v < phi.free_count(); ++v) {
      if (!params.contains(phi.variable_name(v))) {
        open.push_back(v);
      }
    }
    if (A.size() == 0) {
      return {};
    }
    while (true) {
      bool ok = true;
      for (auto const& [name, value] : params) {
        ok = ok && val[*phi.variable_index(name)] == value;
      }
      for (auto const& a : phi.atoms()) {
        ok = ok && A(a.lhs.coef, val[a.lhs.var]) == A(a.rhs.coef, val[a.rhs.var]);
      }
      if (ok) {
        sact::Tuple t;
        for (auto v : open) {
          t.push_back(val[v]);
        }
        out.insert(t);
      }
      std::size_t i = nv;
      while (i > 0 && ++val[i - 1] == A.size()) {
        val[--i] = 0;
      }
      if (i == 0) {
        break;
      }
    }
    return {out.begin(), out.end()};
  }

  // Least congruence containing the pairs, as a fixpoint on a relation matrix.
  inline std::vector<std::vector<bool>> brute_congruence(Act const&                                              A,
                                                         std::vector<std::pair<std::size_t, std::size_t>> const& pairs) {
    std::size_t const              m = A.size();
    std::vector<std::vector<bool>> rel(m, std::vector<bool>(m, false));
    for (std::size_t a = 0; a < m; ++a) {
      rel[a][a] = true;
    }
    for (auto const& [a, b] : pairs) {
      rel[a][b] = rel[b][a] = true;
    }
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
          if (!rel[a][b]) {
            continue;
          }
          if (!rel[b][a]) {
            rel[b][a] = changed = true;
          }
          for (std::size_t s = 0; s < A.monoid().size(); ++s) {
            if (!rel[A(s, a)][A(s, b)]) {
              rel[A(s, a)][A(s, b)] = changed = true;
            }
          }
          for (std::size_t c = 0; c < m; ++c) {
            if (rel[b][c] && !rel[a][c]) {
              rel[a][c] = changed = true;
            }
          }
        }
      }
    }
    return rel;
  }

}  // namespace fixtures

#endif  // SACT_TESTS_FIXTURES_HPP_
