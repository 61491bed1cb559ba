// sact - finite monoids, S-acts and primitive formulas
//
// Finite left S-acts: validation, cyclic subacts, act-regularity, the regular
// part R of a monoid, coproducts, generated congruences and quotients.

#ifndef SACT_ACT_HPP_
#define SACT_ACT_HPP_

#include <algorithm>  // for next_permutation, min
#include <cstddef>    // for size_t
#include <deque>      // for deque
#include <memory>     // for shared_ptr, make_shared
#include <numeric>    // for iota
#include <optional>   // for optional
#include <set>        // for set
#include <span>       // for span
#include <string>     // for string
#include <string_view>  // for string_view
#include <utility>    // for pair
#include <vector>     // for vector

#include "error.hpp"
#include "monoid.hpp"

namespace sact {

  class Act;

  Act validate_act(Monoid const&                                M,
                   std::vector<std::vector<std::size_t>> const& rows,
                   std::vector<std::string>                     names = {});

  //! A finite left S-act. The action is stored row-major: row s holds s·a for
  //! every point a. Instances come from validate_act (or from constructions
  //! built on it) and always satisfy s·(t·a) = (st)·a and 1·a = a.
  class Act {
   public:
    Monoid const& monoid() const noexcept {
      return *_monoid;
    }

    std::size_t size() const noexcept {
      return _m;
    }

    std::size_t act(std::size_t s, std::size_t a) const noexcept {
      return _action[s * _m + a];
    }

    std::size_t operator()(std::size_t s, std::size_t a) const noexcept {
      return act(s, a);
    }

    std::string const& name(std::size_t a) const {
      return _names.at(a);
    }

    std::vector<std::string> const& names() const noexcept {
      return _names;
    }

    std::optional<std::size_t> index_of(std::string_view name) const {
      for (std::size_t i = 0; i < _m; ++i) {
        if (_names[i] == name) {
          return i;
        }
      }
      return std::nullopt;
    }

    std::vector<std::size_t> const& table() const noexcept {
      return _action;
    }

    friend bool operator==(Act const& x, Act const& y) {
      return x._m == y._m && x._action == y._action && *x._monoid == *y._monoid;
    }

   private:
    Act() = default;

    friend Act validate_act(Monoid const&,
                            std::vector<std::vector<std::size_t>> const&,
                            std::vector<std::string>);

    std::shared_ptr<Monoid const> _monoid;
    std::size_t                   _m = 0;
    std::vector<std::size_t>      _action;
    std::vector<std::string>      _names;
  };

  namespace detail {
    inline std::vector<std::string> point_names(std::size_t m) {
      std::vector<std::string> names(m);
      for (std::size_t i = 0; i < m; ++i) {
        names[i] = "p" + std::to_string(i);
      }
      return names;
    }
  }  // namespace detail

  //! Builds an act from one row per monoid element (row s lists s·a for every
  //! point a), checking shape, 1·a = a and s·(t·a) = (st)·a.
  inline Act validate_act(Monoid const&                                M,
                          std::vector<std::vector<std::size_t>> const& rows,
                          std::vector<std::string>                     names) {
    if (rows.size() != M.size()) {
      throw Error(ErrorKind::malformed_table, "need one action row per monoid element");
    }
    std::size_t const m = rows.empty() ? 0 : rows[0].size();
    if (names.empty()) {
      names = detail::point_names(m);
    }
    if (names.size() != m) {
      throw Error(ErrorKind::malformed_table, "number of point names differs from carrier size");
    }
    if (std::set<std::string>(names.begin(), names.end()).size() != m) {
      throw Error(ErrorKind::malformed_table, "duplicate point name");
    }
    Act A;
    A._monoid = std::make_shared<Monoid const>(M);
    A._m      = m;
    A._names  = std::move(names);
    A._action.assign(M.size() * m, 0);
    for (std::size_t s = 0; s < M.size(); ++s) {
      if (rows[s].size() != m) {
        throw Error(ErrorKind::malformed_table, "ragged action row " + M.name(s), {s});
      }
      for (std::size_t a = 0; a < m; ++a) {
        if (rows[s][a] >= m) {
          throw Error(ErrorKind::malformed_table, "action entry is not a point", {s, a});
        }
        A._action[s * m + a] = rows[s][a];
      }
    }
    for (std::size_t a = 0; a < m; ++a) {
      if (A(M.identity(), a) != a) {
        throw Error(ErrorKind::identity_fails, "1·" + A._names[a] + " != " + A._names[a], {a});
      }
    }
    for (std::size_t s = 0; s < M.size(); ++s) {
      for (std::size_t t = 0; t < M.size(); ++t) {
        for (std::size_t a = 0; a < m; ++a) {
          if (A(s, A(t, a)) != A(M(s, t), a)) {
            throw Error(ErrorKind::compatibility_fails,
                        M.name(s) + "·(" + M.name(t) + "·" + A._names[a] + ") != ("
                            + M.name(s) + M.name(t) + ")·" + A._names[a],
                        {s, t, a});
          }
        }
      }
    }
    return A;
  }

  //! The act ₛS: carrier S, action by left multiplication.
  inline Act regular_representation(Monoid const& M) {
    std::vector<std::vector<std::size_t>> rows(M.size(), std::vector<std::size_t>(M.size()));
    for (std::size_t s = 0; s < M.size(); ++s) {
      for (std::size_t a = 0; a < M.size(); ++a) {
        rows[s][a] = M(s, a);
      }
    }
    return validate_act(M, rows, M.names());
  }

  //! The act on m points where every element acts as the identity map.
  inline Act trivial_act(Monoid const& M, std::size_t m) {
    std::vector<std::size_t> row(m);
    std::iota(row.begin(), row.end(), 0);
    return validate_act(M, std::vector<std::vector<std::size_t>>(M.size(), row));
  }

  //! A subact together with the inclusion of its points into the parent.
  struct Subact {
    Act                      act;
    std::vector<std::size_t> inclusion;
  };

  //! Restriction of A to a subset closed under the action. Points keep the
  //! order they have in A.
  inline Subact restrict_act(Act const& A, ElementSet const& closed) {
    auto const               points = closed.members();
    std::vector<std::size_t> local(A.size(), detail::UNDEFINED);
    for (std::size_t i = 0; i < points.size(); ++i) {
      local[points[i]] = i;
    }
    Monoid const&                         M = A.monoid();
    std::vector<std::vector<std::size_t>> rows(M.size(), std::vector<std::size_t>(points.size()));
    for (std::size_t s = 0; s < M.size(); ++s) {
      for (std::size_t i = 0; i < points.size(); ++i) {
        auto image = local[A(s, points[i])];
        if (image == detail::UNDEFINED) {
          throw Error(ErrorKind::not_closed, "subset is not closed under the action",
                      {s, points[i]});
        }
        rows[s][i] = image;
      }
    }
    std::vector<std::string> names;
    for (auto p : points) {
      names.push_back(A.name(p));
    }
    return {validate_act(M, rows, names), points};
  }

  //! The orbit Sa = {s·a : s in S} as a set of points.
  inline ElementSet orbit(Act const& A, std::size_t a) {
    ElementSet result(A.size());
    for (std::size_t s = 0; s < A.monoid().size(); ++s) {
      result.insert(A(s, a));
    }
    return result;
  }

  //! The cyclic subact ₛSa.
  inline Subact cyclic_subact(Act const& A, std::size_t a) {
    return restrict_act(A, orbit(A, a));
  }

  //! Returns the least u in S with u·a = a such that s·a = t·a implies
  //! s·u = t·u. Such a u determines the homomorphism φ: ₛSa → ₛS,
  //! φ(s·a) = s·u, with φ(a)·a = a; a is act-regular iff u exists.
  inline std::optional<std::size_t> act_regular_witness(Act const& A, std::size_t a) {
    Monoid const& M = A.monoid();
    std::size_t const n = M.size();
    for (std::size_t u = 0; u < n; ++u) {
      if (A(u, a) != a) {
        continue;
      }
      // s·a ↦ s·u must be a well-defined map on the orbit of a.
      std::vector<std::size_t> image(A.size(), detail::UNDEFINED);
      bool                     ok = true;
      for (std::size_t s = 0; s < n && ok; ++s) {
        auto& slot = image[A(s, a)];
        if (slot == detail::UNDEFINED) {
          slot = M(s, u);
        } else if (slot != M(s, u)) {
          ok = false;
        }
      }
      if (ok) {
        return u;
      }
    }
    return std::nullopt;
  }

  inline bool is_act_regular(Act const& A, std::size_t a) {
    return act_regular_witness(A, a).has_value();
  }

  //! The first point of A that is not act-regular, if any.
  inline std::optional<std::size_t> find_non_regular(Act const& A) {
    for (std::size_t a = 0; a < A.size(); ++a) {
      if (!is_act_regular(A, a)) {
        return a;
      }
    }
    return std::nullopt;
  }

  inline bool is_regular_act(Act const& A) {
    return !find_non_regular(A).has_value();
  }

  //! R = {a in S : every element of Sa is act-regular in ₛS}, the largest
  //! regular subact of ₛS. May be empty.
  inline ElementSet regular_part(Monoid const& M) {
    Act const  S = regular_representation(M);
    ElementSet regular(M.size());
    for (std::size_t x = 0; x < M.size(); ++x) {
      if (is_act_regular(S, x)) {
        regular.insert(x);
      }
    }
    ElementSet R(M.size());
    for (std::size_t a = 0; a < M.size(); ++a) {
      if (principal_left_ideal(M, a).is_subset_of(regular)) {
        R.insert(a);
      }
    }
    return R;
  }

  //! R computed from its definition: the union of every subset of S that is
  //! closed under left multiplication and consists of act-regular elements.
  //! Exponential in |S|; used to cross-check regular_part.
  inline ElementSet regular_part_via_subacts(Monoid const& M) {
    std::size_t const n = M.size();
    if (n > 20) {
      throw Error(ErrorKind::bound_exceeded, "subset enumeration limited to 20 elements", {n});
    }
    Act const         S = regular_representation(M);
    std::vector<bool> regular(n);
    for (std::size_t x = 0; x < n; ++x) {
      regular[x] = is_act_regular(S, x);
    }
    ElementSet result(n);
    for (std::size_t mask = 1; mask < (std::size_t(1) << n); ++mask) {
      bool ok = true;
      for (std::size_t a = 0; a < n && ok; ++a) {
        if (!(mask >> a & 1)) {
          continue;
        }
        if (!regular[a]) {
          ok = false;
          break;
        }
        for (std::size_t s = 0; s < n; ++s) {
          if (!(mask >> M(s, a) & 1)) {
            ok = false;
            break;
          }
        }
      }
      if (ok) {
        for (std::size_t a = 0; a < n; ++a) {
          if (mask >> a & 1) {
            result.insert(a);
          }
        }
      }
    }
    return result;
  }

  //! True iff there is an isomorphism ₛSa → ₛSb sending a to b, i.e. iff
  //! s·a = t·a exactly when s·b = t·b.
  inline bool cyclic_iso(Act const& A, std::size_t a, Act const& B, std::size_t b) {
    if (!(A.monoid() == B.monoid())) {
      throw Error(ErrorKind::mixed_monoids, "acts over different monoids");
    }
    std::vector<std::size_t> forward(A.size(), detail::UNDEFINED);
    std::vector<std::size_t> backward(B.size(), detail::UNDEFINED);
    for (std::size_t s = 0; s < A.monoid().size(); ++s) {
      auto x = A(s, a);
      auto y = B(s, b);
      if (forward[x] == detail::UNDEFINED && backward[y] == detail::UNDEFINED) {
        forward[x]  = y;
        backward[y] = x;
      } else if (forward[x] != y || backward[y] != x) {
        return false;
      }
    }
    return true;
  }

  //! Returns the least idempotent e among `candidates` with ₛSa ≅ ₛSe
  //! (a ↦ e), if one exists.
  inline std::optional<std::size_t> regular_via_idempotent(Act const&        A,
                                                           std::size_t       a,
                                                           ElementSet const& candidates) {
    Monoid const& M = A.monoid();
    Act const     S = regular_representation(M);
    for (auto e : candidates.members()) {
      if (is_idempotent(M, e) && cyclic_iso(A, a, S, e)) {
        return e;
      }
    }
    return std::nullopt;
  }

  //! The least idempotent e with ₛSa ≅ ₛSe. The point a is act-regular iff
  //! this succeeds. The idempotent need not lie in R: over {1, a, 0} with
  //! a² = 0 the point 1 of ₛS is act-regular while R = {0}.
  inline std::optional<std::size_t> regular_via_idempotent(Act const& A, std::size_t a) {
    return regular_via_idempotent(A, a, idempotents(A.monoid()));
  }

  ////////////////////////////////////////////////////////////////////////
  // Coproducts, congruences, quotients
  ////////////////////////////////////////////////////////////////////////

  struct Coproduct {
    Act                                   act;
    std::vector<std::vector<std::size_t>> injections;
  };

  //! Disjoint union of acts over a common monoid. Point names get the suffix
  //! _k for the k-th summand (counted from 1).
  inline Coproduct coproduct(std::span<Act const> acts) {
    if (acts.empty()) {
      throw Error(ErrorKind::malformed_table, "coproduct of no acts");
    }
    Monoid const& M = acts.front().monoid();
    std::size_t   total = 0;
    for (auto const& A : acts) {
      if (!(A.monoid() == M)) {
        throw Error(ErrorKind::mixed_monoids, "coproduct summands over different monoids");
      }
      total += A.size();
    }
    std::vector<std::vector<std::size_t>> rows(M.size(), std::vector<std::size_t>(total));
    std::vector<std::string>              names;
    std::vector<std::vector<std::size_t>> injections;
    std::size_t                           offset = 0;
    for (std::size_t k = 0; k < acts.size(); ++k) {
      auto const&              A = acts[k];
      std::vector<std::size_t> injection(A.size());
      for (std::size_t a = 0; a < A.size(); ++a) {
        injection[a] = offset + a;
        names.push_back(A.name(a) + "_" + std::to_string(k + 1));
        for (std::size_t s = 0; s < M.size(); ++s) {
          rows[s][offset + a] = offset + A(s, a);
        }
      }
      injections.push_back(std::move(injection));
      offset += A.size();
    }
    return {validate_act(M, rows, names), std::move(injections)};
  }

  //! A partition of the carrier of an act. Blocks are numbered in order of
  //! their least point, which is the block representative.
  class Congruence {
   public:
    Congruence() = default;

    //! Builds the partition from any labelling of points by block labels.
    explicit Congruence(std::vector<std::size_t> const& labels) : _block(labels.size()) {
      std::vector<std::size_t> renumber;
      std::vector<std::size_t> seen;
      for (std::size_t p = 0; p < labels.size(); ++p) {
        auto it = std::find(seen.begin(), seen.end(), labels[p]);
        if (it == seen.end()) {
          seen.push_back(labels[p]);
          _block[p] = seen.size() - 1;
          _representative.push_back(p);
        } else {
          _block[p] = static_cast<std::size_t>(it - seen.begin());
        }
      }
    }

    static Congruence identity(std::size_t m) {
      std::vector<std::size_t> labels(m);
      std::iota(labels.begin(), labels.end(), 0);
      return Congruence(labels);
    }

    std::size_t size() const noexcept {
      return _block.size();
    }

    std::size_t block_count() const noexcept {
      return _representative.size();
    }

    std::size_t block_of(std::size_t p) const {
      return _block.at(p);
    }

    std::size_t representative(std::size_t block) const {
      return _representative.at(block);
    }

    bool related(std::size_t p, std::size_t q) const {
      return _block.at(p) == _block.at(q);
    }

    std::vector<std::vector<std::size_t>> blocks() const {
      std::vector<std::vector<std::size_t>> result(block_count());
      for (std::size_t p = 0; p < _block.size(); ++p) {
        result[_block[p]].push_back(p);
      }
      return result;
    }

    std::vector<std::size_t> const& labels() const noexcept {
      return _block;
    }

    friend bool operator==(Congruence const& x, Congruence const& y) {
      return x._block == y._block;
    }

   private:
    std::vector<std::size_t> _block;
    std::vector<std::size_t> _representative;
  };

  namespace detail {
    class UnionFind {
     public:
      explicit UnionFind(std::size_t n) : _parent(n) {
        std::iota(_parent.begin(), _parent.end(), 0);
      }

      std::size_t find(std::size_t x) {
        while (_parent[x] != x) {
          _parent[x] = _parent[_parent[x]];
          x          = _parent[x];
        }
        return x;
      }

      // Returns false if x and y were already together. The smaller root
      // survives so that roots are least block members.
      bool unite(std::size_t x, std::size_t y) {
        x = find(x);
        y = find(y);
        if (x == y) {
          return false;
        }
        if (y < x) {
          std::swap(x, y);
        }
        _parent[y] = x;
        return true;
      }

     private:
      std::vector<std::size_t> _parent;
    };
  }  // namespace detail

  //! The least congruence of A containing the given pairs: a union-find
  //! worklist that, whenever two points merge, schedules (s·a, s·b) for
  //! every s until nothing changes.
  inline Congruence congruence_closure(Act const&                                         A,
                                       std::span<std::pair<std::size_t, std::size_t> const> pairs) {
    detail::UnionFind                                uf(A.size());
    std::deque<std::pair<std::size_t, std::size_t>> work(pairs.begin(), pairs.end());
    for (auto [a, b] : pairs) {
      if (a >= A.size() || b >= A.size()) {
        throw Error(ErrorKind::malformed_table, "generating pair outside the carrier", {a, b});
      }
    }
    while (!work.empty()) {
      auto [a, b] = work.front();
      work.pop_front();
      if (!uf.unite(a, b)) {
        continue;
      }
      for (std::size_t s = 0; s < A.monoid().size(); ++s) {
        work.emplace_back(A(s, a), A(s, b));
      }
    }
    std::vector<std::size_t> labels(A.size());
    for (std::size_t p = 0; p < A.size(); ++p) {
      labels[p] = uf.find(p);
    }
    return Congruence(labels);
  }

  inline bool is_compatible(Act const& A, Congruence const& theta) {
    if (theta.size() != A.size()) {
      return false;
    }
    auto const blocks = theta.blocks();
    for (auto const& block : blocks) {
      for (std::size_t s = 0; s < A.monoid().size(); ++s) {
        for (auto p : block) {
          if (!theta.related(A(s, block.front()), A(s, p))) {
            return false;
          }
        }
      }
    }
    return true;
  }

  struct Quotient {
    Act                      act;
    std::vector<std::size_t> projection;
  };

  //! A/θ with s·(a/θ) = (s·a)/θ. Throws NotCompatible unless θ is a
  //! congruence of A. A merged block is named by joining its point names
  //! with '~'.
  inline Quotient quotient(Act const& A, Congruence const& theta) {
    if (!is_compatible(A, theta)) {
      throw Error(ErrorKind::not_compatible, "partition is not compatible with the action");
    }
    Monoid const&                         M = A.monoid();
    auto const                            blocks = theta.blocks();
    std::vector<std::vector<std::size_t>> rows(M.size(), std::vector<std::size_t>(blocks.size()));
    std::vector<std::string>              names;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      std::string name;
      for (auto p : blocks[k]) {
        name += (name.empty() ? "" : "~") + A.name(p);
      }
      names.push_back(std::move(name));
      for (std::size_t s = 0; s < M.size(); ++s) {
        rows[s][k] = theta.block_of(A(s, theta.representative(k)));
      }
    }
    std::vector<std::size_t> projection(A.size());
    for (std::size_t p = 0; p < A.size(); ++p) {
      projection[p] = theta.block_of(p);
    }
    return {validate_act(M, rows, names), std::move(projection)};
  }

  ////////////////////////////////////////////////////////////////////////
  // Enumeration of small acts
  ////////////////////////////////////////////////////////////////////////

  namespace detail {
    inline std::vector<std::size_t> relabel_act(Act const& A, std::vector<std::size_t> const& order) {
      std::size_t const        m = A.size();
      std::vector<std::size_t> inverse(m);
      for (std::size_t i = 0; i < m; ++i) {
        inverse[order[i]] = i;
      }
      std::vector<std::size_t> result(A.monoid().size() * m);
      for (std::size_t s = 0; s < A.monoid().size(); ++s) {
        for (std::size_t i = 0; i < m; ++i) {
          result[s * m + i] = inverse[A(s, order[i])];
        }
      }
      return result;
    }

    inline std::vector<std::size_t> canonical_act_table(Act const& A) {
      std::vector<std::size_t> order(A.size());
      std::iota(order.begin(), order.end(), 0);
      std::vector<std::size_t> best;
      do {
        auto candidate = relabel_act(A, order);
        if (best.empty() || candidate < best) {
          best = std::move(candidate);
        }
      } while (std::next_permutation(order.begin(), order.end()));
      return best;
    }

    inline std::vector<std::vector<std::size_t>> act_rows(std::vector<std::size_t> const& flat,
                                                          std::size_t n,
                                                          std::size_t m) {
      std::vector<std::vector<std::size_t>> rows(n, std::vector<std::size_t>(m));
      for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t a = 0; a < m; ++a) {
          rows[s][a] = flat[s * m + a];
        }
      }
      return rows;
    }
  }  // namespace detail

  //! The canonical representative of the isomorphism class of A (least
  //! relabelled action table). Names are replaced by defaults.
  inline Act canonical_form(Act const& A) {
    return validate_act(A.monoid(),
                        detail::act_rows(detail::canonical_act_table(A), A.monoid().size(), A.size()));
  }

  inline bool is_isomorphic(Act const& A, Act const& B) {
    return A.size() == B.size() && A.monoid() == B.monoid()
           && detail::canonical_act_table(A) == detail::canonical_act_table(B);
  }

  //! All acts of M on m points up to isomorphism, in canonical form, ordered
  //! by their canonical tables.
  inline std::vector<Act> enumerate_acts(Monoid const& M, std::size_t m, std::size_t bound = 6) {
    if (m > bound) {
      throw Error(ErrorKind::bound_exceeded,
                  "act size " + std::to_string(m) + " exceeds bound " + std::to_string(bound), {m});
    }
    std::vector<Act> result;
    if (m == 0) {
      return result;
    }
    std::size_t const        n = M.size();
    std::vector<std::size_t> table(n * m, detail::UNDEFINED);
    for (std::size_t a = 0; a < m; ++a) {
      table[M.identity() * m + a] = a;
    }
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t s = 0; s < n; ++s) {
      if (s == M.identity()) {
        continue;
      }
      for (std::size_t a = 0; a < m; ++a) {
        cells.emplace_back(s, a);
      }
    }
    // s·(t·a) = (st)·a for the products that are defined so far.
    auto consistent = [&]() {
      for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = 0; t < n; ++t) {
          auto const st = M(s, t);
          for (std::size_t a = 0; a < m; ++a) {
            auto ta = table[t * m + a];
            if (ta == detail::UNDEFINED) {
              continue;
            }
            auto left  = table[s * m + ta];
            auto right = table[st * m + a];
            if (left != detail::UNDEFINED && right != detail::UNDEFINED && left != right) {
              return false;
            }
          }
        }
      }
      return true;
    };
    std::set<std::vector<std::size_t>> seen;
    auto                               search = [&](auto& self, std::size_t k) -> void {
      if (k == cells.size()) {
        auto A = validate_act(M, detail::act_rows(table, n, m));
        seen.insert(detail::canonical_act_table(A));
        return;
      }
      auto [s, a] = cells[k];
      for (std::size_t v = 0; v < m; ++v) {
        table[s * m + a] = v;
        if (consistent()) {
          self(self, k + 1);
        }
      }
      table[s * m + a] = detail::UNDEFINED;
    };
    search(search, 0);
    for (auto const& t : seen) {
      result.push_back(validate_act(M, detail::act_rows(t, n, m)));
    }
    return result;
  }

  //! All regular acts of M on m points up to isomorphism.
  inline std::vector<Act> enumerate_regular_acts(Monoid const& M, std::size_t m, std::size_t bound = 6) {
    std::vector<Act> result;
    for (auto& A : enumerate_acts(M, m, bound)) {
      if (is_regular_act(A)) {
        result.push_back(std::move(A));
      }
    }
    return result;
  }

}  // namespace sact

#endif  // SACT_ACT_HPP_
