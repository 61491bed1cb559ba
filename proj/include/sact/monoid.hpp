// sact - finite monoids, S-acts and primitive formulas
//
// Finite monoids given by multiplication tables: validation, idempotents,
// principal ideals, ideal comparison, linear-order tests and enumeration of
// small monoids up to isomorphism.

#ifndef SACT_MONOID_HPP_
#define SACT_MONOID_HPP_

#include <algorithm>         // for next_permutation, sort
#include <cstddef>           // for size_t
#include <initializer_list>  // for initializer_list
#include <optional>          // for optional
#include <set>               // for set
#include <string>            // for string, to_string
#include <string_view>       // for string_view
#include <utility>           // for pair
#include <vector>            // for vector

#include <boost/dynamic_bitset.hpp>

#include "error.hpp"

namespace sact {

  //! Largest order accepted by the enumerators unless a caller raises it.
  constexpr std::size_t default_order_bound = 5;

  ////////////////////////////////////////////////////////////////////////
  // ElementSet
  ////////////////////////////////////////////////////////////////////////

  //! A subset of {0, ..., universe - 1}. Used for subsets of a monoid (R, Sa,
  //! E, ...) and for subsets of the carrier of an act.
  class ElementSet {
   public:
    ElementSet() = default;

    explicit ElementSet(std::size_t universe) : _bits(universe) {}

    ElementSet(std::size_t universe, std::initializer_list<std::size_t> members)
        : _bits(universe) {
      for (auto x : members) {
        insert(x);
      }
    }

    template <typename Range>
    static ElementSet from(std::size_t universe, Range const& members) {
      ElementSet result(universe);
      for (auto x : members) {
        result.insert(x);
      }
      return result;
    }

    static ElementSet full(std::size_t universe) {
      ElementSet result(universe);
      result._bits.set();
      return result;
    }

    void insert(std::size_t x) {
      if (x >= _bits.size()) {
        throw Error(ErrorKind::malformed_table,
                    "element " + std::to_string(x) + " outside universe of size "
                        + std::to_string(_bits.size()),
                    {x});
      }
      _bits.set(x);
    }

    void erase(std::size_t x) {
      _bits.reset(x);
    }

    bool contains(std::size_t x) const {
      return x < _bits.size() && _bits.test(x);
    }

    std::size_t universe() const noexcept {
      return _bits.size();
    }

    std::size_t size() const {
      return _bits.count();
    }

    bool empty() const {
      return _bits.none();
    }

    bool is_subset_of(ElementSet const& that) const {
      return _bits.is_subset_of(that._bits);
    }

    bool intersects(ElementSet const& that) const {
      return _bits.intersects(that._bits);
    }

    std::vector<std::size_t> members() const {
      std::vector<std::size_t> result;
      for (auto i = _bits.find_first(); i != boost::dynamic_bitset<>::npos;
           i      = _bits.find_next(i)) {
        result.push_back(i);
      }
      return result;
    }

    ElementSet& operator|=(ElementSet const& that) {
      _bits |= that._bits;
      return *this;
    }

    ElementSet& operator&=(ElementSet const& that) {
      _bits &= that._bits;
      return *this;
    }

    friend bool operator==(ElementSet const& x, ElementSet const& y) {
      return x._bits == y._bits;
    }

   private:
    boost::dynamic_bitset<> _bits;
  };

  ////////////////////////////////////////////////////////////////////////
  // Monoid
  ////////////////////////////////////////////////////////////////////////

  class Monoid;

  Monoid validate_monoid(std::vector<std::vector<std::size_t>> const& rows,
                         std::size_t                                 identity,
                         std::vector<std::string> names = {});

  //! A finite monoid stored as a row-major multiplication table.
  //!
  //! Elements are identified by their index; names are only used for display
  //! and for the text formats. Instances can only be obtained from
  //! validate_monoid (or functions built on it), so every Monoid is
  //! associative and has a two-sided identity.
  class Monoid {
   public:
    //! The trivial monoid {1}.
    Monoid() : _n(1), _identity(0), _table{0}, _names{"1"} {}

    std::size_t size() const noexcept {
      return _n;
    }

    std::size_t identity() const noexcept {
      return _identity;
    }

    std::size_t product(std::size_t a, std::size_t b) const noexcept {
      return _table[a * _n + b];
    }

    std::size_t operator()(std::size_t a, std::size_t b) const noexcept {
      return product(a, b);
    }

    std::string const& name(std::size_t a) const {
      return _names.at(a);
    }

    std::vector<std::string> const& names() const noexcept {
      return _names;
    }

    std::optional<std::size_t> index_of(std::string_view name) const {
      for (std::size_t i = 0; i < _n; ++i) {
        if (_names[i] == name) {
          return i;
        }
      }
      return std::nullopt;
    }

    std::vector<std::size_t> const& table() const noexcept {
      return _table;
    }

    // Names are display-only and do not take part in equality.
    friend bool operator==(Monoid const& x, Monoid const& y) {
      return x._n == y._n && x._identity == y._identity && x._table == y._table;
    }

   private:
    friend Monoid validate_monoid(std::vector<std::vector<std::size_t>> const&,
                                  std::size_t,
                                  std::vector<std::string>);

    std::size_t              _n;
    std::size_t              _identity;
    std::vector<std::size_t> _table;
    std::vector<std::string> _names;
  };

  namespace detail {
    inline std::vector<std::string> default_names(std::size_t n,
                                                  std::size_t identity) {
      std::vector<std::string> names(n);
      char                     next = 'a';
      for (std::size_t i = 0; i < n; ++i) {
        if (i == identity) {
          names[i] = "1";
        } else if (next <= 'z') {
          names[i] = std::string(1, next++);
        } else {
          names[i] = "m" + std::to_string(i);
        }
      }
      return names;
    }
  }  // namespace detail

  //! Builds a Monoid from table rows (row a holds a·b for every b), checking
  //! shape, identity law and associativity.
  inline Monoid validate_monoid(std::vector<std::vector<std::size_t>> const& rows,
                                std::size_t                                 identity,
                                std::vector<std::string>                    names) {
    std::size_t const n = rows.size();
    if (n == 0) {
      throw Error(ErrorKind::malformed_table, "a monoid needs at least one element");
    }
    if (identity >= n) {
      throw Error(ErrorKind::malformed_table, "identity index out of range", {identity});
    }
    if (names.empty()) {
      names = detail::default_names(n, identity);
    }
    if (names.size() != n) {
      throw Error(ErrorKind::malformed_table, "number of names differs from table size");
    }
    {
      std::set<std::string> seen(names.begin(), names.end());
      if (seen.size() != n) {
        throw Error(ErrorKind::malformed_table, "duplicate element name");
      }
    }
    Monoid M;
    M._n        = n;
    M._identity = identity;
    M._names    = std::move(names);
    M._table.assign(n * n, 0);
    for (std::size_t a = 0; a < n; ++a) {
      if (rows[a].size() != n) {
        throw Error(ErrorKind::malformed_table,
                    "row " + std::to_string(a) + " has " + std::to_string(rows[a].size())
                        + " entries, expected " + std::to_string(n),
                    {a});
      }
      for (std::size_t b = 0; b < n; ++b) {
        if (rows[a][b] >= n) {
          throw Error(ErrorKind::malformed_table,
                      "entry (" + std::to_string(a) + "," + std::to_string(b)
                          + ") is not an element index",
                      {a, b});
        }
        M._table[a * n + b] = rows[a][b];
      }
    }
    for (std::size_t a = 0; a < n; ++a) {
      if (M(identity, a) != a || M(a, identity) != a) {
        throw Error(ErrorKind::identity_law_fails,
                    "1·" + M._names[a] + " or " + M._names[a] + "·1 differs from "
                        + M._names[a],
                    {a});
      }
    }
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t c = 0; c < n; ++c) {
          if (M(M(a, b), c) != M(a, M(b, c))) {
            throw Error(ErrorKind::not_associative,
                        "(" + M._names[a] + "·" + M._names[b] + ")·" + M._names[c]
                            + " != " + M._names[a] + "·(" + M._names[b] + "·"
                            + M._names[c] + ")",
                        {a, b, c});
          }
        }
      }
    }
    return M;
  }

  inline bool is_commutative(Monoid const& M) {
    for (std::size_t a = 0; a < M.size(); ++a) {
      for (std::size_t b = a + 1; b < M.size(); ++b) {
        if (M(a, b) != M(b, a)) {
          return false;
        }
      }
    }
    return true;
  }

  //! The set E of idempotents.
  inline ElementSet idempotents(Monoid const& M) {
    ElementSet E(M.size());
    for (std::size_t e = 0; e < M.size(); ++e) {
      if (M(e, e) == e) {
        E.insert(e);
      }
    }
    return E;
  }

  inline bool is_idempotent(Monoid const& M, std::size_t e) {
    return M(e, e) == e;
  }

  //! Sa = {s·a : s in S}.
  inline ElementSet principal_left_ideal(Monoid const& M, std::size_t a) {
    ElementSet result(M.size());
    for (std::size_t s = 0; s < M.size(); ++s) {
      result.insert(M(s, a));
    }
    return result;
  }

  //! aS = {a·s : s in S}.
  inline ElementSet principal_right_ideal(Monoid const& M, std::size_t a) {
    ElementSet result(M.size());
    for (std::size_t s = 0; s < M.size(); ++s) {
      result.insert(M(a, s));
    }
    return result;
  }

  //! Sa ⊆ Se for an idempotent e, decided by the shortcut a·e = a.
  inline bool left_ideal_leq_idempotent(Monoid const& M, std::size_t a, std::size_t e) {
    if (!is_idempotent(M, e)) {
      throw Error(ErrorKind::not_idempotent, M.name(e) + " is not idempotent", {e});
    }
    return M(a, e) == a;
  }

  //! aS ⊆ eS for an idempotent e, decided by the shortcut e·a = a.
  inline bool right_ideal_leq_idempotent(Monoid const& M, std::size_t a, std::size_t e) {
    if (!is_idempotent(M, e)) {
      throw Error(ErrorKind::not_idempotent, M.name(e) + " is not idempotent", {e});
    }
    return M(e, a) == a;
  }

  //! T·a = {t·a : t in T}. With T = S this is the principal left ideal.
  inline ElementSet left_multiples(Monoid const& M, ElementSet const& T, std::size_t a) {
    ElementSet result(M.size());
    for (auto t : T.members()) {
      result.insert(M(t, a));
    }
    return result;
  }

  inline std::optional<std::pair<std::size_t, std::size_t>>
  closure_failure(Monoid const& M, ElementSet const& T) {
    auto const members = T.members();
    for (auto a : members) {
      for (auto b : members) {
        if (!T.contains(M(a, b))) {
          return std::make_pair(a, b);
        }
      }
    }
    return std::nullopt;
  }

  struct LinearOrderResult {
    bool                                                holds = true;
    std::optional<std::pair<std::size_t, std::size_t>> witness;
  };

  //! Decides whether the semigroup T is linearly ordered, i.e. for all a, b
  //! in T either Ta ⊆ Tb or Tb ⊆ Ta, with Ta = {t·a : t in T} read literally
  //! (no identity is adjoined to T). Throws NotClosed if T is not closed
  //! under the product.
  inline LinearOrderResult is_linearly_ordered(Monoid const& M, ElementSet const& T) {
    if (auto bad = closure_failure(M, T)) {
      throw Error(ErrorKind::not_closed,
                  M.name(bad->first) + "·" + M.name(bad->second) + " leaves the subset",
                  {bad->first, bad->second});
    }
    auto const              members = T.members();
    std::vector<ElementSet> ideals;
    ideals.reserve(members.size());
    for (auto a : members) {
      ideals.push_back(left_multiples(M, T, a));
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        if (!ideals[i].is_subset_of(ideals[j]) && !ideals[j].is_subset_of(ideals[i])) {
          return {false, std::make_pair(members[i], members[j])};
        }
      }
    }
    return {};
  }

  ////////////////////////////////////////////////////////////////////////
  // Isomorphism and enumeration
  ////////////////////////////////////////////////////////////////////////

  namespace detail {
    // Relabels the table by `order` (new index -> old index) and returns the
    // row-major result.
    inline std::vector<std::size_t> relabel(Monoid const&                   M,
                                            std::vector<std::size_t> const& order) {
      std::size_t const        n = M.size();
      std::vector<std::size_t> inverse(n);
      for (std::size_t i = 0; i < n; ++i) {
        inverse[order[i]] = i;
      }
      std::vector<std::size_t> result(n * n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          result[i * n + j] = inverse[M(order[i], order[j])];
        }
      }
      return result;
    }

    // The lexicographically least relabelled table over all orderings that
    // put the identity first, together with one ordering attaining it.
    inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
    canonical_table(Monoid const& M) {
      std::size_t const        n = M.size();
      std::vector<std::size_t> others;
      for (std::size_t i = 0; i < n; ++i) {
        if (i != M.identity()) {
          others.push_back(i);
        }
      }
      std::vector<std::size_t> best, best_order;
      std::vector<std::size_t> order(n);
      do {
        order[0] = M.identity();
        std::copy(others.begin(), others.end(), order.begin() + 1);
        auto candidate = relabel(M, order);
        if (best.empty() || candidate < best) {
          best       = std::move(candidate);
          best_order = order;
        }
      } while (std::next_permutation(others.begin(), others.end()));
      return {best, best_order};
    }

    inline std::vector<std::vector<std::size_t>> rows_of(std::vector<std::size_t> const& flat,
                                                         std::size_t                     n) {
      std::vector<std::vector<std::size_t>> rows(n, std::vector<std::size_t>(n));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          rows[i][j] = flat[i * n + j];
        }
      }
      return rows;
    }

    constexpr std::size_t UNDEFINED = static_cast<std::size_t>(-1);

    // Backtracking search over tables on {0, ..., n-1} with identity 0. Cells
    // are filled row by row (upper triangle only when commutative) and every
    // partial table is checked for associativity on the defined products.
    class TableSearch {
     public:
      TableSearch(std::size_t n, bool commutative)
          : _n(n), _commutative(commutative), _table(n * n, UNDEFINED) {
        for (std::size_t a = 0; a < n; ++a) {
          _table[a] = a;       // 0·a = a
          _table[a * n] = a;   // a·0 = a
        }
        for (std::size_t a = 1; a < n; ++a) {
          for (std::size_t b = commutative ? a : 1; b < n; ++b) {
            _cells.emplace_back(a, b);
          }
        }
      }

      template <typename Visitor>
      void run(Visitor&& visit) {
        search(0, visit);
      }

     private:
      std::size_t at(std::size_t a, std::size_t b) const {
        return _table[a * _n + b];
      }

      bool associative_so_far() const {
        for (std::size_t a = 1; a < _n; ++a) {
          for (std::size_t b = 1; b < _n; ++b) {
            auto ab = at(a, b);
            if (ab == UNDEFINED) {
              continue;
            }
            for (std::size_t c = 1; c < _n; ++c) {
              auto bc = at(b, c);
              if (bc == UNDEFINED) {
                continue;
              }
              auto left  = at(ab, c);
              auto right = at(a, bc);
              if (left != UNDEFINED && right != UNDEFINED && left != right) {
                return false;
              }
            }
          }
        }
        return true;
      }

      template <typename Visitor>
      void search(std::size_t k, Visitor& visit) {
        if (k == _cells.size()) {
          visit(_table);
          return;
        }
        auto [a, b] = _cells[k];
        for (std::size_t v = 0; v < _n; ++v) {
          _table[a * _n + b] = v;
          if (_commutative) {
            _table[b * _n + a] = v;
          }
          if (associative_so_far()) {
            search(k + 1, visit);
          }
        }
        _table[a * _n + b] = UNDEFINED;
        if (_commutative) {
          _table[b * _n + a] = UNDEFINED;
        }
      }

      std::size_t                                      _n;
      bool                                             _commutative;
      std::vector<std::size_t>                         _table;
      std::vector<std::pair<std::size_t, std::size_t>> _cells;
    };
  }  // namespace detail

  //! The isomorphic copy of M whose identity is 0 and whose table is
  //! lexicographically least among all relabellings fixing the identity.
  //! Names travel with their elements.
  inline Monoid canonical_form(Monoid const& M) {
    auto [table, order] = detail::canonical_table(M);
    std::vector<std::string> names(M.size());
    for (std::size_t i = 0; i < M.size(); ++i) {
      names[i] = M.name(order[i]);
    }
    return validate_monoid(detail::rows_of(table, M.size()), 0, std::move(names));
  }

  inline bool is_isomorphic(Monoid const& M, Monoid const& N) {
    return M.size() == N.size()
           && detail::canonical_table(M).first == detail::canonical_table(N).first;
  }

  //! All monoids of order n up to isomorphism, each in canonical form, in
  //! increasing order of their canonical tables.
  inline std::vector<Monoid> enumerate_monoids(std::size_t n,
                                               bool        commutative_only = false,
                                               std::size_t bound = default_order_bound) {
    if (n > bound) {
      throw Error(ErrorKind::bound_exceeded,
                  "order " + std::to_string(n) + " exceeds bound " + std::to_string(bound),
                  {n});
    }
    std::vector<Monoid> result;
    if (n == 0) {
      return result;
    }
    std::set<std::vector<std::size_t>> seen;
    detail::TableSearch(n, commutative_only).run([&](std::vector<std::size_t> const& table) {
      auto M = validate_monoid(detail::rows_of(table, n), 0);
      seen.insert(detail::canonical_table(M).first);
    });
    for (auto const& table : seen) {
      result.push_back(validate_monoid(detail::rows_of(table, n), 0));
    }
    return result;
  }

  inline std::vector<Monoid> enumerate_commutative_monoids(std::size_t n,
                                                           std::size_t bound
                                                           = default_order_bound) {
    return enumerate_monoids(n, true, bound);
  }

}  // namespace sact

#endif  // SACT_MONOID_HPP_
