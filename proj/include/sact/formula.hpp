// sact - finite monoids, S-acts and primitive formulas
//
// Primitive formulas over the act language: parser, printer, finite-model
// evaluation, copy-normality and primitive-equivalence checks, bounded
// enumeration up to renaming, and single-variable elimination.

#ifndef SACT_FORMULA_HPP_
#define SACT_FORMULA_HPP_

#include <algorithm>    // for sort, unique, next_permutation
#include <cctype>       // for isalnum, isspace
#include <cstddef>      // for size_t
#include <functional>   // for function
#include <iterator>     // for back_inserter
#include <map>          // for map
#include <numeric>      // for iota
#include <optional>     // for optional
#include <set>          // for set
#include <span>         // for span
#include <string>       // for string
#include <string_view>  // for string_view
#include <tuple>        // for tie
#include <utility>      // for pair, move
#include <vector>       // for vector

#include "act.hpp"
#include "error.hpp"
#include "monoid.hpp"

namespace sact {

  using Tuple  = std::vector<std::size_t>;
  using Params = std::map<std::string, std::size_t>;

  //! The term s·v: coefficient index s, variable index v.
  struct Term {
    std::size_t coef;
    std::size_t var;

    friend auto operator<=>(Term const& x, Term const& y) {
      return std::tie(x.var, x.coef) <=> std::tie(y.var, y.coef);
    }
    friend bool operator==(Term const&, Term const&) = default;
  };

  //! The atom lhs = rhs.
  struct Atom {
    Term lhs;
    Term rhs;

    bool mentions(std::size_t v) const noexcept {
      return lhs.var == v || rhs.var == v;
    }

    std::size_t occurrences(std::size_t v) const noexcept {
      return (lhs.var == v ? 1 : 0) + (rhs.var == v ? 1 : 0);
    }

    Atom normalized() const noexcept {
      return rhs < lhs ? Atom{rhs, lhs} : *this;
    }

    friend auto operator<=>(Atom const& x, Atom const& y) {
      return std::tie(x.lhs, x.rhs) <=> std::tie(y.lhs, y.rhs);
    }
    friend bool operator==(Atom const&, Atom const&) = default;
  };

  //! ∃ bound (atom & ... & atom). Variables are numbered with the free ones
  //! first, followed by the bound ones.
  class Formula {
   public:
    Formula() = default;

    Formula(std::vector<std::string> free_vars,
            std::vector<std::string> bound_vars,
            std::vector<Atom>        atoms)
        : _free(std::move(free_vars)), _bound(std::move(bound_vars)), _atoms(std::move(atoms)) {
      std::set<std::string> seen;
      for (auto const& v : _free) {
        if (!seen.insert(v).second) {
          throw Error(ErrorKind::unbound_variable, "variable " + v + " declared twice");
        }
      }
      for (auto const& v : _bound) {
        if (!seen.insert(v).second) {
          throw Error(ErrorKind::unbound_variable, "variable " + v + " is both free and bound");
        }
      }
      for (auto const& atom : _atoms) {
        if (atom.lhs.var >= variable_count() || atom.rhs.var >= variable_count()) {
          throw Error(ErrorKind::unbound_variable, "atom refers to an undeclared variable");
        }
      }
    }

    std::vector<std::string> const& free_vars() const noexcept {
      return _free;
    }

    std::vector<std::string> const& bound_vars() const noexcept {
      return _bound;
    }

    std::vector<Atom> const& atoms() const noexcept {
      return _atoms;
    }

    std::size_t free_count() const noexcept {
      return _free.size();
    }

    std::size_t bound_count() const noexcept {
      return _bound.size();
    }

    std::size_t variable_count() const noexcept {
      return _free.size() + _bound.size();
    }

    bool is_bound(std::size_t v) const noexcept {
      return v >= _free.size();
    }

    std::string const& variable_name(std::size_t v) const {
      return v < _free.size() ? _free.at(v) : _bound.at(v - _free.size());
    }

    std::optional<std::size_t> variable_index(std::string_view name) const {
      for (std::size_t v = 0; v < variable_count(); ++v) {
        if (variable_name(v) == name) {
          return v;
        }
      }
      return std::nullopt;
    }

    friend bool operator==(Formula const&, Formula const&) = default;

   private:
    std::vector<std::string> _free;
    std::vector<std::string> _bound;
    std::vector<Atom>        _atoms;
  };

  ////////////////////////////////////////////////////////////////////////////
  // Parsing and printing
  ////////////////////////////////////////////////////////////////////////////

  namespace detail {
    struct Token {
      enum Kind { ident, star, equals, amp, colon, end } kind;
      std::string text;
      std::size_t pos;
    };

    inline bool ident_char(char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.';
    }

    inline std::vector<Token> tokenize(std::string_view text) {
      std::vector<Token> out;
      std::size_t        i = 0;
      while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
          ++i;
        } else if (c == '*' || c == '=' || c == '&' || c == ':' || c == ',') {
          if (c != ',') {
            Token::Kind k = c == '*'   ? Token::star
                            : c == '=' ? Token::equals
                            : c == '&' ? Token::amp
                                       : Token::colon;
            out.push_back({k, std::string(1, c), i});
          }
          ++i;
        } else if (ident_char(c)) {
          std::size_t j = i;
          while (j < text.size() && ident_char(text[j])) {
            ++j;
          }
          out.push_back({Token::ident, std::string(text.substr(i, j - i)), i});
          i = j;
        } else {
          throw Error(ErrorKind::syntax_error,
                      "unexpected character '" + std::string(1, c) + "' at position "
                          + std::to_string(i),
                      {i});
        }
      }
      out.push_back({Token::end, "", text.size()});
      return out;
    }

    [[noreturn]] inline void syntax_error(Token const& t, std::string const& expected) {
      std::string found = t.kind == Token::end ? "end of input" : "'" + t.text + "'";
      throw Error(ErrorKind::syntax_error,
                  "expected " + expected + " at position " + std::to_string(t.pos) + ", found "
                      + found,
                  {t.pos});
    }
  }  // namespace detail

  //! Parses `[exists v v ... :] atom (& atom)*` where an atom is
  //! `[coef *] var = [coef *] var`. Coefficients are element names of M. When
  //! free_vars is given, the free variables are exactly those (in that order)
  //! and any other unquantified variable is an error; otherwise the free
  //! variables are the unquantified ones in order of first occurrence.
  inline Formula parse_formula(std::string_view                               text,
                               Monoid const&                                  M,
                               std::optional<std::vector<std::string>> const& free_vars
                               = std::nullopt) {
    auto const  tokens = detail::tokenize(text);
    std::size_t k      = 0;
    auto        peek   = [&]() -> detail::Token const& { return tokens[k]; };
    auto        next   = [&]() -> detail::Token const& { return tokens[k++]; };

    std::vector<std::string> bound;
    if (peek().kind == detail::Token::ident && peek().text == "exists") {
      next();
      while (peek().kind == detail::Token::ident) {
        bound.push_back(next().text);
      }
      if (bound.empty()) {
        detail::syntax_error(peek(), "a bound variable");
      }
      if (peek().kind != detail::Token::colon) {
        detail::syntax_error(peek(), "':'");
      }
      next();
    }

    struct RawTerm {
      std::size_t coef;
      std::string var;
      std::size_t pos;
    };
    auto term = [&]() {
      if (peek().kind != detail::Token::ident) {
        detail::syntax_error(peek(), "a term");
      }
      auto const first = next();
      if (peek().kind == detail::Token::star) {
        next();
        if (peek().kind != detail::Token::ident) {
          detail::syntax_error(peek(), "a variable");
        }
        auto const var  = next();
        auto const coef = M.index_of(first.text);
        if (!coef) {
          throw Error(ErrorKind::unknown_coefficient,
                      "'" + first.text + "' at position " + std::to_string(first.pos)
                          + " is not an element of the monoid",
                      {first.pos});
        }
        return RawTerm{*coef, var.text, var.pos};
      }
      return RawTerm{M.identity(), first.text, first.pos};
    };

    std::vector<std::pair<RawTerm, RawTerm>> raw;
    while (true) {
      auto lhs = term();
      if (peek().kind != detail::Token::equals) {
        detail::syntax_error(peek(), "'='");
      }
      next();
      auto rhs = term();
      raw.emplace_back(lhs, rhs);
      if (peek().kind == detail::Token::amp) {
        next();
        continue;
      }
      if (peek().kind != detail::Token::end) {
        detail::syntax_error(peek(), "'&' or end of input");
      }
      break;
    }

    std::vector<std::string> free;
    if (free_vars) {
      free = *free_vars;
    } else {
      for (auto const& [lhs, rhs] : raw) {
        for (auto const* t : {&lhs, &rhs}) {
          if (std::find(bound.begin(), bound.end(), t->var) == bound.end()
              && std::find(free.begin(), free.end(), t->var) == free.end()) {
            free.push_back(t->var);
          }
        }
      }
    }
    std::vector<std::string> all = free;
    all.insert(all.end(), bound.begin(), bound.end());
    auto index = [&](RawTerm const& t) {
      auto it = std::find(all.begin(), all.end(), t.var);
      if (it == all.end()) {
        throw Error(ErrorKind::unbound_variable,
                    "variable '" + t.var + "' at position " + std::to_string(t.pos)
                        + " is neither free nor bound",
                    {t.pos});
      }
      return static_cast<std::size_t>(it - all.begin());
    };
    std::vector<Atom> atoms;
    for (auto const& [lhs, rhs] : raw) {
      atoms.push_back({{lhs.coef, index(lhs)}, {rhs.coef, index(rhs)}});
    }
    return Formula(std::move(free), std::move(bound), std::move(atoms));
  }

  inline std::string to_string(Formula const& phi, Monoid const& M) {
    std::string out;
    if (phi.bound_count() > 0) {
      out = "exists";
      for (auto const& v : phi.bound_vars()) {
        out += " " + v;
      }
      out += " : ";
    }
    auto term = [&](Term const& t) {
      return (t.coef == M.identity() ? std::string() : M.name(t.coef) + "*")
             + phi.variable_name(t.var);
    };
    for (std::size_t i = 0; i < phi.atoms().size(); ++i) {
      auto const& a = phi.atoms()[i];
      out += (i == 0 ? "" : " & ") + term(a.lhs) + " = " + term(a.rhs);
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////////
  // Evaluation
  ////////////////////////////////////////////////////////////////////////////

  namespace detail {
    inline void check_coefficients(Formula const& phi, Monoid const& M) {
      for (auto const& a : phi.atoms()) {
        if (a.lhs.coef >= M.size() || a.rhs.coef >= M.size()) {
          throw Error(ErrorKind::unknown_coefficient, "coefficient outside the monoid");
        }
      }
    }

    // Backtracking over the variables in a fixed order. Positions before `cut`
    // are enumerated, the rest are existential.
    class Search {
     public:
      Search(Formula const& phi, Act const& A, std::vector<std::size_t> order, std::size_t cut)
          : _phi(phi), _A(A), _order(std::move(order)), _cut(cut) {
        check_coefficients(phi, A.monoid());
        std::size_t const nv = phi.variable_count();
        std::vector<std::size_t> pos(nv, UNDEFINED);
        for (std::size_t k = 0; k < _order.size(); ++k) {
          pos[_order[k]] = k;
        }
        _due.resize(_order.size());
        _anchor.assign(_order.size(), UNDEFINED);
        _value.assign(nv, 0);
        for (std::size_t i = 0; i < phi.atoms().size(); ++i) {
          auto const& a  = phi.atoms()[i];
          std::size_t k  = std::max(pos[a.lhs.var], pos[a.rhs.var]);
          _due[k].push_back(i);
          bool const lhs_late = pos[a.lhs.var] == k;
          bool const rhs_late = pos[a.rhs.var] == k;
          if (lhs_late != rhs_late && _anchor[k] == UNDEFINED) {
            _anchor[k] = i;
          }
        }
        std::size_t const m = A.size(), n = A.monoid().size();
        _pre.assign(n * m, {});
        for (std::size_t c = 0; c < n; ++c) {
          for (std::size_t p = 0; p < m; ++p) {
            _pre[c * m + A(c, p)].push_back(p);
          }
        }
        _all.resize(m);
        for (std::size_t p = 0; p < m; ++p) {
          _all[p] = p;
        }
      }

      void fix(std::size_t var, std::size_t value) {
        _fixed.emplace_back(var, value);
      }

      void run(std::function<void(std::vector<std::size_t> const&)> const& emit) {
        _emit = &emit;
        enumerate(0);
      }

      bool satisfiable() {
        return exists(0);
      }

     private:
      std::optional<std::size_t> fixed_value(std::size_t var) const {
        for (auto const& [v, x] : _fixed) {
          if (v == var) {
            return x;
          }
        }
        return std::nullopt;
      }

      std::vector<std::size_t> const& candidates(std::size_t k, std::vector<std::size_t>& one) {
        if (auto f = fixed_value(_order[k])) {
          one.assign(1, *f);
          return one;
        }
        if (_anchor[k] == UNDEFINED) {
          return _all;
        }
        auto const& a    = _phi.atoms()[_anchor[k]];
        bool const  left = a.lhs.var == _order[k];
        Term const& mine = left ? a.lhs : a.rhs;
        Term const& other = left ? a.rhs : a.lhs;
        return _pre[mine.coef * _A.size() + _A(other.coef, _value[other.var])];
      }

      bool check(std::size_t k) const {
        for (auto i : _due[k]) {
          auto const& a = _phi.atoms()[i];
          if (_A(a.lhs.coef, _value[a.lhs.var]) != _A(a.rhs.coef, _value[a.rhs.var])) {
            return false;
          }
        }
        return true;
      }

      bool exists(std::size_t k) {
        if (k == _order.size()) {
          return true;
        }
        std::vector<std::size_t> one;
        for (auto p : candidates(k, one)) {
          _value[_order[k]] = p;
          if (check(k) && exists(k + 1)) {
            return true;
          }
        }
        return false;
      }

      void enumerate(std::size_t k) {
        if (k == _cut) {
          if (exists(k)) {
            std::vector<std::size_t> tuple(_cut);
            for (std::size_t i = 0; i < _cut; ++i) {
              tuple[i] = _value[_order[i]];
            }
            (*_emit)(tuple);
          }
          return;
        }
        std::vector<std::size_t> one;
        for (auto p : candidates(k, one)) {
          _value[_order[k]] = p;
          if (check(k)) {
            enumerate(k + 1);
          }
        }
      }

      Formula const&                                                _phi;
      Act const&                                                    _A;
      std::vector<std::size_t>                                      _order;
      std::size_t                                                   _cut;
      std::vector<std::vector<std::size_t>>                         _due;
      std::vector<std::size_t>                                      _anchor;
      std::vector<std::vector<std::size_t>>                         _pre;
      std::vector<std::size_t>                                      _all;
      std::vector<std::size_t>                                      _value;
      std::vector<std::pair<std::size_t, std::size_t>>              _fixed;
      std::function<void(std::vector<std::size_t> const&)> const*   _emit = nullptr;
    };

    inline std::vector<std::size_t> resolve_params(Formula const& phi, Params const& params) {
      std::vector<std::size_t> vars;
      for (auto const& [name, value] : params) {
        auto v = phi.variable_index(name);
        if (!v || phi.is_bound(*v)) {
          throw Error(ErrorKind::unbound_variable, "parameter '" + name + "' is not a free variable");
        }
        vars.push_back(*v);
      }
      return vars;
    }
  }  // namespace detail

  //! The free variables not assigned by params, in declaration order.
  inline std::vector<std::size_t> open_variables(Formula const& phi, Params const& params = {}) {
    std::vector<std::size_t> open;
    for (std::size_t v = 0; v < phi.free_count(); ++v) {
      if (!params.contains(phi.variable_name(v))) {
        open.push_back(v);
      }
    }
    return open;
  }

  //! Φ(A, params): the tuples of open free variables (in declaration order)
  //! extendable to the bound variables. Sorted lexicographically.
  inline std::vector<Tuple> solution_set(Formula const& phi, Act const& A, Params const& params = {}) {
    for (auto const& [name, value] : params) {
      if (value >= A.size()) {
        throw Error(ErrorKind::malformed_table, "parameter '" + name + "' is not a point");
      }
    }
    auto const               fixed = detail::resolve_params(phi, params);
    auto const               open  = open_variables(phi, params);
    std::vector<std::size_t> order = fixed;
    order.insert(order.end(), open.begin(), open.end());
    for (std::size_t v = phi.free_count(); v < phi.variable_count(); ++v) {
      order.push_back(v);
    }
    detail::Search search(phi, A, order, fixed.size() + open.size());
    for (auto const& [name, value] : params) {
      search.fix(*phi.variable_index(name), value);
    }
    std::vector<Tuple> out;
    std::function<void(std::vector<std::size_t> const&)> emit
        = [&](std::vector<std::size_t> const& t) {
            out.emplace_back(t.begin() + fixed.size(), t.end());
          };
    search.run(emit);
    return out;
  }

  //! Whether A ⊨ Φ(values) for an assignment of every free variable.
  inline bool satisfies(Formula const& phi, Act const& A, Tuple const& values) {
    if (values.size() != phi.free_count()) {
      throw Error(ErrorKind::malformed_blocks, "need one value per free variable");
    }
    std::vector<std::size_t> order(phi.variable_count());
    for (std::size_t v = 0; v < order.size(); ++v) {
      order[v] = v;
    }
    detail::Search search(phi, A, order, 0);
    for (std::size_t v = 0; v < values.size(); ++v) {
      if (values[v] >= A.size()) {
        throw Error(ErrorKind::malformed_table, "value is not a point");
      }
      search.fix(v, values[v]);
    }
    return search.satisfiable();
  }

  ////////////////////////////////////////////////////////////////////////////
  // Copy-normality
  ////////////////////////////////////////////////////////////////////////////

  //! Two parameter tuples whose copies overlap without being equal: shared
  //! lies in both copies, separating lies in the second copy only.
  struct CopyNormalityViolation {
    Tuple first_parameters;
    Tuple second_parameters;
    Tuple shared;
    Tuple separating;
  };

  //! Searches for two overlapping, distinct copies Φ(A, b̄₁), Φ(A, b̄₂), where
  //! the parameter block is parameter_vars (in that order) and the object
  //! block is every other free variable not assigned by fixed. Parameter
  //! tuples are visited in lexicographic order.
  inline std::optional<CopyNormalityViolation>
  find_copy_normality_violation(Formula const&                  phi,
                                Act const&                      A,
                                std::vector<std::string> const& parameter_vars,
                                Params const&                   fixed = {}) {
    std::size_t const  k = parameter_vars.size();
    std::size_t const  m = A.size();
    std::vector<Tuple> parameters;
    std::vector<std::vector<Tuple>> copies;
    if (m == 0) {
      return std::nullopt;
    }
    Tuple b(k, 0);
    while (true) {
      Params p = fixed;
      for (std::size_t i = 0; i < k; ++i) {
        p[parameter_vars[i]] = b[i];
      }
      if (p.size() != fixed.size() + k) {
        throw Error(ErrorKind::malformed_blocks, "parameter block overlaps fixed variables");
      }
      parameters.push_back(b);
      copies.push_back(solution_set(phi, A, p));
      std::size_t i = k;
      while (i > 0 && ++b[i - 1] == m) {
        b[--i] = 0;
      }
      if (i == 0) {
        break;
      }
    }
    for (std::size_t i = 0; i < copies.size(); ++i) {
      for (std::size_t j = i + 1; j < copies.size(); ++j) {
        auto const& X = copies[i];
        auto const& Y = copies[j];
        if (X == Y) {
          continue;
        }
        std::vector<Tuple> common;
        std::set_intersection(X.begin(), X.end(), Y.begin(), Y.end(), std::back_inserter(common));
        if (common.empty()) {
          continue;
        }
        std::vector<Tuple> only_y, only_x;
        std::set_difference(Y.begin(), Y.end(), X.begin(), X.end(), std::back_inserter(only_y));
        std::set_difference(X.begin(), X.end(), Y.begin(), Y.end(), std::back_inserter(only_x));
        if (!only_y.empty()) {
          return CopyNormalityViolation{parameters[i], parameters[j], common[0], only_y[0]};
        }
        return CopyNormalityViolation{parameters[j], parameters[i], common[0], only_x[0]};
      }
    }
    return std::nullopt;
  }

  inline bool is_copy_normal(Formula const&                  phi,
                             Act const&                      A,
                             std::vector<std::string> const& parameter_vars,
                             Params const&                   fixed = {}) {
    return !find_copy_normality_violation(phi, A, parameter_vars, fixed).has_value();
  }

  ////////////////////////////////////////////////////////////////////////////
  // Primitive equivalences and generalized primitive sets
  ////////////////////////////////////////////////////////////////////////////

  //! The extension of a formula Φ(x̄₁, x̄₂) that defines an equivalence on its
  //! domain {ā : Φ(ā, ā)}.
  struct PrimitiveEquivalence {
    std::size_t                     width = 0;
    std::vector<Tuple>              domain;
    std::vector<std::vector<Tuple>> classes;
    std::map<Tuple, std::size_t>    class_index;

    std::optional<std::size_t> class_of(Tuple const& t) const {
      auto it = class_index.find(t);
      if (it == class_index.end()) {
        return std::nullopt;
      }
      return it->second;
    }
  };

  //! The open free variables of Φ split into two blocks of equal width; the
  //! result is absent when the extension is not an equivalence on its domain.
  inline std::optional<PrimitiveEquivalence>
  primitive_equivalence(Formula const& phi, Act const& A, Params const& params = {}) {
    std::size_t const open = open_variables(phi, params).size();
    if (open % 2 != 0) {
      throw Error(ErrorKind::malformed_blocks, "free variables do not split into two equal blocks");
    }
    std::size_t const      w   = open / 2;
    auto const             rel = solution_set(phi, A, params);
    std::set<Tuple> const  pairs(rel.begin(), rel.end());
    auto                   left  = [&](Tuple const& t) { return Tuple(t.begin(), t.begin() + w); };
    auto                   right = [&](Tuple const& t) { return Tuple(t.begin() + w, t.end()); };
    auto                   join  = [](Tuple x, Tuple const& y) {
      x.insert(x.end(), y.begin(), y.end());
      return x;
    };
    std::set<Tuple> field;
    for (auto const& t : rel) {
      field.insert(left(t));
      field.insert(right(t));
    }
    PrimitiveEquivalence result;
    result.width = w;
    for (auto const& x : field) {
      if (!pairs.contains(join(x, x))) {
        return std::nullopt;
      }
      result.domain.push_back(x);
    }
    for (auto const& t : rel) {
      if (!pairs.contains(join(right(t), left(t)))) {
        return std::nullopt;
      }
    }
    // With symmetry and reflexivity on the field, transitivity holds iff
    // every row equals the row of each related tuple.
    std::map<Tuple, std::vector<Tuple>> row;
    for (auto const& t : rel) {
      row[left(t)].push_back(right(t));
    }
    for (auto const& x : result.domain) {
      if (result.class_index.contains(x)) {
        continue;
      }
      auto const& cls = row[x];
      for (auto const& y : cls) {
        if (row[y] != cls) {
          return std::nullopt;
        }
      }
      for (auto const& y : cls) {
        result.class_index[y] = result.classes.size();
      }
      result.classes.push_back(cls);
    }
    return result;
  }

  //! X*/α for X* the intersection of the basis solution sets (all tuples of
  //! the right width when the basis is empty).
  struct GeneralizedPrimitiveSet {
    std::vector<Tuple>              basis;
    PrimitiveEquivalence            alpha;
    std::vector<std::vector<Tuple>> classes;
  };

  inline GeneralizedPrimitiveSet generalized_primitive_set(std::span<Formula const> basis,
                                                           Formula const&           alpha,
                                                           Act const&               A,
                                                           Params const&            params = {}) {
    auto eq = primitive_equivalence(alpha, A, params);
    if (!eq) {
      throw Error(ErrorKind::not_equivalence, "formula does not define an equivalence");
    }
    std::size_t const  w = eq->width;
    std::vector<Tuple> X;
    if (basis.empty()) {
      Tuple t(w, 0);
      std::size_t const m = A.size();
      if (m > 0 || w == 0) {
        while (true) {
          X.push_back(t);
          std::size_t i = w;
          while (i > 0 && ++t[i - 1] == m) {
            t[--i] = 0;
          }
          if (i == 0) {
            break;
          }
        }
      }
    } else {
      for (std::size_t i = 0; i < basis.size(); ++i) {
        if (open_variables(basis[i], params).size() != w) {
          throw Error(ErrorKind::malformed_blocks, "basis formula width differs from the equivalence");
        }
        auto S = solution_set(basis[i], A, params);
        if (i == 0) {
          X = std::move(S);
        } else {
          std::vector<Tuple> both;
          std::set_intersection(X.begin(), X.end(), S.begin(), S.end(), std::back_inserter(both));
          X = std::move(both);
        }
      }
    }
    GeneralizedPrimitiveSet result;
    std::map<std::size_t, std::size_t> local;
    for (auto const& t : X) {
      auto c = eq->class_of(t);
      if (!c) {
        throw Error(ErrorKind::basis_outside_domain, "basis tuple outside the domain of α");
      }
      auto [it, inserted] = local.emplace(*c, result.classes.size());
      if (inserted) {
        result.classes.emplace_back();
      }
      result.classes[it->second].push_back(t);
    }
    result.basis = std::move(X);
    result.alpha = std::move(*eq);
    return result;
  }

  ////////////////////////////////////////////////////////////////////////////
  // Enumeration
  ////////////////////////////////////////////////////////////////////////////

  struct FormulaBounds {
    std::size_t max_free  = 1;
    std::size_t max_bound = 0;
    std::size_t max_atoms = 1;
  };

  constexpr FormulaBounds formula_bound_limits{6, 3, 4};

  namespace detail {
    // Sorted list of normalized atoms after renaming variables by perm.
    inline std::vector<Atom> renamed_atoms(std::vector<Atom> const&        atoms,
                                           std::vector<std::size_t> const& perm) {
      std::vector<Atom> out;
      out.reserve(atoms.size());
      for (auto const& a : atoms) {
        out.push_back(Atom{{a.lhs.coef, perm[a.lhs.var]}, {a.rhs.coef, perm[a.rhs.var]}}.normalized());
      }
      std::sort(out.begin(), out.end());
      return out;
    }

    // Least renaming of an atom list over `free` free slots followed by
    // `bound` bound slots; free and bound slots are permuted separately.
    inline std::vector<Atom> canonical_atoms(std::vector<Atom> const& atoms,
                                             std::size_t              free,
                                             std::size_t              bound) {
      std::vector<std::size_t> pf(free), pb(bound);
      std::iota(pf.begin(), pf.end(), 0);
      std::iota(pb.begin(), pb.end(), free);
      std::vector<Atom> best;
      bool              first = true;
      do {
        do {
          std::vector<std::size_t> perm(pf);
          perm.insert(perm.end(), pb.begin(), pb.end());
          auto cand = renamed_atoms(atoms, perm);
          if (first || cand < best) {
            best  = std::move(cand);
            first = false;
          }
        } while (std::next_permutation(pb.begin(), pb.end()));
      } while (std::next_permutation(pf.begin(), pf.end()));
      return best;
    }

    inline std::vector<std::string> numbered(std::string const& stem, std::size_t n) {
      std::vector<std::string> out(n);
      for (std::size_t i = 0; i < n; ++i) {
        out[i] = stem + std::to_string(i);
      }
      return out;
    }

    // Number of distinct slots used in [lo, hi), and whether they form a prefix.
    inline std::pair<std::size_t, bool> used_prefix(std::vector<Atom> const& atoms,
                                                    std::size_t              lo,
                                                    std::size_t              hi) {
      std::vector<bool> used(hi - lo, false);
      for (auto const& a : atoms) {
        for (auto v : {a.lhs.var, a.rhs.var}) {
          if (v >= lo && v < hi) {
            used[v - lo] = true;
          }
        }
      }
      std::size_t count = 0;
      while (count < used.size() && used[count]) {
        ++count;
      }
      for (std::size_t i = count; i < used.size(); ++i) {
        if (used[i]) {
          return {count, false};
        }
      }
      return {count, true};
    }
  }  // namespace detail

  //! Every primitive formula with at most max_free free variables, max_bound
  //! bound variables and 1..max_atoms distinct atoms, once up to renaming of
  //! variables and reordering of atoms. Free variables are named x0, x1, ...
  //! and bound ones u0, u1, ...; a formula uses a prefix of each.
  inline std::vector<Formula> enumerate_formulas(Monoid const& M, FormulaBounds const& b) {
    if (b.max_free > formula_bound_limits.max_free || b.max_bound > formula_bound_limits.max_bound
        || b.max_atoms > formula_bound_limits.max_atoms) {
      throw Error(ErrorKind::bound_exceeded, "formula bounds exceed the configured limits");
    }
    std::size_t const F = b.max_free, B = b.max_bound, V = F + B;
    std::vector<Term> terms;
    for (std::size_t v = 0; v < V; ++v) {
      for (std::size_t c = 0; c < M.size(); ++c) {
        terms.push_back({c, v});
      }
    }
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      for (std::size_t j = i; j < terms.size(); ++j) {
        atoms.push_back({terms[i], terms[j]});
      }
    }
    std::vector<Formula>     out;
    std::vector<std::size_t> pick;
    auto                     visit = [&]() {
      std::vector<Atom> chosen;
      for (auto i : pick) {
        chosen.push_back(atoms[i]);
      }
      auto [nf, free_prefix]  = detail::used_prefix(chosen, 0, F);
      auto [nb, bound_prefix] = detail::used_prefix(chosen, F, V);
      if (!free_prefix || !bound_prefix || detail::canonical_atoms(chosen, F, B) != chosen) {
        return;
      }
      for (auto& a : chosen) {
        for (auto* t : {&a.lhs, &a.rhs}) {
          if (t->var >= F) {
            t->var = t->var - F + nf;
          }
        }
      }
      out.emplace_back(detail::numbered("x", nf), detail::numbered("u", nb), std::move(chosen));
    };
    std::function<void(std::size_t)> choose = [&](std::size_t start) {
      if (!pick.empty()) {
        visit();
      }
      if (pick.size() == b.max_atoms) {
        return;
      }
      for (std::size_t i = start; i < atoms.size(); ++i) {
        pick.push_back(i);
        choose(i + 1);
        pick.pop_back();
      }
    };
    choose(0);
    return out;
  }

  ////////////////////////////////////////////////////////////////////////////
  // Variable elimination
  ////////////////////////////////////////////////////////////////////////////

  //! One rewrite: the atom at `replaced` was rewritten using the atom at
  //! `kept` and divisor r, or dropped as a consequence of ∀x x = ex.
  struct EliminationStep {
    enum class Kind { merge, drop } kind;
    std::size_t                          replaced;
    std::size_t                          kept;
    std::size_t                          divisor;
    std::pair<std::size_t, std::size_t> measure_before;
    std::pair<std::size_t, std::size_t> measure_after;
  };

  struct EliminationResult {
    Formula                      formula;
    std::vector<EliminationStep> trace;
  };

  //! Rewrites quantifier-free conjunctions over a commutative monoid M with
  //! R = eR linearly ordered so that at most one atom mentions a given
  //! variable. The preconditions are checked once, on construction.
  class Eliminator {
   public:
    Eliminator(Monoid const& M, std::size_t e) : _M(M), _e(e) {
      if (!is_commutative(M)) {
        throw Error(ErrorKind::precondition_fails, "noncommutative");
      }
      if (e >= M.size() || !is_idempotent(M, e)) {
        throw Error(ErrorKind::precondition_fails, "R != eR", {e});
      }
      auto const R = regular_part(M);
      ElementSet eR(M.size());
      for (auto r : R.members()) {
        eR.insert(M(e, r));
      }
      if (!R.contains(e) || !(eR == R)) {
        throw Error(ErrorKind::precondition_fails, "R != eR", {e});
      }
      auto const order = is_linearly_ordered(M, R);
      if (!order.holds) {
        throw Error(ErrorKind::precondition_fails,
                    "R not linearly ordered",
                    {order.witness->first, order.witness->second});
      }
    }

    std::size_t idempotent() const noexcept {
      return _e;
    }

    //! Throws EliminationStuck when the remaining atoms mentioning x0 admit
    //! no merge (a kept atom must have x0 on one side only).
    EliminationResult run(Formula const& phi, std::size_t x0) const {
      if (phi.bound_count() != 0) {
        throw Error(ErrorKind::not_conjunction, "formula has an existential prefix");
      }
      if (x0 >= phi.free_count()) {
        throw Error(ErrorKind::unbound_variable, "eliminated variable is not free");
      }
      detail::check_coefficients(phi, _M);
      std::vector<Atom>            atoms = phi.atoms();
      std::vector<EliminationStep> trace;
      while (true) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
          if (atoms[i].mentions(x0)) {
            idx.push_back(i);
          }
        }
        if (idx.size() <= 1) {
          break;
        }
        auto const before = measure(atoms, x0);
        if (auto i = find_tautology(atoms, idx, x0)) {
          atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(*i));
          trace.push_back({EliminationStep::Kind::drop, *i, *i, _M.identity(), before,
                           measure(atoms, x0)});
          continue;
        }
        auto step = find_merge(atoms, idx, x0);
        if (!step) {
          std::string what;
          for (auto i : idx) {
            what += (what.empty() ? "" : ", ") + std::to_string(i);
          }
          throw Error(ErrorKind::elimination_stuck,
                      "no atom with the variable on one side only can absorb atoms " + what, idx);
        }
        auto const& [replaced, kept, divisor, atom] = *step;
        atoms[replaced] = atom;
        auto const after = measure(atoms, x0);
        if (!(after < before)) {
          throw Error(ErrorKind::elimination_stuck, "termination measure did not decrease");
        }
        trace.push_back({EliminationStep::Kind::merge, replaced, kept, divisor, before, after});
      }
      return {Formula(phi.free_vars(), {}, std::move(atoms)), std::move(trace)};
    }

   private:
    struct Oriented {
      std::size_t t;
      std::size_t w;
      std::size_t s;
    };

    static std::pair<std::size_t, std::size_t> measure(std::vector<Atom> const& atoms,
                                                       std::size_t              x0) {
      std::size_t count = 0, occ = 0;
      for (auto const& a : atoms) {
        count += a.mentions(x0) ? 1 : 0;
        occ += a.occurrences(x0);
      }
      return {count, occ};
    }

    // Readings of an atom as t·w = s·x0.
    static std::vector<Oriented> orientations(Atom const& a, std::size_t x0) {
      std::vector<Oriented> out;
      if (a.rhs.var == x0) {
        out.push_back({a.lhs.coef, a.lhs.var, a.rhs.coef});
      }
      if (a.lhs.var == x0) {
        out.push_back({a.rhs.coef, a.rhs.var, a.lhs.coef});
      }
      return out;
    }

    std::optional<std::size_t> find_tautology(std::vector<Atom> const&        atoms,
                                              std::vector<std::size_t> const& idx,
                                              std::size_t                     x0) const {
      for (auto i : idx) {
        auto const& a = atoms[i];
        if (a.occurrences(x0) == 2 && _M(a.lhs.coef, _e) == _M(a.rhs.coef, _e)) {
          return i;
        }
      }
      (void) x0;
      return std::nullopt;
    }

    struct Merge {
      std::size_t replaced;
      std::size_t kept;
      std::size_t divisor;
      Atom        atom;
    };

    std::optional<Merge> find_merge(std::vector<Atom> const&        atoms,
                                    std::vector<std::size_t> const& idx,
                                    std::size_t                     x0) const {
      for (auto q : idx) {
        if (atoms[q].occurrences(x0) != 1) {
          continue;
        }
        Oriented const kept = orientations(atoms[q], x0)[0];
        std::size_t const target = _M(kept.s, _e);
        for (auto p : idx) {
          if (p == q) {
            continue;
          }
          for (auto const& o : orientations(atoms[p], x0)) {
            std::size_t const value = _M(o.s, _e);
            for (std::size_t r = 0; r < _M.size(); ++r) {
              if (_M(r, target) == value) {
                Atom atom{{_M(r, kept.t), kept.w}, {o.t, o.w}};
                return Merge{p, q, r, atom};
              }
            }
          }
        }
      }
      return std::nullopt;
    }

    Monoid      _M;
    std::size_t _e;
  };

  //! The least idempotent e with R = eR, if any.
  inline std::optional<std::size_t> eliminator_idempotent(Monoid const& M) {
    auto const R = regular_part(M);
    for (auto e : idempotents(M).members()) {
      if (!R.contains(e)) {
        continue;
      }
      ElementSet eR(M.size());
      for (auto r : R.members()) {
        eR.insert(M(e, r));
      }
      if (eR == R) {
        return e;
      }
    }
    return std::nullopt;
  }

  inline EliminationResult eliminate_variable(Formula const& phi,
                                              std::size_t    x0,
                                              Monoid const&  M,
                                              std::size_t    e) {
    return Eliminator(M, e).run(phi, x0);
  }

  inline EliminationResult eliminate_variable(Formula const&   phi,
                                              std::string_view x0,
                                              Monoid const&    M,
                                              std::size_t      e) {
    auto v = phi.variable_index(x0);
    if (!v) {
      throw Error(ErrorKind::unbound_variable, "unknown variable '" + std::string(x0) + "'");
    }
    return eliminate_variable(phi, *v, M, e);
  }

}  // namespace sact

#endif  // SACT_FORMULA_HPP_
