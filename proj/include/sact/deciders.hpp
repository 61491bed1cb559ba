// sact - finite monoids, S-acts and primitive formulas
//
// Decision procedures: the per-act primitive-normality criterion and its
// unreduced oracle, the class decision for commutative monoids, the amalgam
// counterexample, necessary-condition checks and the primitive group
// detector.

#ifndef SACT_DECIDERS_HPP_
#define SACT_DECIDERS_HPP_

#include <array>     // for array
#include <cstddef>   // for size_t
#include <map>       // for map
#include <optional>  // for optional
#include <set>       // for set
#include <span>      // for span
#include <string>    // for string
#include <utility>   // for pair, move
#include <vector>    // for vector

#include <boost/dynamic_bitset.hpp>

#include "act.hpp"
#include "error.hpp"
#include "formula.hpp"
#include "monoid.hpp"

namespace sact {

  ////////////////////////////////////////////////////////////////////////////
  // Per-act criterion
  ////////////////////////////////////////////////////////////////////////////

  //! The maximal instance for a triple (a₁, a₂, a₃): I = {s : sa₁ = sa₂},
  //! J = {t : ta₂ = ta₃}, K = {(r₁, r₂) : r₁ < r₂, r₁aₘ = r₂aₘ for m = 1,2,3}.
  struct CriterionInstance {
    std::array<std::size_t, 3>                       triple;
    ElementSet                                       I;
    ElementSet                                       J;
    std::vector<std::pair<std::size_t, std::size_t>> K;
  };

  struct CriterionResult {
    bool                             holds;
    std::optional<CriterionInstance> violation;
  };

  //! Which parts of the maximal instance the search for b uses. Everything
  //! except `full` exists for mutation testing of the harness.
  enum class CriterionVariant { full, skip_I, skip_J, skip_K };

  //! Holds iff for every triple (a₁, a₂, a₃) some b satisfies sa₃ = sb for s
  //! in I, tb = ta₁ for t in J and r₁b = r₂b for (r₁, r₂) in K. Triples are
  //! visited in lexicographic order; the first failing one is reported.
  inline CriterionResult theorem1_check(Act const& A, CriterionVariant variant = CriterionVariant::full) {
    using Bits          = boost::dynamic_bitset<>;
    std::size_t const n = A.monoid().size(), m = A.size();
    std::vector<Bits> agree(m * m, Bits(n));
    std::vector<Bits> kernel(m, Bits(n * n));
    for (std::size_t p = 0; p < m; ++p) {
      for (std::size_t q = 0; q < m; ++q) {
        for (std::size_t s = 0; s < n; ++s) {
          if (A(s, p) == A(s, q)) {
            agree[p * m + q].set(s);
          }
        }
      }
      for (std::size_t r1 = 0; r1 < n; ++r1) {
        for (std::size_t r2 = 0; r2 < n; ++r2) {
          if (A(r1, p) == A(r2, p)) {
            kernel[p].set(r1 * n + r2);
          }
        }
      }
    }
    for (std::size_t a1 = 0; a1 < m; ++a1) {
      for (std::size_t a2 = 0; a2 < m; ++a2) {
        for (std::size_t a3 = 0; a3 < m; ++a3) {
          Bits const& I = agree[a1 * m + a2];
          Bits const& J = agree[a2 * m + a3];
          Bits const  K = kernel[a1] & kernel[a2] & kernel[a3];
          bool        found = false;
          for (std::size_t b = 0; b < m && !found; ++b) {
            found = (variant == CriterionVariant::skip_I || I.is_subset_of(agree[a3 * m + b]))
                    && (variant == CriterionVariant::skip_J || J.is_subset_of(agree[b * m + a1]))
                    && (variant == CriterionVariant::skip_K || K.is_subset_of(kernel[b]));
          }
          if (!found) {
            CriterionInstance inst{{a1, a2, a3}, ElementSet(n), ElementSet(n), {}};
            for (std::size_t s = 0; s < n; ++s) {
              if (I.test(s)) {
                inst.I.insert(s);
              }
              if (J.test(s)) {
                inst.J.insert(s);
              }
            }
            for (std::size_t r1 = 0; r1 < n; ++r1) {
              for (std::size_t r2 = r1 + 1; r2 < n; ++r2) {
                if (K.test(r1 * n + r2)) {
                  inst.K.emplace_back(r1, r2);
                }
              }
            }
            return {false, std::move(inst)};
          }
        }
      }
    }
    return {true, std::nullopt};
  }

  //! The formula built from a failing instance, with its verified violation.
  struct NecessityWitness {
    Formula                formula;
    std::vector<std::string> parameters;
    CopyNormalityViolation violation;
  };

  //! Φ(x, y) = ∃u (⋀ s·x = s·u ∧ ⋀ t·u = t·y ∧ ⋀ r₁z = r₂z for z in x, u, y)
  //! for I, J, K of the instance. Its copies at y = a₁ and y = a₃ share a₁,
  //! and a₃ lies in the second only. Each claim is checked by the evaluator;
  //! absent if any check fails.
  inline std::optional<NecessityWitness> necessity_construction(Act const&               A,
                                                                CriterionInstance const& inst) {
    std::vector<Atom> atoms;
    std::size_t const x = 0, y = 1, u = 2;
    for (auto s : inst.I.members()) {
      atoms.push_back({{s, x}, {s, u}});
    }
    for (auto t : inst.J.members()) {
      atoms.push_back({{t, u}, {t, y}});
    }
    for (auto const& [r1, r2] : inst.K) {
      for (auto z : {x, u, y}) {
        atoms.push_back({{r1, z}, {r2, z}});
      }
    }
    Formula phi({"x", "y"}, {"u"}, std::move(atoms));
    auto const [a1, a2, a3] = inst.triple;
    if (!satisfies(phi, A, {a1, a1}) || !satisfies(phi, A, {a1, a3})
        || !satisfies(phi, A, {a3, a3}) || satisfies(phi, A, {a3, a1})) {
      return std::nullopt;
    }
    (void) a2;
    return NecessityWitness{std::move(phi), {"y"}, {{a1}, {a3}, {a1}, {a3}}};
  }

  ////////////////////////////////////////////////////////////////////////////
  // Unreduced oracle
  ////////////////////////////////////////////////////////////////////////////

  struct CoordinateCoefficient {
    std::size_t coordinate;
    std::size_t coefficient;
  };

  struct CoordinatePair {
    std::size_t coordinate;
    std::size_t left;
    std::size_t right;
  };

  //! An explicit instance over tuples of the given width: each member of I
  //! reads s·ā₁(l) = s·ā₂(l), J reads t·ā₂(l) = t·ā₃(l), K reads
  //! r₁·āₘ(l) = r₂·āₘ(l) for m = 1,2,3.
  struct ExplicitInstance {
    std::size_t                        width = 1;
    std::vector<CoordinateCoefficient> I;
    std::vector<CoordinateCoefficient> J;
    std::vector<CoordinatePair>        K;
  };

  struct BoundedResult {
    bool                                holds;
    std::optional<std::array<Tuple, 3>> violation;
  };

  //! For every ā₁, ā₂, ā₃ satisfying the hypothesis of the instance, searches
  //! all b̄ with s·ā₃(l) = s·b̄(l), t·b̄(l) = t·ā₁(l) and r₁·b̄(l) = r₂·b̄(l).
  inline BoundedResult theorem1_check_bounded(Act const& A, ExplicitInstance const& inst) {
    std::size_t const m = A.size(), w = inst.width;
    std::size_t const n = A.monoid().size();
    for (auto const& c : inst.I) {
      if (c.coordinate >= w || c.coefficient >= n) {
        throw Error(ErrorKind::malformed_blocks, "instance entry out of range");
      }
    }
    for (auto const& c : inst.J) {
      if (c.coordinate >= w || c.coefficient >= n) {
        throw Error(ErrorKind::malformed_blocks, "instance entry out of range");
      }
    }
    for (auto const& c : inst.K) {
      if (c.coordinate >= w || c.left >= n || c.right >= n) {
        throw Error(ErrorKind::malformed_blocks, "instance entry out of range");
      }
    }
    if (m == 0) {
      return {true, std::nullopt};
    }
    auto step = [m](Tuple& t) {
      std::size_t i = t.size();
      while (i > 0 && ++t[i - 1] == m) {
        t[--i] = 0;
      }
      return i != 0;
    };
    auto k_holds = [&](Tuple const& a) {
      for (auto const& c : inst.K) {
        if (A(c.left, a[c.coordinate]) != A(c.right, a[c.coordinate])) {
          return false;
        }
      }
      return true;
    };
    std::vector<Tuple> all;
    for (Tuple t(w, 0);; ) {
      all.push_back(t);
      if (!step(t)) {
        break;
      }
    }
    for (auto const& a1 : all) {
      if (!k_holds(a1)) {
        continue;
      }
      for (auto const& a2 : all) {
        if (!k_holds(a2)) {
          continue;
        }
        bool hyp = true;
        for (auto const& c : inst.I) {
          hyp = hyp && A(c.coefficient, a1[c.coordinate]) == A(c.coefficient, a2[c.coordinate]);
        }
        if (!hyp) {
          continue;
        }
        for (auto const& a3 : all) {
          if (!k_holds(a3)) {
            continue;
          }
          bool ok = true;
          for (auto const& c : inst.J) {
            ok = ok && A(c.coefficient, a2[c.coordinate]) == A(c.coefficient, a3[c.coordinate]);
          }
          if (!ok) {
            continue;
          }
          bool found = false;
          for (auto const& b : all) {
            bool good = k_holds(b);
            for (auto const& c : inst.I) {
              good = good && A(c.coefficient, a3[c.coordinate]) == A(c.coefficient, b[c.coordinate]);
            }
            for (auto const& c : inst.J) {
              good = good && A(c.coefficient, b[c.coordinate]) == A(c.coefficient, a1[c.coordinate]);
            }
            if (good) {
              found = true;
              break;
            }
          }
          if (!found) {
            return {false, std::array<Tuple, 3>{a1, a2, a3}};
          }
        }
      }
    }
    return {true, std::nullopt};
  }

  ////////////////////////////////////////////////////////////////////////////
  // Monoid-level checks
  ////////////////////////////////////////////////////////////////////////////

  namespace detail {
    inline ElementSet nonempty_regular_part(Monoid const& M) {
      auto R = regular_part(M);
      if (R.empty()) {
        throw Error(ErrorKind::empty_regular_part, "the regular part is empty");
      }
      return R;
    }

    inline ElementSet times(Monoid const& M, std::size_t e, ElementSet const& T) {
      ElementSet out(M.size());
      for (auto t : T.members()) {
        out.insert(M(e, t));
      }
      return out;
    }
  }  // namespace detail

  struct DecompositionResult {
    bool                       holds;
    std::vector<std::size_t>   idempotents;
    std::optional<std::size_t> uncovered;
    std::optional<std::size_t> single_idempotent;
  };

  //! Whether R = ⋃ eR over the idempotents e in R; also records the least
  //! idempotent e with R = eR when one exists.
  inline DecompositionResult check_R_decomposition(Monoid const& M) {
    auto const          R = detail::nonempty_regular_part(M);
    DecompositionResult result{false, {}, std::nullopt, std::nullopt};
    ElementSet          cover(M.size());
    for (auto e : idempotents(M).members()) {
      if (!R.contains(e)) {
        continue;
      }
      result.idempotents.push_back(e);
      auto const eR = detail::times(M, e, R);
      cover |= eR;
      if (!result.single_idempotent && eR == R) {
        result.single_idempotent = e;
      }
    }
    for (auto r : R.members()) {
      if (!cover.contains(r)) {
        result.uncovered = r;
        return result;
      }
    }
    result.holds = true;
    return result;
  }

  struct TripleResult {
    bool                                      holds;
    std::optional<std::array<std::size_t, 3>> witness;
  };

  //! Whether for every a in R and b, c in Sa one of Sb, Sc contains the other.
  inline TripleResult is_regularly_linearly_ordered(Monoid const& M) {
    auto const R = detail::nonempty_regular_part(M);
    std::vector<ElementSet> ideal;
    for (std::size_t s = 0; s < M.size(); ++s) {
      ideal.push_back(principal_left_ideal(M, s));
    }
    for (auto a : R.members()) {
      auto const Sa = ideal[a].members();
      for (auto b : Sa) {
        for (auto c : Sa) {
          if (!ideal[b].is_subset_of(ideal[c]) && !ideal[c].is_subset_of(ideal[b])) {
            return {false, std::array<std::size_t, 3>{a, b, c}};
          }
        }
      }
    }
    return {true, std::nullopt};
  }

  struct PairResult {
    bool                                               holds;
    std::optional<std::pair<std::size_t, std::size_t>> witness;
  };

  //! Whether the principal left ideals of the idempotents in R form a chain.
  inline PairResult idempotent_comparability(Monoid const& M) {
    if (!is_commutative(M)) {
      throw Error(ErrorKind::noncommutative, "the monoid is not commutative");
    }
    auto const               R = detail::nonempty_regular_part(M);
    std::vector<std::size_t> E;
    for (auto e : idempotents(M).members()) {
      if (R.contains(e)) {
        E.push_back(e);
      }
    }
    for (std::size_t i = 0; i < E.size(); ++i) {
      for (std::size_t j = i + 1; j < E.size(); ++j) {
        auto const Se = principal_left_ideal(M, E[i]);
        auto const Sf = principal_left_ideal(M, E[j]);
        if (!Se.is_subset_of(Sf) && !Sf.is_subset_of(Se)) {
          return {false, std::make_pair(E[i], E[j])};
        }
      }
    }
    return {true, std::nullopt};
  }

  ////////////////////////////////////////////////////////////////////////////
  // Counterexamples
  ////////////////////////////////////////////////////////////////////////////

  //! A regular act with a formula whose copies at two parameters overlap
  //! without being equal.
  struct Counterexample {
    std::string              construction;
    std::vector<std::size_t> data;
    std::optional<std::size_t> idempotent;
    Act                      act;
    Formula                  formula;
    std::vector<std::string> parameters;
    CopyNormalityViolation   violation;
  };

  //! Glues three copies of ₛSe, for e an idempotent with Sa ≅ Se, along
  //! (ce in copies 1, 2) and (be in copies 2, 3), and checks the probe
  //! Φ(x, y) = ∃u (b·u = x ∧ c·u = y) on the quotient: Φ(be₁, ce₁),
  //! Φ(be₂, ce₁) and Φ(be₂, ce₃) hold while Φ(be₁, ce₃) fails.
  inline Counterexample build_counterexample(Monoid const& M,
                                             std::size_t   a,
                                             std::size_t   b,
                                             std::size_t   c) {
    if (a >= M.size() || b >= M.size() || c >= M.size()) {
      throw Error(ErrorKind::precondition_fails, "element out of range");
    }
    auto const R = regular_part(M);
    if (!R.contains(a)) {
      throw Error(ErrorKind::precondition_fails, M.name(a) + " is not in R", {a});
    }
    auto const Sa = principal_left_ideal(M, a);
    if (!Sa.contains(b) || !Sa.contains(c)) {
      throw Error(ErrorKind::precondition_fails, "b and c must lie in Sa", {b, c});
    }
    auto const Sb = principal_left_ideal(M, b);
    auto const Sc = principal_left_ideal(M, c);
    if (Sb.is_subset_of(Sc) || Sc.is_subset_of(Sb)) {
      throw Error(ErrorKind::comparable_ideals, "Sb and Sc are comparable", {b, c});
    }
    auto const regular = regular_representation(M);
    auto const e       = regular_via_idempotent(regular, a, R);
    if (!e) {
      throw Error(ErrorKind::no_idempotent_witness, "no idempotent e in R with Sa ≅ Se", {a});
    }
    // Under s·a ↦ s·e the points b = s_b·a and c = s_c·a go to s_b·e, s_c·e.
    auto preimage = [&](std::size_t x) {
      for (std::size_t s = 0; s < M.size(); ++s) {
        if (M(s, a) == x) {
          return s;
        }
      }
      return detail::UNDEFINED;
    };
    std::size_t const be = M(preimage(b), *e);
    std::size_t const ce = M(preimage(c), *e);

    auto const         cyclic = cyclic_subact(regular, *e);
    auto               local  = [&](std::size_t x) {
      return static_cast<std::size_t>(
          std::find(cyclic.inclusion.begin(), cyclic.inclusion.end(), x) - cyclic.inclusion.begin());
    };
    std::vector<Act> copies(3, cyclic.act);
    auto const       sum = coproduct(copies);
    auto             at  = [&](std::size_t copy, std::size_t x) { return sum.injections[copy][local(x)]; };
    std::vector<std::pair<std::size_t, std::size_t>> glue{{at(0, ce), at(1, ce)}, {at(1, be), at(2, be)}};
    auto const theta = congruence_closure(sum.act, glue);
    auto const Q     = quotient(sum.act, theta);
    if (auto bad = find_non_regular(Q.act)) {
      throw Error(ErrorKind::quotient_not_regular, "the glued act is not regular", {*bad});
    }
    auto point = [&](std::size_t copy, std::size_t x) { return Q.projection[at(copy, x)]; };

    Formula phi({"x", "y"}, {"u"}, {Atom{{be, 2}, {M.identity(), 0}}, Atom{{ce, 2}, {M.identity(), 1}}});
    auto const b1 = point(0, be), b2 = point(1, be);
    auto const c1 = point(0, ce), c3 = point(2, ce);
    if (!satisfies(phi, Q.act, {b1, c1}) || !satisfies(phi, Q.act, {b2, c1})
        || !satisfies(phi, Q.act, {b2, c3}) || satisfies(phi, Q.act, {b1, c3})) {
      throw Error(ErrorKind::precondition_fails, "probe formula does not separate the copies");
    }
    return Counterexample{"amalgam",
                          {a, b, c},
                          *e,
                          Q.act,
                          std::move(phi),
                          {"y"},
                          {{c3}, {c1}, {b2}, {b1}}};
  }

  //! For idempotents e, f in R with incomparable Se, Sf: on ₛR the copies of
  //! ∃u (e·u = e·x ∧ f·u = f·y) at y = f and y = e share f, and e lies in
  //! the second only.
  inline std::optional<Counterexample> idempotent_probe(Monoid const& M, std::size_t e, std::size_t f) {
    auto const R = regular_part(M);
    auto const sub = restrict_act(regular_representation(M), R);
    auto local = [&](std::size_t x) {
      return static_cast<std::size_t>(
          std::find(sub.inclusion.begin(), sub.inclusion.end(), x) - sub.inclusion.begin());
    };
    if (!R.contains(e) || !R.contains(f)) {
      return std::nullopt;
    }
    Formula phi({"x", "y"}, {"u"}, {Atom{{e, 2}, {e, 0}}, Atom{{f, 2}, {f, 1}}});
    auto const le = local(e), lf = local(f);
    if (!satisfies(phi, sub.act, {le, le}) || !satisfies(phi, sub.act, {lf, lf})
        || !satisfies(phi, sub.act, {lf, le}) || satisfies(phi, sub.act, {le, lf})) {
      return std::nullopt;
    }
    return Counterexample{"regular-part", {e, f}, std::nullopt, sub.act, std::move(phi), {"y"},
                          {{lf}, {le}, {lf}, {le}}};
  }

  ////////////////////////////////////////////////////////////////////////////
  // Class decision
  ////////////////////////////////////////////////////////////////////////////

  enum class ClassOutcome { primitive_normal, not_primitive_normal, inapplicable };

  constexpr std::string_view to_string(ClassOutcome o) noexcept {
    switch (o) {
      case ClassOutcome::primitive_normal:
        return "PrimitiveNormal";
      case ClassOutcome::not_primitive_normal:
        return "NotPrimitiveNormal";
      case ClassOutcome::inapplicable:
        return "Inapplicable";
    }
    return "Unknown";
  }

  struct ClassVerdict {
    ClassOutcome                                       outcome;
    std::string                                        reason;
    ElementSet                                         R;
    std::optional<std::pair<std::size_t, std::size_t>> order_witness;
    std::optional<Counterexample>                      counterexample;
    std::optional<std::string>                         counterexample_failure;
  };

  //! The counterexample for a commutative monoid whose R is not linearly
  //! ordered: the amalgam when R is not regularly linearly ordered, else the
  //! probe on ₛR when two idempotents in R are incomparable.
  inline std::optional<Counterexample> find_counterexample(Monoid const& M, std::string* failure = nullptr) {
    auto const rlo = is_regularly_linearly_ordered(M);
    if (!rlo.holds) {
      auto const [a, b, c] = *rlo.witness;
      try {
        return build_counterexample(M, a, b, c);
      } catch (Error const& err) {
        if (failure) {
          *failure = err.what();
        }
        return std::nullopt;
      }
    }
    if (is_commutative(M)) {
      auto const ic = idempotent_comparability(M);
      if (!ic.holds) {
        auto probe = idempotent_probe(M, ic.witness->first, ic.witness->second);
        if (!probe && failure) {
          *failure = "idempotent probe did not separate the copies";
        }
        return probe;
      }
    }
    if (failure) {
      *failure = "R is regularly linearly ordered with comparable idempotents";
    }
    return std::nullopt;
  }

  //! PrimitiveNormal iff R is linearly ordered, for commutative M with R
  //! nonempty and R = ⋃ eR; the same verdict answers antiadditivity.
  inline ClassVerdict decide_class(Monoid const& M) {
    ClassVerdict v{ClassOutcome::inapplicable, "", regular_part(M), std::nullopt, std::nullopt, std::nullopt};
    if (!is_commutative(M)) {
      v.reason = "noncommutative";
      return v;
    }
    if (v.R.empty()) {
      v.reason = "empty R";
      return v;
    }
    if (!check_R_decomposition(M).holds) {
      v.reason = "decomposition";
      return v;
    }
    auto const order = is_linearly_ordered(M, v.R);
    if (order.holds) {
      v.outcome = ClassOutcome::primitive_normal;
      v.reason  = "R linearly ordered";
      return v;
    }
    v.outcome       = ClassOutcome::not_primitive_normal;
    v.reason        = "R not linearly ordered";
    v.order_witness = order.witness;
    std::string failure;
    v.counterexample = find_counterexample(M, &failure);
    if (!v.counterexample) {
      v.counterexample_failure = failure;
    }
    return v;
  }

  ////////////////////////////////////////////////////////////////////////////
  // Primitive groups
  ////////////////////////////////////////////////////////////////////////////

  //! A group structure on the classes of a generalized primitive set.
  struct GroupCertificate {
    std::size_t                           order;
    std::size_t                           identity;
    std::vector<std::vector<std::size_t>> table;
    bool                                  abelian;
  };

  namespace detail {
    // Classes are lists of element ids in [0, universe). related(x, y, z)
    // reports whether (x, y, z) is in the operation relation.
    template <typename Related>
    std::optional<GroupCertificate> group_on_classes(std::vector<std::vector<std::size_t>> const& classes,
                                                     std::size_t universe,
                                                     Related&&   related,
                                                     bool        accept_semigroups = false) {
      std::size_t const        C = classes.size();
      std::vector<std::size_t> class_of(universe, UNDEFINED);
      for (std::size_t i = 0; i < C; ++i) {
        for (auto x : classes[i]) {
          class_of[x] = i;
        }
      }
      std::vector<std::vector<std::size_t>> table(C, std::vector<std::size_t>(C, UNDEFINED));
      for (std::size_t i = 0; i < C; ++i) {
        for (std::size_t j = 0; j < C; ++j) {
          for (auto x : classes[i]) {
            for (auto y : classes[j]) {
              std::size_t image = UNDEFINED;
              for (std::size_t z = 0; z < universe; ++z) {
                if (class_of[z] == UNDEFINED || !related(x, y, z)) {
                  continue;
                }
                if (image != UNDEFINED && image != class_of[z]) {
                  return std::nullopt;
                }
                image = class_of[z];
              }
              if (image == UNDEFINED
                  || (table[i][j] != UNDEFINED && table[i][j] != image)) {
                return std::nullopt;
              }
              table[i][j] = image;
            }
          }
        }
      }
      for (std::size_t i = 0; i < C; ++i) {
        for (std::size_t j = 0; j < C; ++j) {
          for (std::size_t k = 0; k < C; ++k) {
            if (table[table[i][j]][k] != table[i][table[j][k]]) {
              return std::nullopt;
            }
          }
        }
      }
      if (accept_semigroups) {
        return GroupCertificate{C, 0, std::move(table), false};
      }
      std::size_t unit = UNDEFINED;
      for (std::size_t i = 0; i < C && unit == UNDEFINED; ++i) {
        bool ok = true;
        for (std::size_t j = 0; j < C && ok; ++j) {
          ok = table[i][j] == j && table[j][i] == j;
        }
        if (ok) {
          unit = i;
        }
      }
      if (unit == UNDEFINED) {
        return std::nullopt;
      }
      bool abelian = true;
      for (std::size_t i = 0; i < C; ++i) {
        bool inverse = false;
        for (std::size_t j = 0; j < C; ++j) {
          inverse = inverse || (table[i][j] == unit && table[j][i] == unit);
          abelian = abelian && table[i][j] == table[j][i];
        }
        if (!inverse) {
          return std::nullopt;
        }
      }
      return GroupCertificate{C, unit, std::move(table), abelian};
    }
  }  // namespace detail

  //! Whether the formula op(x̄, ȳ, z̄) induces a group on X = X*/α: every pair
  //! of classes must have products in exactly one class, independent of the
  //! chosen representatives.
  inline std::optional<GroupCertificate> detect_primitive_group(std::span<Formula const> basis,
                                                                Formula const&           alpha,
                                                                Formula const&           op,
                                                                Params const&            params,
                                                                Act const&               A) {
    auto const X = generalized_primitive_set(basis, alpha, A, params);
    std::size_t const w = X.alpha.width;
    if (open_variables(op, params).size() != 3 * w) {
      throw Error(ErrorKind::malformed_blocks, "operation formula needs three blocks of the class width");
    }
    std::map<Tuple, std::size_t> id;
    std::vector<std::vector<std::size_t>> classes;
    for (auto const& cls : X.classes) {
      classes.emplace_back();
      for (auto const& t : cls) {
        classes.back().push_back(id.emplace(t, id.size()).first->second);
      }
    }
    std::set<std::array<std::size_t, 3>> rel;
    for (auto const& t : solution_set(op, A, params)) {
      Tuple x(t.begin(), t.begin() + w), y(t.begin() + w, t.begin() + 2 * w), z(t.begin() + 2 * w, t.end());
      auto ix = id.find(x), iy = id.find(y), iz = id.find(z);
      if (ix != id.end() && iy != id.end() && iz != id.end()) {
        rel.insert({ix->second, iy->second, iz->second});
      }
    }
    return detail::group_on_classes(classes, id.size(), [&](std::size_t x, std::size_t y, std::size_t z) {
      return rel.contains({x, y, z});
    });
  }

}  // namespace sact

#endif  // SACT_DECIDERS_HPP_
