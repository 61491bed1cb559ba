// sact - finite monoids, S-acts and primitive formulas
//
// Exception type shared by every module.

#ifndef SACT_ERROR_HPP_
#define SACT_ERROR_HPP_

#include <cstddef>      // for size_t
#include <stdexcept>    // for runtime_error
#include <string>       // for string
#include <string_view>  // for string_view
#include <utility>      // for move
#include <vector>       // for vector

namespace sact {

  enum class ErrorKind {
    malformed_table,
    not_associative,
    identity_law_fails,
    not_idempotent,
    not_closed,
    bound_exceeded,
    compatibility_fails,
    identity_fails,
    mixed_monoids,
    not_compatible,
    unknown_coefficient,
    unbound_variable,
    syntax_error,
    precondition_fails,
    not_conjunction,
    elimination_stuck,
    empty_regular_part,
    noncommutative,
    comparable_ideals,
    no_idempotent_witness,
    quotient_not_regular,
    malformed_blocks,
    basis_outside_domain,
    not_equivalence,
    parse_error,
    io_error
  };

  constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
      case ErrorKind::malformed_table:
        return "MalformedTable";
      case ErrorKind::not_associative:
        return "NotAssociative";
      case ErrorKind::identity_law_fails:
        return "IdentityLawFails";
      case ErrorKind::not_idempotent:
        return "NotIdempotent";
      case ErrorKind::not_closed:
        return "NotClosed";
      case ErrorKind::bound_exceeded:
        return "BoundExceeded";
      case ErrorKind::compatibility_fails:
        return "CompatibilityFails";
      case ErrorKind::identity_fails:
        return "IdentityFails";
      case ErrorKind::mixed_monoids:
        return "MixedMonoids";
      case ErrorKind::not_compatible:
        return "NotCompatible";
      case ErrorKind::unknown_coefficient:
        return "UnknownCoefficient";
      case ErrorKind::unbound_variable:
        return "UnboundVariable";
      case ErrorKind::syntax_error:
        return "SyntaxError";
      case ErrorKind::precondition_fails:
        return "PreconditionFails";
      case ErrorKind::not_conjunction:
        return "NotConjunction";
      case ErrorKind::elimination_stuck:
        return "EliminationStuck";
      case ErrorKind::empty_regular_part:
        return "EmptyR";
      case ErrorKind::noncommutative:
        return "Noncommutative";
      case ErrorKind::comparable_ideals:
        return "ComparableIdeals";
      case ErrorKind::no_idempotent_witness:
        return "NoIdempotentWitness";
      case ErrorKind::quotient_not_regular:
        return "QuotientNotRegular";
      case ErrorKind::malformed_blocks:
        return "MalformedBlocks";
      case ErrorKind::basis_outside_domain:
        return "BasisOutsideDomain";
      case ErrorKind::not_equivalence:
        return "NotEquivalence";
      case ErrorKind::parse_error:
        return "ParseError";
      case ErrorKind::io_error:
        return "IoError";
    }
    return "Unknown";
  }

  //! Every failure raised by the library. The witness holds the element or
  //! point indices that make the failure reproducible (for example the
  //! triple (a, b, c) of a NotAssociative error).
  class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, std::string const& msg, std::vector<std::size_t> witness = {})
        : std::runtime_error(std::string(to_string(kind)) + ": " + msg),
          _kind(kind),
          _witness(std::move(witness)) {}

    ErrorKind kind() const noexcept {
      return _kind;
    }

    std::vector<std::size_t> const& witness() const noexcept {
      return _witness;
    }

   private:
    ErrorKind                _kind;
    std::vector<std::size_t> _witness;
  };

}  // namespace sact

#endif  // SACT_ERROR_HPP_
