#include <catch_amalgamated.hpp>

#include <set>

#include "fixtures.hpp"
#include "sact/monoid.hpp"

using namespace sact;

namespace {
  ErrorKind kind_of(auto&& f) {
    try {
      f();
    } catch (Error const& e) {
      return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::io_error;
  }
}  // namespace

TEST_CASE("validate_monoid accepts the sample monoids", "[monoid]") {
  auto const D = fixtures::diamond();
  CHECK(D.size() == 4);
  CHECK(D.identity() == 0);
  CHECK(D(1, 2) == 3);
  CHECK(D.index_of("f") == 2);
  CHECK_FALSE(D.index_of("g").has_value());
  CHECK(Monoid().size() == 1);
}

TEST_CASE("validate_monoid rejects bad tables", "[monoid]") {
  CHECK(kind_of([] { validate_monoid({}, 0); }) == ErrorKind::malformed_table);
  CHECK(kind_of([] { validate_monoid({{0, 1}, {1}}, 0); }) == ErrorKind::malformed_table);
  CHECK(kind_of([] { validate_monoid({{0, 2}, {1, 0}}, 0); }) == ErrorKind::malformed_table);
  CHECK(kind_of([] { validate_monoid({{0, 1}, {1, 0}}, 5); }) == ErrorKind::malformed_table);
  // 1 is not a two-sided identity.
  CHECK(kind_of([] { validate_monoid({{0, 0}, {1, 1}}, 0); }) == ErrorKind::identity_law_fails);
  // a·a = 1, a·b = b, b·a = a, b·b = b, 1 identity: (a·a)·b = b but a·(a·b) = a·b = b;
  // (b·a)·a = a·a = 1 versus b·(a·a) = b.
  CHECK(kind_of([] { validate_monoid({{0, 1, 2}, {1, 0, 2}, {2, 1, 2}}, 0); })
        == ErrorKind::not_associative);
}

TEST_CASE("commutativity and idempotents", "[monoid]") {
  CHECK(is_commutative(fixtures::diamond()));
  CHECK_FALSE(is_commutative(fixtures::right_zero()));
  CHECK(fixtures::set_of(idempotents(fixtures::diamond())) == std::set<std::size_t>{0, 1, 2, 3});
  CHECK(fixtures::set_of(idempotents(fixtures::z2())) == std::set<std::size_t>{0});
  CHECK(fixtures::set_of(idempotents(fixtures::nil())) == std::set<std::size_t>{0, 2});
}

TEST_CASE("principal ideals of the diamond", "[monoid]") {
  auto const D = fixtures::diamond();
  CHECK(fixtures::set_of(principal_left_ideal(D, 1)) == std::set<std::size_t>{1, 3});
  CHECK(fixtures::set_of(principal_left_ideal(D, 0)) == std::set<std::size_t>{0, 1, 2, 3});
  CHECK(fixtures::set_of(principal_right_ideal(D, 3)) == std::set<std::size_t>{3});
}

TEST_CASE("ideal shortcuts require an idempotent", "[monoid]") {
  auto const N = fixtures::nil();
  CHECK(kind_of([&] { left_ideal_leq_idempotent(N, 0, 1); }) == ErrorKind::not_idempotent);
  CHECK(kind_of([&] { right_ideal_leq_idempotent(N, 0, 1); }) == ErrorKind::not_idempotent);
}

TEST_CASE("ideal shortcuts agree with inclusion on every small monoid", "[monoid][property]") {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (auto const& M : enumerate_monoids(n)) {
      for (std::size_t a = 0; a < n; ++a) {
        for (auto e : idempotents(M).members()) {
          CHECK(left_ideal_leq_idempotent(M, a, e)
                == principal_left_ideal(M, a).is_subset_of(principal_left_ideal(M, e)));
          CHECK(right_ideal_leq_idempotent(M, a, e)
                == principal_right_ideal(M, a).is_subset_of(principal_right_ideal(M, e)));
        }
      }
    }
  }
}

TEST_CASE("linear order of subsemigroups", "[monoid]") {
  auto const D = fixtures::diamond();
  auto const r = is_linearly_ordered(D, ElementSet(4, {1, 2, 3}));
  CHECK_FALSE(r.holds);
  REQUIRE(r.witness.has_value());
  CHECK(*r.witness == std::pair<std::size_t, std::size_t>{1, 2});
  CHECK(is_linearly_ordered(fixtures::chain(), ElementSet::full(3)).holds);
  CHECK(is_linearly_ordered(fixtures::z2(), ElementSet::full(2)).holds);
  CHECK(kind_of([&] { is_linearly_ordered(fixtures::nil(), ElementSet(3, {1})); }) == ErrorKind::not_closed);
}

TEST_CASE("linear order is read without an adjoined identity", "[monoid]") {
  // In {e1, e2} of the right-zero monoid T·e1 = {e1} and T·e2 = {e2}.
  auto const Z = fixtures::right_zero();
  auto const r = is_linearly_ordered(Z, ElementSet(3, {1, 2}));
  CHECK_FALSE(r.holds);
}

TEST_CASE("canonical forms identify isomorphic relabellings", "[monoid]") {
  auto const D = fixtures::diamond();
  // Swap e and f, and move 0 to index 1.
  auto const E = validate_monoid({{0, 1, 2, 3}, {1, 1, 1, 1}, {2, 1, 2, 1}, {3, 1, 1, 3}}, 0);
  CHECK(is_isomorphic(D, E));
  CHECK(canonical_form(D) == canonical_form(E));
  CHECK_FALSE(is_isomorphic(D, fixtures::chain()));
  CHECK_FALSE(is_isomorphic(fixtures::chain(), fixtures::nil()));
}

TEST_CASE("enumerated monoids are pairwise non-isomorphic and canonical", "[monoid][property]") {
  for (std::size_t n = 1; n <= 4; ++n) {
    auto const all = enumerate_monoids(n);
    for (std::size_t i = 0; i < all.size(); ++i) {
      CHECK(canonical_form(all[i]) == all[i]);
      for (std::size_t j = i + 1; j < all.size(); ++j) {
        CHECK_FALSE(fixtures::tables_isomorphic(all[i].table(), all[j].table(), n));
      }
    }
  }
}

TEST_CASE("enumeration matches a brute-force count up to isomorphism", "[monoid][oracle]") {
  for (std::size_t n = 1; n <= 4; ++n) {
    auto const tables = fixtures::brute_monoid_tables(n);
    CHECK(enumerate_monoids(n).size() == fixtures::iso_classes(tables, n));
    std::vector<std::vector<std::size_t>> commutative;
    for (auto const& t : tables) {
      bool c = true;
      for (std::size_t a = 0; a < n && c; ++a) {
        for (std::size_t b = 0; b < n && c; ++b) {
          c = t[a * n + b] == t[b * n + a];
        }
      }
      if (c) {
        commutative.push_back(t);
      }
    }
    CHECK(enumerate_commutative_monoids(n).size() == fixtures::iso_classes(commutative, n));
  }
}

TEST_CASE("known monoid counts", "[monoid]") {
  std::vector<std::size_t> const all{1, 2, 7, 35, 228};
  std::vector<std::size_t> const commutative{1, 2, 5, 19, 78};
  for (std::size_t n = 1; n <= 5; ++n) {
    CHECK(enumerate_monoids(n).size() == all[n - 1]);
    CHECK(enumerate_commutative_monoids(n).size() == commutative[n - 1]);
  }
}

TEST_CASE("enumeration bound", "[monoid]") {
  CHECK(kind_of([] { enumerate_monoids(6); }) == ErrorKind::bound_exceeded);
  CHECK(enumerate_monoids(0).empty());
}
