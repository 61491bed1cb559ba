#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <set>

#include "fixtures.hpp"
#include "sact/formula.hpp"

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

  std::vector<Act> small_acts(Monoid const& M, std::size_t max_size) {
    std::vector<Act> out;
    for (std::size_t m = 1; m <= max_size; ++m) {
      for (auto& A : enumerate_acts(M, m)) {
        out.push_back(std::move(A));
      }
    }
    return out;
  }

  using Key = std::vector<std::array<std::size_t, 4>>;

  // Least sorted atom list over renamings of free and bound slots.
  Key class_key(std::vector<std::array<std::size_t, 4>> const& atoms, std::size_t F, std::size_t B) {
    std::vector<std::size_t> pf(F), pb(B);
    std::iota(pf.begin(), pf.end(), 0);
    std::iota(pb.begin(), pb.end(), F);
    std::optional<Key> best;
    do {
      do {
        Key k;
        for (auto const& a : atoms) {
          std::array<std::size_t, 2> l{a[1] < F ? pf[a[1]] : pb[a[1] - F], a[0]};
          std::array<std::size_t, 2> r{a[3] < F ? pf[a[3]] : pb[a[3] - F], a[2]};
          if (r < l) {
            std::swap(l, r);
          }
          k.push_back({l[1], l[0], r[1], r[0]});
        }
        std::sort(k.begin(), k.end());
        if (!best || k < *best) {
          best = k;
        }
      } while (std::next_permutation(pb.begin(), pb.end()));
    } while (std::next_permutation(pf.begin(), pf.end()));
    return *best;
  }

  // Atom-set classes up to renaming, from every choice of 1..max_atoms atoms.
  std::size_t brute_formula_classes(std::size_t n, std::size_t F, std::size_t B, std::size_t max_atoms) {
    std::vector<std::array<std::size_t, 2>> terms;  // (coef, var)
    for (std::size_t v = 0; v < F + B; ++v) {
      for (std::size_t c = 0; c < n; ++c) {
        terms.push_back({c, v});
      }
    }
    std::vector<std::array<std::size_t, 4>> atoms;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      for (std::size_t j = i; j < terms.size(); ++j) {
        atoms.push_back({terms[i][0], terms[i][1], terms[j][0], terms[j][1]});
      }
    }
    std::set<Key>                           classes;
    std::vector<std::array<std::size_t, 4>> pick;
    std::function<void(std::size_t)>        go = [&](std::size_t start) {
      if (!pick.empty()) {
        classes.insert(class_key(pick, F, B));
      }
      if (pick.size() == max_atoms) {
        return;
      }
      for (std::size_t i = start; i < atoms.size(); ++i) {
        pick.push_back(atoms[i]);
        go(i + 1);
        pick.pop_back();
      }
    };
    go(0);
    return classes.size();
  }

  // All copies Φ(A, b̄) for every parameter tuple, by brute force.
  bool brute_copy_normal(Formula const& phi, Act const& A, std::vector<std::string> const& params) {
    std::vector<std::set<Tuple>> copies;
    Tuple                        b(params.size(), 0);
    while (true) {
      Params p;
      for (std::size_t i = 0; i < params.size(); ++i) {
        p[params[i]] = b[i];
      }
      auto sol = fixtures::brute_solutions(phi, A, p);
      copies.emplace_back(sol.begin(), sol.end());
      std::size_t i = b.size();
      while (i > 0 && ++b[i - 1] == A.size()) {
        b[--i] = 0;
      }
      if (i == 0) {
        break;
      }
    }
    for (auto const& x : copies) {
      for (auto const& y : copies) {
        if (x == y) {
          continue;
        }
        for (auto const& t : x) {
          if (y.contains(t)) {
            return false;
          }
        }
      }
    }
    return true;
  }
}  // namespace

TEST_CASE("parsing and printing", "[formula]") {
  auto const D   = fixtures::diamond();
  auto const phi = parse_formula("exists u : e*u = x & f*u = y", D);
  CHECK(phi.free_vars() == std::vector<std::string>{"x", "y"});
  CHECK(phi.bound_vars() == std::vector<std::string>{"u"});
  REQUIRE(phi.atoms().size() == 2);
  CHECK(phi.atoms()[0].lhs == Term{1, 2});
  CHECK(phi.atoms()[0].rhs == Term{0, 0});
  CHECK(to_string(phi, D) == "exists u : e*u = x & f*u = y");
  CHECK(to_string(parse_formula(to_string(phi, D), D), D) == to_string(phi, D));
  auto const psi = parse_formula("x = y", D, std::vector<std::string>{"y", "x"});
  CHECK(psi.variable_index("y") == 0);
  CHECK(parse_formula("1*x = x", D).atoms()[0].lhs == Term{0, 0});
}

TEST_CASE("parse errors", "[formula]") {
  auto const D = fixtures::diamond();
  CHECK(kind_of([&] { parse_formula("x = ", D); }) == ErrorKind::syntax_error);
  CHECK(kind_of([&] { parse_formula("exists : x = x", D); }) == ErrorKind::syntax_error);
  CHECK(kind_of([&] { parse_formula("x = y y", D); }) == ErrorKind::syntax_error);
  CHECK(kind_of([&] { parse_formula("g*x = x", D); }) == ErrorKind::unknown_coefficient);
  CHECK(kind_of([&] { parse_formula("x = z", D, std::vector<std::string>{"x"}); }) == ErrorKind::unbound_variable);
  try {
    parse_formula("x = e*", D);
    FAIL("no error raised");
  } catch (Error const& e) {
    CHECK(e.kind() == ErrorKind::syntax_error);
    CHECK_FALSE(e.witness().empty());
  }
}

TEST_CASE("evaluation examples", "[formula]") {
  auto const C = fixtures::chain();
  auto const S = regular_representation(C);
  auto const all = solution_set(parse_formula("x = x", C), S);
  CHECK(all.size() == 3);
  auto const fixed = solution_set(parse_formula("x = e*x", C), S);
  CHECK(fixed == std::vector<Tuple>{{1}, {2}});
  auto const sol = solution_set(parse_formula("exists u : e*u = x", C), S);
  CHECK(sol == std::vector<Tuple>{{1}, {2}});
  auto const with_param = solution_set(parse_formula("0*x = y", C), S, {{"y", 2}});
  CHECK(with_param.size() == 3);
  CHECK(satisfies(parse_formula("x = e*y", C), S, {1, 0}));
  CHECK_FALSE(satisfies(parse_formula("x = e*y", C), S, {0, 1}));
}

TEST_CASE("solution sets agree with exhaustive assignment", "[formula][oracle]") {
  for (std::size_t n = 1; n <= 3; ++n) {
    for (auto const& M : enumerate_monoids(n)) {
      auto const formulas = enumerate_formulas(M, {2, 1, 2});
      for (auto const& A : small_acts(M, 3)) {
        for (auto const& phi : formulas) {
          CHECK(solution_set(phi, A) == fixtures::brute_solutions(phi, A, {}));
          if (phi.free_count() == 2) {
            for (std::size_t b = 0; b < A.size(); ++b) {
              Params p{{"x1", b}};
              CHECK(solution_set(phi, A, p) == fixtures::brute_solutions(phi, A, p));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("copy-normality agrees with all copies compared pairwise", "[formula][oracle]") {
  for (std::size_t n = 1; n <= 3; ++n) {
    for (auto const& M : enumerate_monoids(n)) {
      auto const formulas = enumerate_formulas(M, {2, 1, 2});
      for (auto const& A : small_acts(M, 3)) {
        for (auto const& phi : formulas) {
          if (phi.free_count() != 2) {
            continue;
          }
          std::vector<std::string> params{"x1"};
          auto const               v = find_copy_normality_violation(phi, A, params);
          CHECK(v.has_value() != brute_copy_normal(phi, A, params));
          if (v) {
            Params p1{{"x1", v->first_parameters[0]}}, p2{{"x1", v->second_parameters[0]}};
            auto   c1 = fixtures::brute_solutions(phi, A, p1);
            auto   c2 = fixtures::brute_solutions(phi, A, p2);
            CHECK(std::binary_search(c1.begin(), c1.end(), v->shared));
            CHECK(std::binary_search(c2.begin(), c2.end(), v->shared));
            CHECK(std::binary_search(c2.begin(), c2.end(), v->separating));
            CHECK_FALSE(std::binary_search(c1.begin(), c1.end(), v->separating));
          }
        }
      }
    }
  }
}

TEST_CASE("copy-normality examples", "[formula]") {
  auto const D   = fixtures::diamond();
  auto const phi = parse_formula("exists u : x = e*u & y = f*u", D);
  // ₛS: every nonempty copy is {e, 0}.
  auto const S = regular_representation(D);
  CHECK(solution_set(phi, S, {{"y", 2}}) == std::vector<Tuple>{{1}, {3}});
  CHECK(solution_set(phi, S, {{"y", 3}}) == std::vector<Tuple>{{1}, {3}});
  CHECK(is_copy_normal(phi, S, {"y"}));
  // p0 is a zero, e·p1 = p0 and f·p2 = p0. The copies at y = p0 and y = p1
  // are {p0, p2} and {p0}.
  auto const A = validate_act(D, {{0, 1, 2}, {0, 0, 2}, {0, 1, 0}, {0, 0, 0}}, {"p0", "p1", "p2"});
  auto const v = find_copy_normality_violation(phi, A, {"y"});
  REQUIRE(v.has_value());
  CHECK(v->first_parameters == Tuple{1});
  CHECK(v->second_parameters == Tuple{0});
  CHECK(v->shared == Tuple{0});
  CHECK(v->separating == Tuple{2});
  CHECK(is_copy_normal(parse_formula("x = y", D), A, {"y"}));
}

TEST_CASE("primitive equivalences", "[formula]") {
  auto const C = fixtures::chain();
  auto const S = regular_representation(C);
  auto const id = primitive_equivalence(parse_formula("x = y", C), S);
  REQUIRE(id.has_value());
  CHECK(id->width == 1);
  CHECK(id->classes.size() == 3);
  auto const kernel = primitive_equivalence(parse_formula("0*x = 0*y", C), S);
  REQUIRE(kernel.has_value());
  CHECK(kernel->classes.size() == 1);
  auto const fixed = primitive_equivalence(parse_formula("x = y & x = e*x", C), S);
  REQUIRE(fixed.has_value());
  CHECK(fixed->domain == std::vector<Tuple>{{1}, {2}});
  CHECK(fixed->class_of({1}) == std::optional<std::size_t>{0});
  CHECK_FALSE(fixed->class_of({0}).has_value());
  CHECK_FALSE(primitive_equivalence(parse_formula("x = e*y", C), S).has_value());
  CHECK(kind_of([&] { primitive_equivalence(parse_formula("x = x", C), S); }) == ErrorKind::malformed_blocks);
}

TEST_CASE("generalized primitive sets", "[formula]") {
  auto const           C = fixtures::chain();
  auto const           S = regular_representation(C);
  auto const           alpha = parse_formula("0*x = 0*y", C);
  std::vector<Formula> basis{parse_formula("x = e*x", C)};
  auto const           X = generalized_primitive_set(basis, alpha, S);
  CHECK(X.basis == std::vector<Tuple>{{1}, {2}});
  CHECK(X.classes.size() == 1);
  auto const all = generalized_primitive_set({}, parse_formula("x = y", C), S);
  CHECK(all.classes.size() == 3);
  CHECK(kind_of([&] { generalized_primitive_set({}, parse_formula("x = e*y", C), S); })
        == ErrorKind::not_equivalence);
  std::vector<Formula> outside{parse_formula("x = x", C)};
  CHECK(kind_of([&] { generalized_primitive_set(outside, parse_formula("x = y & x = e*x", C), S); })
        == ErrorKind::basis_outside_domain);
}

TEST_CASE("formula enumeration matches unpruned generation", "[formula][oracle]") {
  for (std::size_t n = 1; n <= 3; ++n) {
    auto const M = enumerate_monoids(n).back();
    for (FormulaBounds b : {FormulaBounds{1, 0, 2}, FormulaBounds{2, 0, 2}, FormulaBounds{2, 1, 2},
                            FormulaBounds{1, 1, 3}}) {
      if (n == 3 && b.max_atoms == 3) {
        continue;
      }
      auto const formulas = enumerate_formulas(M, b);
      CHECK(formulas.size() == brute_formula_classes(n, b.max_free, b.max_bound, b.max_atoms));
      std::set<std::string> printed;
      for (auto const& phi : formulas) {
        CHECK(phi.free_count() <= b.max_free);
        CHECK(phi.bound_count() <= b.max_bound);
        CHECK(!phi.atoms().empty());
        CHECK(phi.atoms().size() <= b.max_atoms);
        printed.insert(to_string(phi, M));
      }
      CHECK(printed.size() == formulas.size());
    }
  }
  CHECK(kind_of([] { enumerate_formulas(fixtures::chain(), {7, 0, 1}); }) == ErrorKind::bound_exceeded);
}

TEST_CASE("eliminator preconditions", "[formula][eliminate]") {
  auto const C = fixtures::chain();
  CHECK(eliminator_idempotent(C) == std::optional<std::size_t>{0});
  CHECK(kind_of([] { Eliminator(fixtures::right_zero(), 0); }) == ErrorKind::precondition_fails);
  CHECK(kind_of([] { Eliminator(fixtures::diamond(), 0); }) == ErrorKind::precondition_fails);
  CHECK(kind_of([&] { Eliminator(C, 5); }) == ErrorKind::precondition_fails);
  CHECK(kind_of([&] { eliminate_variable(parse_formula("exists u : x = u", C), "x", C, 0); })
        == ErrorKind::not_conjunction);
  CHECK(kind_of([&] { eliminate_variable(parse_formula("x = y", C), "z", C, 0); }) == ErrorKind::unbound_variable);
}

TEST_CASE("eliminator on a two-atom input", "[formula][eliminate]") {
  auto const C   = fixtures::chain();
  auto const phi = parse_formula("e*x1 = x0 & e*x2 = e*x0", C, std::vector<std::string>{"x0", "x1", "x2"});
  auto const out = eliminate_variable(phi, "x0", C, 0);
  std::size_t mentions = 0;
  for (auto const& a : out.formula.atoms()) {
    mentions += a.mentions(0) ? 1 : 0;
  }
  CHECK(mentions == 1);
  CHECK_FALSE(out.trace.empty());
  for (auto const& step : out.trace) {
    CHECK(step.measure_after < step.measure_before);
  }
  for (std::size_t m = 1; m <= 4; ++m) {
    for (auto const& A : enumerate_regular_acts(C, m)) {
      CHECK(solution_set(out.formula, A) == solution_set(phi, A));
    }
  }
}

TEST_CASE("eliminator leaves single-atom inputs alone", "[formula][eliminate]") {
  auto const C   = fixtures::chain();
  auto const phi = parse_formula("e*x0 = x1", C);
  auto const out = eliminate_variable(phi, 0, C, 0);
  CHECK(out.trace.empty());
  CHECK(out.formula.atoms() == phi.atoms());
}

TEST_CASE("eliminator reports stuck inputs", "[formula][eliminate]") {
  auto const C = fixtures::chain();
  auto const phi = parse_formula("x0 = e*x0 & 0*x1 = 0*x0", C);
  CHECK(kind_of([&] { eliminate_variable(phi, "x0", C, 0); }) == ErrorKind::elimination_stuck);
}
