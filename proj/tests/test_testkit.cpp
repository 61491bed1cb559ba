#include <catch_amalgamated.hpp>

#include <atomic>
#include <cstdlib>
#include <set>

#include "fixtures.hpp"
#include "sact/testkit.hpp"

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

  ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.monoid_order_bound = 2;
    cfg.act_size_bound     = 2;
    cfg.formula_bounds     = {1, 1, 2};
    return cfg;
  }

  // Some enumerated formula, read with either free variable as parameter,
  // has two overlapping distinct copies.
  bool syntactic_nonnormal(Act const& A, std::vector<Formula> const& formulas) {
    for (auto const& phi : formulas) {
      if (phi.free_count() != 2) {
        continue;
      }
      for (auto const& p : phi.free_vars()) {
        if (!is_copy_normal(phi, A, {p})) {
          return true;
        }
      }
    }
    return false;
  }
}  // namespace

TEST_CASE("configuration parsing", "[testkit][config]") {
  auto const cfg = config_from_json(json::parse(R"({"monoid_order_bound": 3, "act_size_bound": 2,
      "formula_bounds": {"free": 1, "bound": 1, "atoms": 3}, "parallelism": 2})"));
  CHECK(cfg.monoid_order_bound == 3);
  CHECK(cfg.formula_bounds.max_atoms == 3);
  CHECK(cfg.parallelism == 2);
  CHECK_FALSE(cfg.seed.has_value());
  CHECK(config_from_json(config_json(cfg)).formula_bounds.max_bound == 1);

  CHECK(kind_of([] { config_from_json(json::parse(R"({"monoid_order": 3})")); }) == ErrorKind::parse_error);
  CHECK(kind_of([] { config_from_json(json::parse(R"({"formula_bounds": {"vars": 1}})")); })
        == ErrorKind::parse_error);
  CHECK(kind_of([] { config_from_json(json::parse(R"({"act_size_bound": "two"})")); }) == ErrorKind::parse_error);
  CHECK(kind_of([] { config_from_json(json::parse(R"({"monoid_order_bound": 6})")); }) == ErrorKind::bound_exceeded);
  CHECK(kind_of([] { config_from_json(json::parse(R"({"act_size_bound": 0})")); }) == ErrorKind::bound_exceeded);
  CHECK(kind_of([] { config_from_json(json::parse(R"({"formula_bounds": {"free": 3}})")); })
        == ErrorKind::bound_exceeded);
  CHECK(kind_of([] { config_from_json(json::parse(R"({"samples": 4})")); }) == ErrorKind::precondition_fails);
  CHECK(config_from_json(json::parse(R"({"samples": 4, "seed": 7})")).seed == std::optional<std::uint64_t>{7});
}

TEST_CASE("thread count and parallel_for", "[testkit]") {
  ::unsetenv("SACT_THREADS");
  CHECK(thread_count(3) == 3);
  CHECK(thread_count(0) == 1);
  ::setenv("SACT_THREADS", "5", 1);
  CHECK(thread_count(1) == 5);
  ::unsetenv("SACT_THREADS");
  std::vector<std::atomic<int>> hits(100);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  for (auto const& h : hits) {
    CHECK(h.load() == 1);
  }
}

TEST_CASE("seeded sampling is reproducible", "[testkit]") {
  ExperimentConfig cfg;
  cfg.act_size_bound = 3;
  cfg.samples        = 4;
  cfg.seed           = 11;
  auto const D       = fixtures::diamond();
  auto const x       = sweep_acts(D, cfg, false);
  auto const y       = sweep_acts(D, cfg, false);
  REQUIRE(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(x[i] == y[i]);
  }
  CHECK(x.size() <= 3 * cfg.samples);
  cfg.samples = 0;
  CHECK(sweep_acts(D, cfg, false).size() > x.size());
}

TEST_CASE("relation closure agrees with the syntactic enumeration", "[testkit][oracle]") {
  FormulaBounds const b{1, 1, 3};
  for (std::size_t n = 1; n <= 3; ++n) {
    for (auto const& M : enumerate_monoids(n)) {
      auto const formulas = enumerate_formulas(M, {2, b.max_bound, b.max_atoms});
      for (std::size_t m = 1; m <= 3; ++m) {
        for (auto const& A : enumerate_acts(M, m)) {
          auto const found = find_nonnormal_formula(A, b);
          CHECK(found.has_value() == syntactic_nonnormal(A, formulas));
          if (found) {
            CHECK_FALSE(is_copy_normal(*found, A, {"y1"}));
          }
        }
      }
    }
  }
}

TEST_CASE("cross-validation on a small sweep", "[testkit][crossval]") {
  auto const report = run_theorem1_crossval(small_config());
  CHECK(report.discrepancies.empty());
  CHECK(report.acts == report.holds + report.fails);
  CHECK(report.necessity_ok == report.fails);
  CHECK(report.monoids == 3);
}

TEST_CASE("a criterion mutant is caught and its discrepancies replay", "[testkit][crossval]") {
  ExperimentConfig cfg;
  cfg.monoid_order_bound = 3;
  cfg.act_size_bound     = 3;
  cfg.formula_bounds     = {2, 1, 2};
  CriterionChecker mutant = [](Act const& A) { return theorem1_check(A, CriterionVariant::skip_I); };
  auto const       report = run_theorem1_crossval(cfg, mutant, "skip_I");
  REQUIRE_FALSE(report.discrepancies.empty());
  for (auto const& d : report.discrepancies) {
    CHECK(replay(d, mutant));
  }
  auto const j = crossval_json(report);
  CHECK(j.at("checker") == "skip_I");
  CHECK(j.at("discrepancies").size() == report.discrepancies.size());
}

TEST_CASE("reports are identical across runs and worker counts", "[testkit][determinism]") {
  auto cfg = small_config();
  auto const a = dump(crossval_json(run_theorem1_crossval(cfg)));
  auto const b = dump(crossval_json(run_theorem1_crossval(cfg)));
  cfg.parallelism = 4;
  auto const c = dump(crossval_json(run_theorem1_crossval(cfg)));
  CHECK(a == b);
  CHECK(a == c);
  cfg.monoid_order_bound = 3;
  CHECK(dump(class_sweep_json(run_class_decision_sweep(cfg)))
        == dump(class_sweep_json(run_class_decision_sweep(cfg))));
}

TEST_CASE("regular acts from cyclic acts", "[testkit]") {
  for (std::size_t n = 1; n <= 3; ++n) {
    for (auto const& M : enumerate_commutative_monoids(n)) {
      std::set<std::vector<std::size_t>> all;
      for (std::size_t m = 1; m <= 3; ++m) {
        for (auto const& A : enumerate_regular_acts(M, m)) {
          all.insert(A.table());
        }
      }
      for (auto const& A : regular_acts_from_cyclics(M, 3)) {
        CHECK(is_regular_act(A));
        CHECK(all.contains(A.table()));
      }
    }
  }
}

TEST_CASE("class decision sweep", "[testkit][class]") {
  ExperimentConfig cfg;
  cfg.monoid_order_bound = 3;
  cfg.act_size_bound     = 3;
  cfg.commutative_only   = true;
  auto const report = run_class_decision_sweep(cfg);
  CHECK(report.discrepancies.empty());
  CHECK_FALSE(report.entries.empty());
}

TEST_CASE("antiadditivity sweep and its mutant", "[testkit][antiadditivity]") {
  ExperimentConfig cfg;
  cfg.monoid_order_bound = 2;
  cfg.act_size_bound     = 2;
  cfg.formula_bounds     = {1, 1, 2};
  auto const report = run_antiadditivity_sweep(cfg);
  CHECK(report.discrepancies.empty());
  for (auto const& e : report.entries) {
    for (auto const& [order, count] : e.certificates) {
      CHECK(order == 1);
    }
  }
  auto const mutant = run_antiadditivity_sweep(cfg, GroupDetectorVariant::accept_semigroups);
  CHECK_FALSE(mutant.discrepancies.empty());
}

TEST_CASE("elimination sweep", "[testkit][elimination]") {
  ExperimentConfig cfg;
  cfg.monoid_order_bound = 2;
  cfg.act_size_bound     = 2;
  cfg.formula_bounds     = {1, 0, 2};
  auto const report = run_elimination_sweep(cfg);
  REQUIRE_FALSE(report.entries.empty());
  for (auto const& e : report.entries) {
    CHECK(e.mismatches == 0);
    CHECK(e.runs == e.reduced + e.stuck);
  }
  auto const j = elimination_json(report);
  CHECK(j.contains("entries"));
}
