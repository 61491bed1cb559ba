// sact - finite monoids, S-acts and primitive formulas
//
// Exhaustive cross-validation harness: experiment configuration, relation
// closures over small acts, and the sweeps that compare independent oracles.

#ifndef SACT_TESTKIT_HPP_
#define SACT_TESTKIT_HPP_

#include <algorithm>      // for sort, min, shuffle
#include <bit>            // for popcount
#include <cstddef>        // for size_t
#include <cstdint>        // for uint64_t
#include <cstdlib>        // for getenv, strtoul
#include <functional>     // for function
#include <map>            // for map
#include <optional>       // for optional
#include <random>         // for mt19937_64
#include <set>            // for set
#include <string>         // for string
#include <thread>         // for thread
#include <unordered_map>  // for unordered_map
#include <utility>        // for pair, move
#include <vector>         // for vector

#include "json.hpp"

#include "act.hpp"
#include "deciders.hpp"
#include "error.hpp"
#include "formula.hpp"
#include "io.hpp"
#include "monoid.hpp"
#include "report.hpp"

namespace sact {

  ////////////////////////////////////////////////////////////////////////////
  // Configuration
  ////////////////////////////////////////////////////////////////////////////

  constexpr std::size_t max_config_order    = 5;
  constexpr std::size_t max_config_act_size = 6;

  //! Bounds of a sweep. formula_bounds.max_free is the width of the object
  //! block and of the parameter block. When samples is nonzero, at most that
  //! many acts per monoid and carrier size are drawn using seed.
  struct ExperimentConfig {
    std::size_t                  monoid_order_bound = 2;
    std::size_t                  act_size_bound     = 2;
    FormulaBounds                formula_bounds{2, 1, 2};
    std::optional<std::uint64_t> seed;
    std::size_t                  samples          = 0;
    std::size_t                  parallelism      = 1;
    bool                         commutative_only = false;
  };

  inline void validate_config(ExperimentConfig const& cfg) {
    auto const& f = cfg.formula_bounds;
    if (cfg.monoid_order_bound == 0 || cfg.act_size_bound == 0 || f.max_free == 0 || f.max_atoms == 0
        || cfg.parallelism == 0) {
      throw Error(ErrorKind::bound_exceeded, "bounds must be positive");
    }
    if (cfg.monoid_order_bound > max_config_order || cfg.act_size_bound > max_config_act_size
        || f.max_free > 2 || f.max_bound > formula_bound_limits.max_bound
        || f.max_atoms > formula_bound_limits.max_atoms) {
      throw Error(ErrorKind::bound_exceeded, "bounds exceed the configured limits");
    }
    if (cfg.samples > 0 && !cfg.seed) {
      throw Error(ErrorKind::precondition_fails, "sampling requires an explicit seed");
    }
  }

  inline ExperimentConfig config_from_json(json const& j) {
    ExperimentConfig cfg;
    try {
      for (auto const& [key, value] : j.items()) {
        if (key == "monoid_order_bound") {
          cfg.monoid_order_bound = value.get<std::size_t>();
        } else if (key == "act_size_bound") {
          cfg.act_size_bound = value.get<std::size_t>();
        } else if (key == "formula_bounds") {
          for (auto const& [k, v] : value.items()) {
            if (k == "free") {
              cfg.formula_bounds.max_free = v.get<std::size_t>();
            } else if (k == "bound") {
              cfg.formula_bounds.max_bound = v.get<std::size_t>();
            } else if (k == "atoms") {
              cfg.formula_bounds.max_atoms = v.get<std::size_t>();
            } else {
              throw Error(ErrorKind::parse_error, "unknown formula bound '" + k + "'");
            }
          }
        } else if (key == "seed") {
          cfg.seed = value.get<std::uint64_t>();
        } else if (key == "samples") {
          cfg.samples = value.get<std::size_t>();
        } else if (key == "parallelism") {
          cfg.parallelism = value.get<std::size_t>();
        } else if (key == "commutative_only") {
          cfg.commutative_only = value.get<bool>();
        } else {
          throw Error(ErrorKind::parse_error, "unknown configuration key '" + key + "'");
        }
      }
    } catch (json::exception const& e) {
      throw Error(ErrorKind::parse_error, e.what());
    }
    validate_config(cfg);
    return cfg;
  }

  inline json config_json(ExperimentConfig const& cfg) {
    json out = {{"monoid_order_bound", cfg.monoid_order_bound},
                {"act_size_bound", cfg.act_size_bound},
                {"formula_bounds",
                 {{"free", cfg.formula_bounds.max_free},
                  {"bound", cfg.formula_bounds.max_bound},
                  {"atoms", cfg.formula_bounds.max_atoms}}},
                {"samples", cfg.samples},
                {"commutative_only", cfg.commutative_only}};
    if (cfg.seed) {
      out["seed"] = *cfg.seed;
    }
    return out;
  }

  //! The worker count: SACT_THREADS when set, otherwise the hint.
  inline std::size_t thread_count(std::size_t hint) {
    if (char const* env = std::getenv("SACT_THREADS")) {
      auto n = std::strtoul(env, nullptr, 10);
      if (n > 0) {
        return n;
      }
    }
    return std::max<std::size_t>(hint, 1);
  }

  //! Runs f(0), ..., f(count - 1) on up to `threads` workers. Each index is
  //! processed exactly once; callers store results by index.
  inline void parallel_for(std::size_t count, std::size_t threads, std::function<void(std::size_t)> const& f) {
    threads = std::min(threads, count);
    if (threads <= 1) {
      for (std::size_t i = 0; i < count; ++i) {
        f(i);
      }
      return;
    }
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < count; i += threads) {
          f(i);
        }
      });
    }
    for (auto& th : pool) {
      th.join();
    }
  }

  //! The monoids of a sweep, in enumeration order.
  inline std::vector<Monoid> sweep_monoids(ExperimentConfig const& cfg) {
    std::vector<Monoid> out;
    for (std::size_t n = 1; n <= cfg.monoid_order_bound; ++n) {
      auto ms = enumerate_monoids(n, cfg.commutative_only);
      out.insert(out.end(), ms.begin(), ms.end());
    }
    return out;
  }

  //! The acts of carrier size 1..act_size_bound over M (only regular ones
  //! when asked), sampled when the configuration says so.
  inline std::vector<Act> sweep_acts(Monoid const& M, ExperimentConfig const& cfg, bool regular_only) {
    std::vector<Act> out;
    for (std::size_t m = 1; m <= cfg.act_size_bound; ++m) {
      auto acts = regular_only ? enumerate_regular_acts(M, m, max_config_act_size)
                               : enumerate_acts(M, m, max_config_act_size);
      if (cfg.samples > 0 && acts.size() > cfg.samples) {
        std::mt19937_64 rng(*cfg.seed ^ (M.size() * 1000003u + m));
        std::vector<std::size_t> idx(acts.size());
        std::iota(idx.begin(), idx.end(), 0);
        for (std::size_t i = 0; i < cfg.samples; ++i) {
          std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
          std::swap(idx[i], idx[pick(rng)]);
        }
        idx.resize(cfg.samples);
        std::sort(idx.begin(), idx.end());
        std::vector<Act> chosen;
        for (auto i : idx) {
          chosen.push_back(acts[i]);
        }
        acts = std::move(chosen);
      }
      out.insert(out.end(), acts.begin(), acts.end());
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////////
  // Discrepancies
  ////////////////////////////////////////////////////////////////////////////

  //! A disagreement between two oracles on stored inputs. subject is a
  //! formula (with its parameter variables) or an instance description.
  struct Discrepancy {
    std::string              kind;
    Monoid                   monoid;
    std::optional<Act>       act;
    std::string              subject;
    std::vector<std::string> parameters;
    std::string              left;
    std::string              right;
  };

  inline json discrepancy_json(Discrepancy const& d) {
    json out = {{"kind", d.kind},
                {"monoid", monoid_json(d.monoid)},
                {"subject", d.subject},
                {"parameters", d.parameters},
                {"left", d.left},
                {"right", d.right}};
    if (d.act) {
      out["act"] = act_json(*d.act);
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////////
  // Relation closures
  ////////////////////////////////////////////////////////////////////////////

  namespace detail {
    using Bits = std::vector<std::uint64_t>;

    struct BitsHash {
      std::size_t operator()(Bits const& b) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        for (auto w : b) {
          h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
      }
    };

    // Assignments of v variables to m points, variable 0 most significant.
    class Space {
     public:
      Space(std::size_t m, std::size_t v) : _m(m), _v(v), _size(1) {
        for (std::size_t i = 0; i < v; ++i) {
          _size *= m;
        }
        _coord.resize(_size * v);
        for (std::size_t p = 0; p < _size; ++p) {
          std::size_t x = p;
          for (std::size_t i = v; i > 0; --i) {
            _coord[p * v + i - 1] = x % m;
            x /= m;
          }
        }
      }

      std::size_t size() const noexcept {
        return _size;
      }

      std::size_t words() const noexcept {
        return (_size + 63) / 64;
      }

      std::size_t at(std::size_t p, std::size_t var) const noexcept {
        return _coord[p * _v + var];
      }

      Bits atom(Act const& A, Atom const& a) const {
        Bits out(words(), 0);
        for (std::size_t p = 0; p < _size; ++p) {
          if (A(a.lhs.coef, at(p, a.lhs.var)) == A(a.rhs.coef, at(p, a.rhs.var))) {
            out[p / 64] |= std::uint64_t(1) << (p % 64);
          }
        }
        return out;
      }

     private:
      std::size_t              _m;
      std::size_t              _v;
      std::size_t              _size;
      std::vector<std::size_t> _coord;
    };

    inline bool test(Bits const& b, std::size_t p) {
      return (b[p / 64] >> (p % 64)) & 1u;
    }

    // Distinct relations obtained as conjunctions of 1..max_atoms atoms over
    // `vars` variables, each with the atom list that first produced it.
    class Closure {
     public:
      Closure(Act const& A, std::size_t vars, std::size_t max_atoms) : _space(A.size(), vars) {
        Monoid const& M = A.monoid();
        std::unordered_map<Bits, std::size_t, BitsHash> seen_atom;
        for (std::size_t u = 0; u < vars; ++u) {
          for (std::size_t s = 0; s < M.size(); ++s) {
            for (std::size_t v = u; v < vars; ++v) {
              for (std::size_t t = (v == u ? s : 0); t < M.size(); ++t) {
                Atom a{{s, u}, {t, v}};
                auto bits = _space.atom(A, a);
                if (seen_atom.emplace(bits, _atoms.size()).second) {
                  _atoms.push_back(a);
                  _atom_bits.push_back(std::move(bits));
                }
              }
            }
          }
        }
        std::unordered_map<Bits, std::size_t, BitsHash> seen;
        for (std::size_t i = 0; i < _atoms.size(); ++i) {
          if (seen.emplace(_atom_bits[i], _rels.size()).second) {
            _rels.push_back(_atom_bits[i]);
            _parent.push_back({UNDEFINED, i});
          }
        }
        std::size_t begin = 0;
        for (std::size_t level = 2; level <= max_atoms; ++level) {
          std::size_t const end = _rels.size();
          for (std::size_t r = begin; r < end; ++r) {
            for (std::size_t i = 0; i < _atoms.size(); ++i) {
              Bits next = _rels[r];
              for (std::size_t w = 0; w < next.size(); ++w) {
                next[w] &= _atom_bits[i][w];
              }
              if (seen.emplace(next, _rels.size()).second) {
                _rels.push_back(std::move(next));
                _parent.push_back({r, i});
              }
            }
          }
          begin = end;
        }
      }

      Space const& space() const noexcept {
        return _space;
      }

      std::vector<Bits> const& relations() const noexcept {
        return _rels;
      }

      std::vector<Atom> witness(std::size_t r) const {
        std::vector<Atom> out;
        while (r != UNDEFINED) {
          out.push_back(_atoms[_parent[r].second]);
          r = _parent[r].first;
        }
        std::reverse(out.begin(), out.end());
        return out;
      }

     private:
      Space                                            _space;
      std::vector<Atom>                                _atoms;
      std::vector<Bits>                                _atom_bits;
      std::vector<Bits>                                _rels;
      std::vector<std::pair<std::size_t, std::size_t>> _parent;
    };

    // For a relation over (x̄, ȳ, ū) with blocks of width w, w, b: whether
    // the copies indexed by ȳ are pairwise equal or disjoint.
    inline bool copies_normal(Bits const& rel, std::size_t m, std::size_t w, std::size_t b) {
      std::size_t block = 1, tail = 1;
      for (std::size_t i = 0; i < w; ++i) {
        block *= m;
      }
      for (std::size_t i = 0; i < b; ++i) {
        tail *= m;
      }
      std::vector<std::uint64_t> copy(block, 0);
      for (std::size_t x = 0; x < block; ++x) {
        for (std::size_t y = 0; y < block; ++y) {
          std::size_t const base = (x * block + y) * tail;
          for (std::size_t u = 0; u < tail; ++u) {
            if (test(rel, base + u)) {
              copy[y] |= std::uint64_t(1) << x;
              break;
            }
          }
        }
      }
      for (std::size_t i = 0; i < block; ++i) {
        for (std::size_t j = i + 1; j < block; ++j) {
          if ((copy[i] & copy[j]) != 0 && copy[i] != copy[j]) {
            return false;
          }
        }
      }
      return true;
    }

    inline std::vector<std::string> block_names(std::string const& stem, std::size_t w) {
      std::vector<std::string> out;
      for (std::size_t i = 1; i <= w; ++i) {
        out.push_back(stem + std::to_string(i));
      }
      return out;
    }
  }  // namespace detail

  //! The first conjunction (object block x1.., parameter block y1.., bound
  //! u1..) within the bounds whose copies on A are not pairwise equal or
  //! disjoint, found by closing the atom relations under intersection.
  inline std::optional<Formula> find_nonnormal_formula(Act const& A, FormulaBounds const& b) {
    std::size_t const w = b.max_free, k = b.max_bound;
    if (A.size() == 0) {
      return std::nullopt;
    }
    std::size_t block = 1;
    for (std::size_t i = 0; i < w; ++i) {
      block *= A.size();
    }
    if (block > 64) {
      throw Error(ErrorKind::bound_exceeded, "object block too large for the relation engine");
    }
    detail::Closure closure(A, 2 * w + k, b.max_atoms);
    auto const&     rels = closure.relations();
    for (std::size_t r = 0; r < rels.size(); ++r) {
      if (!detail::copies_normal(rels[r], A.size(), w, k)) {
        auto free = detail::block_names("x", w);
        auto ys   = detail::block_names("y", w);
        free.insert(free.end(), ys.begin(), ys.end());
        return Formula(free, detail::block_names("u", k), closure.witness(r));
      }
    }
    return std::nullopt;
  }

  ////////////////////////////////////////////////////////////////////////////
  // Theorem cross-validation
  ////////////////////////////////////////////////////////////////////////////

  using CriterionChecker = std::function<CriterionResult(Act const&)>;

  struct CrossvalReport {
    ExperimentConfig         config;
    std::string              checker;
    std::size_t              monoids         = 0;
    std::size_t              acts            = 0;
    std::size_t              holds           = 0;
    std::size_t              fails           = 0;
    std::size_t              necessity_ok    = 0;
    std::vector<Discrepancy> discrepancies;
    double                   seconds = 0;
  };

  inline json crossval_json(CrossvalReport const& r) {
    json d = json::array();
    for (auto const& x : r.discrepancies) {
      d.push_back(discrepancy_json(x));
    }
    return {{"schema", report_schema_version},
            {"harness", "theorem1-crossval"},
            {"config", config_json(r.config)},
            {"checker", r.checker},
            {"counts",
             {{"monoids", r.monoids},
              {"acts", r.acts},
              {"holds", r.holds},
              {"fails", r.fails},
              {"necessity_verified", r.necessity_ok}}},
            {"discrepancies", d}};
  }

  //! Replays a discrepancy of the cross-validation: the criterion verdict
  //! from the named checker against copy-normality of the stored formula.
  inline bool replay(Discrepancy const& d, CriterionChecker const& checker) {
    if (!d.act) {
      return false;
    }
    auto const verdict = checker(*d.act).holds ? std::string("Holds") : std::string("Fails");
    std::vector<std::string> free;
    if (d.kind == "forward") {
      free = detail::block_names("x", d.parameters.size());
      free.insert(free.end(), d.parameters.begin(), d.parameters.end());
      auto phi    = parse_formula(d.subject, d.monoid, free);
      auto normal = is_copy_normal(phi, *d.act, d.parameters) ? std::string("CopyNormal")
                                                              : std::string("NotCopyNormal");
      return verdict == d.left && normal == d.right;
    }
    if (d.kind == "reverse") {
      auto const r = checker(*d.act);
      return verdict == d.left && !r.holds && !necessity_construction(*d.act, *r.violation);
    }
    return false;
  }

  //! For every act within the bounds: a Holds verdict must come with no
  //! non-normal conjunction in the formula sweep, and a Fails verdict must
  //! turn into a verified violation by the necessity construction.
  inline CrossvalReport run_theorem1_crossval(ExperimentConfig const& cfg,
                                              CriterionChecker const& checker,
                                              std::string const&      checker_name = "criterion") {
    validate_config(cfg);
    CrossvalReport report;
    report.config  = cfg;
    report.checker = checker_name;
    auto const monoids = sweep_monoids(cfg);
    report.monoids     = monoids.size();
    struct Local {
      std::size_t              acts = 0, holds = 0, fails = 0, necessity = 0;
      std::vector<Discrepancy> discrepancies;
    };
    std::vector<Local> local(monoids.size());
    parallel_for(monoids.size(), thread_count(cfg.parallelism), [&](std::size_t i) {
      Monoid const& M = monoids[i];
      for (auto const& A : sweep_acts(M, cfg, false)) {
        auto& out = local[i];
        ++out.acts;
        auto const verdict = checker(A);
        if (verdict.holds) {
          ++out.holds;
          if (auto phi = find_nonnormal_formula(A, cfg.formula_bounds)) {
            auto params = detail::block_names("y", cfg.formula_bounds.max_free);
            bool confirmed = !is_copy_normal(*phi, A, params);
            out.discrepancies.push_back({"forward", M, A, to_string(*phi, M), params, "Holds",
                                         confirmed ? "NotCopyNormal" : "CopyNormal"});
          }
        } else {
          ++out.fails;
          if (verdict.violation && necessity_construction(A, *verdict.violation)) {
            ++out.necessity;
          } else {
            out.discrepancies.push_back({"reverse", M, A, "necessity construction", {}, "Fails",
                                         "no verified violation"});
          }
        }
      }
    });
    for (auto& l : local) {
      report.acts += l.acts;
      report.holds += l.holds;
      report.fails += l.fails;
      report.necessity_ok += l.necessity;
      for (auto& d : l.discrepancies) {
        report.discrepancies.push_back(std::move(d));
      }
    }
    return report;
  }

  inline CrossvalReport run_theorem1_crossval(ExperimentConfig const& cfg) {
    return run_theorem1_crossval(cfg, [](Act const& A) { return theorem1_check(A); });
  }

  ////////////////////////////////////////////////////////////////////////////
  // Class decision sweep
  ////////////////////////////////////////////////////////////////////////////

  //! Regular acts of size at most `bound` obtained from the cyclic acts ₛSe
  //! (e an idempotent of R) by coproducts and by quotients of those
  //! coproducts by congruences generated by one pair.
  inline std::vector<Act> regular_acts_from_cyclics(Monoid const& M, std::size_t bound) {
    auto const       R       = regular_part(M);
    auto const       regular = regular_representation(M);
    std::vector<Act> cyclics;
    for (auto e : idempotents(M).members()) {
      if (R.contains(e)) {
        cyclics.push_back(cyclic_subact(regular, e).act);
      }
    }
    std::vector<Act>                       out;
    std::set<std::vector<std::size_t>>     seen;
    auto                                   keep = [&](Act const& A) {
      if (A.size() <= bound && is_regular_act(A)) {
        auto c = canonical_form(A);
        if (seen.insert(c.table()).second) {
          out.push_back(std::move(c));
        }
      }
    };
    std::vector<std::size_t> pick;
    std::function<void(std::size_t, std::size_t)> grow = [&](std::size_t start, std::size_t size) {
      if (!pick.empty()) {
        std::vector<Act> parts;
        for (auto i : pick) {
          parts.push_back(cyclics[i]);
        }
        auto const sum = coproduct(parts);
        keep(sum.act);
        for (std::size_t p = 0; p < sum.act.size(); ++p) {
          for (std::size_t q = p + 1; q < sum.act.size(); ++q) {
            std::vector<std::pair<std::size_t, std::size_t>> pair{{p, q}};
            keep(quotient(sum.act, congruence_closure(sum.act, pair)).act);
          }
        }
      }
      for (std::size_t i = start; i < cyclics.size(); ++i) {
        if (size + cyclics[i].size() <= bound + 1) {
          pick.push_back(i);
          grow(i, size + cyclics[i].size());
          pick.pop_back();
        }
      }
    };
    grow(0, 0);
    std::sort(out.begin(), out.end(), [](Act const& x, Act const& y) {
      return std::make_pair(x.size(), x.table()) < std::make_pair(y.size(), y.table());
    });
    return out;
  }

  struct ClassSweepEntry {
    Monoid       monoid;
    ClassVerdict verdict;
    std::size_t  regular_acts      = 0;
    std::size_t  constructed_acts  = 0;
    std::size_t  criterion_failures = 0;
    std::optional<bool> counterexample_fails_criterion;
  };

  struct ClassSweepReport {
    ExperimentConfig             config;
    std::vector<ClassSweepEntry> entries;
    std::vector<Discrepancy>     discrepancies;
    double                       seconds = 0;
  };

  inline json class_sweep_json(ClassSweepReport const& r) {
    json entries = json::array();
    std::map<std::string, std::size_t> tally;
    for (auto const& e : r.entries) {
      ++tally[std::string(to_string(e.verdict.outcome))];
      json j = {{"monoid", monoid_json(e.monoid)},
                {"verdict", class_verdict_json(e.verdict, e.monoid)},
                {"regular_acts", e.regular_acts},
                {"constructed_acts", e.constructed_acts},
                {"criterion_failures", e.criterion_failures}};
      if (e.counterexample_fails_criterion) {
        j["counterexample_fails_criterion"] = *e.counterexample_fails_criterion;
      }
      entries.push_back(j);
    }
    json d = json::array();
    for (auto const& x : r.discrepancies) {
      d.push_back(discrepancy_json(x));
    }
    return {{"schema", report_schema_version},
            {"harness", "class-decision"},
            {"config", config_json(r.config)},
            {"outcomes", tally},
            {"entries", entries},
            {"discrepancies", d}};
  }

  //! Checks, for every monoid in the sweep, the chain of consequences of the
  //! class decision: counterexamples fail the criterion, PrimitiveNormal
  //! monoids have only criterion-passing regular acts (from both generators)
  //! and satisfy the necessary conditions.
  inline ClassSweepReport run_class_decision_sweep(ExperimentConfig const& cfg) {
    validate_config(cfg);
    ClassSweepReport report;
    report.config      = cfg;
    auto const monoids = sweep_monoids(cfg);
    std::vector<ClassSweepEntry>          entries(monoids.size());
    std::vector<std::vector<Discrepancy>> found(monoids.size());
    parallel_for(monoids.size(), thread_count(cfg.parallelism), [&](std::size_t i) {
      Monoid const& M       = monoids[i];
      auto&         entry   = entries[i];
      auto&         issues  = found[i];
      entry.monoid          = M;
      entry.verdict         = decide_class(M);
      auto const& v         = entry.verdict;
      auto        complain  = [&](std::optional<Act> A, std::string subject, std::string left, std::string right) {
        issues.push_back({"class", M, std::move(A), std::move(subject), {}, std::move(left), std::move(right)});
      };
      if (v.outcome == ClassOutcome::not_primitive_normal) {
        if (!v.counterexample) {
          complain(std::nullopt, "counterexample", "NotPrimitiveNormal", v.counterexample_failure.value_or(""));
        } else {
          auto const r                         = theorem1_check(v.counterexample->act);
          entry.counterexample_fails_criterion = !r.holds;
          if (r.holds) {
            complain(v.counterexample->act, "counterexample criterion", "NotPrimitiveNormal", "Holds");
          }
          if (is_copy_normal(v.counterexample->formula, v.counterexample->act, v.counterexample->parameters)) {
            complain(v.counterexample->act, to_string(v.counterexample->formula, M), "NotPrimitiveNormal",
                     "CopyNormal");
          }
        }
      }
      if (v.outcome != ClassOutcome::primitive_normal) {
        return;
      }
      if (!idempotent_comparability(M).holds) {
        complain(std::nullopt, "idempotent comparability", "PrimitiveNormal", "Fails");
      }
      if (!check_R_decomposition(M).single_idempotent) {
        complain(std::nullopt, "single idempotent with R = eR", "PrimitiveNormal", "absent");
      }
      if (!is_regularly_linearly_ordered(M).holds) {
        complain(std::nullopt, "regular linear order", "PrimitiveNormal", "Fails");
      }
      auto const                         enumerated = sweep_acts(M, cfg, true);
      std::set<std::vector<std::size_t>> known;
      for (auto const& A : enumerated) {
        ++entry.regular_acts;
        known.insert(canonical_form(A).table());
        if (!theorem1_check(A).holds) {
          ++entry.criterion_failures;
          complain(A, "regular act criterion", "PrimitiveNormal", "Fails");
        }
      }
      for (auto const& A : regular_acts_from_cyclics(M, cfg.act_size_bound)) {
        ++entry.constructed_acts;
        if (cfg.samples == 0 && !known.contains(A.table())) {
          complain(A, "generator agreement", "constructed", "not enumerated");
        }
        if (!theorem1_check(A).holds) {
          ++entry.criterion_failures;
          complain(A, "constructed act criterion", "PrimitiveNormal", "Fails");
        }
      }
    });
    report.entries = std::move(entries);
    for (auto& f : found) {
      for (auto& d : f) {
        report.discrepancies.push_back(std::move(d));
      }
    }
    return report;
  }

  ////////////////////////////////////////////////////////////////////////////
  // Antiadditivity sweep
  ////////////////////////////////////////////////////////////////////////////

  namespace detail {
    // Relations of arity k on A definable by a conjunction within the bounds
    // with one parameter, as bitmasks over A^k (A^k must fit in 64 bits).
    inline std::set<std::uint64_t> definable_relations(Act const& A, std::size_t k, FormulaBounds const& b) {
      std::size_t const m = A.size();
      std::size_t       cells = 1, tail = 1;
      for (std::size_t i = 0; i < k; ++i) {
        cells *= m;
      }
      for (std::size_t i = 0; i < b.max_bound; ++i) {
        tail *= m;
      }
      if (cells > 64) {
        throw Error(ErrorKind::bound_exceeded, "relation does not fit a 64-bit mask");
      }
      std::set<std::uint64_t> out;
      Closure                 closure(A, k + 1 + b.max_bound, b.max_atoms);
      for (auto const& rel : closure.relations()) {
        for (std::size_t p = 0; p < m; ++p) {
          std::uint64_t mask = 0;
          for (std::size_t x = 0; x < cells; ++x) {
            std::size_t const base = (x * m + p) * tail;
            for (std::size_t u = 0; u < tail; ++u) {
              if (test(rel, base + u)) {
                mask |= std::uint64_t(1) << x;
                break;
              }
            }
          }
          out.insert(mask);
        }
      }
      return out;
    }

    // Classes of a binary relation that is an equivalence on its field.
    inline std::optional<std::vector<std::uint64_t>> equivalence_classes(std::uint64_t rel, std::size_t m) {
      auto related = [&](std::size_t x, std::size_t y) { return (rel >> (x * m + y)) & 1u; };
      std::vector<std::uint64_t> classes;
      std::uint64_t              done = 0;
      for (std::size_t x = 0; x < m; ++x) {
        std::uint64_t row = 0;
        for (std::size_t y = 0; y < m; ++y) {
          if (related(x, y)) {
            row |= std::uint64_t(1) << y;
          }
        }
        if (row == 0 || ((done >> x) & 1u)) {
          continue;
        }
        if (!((row >> x) & 1u)) {
          return std::nullopt;
        }
        for (std::size_t y = 0; y < m; ++y) {
          if ((row >> y) & 1u) {
            std::uint64_t other = 0;
            for (std::size_t z = 0; z < m; ++z) {
              if (related(y, z)) {
                other |= std::uint64_t(1) << z;
              }
            }
            if (other != row) {
              return std::nullopt;
            }
          }
        }
        done |= row;
        classes.push_back(row);
      }
      return classes;
    }
  }  // namespace detail

  struct AntiadditivityEntry {
    Monoid                      monoid;
    std::size_t                 acts     = 0;
    std::size_t                 triples  = 0;
    std::map<std::size_t, std::size_t> certificates;
  };

  struct AntiadditivityReport {
    ExperimentConfig                 config;
    std::vector<AntiadditivityEntry> entries;
    std::vector<Discrepancy>         discrepancies;
    double                           seconds = 0;
  };

  inline json antiadditivity_json(AntiadditivityReport const& r) {
    json entries = json::array();
    for (auto const& e : r.entries) {
      json certs = json::object();
      for (auto const& [size, count] : e.certificates) {
        certs[std::to_string(size)] = count;
      }
      entries.push_back({{"monoid", monoid_json(e.monoid)},
                         {"acts", e.acts},
                         {"triples", e.triples},
                         {"certificates_by_order", certs}});
    }
    json d = json::array();
    for (auto const& x : r.discrepancies) {
      d.push_back(discrepancy_json(x));
    }
    return {{"schema", report_schema_version},
            {"harness", "antiadditivity"},
            {"config", config_json(r.config)},
            {"entries", entries},
            {"discrepancies", d}};
  }

  //! Mutations of the group detector, for testing the sweep itself.
  enum class GroupDetectorVariant { full, accept_semigroups };

  //! Over the regular acts of every PrimitiveNormal monoid: every Δ-primitive
  //! set X* (intersections of definable subsets), every definable
  //! equivalence α covering X*, and every definable ternary relation; a
  //! group certificate on X*/α with at least two classes is reported.
  inline AntiadditivityReport run_antiadditivity_sweep(ExperimentConfig const& cfg,
                                                       GroupDetectorVariant    variant = GroupDetectorVariant::full,
                                                       bool                    all_monoids = false) {
    validate_config(cfg);
    AntiadditivityReport report;
    report.config      = cfg;
    std::vector<Monoid> monoids;
    for (auto const& M : sweep_monoids(cfg)) {
      if (all_monoids || decide_class(M).outcome == ClassOutcome::primitive_normal) {
        monoids.push_back(M);
      }
    }
    std::vector<AntiadditivityEntry>      entries(monoids.size());
    std::vector<std::vector<Discrepancy>> found(monoids.size());
    parallel_for(monoids.size(), thread_count(cfg.parallelism), [&](std::size_t i) {
      Monoid const& M = monoids[i];
      auto&         entry = entries[i];
      entry.monoid        = M;
      for (auto const& A : sweep_acts(M, cfg, true)) {
        ++entry.acts;
        std::size_t const m     = A.size();
        auto const        unary = detail::definable_relations(A, 1, cfg.formula_bounds);
        std::set<std::uint64_t> bases(unary.begin(), unary.end());
        for (bool grew = true; grew;) {
          grew = false;
          for (auto x : std::vector<std::uint64_t>(bases.begin(), bases.end())) {
            for (auto y : unary) {
              grew = bases.insert(x & y).second || grew;
            }
          }
        }
        std::vector<std::vector<std::uint64_t>> equivalences;
        for (auto rel : detail::definable_relations(A, 2, cfg.formula_bounds)) {
          if (auto classes = detail::equivalence_classes(rel, m)) {
            equivalences.push_back(*classes);
          }
        }
        auto const ternary = detail::definable_relations(A, 3, cfg.formula_bounds);
        for (auto X : bases) {
          for (auto const& eq : equivalences) {
            std::vector<std::vector<std::size_t>> classes;
            std::uint64_t                         covered = 0;
            for (auto c : eq) {
              covered |= c;
              std::vector<std::size_t> members;
              for (std::size_t x = 0; x < m; ++x) {
                if ((c & X) >> x & 1u) {
                  members.push_back(x);
                }
              }
              if (!members.empty()) {
                classes.push_back(std::move(members));
              }
            }
            if ((X & ~covered) != 0 || classes.empty()) {
              continue;
            }
            for (auto op : ternary) {
              ++entry.triples;
              auto related = [&](std::size_t x, std::size_t y, std::size_t z) {
                return (op >> ((x * m + y) * m + z)) & 1u;
              };
              auto g = detail::group_on_classes(classes, m, related,
                                                variant == GroupDetectorVariant::accept_semigroups);
              if (g) {
                ++entry.certificates[g->order];
                if (g->order >= 2) {
                  json table = g->table;
                  found[i].push_back({"group", M, A,
                                      "X=" + std::to_string(X) + " op=" + std::to_string(op) + " table="
                                          + table.dump(),
                                      {},
                                      "PrimitiveNormal",
                                      "group of order " + std::to_string(g->order)});
                }
              }
            }
          }
        }
      }
    });
    report.entries = std::move(entries);
    for (auto& f : found) {
      for (auto& d : f) {
        report.discrepancies.push_back(std::move(d));
      }
    }
    return report;
  }

  ////////////////////////////////////////////////////////////////////////////
  // Elimination sweep
  ////////////////////////////////////////////////////////////////////////////

  struct EliminationEntry {
    Monoid                   monoid;
    std::size_t              idempotent = 0;
    std::size_t              regular_acts = 0;
    std::size_t              formulas     = 0;
    std::size_t              runs         = 0;
    std::size_t              reduced      = 0;
    std::size_t              stuck        = 0;
    std::size_t              mismatches   = 0;
    std::vector<std::string> stuck_examples;
  };

  struct EliminationReport {
    ExperimentConfig              config;
    std::vector<EliminationEntry> entries;
    std::vector<Discrepancy>      discrepancies;
    double                        seconds = 0;
  };

  inline json elimination_json(EliminationReport const& r) {
    json entries = json::array();
    for (auto const& e : r.entries) {
      entries.push_back({{"monoid", monoid_json(e.monoid)},
                         {"idempotent", e.monoid.name(e.idempotent)},
                         {"regular_acts", e.regular_acts},
                         {"formulas", e.formulas},
                         {"runs", e.runs},
                         {"reduced", e.reduced},
                         {"stuck", e.stuck},
                         {"mismatches", e.mismatches},
                         {"stuck_examples", e.stuck_examples}});
    }
    json d = json::array();
    for (auto const& x : r.discrepancies) {
      d.push_back(discrepancy_json(x));
    }
    return {{"schema", report_schema_version},
            {"harness", "elimination"},
            {"config", config_json(r.config)},
            {"entries", entries},
            {"discrepancies", d}};
  }

  //! For every commutative monoid with R = eR linearly ordered, every
  //! quantifier-free conjunction with at most formula_bounds.max_free + 1
  //! variables and max_atoms atoms, and every variable x0: the rewrite must
  //! leave one atom mentioning x0 and keep the solution set on every regular
  //! act within the bounds.
  inline EliminationReport run_elimination_sweep(ExperimentConfig const& cfg, std::size_t stuck_examples = 5) {
    validate_config(cfg);
    EliminationReport report;
    report.config = cfg;
    struct Job {
      Monoid      M;
      std::size_t e;
    };
    std::vector<Job> jobs;
    for (std::size_t n = 1; n <= cfg.monoid_order_bound; ++n) {
      for (auto const& M : enumerate_commutative_monoids(n)) {
        auto const R = regular_part(M);
        auto const e = eliminator_idempotent(M);
        if (!R.empty() && e && is_linearly_ordered(M, R).holds) {
          jobs.push_back({M, *e});
        }
      }
    }
    std::size_t const vars = cfg.formula_bounds.max_free + 1;
    std::vector<EliminationEntry>         entries(jobs.size());
    std::vector<std::vector<Discrepancy>> found(jobs.size());
    parallel_for(jobs.size(), thread_count(cfg.parallelism), [&](std::size_t i) {
      Monoid const& M     = jobs[i].M;
      auto&         entry = entries[i];
      entry.monoid        = M;
      entry.idempotent    = jobs[i].e;
      Eliminator const elim(M, jobs[i].e);
      auto const       acts = sweep_acts(M, cfg, true);
      entry.regular_acts    = acts.size();
      std::vector<detail::Space> spaces;
      for (auto const& A : acts) {
        spaces.emplace_back(A.size(), vars);
      }
      auto solutions = [&](std::vector<Atom> const& atoms, std::size_t a) {
        detail::Bits out(spaces[a].words(), ~std::uint64_t(0));
        for (auto const& atom : atoms) {
          auto bits = spaces[a].atom(acts[a], atom);
          for (std::size_t w = 0; w < out.size(); ++w) {
            out[w] &= bits[w];
          }
        }
        return out;
      };
      for (auto const& phi0 : enumerate_formulas(M, {vars, 0, cfg.formula_bounds.max_atoms})) {
        // Pad to the full variable count so solution sets share a space.
        Formula phi(detail::numbered("x", vars), {}, phi0.atoms());
        ++entry.formulas;
        for (std::size_t x0 = 0; x0 < phi0.free_count(); ++x0) {
          ++entry.runs;
          try {
            auto const result = elim.run(phi, x0);
            std::size_t count  = 0;
            for (auto const& a : result.formula.atoms()) {
              count += a.mentions(x0) ? 1 : 0;
            }
            if (count > 1) {
              found[i].push_back({"elimination", M, std::nullopt, to_string(phi, M), {"x" + std::to_string(x0)},
                                  "rewrite", std::to_string(count) + " atoms mention x0"});
              continue;
            }
            ++entry.reduced;
            for (std::size_t a = 0; a < acts.size(); ++a) {
              if (solutions(phi.atoms(), a) != solutions(result.formula.atoms(), a)) {
                ++entry.mismatches;
                found[i].push_back({"elimination", M, acts[a], to_string(phi, M), {"x" + std::to_string(x0)},
                                    to_string(result.formula, M), "solution sets differ"});
                break;
              }
            }
          } catch (Error const& err) {
            if (err.kind() != ErrorKind::elimination_stuck) {
              throw;
            }
            if (entry.stuck++ == 0) {
              found[i].push_back({"elimination", M, std::nullopt, to_string(phi, M), {"x" + std::to_string(x0)},
                                  "rewrite", "stuck"});
            }
            if (entry.stuck_examples.size() < stuck_examples) {
              entry.stuck_examples.push_back(to_string(phi, M) + " ; x" + std::to_string(x0));
            }
          }
        }
      }
    });
    report.entries = std::move(entries);
    for (auto& f : found) {
      for (auto& d : f) {
        report.discrepancies.push_back(std::move(d));
      }
    }
    return report;
  }

}  // namespace sact

#endif  // SACT_TESTKIT_HPP_
