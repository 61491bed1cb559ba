// sact command-line tool.
//
// Exit codes: 0 = Holds / PrimitiveNormal / no discrepancies,
// 1 = Fails / NotPrimitiveNormal / discrepancies found, 2 = Inapplicable or
// usage, parse and I/O errors, 3 = the two oracles of act-check disagree.

#include <cstddef>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sact/act.hpp"
#include "sact/deciders.hpp"
#include "sact/formula.hpp"
#include "sact/io.hpp"
#include "sact/monoid.hpp"
#include "sact/report.hpp"
#include "sact/testkit.hpp"

namespace {

  using sact::json;

  struct Output {
    std::string format = "json";
    std::string path;
  };

  // A verdict report and the text lines that summarize it.
  struct Result {
    json                     report;
    std::vector<std::string> text;
    int                      code = 0;
  };

  void emit(Output const& out, Result const& r) {
    std::string body;
    if (out.format == "json") {
      body = sact::dump(r.report);
    } else {
      for (auto const& line : r.text) {
        body += line + "\n";
      }
    }
    if (out.path.empty()) {
      std::cout << body;
    } else {
      sact::save_text(out.path, body);
    }
  }

  std::string join(std::vector<std::string> const& xs, std::string const& sep = " ") {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out += (i == 0 ? "" : sep) + xs[i];
    }
    return out;
  }

  std::string names(sact::Monoid const& M, sact::ElementSet const& X) {
    std::vector<std::string> out;
    for (auto x : X.members()) {
      out.push_back(M.name(x));
    }
    return "{" + join(out, ", ") + "}";
  }

  std::string points(sact::Act const& A, sact::Tuple const& t) {
    std::vector<std::string> out;
    for (auto x : t) {
      out.push_back(A.name(x));
    }
    return "(" + join(out, ", ") + ")";
  }

  std::size_t element(sact::Monoid const& M, std::string const& name) {
    auto i = M.index_of(name);
    if (!i) {
      throw sact::Error(sact::ErrorKind::parse_error, "'" + name + "' is not an element of the monoid");
    }
    return *i;
  }

  std::string formula_text(std::string const& arg) {
    if (!arg.empty() && arg[0] == '@') {
      return sact::detail::read_file(arg.substr(1));
    }
    return arg;
  }

  sact::FormulaBounds parse_bounds(std::string const& text) {
    sact::FormulaBounds b;
    char                c1 = 0, c2 = 0;
    std::istringstream  in(text);
    if (!(in >> b.max_free >> c1 >> b.max_bound >> c2 >> b.max_atoms) || c1 != ',' || c2 != ','
        || !(in >> std::ws).eof()) {
      throw sact::Error(sact::ErrorKind::parse_error, "bounds must read FREE,BOUND,ATOMS");
    }
    return b;
  }

  sact::Params parse_params(sact::Act const& A, std::vector<std::string> const& assignments) {
    sact::Params out;
    for (auto const& a : assignments) {
      auto eq = a.find('=');
      if (eq == std::string::npos) {
        throw sact::Error(sact::ErrorKind::parse_error, "parameter must read VAR=POINT: " + a);
      }
      auto p = A.index_of(a.substr(eq + 1));
      if (!p) {
        throw sact::Error(sact::ErrorKind::parse_error, "unknown point '" + a.substr(eq + 1) + "'");
      }
      out[a.substr(0, eq)] = *p;
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////////

  Result analyze(sact::Monoid const& M) {
    Result r;
    auto   R  = sact::regular_part(M);
    auto   E  = sact::idempotents(M);
    bool   cm = sact::is_commutative(M);
    json   j  = {{"schema", sact::report_schema_version},
                 {"command", "analyze"},
                 {"monoid", sact::monoid_json(M)},
                 {"commutative", cm},
                 {"idempotents", sact::names_of(M, E)},
                 {"R", sact::names_of(M, R)}};
    json ideals = json::object();
    for (std::size_t a = 0; a < M.size(); ++a) {
      ideals[M.name(a)] = {{"left", sact::names_of(M, sact::principal_left_ideal(M, a))},
                           {"right", sact::names_of(M, sact::principal_right_ideal(M, a))}};
    }
    j["principal_ideals"] = ideals;
    r.text.push_back("order: " + std::to_string(M.size()));
    r.text.push_back(std::string("commutative: ") + (cm ? "yes" : "no"));
    r.text.push_back("idempotents: " + names(M, E));
    r.text.push_back("R: " + names(M, R));
    auto order = sact::is_linearly_ordered(M, sact::ElementSet::full(M.size()));
    j["linearly_ordered"] = order.holds;
    r.text.push_back(std::string("linearly ordered: ") + (order.holds ? "yes" : "no"));
    if (R.empty()) {
      j["R_linearly_ordered"] = nullptr;
      r.report                = j;
      r.text.push_back("R is empty");
      return r;
    }
    auto rorder             = sact::is_linearly_ordered(M, R);
    j["R_linearly_ordered"] = rorder.holds;
    if (rorder.witness) {
      j["R_order_witness"] = sact::names_of(M, {rorder.witness->first, rorder.witness->second});
    }
    r.text.push_back(std::string("R linearly ordered: ") + (rorder.holds ? "yes" : "no"));
    auto rlo                           = sact::is_regularly_linearly_ordered(M);
    j["regularly_linearly_ordered"]    = rlo.holds;
    if (rlo.witness) {
      j["regular_order_witness"] = sact::names_of(M, {(*rlo.witness)[0], (*rlo.witness)[1], (*rlo.witness)[2]});
    }
    r.text.push_back(std::string("regularly linearly ordered: ") + (rlo.holds ? "yes" : "no"));
    auto dec          = sact::check_R_decomposition(M);
    j["decomposition"] = {{"holds", dec.holds}, {"idempotents", sact::names_of(M, dec.idempotents)}};
    if (dec.uncovered) {
      j["decomposition"]["uncovered"] = M.name(*dec.uncovered);
    }
    if (dec.single_idempotent) {
      j["decomposition"]["single_idempotent"] = M.name(*dec.single_idempotent);
    }
    r.text.push_back(std::string("R = union of eR: ") + (dec.holds ? "yes" : "no"));
    if (cm) {
      auto ic                          = sact::idempotent_comparability(M);
      j["idempotent_comparability"]    = ic.holds;
      if (ic.witness) {
        j["idempotent_comparability_witness"] = sact::names_of(M, {ic.witness->first, ic.witness->second});
      }
      r.text.push_back(std::string("idempotent ideals comparable: ") + (ic.holds ? "yes" : "no"));
    }
    r.report = j;
    return r;
  }

  Result decide(sact::Monoid const& M) {
    Result r;
    auto   v = sact::decide_class(M);
    r.report = {{"schema", sact::report_schema_version},
                {"command", "decide"},
                {"monoid", sact::monoid_json(M)},
                {"verdict", sact::class_verdict_json(v, M)}};
    r.text.push_back(std::string(sact::to_string(v.outcome)) + " (" + v.reason + ")");
    r.text.push_back("R: " + names(M, v.R));
    if (v.counterexample) {
      auto const& c = *v.counterexample;
      r.text.push_back("counterexample: " + c.construction + " act on " + std::to_string(c.act.size())
                       + " points, formula " + sact::to_string(c.formula, M));
    }
    r.code = v.outcome == sact::ClassOutcome::primitive_normal       ? 0
             : v.outcome == sact::ClassOutcome::not_primitive_normal ? 1
                                                                     : 2;
    return r;
  }

  Result act_check(sact::Act const& A, std::string const& oracle, sact::FormulaBounds const& bounds) {
    Result r;
    json   j = {{"schema", sact::report_schema_version},
                {"command", "act-check"},
                {"monoid", sact::monoid_json(A.monoid())},
                {"act", sact::act_json(A)},
                {"oracle", oracle}};
    std::optional<bool> criterion, brute;
    if (oracle != "bruteforce") {
      auto c         = sact::theorem1_check(A);
      criterion      = c.holds;
      j["criterion"] = sact::criterion_json(c, A);
      if (!c.holds) {
        if (auto w = sact::necessity_construction(A, *c.violation)) {
          j["criterion"]["formula"]   = sact::formula_json(w->formula, A.monoid());
          j["criterion"]["violation"] = sact::violation_json(w->violation, A, w->parameters);
        }
      }
      r.text.push_back(std::string("criterion: ") + (c.holds ? "Holds" : "Fails"));
      if (!c.holds) {
        r.text.push_back("  triple " + points(A, {c.violation->triple[0], c.violation->triple[1], c.violation->triple[2]}));
      }
    }
    if (oracle != "criterion") {
      auto phi = sact::find_nonnormal_formula(A, bounds);
      brute    = !phi.has_value();
      json b   = {{"bounds", {{"free", bounds.max_free}, {"bound", bounds.max_bound}, {"atoms", bounds.max_atoms}}},
                  {"outcome", phi ? "NotCopyNormal" : "CopyNormal"}};
      if (phi) {
        auto params = sact::detail::block_names("y", bounds.max_free);
        b["formula"] = sact::formula_json(*phi, A.monoid());
        if (auto v = sact::find_copy_normality_violation(*phi, A, params)) {
          b["violation"] = sact::violation_json(*v, A, params);
        }
        r.text.push_back("bruteforce: NotCopyNormal via " + sact::to_string(*phi, A.monoid()));
      } else {
        r.text.push_back("bruteforce: CopyNormal within bounds");
      }
      j["bruteforce"] = b;
    }
    if (criterion && brute) {
      j["agree"] = *criterion == *brute;
      r.text.push_back(std::string("oracles ") + (*criterion == *brute ? "agree" : "DISAGREE"));
      r.code = *criterion != *brute ? 3 : (*criterion ? 0 : 1);
    } else {
      r.code = (criterion.value_or(true) && brute.value_or(true)) ? 0 : 1;
    }
    r.report = j;
    return r;
  }

  Result formula_eval(sact::Act const& A, std::string const& text, std::vector<std::string> const& params) {
    auto const& M   = A.monoid();
    auto        phi = sact::parse_formula(text, M);
    auto        p   = parse_params(A, params);
    auto        sol = sact::solution_set(phi, A, p);
    Result      r;
    std::vector<std::string> vars;
    for (auto v : sact::open_variables(phi, p)) {
      vars.push_back(phi.variable_name(v));
    }
    json tuples = json::array();
    for (auto const& t : sol) {
      tuples.push_back(sact::points_of(A, t));
      r.text.push_back(points(A, t));
    }
    json pj = json::object();
    for (auto const& [k, v] : p) {
      pj[k] = A.name(v);
    }
    r.report = {{"schema", sact::report_schema_version},
                {"command", "formula eval"},
                {"formula", sact::formula_json(phi, M)},
                {"act", sact::act_json(A)},
                {"parameters", pj},
                {"variables", vars},
                {"solutions", tuples}};
    r.text.insert(r.text.begin(), "variables: " + join(vars) + "; " + std::to_string(sol.size()) + " solutions");
    return r;
  }

  Result formula_normal(sact::Act const& A, std::string const& text, std::vector<std::string> const& params) {
    auto const& M   = A.monoid();
    auto        phi = sact::parse_formula(text, M);
    auto        v   = sact::find_copy_normality_violation(phi, A, params);
    Result      r;
    r.report = {{"schema", sact::report_schema_version},
                {"command", "formula normal-check"},
                {"formula", sact::formula_json(phi, M)},
                {"act", sact::act_json(A)},
                {"outcome", v ? "NotCopyNormal" : "CopyNormal"}};
    if (v) {
      r.report["violation"] = sact::violation_json(*v, A, params);
      r.text.push_back("NotCopyNormal: copies at " + points(A, v->first_parameters) + " and "
                       + points(A, v->second_parameters) + " share " + points(A, v->shared) + "; "
                       + points(A, v->separating) + " lies only in the second");
      r.code = 1;
    } else {
      r.text.push_back("CopyNormal");
    }
    return r;
  }

  Result formula_eliminate(sact::Monoid const& M, std::string const& text, std::string const& var,
                           std::optional<std::string> const& idem) {
    auto   phi = sact::parse_formula(text, M);
    Result r;
    std::optional<std::size_t> e;
    if (idem) {
      e = element(M, *idem);
    } else {
      e = sact::eliminator_idempotent(M);
      if (!e) {
        throw sact::Error(sact::ErrorKind::precondition_fails, "R != eR");
      }
    }
    r.report = {{"schema", sact::report_schema_version},
                {"command", "formula eliminate"},
                {"monoid", sact::monoid_json(M)},
                {"input", sact::formula_json(phi, M)},
                {"variable", var},
                {"idempotent", M.name(*e)}};
    try {
      auto res = sact::eliminate_variable(phi, var, M, *e);
      json trace = json::array();
      for (auto const& s : res.trace) {
        trace.push_back({{"kind", s.kind == sact::EliminationStep::Kind::merge ? "merge" : "drop"},
                         {"replaced", s.replaced},
                         {"kept", s.kept},
                         {"divisor", M.name(s.divisor)},
                         {"measure_before", {s.measure_before.first, s.measure_before.second}},
                         {"measure_after", {s.measure_after.first, s.measure_after.second}}});
      }
      r.report["outcome"] = "Reduced";
      r.report["output"]  = sact::formula_json(res.formula, M);
      r.report["trace"]   = trace;
      r.text.push_back(sact::to_string(res.formula, M));
    } catch (sact::Error const& err) {
      if (err.kind() != sact::ErrorKind::elimination_stuck) {
        throw;
      }
      r.report["outcome"] = "Stuck";
      r.report["message"] = err.what();
      r.text.push_back(err.what());
      r.code = 1;
    }
    return r;
  }

  Result counterexample(sact::Monoid const& M, std::string const& a, std::string const& b, std::string const& c,
                        std::string const& act_out) {
    auto   cx = sact::build_counterexample(M, element(M, a), element(M, b), element(M, c));
    Result r;
    r.report = {{"schema", sact::report_schema_version},
                {"command", "counterexample"},
                {"monoid", sact::monoid_json(M)},
                {"counterexample", sact::counterexample_json(cx, M)},
                {"criterion", sact::criterion_json(sact::theorem1_check(cx.act), cx.act)}};
    r.text.push_back("act on " + std::to_string(cx.act.size()) + " points (idempotent " + M.name(*cx.idempotent) + ")");
    r.text.push_back("formula: " + sact::to_string(cx.formula, M));
    r.text.push_back("copies at y = " + points(cx.act, cx.violation.first_parameters) + " and y = "
                     + points(cx.act, cx.violation.second_parameters) + " share "
                     + points(cx.act, cx.violation.shared));
    if (!act_out.empty()) {
      sact::save_text(act_out, sact::write_act(cx.act));
      r.report["act_file"] = act_out;
    }
    return r;
  }

  Result sweep(std::string const& config_path, std::string const& harness) {
    json cfg_json;
    try {
      cfg_json = json::parse(sact::detail::read_file(config_path));
    } catch (json::exception const& e) {
      throw sact::Error(sact::ErrorKind::parse_error, e.what());
    }
    auto   cfg = sact::config_from_json(cfg_json);
    Result r;
    json   runs = json::object();
    std::size_t discrepancies = 0;
    auto   note = [&](std::string const& name, json j) {
      discrepancies += j["discrepancies"].size();
      r.text.push_back(name + ": " + std::to_string(j["discrepancies"].size()) + " discrepancies");
      runs[name] = std::move(j);
    };
    if (harness == "crossval" || harness == "all") {
      note("crossval", sact::crossval_json(sact::run_theorem1_crossval(cfg)));
    }
    if (harness == "class" || harness == "all") {
      note("class", sact::class_sweep_json(sact::run_class_decision_sweep(cfg)));
    }
    if (harness == "antiadditivity" || harness == "all") {
      note("antiadditivity", sact::antiadditivity_json(sact::run_antiadditivity_sweep(cfg)));
    }
    if (harness == "elimination" || harness == "all") {
      note("elimination", sact::elimination_json(sact::run_elimination_sweep(cfg)));
    }
    r.report = {{"schema", sact::report_schema_version}, {"command", "sweep"}, {"runs", runs}};
    r.code   = discrepancies == 0 ? 0 : 1;
    return r;
  }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite monoids, S-acts and primitive formulas"};
  app.require_subcommand(1);
  app.fallthrough();
  Output out;
  app.add_option("--format", out.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--out", out.path, "Write the report to this file");

  std::string monoid_file, act_file, formula, oracle = "both", bounds_text = "1,1,2", var, a, b, c, act_out,
              config, harness = "all";
  std::optional<std::string> idem;
  std::vector<std::string>   params;

  auto* analyze_cmd = app.add_subcommand("analyze", "Structural facts about a monoid");
  analyze_cmd->add_option("monoid", monoid_file, "Monoid file")->required();

  auto* decide_cmd = app.add_subcommand("decide", "Class decision for a monoid");
  decide_cmd->add_option("monoid", monoid_file, "Monoid file")->required();

  auto* act_cmd = app.add_subcommand("act-check", "Primitive normality of one act");
  act_cmd->add_option("monoid", monoid_file, "Monoid file")->required();
  act_cmd->add_option("act", act_file, "Act file")->required();
  act_cmd->add_option("--oracle", oracle, "criterion, bruteforce or both")
      ->check(CLI::IsMember({"criterion", "bruteforce", "both"}));
  act_cmd->add_option("--bounds", bounds_text, "Formula bounds FREE,BOUND,ATOMS for the brute-force oracle");

  auto* formula_cmd = app.add_subcommand("formula", "Evaluate, check or rewrite a formula");
  formula_cmd->require_subcommand(1);
  formula_cmd->fallthrough();
  auto* eval_cmd = formula_cmd->add_subcommand("eval", "Solution set of a formula");
  eval_cmd->add_option("formula", formula, "Formula text, or @FILE")->required();
  eval_cmd->add_option("--act", act_file, "Act file")->required();
  eval_cmd->add_option("--monoid", monoid_file, "Monoid file");
  eval_cmd->add_option("--param", params, "Parameter assignment VAR=POINT");
  auto* normal_cmd = formula_cmd->add_subcommand("normal-check", "Copy-normality of a formula");
  normal_cmd->add_option("formula", formula, "Formula text, or @FILE")->required();
  normal_cmd->add_option("--act", act_file, "Act file")->required();
  normal_cmd->add_option("--monoid", monoid_file, "Monoid file");
  normal_cmd->add_option("--params", params, "Parameter variables")->required();
  auto* elim_cmd = formula_cmd->add_subcommand("eliminate", "Reduce the atoms mentioning a variable to one");
  elim_cmd->add_option("formula", formula, "Formula text, or @FILE")->required();
  elim_cmd->add_option("--monoid", monoid_file, "Monoid file")->required();
  elim_cmd->add_option("--var", var, "Variable to isolate")->required();
  elim_cmd->add_option("--idempotent", idem, "Idempotent e with R = eR");

  auto* cx_cmd = app.add_subcommand("counterexample", "Glued act violating copy-normality");
  cx_cmd->add_option("monoid", monoid_file, "Monoid file")->required();
  cx_cmd->add_option("--a", a, "Element of R")->required();
  cx_cmd->add_option("--b", b, "Element of Sa")->required();
  cx_cmd->add_option("--c", c, "Element of Sa")->required();
  cx_cmd->add_option("--act-out", act_out, "Write the act to this file");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run cross-validation harnesses");
  sweep_cmd->add_option("config", config, "JSON configuration file")->required();
  sweep_cmd->add_option("--harness", harness, "crossval, class, antiadditivity, elimination or all")
      ->check(CLI::IsMember({"crossval", "class", "antiadditivity", "elimination", "all"}));

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::optional<sact::Monoid> M;
    if (!monoid_file.empty()) {
      M = sact::load_monoid(monoid_file);
    }
    Result r;
    if (*analyze_cmd) {
      r = analyze(*M);
    } else if (*decide_cmd) {
      r = decide(*M);
    } else if (*act_cmd) {
      r = act_check(sact::load_act(act_file, M), oracle, parse_bounds(bounds_text));
    } else if (*eval_cmd) {
      r = formula_eval(sact::load_act(act_file, M), formula_text(formula), params);
    } else if (*normal_cmd) {
      r = formula_normal(sact::load_act(act_file, M), formula_text(formula), params);
    } else if (*elim_cmd) {
      r = formula_eliminate(*M, formula_text(formula), var, idem);
    } else if (*cx_cmd) {
      r = counterexample(*M, a, b, c, act_out);
    } else if (*sweep_cmd) {
      r = sweep(config, harness);
    }
    emit(out, r);
    return r.code;
  } catch (sact::Error const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
