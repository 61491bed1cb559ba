// sact - finite monoids, S-acts and primitive formulas
//
// JSON serialization of inputs, verdicts and witnesses. Inputs are
// identified by the git blob hash of their text serialization.

#ifndef SACT_REPORT_HPP_
#define SACT_REPORT_HPP_

#include <array>        // for array
#include <cstdio>       // for snprintf
#include <string>       // for string
#include <string_view>  // for string_view
#include <vector>       // for vector

#include <openssl/evp.h>

#include "json.hpp"

#include "act.hpp"
#include "deciders.hpp"
#include "formula.hpp"
#include "io.hpp"
#include "monoid.hpp"

namespace sact {

  using json = nlohmann::json;

  constexpr std::string_view report_schema_version = "sact-report/1";

  //! SHA-1 of "blob <size>\0<text>", as computed by git hash-object.
  inline std::string git_blob_hash(std::string_view text) {
    std::string const header = "blob " + std::to_string(text.size()) + std::string(1, '\0');
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int                               length = 0;
    EVP_MD_CTX*                                ctx    = EVP_MD_CTX_new();
    bool ok = ctx != nullptr && EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1
              && EVP_DigestUpdate(ctx, header.data(), header.size()) == 1
              && EVP_DigestUpdate(ctx, text.data(), text.size()) == 1
              && EVP_DigestFinal_ex(ctx, digest.data(), &length) == 1;
    EVP_MD_CTX_free(ctx);
    if (!ok) {
      throw Error(ErrorKind::io_error, "SHA-1 computation failed");
    }
    std::string hex;
    for (unsigned int i = 0; i < length; ++i) {
      char buf[3];
      std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
      hex += buf;
    }
    return hex;
  }

  inline json names_of(Monoid const& M, std::vector<std::size_t> const& xs) {
    json out = json::array();
    for (auto x : xs) {
      out.push_back(M.name(x));
    }
    return out;
  }

  inline json names_of(Monoid const& M, ElementSet const& X) {
    return names_of(M, X.members());
  }

  inline json points_of(Act const& A, std::vector<std::size_t> const& xs) {
    json out = json::array();
    for (auto x : xs) {
      out.push_back(A.name(x));
    }
    return out;
  }

  inline json monoid_json(Monoid const& M) {
    json rows = json::array();
    for (std::size_t a = 0; a < M.size(); ++a) {
      json row = json::array();
      for (std::size_t b = 0; b < M.size(); ++b) {
        row.push_back(M.name(M(a, b)));
      }
      rows.push_back(row);
    }
    return {{"elements", M.names()},
            {"identity", M.name(M.identity())},
            {"table", rows},
            {"hash", git_blob_hash(write_monoid(M))}};
  }

  inline json act_json(Act const& A) {
    Monoid const& M    = A.monoid();
    json          rows = json::object();
    for (std::size_t s = 0; s < M.size(); ++s) {
      std::vector<std::size_t> row;
      for (std::size_t a = 0; a < A.size(); ++a) {
        row.push_back(A(s, a));
      }
      rows[M.name(s)] = points_of(A, row);
    }
    return {{"carrier", A.names()}, {"action", rows}, {"hash", git_blob_hash(write_act(A))}};
  }

  inline json formula_json(Formula const& phi, Monoid const& M) {
    return {{"text", to_string(phi, M)}, {"free", phi.free_vars()}, {"bound", phi.bound_vars()}};
  }

  inline json violation_json(CopyNormalityViolation const& v,
                             Act const&                    A,
                             std::vector<std::string> const& parameters) {
    return {{"parameters", parameters},
            {"first_parameters", points_of(A, v.first_parameters)},
            {"second_parameters", points_of(A, v.second_parameters)},
            {"shared", points_of(A, v.shared)},
            {"separating", points_of(A, v.separating)}};
  }

  inline json criterion_json(CriterionResult const& r, Act const& A) {
    Monoid const& M = A.monoid();
    if (r.holds) {
      return {{"outcome", "Holds"}};
    }
    auto const& inst = *r.violation;
    json        K    = json::array();
    for (auto const& [r1, r2] : inst.K) {
      K.push_back({M.name(r1), M.name(r2)});
    }
    return {{"outcome", "Fails"},
            {"triple", points_of(A, {inst.triple[0], inst.triple[1], inst.triple[2]})},
            {"I", names_of(M, inst.I)},
            {"J", names_of(M, inst.J)},
            {"K", K}};
  }

  inline json counterexample_json(Counterexample const& c, Monoid const& M) {
    json out = {{"construction", c.construction},
                {"data", names_of(M, c.data)},
                {"act", act_json(c.act)},
                {"formula", formula_json(c.formula, M)},
                {"violation", violation_json(c.violation, c.act, c.parameters)}};
    if (c.idempotent) {
      out["idempotent"] = M.name(*c.idempotent);
    }
    return out;
  }

  inline json class_verdict_json(ClassVerdict const& v, Monoid const& M) {
    json out = {{"outcome", to_string(v.outcome)}, {"reason", v.reason}, {"R", names_of(M, v.R)}};
    if (v.order_witness) {
      out["order_witness"] = names_of(M, {v.order_witness->first, v.order_witness->second});
    }
    if (v.counterexample) {
      out["counterexample"] = counterexample_json(*v.counterexample, M);
    }
    if (v.counterexample_failure) {
      out["counterexample_failure"] = *v.counterexample_failure;
    }
    if (v.outcome != ClassOutcome::inapplicable) {
      out["antiadditive"] = v.outcome == ClassOutcome::primitive_normal;
    }
    return out;
  }

  inline json group_json(GroupCertificate const& g) {
    return {{"order", g.order}, {"identity", g.identity}, {"table", g.table}, {"abelian", g.abelian}};
  }

  //! Serializes with sorted keys and a trailing newline.
  inline std::string dump(json const& j) {
    return j.dump(2) + "\n";
  }

}  // namespace sact

#endif  // SACT_REPORT_HPP_
