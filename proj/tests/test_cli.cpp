#include <catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"
#include "sact/act.hpp"
#include "sact/deciders.hpp"
#include "sact/io.hpp"

namespace {
  using json = nlohmann::json;
  namespace fs = std::filesystem;

  std::string const data = SACT_DATA_DIR;

  struct Run {
    int         code;
    std::string out;
  };

  Run run(std::string const& args) {
    std::string const cmd = std::string(SACT_CLI) + " " + args + " 2>/dev/null";
    FILE*             p   = ::popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char        buf[4096];
    for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) {
      out.append(buf, n);
    }
    int const status = ::pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
  }

  std::string stderr_of(std::string const& args) {
    std::string const cmd = std::string(SACT_CLI) + " " + args + " 2>&1 >/dev/null";
    FILE*             p   = ::popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char        buf[4096];
    for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) {
      out.append(buf, n);
    }
    ::pclose(p);
    return out;
  }

  fs::path scratch() {
    auto dir = fs::temp_directory_path() / ("sact-cli-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
  }

  void write(fs::path const& path, std::string const& text) {
    std::ofstream(path) << text;
  }
}  // namespace

TEST_CASE("analyze", "[cli]") {
  auto const r = run("analyze " + data + "/trivial.monoid");
  CHECK(r.code == 0);
  auto const j = json::parse(r.out);
  CHECK(j.at("schema") == "sact-report/1");
  CHECK(j.at("R") == json::array({"1"}));
  CHECK(j.at("R_linearly_ordered") == true);
  auto const d = json::parse(run("analyze " + data + "/diamond.monoid").out);
  CHECK(d.at("R_linearly_ordered") == false);
  CHECK(d.at("idempotent_comparability") == false);
  CHECK(d.at("monoid").contains("hash"));
}

TEST_CASE("malformed input exits nonzero with a diagnostic", "[cli]") {
  auto const dir = scratch();
  write(dir / "bad.monoid", "elements: 1 a\nidentity: 1\ntable:\n1 a\na\n");
  CHECK(run("analyze " + (dir / "bad.monoid").string()).code == 2);
  CHECK(stderr_of("analyze " + (dir / "bad.monoid").string()).find("line 5") != std::string::npos);
  CHECK(run("analyze " + (dir / "missing.monoid").string()).code == 2);
  CHECK(run("analyze").code == 2);
  CHECK(run("frobnicate").code == 2);
}

TEST_CASE("decide exit codes", "[cli]") {
  CHECK(run("decide " + data + "/z2.monoid").code == 0);
  CHECK(run("decide " + data + "/chain.monoid").code == 0);
  CHECK(run("decide " + data + "/diamond.monoid").code == 1);
  CHECK(run("decide " + data + "/right-zero.monoid").code == 2);
  auto const t = run("decide " + data + "/right-zero.monoid --format text");
  CHECK(t.out.rfind("Inapplicable (noncommutative)", 0) == 0);
  auto const j = json::parse(run("decide " + data + "/diamond.monoid").out);
  CHECK(j.at("verdict").at("outcome") == "NotPrimitiveNormal");
}

TEST_CASE("act-check", "[cli]") {
  auto const r = run("act-check " + data + "/diamond.monoid " + data + "/point.act");
  CHECK(r.code == 0);
  auto const j = json::parse(r.out);
  CHECK(j.at("agree") == true);
  CHECK(run("act-check " + data + "/chain.monoid " + data + "/chain-regular.act --oracle criterion").code == 0);
  CHECK(run("act-check " + data + "/chain.monoid " + data + "/point.act").code == 2);
  CHECK(run("act-check " + data + "/diamond.monoid " + data + "/point.act --bounds 1,1").code == 2);
}

TEST_CASE("counterexample pipeline", "[cli]") {
  auto const dir = scratch();
  auto const act = (dir / "amalgam.act").string();
  auto const r   = run("counterexample " + data + "/diamond.monoid --a 1 --b e --c f --act-out " + act);
  CHECK(r.code == 0);
  auto const j = json::parse(r.out);
  CHECK(j.at("criterion").at("outcome") == "Fails");
  auto const A = sact::load_act(act);
  CHECK(A.size() == 8);
  CHECK(sact::is_regular_act(A));
  auto const check = run("act-check " + data + "/diamond.monoid " + act + " --bounds 1,1,2");
  CHECK(check.code == 1);
  CHECK(json::parse(check.out).at("agree") == true);
  auto const probe = run("formula normal-check 'exists u : e*u = x & f*u = y' --act " + act + " --params y");
  CHECK(probe.code == 1);
  CHECK(json::parse(probe.out).at("outcome") == "NotCopyNormal");
  CHECK(run("counterexample " + data + "/diamond.monoid --a 1 --b e --c 0").code == 2);
}

TEST_CASE("formula eval", "[cli]") {
  auto const r = run("formula eval 'x = x' --act " + data + "/chain-regular.act");
  CHECK(r.code == 0);
  auto const j = json::parse(r.out);
  auto const A = sact::load_act(data + "/chain-regular.act");
  CHECK(j.at("solutions").size() == A.size());
  auto const dir = scratch();
  write(dir / "phi.txt", "x = e*y");
  auto const p = run("formula eval @" + (dir / "phi.txt").string() + " --act " + data + "/chain-regular.act --param y="
                     + A.name(0));
  CHECK(p.code == 0);
  CHECK(json::parse(p.out).at("variables") == json::array({"x"}));
  CHECK(run("formula eval 'x = g*x' --act " + data + "/chain-regular.act").code == 2);
}

TEST_CASE("formula eliminate", "[cli]") {
  auto const r = run("formula eliminate 'e*x1 = x0 & e*x2 = e*x0' --monoid " + data + "/chain.monoid --var x0");
  CHECK(r.code == 0);
  auto const j = json::parse(r.out);
  CHECK(j.at("outcome") == "Reduced");
  CHECK_FALSE(j.at("trace").empty());
  auto const s = run("formula eliminate 'x0 = e*x0 & 0*x1 = 0*x0' --monoid " + data + "/chain.monoid --var x0");
  CHECK(s.code == 1);
  CHECK(json::parse(s.out).at("outcome") == "Stuck");
  CHECK(run("formula eliminate 'x0 = e*x0' --monoid " + data + "/diamond.monoid --var x0").code == 2);
}

TEST_CASE("sweep", "[cli]") {
  auto const r = run("sweep " + data + "/configs/minimal.json --harness crossval");
  CHECK(r.code == 0);
  auto const j = json::parse(r.out);
  CHECK(j.at("runs").at("crossval").at("discrepancies").empty());
  auto const dir = scratch();
  write(dir / "bad.json", R"({"monoid_order_bound": 9})");
  CHECK(run("sweep " + (dir / "bad.json").string()).code == 2);
  write(dir / "broken.json", "{");
  CHECK(run("sweep " + (dir / "broken.json").string()).code == 2);
}

TEST_CASE("output file and repeated invocations", "[cli]") {
  auto const dir = scratch();
  auto const out = (dir / "report.json").string();
  CHECK(run("--out " + out + " analyze " + data + "/diamond.monoid").code == 0);
  std::ifstream      in(out);
  std::ostringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == run("analyze " + data + "/diamond.monoid").out);
  CHECK(run("decide " + data + "/diamond.monoid").out == run("decide " + data + "/diamond.monoid").out);
}
