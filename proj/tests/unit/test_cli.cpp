#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>

#include "doctest.h"
#include "motivic/error.hpp"
#include "motivic/session.hpp"

using namespace motivic;

namespace {

std::vector<Record> records(const std::string& text, const Config& config = {}) {
  return run_text(text, config).records;
}

std::string random_sieve(std::mt19937& rng, int depth) {
  static const char* leaves[] = {"V(x)", "D(y)", "V(x^2 + y, y)", "full", "empty", "base", "im(f)", "D(x - 1)"};
  if (depth == 0 || rng() % 3 == 0) return leaves[rng() % 8];
  std::string op = rng() % 2 ? " | " : " & ";
  std::string s = random_sieve(rng, depth - 1) + op + random_sieve(rng, depth - 1);
  return rng() % 2 ? "(" + s + ")" : s;
}

std::string random_class(std::mt19937& rng, int depth) {
  static const char* leaves[] = {"L", "L^-2", "[X]", "[base]", "3", "[c0]", "L^3", "0"};
  if (depth == 0 || rng() % 3 == 0) return leaves[rng() % 8];
  switch (rng() % 4) {
    case 0: return random_class(rng, depth - 1) + " + " + random_class(rng, depth - 1);
    case 1: return random_class(rng, depth - 1) + " - " + random_class(rng, depth - 1);
    case 2: return random_class(rng, depth - 1) + " * " + random_class(rng, depth - 1);
    default: return "-(" + random_class(rng, depth - 1) + ")";
  }
}

const char* kPrelude =
    "field F 2\n"
    "scheme X = Spec k[x,y]\n"
    "scheme Z = Spec k[u]\n"
    "morphism f = Z -> X : (u, u^2)\n"
    "sieve base = X : V(x*y)\n"
    "class c0 = [base] - 1\n";

}  // namespace

TEST_CASE("worked examples") {
  auto r = records("field F 2\nfatpoint m = k[t]/(t^2)\nscheme X = Spec k[x]/(x^2)\ncount X at m");
  REQUIRE(r.size() == 4);
  CHECK(r[3].get("value") == "2");
  CHECK(r[3].get("line") == "4");

  auto empty = run_text("");
  CHECK(empty.records.empty());
  CHECK(empty.text().empty());
  CHECK(empty.exit == ExitCode::Ok);
  CHECK(run_text("# only a comment\n\n").records.empty());

  auto m = records("field F 2\nchain c = rule t^n\nscheme X = Spec k[x]\nmeasure X on c Q=1");
  CHECK(m[3].get("verdict") == "stabilized");
  CHECK(m[3].get("value") == "stabilized(1, since 0)");

  auto o = records("field F 3\nchain c = rule t^n\nscheme X = Spec k[x]\nsieve o = X : V(x)\nmeasure X on c Q=1 cylinder o");
  CHECK(o[4].get("value") == "stabilized(L^-1, since 0)");

  // |Spec F3[x]/(x^3 - x)| over F3[t]/(t^2): roots 0, 1, -1 each lift uniquely
  auto c = records("field F 3\nfatpoint m = k[t]/(t^2)\nscheme X = Spec k[x]/(x^3 - x)\ncount X at m");
  CHECK(c[3].get("value") == "3");
}

TEST_CASE("exit codes") {
  auto trivial = run_text("field F 2\nfatpoint m = k\nscheme X = Spec k[x]\ncount X at m");
  CHECK(trivial.exit == ExitCode::Ok);
  CHECK(trivial.records[3].get("value") == "2");

  // V(x) and V(x+1) cover A^1 over F2 but not over F2[t]/(t^2)
  auto scissor = run_text(
      "field F 2\nscheme X = Spec k[x]\nsieve a = X : V(x)\nsieve b = X : V(x + 1)\ncheck scissor X a b");
  CHECK(scissor.exit == ExitCode::CheckFailure);
  CHECK(scissor.records[4].get("verdict") == "fail");
  CHECK(scissor.records[4].get("counterexample").find("k[t]/(t^2)") != std::string::npos);
  Config one;
  one.battery_size = 1;
  CHECK(run_text("field F 2\nscheme X = Spec k[x]\nsieve a = X : V(x)\nsieve b = X : V(x + 1)\ncheck scissor X a b", one)
            .exit == ExitCode::Ok);

  auto bad = run_text("field F 2\nscheme X = Spec k[x]\nfatpoint m = k[t]/(t^2)\ncount X at m level 1\ncount X at m");
  CHECK(bad.exit == ExitCode::EvaluationError);
  CHECK(bad.records[3].get("verdict") == "error");
  CHECK(bad.records[4].get("value") == "4");

  auto parse = run_text("field F 2\nscheme X = Spec k[x\n");
  CHECK(parse.exit == ExitCode::ParseError);
  REQUIRE(parse.records.size() == 1);
  CHECK(parse.records[0].get("line") == "2");
  CHECK(parse.records[0].get("kind") == "parse-error");
}

TEST_CASE("failures stay local") {
  auto r = records(
      "field F 2\nscheme X = Spec k[x,y]/(x*y)\nscheme Z = Spec k[u]\nmorphism f = Z -> X : (u, u)\n"
      "sieve s = X : im(f)\nfatpoint m = k[t]/(t^2)\ncount s at m\ncount X at m");
  CHECK(r[3].get("verdict") == "error");
  CHECK(r[4].get("error") == "Dependency");
  CHECK(r[6].get("error") == "Dependency");
  CHECK(r[7].get("verdict") == "ok");
  CHECK(r[7].get("value") == "8");
}

TEST_CASE("parse errors carry locations") {
  struct Case {
    const char* text;
    std::size_t line;
    std::size_t column;
    const char* token;
  };
  std::vector<Case> cases{
      {"scheme X = Spec k[x]\nscheme X = Spec k[y]", 2, 8, "X"},
      {"count X at m", 1, 7, "X"},
      {"scheme X = Spec k[x]\nfatpoint m = k\ncount m at X", 3, 7, "m"},
      {"field F 4", 1, 7, "F 4"},
      {"field F 2\nfield F 3", 2, 7, "F3"},
      {"scheme X = Spec k[x]\nsieve s = X : V(z)", 2, 17, "z"},
      {"bogus", 1, 1, "bogus"},
      {"scheme X = Spec k[x]\nsieve s = X : V(x) |", 2, 21, "<end of line>"},
      {"scheme X = Spec k[x]\nsieve s = X : V(x) | s", 2, 22, "s"},
      {"scheme X = Spec k[x]\nclass c = [X] + $", 2, 17, "$"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.text);
    try {
      parse_script(c.text);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line == c.line);
      CHECK(e.column == c.column);
      CHECK(e.token == c.token);
    }
  }
}

TEST_CASE("printing is a fixed point of parsing") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text = kPrelude;
    text += "sieve s = X : " + random_sieve(rng, 3) + "\n";
    text += "class c = " + random_class(rng, 3) + "\n";
    text += "measure X on ch Q=" + std::to_string(rng() % 5) + "/" + std::to_string(1 + rng() % 3);
    if (rng() % 2) text += " lax " + std::to_string(rng() % 3) + "*n + " + std::to_string(rng() % 4);
    text = "chain ch = [k, k[t]/(t^2)]\n" + text + "\n";
    CAPTURE(text);
    auto once = print_script(parse_script(text));
    CHECK(print_script(parse_script(once)) == once);
  }
  std::string spaced = "field   F 3\nscheme X=Spec k[ x , y ]/( y^2-x^3 )\nclass c = -L^2*([X]-1)  # comment\n";
  CHECK(print_script(parse_script(spaced)) ==
        "field F 3\nscheme X = Spec k[x,y]/(-x^3 + y^2)\nclass c = -L^2 * ([X] - 1)\n");
}

TEST_CASE("precedence survives printing") {
  auto s = parse_script("scheme X = Spec k[x]\nsieve s = X : V(x) | D(x) & full\nsieve t = X : (V(x) | D(x)) & full");
  CHECK(print_statement(s.statements[1]) == "sieve s = X : V(x) | D(x) & full");
  CHECK(print_statement(s.statements[2]) == "sieve t = X : (V(x) | D(x)) & full");
  auto c = parse_script("class a = 1 - (2 - 3)\nclass b = 1 - 2 - 3\nclass d = -(1 + L) * L");
  CHECK(print_statement(c.statements[0]) == "class a = 1 - (2 - 3)");
  CHECK(print_statement(c.statements[1]) == "class b = 1 - 2 - 3");
  CHECK(print_statement(c.statements[2]) == "class d = -(1 + L) * L");
  auto r = run_text("class a = 1 - (2 - 3)\nclass b = 1 - 2 - 3");
  CHECK(r.records[0].get("value") == "2");
  CHECK(r.records[1].get("value") == "-4");
}

TEST_CASE("reports are deterministic and configurable") {
  std::string script = std::string(kPrelude) +
                       "fatpoint m = k[t]/(t^2)\nsieve w = X : D(y)\ncheck continuity f Z X\ncount c0 at m\n";
  Config cfg;
  cfg.seed = 5;
  CHECK(run_text(script, cfg).text() == run_text(script, cfg).text());
  Config other = cfg;
  other.seed = 6;
  auto a = run_text(script, cfg).records[8].get("opens");
  auto b = run_text(script, other).records[8].get("opens");
  CHECK(!a.empty());
  CHECK(a != b);

  Config f3;
  f3.field = parse_field("F3");
  auto r = run_text("field F 2\nfatpoint m = k\nscheme X = Spec k[x]\ncount X at m", f3).records;
  CHECK(r[0].get("value") == "F3");
  CHECK(r[0].get("note") == "overridden by --field");
  CHECK(r[3].get("value") == "3");

  Config h;
  h.horizon = 4;
  auto mr = run_text("chain c = rule t^n\nscheme X = Spec k[x]\nmeasure X on c Q=1 lax 2*n", h).records;
  CHECK(mr[2].get("value") == "indeterminate(4)");
  CHECK(mr[2].get("lax") == "l(n) = 2*n");

  CHECK(parse_field("Q") == Field::rationals());
  CHECK(parse_field("F 7") == Field::prime(7));
  CHECK(parse_field("5") == Field::prime(5));
  CHECK_THROWS_AS(parse_field("F6"), Error);
}

TEST_CASE("command line: flags win over the environment") {
  const std::string path = "cli_precedence.mt";
  {
    std::ofstream out(path);
    out << "fatpoint m = k\nscheme X = Spec k[x]\ncount X at m\n";
  }
  const std::string bin = MOTIVIC_CLI;
  auto run_cli = [&](const std::string& prefix, const std::string& flags) {
    std::string cmd = prefix + " " + bin + " run " + path + " " + flags + " -o cli_out.txt";
    int status = std::system(cmd.c_str());
    std::ifstream in("cli_out.txt");
    std::string text((std::istreambuf_iterator<char>(in)), {});
    return std::make_pair(status, text);
  };
  auto env_only = run_cli("MOTIVIC_FIELD=F5", "");
  CHECK(env_only.first == 0);
  CHECK(env_only.second.find("value=5\n") != std::string::npos);
  auto both = run_cli("MOTIVIC_FIELD=F5", "--field F7");
  CHECK(both.second.find("value=7\n") != std::string::npos);
  auto none = run_cli("", "");
  CHECK(none.second.find("value=2\n") != std::string::npos);
  {
    std::ofstream out(path);
    out << "scheme X = Spec k[x\n";
  }
  auto parse = run_cli("", "");
  CHECK(WEXITSTATUS(parse.first) == 3);
  std::remove(path.c_str());
  std::remove("cli_out.txt");
}
