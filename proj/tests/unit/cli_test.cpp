#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "il/cli.hpp"
#include "programs.hpp"

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  std::stringstream out, err;
  std::streambuf* old_out = std::cout.rdbuf(out.rdbuf());
  std::streambuf* old_err = std::cerr.rdbuf(err.rdbuf());
  int code = il::cli::run(args);
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    dir_ = std::filesystem::temp_directory_path() /
           ("il_cli_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() { std::filesystem::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) const {
    std::string path = (dir_ / name).string();
    std::ofstream out(path);
    out << text;
    return path;
  }

  std::string path(const std::string& name) const {
    return (dir_ / name).string();
  }

 private:
  std::filesystem::path dir_;
};

}  // namespace

TEST_CASE("cli evaluates under both semantics") {
  TempDir tmp;
  std::string capture = tmp.file("capture.il", testprog::kCaptureDirect);

  CliResult functional = run_cli({"eval-f", capture});
  CHECK(functional.code == 0);
  CHECK(functional.out == "7\n");

  CliResult imperative = run_cli({"eval-i", capture});
  CHECK(imperative.code == 0);
  CHECK(imperative.out == "5\n");
}

TEST_CASE("cli reports evaluation environments and failures") {
  TempDir tmp;
  std::string product = tmp.file("product.il", testprog::kProductRange);
  CliResult r = run_cli({"eval-f", product, "--env", "n=2", "--env", "m=4"});
  CHECK(r.code == 0);
  CHECK(r.out == "24\n");

  CliResult bot = run_cli({"eval-f", product});  // inputs unbound
  CHECK(bot.code == 0);
  CHECK(bot.out == "bot\n");

  std::string loop = tmp.file("loop.il", testprog::kSelfLoop);
  CliResult spin = run_cli({"eval-f", loop, "--fuel", "50"});
  CHECK(spin.code == 2);
  CHECK(spin.out.find("fuel exhausted") != std::string::npos);

  std::string dice = tmp.file("dice.il", "let a = extern R in let b = extern R in a + b");
  CliResult scripted = run_cli({"eval-f", dice, "--extern-script", "3,4"});
  CHECK(scripted.out == "7\n");
  CliResult seeded = run_cli({"eval-f", dice, "--extern-seed", "9"});
  CliResult seeded_again = run_cli({"eval-f", dice, "--extern-seed", "9"});
  CHECK(seeded.out == seeded_again.out);
}

TEST_CASE("cli diagnoses parse errors with positions") {
  TempDir tmp;
  std::string broken = tmp.file("broken.il", "let x = in x");
  CliResult r = run_cli({"parse", broken});
  CHECK(r.code == 3);
  CHECK(r.err.find(":1:9: ") != std::string::npos);

  std::string fine = tmp.file("fine.il", "1 + 2");
  CHECK(run_cli({"parse", fine}).code == 0);
}

TEST_CASE("cli print round-trips") {
  TempDir tmp;
  std::string product = tmp.file("product.il", testprog::kProductRange);
  CliResult once = run_cli({"print", product});
  CHECK(once.code == 0);
  std::string reprinted = tmp.file("product2.il", once.out);
  CliResult twice = run_cli({"print", reprinted});
  CHECK(twice.out == once.out);
}

TEST_CASE("cli traces") {
  TempDir tmp;
  std::string ext = tmp.file("ext.il", "let x = extern A in x");
  CliResult r = run_cli({"traces", ext, "--fuel", "4", "--domain", "0,1"});
  CHECK(r.code == 0);
  CHECK(r.out == "...\n"
                 "0=A -> 0\n"
                 "0=A ...\n"
                 "1=A -> 1\n"
                 "1=A ...\n");
}

TEST_CASE("cli equivalence verdicts and exit codes") {
  TempDir tmp;
  std::string capture = tmp.file("capture.il", testprog::kCaptureDirect);
  std::string loop = tmp.file("loop.il", testprog::kSelfLoop);

  CliResult same = run_cli({"bisim", capture, capture, "--rhs-sem", "f"});
  CHECK(same.code == 0);
  CHECK(same.out == "equivalent\n");

  CliResult split = run_cli({"bisim", capture, capture});
  CHECK(split.code == 1);
  CHECK(split.out.find("inequivalent") == 0);

  CliResult unknown = run_cli({"equiv", capture, loop, "--rhs-sem", "f"});
  CHECK(unknown.code == 2);
  CHECK(unknown.out == "unknown\n");

  CliResult equiv_same = run_cli({"equiv", capture, capture, "--rhs-sem", "f"});
  CHECK(equiv_same.code == 0);
}

TEST_CASE("cli liveness and coherence") {
  TempDir tmp;
  std::string fresh = tmp.file("fresh.il", testprog::kRebindFresh);
  std::string shadow = tmp.file("shadow.il", testprog::kRebindShadow);

  CliResult inferred = run_cli({"live", "infer", fresh});
  CHECK(inferred.code == 0);
  CHECK(inferred.out.find("@{") != std::string::npos);

  // The inferred output must check.
  std::string annotated = tmp.file("annotated.il", inferred.out);
  CliResult checked = run_cli({"live", "check", annotated});
  CHECK(checked.code == 0);

  CliResult coherent = run_cli({"coh", fresh});
  CHECK(coherent.code == 0);
  CHECK(coherent.out == "coherent\n");

  CliResult rejected = run_cli({"coh", shadow});
  CHECK(rejected.code == 1);
  CHECK(rejected.out.find("not coherent") == 0);
  CHECK(rejected.out.find("shadow.il:5:1") != std::string::npos);
}

TEST_CASE("cli rename-apart and alpha-eq") {
  TempDir tmp;
  std::string dup = tmp.file("dup.il", "let x = 1 in let x = 2 in x");
  std::string out_path = tmp.path("apart.il");
  CliResult apart = run_cli({"rename-apart", dup, "-o", out_path});
  CHECK(apart.code == 0);

  CliResult alpha = run_cli({"alpha-eq", dup, out_path});
  CHECK(alpha.code == 0);
  CHECK(alpha.out == "alpha-equivalent\n");

  std::string other = tmp.file("other.il", "let x = 3 in let x = 2 in x");
  CliResult not_alpha = run_cli({"alpha-eq", dup, other});
  CHECK(not_alpha.code == 1);
}

TEST_CASE("cli rassign prints the mapping and the renamed program") {
  TempDir tmp;
  std::string product = tmp.file("product.il", testprog::kProductRange);

  // The raw program has a shadowed binder; the preconditions name it.
  CliResult raw = run_cli({"rassign", product});
  CHECK(raw.code == 1);
  CHECK(raw.err.find("not renamed apart") != std::string::npos);

  std::string apart_path = tmp.path("apart.il");
  REQUIRE(run_cli({"rename-apart", product, "-o", apart_path}).code == 0);
  CliResult r = run_cli({"rassign", apart_path});
  CHECK(r.code == 0);
  CHECK(r.out.find(" -> ") != std::string::npos);
  CHECK(r.out.find("fun f") != std::string::npos);
}

TEST_CASE("cli compile and json report") {
  TempDir tmp;
  std::string product = tmp.file("product.il", testprog::kProductRange);
  std::string out_path = tmp.path("compiled.il");

  CliResult compiled = run_cli({"compile", product, "-o", out_path});
  CHECK(compiled.code == 0);
  CHECK(compiled.out.find("rename-apart: ok") != std::string::npos);
  CHECK(compiled.out.find("max live: 4") != std::string::npos);
  CHECK(compiled.out.find("names used: 4") != std::string::npos);
  CHECK(std::filesystem::exists(out_path));

  CliResult json = run_cli({"compile", product, "--json"});
  CHECK(json.code == 0);
  CHECK(json.out.find("\"stages\"") != std::string::npos);
  CHECK(json.out.find("\"k\": 4") != std::string::npos);
  CHECK(json.out.find("\"names\": 4") != std::string::npos);
  CHECK(json.out.find("\"steps\": 4") != std::string::npos);

  // Determinism: identical invocations produce identical bytes.
  CliResult again = run_cli({"compile", product, "--json"});
  CHECK(again.out == json.out);
}

TEST_CASE("cli fuzz smoke run") {
  CliResult r = run_cli({"fuzz", "--seeds", "15", "--depth", "4", "--check",
                         "apart", "--jobs", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("apart: 15 seeds") == 0);

  CliResult bad = run_cli({"fuzz", "--check", "no-such-check"});
  CHECK(bad.code == 3);
}

TEST_CASE("cli usage errors") {
  CHECK(run_cli({"frobnicate"}).code == 3);
  CHECK(run_cli({"eval-f"}).code == 3);
  CHECK(run_cli({"eval-f", "/nonexistent/file.il"}).code == 3);
  TempDir tmp;
  std::string fine = tmp.file("fine.il", "1");
  CHECK(run_cli({"eval-f", fine, "--env", "garbage"}).code == 3);
}
