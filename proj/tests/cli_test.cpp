// End-to-end checks of the mallnet command line. Each case runs the real
// binary against the fixture files and pins exit codes and output bytes.
//
// Usage: cli_tests <path-to-mallnet-binary> <path-to-fixtures-dir>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int failures = 0;

#define REQUIRE(cond, msg)                                                  \
  do {                                                                      \
    if (!(cond)) {                                                          \
      std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << msg   \
                << "\n";                                                    \
      ++failures;                                                           \
    }                                                                       \
  } while (0)

std::string g_binary;
std::string g_fixtures;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Runs the binary through the shell with stdout/stderr captured; `input`
// is piped to stdin, `env` may hold VAR=value prefixes.
RunResult run(const std::string& args, const std::string& input = "",
              const std::string& env = "") {
  const std::string out_path = "cli_test_stdout.tmp";
  const std::string err_path = "cli_test_stderr.tmp";
  const std::string in_path = "cli_test_stdin.tmp";
  {
    std::ofstream in(in_path, std::ios::binary);
    in << input;
  }
  std::string cmd = (env.empty() ? "" : env + " ") + g_binary + " " + args +
                    " <" + in_path + " >" + out_path + " 2>" + err_path;
  int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  std::remove(in_path.c_str());
  return r;
}

std::string fixture(const std::string& name) { return g_fixtures + "/" + name; }

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

void check_proof_cases() {
  auto ok = run("check-proof " + fixture("page1-left.proof"));
  REQUIRE(ok.code == 0, "check-proof should accept the fixture proof");
  REQUIRE(ok.out == "proof: OK, concludes: (p & p), (~p & ~p)\n",
          "unexpected verdict: " << ok.out);
  REQUIRE(ok.err.empty(), "accepting runs should keep stderr empty");

  auto stdin_ok = run("check-proof -", "(ax a)\n");
  REQUIRE(stdin_ok.code == 0, "check-proof should read stdin for '-'");
  REQUIRE(stdin_ok.out == "proof: OK, concludes: a, ~a\n",
          "unexpected verdict: " << stdin_ok.out);

  auto rejected = run("check-proof -", "(with (ax a) (ax b))\n");
  REQUIRE(rejected.code == 1, "rule violations exit 1");
  REQUIRE(rejected.out ==
              "rejected: at the root rule: with premises do not share a "
              "context\n",
          "unexpected rejection: " << rejected.out);

  auto malformed = run("check-proof -", "(ax)\n");
  REQUIRE(malformed.code == 2, "parse errors exit 2");
  REQUIRE(contains(malformed.err, "parse error"),
          "parse diagnostics go to stderr: " << malformed.err);
}

void check_net_cases() {
  auto conflict = run("check-net " + fixture("fig1-row1.cnet"));
  REQUIRE(conflict.code == 0, "the two-link net is a conflict net");
  REQUIRE(conflict.out == "conflict net: OK (2 links, 1 conflict)\n",
          "unexpected verdict: " << conflict.out);

  auto stuck = run("check-net " + fixture("tensor-cycle.cnet"));
  REQUIRE(stuck.code == 1, "stuck nets are rejected");
  REQUIRE(stuck.out == "stuck: no ready root\n",
          "unexpected verdict: " << stuck.out);

  auto circuit = run("check-net " + fixture("fig5.circ"));
  REQUIRE(circuit.code == 0, "the ten-node circuit is a net");
  REQUIRE(circuit.out == "circuit: OK (10 nodes, 14 wires)\n",
          "unexpected verdict: " << circuit.out);

  auto slices = run("check-net " + fixture("intro.snet"));
  REQUIRE(slices.code == 0, "the four-linking set is a slice net");
  REQUIRE(slices.out == "slice net: OK (4 linkings)\n",
          "unexpected verdict: " << slices.out);

  auto malformed = run("check-net " + fixture("bad.cnet"));
  REQUIRE(malformed.code == 2, "malformed files exit 2");
  REQUIRE(contains(malformed.err, "line 2:"),
          "file errors carry line numbers: " << malformed.err);

  auto missing = run("check-net no-such-file.cnet");
  REQUIRE(missing.code == 2, "missing files exit 2");
  REQUIRE(contains(missing.err, "cannot open file"),
          "unexpected diagnostic: " << missing.err);

  auto not_map = run("check-net -",
                     "net conflict\nsequent: q, q, (~q & ~q)\n"
                     "link L1 1 3\nlink L2 2 4\n");
  REQUIRE(not_map.code == 1, "slicing violations are rejected");
  REQUIRE(not_map.out ==
              "not a slicing: attachment is not a coherence-space map\n",
          "unexpected verdict: " << not_map.out);
}

void translate_cases() {
  auto net = run("translate --to conflict " + fixture("page1-left.proof"));
  REQUIRE(net.code == 0, "translation should succeed");
  auto verdict = run("check-net -", net.out);
  REQUIRE(verdict.out == "conflict net: OK (4 links, 6 conflicts)\n",
          "translated net should check: " << verdict.out);

  // -o writes exactly the stdout bytes.
  const std::string out_file = "cli_test_translate.tmp";
  auto to_file = run("translate --to circuit " + fixture("page1-left.proof") +
                     " -o " + out_file);
  REQUIRE(to_file.code == 0, "translation to file should succeed");
  auto to_stdout =
      run("translate --to circuit " + fixture("page1-left.proof"));
  REQUIRE(slurp(out_file) == to_stdout.out,
          "-o and stdout should carry the same bytes");
  std::remove(out_file.c_str());

  auto bad_target = run("translate --to boxes " + fixture("page1-left.proof"));
  REQUIRE(bad_target.code == 2, "unknown --to values exit 2");
}

void erase_cases() {
  auto circuit = run("erase " + fixture("fig5.circ") + " --trace");
  REQUIRE(circuit.code == 0, "the circuit erases to the empty set");
  REQUIRE(circuit.out ==
              "step 1: erase with node N8\n"
              "step 2: erase with node N2\n"
              "step 3: erase axiom node N0\n"
              "step 4: erase axiom node N1\n"
              "step 5: erase with node N6\n"
              "step 6: erase axiom node N4\n"
              "step 7: erase axiom node N5\n"
              "\xE2\x88\x85\n",
          "unexpected circuit trace:\n" << circuit.out);

  auto slices = run("erase " + fixture("intro.snet") + " --trace");
  REQUIRE(slices.code == 0, "the slice net erases to the empty set");
  REQUIRE(slices.out ==
              "step 1: erase with root at formula 1, vertex /\n"
              "step 2: erase with root at formula 2, vertex /\n"
              "step 3: axiom\n"
              "\xE2\x88\x85\n",
          "unexpected slice trace:\n" << slices.out);

  auto json = run("erase " + fixture("fig1-row1.cnet") + " --trace=json");
  REQUIRE(json.code == 0, "the conflict net erases to the empty set");
  REQUIRE(
      json.out ==
          "{\"action\":\"erase\",\"formula\":1,\"kind\":\"plus\","
          "\"step\":1,\"vertex\":\"/\"}\n"
          "{\"action\":\"erase\",\"formula\":2,\"kind\":\"with\","
          "\"step\":2,\"vertex\":\"/\"}\n"
          "{\"action\":\"axiom\",\"link\":\"l0\",\"step\":3}\n"
          "\xE2\x88\x85\n",
      "unexpected json trace:\n" << json.out);

  auto orders = run("erase " + fixture("fig1-row1.cnet") + " --all-orders");
  REQUIRE(orders.code == 0, "all orders should converge");
  REQUIRE(orders.out == "confluent: unique normal form\n\xE2\x88\x85\n",
          "unexpected all-orders report:\n" << orders.out);

  auto stuck = run("erase " + fixture("tensor-cycle.cnet"));
  REQUIRE(stuck.code == 1, "stuck erasure exits 1");
  REQUIRE(stuck.out == "stuck: no ready root\n",
          "unexpected verdict: " << stuck.out);

  auto limited = run("erase " + fixture("fig1-row1.cnet"), "",
                     "MALLNET_STEP_LIMIT=1");
  REQUIRE(limited.code == 2, "budget overruns are internal failures");
  REQUIRE(contains(limited.err, "internal failure"),
          "unexpected diagnostic: " << limited.err);

  auto nonsense_limit = run("erase " + fixture("fig1-row1.cnet"), "",
                            "MALLNET_STEP_LIMIT=banana");
  REQUIRE(nonsense_limit.code == 0,
          "unparseable limits fall back to the default");
  REQUIRE(nonsense_limit.out == "\xE2\x88\x85\n",
          "unexpected output: " << nonsense_limit.out);
}

void sequentialize_cases() {
  auto proof = run("sequentialize " + fixture("fig1-row1.cnet"));
  REQUIRE(proof.code == 0, "the fixture net sequentializes");
  REQUIRE(proof.out ==
              "(perm (2 1) (plus2 b (perm (2 1) (with (perm (2 1) (ax a)) "
              "(perm (2 1) (ax a))))))\n",
          "unexpected proof: " << proof.out);

  // The proof translates back to the fixture bytes: a full round trip.
  auto back = run("translate --to conflict -", proof.out);
  REQUIRE(back.code == 0, "re-translation should succeed");
  REQUIRE(back.out == slurp(fixture("fig1-row1.cnet")),
          "round trip should reproduce the net file:\n" << back.out);

  auto checked = run("check-proof -", proof.out);
  REQUIRE(checked.code == 0, "extracted proofs check");

  auto stuck = run("sequentialize " + fixture("tensor-cycle.cnet"));
  REQUIRE(stuck.code == 1, "non-nets cannot be sequentialized");
  REQUIRE(stuck.out == "erasure is stuck: no ready root in (a * ~a)\n",
          "unexpected verdict: " << stuck.out);

  auto circuit = run("sequentialize " + fixture("fig5.circ"));
  REQUIRE(circuit.code == 0, "the circuit sequentializes");
  auto recheck = run("check-proof -", circuit.out);
  REQUIRE(recheck.code == 0, "circuit-extracted proofs check");
}

void cotree_cases() {
  auto ok = run("cotree " + fixture("fig1-row1.cnet"));
  REQUIRE(ok.code == 0, "cotree of a contractible link space");
  REQUIRE(ok.out == "(# l0 l1)\n", "unexpected cotree: " << ok.out);

  auto wrong_kind = run("cotree " + fixture("fig5.circ"));
  REQUIRE(wrong_kind.code == 2, "cotree rejects non-conflict inputs");
  REQUIRE(contains(wrong_kind.err, "cotree applies to conflict nets only"),
          "unexpected diagnostic: " << wrong_kind.err);
}

void gen_cases() {
  auto first = run("gen --seed 7 --rules 6");
  REQUIRE(first.code == 0, "gen should succeed");
  REQUIRE(first.out ==
              "(tensor (ax a) (tensor (ax b) (plus1 ~c (ax c))))\n",
          "unexpected proof: " << first.out);
  auto second = run("gen --seed 7 --rules 6");
  REQUIRE(first.out == second.out, "gen is deterministic per seed");
  auto other = run("gen --seed 8 --rules 6");
  REQUIRE(other.out != first.out, "different seeds vary");

  auto checked = run("check-proof -", first.out);
  REQUIRE(checked.code == 0, "generated proofs check");

  auto no_seed = run("gen --rules 4");
  REQUIRE(no_seed.code == 2, "--seed is required");
}

void usage_cases() {
  auto help = run("--help");
  REQUIRE(help.code == 0, "--help exits 0");
  REQUIRE(contains(help.out, "check-proof"), "help lists the subcommands");

  auto unknown = run("frobnicate");
  REQUIRE(unknown.code == 2, "unknown subcommands exit 2");

  auto none = run("");
  REQUIRE(none.code == 2, "a subcommand is required");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: cli_tests <mallnet-binary> <fixtures-dir>\n";
    return 2;
  }
  g_binary = argv[1];
  g_fixtures = argv[2];

  check_proof_cases();
  check_net_cases();
  translate_cases();
  erase_cases();
  sequentialize_cases();
  cotree_cases();
  gen_cases();
  usage_cases();

  if (failures > 0) {
    std::cerr << failures << " CLI check(s) failed\n";
    return 1;
  }
  std::cout << "all CLI checks passed\n";
  return 0;
}
