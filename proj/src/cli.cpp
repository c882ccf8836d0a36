#include "mallnet/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mallnet/circuit.hpp"
#include "mallnet/conflict_erasure.hpp"
#include "mallnet/netfile.hpp"
#include "mallnet/slice_net.hpp"
#include "mallnet/translate.hpp"

namespace mall {
namespace {

constexpr int kAccept = 0;    // accepted / success
constexpr int kReject = 1;    // valid input, negative verdict
constexpr int kMalformed = 2; // unparsable input or internal failure

// States explored by --all-orders before giving up.
constexpr size_t kExploreCap = 100000;

// ----------------------------------------------------------------- plumbing

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  return read_text_file(path);
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-")
    std::cout << text;
  else
    write_text_file(out_path, text);
}

std::string counted(int n, const std::string& noun) {
  return std::to_string(n) + " " + noun + (n == 1 ? "" : "s");
}

long long env_budget() {
  const char* v = std::getenv("MALLNET_STEP_LIMIT");
  if (!v) return 0;  // 0 selects the built-in step bound
  long long b = std::strtoll(v, nullptr, 10);
  return b > 0 ? b : 0;
}

// Reads and parses a net file; returns false after reporting to stderr.
bool load_net(const std::string& in, NetFile& out) {
  std::string text;
  try {
    text = read_input(in);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return false;
  }
  auto r = parse_net_file(text);
  if (!r.net) {
    std::cerr << r.error << "\n";
    return false;
  }
  out = std::move(*r.net);
  return true;
}

// Reads, parses and checks a proof; on failure sets `code` and reports.
ProofPtr load_proof(const std::string& in, int& code) {
  std::string text;
  try {
    text = read_input(in);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    code = kMalformed;
    return nullptr;
  }
  auto parsed = parse_proof(text);
  if (!parsed.proof) {
    std::cerr << "parse error at offset " << parsed.error->position << ": "
              << parsed.error->message << "\n";
    code = kMalformed;
    return nullptr;
  }
  auto res = check_proof(parsed.proof);
  if (!res.ok()) {
    std::cout << "rejected: "
              << (res.error->path.empty()
                      ? std::string("at the root rule")
                      : "at subproof " + res.error->path)
              << ": " << res.error->reason << "\n";
    code = kReject;
    return nullptr;
  }
  code = kAccept;
  return parsed.proof;
}

// ------------------------------------------------------------- check-proof

int cmd_check_proof(const std::string& in) {
  int code = kAccept;
  ProofPtr p = load_proof(in, code);
  if (!p) return code;
  std::cout << "proof: OK, concludes: " << render(conclusion(p)) << "\n";
  return kAccept;
}

// --------------------------------------------------------------- translate

int cmd_translate(const std::string& to, const std::string& in,
                  const std::string& out) {
  int code = kAccept;
  ProofPtr p = load_proof(in, code);
  if (!p) return code;
  if (to == "conflict")
    emit(out, render_net_file(to_conflict_net(p)));
  else if (to == "circuit")
    emit(out, render_net_file(to_circuit(p)));
  else
    emit(out, render_net_file(to_slice_net(p)));
  return kAccept;
}

// --------------------------------------------------------------- check-net

int check_conflict_net(const Linking& l) {
  auto v = validate_linking(l);
  if (!v.ok) {
    std::cout << v.reason << "\n";
    return kReject;
  }
  auto space = link_space(l);
  auto ct = is_contractible(space);
  if (!ct.contractible) {
    std::cout << "not a slicing: link space has an induced path";
    for (int t : ct.p4) std::cout << " " << space.tokens[t];
    std::cout << "\n";
    return kReject;
  }
  if (!is_map(l)) {
    std::cout << "not a slicing: attachment is not a coherence-space map\n";
    return kReject;
  }
  if (!is_maximal_map(l)) {
    std::cout << "not a slicing: attachment map is not maximal\n";
    return kReject;
  }
  auto n = normalize(make_cluster({l}), env_budget());
  if (n.normal_form.error) {
    std::cout << "error: disconnected\n";
    return kReject;
  }
  if (!n.normal_form.members.empty()) {
    std::cout << "stuck: no ready root\n";
    return kReject;
  }
  int conflicts = 0;
  for (int i = 0; i < l.link_count(); ++i)
    for (int j = i + 1; j < l.link_count(); ++j)
      if (l.conflict[i][j]) ++conflicts;
  std::cout << "conflict net: OK (" << counted(l.link_count(), "link") << ", "
            << counted(conflicts, "conflict") << ")\n";
  return kAccept;
}

int check_circuit(const Circuit& x) {
  auto v = validate_circuit(x);
  if (!v.ok()) {
    std::cout << v.error << "\n";
    return kReject;
  }
  auto n = normalize_circuits({x});
  if (!n.normal_form.empty()) {
    std::cout << "stuck: no ready node\n";
    return kReject;
  }
  std::cout << "circuit: OK (" << counted(static_cast<int>(x.nodes.size()), "node")
            << ", " << counted(static_cast<int>(x.wires.size()), "wire") << ")\n";
  return kAccept;
}

int check_slice_net(const LinkingSet& ls) {
  auto v = validate_linking_set(ls);
  if (!v.ok) {
    std::cout << v.reason << "\n";
    return kReject;
  }
  auto n = normalize_ls(make_ls_cluster({ls}), env_budget());
  if (n.normal_form.error) {
    std::cout << "error: erasure reached the error state\n";
    return kReject;
  }
  if (!n.normal_form.members.empty()) {
    std::cout << "stuck: no ready root\n";
    return kReject;
  }
  std::cout << "slice net: OK (" << counted(ls.member_count(), "linking")
            << ")\n";
  return kAccept;
}

int cmd_check_net(const std::string& in) {
  NetFile f;
  if (!load_net(in, f)) return kMalformed;
  switch (f.kind) {
    case NetKind::Conflict: return check_conflict_net(*f.conflict_net);
    case NetKind::Circuit: return check_circuit(*f.circuit);
    case NetKind::Slices: return check_slice_net(*f.slice_net);
  }
  return kMalformed;
}

// ----------------------------------------------------------- sequentialize

int cmd_sequentialize(const std::string& in, const std::string& out) {
  NetFile f;
  if (!load_net(in, f)) return kMalformed;
  ProofPtr p;
  std::string error;
  switch (f.kind) {
    case NetKind::Conflict: {
      auto r = sequentialize(*f.conflict_net);
      p = r.proof;
      error = r.error;
      break;
    }
    case NetKind::Circuit: {
      auto r = sequentialize_circuit(*f.circuit);
      p = r.proof;
      error = r.error;
      break;
    }
    case NetKind::Slices: {
      auto r = sequentialize_slice_net(*f.slice_net);
      p = r.proof;
      error = r.error;
      break;
    }
  }
  if (!p) {
    std::cout << error << "\n";
    return kReject;
  }
  emit(out, render(p) + "\n");
  return kAccept;
}

// ---------------------------------------------------------------- erasure

// Trace printing for the three formalisms. Conflict nets use the library
// renderers; the other two mirror the same line shapes.

void print_trace(const std::vector<TraceStep>& trace, const std::string& mode) {
  for (const auto& t : trace)
    std::cout << (mode == "json" ? render_json(t) : render(t)) << "\n";
}

void print_trace(const std::vector<LsTraceStep>& trace,
                 const std::string& mode) {
  for (const auto& t : trace) {
    if (mode == "json") {
      nlohmann::json j;
      j["step"] = t.index;
      switch (t.kind) {
        case LsTraceStep::Kind::Erase:
          j["action"] = "erase";
          j["kind"] = conn_name(t.conn);
          j["formula"] = t.formula;
          j["vertex"] = "/";
          break;
        case LsTraceStep::Kind::Axiom:
          j["action"] = "axiom";
          break;
        case LsTraceStep::Kind::Error:
          j["action"] = "error";
          break;
      }
      std::cout << j.dump() << "\n";
      continue;
    }
    std::cout << "step " << t.index << ": ";
    switch (t.kind) {
      case LsTraceStep::Kind::Erase:
        std::cout << "erase " << conn_name(t.conn) << " root at formula "
                  << t.formula << ", vertex /";
        break;
      case LsTraceStep::Kind::Axiom:
        std::cout << "axiom";
        break;
      case LsTraceStep::Kind::Error:
        std::cout << "ERROR";
        break;
    }
    std::cout << "\n";
  }
}

void print_trace(const std::vector<CircuitTraceStep>& trace,
                 const std::string& mode) {
  for (const auto& t : trace) {
    if (mode == "json") {
      nlohmann::json j;
      j["step"] = t.index;
      j["action"] = "erase";
      j["kind"] = node_kind_name(t.kind);
      j["node"] = t.node_id;
      std::cout << j.dump() << "\n";
    } else {
      std::cout << "step " << t.index << ": erase " << node_kind_name(t.kind)
                << " node N" << t.node_id << "\n";
    }
  }
}

// Breadth-first exploration of every erasure order; returns the number of
// distinct normal forms (keyed by `key`), storing one accepting flag.
template <typename State, typename Key, typename Succ, typename Accepting>
int explore_all_orders(const State& start, Key key, Succ successors,
                       Accepting accepting, bool& accepted) {
  std::set<std::string> visited{key(start)};
  std::set<std::string> normals;
  accepted = false;
  std::vector<State> frontier{start};
  while (!frontier.empty()) {
    if (visited.size() > kExploreCap)
      throw std::runtime_error("--all-orders: state space too large");
    std::vector<State> next;
    for (const auto& s : frontier) {
      auto succ = successors(s);
      if (succ.empty()) {
        if (normals.insert(key(s)).second && accepting(s)) accepted = true;
        continue;
      }
      for (auto& t : succ)
        if (visited.insert(key(t)).second) next.push_back(std::move(t));
    }
    frontier = std::move(next);
  }
  return static_cast<int>(normals.size());
}

std::string cluster_key(const Cluster& c) {
  if (c.error) return "E";
  std::string k;
  for (const auto& m : c.members) k += canonical_key(m) + "\n";
  return k;
}

std::string ls_cluster_key(const LsCluster& c) {
  if (c.error) return "E";
  std::string k;
  for (const auto& m : c.members) k += canonical_key(m) + "\n";
  return k;
}

std::string circuit_state_key(const std::vector<Circuit>& s) {
  std::vector<std::string> parts;
  for (const auto& x : s) parts.push_back(render_net_file(x));
  std::sort(parts.begin(), parts.end());
  std::string k;
  for (auto& p : parts) k += p + "\n";
  return k;
}

std::vector<std::vector<Circuit>> circuit_successors(
    const std::vector<Circuit>& s) {
  std::vector<std::vector<Circuit>> out;
  for (size_t i = 0; i < s.size(); ++i)
    for (int n : ready_nodes(s[i])) {
      std::vector<Circuit> t;
      for (size_t j = 0; j < s.size(); ++j)
        if (j != i) t.push_back(s[j]);
      for (auto& piece : erase_node(s[i], n)) t.push_back(std::move(piece));
      out.push_back(std::move(t));
    }
  return out;
}

int report_all_orders(int normal_count, bool accepted) {
  if (normal_count != 1) {
    std::cout << "not confluent: " << normal_count << " normal forms\n";
    return kReject;
  }
  std::cout << "confluent: unique normal form\n";
  std::cout << (accepted ? "∅" : "stuck or error") << "\n";
  return accepted ? kAccept : kReject;
}

int cmd_erase(const std::string& in, const std::string& trace_mode,
              bool all_orders) {
  NetFile f;
  if (!load_net(in, f)) return kMalformed;

  switch (f.kind) {
    case NetKind::Conflict: {
      const Linking& l = *f.conflict_net;
      auto v = validate_linking(l);
      if (!v.ok) {
        std::cout << v.reason << "\n";
        return kReject;
      }
      if (!is_slicing(l)) {
        std::cout << "not a slicing\n";
        return kReject;
      }
      if (all_orders) {
        bool accepted = false;
        int n = explore_all_orders(
            make_cluster({l}), cluster_key,
            [](const Cluster& c) { return step(c); },
            [](const Cluster& c) { return !c.error && c.members.empty(); },
            accepted);
        return report_all_orders(n, accepted);
      }
      auto n = normalize(make_cluster({l}), env_budget());
      if (!trace_mode.empty()) print_trace(n.trace, trace_mode);
      if (n.normal_form.error) {
        std::cout << "error: disconnected\n";
        return kReject;
      }
      if (!n.normal_form.members.empty()) {
        std::cout << "stuck: no ready root\n";
        return kReject;
      }
      std::cout << "∅\n";
      return kAccept;
    }
    case NetKind::Circuit: {
      const Circuit& x = *f.circuit;
      auto v = validate_circuit(x);
      if (!v.ok()) {
        std::cout << v.error << "\n";
        return kReject;
      }
      if (all_orders) {
        bool accepted = false;
        int n = explore_all_orders(std::vector<Circuit>{x}, circuit_state_key,
                                   circuit_successors,
                                   [](const std::vector<Circuit>& s) {
                                     return s.empty();
                                   },
                                   accepted);
        return report_all_orders(n, accepted);
      }
      auto n = normalize_circuits({x});
      if (!trace_mode.empty()) print_trace(n.trace, trace_mode);
      if (!n.normal_form.empty()) {
        std::cout << "stuck: no ready node\n";
        return kReject;
      }
      std::cout << "∅\n";
      return kAccept;
    }
    case NetKind::Slices: {
      const LinkingSet& ls = *f.slice_net;
      auto v = validate_linking_set(ls);
      if (!v.ok) {
        std::cout << v.reason << "\n";
        return kReject;
      }
      if (all_orders) {
        bool accepted = false;
        int n = explore_all_orders(
            make_ls_cluster({ls}), ls_cluster_key,
            [](const LsCluster& c) { return step_ls(c); },
            [](const LsCluster& c) { return !c.error && c.members.empty(); },
            accepted);
        return report_all_orders(n, accepted);
      }
      auto n = normalize_ls(make_ls_cluster({ls}), env_budget());
      if (!trace_mode.empty()) print_trace(n.trace, trace_mode);
      if (n.normal_form.error) {
        std::cout << "error: erasure reached the error state\n";
        return kReject;
      }
      if (!n.normal_form.members.empty()) {
        std::cout << "stuck: no ready root\n";
        return kReject;
      }
      std::cout << "∅\n";
      return kAccept;
    }
  }
  return kMalformed;
}

// ------------------------------------------------------------------ cotree

int cmd_cotree(const std::string& in) {
  NetFile f;
  if (!load_net(in, f)) return kMalformed;
  if (f.kind != NetKind::Conflict) {
    std::cerr << "cotree applies to conflict nets only\n";
    return kMalformed;
  }
  const Linking& l = *f.conflict_net;
  auto v = validate_linking(l);
  if (!v.ok) {
    std::cout << v.reason << "\n";
    return kReject;
  }
  auto space = link_space(l);
  auto ct = is_contractible(space);
  if (!ct.contractible) {
    std::cout << "not contractible: induced path";
    for (int t : ct.p4) std::cout << " " << space.tokens[t];
    std::cout << "\n";
    return kReject;
  }
  std::cout << render(*cotree(space), space) << "\n";
  return kAccept;
}

// --------------------------------------------------------------------- gen

int cmd_gen(unsigned seed, int rules, const std::string& out) {
  emit(out, render(random_proof(seed, rules)) + "\n");
  return kAccept;
}

}  // namespace

// --------------------------------------------------------------- dispatcher

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"MALL proofs and proof nets: translation, checking, erasure"};
  app.require_subcommand(1);

  std::string in, out, to, trace_mode;
  bool all_orders = false;
  unsigned seed = 0;
  int rules = 8;

  auto* check_proof_cmd =
      app.add_subcommand("check-proof", "verify a proof file");
  check_proof_cmd->add_option("file", in, "proof file (default: stdin)");

  auto* translate_cmd =
      app.add_subcommand("translate", "translate a proof to a net");
  translate_cmd->add_option("--to", to, "target: conflict | circuit | slices")
      ->required()
      ->check(CLI::IsMember({"conflict", "circuit", "slices"}));
  translate_cmd->add_option("file", in, "proof file (default: stdin)");
  translate_cmd->add_option("-o,--output", out, "output file (default: stdout)");

  auto* check_net_cmd = app.add_subcommand(
      "check-net", "check a net file (kind auto-detected)");
  check_net_cmd->add_option("file", in, "net file (default: stdin)");

  auto* seq_cmd =
      app.add_subcommand("sequentialize", "extract a proof from a net");
  seq_cmd->add_option("file", in, "net file (default: stdin)");
  seq_cmd->add_option("-o,--output", out, "output file (default: stdout)");

  auto* erase_cmd = app.add_subcommand("erase", "run erasure on a net");
  erase_cmd->add_option("file", in, "net file (default: stdin)");
  erase_cmd->add_flag("--trace{text}", trace_mode,
                      "print the erasure trace (--trace=json for JSON lines)");
  erase_cmd->add_flag("--all-orders", all_orders,
                      "explore every erasure order and report confluence");

  auto* cotree_cmd =
      app.add_subcommand("cotree", "print the link-space cotree");
  cotree_cmd->add_option("file", in, "conflict-net file (default: stdin)");

  auto* gen_cmd = app.add_subcommand("gen", "generate a random proof");
  gen_cmd->add_option("--seed", seed, "random seed")->required();
  gen_cmd->add_option("--rules", rules, "maximum non-permutation rules")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("-o,--output", out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kAccept : kMalformed;
  }

  if (!trace_mode.empty() && trace_mode != "text" && trace_mode != "json") {
    std::cerr << "bad --trace mode '" << trace_mode << "' (use text or json)\n";
    return kMalformed;
  }

  try {
    if (check_proof_cmd->parsed()) return cmd_check_proof(in);
    if (translate_cmd->parsed()) return cmd_translate(to, in, out);
    if (check_net_cmd->parsed()) return cmd_check_net(in);
    if (seq_cmd->parsed()) return cmd_sequentialize(in, out);
    if (erase_cmd->parsed()) return cmd_erase(in, trace_mode, all_orders);
    if (cotree_cmd->parsed()) return cmd_cotree(in);
    if (gen_cmd->parsed()) return cmd_gen(seed, rules, out);
  } catch (const std::exception& e) {
    std::cerr << "internal failure: " << e.what() << "\n";
    return kMalformed;
  }
  return kMalformed;
}

}  // namespace mall
