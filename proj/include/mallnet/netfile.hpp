// Line-based net file formats plus small whole-file I/O helpers.
//
// Every net file opens with a kind line: "net conflict", "net circuit" or
// "net slices". A `#` starts a comment anywhere on a line; blank lines are
// skipped. The three bodies:
//
//   net conflict                    net slices
//   sequent: (b + ~a), (a & a)      sequent: (p & p), (~p & ~p)
//   link L1 2 3                     linking
//   link L2 2 4                       link 1 4
//   conflict L1 L2                  linking
//                                     link 2 3
//   net circuit
//   node N1 axiom a
//   node N5 with
//   wire W1 N1 -> N5 left : p
//   wire W2 N1 -> exit : ~p
//   exits W2 W7
//
// Conflict lines implied by overlap may be omitted; they are materialized
// on load. Parsing checks syntax, id uniqueness and leaf ranges only; the
// semantic checkers (validate_linking, validate_circuit,
// validate_linking_set) judge the loaded object.
#pragma once

#include <optional>
#include <string>

#include "mallnet/circuit.hpp"
#include "mallnet/linking.hpp"
#include "mallnet/slice_net.hpp"

namespace mall {

enum class NetKind { Conflict, Circuit, Slices };

const char* net_kind_name(NetKind k);  // "conflict", "circuit", "slices"

// Exactly the payload named by `kind` is populated.
struct NetFile {
  NetKind kind = NetKind::Conflict;
  std::optional<Linking> conflict_net;
  std::optional<Circuit> circuit;
  std::optional<LinkingSet> slice_net;
};

struct NetParseResult {
  std::optional<NetFile> net;
  std::string error;  // "line N: ..." on failure
};

NetParseResult parse_net_file(const std::string& text);

std::string render_net_file(const Linking& l);
std::string render_net_file(const Circuit& x);
std::string render_net_file(const LinkingSet& ls);

// Whole-file read/write; throw std::runtime_error on I/O failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace mall
