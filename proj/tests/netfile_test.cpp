#include "mallnet/netfile.hpp"

#include <cstdio>
#include <string>

#include "doctest.h"
#include "mallnet/translate.hpp"

using namespace mall;

namespace {

ProofPtr proof(const std::string& text) {
  auto r = parse_proof(text);
  REQUIRE(r.proof);
  return r.proof;
}

NetFile must_parse(const std::string& text) {
  auto r = parse_net_file(text);
  REQUIRE_MESSAGE(r.net.has_value(), r.error);
  return *r.net;
}

std::string error_of(const std::string& text) {
  auto r = parse_net_file(text);
  REQUIRE_FALSE(r.net.has_value());
  REQUIRE_FALSE(r.error.empty());
  return r.error;
}

const char* kPageOneLeft =
    "(with (perm (2 1) (with (perm (2 1) (ax p)) (perm (2 1) (ax p)))) "
    "(perm (2 1) (with (perm (2 1) (ax p)) (perm (2 1) (ax p)))))";

}  // namespace

TEST_CASE("net kind names") {
  CHECK(std::string(net_kind_name(NetKind::Conflict)) == "conflict");
  CHECK(std::string(net_kind_name(NetKind::Circuit)) == "circuit");
  CHECK(std::string(net_kind_name(NetKind::Slices)) == "slices");
}

TEST_CASE("conflict nets render to the pinned line format") {
  auto net = to_conflict_net(proof(
      "(perm (2 1) (plus2 b (perm (2 1) (with (perm (2 1) (ax a)) "
      "(perm (2 1) (ax a))))))"));
  CHECK(render_net_file(net) ==
        "net conflict\n"
        "sequent: (b + ~a), (a & a)\n"
        "link l0 3 2\n"
        "link l1 4 2\n"
        "conflict l0 l1\n");
}

TEST_CASE("conflict net round trip preserves identity") {
  auto net = to_conflict_net(proof(kPageOneLeft));
  auto file = must_parse(render_net_file(net));
  CHECK(file.kind == NetKind::Conflict);
  REQUIRE(file.conflict_net.has_value());
  CHECK(equal_nets(*file.conflict_net, net));
  CHECK_FALSE(file.circuit.has_value());
  CHECK_FALSE(file.slice_net.has_value());
}

TEST_CASE("overlap conflicts are materialized on load") {
  auto file = must_parse(
      "net conflict\n"
      "sequent: (b + ~a), (a & a)\n"
      "link L1 2 3\n"
      "link L2 2 4\n");  // no conflict line: implied by the shared leaf
  REQUIRE(file.conflict_net.has_value());
  const auto& net = *file.conflict_net;
  REQUIRE(net.link_count() == 2);
  CHECK(net.conflict[0][1]);
  CHECK(net.link_names == std::vector<std::string>{"L1", "L2"});
}

TEST_CASE("comments, blank lines and flexible spacing are accepted") {
  auto file = must_parse(
      "# a full-line comment\n"
      "net conflict\n"
      "\n"
      "sequent:   a ,  ~a   # trailing comment\n"
      "link ax 1 2\n");
  REQUIRE(file.conflict_net.has_value());
  CHECK(render(file.conflict_net->sequent) == "a, ~a");
  CHECK(file.conflict_net->link_names ==
        std::vector<std::string>{"ax"});
}

TEST_CASE("circuit files round trip up to isomorphism") {
  auto x = to_circuit(proof(kPageOneLeft));
  auto text = render_net_file(x);
  auto file = must_parse(text);
  CHECK(file.kind == NetKind::Circuit);
  REQUIRE(file.circuit.has_value());
  REQUIRE(validate_circuit(*file.circuit).ok());
  CHECK(circuits_isomorphic(*file.circuit, x));
  // Fresh id generators stay clear of the loaded ids.
  CHECK(file.circuit->next_node_id > 0);
  CHECK(file.circuit->next_wire_id > 0);
}

TEST_CASE("slice net files round trip") {
  auto ls = to_slice_net(proof(kPageOneLeft));
  auto text = render_net_file(ls);
  CHECK(text ==
        "net slices\n"
        "sequent: (p & p), (~p & ~p)\n"
        "linking\n  link 1 3\n"
        "linking\n  link 1 4\n"
        "linking\n  link 2 3\n"
        "linking\n  link 2 4\n");
  auto file = must_parse(text);
  CHECK(file.kind == NetKind::Slices);
  REQUIRE(file.slice_net.has_value());
  CHECK(equal_linking_sets(*file.slice_net, ls));
}

TEST_CASE("indentation in slice files is insignificant") {
  auto a = must_parse(
      "net slices\nsequent: a, ~a\nlinking\nlink 2 1\n");
  auto b = must_parse(
      "net slices\nsequent: a, ~a\nlinking\n        link 1 2\n");
  REQUIRE(a.slice_net.has_value());
  REQUIRE(b.slice_net.has_value());
  CHECK(equal_linking_sets(*a.slice_net, *b.slice_net));
}

TEST_CASE("parse errors carry line numbers") {
  CHECK(error_of("").substr(0, 4) == "line");
  CHECK(error_of("net box\n") == "line 1: unknown net kind 'box'");
  CHECK(error_of("stuff\n").substr(0, 7) == "line 1:");

  // Conflict bodies.
  CHECK(error_of("net conflict\nlink L1 1 2\n").substr(0, 7) == "line 2:");
  CHECK(error_of("net conflict\nsequent: a b\n").substr(0, 7) == "line 2:");
  CHECK(error_of("net conflict\nsequent: a, ~a\nlink L1 1 2\nlink L1 1 2\n")
            .substr(0, 7) == "line 4:");
  CHECK(error_of("net conflict\nsequent: a, ~a\nlink L1 1 3\n")
            .substr(0, 7) == "line 3:");  // leaf out of range
  CHECK(error_of("net conflict\nsequent: a, ~a\nlink L1 1 2\n"
                 "conflict L1 L9\n")
            .substr(0, 7) == "line 4:");  // unknown link name
  CHECK(error_of("net conflict\nsequent: a, ~a\nlink L1 1 2\n"
                 "conflict L1 L1\n")
            .substr(0, 7) == "line 4:");  // self-conflict
  CHECK(error_of("net conflict\nsequent: a, ~a\nlink L1 1\n")
            .substr(0, 7) == "line 3:");  // missing a leaf field

  // Circuit bodies.
  CHECK(error_of("net circuit\nnode N1 axiom a\nwire W1 N1 -> exit : a\n"
                 "wire W2 N1 -> exit : ~a\n")
            .substr(0, 7) == "line 4:");  // missing exits line
  CHECK(error_of("net circuit\nnode N1 box\nexits\n").substr(0, 7) ==
        "line 2:");  // unknown node kind
  CHECK(error_of("net circuit\nnode N1 axiom a\nnode N1 axiom a\nexits\n")
            .substr(0, 7) == "line 3:");  // duplicate node id
  CHECK(error_of("net circuit\nnode N1 axiom a\nwire W1 N1 exit : a\n"
                 "exits W1\n")
            .substr(0, 7) == "line 3:");  // missing arrow
  CHECK(error_of("net circuit\nnode N1 axiom b\n"
                 "wire W1 N1 -> exit : a\nwire W2 N1 -> exit : ~a\n"
                 "exits W1 W2\n")
            .substr(0, 7) == "line 2:");  // axiom label contradicts wires

  // Slices bodies.
  CHECK(error_of("net slices\nsequent: a, ~a\nlink 1 2\n").substr(0, 7) ==
        "line 3:");  // link before any linking header
  CHECK(error_of("net slices\nsequent: a, ~a\nlinking\nlink 1 9\n")
            .substr(0, 7) == "line 4:");
}

TEST_CASE("reference errors parse but fail validation") {
  // Structure checks belong to the semantic validators, not the parser:
  // the wire into the undeclared node N7 parses fine.
  auto file = must_parse(
      "net circuit\nnode N1 axiom a\nwire W1 N1 -> exit : a\n"
      "wire W2 N1 -> N7 : ~a\nexits W1\n");
  REQUIRE(file.circuit.has_value());
  CHECK_FALSE(validate_circuit(*file.circuit).ok());
}

TEST_CASE("whole-file helpers write and read back") {
  const std::string path = "netfile_test_roundtrip.tmp";
  write_text_file(path, "net conflict\nsequent: a, ~a\nlink L1 1 2\n");
  CHECK(read_text_file(path) ==
        "net conflict\nsequent: a, ~a\nlink L1 1 2\n");
  CHECK_THROWS_AS(read_text_file("definitely-missing-directory/x"),
                  std::runtime_error);
  std::remove(path.c_str());
}
