#include "mallnet/translate.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "doctest.h"
#include "mallnet/circuit.hpp"
#include "mallnet/conflict_erasure.hpp"
#include "mallnet/linking.hpp"
#include "mallnet/slice_net.hpp"

using namespace mall;

namespace {

ProofPtr proof(const std::string& text) {
  auto r = parse_proof(text);
  REQUIRE(r.proof);
  REQUIRE(check_proof(r.proof).ok());
  return r.proof;
}

Linking expected_net(const char* sequent, std::vector<std::array<int, 2>> links,
                     std::vector<std::pair<int, int>> conflicts = {}) {
  Linking l;
  l.sequent = *parse_sequent(sequent).sequent;
  l.links = std::move(links);
  for (int i = 0; i < l.link_count(); ++i)
    l.link_names.push_back("x" + std::to_string(i));
  l.conflict.assign(l.link_count(), std::vector<bool>(l.link_count(), false));
  for (auto [a, b] : conflicts) {
    l.conflict[a][b] = true;
    l.conflict[b][a] = true;
  }
  materialize_overlap_conflicts(l);
  return l;
}

int count_conflicts(const Linking& l) {
  int n = 0;
  for (int i = 0; i < l.link_count(); ++i)
    for (int j = i + 1; j < l.link_count(); ++j)
      if (l.conflict[i][j]) ++n;
  return n;
}

int count_kind(const Circuit& x, NodeKind k) {
  int n = 0;
  for (const auto& node : x.nodes)
    if (node.kind == k) ++n;
  return n;
}

// Page-one proofs of |- (p & p), (~p & ~p): & over & in both orders.
const char* kPageOneLeft =
    "(with (perm (2 1) (with (perm (2 1) (ax p)) (perm (2 1) (ax p)))) "
    "(perm (2 1) (with (perm (2 1) (ax p)) (perm (2 1) (ax p)))))";
const char* kPageOneRight =
    "(perm (2 1) (with (perm (2 1) (with (ax p) (ax p))) "
    "(perm (2 1) (with (ax p) (ax p)))))";

// Left-associated tensor chain of n copies of ((a | ~a) & (a | ~a)).
ProofPtr tensor_chain(int n) {
  auto unit = proof("(with (parr (ax a)) (parr (ax a)))");
  ProofPtr p = unit;
  for (int i = 1; i < n; ++i) p = tensor(p, unit);
  return p;
}

}  // namespace

TEST_CASE("axiom, permutation and plus translations") {
  auto ax_net = to_conflict_net(proof("(ax a)"));
  CHECK(equal_nets(ax_net, expected_net("a, ~a", {{1, 2}})));
  CHECK(ax_net.link_names == std::vector<std::string>{"l0"});

  CHECK(equal_nets(to_conflict_net(proof("(perm (2 1) (ax a))")),
                   expected_net("~a, a", {{1, 2}})));
  CHECK(equal_nets(to_conflict_net(proof("(plus1 b (ax a))")),
                   expected_net("a, (~a + b)", {{1, 2}})));
  // plus2 shifts the last leaf block past the absent left summand.
  CHECK(equal_nets(to_conflict_net(proof("(plus2 b (ax a))")),
                   expected_net("a, (b + ~a)", {{1, 3}})));
}

TEST_CASE("with duplicates the context and crosses conflicts") {
  auto net = to_conflict_net(
      proof("(with (perm (2 1) (ax a)) (perm (2 1) (ax a)))"));
  CHECK(equal_nets(net, expected_net("~a, (a & a)", {{1, 2}, {1, 3}})));
  CHECK(count_conflicts(net) == 1);
}

TEST_CASE("tensor joins without conflicts") {
  auto net = to_conflict_net(proof("(tensor (ax a) (ax b))"));
  CHECK(equal_nets(net, expected_net("a, (~a * b), ~b", {{1, 2}, {3, 4}})));
  CHECK(count_conflicts(net) == 0);
}

TEST_CASE("first-row figure pair translates to the same two-link net") {
  auto left = to_conflict_net(proof(
      "(perm (2 1) (plus2 b (perm (2 1) (with (perm (2 1) (ax a)) "
      "(perm (2 1) (ax a))))))"));
  auto right = to_conflict_net(proof(
      "(with (perm (2 1) (plus2 b (ax a))) (perm (2 1) (plus2 b (ax a))))"));
  auto expected = expected_net("(b + ~a), (a & a)", {{2, 3}, {2, 4}});
  CHECK(equal_nets(left, expected));
  CHECK(equal_nets(right, expected));
  CHECK(count_conflicts(left) == 1);
}

TEST_CASE("page-one pair: identical nets with full conflict") {
  auto left = to_conflict_net(proof(kPageOneLeft));
  auto right = to_conflict_net(proof(kPageOneRight));
  CHECK(left.link_count() == 4);
  CHECK(count_conflicts(left) == 6);
  CHECK(equal_nets(left, right));
  CHECK(equal_nets(left, expected_net("(p & p), (~p & ~p)",
                                      {{1, 3}, {2, 3}, {1, 4}, {2, 4}},
                                      {{0, 3}, {1, 2}})));
}

TEST_CASE("third-row figure pair: par over with both ways") {
  const std::string branch = "(perm (3 1 2) (tensor (ax c) (perm (2 1) (ax a))))";
  const std::string left =
      "(perm (2 1) (parr (perm (3 1 2) (with " + branch + " " + branch + "))))";
  const std::string right_branch =
      "(perm (2 1) (parr (perm (3 1 2) " + branch + ")))";
  const std::string right = "(with " + right_branch + " " + right_branch + ")";
  auto ln = to_conflict_net(proof(left));
  auto rn = to_conflict_net(proof(right));
  CHECK(ln.link_count() == 4);
  CHECK(count_conflicts(ln) == 4);  // opposite &-branches conflict
  CHECK(equal_nets(ln, rn));
}

TEST_CASE("bottom figure pair: raising a tensor over a with changes the net") {
  auto left = to_conflict_net(proof(
      "(tensor (ax p) (with (perm (2 1) (ax q)) (perm (2 1) (ax q))))"));
  auto right = to_conflict_net(proof(
      "(with (tensor (ax p) (perm (2 1) (ax q))) "
      "(tensor (ax p) (perm (2 1) (ax q))))"));
  CHECK(left.link_count() == 3);
  CHECK(right.link_count() == 4);
  CHECK_FALSE(equal_nets(left, right));
  // The three-link side is exactly the five-token slicing example.
  CHECK(equal_nets(left, expected_net("p, (~p * ~q), (q & q)",
                                      {{1, 2}, {4, 3}, {5, 3}}, {{1, 2}})));
  CHECK(count_conflicts(left) == 1);
  CHECK(count_conflicts(right) == 4);
}

TEST_CASE("translations are slicings and land on the proof's conclusion") {
  for (unsigned seed = 0; seed < 80; ++seed) {
    auto p = random_proof(seed, 9);
    auto net = to_conflict_net(p);
    CHECK(equal(net.sequent, conclusion(p)));
    CHECK(validate_linking(net).ok);
    CHECK(is_slicing(net));
  }
}

TEST_CASE("axiom circuit: one node, two ordered exits") {
  auto x = to_circuit(proof("(ax a)"));
  REQUIRE(x.nodes.size() == 1);
  CHECK(x.nodes[0].kind == NodeKind::Axiom);
  REQUIRE(x.wires.size() == 2);
  auto report = validate_circuit(x);
  REQUIRE(report.ok());
  CHECK(render(*report.conclusion) == "a, ~a");
}

TEST_CASE("page-one circuit: four axioms, three withs, three contractions") {
  auto x = to_circuit(proof(kPageOneRight));
  CHECK(x.nodes.size() == 10);
  CHECK(count_kind(x, NodeKind::Axiom) == 4);
  CHECK(count_kind(x, NodeKind::WithNode) == 3);
  CHECK(count_kind(x, NodeKind::Contraction) == 3);
  auto report = validate_circuit(x);
  REQUIRE(report.ok());
  CHECK(render(*report.conclusion) == "(p & p), (~p & ~p)");
}

TEST_CASE("random circuits validate with the right conclusion") {
  for (unsigned seed = 0; seed < 80; ++seed) {
    auto p = random_proof(seed, 9);
    auto x = to_circuit(p);
    auto report = validate_circuit(x);
    REQUIRE(report.ok());
    CHECK(equal(*report.conclusion, conclusion(p)));
  }
}

TEST_CASE("page-one slice net: the four axiom linkings") {
  auto ls = to_slice_net(proof(kPageOneLeft));
  REQUIRE(ls.member_count() == 4);
  std::vector<std::vector<std::array<int, 2>>> expect = {
      {{1, 3}}, {{1, 4}}, {{2, 3}}, {{2, 4}}};
  for (int i = 0; i < 4; ++i) {
    REQUIRE(ls.members[i].links.size() == 1);
    CHECK(ls.members[i].links[0] == expect[i][0]);
  }
  CHECK(equal_linking_sets(ls, to_slice_net(proof(kPageOneRight))));
}

TEST_CASE("slice members are the slices of the conflict net") {
  for (unsigned seed = 0; seed < 40; ++seed) {
    auto p = random_proof(seed, 8);
    auto ls = to_slice_net(p);
    auto sl = slices(to_conflict_net(p));
    CHECK(ls.member_count() == static_cast<int>(sl.size()));
    for (const auto& m : ls.members) {
      std::vector<int> leaves;
      for (auto lk : m.links) {
        leaves.push_back(lk[0]);
        leaves.push_back(lk[1]);
      }
      std::sort(leaves.begin(), leaves.end());
      CHECK(is_additive_resolution(ls.sequent, leaves));
    }
  }
}

TEST_CASE("tensor chain blowup: 2^n members from 2n links") {
  auto p = tensor_chain(4);
  CHECK(to_conflict_net(p).link_count() == 8);
  CHECK(to_slice_net(p).member_count() == 16);
}
