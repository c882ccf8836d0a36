#include "mallnet/slice_net.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "mallnet/linking.hpp"
#include "mallnet/translate.hpp"

using namespace mall;

namespace {

ProofPtr proof(const std::string& text) {
  auto r = parse_proof(text);
  REQUIRE(r.proof);
  return r.proof;
}

LinkingSet make_set(const char* sequent,
                    std::vector<std::vector<std::array<int, 2>>> members) {
  LinkingSet ls;
  ls.sequent = *parse_sequent(sequent).sequent;
  for (auto& m : members) ls.members.push_back({std::move(m)});
  return ls;
}

const char* kPageOneLeft =
    "(with (perm (2 1) (with (perm (2 1) (ax p)) (perm (2 1) (ax p)))) "
    "(perm (2 1) (with (perm (2 1) (ax p)) (perm (2 1) (ax p)))))";

// |- (B * B) with B = ((a | ~a) & (a | ~a)): four linkings, two per side.
ProofPtr tensor_of_withs() {
  auto unit = proof("(with (parr (ax a)) (parr (ax a)))");
  return tensor(unit, unit);
}

}  // namespace

TEST_CASE("canonicalization sorts pairs, sorts members and deduplicates") {
  auto ls = make_set("(p & p), (~p & ~p)", {{{4, 2}}, {{3, 1}}, {{1, 3}}});
  canonicalize(ls);
  REQUIRE(ls.member_count() == 2);
  CHECK(ls.members[0].links == std::vector<std::array<int, 2>>{{1, 3}});
  CHECK(ls.members[1].links == std::vector<std::array<int, 2>>{{2, 4}});

  auto same = make_set("(p & p), (~p & ~p)", {{{2, 4}}, {{1, 3}}});
  CHECK(equal_linking_sets(ls, same));
  CHECK(canonical_key(ls) == canonical_key(same));
  auto other = make_set("(p & p), (~p & ~p)", {{{1, 3}}, {{1, 4}}});
  CHECK_FALSE(equal_linking_sets(ls, other));
}

TEST_CASE("member validation") {
  CHECK(validate_linking_set(
            make_set("(p & p), (~p & ~p)",
                     {{{1, 3}}, {{1, 4}}, {{2, 3}}, {{2, 4}}}))
            .ok);
  // Empty member.
  CHECK_FALSE(validate_linking_set(make_set("a, ~a", {{}})).ok);
  // Leaf out of range.
  CHECK_FALSE(validate_linking_set(make_set("a, ~a", {{{1, 3}}})).ok);
  // Self-link.
  CHECK_FALSE(validate_linking_set(make_set("a, ~a", {{{1, 1}}})).ok);
  // A leaf attached twice within one member.
  CHECK_FALSE(validate_linking_set(
                  make_set("a, ~a, ~a", {{{1, 2}, {1, 3}}}))
                  .ok);
  // Not a dual pair.
  CHECK_FALSE(validate_linking_set(make_set("a, a", {{{1, 2}}})).ok);
}

TEST_CASE("connectivity of the linked sequent forest") {
  CHECK(is_connected_ls(make_set("a, ~a", {{{1, 2}}})));
  CHECK_FALSE(is_connected_ls(
      make_set("a, ~a, b, ~b", {{{1, 2}, {3, 4}}})));  // two islands
  CHECK_FALSE(is_connected_ls(make_set("a, ~a", {})));  // no links at all
}

TEST_CASE("par and with roots are always ready") {
  auto par = make_set("(a | ~a)", {{{1, 2}}});
  REQUIRE(ready_roots_ls(par).size() == 1);
  CHECK(ready_roots_ls(par)[0] == std::pair{0, Conn::Par});

  auto withs = make_set("(p & p), (~p & ~p)",
                        {{{1, 3}}, {{1, 4}}, {{2, 3}}, {{2, 4}}});
  auto ready = ready_roots_ls(withs);
  REQUIRE(ready.size() == 2);
  CHECK(ready[0] == std::pair{0, Conn::With});
  CHECK(ready[1] == std::pair{1, Conn::With});
}

TEST_CASE("plus readiness needs one side touched across all members") {
  auto one_side = make_set("(b + ~a), (a & a)", {{{2, 3}}, {{2, 4}}});
  auto ready = ready_roots_ls(one_side);
  REQUIRE(ready.size() == 2);
  CHECK(ready[0] == std::pair{0, Conn::Plus});
  CHECK(ready[1] == std::pair{1, Conn::With});

  // Two members choosing different summands: no rule application fits.
  auto both = make_set("(a + a), ~a", {{{1, 3}}, {{2, 3}}});
  CHECK(validate_linking_set(both).ok);
  CHECK(is_connected_ls(both));
  CHECK(ready_roots_ls(both).empty());
  CHECK_FALSE(is_slice_net(both));
}

TEST_CASE("tensor readiness carries the counting side condition") {
  auto ls = to_slice_net(tensor_of_withs());
  REQUIRE(ls.member_count() == 4);
  auto ready = ready_roots_ls(ls);
  REQUIRE(ready.size() == 1);
  CHECK(ready[0] == std::pair{0, Conn::Tensor});

  // Dropping one member breaks n = n0 * n1 (3 != 2 * 2): stuck.
  auto partial = ls;
  partial.members.pop_back();
  CHECK(validate_linking_set(partial).ok);
  CHECK(is_connected_ls(partial));
  CHECK(ready_roots_ls(partial).empty());
  CHECK_FALSE(is_slice_net(partial));

  auto erased = erase_root_ls(ls, 0);
  REQUIRE_FALSE(erased.error);
  REQUIRE(erased.parts.size() == 2);
  for (const auto& part : erased.parts) {
    CHECK(render(part.sequent) == "((a | ~a) & (a | ~a))");
    CHECK(part.member_count() == 2);  // the side restrictions, deduplicated
  }
  CHECK(equal_linking_sets(erased.parts[0], erased.parts[1]));
}

TEST_CASE("par erasure splits the formula, plus erasure picks the summand") {
  auto par = erase_root_ls(make_set("(a | ~a)", {{{1, 2}}}), 0);
  REQUIRE_FALSE(par.error);
  REQUIRE(par.parts.size() == 1);
  CHECK(render(par.parts[0].sequent) == "a, ~a");
  REQUIRE(par.parts[0].member_count() == 1);
  CHECK(par.parts[0].members[0].links ==
        std::vector<std::array<int, 2>>{{1, 2}});

  auto plus =
      erase_root_ls(make_set("(b + ~a), (a & a)", {{{2, 3}}, {{2, 4}}}), 0);
  REQUIRE_FALSE(plus.error);
  REQUIRE(plus.parts.size() == 1);
  CHECK(render(plus.parts[0].sequent) == "~a, (a & a)");
  REQUIRE(plus.parts[0].member_count() == 2);
  CHECK(plus.parts[0].members[0].links ==
        std::vector<std::array<int, 2>>{{1, 2}});
  CHECK(plus.parts[0].members[1].links ==
        std::vector<std::array<int, 2>>{{1, 3}});
}

TEST_CASE("with erasure partitions members by the side they touch") {
  auto out = erase_root_ls(
      make_set("~a, (a & a)", {{{1, 2}}, {{1, 3}}}), 1);
  REQUIRE_FALSE(out.error);
  REQUIRE(out.parts.size() == 2);
  for (const auto& part : out.parts) {
    CHECK(render(part.sequent) == "~a, a");
    REQUIRE(part.member_count() == 1);
    CHECK(part.members[0].links == std::vector<std::array<int, 2>>{{1, 2}});
  }
}

TEST_CASE("a member straddling a with sends erasure to the error state") {
  auto ls = make_set("(a & a), ~a, ~a", {{{1, 3}, {2, 4}}});
  CHECK(validate_linking_set(ls).ok);
  CHECK(is_connected_ls(ls));
  auto out = erase_root_ls(ls, 0);
  CHECK(out.error);
  CHECK(out.parts.empty());

  auto result = normalize_ls(make_ls_cluster({ls}));
  CHECK(result.normal_form.error);
  REQUIRE_FALSE(result.trace.empty());
  CHECK(result.trace.back().kind == LsTraceStep::Kind::Erase);
  CHECK(result.trace.back().conn == Conn::With);
  CHECK_FALSE(is_slice_net(ls));
}

TEST_CASE("a member avoiding a with entirely is also a bad split") {
  auto ls = make_set("(a & a), ~a, a, ~a", {{{1, 5}, {3, 4}}, {{4, 5}}});
  CHECK(validate_linking_set(ls).ok);
  CHECK(is_connected_ls(ls));
  auto out = erase_root_ls(ls, 0);
  CHECK(out.error);
  CHECK_FALSE(is_slice_net(ls));
}

TEST_CASE("a member missing one tensor side leaves an empty restriction") {
  // The first member never reaches ~b, so restricting the set to the right
  // tensor part keeps an empty linking as a member. That part can then never
  // reach the axiom shape, and the set as a whole is not a net even though
  // the counting condition holds at the split.
  auto ls = make_set("a, (~a * b), ~b", {{{1, 2}}, {{1, 2}, {3, 4}}});
  CHECK(validate_linking_set(ls).ok);
  CHECK(is_connected_ls(ls));
  auto roots = ready_roots_ls(ls);
  CHECK(std::find(roots.begin(), roots.end(), std::pair{1, Conn::Tensor}) !=
        roots.end());
  auto out = erase_root_ls(ls, 1);
  REQUIRE_FALSE(out.error);
  bool has_empty_member = false;
  for (const auto& part : out.parts)
    for (const auto& m : part.members)
      if (m.links.empty()) has_empty_member = true;
  CHECK(has_empty_member);
  CHECK_FALSE(is_slice_net(ls));
}

TEST_CASE("erase_root_ls rejects non-ready roots") {
  auto both = make_set("(a + a), ~a", {{{1, 3}}, {{2, 3}}});
  CHECK_THROWS_AS(erase_root_ls(both, 0), std::invalid_argument);
}

TEST_CASE("disconnection is detected before any further step") {
  auto ls = make_set("a, ~a, b, ~b", {{{1, 2}, {3, 4}}});
  auto result = normalize_ls(make_ls_cluster({ls}));
  CHECK(result.normal_form.error);
  REQUIRE(result.trace.size() == 1);
  CHECK(result.trace[0].kind == LsTraceStep::Kind::Error);
  CHECK_FALSE(is_slice_net(ls));
}

TEST_CASE("deterministic normalization of the four-linking net") {
  auto ls = to_slice_net(proof(kPageOneLeft));
  auto result = normalize_ls(make_ls_cluster({ls}));
  CHECK_FALSE(result.normal_form.error);
  CHECK(result.normal_form.members.empty());
  REQUIRE(result.trace.size() == 3);
  CHECK(result.trace[0].kind == LsTraceStep::Kind::Erase);
  CHECK(result.trace[0].conn == Conn::With);
  CHECK(result.trace[0].formula == 1);
  CHECK(result.trace[1].conn == Conn::With);
  CHECK(result.trace[1].formula == 2);
  CHECK(result.trace[2].kind == LsTraceStep::Kind::Axiom);
  CHECK(result.trace[2].index == 3);
}

TEST_CASE("the step budget is enforced") {
  auto c = make_ls_cluster({to_slice_net(proof(kPageOneLeft))});
  CHECK_NOTHROW(normalize_ls(c, 3));
  CHECK_THROWS_AS(normalize_ls(c, 2), std::runtime_error);
}

TEST_CASE("one-step successors and cluster identity") {
  auto c = make_ls_cluster(
      {make_set("(b + ~a), (a & a)", {{{2, 3}}, {{2, 4}}})});
  auto succ = step_ls(c);
  REQUIRE(succ.size() == 2);  // the plus and the with are both ready
  for (const auto& s : succ) CHECK_FALSE(s.error);
  CHECK_FALSE(ls_cluster_equal(succ[0], succ[1]));

  auto again = step_ls(c);
  REQUIRE(again.size() == 2);
  CHECK(ls_cluster_equal(succ[0], again[0]));
  CHECK(ls_cluster_equal(succ[1], again[1]));
}

TEST_CASE("translations of proofs are slice nets") {
  for (unsigned seed = 0; seed < 30; ++seed) {
    auto ls = to_slice_net(random_proof(seed, 8));
    CHECK(validate_linking_set(ls).ok);
    CHECK(is_slice_net(ls));
  }
}

TEST_CASE("slice-net sequentialization inverts translation") {
  const char* texts[] = {
      "(ax a)",
      "(parr (ax a))",
      "(perm (2 1) (plus2 b (perm (2 1) (with (perm (2 1) (ax a)) "
      "(perm (2 1) (ax a))))))",
      "(tensor (ax p) (with (perm (2 1) (ax q)) (perm (2 1) (ax q))))",
      kPageOneLeft,
  };
  for (const char* t : texts) {
    auto ls = to_slice_net(proof(t));
    auto r = sequentialize_slice_net(ls);
    REQUIRE(r.proof);
    CHECK(r.error.empty());
    CHECK(check_proof(r.proof).ok());
    CHECK(equal_linking_sets(to_slice_net(r.proof), ls));
  }
  for (unsigned seed = 0; seed < 30; ++seed) {
    auto ls = to_slice_net(random_proof(seed, 8));
    auto r = sequentialize_slice_net(ls);
    REQUIRE(r.proof);
    CHECK(equal_linking_sets(to_slice_net(r.proof), ls));
  }
  auto four = to_slice_net(tensor_of_withs());
  auto r = sequentialize_slice_net(four);
  REQUIRE(r.proof);
  CHECK(equal_linking_sets(to_slice_net(r.proof), four));
}

TEST_CASE("sequentialization rejects non-nets") {
  auto partial = to_slice_net(tensor_of_withs());
  partial.members.pop_back();
  auto r = sequentialize_slice_net(partial);
  CHECK_FALSE(r.proof);
  CHECK_FALSE(r.error.empty());
}

TEST_CASE("slice members match the conflict-net slices") {
  for (unsigned seed = 0; seed < 30; ++seed) {
    auto p = random_proof(seed, 8);
    auto ls = to_slice_net(p);
    auto sliced = slices(to_conflict_net(p));
    REQUIRE(ls.member_count() == static_cast<int>(sliced.size()));
    // Rebuild a linking set from the conflict-net slices: same object.
    LinkingSet rebuilt;
    rebuilt.sequent = ls.sequent;
    for (const auto& s : sliced) {
      SliceLinking m;
      for (const auto& lk : s.links)
        m.links.push_back({std::min(lk[0], lk[1]), std::max(lk[0], lk[1])});
      rebuilt.members.push_back(std::move(m));
    }
    CHECK(equal_linking_sets(ls, rebuilt));
  }
}
