// Cut-free MALL sequent-calculus derivations.
//
// Rule schemas (active positions are fixed; use perm to reach others):
//   ax        |- P, ~P                 (P a positive literal)
//   perm_s    |- G            => |- sG          (sG[i] = G[s(i)], 1-based)
//   parr      |- G, A, B      => |- G, (A | B)
//   plus1 B   |- G, A         => |- G, (A + B)
//   plus2 A   |- G, B         => |- G, (A + B)
//   tensor    |- G, A  |- B, D => |- G, (A * B), D
//   with      |- G, A  |- G, B => |- G, (A & B)   (contexts must match)
//
// Node paths address subproofs: "" is the root, '0' the (left) premise,
// '1' the right premise of tensor/with.
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mallnet/formula.hpp"

namespace mall {

enum class Rule { Ax, Perm, Parr, Plus1, Plus2, Tensor, With };

struct Proof;
using ProofPtr = std::shared_ptr<const Proof>;

struct Proof {
  Rule rule = Rule::Ax;
  Literal ax_lit;                // Ax: the positive literal P
  std::vector<int> perm;         // Perm: 1-based images, new[i] = old[perm[i]]
  FormulaPtr other;              // Plus1: the absent right summand B;
                                 // Plus2: the absent left summand A
  ProofPtr sub0, sub1;           // sub1 only for Tensor/With

  // Filled in by check_proof on success (per-node memo).
  mutable std::shared_ptr<const Sequent> cached_conclusion;
};

ProofPtr ax(std::string atom);
ProofPtr perm(std::vector<int> sigma, ProofPtr sub);
ProofPtr parr(ProofPtr sub);
ProofPtr plus1(FormulaPtr right_summand, ProofPtr sub);
ProofPtr plus2(FormulaPtr left_summand, ProofPtr sub);
ProofPtr tensor(ProofPtr left, ProofPtr right);
ProofPtr with(ProofPtr left, ProofPtr right);

bool equal(const ProofPtr& a, const ProofPtr& b);

// Number of non-perm rule nodes.
int rule_count(const ProofPtr& p);

// Subproof at a node path; null if the path is invalid.
ProofPtr subproof_at(const ProofPtr& p, std::string_view path);

// ---------------------------------------------------------------- checking

struct RuleMismatch {
  std::string path;    // offending node
  std::string reason;
  bool with_context_mismatch = false;  // & premises disagree on the context
};

struct CheckResult {
  std::optional<Sequent> conclusion;   // set iff the proof is valid
  std::optional<RuleMismatch> error;
  bool ok() const { return conclusion.has_value(); }
};

CheckResult check_proof(const ProofPtr& p);

// Conclusion of an already-checked proof (checks on demand; throws
// std::invalid_argument if invalid).
const Sequent& conclusion(const ProofPtr& p);

// -------------------------------------------------------------- text format
//
// S-expressions: (ax a), (perm (2 1) P), (parr P), (plus1 F P),
// (plus2 F P), (tensor P Q), (with P Q); F in formula syntax.

std::string render(const ProofPtr& p);

struct ProofParseResult {
  ProofPtr proof;  // null on error
  std::optional<ParseError> error;
};
ProofParseResult parse_proof(std::string_view text);

// -------------------------------------------------------------- enumeration

// Every cut-free proof of s, up to permutation-rule normalization (the
// search treats sequents as multisets and re-inserts explicit perms, so
// each returned proof passes check_proof with conclusion exactly s).
// Intended for small sequents (<= ~8 leaves); terminates always.
std::vector<ProofPtr> enumerate_proofs(const Sequent& s);

// True iff s has at least one proof (same search, early exit).
bool provable(const Sequent& s);

// --------------------------------------------------------------- generation

// Deterministic pseudo-random valid proof with at most max_rules non-perm
// rules (max_rules >= 1). Grown from an axiom by axiom-extension tensors
// (~40%), parr (~20%), tensor-joins (~20%) and &/+ introductions (~20%),
// with random permutations interleaved.
ProofPtr random_proof(unsigned seed, int max_rules);

// ------------------------------------------------------------ transposition

// Interchanges two adjacent &-rule layers: the node at `path` must be a
// with whose premises are (perm-wrapped) withs acting on a common context
// position. The four grandchild premises are recombined under the opposite
// nesting order; the conclusion is unchanged. The result is
// perm-normalized (nested perms composed, identity perms dropped), so
// transposing the transposed node undoes the transformation exactly on
// perm-normal proofs.
struct TransposeResult {
  ProofPtr proof;     // null on failure
  std::string path;   // path of the transposed &-rule within the result
  std::string error;  // non-empty iff not transposable at `path`
};
TransposeResult transpose_adjacent_withs(const ProofPtr& p, std::string_view path);

// Compose nested perm rules and drop identity perms everywhere. `tracked`
// (optional) is a node path rewritten to address the same residual node.
ProofPtr normalize_perms(const ProofPtr& p, std::string* tracked = nullptr);

}  // namespace mall
