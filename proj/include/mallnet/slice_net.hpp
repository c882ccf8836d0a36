// Slice nets: sets of conflict-free (clique) linkings on a sequent, with
// the linking-set erasure rewrite whose tensor case carries the counting
// side condition n = n0 * n1.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "mallnet/formula.hpp"
#include "mallnet/proof.hpp"

namespace mall {

// One member linking: a partial matching of dual leaf pairs (cliques have
// no conflicts, hence no overlaps). Pairs are kept sorted.
struct SliceLinking {
  std::vector<std::array<int, 2>> links;  // each {min, max}, 1-based leaves
};

struct LinkingSet {
  Sequent sequent;
  std::vector<SliceLinking> members;

  int member_count() const { return static_cast<int>(members.size()); }
};

// Sorts links within members, then sorts and deduplicates members
// (set semantics).
void canonicalize(LinkingSet& ls);

struct LinkingSetReport {
  bool ok = true;
  std::string reason;
};

// Members are non-empty partial matchings of dual pairs in leaf range.
LinkingSetReport validate_linking_set(const LinkingSet& ls);

// G(Lambda, Gamma): the sequent forest plus every link of every member as
// a leaf-leaf edge. Connected means non-empty and G connected.
bool is_connected_ls(const LinkingSet& ls);

// Ready roots as (formula index, connective): par/with always; plus iff
// exactly one side is touched across all members; tensor iff deleting the
// root splits G into two components and member counts satisfy n = n0 * n1.
// Pre: is_connected_ls(ls).
std::vector<std::pair<int, Conn>> ready_roots_ls(const LinkingSet& ls);

// Results of erasing a ready root (1 set for par/plus, 2 for tensor/with).
// Throws std::invalid_argument if not ready; a with-erase encountering a
// member touching both sides of the root (or neither) cannot be split into
// the two premise sets and reports via the Error flag below instead.
struct EraseLsResult {
  bool error = false;  // malformed split (cannot arise from genuine nets)
  std::vector<LinkingSet> parts;
};
EraseLsResult erase_root_ls(const LinkingSet& ls, int root);

// Cluster machinery, mirroring conflict-net erasure.
struct LsCluster {
  bool error = false;
  std::vector<LinkingSet> members;  // canonical order, deduplicated
};

struct LsTraceStep {
  int index = 0;
  enum class Kind { Erase, Axiom, Error } kind = Kind::Erase;
  Conn conn = Conn::Tensor;  // Erase only
  int formula = 0;           // 1-based formula index, Erase only
};

LsCluster make_ls_cluster(std::vector<LinkingSet> members);
bool ls_cluster_equal(const LsCluster& a, const LsCluster& b);

// All one-step successors (empty iff normal).
std::vector<LsCluster> step_ls(const LsCluster& c);

struct LsNormalizeResult {
  LsCluster normal_form;
  std::vector<LsTraceStep> trace;
};

// Deterministic normalization under the step budget (0 = the default bound
// (l+l^2)*g). Exceeding the budget throws std::runtime_error.
LsNormalizeResult normalize_ls(const LsCluster& c, long long budget = 0);

bool is_slice_net(const LinkingSet& ls);

// Proof extraction; requires is_slice_net(ls).
struct LsSequentializeResult {
  ProofPtr proof;
  std::string error;
};
LsSequentializeResult sequentialize_slice_net(const LinkingSet& ls);

// Canonical text key (sequent + sorted members) for set semantics and
// equality up to nothing — members are plain leaf-pair sets.
std::string canonical_key(const LinkingSet& ls);
bool equal_linking_sets(const LinkingSet& a, const LinkingSet& b);

}  // namespace mall
