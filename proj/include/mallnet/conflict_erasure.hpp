// Erasure on clusters of slicings: the correctness criterion for conflict
// nets. A cluster is a set of slicings or the error symbol; ready sequent
// roots are erased one at a time, axiom-shaped slicings are removed, and a
// disconnected member sends the whole cluster to the error state. A
// slicing is a conflict net iff its singleton cluster normalizes to the
// empty set.
#pragma once

#include <string>
#include <vector>

#include "mallnet/linking.hpp"
#include "mallnet/proof.hpp"

namespace mall {

// Restrictions of l to the adjacency components of its link space.
// The empty linking has no pieces.
std::vector<Linking> pieces(const Linking& l);

struct TouchFlags {
  bool left = false;   // some image leaf lies in the root's left subformula
  bool right = false;
  bool unary() const { return left != right; }
};

// Pre: formula `root` (0-based index) of l.sequent is additive (& or +).
TouchFlags touches_chooses(const Linking& l, int root);

// True iff the conflict graph (sequent forest + attachment edges +
// conflict edges) is connected and l is non-empty.
bool is_connected(const Linking& l);

// Ready roots as (formula index, connective). Par: always. Plus: unary
// under l. Tensor: deleting the root vertex leaves exactly two components.
// With: unary under every piece. Pre: is_connected(l).
std::vector<std::pair<int, Conn>> ready_roots(const Linking& l);

// Slicings resulting from erasing a ready root (1 for par/plus, 2 for
// tensor/with; a with side may come out empty). Throws
// std::invalid_argument if the root is not ready.
std::vector<Linking> erase_root(const Linking& l, int root);

// ----------------------------------------------------------------- clusters

struct Cluster {
  bool error = false;
  std::vector<Linking> members;  // sorted by canonical key, deduplicated
};

Cluster make_cluster(std::vector<Linking> members);
bool cluster_equal(const Cluster& a, const Cluster& b);

// Axiom-shaped: a single link on a sequent of exactly two dual literals.
bool is_axiom_shape(const Linking& l);

// All one-step successors. A disconnected member makes {Error} the only
// successor; otherwise axiom removals and root erasures apply per member.
// Empty result iff c is normal.
std::vector<Cluster> step(const Cluster& c);

struct TraceStep {
  int index = 0;  // 1-based
  enum class Kind { Erase, Axiom, Error } kind = Kind::Erase;
  Conn conn = Conn::Tensor;  // Erase only
  int formula = 0;           // 1-based formula index, Erase only
  std::string vertex;        // vertex path of the erased root ("/" = root)
  std::string link;          // Axiom only: removed link's name
};

std::string render(const TraceStep& t);       // trace line format
std::string render_json(const TraceStep& t);  // one JSON object per step

struct NormalizeResult {
  Cluster normal_form;  // empty members + !error = accepted
  std::vector<TraceStep> trace;
};

// Deterministic normalization: members in canonical order; per member the
// axiom case fires first, then the best ready root by connective priority
// par > plus > with > tensor, ties by smallest formula index.
// Erase/axiom steps are counted against `budget` (0 = the default bound
// (l+l^2)*g from the initial cluster); the terminal error step is
// exempt. Exceeding the budget throws std::runtime_error (internal
// invariant failure — the bound is part of the contract).
NormalizeResult normalize(const Cluster& c, long long budget = 0);

// Guaranteed step bound for a cluster: (total links + total links^2) * max
// sequent vertex count.
long long step_budget(const Cluster& c);

// is_slicing and erasable.
bool is_conflict_net(const Linking& l);

struct SequentializeResult {
  ProofPtr proof;
  std::string error;  // non-empty iff l is not a conflict net
};

// Proof extraction by replaying erasure; the proof's translation equals l
// up to link bijection.
SequentializeResult sequentialize(const Linking& l);

}  // namespace mall
