// P-time translations from proofs to the three net formalisms.
#pragma once

#include "mallnet/circuit.hpp"
#include "mallnet/linking.hpp"
#include "mallnet/proof.hpp"
#include "mallnet/slice_net.hpp"

namespace mall {

// Conflict linking: one link per axiom rule (ids "l0", "l1", ... in
// leftmost-innermost order); tensor composes link spaces by product, with
// by sum — two links conflict iff they come from opposite branches above a
// with-rule. Pre: check_proof(p) succeeds.
Linking to_conflict_net(const ProofPtr& p);

// Boxless circuit per the inductive cases: axiom node for ax; perm reorders
// exits; par/plus nodes consume the last exit(s); tensor joins two circuits;
// with joins them through a with-node plus one contraction per context
// formula. Pre: check_proof(p) succeeds.
Circuit to_circuit(const ProofPtr& p);

// Slices of the conflict net, packaged as a linking-set on the conclusion.
// May be exponentially larger than the conflict net. Pre: check_proof(p).
LinkingSet to_slice_net(const ProofPtr& p);

}  // namespace mall
