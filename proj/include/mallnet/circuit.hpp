// Circuits (boxless nets): node/wire graphs with axiom, contraction,
// binary (tensor/par/with) and plus nodes, exits linearly ordered into a
// conclusion sequent, and the erasure rewrite on sets of circuits.
//
// A node is final when it sources an exit wire; a final node is ready per
// its kind's side condition; erasing a ready node deletes it (for a with:
// together with all other final nodes, which must be contractions) and
// promotes the resulting connected components, each freed incoming wire
// becoming an exit in the slot of the exit wire it replaces.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mallnet/formula.hpp"
#include "mallnet/proof.hpp"

namespace mall {

enum class NodeKind {
  Axiom,
  Contraction,
  TensorNode,
  ParNode,
  WithNode,
  PlusLeft,
  PlusRight,
};

std::string node_kind_name(NodeKind k);  // "axiom", "tensor", "plus-left", ...
std::optional<NodeKind> node_kind_from(const std::string& name);

struct CircuitNode {
  int id = 0;
  NodeKind kind = NodeKind::Axiom;
};

struct Wire {
  int id = 0;
  FormulaPtr formula;
  int source = 0;   // node id
  int target = -1;  // node id, or -1 = exit
  int side = -1;    // 0 = left, 1 = right incoming at a binary node; else -1
};

struct Circuit {
  std::vector<CircuitNode> nodes;
  std::vector<Wire> wires;
  std::vector<int> exits;  // wire ids, conclusion order
  int next_node_id = 0;    // id generators (erasure only ever deletes)
  int next_wire_id = 0;

  const CircuitNode* node(int id) const;
  const Wire* wire(int id) const;
  std::vector<int> incoming(int node_id) const;  // wire ids, left before right
  std::vector<int> outgoing(int node_id) const;
};

struct CircuitReport {
  std::optional<Sequent> conclusion;  // set iff structurally valid
  std::string error;
  bool ok() const { return conclusion.has_value(); }
};

// Checks all structural invariants (arity, wire typing, dual axiom labels,
// connectedness, source != target, exit list exactness) and returns the
// conclusion read off the ordered exits.
CircuitReport validate_circuit(const Circuit& x);

// Node ids of ready final nodes, ascending. Pre: validate_circuit(x).
std::vector<int> ready_nodes(const Circuit& x);

// Components resulting from erasing a ready node (0 for axiom, 1 for
// par/plus, 2 for tensor/with). Throws std::invalid_argument if not ready.
std::vector<Circuit> erase_node(const Circuit& x, int node_id);

struct CircuitTraceStep {
  int index = 0;           // 1-based
  NodeKind kind;
  int node_id = 0;
};

struct CircuitNormalizeResult {
  std::vector<Circuit> normal_form;  // empty = accepted
  std::vector<CircuitTraceStep> trace;
};

// Deterministic normalization (smallest node id first). The normal form is
// unique by the diamond property; a trace reaching the empty set has
// exactly (#non-contraction nodes) steps.
CircuitNormalizeResult normalize_circuits(std::vector<Circuit> s);

// Erasable and structurally valid.
bool is_boxless_net(const Circuit& x);

// Proof extraction; requires is_boxless_net(x).
struct CircuitSequentializeResult {
  ProofPtr proof;
  std::string error;  // non-empty iff not a boxless net
};
CircuitSequentializeResult sequentialize_circuit(const Circuit& x);

// Isomorphism anchored at the ordered exits (kinds, wire formulas and
// left/right sides must correspond; contraction inputs may swap).
bool circuits_isomorphic(const Circuit& a, const Circuit& b);

}  // namespace mall
