#include "mallnet/circuit.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace mall {

std::string node_kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Axiom: return "axiom";
    case NodeKind::Contraction: return "contraction";
    case NodeKind::TensorNode: return "tensor";
    case NodeKind::ParNode: return "par";
    case NodeKind::WithNode: return "with";
    case NodeKind::PlusLeft: return "plus-left";
    case NodeKind::PlusRight: return "plus-right";
  }
  throw std::logic_error("bad NodeKind");
}

std::optional<NodeKind> node_kind_from(const std::string& name) {
  for (NodeKind k : {NodeKind::Axiom, NodeKind::Contraction,
                     NodeKind::TensorNode, NodeKind::ParNode,
                     NodeKind::WithNode, NodeKind::PlusLeft,
                     NodeKind::PlusRight})
    if (node_kind_name(k) == name) return k;
  return std::nullopt;
}

const CircuitNode* Circuit::node(int id) const {
  for (const auto& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

const Wire* Circuit::wire(int id) const {
  for (const auto& w : wires)
    if (w.id == id) return &w;
  return nullptr;
}

std::vector<int> Circuit::incoming(int node_id) const {
  std::vector<int> ids;
  for (const auto& w : wires)
    if (w.target == node_id) ids.push_back(w.id);
  std::sort(ids.begin(), ids.end(), [this](int a, int b) {
    const Wire *wa = wire(a), *wb = wire(b);
    if (wa->side != wb->side) return wa->side < wb->side;
    return a < b;
  });
  return ids;
}

std::vector<int> Circuit::outgoing(int node_id) const {
  std::vector<int> ids;
  for (const auto& w : wires)
    if (w.source == node_id) ids.push_back(w.id);
  return ids;
}

// -------------------------------------------------------------- validation

namespace {

bool is_binary(NodeKind k) {
  return k == NodeKind::TensorNode || k == NodeKind::ParNode ||
         k == NodeKind::WithNode;
}

Conn binary_conn(NodeKind k) {
  switch (k) {
    case NodeKind::TensorNode: return Conn::Tensor;
    case NodeKind::ParNode: return Conn::Par;
    case NodeKind::WithNode: return Conn::With;
    default: throw std::logic_error("not a binary node kind");
  }
}

std::string node_desc(const CircuitNode& n) {
  return node_kind_name(n.kind) + " node " + std::to_string(n.id);
}

// Connected components over node ids, `erased` excluded; wires sourced by
// erased nodes do not join anything (they are those nodes' exit wires).
std::map<int, int> node_components(const Circuit& x,
                                   const std::set<int>& erased, int& count) {
  std::map<int, int> comp;
  std::map<int, std::vector<int>> adj;
  for (const auto& n : x.nodes)
    if (!erased.count(n.id)) adj[n.id];
  for (const auto& w : x.wires) {
    if (w.target < 0) continue;
    if (erased.count(w.source) || erased.count(w.target)) continue;
    adj[w.source].push_back(w.target);
    adj[w.target].push_back(w.source);
  }
  count = 0;
  for (auto& [start, neighbours] : adj) {
    if (comp.count(start)) continue;
    int c = count++;
    std::vector<int> stack{start};
    comp[start] = c;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v])
        if (!comp.count(w)) {
          comp[w] = c;
          stack.push_back(w);
        }
    }
  }
  return comp;
}

}  // namespace

CircuitReport validate_circuit(const Circuit& x) {
  CircuitReport r;
  auto fail = [&r](std::string why) {
    r.error = std::move(why);
    return r;
  };

  if (x.nodes.empty()) return fail("a circuit has a non-empty set of nodes");
  std::set<int> node_ids, wire_ids;
  for (const auto& n : x.nodes)
    if (!node_ids.insert(n.id).second)
      return fail("duplicate node id " + std::to_string(n.id));
  for (const auto& w : x.wires) {
    if (!wire_ids.insert(w.id).second)
      return fail("duplicate wire id " + std::to_string(w.id));
    if (!w.formula) return fail("wire " + std::to_string(w.id) + " has no formula");
    if (!node_ids.count(w.source))
      return fail("wire " + std::to_string(w.id) + " has unknown source");
    if (w.target >= 0 && !node_ids.count(w.target))
      return fail("wire " + std::to_string(w.id) + " has unknown target");
    if (w.target == w.source)
      return fail("wire " + std::to_string(w.id) + " loops on its node");
    bool binary_target = w.target >= 0 && is_binary(x.node(w.target)->kind);
    if (binary_target && w.side != 0 && w.side != 1)
      return fail("wire " + std::to_string(w.id) +
                  " into a binary node needs a left/right side");
    if (!binary_target && w.side != -1)
      return fail("wire " + std::to_string(w.id) +
                  " carries a side but its target takes none");
  }

  for (const auto& n : x.nodes) {
    auto in = x.incoming(n.id);
    auto out = x.outgoing(n.id);
    switch (n.kind) {
      case NodeKind::Axiom: {
        if (in.size() != 0 || out.size() != 2)
          return fail(node_desc(n) + " must source exactly two wires");
        const Wire *a = x.wire(out[0]), *b = x.wire(out[1]);
        if (!a->formula->is_leaf() || !b->formula->is_leaf() ||
            !dual_pair(a->formula->lit, b->formula->lit))
          return fail(node_desc(n) + " must be labelled by dual literals");
        break;
      }
      case NodeKind::Contraction: {
        if (in.size() != 2 || out.size() != 1)
          return fail(node_desc(n) + " must target two wires and source one");
        if (!equal(x.wire(in[0])->formula, x.wire(in[1])->formula) ||
            !equal(x.wire(in[0])->formula, x.wire(out[0])->formula))
          return fail(node_desc(n) + " must carry one formula on all three wires");
        break;
      }
      case NodeKind::TensorNode:
      case NodeKind::ParNode:
      case NodeKind::WithNode: {
        if (in.size() != 2 || out.size() != 1)
          return fail(node_desc(n) + " must target two wires and source one");
        const Wire *l = x.wire(in[0]), *rgt = x.wire(in[1]);
        if (l->side != 0 || rgt->side != 1)
          return fail(node_desc(n) + " needs one left and one right incoming wire");
        const FormulaPtr& o = x.wire(out[0])->formula;
        if (o->is_leaf() || o->conn != binary_conn(n.kind) ||
            !equal(o->left, l->formula) || !equal(o->right, rgt->formula))
          return fail(node_desc(n) + " must source the pairing of its inputs");
        break;
      }
      case NodeKind::PlusLeft:
      case NodeKind::PlusRight: {
        if (in.size() != 1 || out.size() != 1)
          return fail(node_desc(n) + " must target one wire and source one");
        const FormulaPtr& o = x.wire(out[0])->formula;
        const FormulaPtr& i = x.wire(in[0])->formula;
        bool left = n.kind == NodeKind::PlusLeft;
        if (o->is_leaf() || o->conn != Conn::Plus ||
            !equal(left ? o->left : o->right, i))
          return fail(node_desc(n) + " must inject its input as the " +
                      (left ? "left" : "right") + " summand");
        break;
      }
    }
  }

  std::vector<int> exit_wires;
  for (const auto& w : x.wires)
    if (w.target < 0) exit_wires.push_back(w.id);
  std::vector<int> listed = x.exits;
  std::sort(exit_wires.begin(), exit_wires.end());
  std::sort(listed.begin(), listed.end());
  if (listed != exit_wires ||
      std::adjacent_find(listed.begin(), listed.end()) != listed.end())
    return fail("the exit order must list each exit wire exactly once");

  int comp_count = 0;
  node_components(x, {}, comp_count);
  if (comp_count != 1) return fail("a circuit must be connected");

  Sequent s;
  for (int e : x.exits) s.formulas.push_back(x.wire(e)->formula);
  r.conclusion = std::move(s);
  return r;
}

// --------------------------------------------------------------- readiness

namespace {

// Node id -> id of the exit wire it sources, for final nodes.
std::map<int, int> final_nodes(const Circuit& x) {
  std::map<int, int> finals;
  for (const auto& w : x.wires)
    if (w.target < 0) finals[w.source] = w.id;
  return finals;
}

bool node_ready(const Circuit& x, const std::map<int, int>& finals, int id) {
  const CircuitNode* n = x.node(id);
  int count = 0;
  switch (n->kind) {
    case NodeKind::Axiom:
      return x.nodes.size() == 1;
    case NodeKind::PlusLeft:
    case NodeKind::PlusRight:
      return true;
    case NodeKind::TensorNode:
      node_components(x, {id}, count);
      return count == 2;
    case NodeKind::ParNode:
      node_components(x, {id}, count);
      return count == 1;
    case NodeKind::WithNode: {
      std::set<int> erased;
      for (auto& [f, e] : finals) {
        if (f != id && x.node(f)->kind != NodeKind::Contraction) return false;
        erased.insert(f);
      }
      std::map<int, int> comp = node_components(x, erased, count);
      if (count != 2) return false;
      for (int f : erased) {
        auto in = x.incoming(f);
        if (comp.at(x.wire(in[0])->source) == comp.at(x.wire(in[1])->source))
          return false;
      }
      return true;
    }
    case NodeKind::Contraction:
      return false;
  }
  return false;
}

}  // namespace

std::vector<int> ready_nodes(const Circuit& x) {
  auto finals = final_nodes(x);
  std::vector<int> out;
  for (auto& [id, exit] : finals)
    if (node_ready(x, finals, id)) out.push_back(id);
  return out;  // map iteration is already ascending
}

// ----------------------------------------------------------------- erasure

std::vector<Circuit> erase_node(const Circuit& x, int node_id) {
  auto ready = ready_nodes(x);
  if (std::find(ready.begin(), ready.end(), node_id) == ready.end())
    throw std::invalid_argument("node is not ready");

  auto finals = final_nodes(x);
  std::set<int> erased{node_id};
  if (x.node(node_id)->kind == NodeKind::WithNode)
    for (auto& [f, e] : finals) erased.insert(f);

  int comp_count = 0;
  std::map<int, int> comp = node_components(x, erased, comp_count);

  std::vector<Circuit> parts(comp_count);
  for (auto& p : parts) {
    p.next_node_id = x.next_node_id;
    p.next_wire_id = x.next_wire_id;
  }
  for (const auto& n : x.nodes)
    if (!erased.count(n.id)) parts[comp[n.id]].nodes.push_back(n);
  for (const auto& w : x.wires) {
    if (erased.count(w.source)) continue;  // a deleted node's exit wire
    Wire copy = w;
    if (w.target >= 0 && erased.count(w.target)) {
      copy.target = -1;  // freed: promoted to an exit
      copy.side = -1;
    }
    parts[comp[w.source]].wires.push_back(copy);
  }

  // Exit order: surviving exits keep their slots; a deleted node's slot is
  // taken by its freed incoming wires (left before right) that landed in
  // the component.
  for (int e : x.exits) {
    const Wire* w = x.wire(e);
    if (!erased.count(w->source)) {
      parts[comp[w->source]].exits.push_back(e);
      continue;
    }
    for (int u : x.incoming(w->source)) {
      int home = comp[x.wire(u)->source];
      parts[home].exits.push_back(u);
    }
  }
  return parts;
}

CircuitNormalizeResult normalize_circuits(std::vector<Circuit> s) {
  CircuitNormalizeResult res;
  while (true) {
    int best_circuit = -1, best_node = -1;
    for (size_t i = 0; i < s.size(); ++i)
      for (int id : ready_nodes(s[i]))
        if (best_node < 0 || id < best_node) {
          best_node = id;
          best_circuit = static_cast<int>(i);
        }
    if (best_node < 0) break;
    CircuitTraceStep t;
    t.index = static_cast<int>(res.trace.size()) + 1;
    t.kind = s[best_circuit].node(best_node)->kind;
    t.node_id = best_node;
    res.trace.push_back(t);
    std::vector<Circuit> parts = erase_node(s[best_circuit], best_node);
    s.erase(s.begin() + best_circuit);
    for (auto& p : parts) s.push_back(std::move(p));
  }
  res.normal_form = std::move(s);
  return res;
}

bool is_boxless_net(const Circuit& x) {
  if (!validate_circuit(x).ok()) return false;
  return normalize_circuits({x}).normal_form.empty();
}

// -------------------------------------------------------- sequentialization

namespace {

// Original conclusion slot of a part's exit wire: either it was already an
// exit of x, or it is a freed incoming whose deleted target's exit wire
// held the slot.
int original_slot(const Circuit& x, const std::map<int, int>& finals,
                  int wire_id) {
  const Wire* w = x.wire(wire_id);
  int representative = w->target < 0 ? wire_id : finals.at(w->target);
  auto it = std::find(x.exits.begin(), x.exits.end(), representative);
  return static_cast<int>(it - x.exits.begin());
}

std::vector<int> perm_images(const std::vector<int>& old_order,
                             const std::vector<int>& new_order) {
  std::vector<int> sigma(new_order.size());
  for (size_t i = 0; i < new_order.size(); ++i) {
    auto it = std::find(old_order.begin(), old_order.end(), new_order[i]);
    sigma[i] = static_cast<int>(it - old_order.begin()) + 1;
  }
  return sigma;
}

ProofPtr perm_unless_identity(std::vector<int> sigma, ProofPtr p) {
  for (size_t i = 0; i < sigma.size(); ++i)
    if (sigma[i] != static_cast<int>(i) + 1) return perm(std::move(sigma), p);
  return p;
}

std::vector<int> iota_order(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

std::vector<int> move_to_back(int n, const std::vector<int>& tail) {
  std::vector<int> order;
  for (int i = 0; i < n; ++i)
    if (std::find(tail.begin(), tail.end(), i) == tail.end())
      order.push_back(i);
  order.insert(order.end(), tail.begin(), tail.end());
  return order;
}

// Proof of a part's conclusion, then a perm placing each exit at the slot
// listed in `slots` relative to the ordering `target` (ascending slots).
ProofPtr restore_order(ProofPtr p, const std::vector<int>& built_slots) {
  std::vector<int> target = built_slots;
  std::sort(target.begin(), target.end());
  return perm_unless_identity(perm_images(built_slots, target), p);
}

ProofPtr seq_circ(const Circuit& x, std::string& error) {
  auto ready = ready_nodes(x);
  if (ready.empty()) {
    error = "erasure is stuck: no ready node";
    return nullptr;
  }
  int id = ready.front();
  const CircuitNode* n = x.node(id);
  auto finals = final_nodes(x);
  int slot = static_cast<int>(
      std::find(x.exits.begin(), x.exits.end(), finals.at(id)) -
      x.exits.begin());
  int total = static_cast<int>(x.exits.size());
  std::vector<Circuit> parts = erase_node(x, id);

  switch (n->kind) {
    case NodeKind::Axiom: {
      const FormulaPtr& first = x.wire(x.exits[0])->formula;
      ProofPtr p = ax(first->lit.atom);
      if (!first->lit.positive) p = perm({2, 1}, p);
      return p;
    }
    case NodeKind::ParNode: {
      ProofPtr p = seq_circ(parts[0], error);
      if (!p) return nullptr;
      p = perm_unless_identity(
          perm_images(iota_order(total + 1),
                      move_to_back(total + 1, {slot, slot + 1})),
          p);
      p = parr(p);
      std::vector<int> built = move_to_back(total, {slot});
      return restore_order(p, built);
    }
    case NodeKind::PlusLeft:
    case NodeKind::PlusRight: {
      ProofPtr p = seq_circ(parts[0], error);
      if (!p) return nullptr;
      p = perm_unless_identity(
          perm_images(iota_order(total), move_to_back(total, {slot})), p);
      const FormulaPtr& out = x.wire(finals.at(id))->formula;
      p = n->kind == NodeKind::PlusLeft ? plus1(out->right, p)
                                        : plus2(out->left, p);
      return restore_order(p, move_to_back(total, {slot}));
    }
    case NodeKind::TensorNode:
    case NodeKind::WithNode: {
      // parts are ordered by smallest node id; identify which holds the
      // left incoming wire.
      auto in = x.incoming(id);
      int left_part = parts[0].wire(in[0]) ? 0 : 1;
      const Circuit& xa = parts[left_part];
      const Circuit& xb = parts[1 - left_part];
      ProofPtr pa = seq_circ(xa, error);
      if (!pa) return nullptr;
      ProofPtr pb = seq_circ(xb, error);
      if (!pb) return nullptr;
      int na = static_cast<int>(xa.exits.size());
      int nb = static_cast<int>(xb.exits.size());
      int pos_a = static_cast<int>(
          std::find(xa.exits.begin(), xa.exits.end(), in[0]) -
          xa.exits.begin());
      int pos_b = static_cast<int>(
          std::find(xb.exits.begin(), xb.exits.end(), in[1]) -
          xb.exits.begin());
      if (n->kind == NodeKind::TensorNode) {
        pa = perm_unless_identity(
            perm_images(iota_order(na), move_to_back(na, {pos_a})), pa);
        std::vector<int> front{pos_b};
        for (int i = 0; i < nb; ++i)
          if (i != pos_b) front.push_back(i);
        pb = perm_unless_identity(perm_images(iota_order(nb), front), pb);
        ProofPtr p = tensor(pa, pb);
        std::vector<int> built;
        for (int e : xa.exits)
          if (e != in[0]) built.push_back(original_slot(x, finals, e));
        built.push_back(slot);
        for (int e : xb.exits)
          if (e != in[1]) built.push_back(original_slot(x, finals, e));
        return restore_order(p, built);
      }
      // With: both parts conclude the full context with one side at `slot`.
      pa = perm_unless_identity(
          perm_images(iota_order(na), move_to_back(na, {pos_a})), pa);
      pb = perm_unless_identity(
          perm_images(iota_order(nb), move_to_back(nb, {pos_b})), pb);
      ProofPtr p = with(pa, pb);
      return restore_order(p, move_to_back(total, {slot}));
    }
    case NodeKind::Contraction:
      break;
  }
  error = "unreachable erasure case";
  return nullptr;
}

}  // namespace

CircuitSequentializeResult sequentialize_circuit(const Circuit& x) {
  CircuitSequentializeResult res;
  CircuitReport report = validate_circuit(x);
  if (!report.ok()) {
    res.error = "not a circuit: " + report.error;
    return res;
  }
  ProofPtr p = seq_circ(x, res.error);
  if (!p) return res;
  CheckResult check = check_proof(p);
  if (!check.ok() || !equal(*check.conclusion, *report.conclusion)) {
    res.error = "internal error: extracted proof does not check";
    return res;
  }
  res.proof = p;
  return res;
}

// ------------------------------------------------------------- isomorphism

namespace {

struct Matcher {
  const Circuit* a = nullptr;
  const Circuit* b = nullptr;
  std::map<int, int> node_map;  // a node id -> b node id
  std::map<int, int> wire_map;

  bool match_wire(int wa, int wb, std::vector<std::pair<int, int>>& queue) {
    auto it = wire_map.find(wa);
    if (it != wire_map.end()) return it->second == wb;
    for (auto& [ka, kb] : wire_map)
      if (kb == wb) return false;
    const Wire* pa = a->wire(wa);
    const Wire* pb = b->wire(wb);
    if (!pa || !pb) return false;
    if (!equal(pa->formula, pb->formula)) return false;
    if ((pa->target < 0) != (pb->target < 0)) return false;
    if (pa->side != pb->side) return false;
    wire_map[wa] = wb;
    queue.emplace_back(pa->source, pb->source);
    if (pa->target >= 0) queue.emplace_back(pa->target, pb->target);
    return true;
  }

  bool match_node(int na, int nb) {
    auto it = node_map.find(na);
    if (it != node_map.end()) return it->second == nb;
    for (auto& [ka, kb] : node_map)
      if (kb == nb) return false;
    const CircuitNode* pa = a->node(na);
    const CircuitNode* pb = b->node(nb);
    if (pa->kind != pb->kind) return false;
    node_map[na] = nb;
    return true;
  }

  bool run(std::vector<std::pair<int, int>> node_queue) {
    // Process forced correspondences until a contraction's incoming pair
    // requires a choice; then branch.
    size_t i = 0;
    while (i < node_queue.size()) {
      auto [na, nb] = node_queue[i++];
      if (!match_node(na, nb)) return false;
      auto out_a = a->outgoing(na), out_b = b->outgoing(nb);
      auto in_a = a->incoming(na), in_b = b->incoming(nb);
      if (out_a.size() != out_b.size() || in_a.size() != in_b.size())
        return false;
      const CircuitNode* pa = a->node(na);
      if (pa->kind == NodeKind::Axiom) {
        // Two outgoing wires with distinct (dual) formulas: match by label.
        const Wire* w0 = a->wire(out_a[0]);
        const Wire* b0 = b->wire(out_b[0]);
        bool straight = equal(w0->formula, b0->formula);
        if (!match_wire(out_a[0], straight ? out_b[0] : out_b[1],
                        node_queue) ||
            !match_wire(out_a[1], straight ? out_b[1] : out_b[0],
                        node_queue))
          return false;
        continue;
      }
      for (size_t k = 0; k < out_a.size(); ++k)
        if (!match_wire(out_a[k], out_b[k], node_queue)) return false;
      if (pa->kind == NodeKind::Contraction) {
        // The two incomings carry the same formula: try both pairings.
        Matcher trial = *this;
        std::vector<std::pair<int, int>> q = {node_queue.begin() + i,
                                              node_queue.end()};
        if (trial.match_wire(in_a[0], in_b[0], q) &&
            trial.match_wire(in_a[1], in_b[1], q) && trial.run(q)) {
          *this = trial;
          return true;
        }
        Matcher swapped = *this;
        q = {node_queue.begin() + i, node_queue.end()};
        if (swapped.match_wire(in_a[0], in_b[1], q) &&
            swapped.match_wire(in_a[1], in_b[0], q) && swapped.run(q)) {
          *this = swapped;
          return true;
        }
        return false;
      }
      for (size_t k = 0; k < in_a.size(); ++k)
        if (!match_wire(in_a[k], in_b[k], node_queue)) return false;
    }
    return true;
  }
};

}  // namespace

bool circuits_isomorphic(const Circuit& a, const Circuit& b) {
  if (a.nodes.size() != b.nodes.size() || a.wires.size() != b.wires.size() ||
      a.exits.size() != b.exits.size())
    return false;
  Matcher m{&a, &b, {}, {}};
  std::vector<std::pair<int, int>> queue;
  for (size_t i = 0; i < a.exits.size(); ++i)
    if (!m.match_wire(a.exits[i], b.exits[i], queue)) return false;
  if (!m.run(queue)) return false;
  return m.node_map.size() == a.nodes.size() &&
         m.wire_map.size() == a.wires.size();
}

}  // namespace mall
