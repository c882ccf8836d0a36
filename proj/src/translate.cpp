#include "mallnet/translate.hpp"

#include <algorithm>
#include <stdexcept>

namespace mall {

// ------------------------------------------------------------ conflict nets

namespace {

// Applies a 1-based leaf reindexing to every link.
void remap_links(Linking& l, const std::vector<int>& leaf_map) {
  for (auto& lk : l.links) {
    lk[0] = leaf_map[lk[0]];
    lk[1] = leaf_map[lk[1]];
  }
}

// Appends `b`'s links to `a` with cross conflicts set to `cross_conflict`
// (true = additive sum, false = multiplicative product).
void combine(Linking& a, const Linking& b, bool cross_conflict) {
  int n = a.link_count(), m = b.link_count();
  std::vector<std::vector<bool>> conflict(n + m, std::vector<bool>(n + m, cross_conflict));
  for (int i = 0; i < n + m; ++i) conflict[i][i] = false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) conflict[i][j] = a.conflict[i][j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) conflict[n + i][n + j] = b.conflict[i][j];
  a.links.insert(a.links.end(), b.links.begin(), b.links.end());
  a.conflict = std::move(conflict);
}

Linking tcn(const ProofPtr& p) {
  const Sequent& concl = conclusion(p);
  switch (p->rule) {
    case Rule::Ax: {
      Linking l;
      l.sequent = concl;
      l.links.push_back({1, 2});
      l.conflict.assign(1, std::vector<bool>(1, false));
      return l;
    }
    case Rule::Perm: {
      Linking l = tcn(p->sub0);
      const Sequent& prem = conclusion(p->sub0);
      std::vector<int> leaf_map(prem.leaf_count() + 1, 0);
      for (int i = 0; i < concl.size(); ++i) {
        int pi = p->perm[i] - 1;  // premise formula landing at position i
        int from = prem.leaf_begin(pi), to = concl.leaf_begin(i);
        for (int off = 0; off < leaf_count(prem.formulas[pi]); ++off)
          leaf_map[from + off] = to + off;
      }
      remap_links(l, leaf_map);
      l.sequent = concl;
      return l;
    }
    case Rule::Parr:
    case Rule::Plus1: {
      // Leaf ids are unchanged (parr fuses adjacent blocks; plus1 appends
      // the absent right summand after every premise leaf).
      Linking l = tcn(p->sub0);
      l.sequent = concl;
      return l;
    }
    case Rule::Plus2: {
      Linking l = tcn(p->sub0);
      const Sequent& prem = conclusion(p->sub0);
      int shift = leaf_count(p->other);  // inserted left summand
      int block = prem.leaf_begin(prem.size() - 1);
      std::vector<int> leaf_map(prem.leaf_count() + 1, 0);
      for (int x = 1; x <= prem.leaf_count(); ++x)
        leaf_map[x] = x < block ? x : x + shift;
      remap_links(l, leaf_map);
      l.sequent = concl;
      return l;
    }
    case Rule::Tensor: {
      Linking l = tcn(p->sub0);
      Linking r = tcn(p->sub1);
      int n0 = conclusion(p->sub0).leaf_count();
      std::vector<int> leaf_map(conclusion(p->sub1).leaf_count() + 1, 0);
      for (size_t x = 1; x < leaf_map.size(); ++x)
        leaf_map[x] = static_cast<int>(x) + n0;
      remap_links(r, leaf_map);
      combine(l, r, /*cross_conflict=*/false);
      l.sequent = concl;
      return l;
    }
    case Rule::With: {
      Linking l = tcn(p->sub0);
      Linking r = tcn(p->sub1);
      const Sequent& prem1 = conclusion(p->sub1);
      // Context leaves keep their ids; the right branch's active formula
      // shifts past the left summand.
      int block = prem1.leaf_begin(prem1.size() - 1);
      int shift = leaf_count(conclusion(p->sub0).formulas.back());
      std::vector<int> leaf_map(prem1.leaf_count() + 1, 0);
      for (int x = 1; x <= prem1.leaf_count(); ++x)
        leaf_map[x] = x < block ? x : x + shift;
      remap_links(r, leaf_map);
      combine(l, r, /*cross_conflict=*/true);
      l.sequent = concl;
      return l;
    }
  }
  throw std::logic_error("bad rule");
}

}  // namespace

Linking to_conflict_net(const ProofPtr& p) {
  Linking l = tcn(p);
  l.link_names.resize(l.links.size());
  for (size_t i = 0; i < l.links.size(); ++i)
    l.link_names[i] = "l" + std::to_string(i);
  return l;
}

// ---------------------------------------------------------------- circuits

namespace {

struct CircuitBuilder {
  Circuit c;

  int add_node(NodeKind k) {
    int id = c.next_node_id++;
    c.nodes.push_back({id, k});
    return id;
  }
  int add_wire(FormulaPtr f, int source, int target = -1, int side = -1) {
    int id = c.next_wire_id++;
    c.wires.push_back({id, std::move(f), source, target, side});
    return id;
  }
  Wire& wire(int id) {
    for (auto& w : c.wires)
      if (w.id == id) return w;
    throw std::logic_error("unknown wire");
  }
  void retarget(int wire_id, int node, int side) {
    Wire& w = wire(wire_id);
    w.target = node;
    w.side = side;
  }

  // Returns the exit wire ids in conclusion order.
  std::vector<int> build(const ProofPtr& p) {
    const Sequent& concl = conclusion(p);
    switch (p->rule) {
      case Rule::Ax: {
        int n = add_node(NodeKind::Axiom);
        int w0 = add_wire(concl.formulas[0], n);
        int w1 = add_wire(concl.formulas[1], n);
        return {w0, w1};
      }
      case Rule::Perm: {
        auto e = build(p->sub0);
        std::vector<int> out(e.size());
        for (size_t i = 0; i < e.size(); ++i) out[i] = e[p->perm[i] - 1];
        return out;
      }
      case Rule::Parr: {
        auto e = build(p->sub0);
        int n = add_node(NodeKind::ParNode);
        retarget(e[e.size() - 2], n, 0);
        retarget(e[e.size() - 1], n, 1);
        int w = add_wire(concl.formulas.back(), n);
        e.resize(e.size() - 2);
        e.push_back(w);
        return e;
      }
      case Rule::Plus1:
      case Rule::Plus2: {
        auto e = build(p->sub0);
        int n = add_node(p->rule == Rule::Plus1 ? NodeKind::PlusLeft
                                                : NodeKind::PlusRight);
        retarget(e.back(), n, -1);
        int w = add_wire(concl.formulas.back(), n);
        e.back() = w;
        return e;
      }
      case Rule::Tensor: {
        auto e0 = build(p->sub0);
        auto e1 = build(p->sub1);
        int n = add_node(NodeKind::TensorNode);
        retarget(e0.back(), n, 0);
        retarget(e1.front(), n, 1);
        int fi = static_cast<int>(e0.size()) - 1;
        int w = add_wire(concl.formulas[fi], n);
        std::vector<int> out(e0.begin(), e0.end() - 1);
        out.push_back(w);
        out.insert(out.end(), e1.begin() + 1, e1.end());
        return out;
      }
      case Rule::With: {
        auto e0 = build(p->sub0);
        auto e1 = build(p->sub1);
        int n = add_node(NodeKind::WithNode);
        retarget(e0.back(), n, 0);
        retarget(e1.back(), n, 1);
        int w = add_wire(concl.formulas.back(), n);
        std::vector<int> out;
        for (size_t j = 0; j + 1 < e0.size(); ++j) {
          int cj = add_node(NodeKind::Contraction);
          retarget(e0[j], cj, -1);
          retarget(e1[j], cj, -1);
          out.push_back(add_wire(concl.formulas[j], cj));
        }
        out.push_back(w);
        return out;
      }
    }
    throw std::logic_error("bad rule");
  }
};

}  // namespace

Circuit to_circuit(const ProofPtr& p) {
  conclusion(p);  // validates
  CircuitBuilder b;
  b.c.exits = b.build(p);
  return std::move(b.c);
}

// --------------------------------------------------------------- slice nets

LinkingSet to_slice_net(const ProofPtr& p) {
  Linking net = to_conflict_net(p);
  LinkingSet ls;
  ls.sequent = net.sequent;
  for (const auto& slice : slices(net)) {
    SliceLinking m;
    for (const auto& lk : slice.links)
      m.links.push_back({std::min(lk[0], lk[1]), std::max(lk[0], lk[1])});
    ls.members.push_back(std::move(m));
  }
  canonicalize(ls);
  return ls;
}

}  // namespace mall
