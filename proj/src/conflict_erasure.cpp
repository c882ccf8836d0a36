#include "mallnet/conflict_erasure.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace mall {

namespace {

// ----------------------------------------------------------- the # graph
//
// Vertices: every vertex of every formula tree (preorder, formulas in
// order), then one vertex per link. Edges: tree parent-child, link
// conflicts, and attachments (link to each of its two leaves).

struct ConflictGraph {
  int vertex_count = 0;
  std::vector<std::vector<int>> adj;
  std::vector<int> formula_root;  // vertex of formula fi's root
  std::vector<int> leaf_vertex;   // 1-based leaf id -> vertex
  std::vector<int> link_vertex;   // link index -> vertex

  // Children of a formula's root vertex (the root is compound; the left
  // subtree's vertices immediately follow the root in preorder).
  std::pair<int, int> root_children(const Sequent& s, int fi) const {
    int r = formula_root[fi];
    return {r + 1, r + 1 + mall::vertex_count(s.formulas[fi]->left)};
  }
};

void index_formula(const FormulaPtr& f, int& next_vertex, int& next_leaf,
                   int parent, ConflictGraph& g) {
  int v = next_vertex++;
  if (parent >= 0) {
    g.adj[parent].push_back(v);
    g.adj[v].push_back(parent);
  }
  if (f->is_leaf()) {
    g.leaf_vertex[next_leaf++] = v;
  } else {
    index_formula(f->left, next_vertex, next_leaf, v, g);
    index_formula(f->right, next_vertex, next_leaf, v, g);
  }
}

ConflictGraph build_graph(const Linking& l) {
  ConflictGraph g;
  int total = 0;
  for (const auto& f : l.sequent.formulas) total += vertex_count(f);
  g.vertex_count = total + l.link_count();
  g.adj.assign(g.vertex_count, {});
  g.leaf_vertex.assign(l.sequent.leaf_count() + 1, -1);
  int next_vertex = 0, next_leaf = 1;
  for (int fi = 0; fi < l.sequent.size(); ++fi) {
    g.formula_root.push_back(next_vertex);
    index_formula(l.sequent.formulas[fi], next_vertex, next_leaf, -1, g);
  }
  for (int k = 0; k < l.link_count(); ++k) {
    int v = total + k;
    g.link_vertex.push_back(v);
    for (int leaf : l.links[k]) {
      g.adj[v].push_back(g.leaf_vertex[leaf]);
      g.adj[g.leaf_vertex[leaf]].push_back(v);
    }
  }
  for (int i = 0; i < l.link_count(); ++i)
    for (int j = i + 1; j < l.link_count(); ++j)
      if (l.conflict[i][j]) {
        g.adj[g.link_vertex[i]].push_back(g.link_vertex[j]);
        g.adj[g.link_vertex[j]].push_back(g.link_vertex[i]);
      }
  return g;
}

// Component id per vertex when `removed` (or -1) is deleted; returns count.
int components(const ConflictGraph& g, int removed, std::vector<int>& comp) {
  comp.assign(g.vertex_count, -1);
  int n = 0;
  for (int s = 0; s < g.vertex_count; ++s) {
    if (s == removed || comp[s] >= 0) continue;
    comp[s] = n;
    std::vector<int> stack{s};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : g.adj[v]) {
        if (w == removed || comp[w] >= 0) continue;
        comp[w] = n;
        stack.push_back(w);
      }
    }
    ++n;
  }
  return n;
}

// --------------------------------------------------------------- erasing

// Linking on a subsequent: formulas listed by original index (ascending,
// including `root`, whose subformula `side` replaces it), links restricted
// to `link_idxs` with leaves renumbered.
Linking build_part(const Linking& l, int root, int side,
                   const std::vector<int>& kept_formulas,
                   const std::vector<int>& link_idxs) {
  const FormulaPtr& f = l.sequent.formulas[root];
  FormulaPtr child = side == 0 ? f->left : f->right;
  Linking part = restrict_links(l, link_idxs);
  std::vector<int> leaf_map(l.sequent.leaf_count() + 1, 0);
  Sequent ns;
  int next = 1;
  for (int fi : kept_formulas) {
    int begin = l.sequent.leaf_begin(fi);
    if (fi == root) {
      ns.formulas.push_back(child);
      int offset = side == 0 ? 0 : leaf_count(f->left);
      for (int off = 0; off < leaf_count(child); ++off)
        leaf_map[begin + offset + off] = next++;
    } else {
      ns.formulas.push_back(l.sequent.formulas[fi]);
      for (int off = 0; off < leaf_count(l.sequent.formulas[fi]); ++off)
        leaf_map[begin + off] = next++;
    }
  }
  part.sequent = std::move(ns);
  for (auto& lk : part.links) {
    lk[0] = leaf_map[lk[0]];
    lk[1] = leaf_map[lk[1]];
    if (lk[0] == 0 || lk[1] == 0)
      throw std::logic_error("erased a touched leaf");
  }
  return part;
}

std::vector<int> all_indices(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

// Full description of one root erasure, shared by erase_root and
// sequentialize (which needs to know where each formula went).
struct EraseDetail {
  std::vector<Linking> parts;
  std::vector<std::vector<int>> part_formulas;  // original formula indices
  int plus_side = -1;                           // chosen side, + only
};

EraseDetail erase_detail(const Linking& l, int root) {
  auto ready = ready_roots(l);
  bool ok = false;
  for (auto& [fi, c] : ready) ok = ok || fi == root;
  if (!ok) throw std::invalid_argument("root is not ready");

  const FormulaPtr& f = l.sequent.formulas[root];
  EraseDetail d;
  int n = l.sequent.size();
  switch (f->conn) {
    case Conn::Par: {
      // Replace the root formula by its two children; leaf ids and links
      // are untouched.
      Linking part = l;
      part.sequent.formulas[root] = f->left;
      part.sequent.formulas.insert(part.sequent.formulas.begin() + root + 1,
                                   f->right);
      d.parts.push_back(std::move(part));
      auto ids = all_indices(n);
      d.part_formulas.push_back(ids);
      break;
    }
    case Conn::Plus: {
      TouchFlags t = touches_chooses(l, root);
      d.plus_side = t.left ? 0 : 1;
      d.parts.push_back(build_part(l, root, d.plus_side, all_indices(n),
                                   all_indices(l.link_count())));
      d.part_formulas.push_back(all_indices(n));
      break;
    }
    case Conn::Tensor: {
      ConflictGraph g = build_graph(l);
      std::vector<int> comp;
      components(g, g.formula_root[root], comp);
      auto [left_v, right_v] = g.root_children(l.sequent, root);
      for (int side = 0; side < 2; ++side) {
        int home = comp[side == 0 ? left_v : right_v];
        std::vector<int> formulas, links;
        for (int fi = 0; fi < n; ++fi)
          if (fi == root || comp[g.formula_root[fi]] == home)
            formulas.push_back(fi);
        for (int k = 0; k < l.link_count(); ++k)
          if (comp[g.link_vertex[k]] == home) links.push_back(k);
        d.parts.push_back(build_part(l, root, side, formulas, links));
        d.part_formulas.push_back(std::move(formulas));
      }
      break;
    }
    case Conn::With: {
      // Partition links by the side their piece chooses (readiness
      // guarantees every piece is unary under this root).
      std::vector<std::vector<int>> side_links(2);
      CoherenceSpace ls = link_space(l);
      for (const auto& piece_links : adjacency_components(ls)) {
        TouchFlags t = touches_chooses(restrict_links(l, piece_links), root);
        auto& bucket = side_links[t.left ? 0 : 1];
        bucket.insert(bucket.end(), piece_links.begin(), piece_links.end());
      }
      for (auto& bucket : side_links) std::sort(bucket.begin(), bucket.end());
      for (int side = 0; side < 2; ++side)
        d.parts.push_back(
            build_part(l, root, side, all_indices(n), side_links[side]));
      d.part_formulas.assign(2, all_indices(n));
      break;
    }
  }
  return d;
}

}  // namespace

// ------------------------------------------------------------ public ops

std::vector<Linking> pieces(const Linking& l) {
  CoherenceSpace ls = link_space(l);
  std::vector<Linking> out;
  for (const auto& component : adjacency_components(ls))
    out.push_back(restrict_links(l, component));
  return out;
}

TouchFlags touches_chooses(const Linking& l, int root) {
  const FormulaPtr& f = l.sequent.formulas[root];
  int b = l.sequent.leaf_begin(root);
  int mid = b + leaf_count(f->left);
  int end = l.sequent.leaf_end(root);
  TouchFlags t;
  for (int leaf : image_leaves(l)) {
    if (leaf >= b && leaf < mid) t.left = true;
    if (leaf >= mid && leaf < end) t.right = true;
  }
  return t;
}

bool is_connected(const Linking& l) {
  if (l.links.empty()) return false;
  ConflictGraph g = build_graph(l);
  std::vector<int> comp;
  return components(g, -1, comp) == 1;
}

std::vector<std::pair<int, Conn>> ready_roots(const Linking& l) {
  std::vector<std::pair<int, Conn>> out;
  std::vector<Linking> ps;  // computed lazily, only if a & root exists
  bool have_pieces = false;
  for (int fi = 0; fi < l.sequent.size(); ++fi) {
    const FormulaPtr& f = l.sequent.formulas[fi];
    if (f->is_leaf()) continue;
    bool ready = false;
    switch (f->conn) {
      case Conn::Par:
        ready = true;
        break;
      case Conn::Plus:
        ready = touches_chooses(l, fi).unary();
        break;
      case Conn::Tensor: {
        ConflictGraph g = build_graph(l);
        std::vector<int> comp;
        ready = components(g, g.formula_root[fi], comp) == 2;
        break;
      }
      case Conn::With: {
        if (!have_pieces) {
          ps = pieces(l);
          have_pieces = true;
        }
        ready = true;
        for (const auto& piece : ps)
          ready = ready && touches_chooses(piece, fi).unary();
        break;
      }
    }
    if (ready) out.emplace_back(fi, f->conn);
  }
  return out;
}

std::vector<Linking> erase_root(const Linking& l, int root) {
  return erase_detail(l, root).parts;
}

// ---------------------------------------------------------------- clusters

Cluster make_cluster(std::vector<Linking> members) {
  Cluster c;
  std::map<std::string, Linking> by_key;
  for (auto& m : members) by_key.emplace(canonical_key(m), std::move(m));
  for (auto& [key, m] : by_key) c.members.push_back(std::move(m));
  return c;
}

bool cluster_equal(const Cluster& a, const Cluster& b) {
  if (a.error != b.error) return false;
  if (a.error) return true;
  if (a.members.size() != b.members.size()) return false;
  for (size_t i = 0; i < a.members.size(); ++i)
    if (canonical_key(a.members[i]) != canonical_key(b.members[i]))
      return false;
  return true;
}

bool is_axiom_shape(const Linking& l) {
  if (l.sequent.size() != 2 || l.link_count() != 1) return false;
  const FormulaPtr& a = l.sequent.formulas[0];
  const FormulaPtr& b = l.sequent.formulas[1];
  return a->is_leaf() && b->is_leaf() && dual_pair(a->lit, b->lit);
}

namespace {

Cluster without_member(const Cluster& c, size_t drop) {
  Cluster out;
  for (size_t i = 0; i < c.members.size(); ++i)
    if (i != drop) out.members.push_back(c.members[i]);
  return out;
}

Cluster replace_member(const Cluster& c, size_t drop,
                       const std::vector<Linking>& parts) {
  std::vector<Linking> members;
  for (size_t i = 0; i < c.members.size(); ++i)
    if (i != drop) members.push_back(c.members[i]);
  for (const auto& p : parts) members.push_back(p);
  return make_cluster(std::move(members));
}

}  // namespace

std::vector<Cluster> step(const Cluster& c) {
  if (c.error) return {};
  for (const auto& m : c.members)
    if (!is_connected(m)) {
      Cluster e;
      e.error = true;
      return {e};
    }
  std::vector<Cluster> out;
  for (size_t i = 0; i < c.members.size(); ++i) {
    if (is_axiom_shape(c.members[i])) {
      out.push_back(without_member(c, i));
      continue;
    }
    for (auto& [root, conn] : ready_roots(c.members[i]))
      out.push_back(replace_member(c, i, erase_root(c.members[i], root)));
  }
  return out;
}

// ------------------------------------------------------------------ traces

std::string render(const TraceStep& t) {
  std::string s = "step " + std::to_string(t.index) + ": ";
  switch (t.kind) {
    case TraceStep::Kind::Erase:
      s += "erase " + std::string(conn_name(t.conn)) + " root at formula " +
           std::to_string(t.formula) + ", vertex " + t.vertex;
      break;
    case TraceStep::Kind::Axiom:
      s += "axiom " + t.link;
      break;
    case TraceStep::Kind::Error:
      s += "ERROR disconnected";
      break;
  }
  return s;
}

std::string render_json(const TraceStep& t) {
  nlohmann::json j;
  j["step"] = t.index;
  switch (t.kind) {
    case TraceStep::Kind::Erase:
      j["action"] = "erase";
      j["kind"] = conn_name(t.conn);
      j["formula"] = t.formula;
      j["vertex"] = t.vertex;
      break;
    case TraceStep::Kind::Axiom:
      j["action"] = "axiom";
      j["link"] = t.link;
      break;
    case TraceStep::Kind::Error:
      j["action"] = "error";
      j["reason"] = "disconnected";
      break;
  }
  return j.dump();
}

// --------------------------------------------------------- normalization

namespace {

#ifndef NDEBUG
// Termination profile <p, q>: links + conflict edges, and connectives.
std::pair<long long, long long> profile(const Cluster& c) {
  long long p = 0, q = 0;
  for (const auto& m : c.members) {
    p += m.link_count();
    for (int i = 0; i < m.link_count(); ++i)
      for (int j = i + 1; j < m.link_count(); ++j)
        if (m.conflict[i][j]) ++p;
    for (const auto& f : m.sequent.formulas)
      q += vertex_count(f) - leaf_count(f);
  }
  return {p, q};
}
#endif

int ready_priority(Conn c) {
  switch (c) {
    case Conn::Par: return 0;
    case Conn::Plus: return 1;
    case Conn::With: return 2;
    case Conn::Tensor: return 3;
  }
  return 4;
}

}  // namespace

long long step_budget(const Cluster& c) {
  long long links = 0, max_g = 0;
  for (const auto& m : c.members) {
    links += m.link_count();
    long long g = 0;
    for (const auto& f : m.sequent.formulas) g += vertex_count(f);
    max_g = std::max(max_g, g);
  }
  return (links + links * links) * max_g;
}

NormalizeResult normalize(const Cluster& start, long long budget) {
  if (budget <= 0) budget = step_budget(start);
  NormalizeResult res;
  Cluster c = start;
  long long used = 0;
  while (!c.error) {
    bool disconnected = false;
    for (const auto& m : c.members) disconnected = disconnected || !is_connected(m);
    if (disconnected) {
      // Terminal error transition; exempt from the step budget.
      TraceStep t;
      t.index = static_cast<int>(res.trace.size()) + 1;
      t.kind = TraceStep::Kind::Error;
      res.trace.push_back(t);
      c = Cluster{};
      c.error = true;
      break;
    }

    Cluster next;
    TraceStep t;
    t.index = static_cast<int>(res.trace.size()) + 1;
    bool moved = false;
    for (size_t i = 0; i < c.members.size() && !moved; ++i) {
      if (!is_axiom_shape(c.members[i])) continue;
      t.kind = TraceStep::Kind::Axiom;
      t.link = c.members[i].link_names.empty() ? std::string("?")
                                               : c.members[i].link_names[0];
      next = without_member(c, i);
      moved = true;
    }
    for (size_t i = 0; i < c.members.size() && !moved; ++i) {
      auto ready = ready_roots(c.members[i]);
      if (ready.empty()) continue;
      auto best = ready[0];
      for (auto& r : ready)
        if (std::pair(ready_priority(r.second), r.first) <
            std::pair(ready_priority(best.second), best.first))
          best = r;
      t.kind = TraceStep::Kind::Erase;
      t.conn = best.second;
      t.formula = best.first + 1;
      t.vertex = "/";
      next = replace_member(c, i, erase_root(c.members[i], best.first));
      moved = true;
    }
    if (!moved) break;  // normal form (possibly stuck non-empty)

    if (++used > budget)
      throw std::runtime_error(
          "erasure exceeded its step budget (" + std::to_string(budget) +
          "): internal invariant failure");
#ifndef NDEBUG
    {
      // The termination measure <p,q> decreases lexicographically on every
      // step whose results are all connected; a step that yields a
      // disconnected member instead forces the terminal error transition.
      auto before = profile(c), after = profile(next);
      bool decreased = after.first < before.first ||
                       (after.first == before.first &&
                        after.second < before.second);
      bool forced_error = false;
      for (const auto& m : next.members)
        forced_error = forced_error || !is_connected(m);
      if (!decreased && !forced_error)
        throw std::logic_error("erasure profile failed to decrease");
    }
#endif
    res.trace.push_back(t);
    c = std::move(next);
  }
  res.normal_form = std::move(c);
  return res;
}

bool is_conflict_net(const Linking& l) {
  if (!is_slicing(l)) return false;
  NormalizeResult r = normalize(make_cluster({l}));
  return !r.normal_form.error && r.normal_form.members.empty();
}

// --------------------------------------------------------------- proofs

namespace {

// sigma with new[i] = old[sigma(i)], built from 0-based position orders.
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

// Move the formulas at `tail` (0-based positions) to the end, in order.
std::vector<int> move_to_back(int n, const std::vector<int>& tail) {
  std::vector<int> order;
  for (int i = 0; i < n; ++i)
    if (std::find(tail.begin(), tail.end(), i) == tail.end())
      order.push_back(i);
  order.insert(order.end(), tail.begin(), tail.end());
  return order;
}

std::vector<int> iota_order(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

ProofPtr seq_rec(const Linking& l, std::string& error) {
  if (!is_connected(l)) {
    error = "erasure reached a disconnected slicing";
    return nullptr;
  }
  if (is_axiom_shape(l)) {
    const Literal& first = l.sequent.formulas[0]->lit;
    ProofPtr p = ax(first.positive ? first.atom : negate(first).atom);
    if (!first.positive) p = perm({2, 1}, p);
    return p;
  }
  auto ready = ready_roots(l);
  if (ready.empty()) {
    error = "erasure is stuck: no ready root in " + render(l.sequent);
    return nullptr;
  }
  auto best = ready[0];
  for (auto& r : ready)
    if (std::pair(ready_priority(r.second), r.first) <
        std::pair(ready_priority(best.second), best.first))
      best = r;
  int fi = best.first;
  int n = l.sequent.size();
  EraseDetail d = erase_detail(l, fi);
  const FormulaPtr& f = l.sequent.formulas[fi];

  switch (f->conn) {
    case Conn::Par: {
      ProofPtr p = seq_rec(d.parts[0], error);
      if (!p) return nullptr;
      // Premise has A at fi, B at fi+1; bring them to the back, fuse,
      // put the par formula back at fi.
      auto old_order = iota_order(n + 1);
      p = perm_unless_identity(
          perm_images(old_order, move_to_back(n + 1, {fi, fi + 1})), p);
      p = parr(p);
      // Conclusion currently: everything but fi, then the fused formula.
      auto built = move_to_back(n, {fi});
      return perm_unless_identity(perm_images(built, iota_order(n)), p);
    }
    case Conn::Plus: {
      ProofPtr p = seq_rec(d.parts[0], error);
      if (!p) return nullptr;
      auto old_order = iota_order(n);
      p = perm_unless_identity(perm_images(old_order, move_to_back(n, {fi})),
                               p);
      p = d.plus_side == 0 ? plus1(f->right, p) : plus2(f->left, p);
      auto built = move_to_back(n, {fi});
      return perm_unless_identity(perm_images(built, iota_order(n)), p);
    }
    case Conn::Tensor: {
      ProofPtr p0 = seq_rec(d.parts[0], error);
      if (!p0) return nullptr;
      ProofPtr p1 = seq_rec(d.parts[1], error);
      if (!p1) return nullptr;
      // Left premise: its copy of the root formula (now A) goes last.
      const auto& fs0 = d.part_formulas[0];
      const auto& fs1 = d.part_formulas[1];
      int n0 = static_cast<int>(fs0.size());
      int n1 = static_cast<int>(fs1.size());
      int pos0 = static_cast<int>(
          std::find(fs0.begin(), fs0.end(), fi) - fs0.begin());
      int pos1 = static_cast<int>(
          std::find(fs1.begin(), fs1.end(), fi) - fs1.begin());
      p0 = perm_unless_identity(
          perm_images(iota_order(n0), move_to_back(n0, {pos0})), p0);
      // Right premise: B goes first.
      std::vector<int> front{pos1};
      for (int i = 0; i < n1; ++i)
        if (i != pos1) front.push_back(i);
      p1 = perm_unless_identity(perm_images(iota_order(n1), front), p1);
      ProofPtr p = tensor(p0, p1);
      // Built order in original formula indices.
      std::vector<int> built;
      for (int g : fs0)
        if (g != fi) built.push_back(g);
      built.push_back(fi);
      for (int g : fs1)
        if (g != fi) built.push_back(g);
      return perm_unless_identity(perm_images(built, iota_order(n)), p);
    }
    case Conn::With: {
      ProofPtr p0 = seq_rec(d.parts[0], error);
      if (!p0) return nullptr;
      ProofPtr p1 = seq_rec(d.parts[1], error);
      if (!p1) return nullptr;
      auto tail = perm_images(iota_order(n), move_to_back(n, {fi}));
      p0 = perm_unless_identity(tail, p0);
      p1 = perm_unless_identity(tail, p1);
      ProofPtr p = with(p0, p1);
      auto built = move_to_back(n, {fi});
      return perm_unless_identity(perm_images(built, iota_order(n)), p);
    }
  }
  error = "unreachable erasure case";
  return nullptr;
}

}  // namespace

SequentializeResult sequentialize(const Linking& l) {
  SequentializeResult res;
  if (!is_slicing(l)) {
    res.error = "not a slicing";
    return res;
  }
  ProofPtr p = seq_rec(l, res.error);
  if (!p) return res;
  CheckResult check = check_proof(p);
  if (!check.ok() || !equal(*check.conclusion, l.sequent)) {
    res.error = "internal error: extracted proof does not check";
    return res;
  }
  res.proof = p;
  return res;
}

}  // namespace mall
