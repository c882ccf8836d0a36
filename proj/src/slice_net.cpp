#include "mallnet/slice_net.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace mall {

void canonicalize(LinkingSet& ls) {
  for (auto& m : ls.members) {
    for (auto& lk : m.links)
      if (lk[0] > lk[1]) std::swap(lk[0], lk[1]);
    std::sort(m.links.begin(), m.links.end());
  }
  std::sort(ls.members.begin(), ls.members.end(),
            [](const SliceLinking& a, const SliceLinking& b) {
              return a.links < b.links;
            });
  ls.members.erase(std::unique(ls.members.begin(), ls.members.end(),
                               [](const SliceLinking& a,
                                  const SliceLinking& b) {
                                 return a.links == b.links;
                               }),
                   ls.members.end());
}

LinkingSetReport validate_linking_set(const LinkingSet& ls) {
  LinkingSetReport r;
  auto fail = [&r](std::string why) {
    r.ok = false;
    r.reason = std::move(why);
    return r;
  };
  int n = ls.sequent.leaf_count();
  for (size_t mi = 0; mi < ls.members.size(); ++mi) {
    const auto& m = ls.members[mi];
    if (m.links.empty())
      return fail("linking " + std::to_string(mi + 1) + " is empty");
    std::set<int> used;
    for (const auto& lk : m.links) {
      if (lk[0] < 1 || lk[0] > n || lk[1] < 1 || lk[1] > n)
        return fail("link leaf out of range in linking " +
                    std::to_string(mi + 1));
      if (lk[0] == lk[1])
        return fail("link attaches a leaf to itself in linking " +
                    std::to_string(mi + 1));
      if (!used.insert(lk[0]).second || !used.insert(lk[1]).second)
        return fail("linking " + std::to_string(mi + 1) +
                    " attaches a leaf twice (not a partial matching)");
      if (!dual_pair(ls.sequent.literal_at(lk[0]),
                     ls.sequent.literal_at(lk[1])))
        return fail("link " + std::to_string(lk[0]) + "-" +
                    std::to_string(lk[1]) + " in linking " +
                    std::to_string(mi + 1) + " is not a dual pair");
    }
  }
  return r;
}

// ----------------------------------------------------------------- G graph

namespace {

// Graph on the sequent's vertices; links are leaf-leaf edges.
struct SequentGraph {
  int vertex_count = 0;
  std::vector<std::vector<int>> adj;
  std::vector<int> formula_root;
  std::vector<int> leaf_vertex;  // 1-based

  std::pair<int, int> root_children(const Sequent& s, int fi) const {
    int r = formula_root[fi];
    return {r + 1, r + 1 + mall::vertex_count(s.formulas[fi]->left)};
  }
};

void index_formula(const FormulaPtr& f, int& next_vertex, int& next_leaf,
                   int parent, SequentGraph& g) {
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

SequentGraph build_graph(const LinkingSet& ls) {
  SequentGraph g;
  for (const auto& f : ls.sequent.formulas) g.vertex_count += vertex_count(f);
  g.adj.assign(g.vertex_count, {});
  g.leaf_vertex.assign(ls.sequent.leaf_count() + 1, -1);
  int next_vertex = 0, next_leaf = 1;
  for (int fi = 0; fi < ls.sequent.size(); ++fi) {
    g.formula_root.push_back(next_vertex);
    index_formula(ls.sequent.formulas[fi], next_vertex, next_leaf, -1, g);
  }
  for (const auto& m : ls.members)
    for (const auto& lk : m.links) {
      g.adj[g.leaf_vertex[lk[0]]].push_back(g.leaf_vertex[lk[1]]);
      g.adj[g.leaf_vertex[lk[1]]].push_back(g.leaf_vertex[lk[0]]);
    }
  return g;
}

int components(const SequentGraph& g, int removed, std::vector<int>& comp) {
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

// Which sides of root formula `root` the member's links touch.
std::pair<bool, bool> member_touches(const LinkingSet& ls,
                                     const SliceLinking& m, int root) {
  int b = ls.sequent.leaf_begin(root);
  int mid = b + leaf_count(ls.sequent.formulas[root]->left);
  int end = ls.sequent.leaf_end(root);
  bool left = false, right = false;
  for (const auto& lk : m.links)
    for (int leaf : lk) {
      if (leaf >= b && leaf < mid) left = true;
      if (leaf >= mid && leaf < end) right = true;
    }
  return {left, right};
}

// Linking set on a subsequent; kept formulas by original index, the root
// replaced by its `side` child; members filtered by `keep` over the
// member's links (a null keep keeps every link).
LinkingSet project(const LinkingSet& ls, int root, int side,
                   const std::vector<int>& kept_formulas,
                   const std::vector<bool>* keep_leaf) {
  const FormulaPtr& f = ls.sequent.formulas[root];
  FormulaPtr child = side == 0 ? f->left : f->right;
  std::vector<int> leaf_map(ls.sequent.leaf_count() + 1, 0);
  Sequent ns;
  int next = 1;
  for (int fi : kept_formulas) {
    int begin = ls.sequent.leaf_begin(fi);
    if (fi == root) {
      ns.formulas.push_back(child);
      int offset = side == 0 ? 0 : leaf_count(f->left);
      for (int off = 0; off < leaf_count(child); ++off)
        leaf_map[begin + offset + off] = next++;
    } else {
      ns.formulas.push_back(ls.sequent.formulas[fi]);
      for (int off = 0; off < leaf_count(ls.sequent.formulas[fi]); ++off)
        leaf_map[begin + off] = next++;
    }
  }
  LinkingSet out;
  out.sequent = std::move(ns);
  for (const auto& m : ls.members) {
    SliceLinking nm;
    for (const auto& lk : m.links) {
      if (keep_leaf && !(*keep_leaf)[lk[0]]) continue;
      nm.links.push_back({leaf_map[lk[0]], leaf_map[lk[1]]});
      if (nm.links.back()[0] == 0 || nm.links.back()[1] == 0)
        throw std::logic_error("projected a dropped leaf");
    }
    // An empty restriction stays a member: the restriction set is the
    // image of the member set, and a part holding an empty linking can
    // never reach the axiom case, which is what rejects such sets.
    out.members.push_back(std::move(nm));
  }
  canonicalize(out);
  return out;
}

std::vector<int> all_indices(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

struct EraseLsDetail {
  EraseLsResult result;
  std::vector<std::vector<int>> part_formulas;
  int plus_side = -1;
};

EraseLsDetail erase_ls_detail(const LinkingSet& ls, int root) {
  auto ready = ready_roots_ls(ls);
  bool ok = false;
  for (auto& [fi, c] : ready) ok = ok || fi == root;
  if (!ok) throw std::invalid_argument("root is not ready");

  const FormulaPtr& f = ls.sequent.formulas[root];
  EraseLsDetail d;
  int n = ls.sequent.size();
  switch (f->conn) {
    case Conn::Par: {
      LinkingSet part = ls;
      part.sequent.formulas[root] = f->left;
      part.sequent.formulas.insert(part.sequent.formulas.begin() + root + 1,
                                   f->right);
      canonicalize(part);
      d.result.parts.push_back(std::move(part));
      d.part_formulas.push_back(all_indices(n));
      break;
    }
    case Conn::Plus: {
      bool left = false;
      for (const auto& m : ls.members)
        left = left || member_touches(ls, m, root).first;
      d.plus_side = left ? 0 : 1;
      d.result.parts.push_back(
          project(ls, root, d.plus_side, all_indices(n), nullptr));
      d.part_formulas.push_back(all_indices(n));
      break;
    }
    case Conn::With: {
      LinkingSet sides[2];
      sides[0].sequent = sides[1].sequent = ls.sequent;
      for (const auto& m : ls.members) {
        auto [left, right] = member_touches(ls, m, root);
        if (left == right) {  // both or neither: not a partition
          d.result.error = true;
          return d;
        }
        sides[left ? 0 : 1].members.push_back(m);
      }
      for (int side = 0; side < 2; ++side)
        d.result.parts.push_back(
            project(sides[side], root, side, all_indices(n), nullptr));
      d.part_formulas.assign(2, all_indices(n));
      break;
    }
    case Conn::Tensor: {
      SequentGraph g = build_graph(ls);
      std::vector<int> comp;
      components(g, g.formula_root[root], comp);
      auto [left_v, right_v] = g.root_children(ls.sequent, root);
      for (int side = 0; side < 2; ++side) {
        int home = comp[side == 0 ? left_v : right_v];
        std::vector<int> formulas;
        std::vector<bool> keep_leaf(ls.sequent.leaf_count() + 1, false);
        for (int fi = 0; fi < n; ++fi) {
          bool kept = fi == root || comp[g.formula_root[fi]] == home;
          if (!kept) continue;
          formulas.push_back(fi);
          int from = fi == root ? (side == 0 ? ls.sequent.leaf_begin(fi)
                                             : ls.sequent.leaf_begin(fi) +
                                                   leaf_count(f->left))
                                : ls.sequent.leaf_begin(fi);
          int count = fi == root
                          ? leaf_count(side == 0 ? f->left : f->right)
                          : leaf_count(ls.sequent.formulas[fi]);
          for (int off = 0; off < count; ++off) keep_leaf[from + off] = true;
        }
        d.result.parts.push_back(
            project(ls, root, side, formulas, &keep_leaf));
        d.part_formulas.push_back(std::move(formulas));
      }
      break;
    }
  }
  return d;
}

}  // namespace

bool is_connected_ls(const LinkingSet& ls) {
  bool any_link = false;
  for (const auto& m : ls.members) any_link = any_link || !m.links.empty();
  if (!any_link) return false;
  SequentGraph g = build_graph(ls);
  std::vector<int> comp;
  return components(g, -1, comp) == 1;
}

std::vector<std::pair<int, Conn>> ready_roots_ls(const LinkingSet& ls) {
  std::vector<std::pair<int, Conn>> out;
  for (int fi = 0; fi < ls.sequent.size(); ++fi) {
    const FormulaPtr& f = ls.sequent.formulas[fi];
    if (f->is_leaf()) continue;
    bool ready = false;
    switch (f->conn) {
      case Conn::Par:
      case Conn::With:
        ready = true;
        break;
      case Conn::Plus: {
        bool left = false, right = false;
        for (const auto& m : ls.members) {
          auto [l, r] = member_touches(ls, m, fi);
          left = left || l;
          right = right || r;
        }
        ready = left != right;
        break;
      }
      case Conn::Tensor: {
        SequentGraph g = build_graph(ls);
        std::vector<int> comp;
        if (components(g, g.formula_root[fi], comp) != 2) break;
        // Count distinct restrictions on each side.
        auto [left_v, right_v] = g.root_children(ls.sequent, fi);
        int home0 = comp[left_v], home1 = comp[right_v];
        if (home0 == home1) break;
        std::set<std::vector<std::array<int, 2>>> side0, side1;
        for (const auto& m : ls.members) {
          std::vector<std::array<int, 2>> r0, r1;
          for (const auto& lk : m.links)
            (comp[g.leaf_vertex[lk[0]]] == home0 ? r0 : r1).push_back(lk);
          std::sort(r0.begin(), r0.end());
          std::sort(r1.begin(), r1.end());
          side0.insert(r0);
          side1.insert(r1);
        }
        ready = ls.members.size() == side0.size() * side1.size();
        break;
      }
    }
    if (ready) out.emplace_back(fi, f->conn);
  }
  return out;
}

EraseLsResult erase_root_ls(const LinkingSet& ls, int root) {
  return erase_ls_detail(ls, root).result;
}

// ---------------------------------------------------------------- clusters

std::string canonical_key(const LinkingSet& ls) {
  LinkingSet c = ls;
  canonicalize(c);
  std::string key = render(c.sequent);
  for (const auto& m : c.members) {
    key += " |";
    for (const auto& lk : m.links)
      key += " (" + std::to_string(lk[0]) + "," + std::to_string(lk[1]) + ")";
  }
  return key;
}

bool equal_linking_sets(const LinkingSet& a, const LinkingSet& b) {
  return canonical_key(a) == canonical_key(b);
}

LsCluster make_ls_cluster(std::vector<LinkingSet> members) {
  LsCluster c;
  std::map<std::string, LinkingSet> by_key;
  for (auto& m : members) {
    canonicalize(m);
    by_key.emplace(canonical_key(m), std::move(m));
  }
  for (auto& [key, m] : by_key) c.members.push_back(std::move(m));
  return c;
}

bool ls_cluster_equal(const LsCluster& a, const LsCluster& b) {
  if (a.error != b.error) return false;
  if (a.error) return true;
  if (a.members.size() != b.members.size()) return false;
  for (size_t i = 0; i < a.members.size(); ++i)
    if (canonical_key(a.members[i]) != canonical_key(b.members[i]))
      return false;
  return true;
}

namespace {

bool is_ls_axiom_shape(const LinkingSet& ls) {
  if (ls.sequent.size() != 2 || ls.members.size() != 1 ||
      ls.members[0].links.size() != 1)
    return false;
  const FormulaPtr& a = ls.sequent.formulas[0];
  const FormulaPtr& b = ls.sequent.formulas[1];
  return a->is_leaf() && b->is_leaf() && dual_pair(a->lit, b->lit);
}

LsCluster error_cluster() {
  LsCluster c;
  c.error = true;
  return c;
}

LsCluster without_member(const LsCluster& c, size_t drop) {
  LsCluster out;
  for (size_t i = 0; i < c.members.size(); ++i)
    if (i != drop) out.members.push_back(c.members[i]);
  return out;
}

LsCluster replace_member(const LsCluster& c, size_t drop,
                         const std::vector<LinkingSet>& parts) {
  std::vector<LinkingSet> members;
  for (size_t i = 0; i < c.members.size(); ++i)
    if (i != drop) members.push_back(c.members[i]);
  for (const auto& p : parts) members.push_back(p);
  return make_ls_cluster(std::move(members));
}

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

std::vector<LsCluster> step_ls(const LsCluster& c) {
  if (c.error) return {};
  for (const auto& m : c.members)
    if (!is_connected_ls(m)) return {error_cluster()};
  std::vector<LsCluster> out;
  for (size_t i = 0; i < c.members.size(); ++i) {
    if (is_ls_axiom_shape(c.members[i])) {
      out.push_back(without_member(c, i));
      continue;
    }
    for (auto& [root, conn] : ready_roots_ls(c.members[i])) {
      EraseLsResult e = erase_root_ls(c.members[i], root);
      out.push_back(e.error ? error_cluster()
                            : replace_member(c, i, e.parts));
    }
  }
  return out;
}

namespace {

// Theorem-style default budget: l counts link occurrences across every
// member of every linking set, g is the largest sequent vertex count.
long long ls_step_budget(const LsCluster& c) {
  long long links = 0, max_g = 0;
  for (const auto& m : c.members) {
    for (const auto& linking : m.members)
      links += static_cast<long long>(linking.links.size());
    long long g = 0;
    for (const auto& f : m.sequent.formulas) g += vertex_count(f);
    max_g = std::max(max_g, g);
  }
  return (links + links * links) * max_g;
}

}  // namespace

LsNormalizeResult normalize_ls(const LsCluster& start, long long budget) {
  if (budget <= 0) budget = ls_step_budget(start);
  LsNormalizeResult res;
  LsCluster c = start;
  long long used = 0;
  while (!c.error) {
    bool disconnected = false;
    for (const auto& m : c.members)
      disconnected = disconnected || !is_connected_ls(m);
    if (disconnected) {
      LsTraceStep t;
      t.index = static_cast<int>(res.trace.size()) + 1;
      t.kind = LsTraceStep::Kind::Error;
      res.trace.push_back(t);
      c = error_cluster();
      break;
    }

    LsCluster next;
    LsTraceStep t;
    t.index = static_cast<int>(res.trace.size()) + 1;
    bool moved = false;
    for (size_t i = 0; i < c.members.size() && !moved; ++i) {
      if (!is_ls_axiom_shape(c.members[i])) continue;
      t.kind = LsTraceStep::Kind::Axiom;
      next = without_member(c, i);
      moved = true;
    }
    for (size_t i = 0; i < c.members.size() && !moved; ++i) {
      auto ready = ready_roots_ls(c.members[i]);
      if (ready.empty()) continue;
      auto best = ready[0];
      for (auto& r : ready)
        if (std::pair(ready_priority(r.second), r.first) <
            std::pair(ready_priority(best.second), best.first))
          best = r;
      t.kind = LsTraceStep::Kind::Erase;
      t.conn = best.second;
      t.formula = best.first + 1;
      EraseLsResult e = erase_root_ls(c.members[i], best.first);
      next = e.error ? error_cluster() : replace_member(c, i, e.parts);
      moved = true;
    }
    if (!moved) break;

    if (++used > budget)
      throw std::runtime_error(
          "erasure exceeded its step budget (" + std::to_string(budget) +
          "): internal invariant failure");
    res.trace.push_back(t);
    c = std::move(next);
  }
  res.normal_form = std::move(c);
  return res;
}

bool is_slice_net(const LinkingSet& ls) {
  if (!validate_linking_set(ls).ok) return false;
  LsNormalizeResult r = normalize_ls(make_ls_cluster({ls}));
  return !r.normal_form.error && r.normal_form.members.empty();
}

// -------------------------------------------------------- sequentialization

namespace {

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

ProofPtr seq_ls_rec(const LinkingSet& ls, std::string& error) {
  if (!is_connected_ls(ls)) {
    error = "erasure reached a disconnected linking set";
    return nullptr;
  }
  if (is_ls_axiom_shape(ls)) {
    const Literal& first = ls.sequent.formulas[0]->lit;
    ProofPtr p = ax(first.atom);
    if (!first.positive) p = perm({2, 1}, p);
    return p;
  }
  auto ready = ready_roots_ls(ls);
  if (ready.empty()) {
    error = "erasure is stuck: no ready root in " + render(ls.sequent);
    return nullptr;
  }
  auto best = ready[0];
  for (auto& r : ready)
    if (std::pair(ready_priority(r.second), r.first) <
        std::pair(ready_priority(best.second), best.first))
      best = r;
  int fi = best.first;
  int n = ls.sequent.size();
  EraseLsDetail d = erase_ls_detail(ls, fi);
  if (d.result.error) {
    error = "a linking straddles both sides of a with";
    return nullptr;
  }
  const auto& parts = d.result.parts;
  const FormulaPtr& f = ls.sequent.formulas[fi];

  switch (f->conn) {
    case Conn::Par: {
      ProofPtr p = seq_ls_rec(parts[0], error);
      if (!p) return nullptr;
      p = perm_unless_identity(
          perm_images(iota_order(n + 1), move_to_back(n + 1, {fi, fi + 1})),
          p);
      p = parr(p);
      auto built = move_to_back(n, {fi});
      return perm_unless_identity(perm_images(built, iota_order(n)), p);
    }
    case Conn::Plus: {
      ProofPtr p = seq_ls_rec(parts[0], error);
      if (!p) return nullptr;
      p = perm_unless_identity(
          perm_images(iota_order(n), move_to_back(n, {fi})), p);
      p = d.plus_side == 0 ? plus1(f->right, p) : plus2(f->left, p);
      auto built = move_to_back(n, {fi});
      return perm_unless_identity(perm_images(built, iota_order(n)), p);
    }
    case Conn::Tensor: {
      ProofPtr p0 = seq_ls_rec(parts[0], error);
      if (!p0) return nullptr;
      ProofPtr p1 = seq_ls_rec(parts[1], error);
      if (!p1) return nullptr;
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
      std::vector<int> front{pos1};
      for (int i = 0; i < n1; ++i)
        if (i != pos1) front.push_back(i);
      p1 = perm_unless_identity(perm_images(iota_order(n1), front), p1);
      ProofPtr p = tensor(p0, p1);
      std::vector<int> built;
      for (int g : fs0)
        if (g != fi) built.push_back(g);
      built.push_back(fi);
      for (int g : fs1)
        if (g != fi) built.push_back(g);
      return perm_unless_identity(perm_images(built, iota_order(n)), p);
    }
    case Conn::With: {
      ProofPtr p0 = seq_ls_rec(parts[0], error);
      if (!p0) return nullptr;
      ProofPtr p1 = seq_ls_rec(parts[1], error);
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

LsSequentializeResult sequentialize_slice_net(const LinkingSet& ls) {
  LsSequentializeResult res;
  LinkingSetReport report = validate_linking_set(ls);
  if (!report.ok) {
    res.error = "not a linking set: " + report.reason;
    return res;
  }
  LinkingSet c = ls;
  canonicalize(c);
  ProofPtr p = seq_ls_rec(c, res.error);
  if (!p) return res;
  CheckResult check = check_proof(p);
  if (!check.ok() || !equal(*check.conclusion, c.sequent)) {
    res.error = "internal error: extracted proof does not check";
    return res;
  }
  res.proof = p;
  return res;
}

}  // namespace mall
