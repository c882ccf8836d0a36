#include "mallnet/coherence.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mall {

CoherenceSpace discrete_space(std::vector<std::string> tokens) {
  CoherenceSpace s;
  s.adj.assign(tokens.size(), std::vector<bool>(tokens.size(), false));
  s.tokens = std::move(tokens);
  return s;
}

static CoherenceSpace juxtapose(const CoherenceSpace& a, const CoherenceSpace& b,
                                bool cross_adjacent) {
  CoherenceSpace s;
  int n = a.size(), m = b.size();
  s.tokens.reserve(n + m);
  s.tokens.insert(s.tokens.end(), a.tokens.begin(), a.tokens.end());
  s.tokens.insert(s.tokens.end(), b.tokens.begin(), b.tokens.end());
  s.adj.assign(n + m, std::vector<bool>(n + m, cross_adjacent));
  for (int i = 0; i < n + m; ++i) s.adj[i][i] = false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s.adj[i][j] = a.adj[i][j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) s.adj[n + i][n + j] = b.adj[i][j];
  return s;
}

CoherenceSpace sum(const CoherenceSpace& a, const CoherenceSpace& b) {
  return juxtapose(a, b, false);
}

CoherenceSpace product(const CoherenceSpace& a, const CoherenceSpace& b) {
  return juxtapose(a, b, true);
}

// Components of the graph on `verts` where i~j iff adj[i][j] == edge_value.
static std::vector<std::vector<int>> components_of(
    const CoherenceSpace& s, const std::vector<int>& verts, bool edge_value) {
  std::vector<std::vector<int>> comps;
  std::vector<bool> seen(s.size(), false);
  for (int start : verts) {
    if (seen[start]) continue;
    std::vector<int> comp, stack{start};
    seen[start] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (int w : verts) {
        if (!seen[w] && v != w && s.adj[v][w] == edge_value) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  std::sort(comps.begin(), comps.end());
  return comps;
}

static std::vector<int> all_vertices(const CoherenceSpace& s) {
  std::vector<int> v(s.size());
  std::iota(v.begin(), v.end(), 0);
  return v;
}

std::vector<std::vector<int>> adjacency_components(const CoherenceSpace& s) {
  return components_of(s, all_vertices(s), true);
}

std::vector<std::vector<int>> conflict_components(const CoherenceSpace& s) {
  return components_of(s, all_vertices(s), false);
}

// ---------------------------------------------------------- maximal cliques

namespace {

// Bron-Kerbosch with pivoting over sorted int vectors.
struct CliqueFinder {
  const CoherenceSpace& s;
  std::vector<std::vector<int>> out;

  std::vector<int> neighbours_in(int v, const std::vector<int>& set) const {
    std::vector<int> r;
    for (int w : set)
      if (w != v && s.adj[v][w]) r.push_back(w);
    return r;
  }

  void run(std::vector<int> r, std::vector<int> p, std::vector<int> x) {
    if (p.empty() && x.empty()) {
      out.push_back(std::move(r));
      return;
    }
    // Pivot: vertex of P ∪ X with most neighbours in P.
    int pivot = -1;
    size_t best = 0;
    for (const auto* set : {&p, &x})
      for (int u : *set) {
        size_t d = neighbours_in(u, p).size();
        if (pivot < 0 || d > best) {
          pivot = u;
          best = d;
        }
      }
    std::vector<int> candidates;
    for (int v : p)
      if (pivot < 0 || !s.adj[pivot][v]) candidates.push_back(v);
    for (int v : candidates) {
      auto r2 = r;
      r2.push_back(v);
      run(std::move(r2), neighbours_in(v, p), neighbours_in(v, x));
      p.erase(std::find(p.begin(), p.end(), v));
      auto it = std::lower_bound(x.begin(), x.end(), v);
      x.insert(it, v);
    }
  }
};

}  // namespace

std::vector<std::vector<int>> maximal_cliques(const CoherenceSpace& s) {
  CliqueFinder f{s, {}};
  f.run({}, all_vertices(s), {});
  for (auto& c : f.out) std::sort(c.begin(), c.end());
  std::sort(f.out.begin(), f.out.end());
  return f.out;
}

// ----------------------------------------------------------- contractibility

// Brute-force induced-P4 search over a vertex subset; {-1,...} if none.
static std::array<int, 4> find_p4(const CoherenceSpace& s,
                                  const std::vector<int>& verts) {
  auto adj = [&](int a, int b) { return s.adj[a][b]; };
  size_t n = verts.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k)
        for (size_t l = 0; l < n; ++l) {
          if (i == j || i == k || i == l || j == k || j == l || k == l) continue;
          if (verts[i] > verts[l]) continue;  // skip reversed duplicates
          int a = verts[i], b = verts[j], c = verts[k], d = verts[l];
          if (adj(a, b) && adj(b, c) && adj(c, d) && !adj(a, c) && !adj(a, d) &&
              !adj(b, d))
            return {a, b, c, d};
        }
  return {-1, -1, -1, -1};
}

// Shared recursion: decompose `verts` by adjacency components, then conflict
// components. Returns the cotree, or sets *p4 and returns nullopt.
static std::optional<Cotree> decompose(const CoherenceSpace& s,
                                       const std::vector<int>& verts,
                                       std::array<int, 4>* p4) {
  if (verts.empty()) return Cotree{};  // childless internal vertex
  if (verts.size() == 1) {
    Cotree leaf;
    leaf.token = verts[0];
    return leaf;
  }
  auto comps = components_of(s, verts, true);
  CotreeLabel label = CotreeLabel::Conflict;  // cross-component pairs conflict
  if (comps.size() == 1) {
    comps = components_of(s, verts, false);
    label = CotreeLabel::Adjacent;  // cross-co-component pairs are adjacent
    if (comps.size() == 1) {
      *p4 = find_p4(s, verts);
      return std::nullopt;
    }
  }
  Cotree node;
  node.label = label;
  for (const auto& comp : comps) {
    auto child = decompose(s, comp, p4);
    if (!child) return std::nullopt;
    node.children.push_back(std::move(*child));
  }
  return node;
}

ContractResult is_contractible(const CoherenceSpace& s) {
  ContractResult r;
  std::array<int, 4> p4{-1, -1, -1, -1};
  r.contractible = decompose(s, all_vertices(s), &p4).has_value();
  r.p4 = p4;
  return r;
}

std::optional<Cotree> cotree(const CoherenceSpace& s) {
  std::array<int, 4> p4{-1, -1, -1, -1};
  auto t = decompose(s, all_vertices(s), &p4);
  if (!t) return std::nullopt;
  // Canonical child order: sort by rendered form, bottom-up.
  struct Sorter {
    const CoherenceSpace& s;
    std::string sort_rec(Cotree& n) {
      if (n.is_leaf()) return s.tokens[n.token];
      std::vector<std::pair<std::string, Cotree>> kids;
      for (auto& c : n.children) {
        std::string key = sort_rec(c);
        kids.emplace_back(std::move(key), std::move(c));
      }
      std::sort(kids.begin(), kids.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      std::string out = n.label == CotreeLabel::Adjacent ? "(^" : "(#";
      n.children.clear();
      for (auto& [key, c] : kids) {
        out += ' ';
        out += key;
        n.children.push_back(std::move(c));
      }
      out += ')';
      return out;
    }
  } sorter{s};
  sorter.sort_rec(*t);
  return t;
}

std::string render(const Cotree& t, const CoherenceSpace& s) {
  if (t.is_leaf()) return s.tokens[t.token];
  std::string out = t.label == CotreeLabel::Adjacent ? "(^" : "(#";
  for (const auto& c : t.children) {
    out += ' ';
    out += render(c, s);
  }
  out += ')';
  return out;
}

static void collect_tokens(const Cotree& t, std::vector<int>& out) {
  if (t.is_leaf()) {
    out.push_back(t.token);
    return;
  }
  for (const auto& c : t.children) collect_tokens(c, out);
}

static void fill_from_cotree(const Cotree& t, std::vector<std::vector<bool>>& adj) {
  if (t.is_leaf()) return;
  bool value = t.label == CotreeLabel::Adjacent;
  std::vector<std::vector<int>> kid_tokens;
  for (const auto& c : t.children) {
    fill_from_cotree(c, adj);
    std::vector<int> toks;
    collect_tokens(c, toks);
    kid_tokens.push_back(std::move(toks));
  }
  for (size_t i = 0; i < kid_tokens.size(); ++i)
    for (size_t j = i + 1; j < kid_tokens.size(); ++j)
      for (int a : kid_tokens[i])
        for (int b : kid_tokens[j]) adj[a][b] = adj[b][a] = value;
}

std::vector<std::vector<bool>> adjacency_from_cotree(const Cotree& t, int n) {
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  fill_from_cotree(t, adj);
  return adj;
}

// ------------------------------------------------------------ sequent space

CoherenceSpace sequent_space(const Sequent& s) {
  int n = s.leaf_count();
  CoherenceSpace sp;
  sp.tokens.reserve(n);
  for (int i = 1; i <= n; ++i) sp.tokens.push_back(std::to_string(i));
  sp.adj.assign(n, std::vector<bool>(n, false));
  for (int x = 1; x <= n; ++x)
    for (int y = x + 1; y <= n; ++y) {
      bool adjacent = !additive_join(s, x, y);
      sp.adj[x - 1][y - 1] = sp.adj[y - 1][x - 1] = adjacent;
    }
  return sp;
}

bool is_additive_resolution(const Sequent& s, const std::vector<int>& leaves) {
  int n = s.leaf_count();
  std::vector<int> set = leaves;
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  for (int x : set)
    if (x < 1 || x > n) return false;
  // Clique in the sequent space: no two members additively joined.
  for (size_t i = 0; i < set.size(); ++i)
    for (size_t j = i + 1; j < set.size(); ++j)
      if (additive_join(s, set[i], set[j])) return false;
  // Maximal: every leaf outside is joined to (conflicts with) some member.
  for (int x = 1; x <= n; ++x) {
    if (std::binary_search(set.begin(), set.end(), x)) continue;
    bool blocked = false;
    for (int y : set)
      if (additive_join(s, x, y)) {
        blocked = true;
        break;
      }
    if (!blocked) return false;
  }
  return true;
}

}  // namespace mall
