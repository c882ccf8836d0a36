#include "mallnet/linking.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

namespace mall {

CoherenceSpace link_space(const Linking& l) {
  CoherenceSpace s;
  s.tokens = l.link_names;
  int n = l.link_count();
  s.adj.assign(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s.adj[i][j] = i != j && !l.conflict[i][j];
  return s;
}

std::vector<int> image_leaves(const Linking& l) {
  std::vector<int> out;
  for (const auto& lk : l.links) {
    out.push_back(lk[0]);
    out.push_back(lk[1]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

static bool share_leaf(const std::array<int, 2>& a, const std::array<int, 2>& b) {
  return a[0] == b[0] || a[0] == b[1] || a[1] == b[0] || a[1] == b[1];
}

void materialize_overlap_conflicts(Linking& l) {
  int n = l.link_count();
  if (static_cast<int>(l.conflict.size()) != n) {
    l.conflict.assign(n, std::vector<bool>(n, false));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (share_leaf(l.links[i], l.links[j]))
        l.conflict[i][j] = l.conflict[j][i] = true;
}

LinkingReport validate_linking(const Linking& l) {
  int nleaves = l.sequent.leaf_count();
  int n = l.link_count();
  if (static_cast<int>(l.conflict.size()) != n)
    return {false, "conflict matrix size does not match link count"};
  for (int i = 0; i < n; ++i) {
    if (l.conflict[i][i]) return {false, "link " + l.link_names[i] + " conflicts with itself"};
    for (int j = 0; j < n; ++j)
      if (l.conflict[i][j] != l.conflict[j][i])
        return {false, "conflict relation is not symmetric"};
  }
  for (int i = 0; i < n; ++i) {
    auto [x, y] = std::pair(l.links[i][0], l.links[i][1]);
    if (x < 1 || x > nleaves || y < 1 || y > nleaves)
      return {false, "link " + l.link_names[i] + " references a leaf out of range"};
    if (x == y)
      return {false, "link " + l.link_names[i] + " attaches the same leaf twice"};
    if (!dual_pair(l.sequent.literal_at(x), l.sequent.literal_at(y)))
      return {false, "link " + l.link_names[i] + " on leaves " + std::to_string(x) +
                         "," + std::to_string(y) + " is not a dual pair"};
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (share_leaf(l.links[i], l.links[j]) && !l.conflict[i][j])
        return {false, "links " + l.link_names[i] + " and " + l.link_names[j] +
                           " overlap but do not conflict"};
  return {true, ""};
}

bool is_map(const Linking& l) {
  int n = l.link_count();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      for (int x : l.links[i])
        for (int y : l.links[j]) {
          if (i != j && !l.conflict[i][j]) {
            // i ^ j in L: images must be pairwise coherent in C(G).
            if (x == y || additive_join(l.sequent, x, y)) return false;
          }
          if (x != y && additive_join(l.sequent, x, y)) {
            // x # y in C(G): must be reflected as a conflict in L.
            if (i == j || !l.conflict[i][j]) return false;
          }
        }
    }
  return true;
}

bool is_maximal_map(const Linking& l) {
  int n = l.link_count();
  int nleaves = l.sequent.leaf_count();
  for (int i = 0; i < n; ++i) {
    for (int x = 1; x <= nleaves; ++x) {
      if (x == l.links[i][0] || x == l.links[i][1]) continue;
      // Can <link i, leaf x> be added keeping the map conditions?
      bool addable = true;
      for (int j = 0; addable && j < n; ++j) {
        bool adjacent = j != i && !l.conflict[i][j];
        for (int k = 0; addable && k < 2; ++k) {
          int y = l.links[j][k];
          if (j == i) {
            // Reflection within the extended link: x must not additively
            // join its own link's leaves.
            if (additive_join(l.sequent, x, y)) addable = false;
          } else if (adjacent) {
            // Preservation across adjacency: x must cohere with every leaf
            // of an adjacent link (conflicting links constrain nothing).
            if (x == y || additive_join(l.sequent, x, y)) addable = false;
          }
        }
      }
      if (addable) return false;
    }
  }
  return true;
}

bool is_slicing(const Linking& l) {
  if (!validate_linking(l).ok) return false;
  if (!is_contractible(link_space(l)).contractible) return false;
  return is_map(l) && is_maximal_map(l);
}

Linking restrict_links(const Linking& l, const std::vector<int>& link_idxs) {
  Linking r;
  r.sequent = l.sequent;
  for (int i : link_idxs) {
    r.link_names.push_back(l.link_names[i]);
    r.links.push_back(l.links[i]);
  }
  int m = static_cast<int>(link_idxs.size());
  r.conflict.assign(m, std::vector<bool>(m, false));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      r.conflict[a][b] = l.conflict[link_idxs[a]][link_idxs[b]];
  return r;
}

std::vector<Linking> slices(const Linking& l) {
  std::vector<Linking> out;
  for (const auto& clique : maximal_cliques(link_space(l)))
    out.push_back(restrict_links(l, clique));
  return out;
}

// ----------------------------------------------------------- canonical form

namespace {

std::array<int, 2> sorted_pair(const std::array<int, 2>& p) {
  return {std::min(p[0], p[1]), std::max(p[0], p[1])};
}

// Key of a full link ordering: pairs then conflict matrix bits.
std::string ordering_key(const Linking& l, const std::vector<int>& order) {
  std::string key;
  for (int i : order) {
    auto p = sorted_pair(l.links[i]);
    key += std::to_string(p[0]) + "-" + std::to_string(p[1]) + ";";
  }
  for (int a : order) {
    for (int b : order) key += l.conflict[a][b] ? '1' : '0';
    key += '/';
  }
  return key;
}

}  // namespace

std::string canonical_key(const Linking& l) {
  int n = l.link_count();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return sorted_pair(l.links[a]) < sorted_pair(l.links[b]);
  });

  // Refine classes of parallel links by conflict-row signatures.
  std::vector<int> cls(n, 0);
  {
    std::map<std::array<int, 2>, int> pair_cls;
    for (int i : order) {
      auto p = sorted_pair(l.links[i]);
      auto it = pair_cls.find(p);
      if (it == pair_cls.end())
        it = pair_cls.emplace(p, static_cast<int>(pair_cls.size())).first;
      cls[i] = it->second;
    }
    // New ids each round are ranks of the sorted signature strings. The
    // initial numbering follows the sorted pairs, so by induction the ids
    // stay independent of the presentation order of the links. Classes
    // only ever split, so the loop ends when the class count is stable.
    std::size_t prev_classes = pair_cls.size();
    for (;;) {
      std::vector<std::string> sigs(n);
      std::map<std::string, int> sig_ids;
      for (int i = 0; i < n; ++i) {
        std::string sig = std::to_string(cls[i]) + ":";
        std::vector<std::string> parts;
        for (int j = 0; j < n; ++j)
          if (j != i)
            parts.push_back(std::to_string(cls[j]) + (l.conflict[i][j] ? "#" : "^"));
        std::sort(parts.begin(), parts.end());
        for (const auto& s : parts) sig += s + ",";
        sig_ids.emplace(sig, 0);
        sigs[i] = std::move(sig);
      }
      int rank = 0;
      for (auto& [sig, id] : sig_ids) id = rank++;
      for (int i = 0; i < n; ++i) cls[i] = sig_ids[sigs[i]];
      if (sig_ids.size() == prev_classes) break;
      prev_classes = sig_ids.size();
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    auto pa = sorted_pair(l.links[a]), pb = sorted_pair(l.links[b]);
    return std::tie(pa, cls[a]) < std::tie(pb, cls[b]);
  });

  // Residual symmetric groups: equal pair and equal class. Exhaustively
  // permute within groups and take the lexicographically least key.
  std::vector<std::pair<int, int>> groups;  // [begin, end) in `order`
  for (int i = 0; i < n;) {
    int j = i + 1;
    while (j < n &&
           sorted_pair(l.links[order[j]]) == sorted_pair(l.links[order[i]]) &&
           cls[order[j]] == cls[order[i]])
      ++j;
    if (j - i > 1) groups.emplace_back(i, j);
    i = j;
  }
  long long combos = 1;
  for (auto [b, e] : groups) {
    for (int k = 2; k <= e - b; ++k) combos *= k;
    if (combos > 40320)
      throw std::logic_error("linking canonicalization: symmetric group too large");
  }

  std::string best;
  std::vector<int> cur = order;
  // Iterate the cartesian product of group permutations.
  std::vector<std::vector<int>> group_perms(groups.size());
  std::function<void(size_t)> rec = [&](size_t gi) {
    if (gi == groups.size()) {
      std::string key = ordering_key(l, cur);
      if (best.empty() || key < best) best = std::move(key);
      return;
    }
    auto [b, e] = groups[gi];
    std::vector<int> slot(cur.begin() + b, cur.begin() + e);
    std::sort(slot.begin(), slot.end());
    do {
      std::copy(slot.begin(), slot.end(), cur.begin() + b);
      rec(gi + 1);
    } while (std::next_permutation(slot.begin(), slot.end()));
  };
  rec(0);

  return render(l.sequent) + "\n" + best;
}

bool equal_nets(const Linking& a, const Linking& b) {
  if (!equal(a.sequent, b.sequent)) return false;
  return canonical_key(a) == canonical_key(b);
}

}  // namespace mall
