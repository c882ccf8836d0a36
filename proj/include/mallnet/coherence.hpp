// Finite coherence spaces: a set of tokens with a symmetric irreflexive
// adjacency relation x ^ y ("coherent"). Distinct non-adjacent tokens are in
// conflict, written x # y. A space is contractible iff its adjacency graph
// contains no induced 4-vertex path (P4); equivalently it is generated from
// singletons by sums (cross pairs conflict) and products (cross pairs
// adjacent), a shape recorded by its cotree.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mallnet/formula.hpp"

namespace mall {

struct CoherenceSpace {
  std::vector<std::string> tokens;      // display names
  std::vector<std::vector<bool>> adj;   // adjacency matrix, symmetric, irreflexive

  int size() const { return static_cast<int>(tokens.size()); }
  bool adjacent(int i, int j) const { return adj[i][j]; }
  bool conflict(int i, int j) const { return i != j && !adj[i][j]; }
};

// Space with given token names and no adjacencies.
CoherenceSpace discrete_space(std::vector<std::string> tokens);

// Disjoint union where all cross pairs conflict (additive composition).
CoherenceSpace sum(const CoherenceSpace& a, const CoherenceSpace& b);
// Disjoint union where all cross pairs are adjacent (multiplicative).
CoherenceSpace product(const CoherenceSpace& a, const CoherenceSpace& b);

// Connected components of the adjacency graph; each component sorted,
// components ordered by smallest member.
std::vector<std::vector<int>> adjacency_components(const CoherenceSpace& s);
// Components of the conflict graph (complement), same conventions.
std::vector<std::vector<int>> conflict_components(const CoherenceSpace& s);

// All maximal cliques of the adjacency graph (Bron-Kerbosch). Each clique is
// sorted; cliques are sorted lexicographically. The empty space yields one
// empty clique.
std::vector<std::vector<int>> maximal_cliques(const CoherenceSpace& s);

struct ContractResult {
  bool contractible = false;
  // When not contractible: tokens a,b,c,d inducing the path a^b^c^d with
  // a#c, a#d, b#d.
  std::array<int, 4> p4{-1, -1, -1, -1};
};
ContractResult is_contractible(const CoherenceSpace& s);

// Cotree of a contractible space: leaves are tokens; an internal vertex is
// labelled Adjacent (cross pairs of distinct children adjacent) or Conflict
// (cross pairs conflict). Canonical: labels alternate along every root path
// and every internal vertex has >= 2 children, except the empty space whose
// tree is a childless internal vertex.
enum class CotreeLabel { Adjacent, Conflict };

struct Cotree {
  int token = -1;  // >= 0 for leaves
  CotreeLabel label = CotreeLabel::Conflict;
  std::vector<Cotree> children;

  bool is_leaf() const { return token >= 0; }
};

// Empty iff the space is not contractible.
std::optional<Cotree> cotree(const CoherenceSpace& s);

// S-expression with "^" / "#" heads: e.g. (# l0 (^ l1 l2)). Children are
// ordered by their rendered form, so equal spaces render equally.
std::string render(const Cotree& t, const CoherenceSpace& s);

// Adjacency matrix induced by a cotree over n tokens (inverse of cotree()).
std::vector<std::vector<bool>> adjacency_from_cotree(const Cotree& t, int n);

// Coherence space of a sequent: tokens are the leaf ids 1..n and distinct
// leaves conflict iff additively joined (least common ancestor & or +);
// leaves of different formulas are adjacent. Contractible for every sequent.
CoherenceSpace sequent_space(const Sequent& s);

// Maximal cliques of sequent_space(s) are the additive resolutions: leaf
// sets choosing one side of every reachable additive connective.
bool is_additive_resolution(const Sequent& s, const std::vector<int>& leaves);

}  // namespace mall
