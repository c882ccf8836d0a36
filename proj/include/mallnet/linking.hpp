// Linkings: axiom links over a sequent plus a conflict relation on links.
//
// A linking is valid when every link's image is a dual pair of leaves and
// overlapping links conflict. It is a slicing when additionally the link
// space is contractible and the attachment relation is a maximal
// coherence-space map into the sequent space C(G).
#pragma once

#include <array>
#include <string>
#include <vector>

#include "mallnet/coherence.hpp"
#include "mallnet/formula.hpp"

namespace mall {

struct Linking {
  Sequent sequent;
  std::vector<std::string> link_names;        // display ids, one per link
  std::vector<std::array<int, 2>> links;      // attached leaf pair (1-based)
  std::vector<std::vector<bool>> conflict;    // symmetric, irreflexive;
                                              // includes overlap closure

  int link_count() const { return static_cast<int>(links.size()); }
};

// Coherence space on the links: adjacency = complement of conflict.
CoherenceSpace link_space(const Linking& l);

// Sorted distinct leaves attached by any link.
std::vector<int> image_leaves(const Linking& l);

// Adds conflicts implied by overlap (distinct links sharing a leaf).
void materialize_overlap_conflicts(Linking& l);

struct LinkingReport {
  bool ok = true;
  std::string reason;  // first violated condition with witnesses
};

// Dual-pair and Overlap conditions.
LinkingReport validate_linking(const Linking& l);

// Attachment preserves strict coherence and reflects strict incoherence
// as a relation L -> C(G). Pre: validate_linking(l).
bool is_map(const Linking& l);

// No single <link, leaf> attachment can be added keeping the map
// conditions. Pre: is_map(l).
bool is_maximal_map(const Linking& l);

// valid + contractible link space + maximal map. Polynomial time.
bool is_slicing(const Linking& l);

// Restrictions of l to the maximal cliques of its link space, in canonical
// (clique-sorted) order. Pre: is_slicing(l). Each result is conflict-free.
std::vector<Linking> slices(const Linking& l);

// Restriction of l to a subset of link indices (sorted), keeping names.
Linking restrict_links(const Linking& l, const std::vector<int>& link_idxs);

// Canonical form: links sorted by leaf pair; parallel links (equal pairs)
// ordered by conflict-row refinement, with exhaustive tie-breaking inside
// residual symmetric classes. Two linkings are equal as nets iff their
// canonical keys coincide (link ids are not part of the identity).
std::string canonical_key(const Linking& l);

// Equality up to link bijection preserving attachments and conflicts.
bool equal_nets(const Linking& a, const Linking& b);

}  // namespace mall
