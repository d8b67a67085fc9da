#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace zlab {

using ElementList = std::vector<std::string>;
using ClassList = std::vector<ElementList>;

// An edge of a k-partite k-graph: one zero-based element index per class.
using Edge = std::vector<std::int32_t>;

// Finite k-partite k-uniform hypergraph with enumerated edges.
// Edges are kept sorted lexicographically and duplicate-free.
struct Instance {
    int k = 0;
    ClassList classes;
    std::vector<Edge> edges;

    std::size_t class_size(int i) const { return classes.at(static_cast<std::size_t>(i)).size(); }
    std::size_t edge_count() const { return edges.size(); }
    bool has_edge(const Edge& e) const;

    // Product of class sizes, saturating at uint64 max.
    unsigned long long product_of_sizes() const;
};

// Validates invariants (index ranges, distinct elements, no duplicate edges)
// and canonicalizes edge order. Throws std::invalid_argument on violation.
Instance make_instance(int k, ClassList classes, std::vector<Edge> edges);

// Membership oracle over k classes of opaque element identifiers. The
// predicate must be deterministic. `classes` carries canonical finite ground
// sets when the relation comes from a generator; it may be empty for pure
// oracles.
struct Relation {
    int k = 0;
    std::function<bool(const std::vector<std::string>&)> membership;
    ClassList classes;
    std::string family;
    std::string params;
    std::uint64_t seed = 0;
};

// Induced sub-k-graph on the given finite classes.
Instance induce(const Relation& rel, const ClassList& classes);

// Induced instance on the relation's own canonical classes.
Instance induce_canonical(const Relation& rel);

// Membership-oracle view of a finite instance.
Relation relation_from_instance(const Instance& inst);

// True iff the edge set is empty or the full product. Empty classes count as
// homogeneous (both readings coincide).
bool is_homogeneous(const Instance& inst);

// Witness for K_{u,...,u} containment: u element indices per class, each
// sorted ascending.
struct CompleteWitness {
    std::vector<std::vector<std::int32_t>> subsets;
};

// Exact K_{u,...,u} search. Returns the first witness in the deterministic
// search order (classes are pivoted smallest-size-first, ties by class index;
// pivot subsets enumerated lexicographically), or nullopt when the instance
// is K_{u,...,u}-free. Exponential in the worst case; intended for
// desk-scale instances.
std::optional<CompleteWitness> find_complete(const Instance& inst, int u);
bool contains_complete(const Instance& inst, int u);

// Re-checks all u^k product tuples of a witness against the edge set.
bool witness_in_edges(const Instance& inst, const CompleteWitness& w);

// Conjunction of the fibers of `rel` at the pinned elements of class
// `class_index`: the returned (k-1)-ary relation holds on a tuple iff `rel`
// holds with every pin substituted in that slot. Pins must be distinct; k >= 2.
Relation intersect_fibers(const Relation& rel, int class_index, const ElementList& pins);

} // namespace zlab
