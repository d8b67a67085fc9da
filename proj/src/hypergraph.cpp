#include "zlab/hypergraph.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace zlab {

namespace {

void check_arity(int k) {
    if (k < 1) throw std::invalid_argument("arity must be >= 1");
}

std::uint64_t popcount_and(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                           std::vector<std::uint64_t>& out) {
    std::uint64_t c = 0;
    for (std::size_t w = 0; w < a.size(); ++w) {
        out[w] = a[w] & b[w];
        c += static_cast<std::uint64_t>(std::popcount(out[w]));
    }
    return c;
}

// Index-level view used by the recursive search: class sizes plus sorted
// edge tuples, no element identifiers.
struct IndexedGraph {
    std::vector<std::int64_t> sizes;
    std::vector<Edge> edges; // sorted lex
};

std::optional<std::vector<std::vector<std::int32_t>>> search_complete(const IndexedGraph& g, int u);

// Bipartite base: rows of the pivot side as bitsets over the other side.
std::optional<std::vector<std::vector<std::int32_t>>> search_bipartite(const IndexedGraph& g, int u) {
    const int pivot = g.sizes[0] <= g.sizes[1] ? 0 : 1;
    const int other = 1 - pivot;
    const auto np = static_cast<std::size_t>(g.sizes[pivot]);
    const auto no = static_cast<std::size_t>(g.sizes[other]);
    const std::size_t words = (no + 63) / 64;

    std::vector<std::vector<std::uint64_t>> rows(np, std::vector<std::uint64_t>(words, 0));
    std::vector<std::uint64_t> degree(np, 0);
    for (const auto& e : g.edges) {
        const auto p = static_cast<std::size_t>(e[static_cast<std::size_t>(pivot)]);
        const auto o = static_cast<std::size_t>(e[static_cast<std::size_t>(other)]);
        rows[p][o / 64] |= (std::uint64_t{1} << (o % 64));
        ++degree[p];
    }

    std::vector<std::int32_t> candidates;
    for (std::size_t p = 0; p < np; ++p)
        if (degree[p] >= static_cast<std::uint64_t>(u)) candidates.push_back(static_cast<std::int32_t>(p));
    if (candidates.size() < static_cast<std::size_t>(u)) return std::nullopt;

    std::vector<std::int32_t> chosen;
    std::vector<std::vector<std::uint64_t>> inter_stack;
    inter_stack.emplace_back(words, ~std::uint64_t{0}); // trimmed below
    if (no % 64 != 0) inter_stack[0][words - 1] = (std::uint64_t{1} << (no % 64)) - 1;
    if (no == 0) return std::nullopt;

    std::optional<std::vector<std::vector<std::int32_t>>> result;

    auto extend = [&](auto&& self, std::size_t start) -> bool {
        const auto depth = chosen.size();
        if (depth == static_cast<std::size_t>(u)) {
            std::vector<std::int32_t> others;
            const auto& inter = inter_stack.back();
            for (std::size_t o = 0; o < no && others.size() < static_cast<std::size_t>(u); ++o)
                if (inter[o / 64] & (std::uint64_t{1} << (o % 64))) others.push_back(static_cast<std::int32_t>(o));
            std::vector<std::vector<std::int32_t>> subsets(2);
            subsets[static_cast<std::size_t>(pivot)] = chosen;
            subsets[static_cast<std::size_t>(other)] = std::move(others);
            result = std::move(subsets);
            return true;
        }
        for (std::size_t idx = start; idx < candidates.size(); ++idx) {
            if (candidates.size() - idx < static_cast<std::size_t>(u) - depth) break;
            const auto cand = static_cast<std::size_t>(candidates[idx]);
            std::vector<std::uint64_t> next(words);
            const std::uint64_t common = popcount_and(inter_stack.back(), rows[cand], next);
            if (common < static_cast<std::uint64_t>(u)) continue;
            chosen.push_back(candidates[idx]);
            inter_stack.push_back(std::move(next));
            if (self(self, idx + 1)) return true;
            inter_stack.pop_back();
            chosen.pop_back();
        }
        return false;
    };
    extend(extend, 0);
    return result;
}

// Mixed-radix encoding of a tuple over the non-pivot classes.
std::uint64_t encode(const Edge& e, int pivot, const std::vector<std::int64_t>& sizes) {
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (static_cast<int>(i) == pivot) continue;
        code = code * static_cast<std::uint64_t>(sizes[i]) + static_cast<std::uint64_t>(e[i]);
    }
    return code;
}

Edge decode(std::uint64_t code, int pivot, const std::vector<std::int64_t>& sizes) {
    Edge out(sizes.size() - 1, 0);
    for (std::size_t i = sizes.size(); i-- > 0;) {
        if (static_cast<int>(i) == pivot) continue;
        const auto radix = static_cast<std::uint64_t>(sizes[i]);
        const std::size_t slot = i > static_cast<std::size_t>(pivot) ? i - 1 : i;
        out[slot] = static_cast<std::int32_t>(code % radix);
        code /= radix;
    }
    return out;
}

bool support_at_least(const std::vector<std::uint64_t>& codes, int pivot,
                      const std::vector<std::int64_t>& sizes, int u) {
    const std::size_t kk = sizes.size();
    std::vector<std::unordered_set<std::int64_t>> seen(kk - 1);
    for (auto code : codes) {
        for (std::size_t i = kk; i-- > 0;) {
            if (static_cast<int>(i) == pivot) continue;
            const auto radix = static_cast<std::uint64_t>(sizes[i]);
            const std::size_t slot = i > static_cast<std::size_t>(pivot) ? i - 1 : i;
            seen[slot].insert(static_cast<std::int64_t>(code % radix));
            code /= radix;
        }
    }
    for (const auto& s : seen)
        if (s.size() < static_cast<std::size_t>(u)) return false;
    return true;
}

std::optional<std::vector<std::vector<std::int32_t>>> search_complete(const IndexedGraph& g, int u) {
    const std::size_t k = g.sizes.size();
    for (auto s : g.sizes)
        if (s < u) return std::nullopt;

    if (k == 1) {
        if (g.edges.size() < static_cast<std::size_t>(u)) return std::nullopt;
        std::vector<std::int32_t> first;
        for (int i = 0; i < u; ++i) first.push_back(g.edges[static_cast<std::size_t>(i)][0]);
        return std::vector<std::vector<std::int32_t>>{std::move(first)};
    }
    if (k == 2) return search_bipartite(g, u);

    // Guard for the mixed-radix encoding.
    long double prod = 1;
    for (std::size_t i = 0; i < k; ++i) prod *= static_cast<long double>(std::max<std::int64_t>(g.sizes[i], 1));
    if (prod > 9e18L) throw std::runtime_error("instance too large for complete-subgraph search");

    int pivot = 0;
    for (std::size_t i = 1; i < k; ++i)
        if (g.sizes[i] < g.sizes[static_cast<std::size_t>(pivot)]) pivot = static_cast<int>(i);

    // Fibers of the pivot class as sorted code lists.
    std::vector<std::vector<std::uint64_t>> fibers(static_cast<std::size_t>(g.sizes[static_cast<std::size_t>(pivot)]));
    for (const auto& e : g.edges)
        fibers[static_cast<std::size_t>(e[static_cast<std::size_t>(pivot)])].push_back(encode(e, pivot, g.sizes));
    for (auto& f : fibers) std::sort(f.begin(), f.end());

    const auto min_tuples = [&] {
        std::uint64_t m = 1;
        for (std::size_t i = 1; i < k; ++i) m *= static_cast<std::uint64_t>(u);
        return m;
    }();

    std::vector<std::int32_t> candidates;
    for (std::size_t p = 0; p < fibers.size(); ++p)
        if (fibers[p].size() >= min_tuples && support_at_least(fibers[p], pivot, g.sizes, u))
            candidates.push_back(static_cast<std::int32_t>(p));
    if (candidates.size() < static_cast<std::size_t>(u)) return std::nullopt;

    std::vector<std::int32_t> chosen;
    std::vector<std::vector<std::uint64_t>> inter_stack;

    std::optional<std::vector<std::vector<std::int32_t>>> result;
    auto extend = [&](auto&& self, std::size_t start) -> bool {
        const auto depth = chosen.size();
        if (depth == static_cast<std::size_t>(u)) {
            IndexedGraph sub;
            for (std::size_t i = 0; i < k; ++i)
                if (static_cast<int>(i) != pivot) sub.sizes.push_back(g.sizes[i]);
            for (auto code : inter_stack.back()) sub.edges.push_back(decode(code, pivot, g.sizes));
            std::sort(sub.edges.begin(), sub.edges.end());
            auto rest = search_complete(sub, u);
            if (!rest) return false;
            rest->insert(rest->begin() + pivot, chosen);
            result = std::move(rest);
            return true;
        }
        for (std::size_t idx = start; idx < candidates.size(); ++idx) {
            if (candidates.size() - idx < static_cast<std::size_t>(u) - depth) break;
            const auto cand = static_cast<std::size_t>(candidates[idx]);
            std::vector<std::uint64_t> next;
            if (depth == 0) {
                next = fibers[cand];
            } else {
                const auto& cur = inter_stack.back();
                next.reserve(std::min(cur.size(), fibers[cand].size()));
                std::set_intersection(cur.begin(), cur.end(), fibers[cand].begin(), fibers[cand].end(),
                                      std::back_inserter(next));
            }
            // Prune: the common section must still span u elements per class.
            if (next.size() < min_tuples || !support_at_least(next, pivot, g.sizes, u)) continue;
            chosen.push_back(candidates[idx]);
            inter_stack.push_back(std::move(next));
            if (self(self, idx + 1)) return true;
            inter_stack.pop_back();
            chosen.pop_back();
        }
        return false;
    };
    extend(extend, 0);
    return result;
}

} // namespace

bool Instance::has_edge(const Edge& e) const {
    return std::binary_search(edges.begin(), edges.end(), e);
}

unsigned long long Instance::product_of_sizes() const {
    unsigned long long prod = 1;
    for (const auto& c : classes) {
        const auto s = static_cast<unsigned long long>(c.size());
        if (s == 0) return 0;
        if (prod > std::numeric_limits<unsigned long long>::max() / s)
            return std::numeric_limits<unsigned long long>::max();
        prod *= s;
    }
    return prod;
}

Instance make_instance(int k, ClassList classes, std::vector<Edge> edges) {
    check_arity(k);
    if (classes.size() != static_cast<std::size_t>(k))
        throw std::invalid_argument("class count does not match arity");
    for (std::size_t i = 0; i < classes.size(); ++i) {
        std::unordered_set<std::string> seen;
        for (const auto& el : classes[i])
            if (!seen.insert(el).second)
                throw std::invalid_argument("duplicate element in class " + std::to_string(i));
    }
    for (const auto& e : edges) {
        if (e.size() != static_cast<std::size_t>(k))
            throw std::invalid_argument("edge arity mismatch");
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] < 0 || static_cast<std::size_t>(e[i]) >= classes[i].size())
                throw std::invalid_argument("edge index out of range in class " + std::to_string(i));
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw std::invalid_argument("duplicate edge");
    Instance inst;
    inst.k = k;
    inst.classes = std::move(classes);
    inst.edges = std::move(edges);
    return inst;
}

Instance induce(const Relation& rel, const ClassList& classes) {
    check_arity(rel.k);
    if (!rel.membership) throw std::invalid_argument("relation has no membership predicate");
    if (classes.size() != static_cast<std::size_t>(rel.k))
        throw std::invalid_argument("arity mismatch between relation and classes");

    const int k = rel.k;
    std::vector<Edge> edges;
    std::vector<std::string> tuple(static_cast<std::size_t>(k));
    Edge idx(static_cast<std::size_t>(k), 0);
    bool empty = false;
    for (const auto& c : classes)
        if (c.empty()) empty = true;

    if (!empty) {
        // Odometer over the product of the classes.
        for (int i = 0; i < k; ++i) tuple[static_cast<std::size_t>(i)] = classes[static_cast<std::size_t>(i)][0];
        while (true) {
            if (rel.membership(tuple)) edges.push_back(idx);
            int pos = k - 1;
            while (pos >= 0) {
                auto& j = idx[static_cast<std::size_t>(pos)];
                if (static_cast<std::size_t>(++j) < classes[static_cast<std::size_t>(pos)].size()) {
                    tuple[static_cast<std::size_t>(pos)] = classes[static_cast<std::size_t>(pos)][static_cast<std::size_t>(j)];
                    break;
                }
                j = 0;
                tuple[static_cast<std::size_t>(pos)] = classes[static_cast<std::size_t>(pos)][0];
                --pos;
            }
            if (pos < 0) break;
        }
    }
    return make_instance(k, classes, std::move(edges));
}

Instance induce_canonical(const Relation& rel) {
    if (rel.classes.empty()) throw std::invalid_argument("relation has no canonical classes");
    return induce(rel, rel.classes);
}

Relation relation_from_instance(const Instance& inst) {
    // Element -> index maps, captured by value.
    std::vector<std::unordered_map<std::string, std::int32_t>> index(inst.classes.size());
    for (std::size_t i = 0; i < inst.classes.size(); ++i)
        for (std::size_t j = 0; j < inst.classes[i].size(); ++j)
            index[i][inst.classes[i][j]] = static_cast<std::int32_t>(j);

    auto edges = inst.edges;
    Relation rel;
    rel.k = inst.k;
    rel.classes = inst.classes;
    rel.family = "instance";
    rel.membership = [index = std::move(index), edges = std::move(edges)](const std::vector<std::string>& tuple) {
        Edge e(tuple.size());
        for (std::size_t i = 0; i < tuple.size(); ++i) {
            auto it = index[i].find(tuple[i]);
            if (it == index[i].end()) return false;
            e[i] = it->second;
        }
        return std::binary_search(edges.begin(), edges.end(), e);
    };
    return rel;
}

bool is_homogeneous(const Instance& inst) {
    const auto count = static_cast<unsigned long long>(inst.edges.size());
    return count == 0 || count == inst.product_of_sizes();
}

std::optional<CompleteWitness> find_complete(const Instance& inst, int u) {
    if (u < 1) throw std::invalid_argument("u must be >= 1");
    IndexedGraph g;
    for (const auto& c : inst.classes) g.sizes.push_back(static_cast<std::int64_t>(c.size()));
    g.edges = inst.edges;
    auto found = search_complete(g, u);
    if (!found) return std::nullopt;
    for (auto& s : *found) std::sort(s.begin(), s.end());
    return CompleteWitness{std::move(*found)};
}

bool contains_complete(const Instance& inst, int u) { return find_complete(inst, u).has_value(); }

bool witness_in_edges(const Instance& inst, const CompleteWitness& w) {
    if (w.subsets.size() != static_cast<std::size_t>(inst.k)) return false;
    Edge e(static_cast<std::size_t>(inst.k), 0);
    std::vector<std::size_t> pos(static_cast<std::size_t>(inst.k), 0);
    while (true) {
        for (std::size_t i = 0; i < pos.size(); ++i) e[i] = w.subsets[i][pos[i]];
        if (!inst.has_edge(e)) return false;
        std::size_t level = pos.size();
        while (level-- > 0) {
            if (++pos[level] < w.subsets[level].size()) break;
            pos[level] = 0;
            if (level == 0) return true;
        }
    }
}

Relation intersect_fibers(const Relation& rel, int class_index, const ElementList& pins) {
    check_arity(rel.k);
    if (rel.k < 2) throw std::invalid_argument("intersect_fibers requires arity >= 2");
    if (class_index < 0 || class_index >= rel.k) throw std::invalid_argument("class index out of range");
    if (pins.empty()) throw std::invalid_argument("at least one pin required");
    {
        std::unordered_set<std::string> seen;
        for (const auto& p : pins)
            if (!seen.insert(p).second) throw std::invalid_argument("duplicate pins");
    }

    Relation out;
    out.k = rel.k - 1;
    for (std::size_t i = 0; i < rel.classes.size(); ++i)
        if (static_cast<int>(i) != class_index) out.classes.push_back(rel.classes[i]);
    out.family = rel.family.empty() ? std::string("fibers") : rel.family + "|fibers";
    out.params = rel.params;
    out.seed = rel.seed;

    const int k = rel.k;
    out.membership = [inner = rel.membership, class_index, pins, k](const std::vector<std::string>& tuple) {
        if (tuple.size() != static_cast<std::size_t>(k - 1))
            throw std::invalid_argument("tuple arity mismatch");
        std::vector<std::string> full(static_cast<std::size_t>(k));
        for (std::size_t i = 0, j = 0; i < static_cast<std::size_t>(k); ++i)
            if (static_cast<int>(i) != class_index) full[i] = tuple[j++];
        for (const auto& pin : pins) {
            full[static_cast<std::size_t>(class_index)] = pin;
            if (!inner(full)) return false;
        }
        return true;
    };
    return out;
}

} // namespace zlab
