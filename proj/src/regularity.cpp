#include "zlab/regularity.hpp"

#include "zlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace zlab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

struct WitnessIndex {
    std::vector<std::size_t> sizes;                    // n_i
    std::vector<std::vector<std::int32_t>> block_of;   // element -> block
    std::vector<std::vector<std::int64_t>> block_size; // block -> size
    std::vector<std::int64_t> block_counts;            // K_i
};

// Fills `errors` and returns the index tables when the witness is
// structurally sound against the instance.
bool structural_check(const Instance& inst, const RegularityWitness& w, std::vector<std::string>& errors,
                      WitnessIndex& out) {
    const auto k = static_cast<std::size_t>(inst.k);
    if (w.parts.size() != k) errors.push_back("partition count does not match instance arity");
    if (w.tuple.c.size() != k) errors.push_back("tuple length does not match instance arity");
    if (!(w.delta > 0.0 && w.delta < 1.0)) errors.push_back("delta must lie in (0,1)");
    if (!(w.tuple.lambda > 1.0)) errors.push_back("coefficient lambda must be > 1");
    for (double ci : w.tuple.c)
        if (!std::isfinite(ci) || ci < 0.0) errors.push_back("tuple exponents must be finite and >= 0");
    if (!errors.empty()) return false;

    out.sizes.resize(k);
    out.block_of.resize(k);
    out.block_size.resize(k);
    out.block_counts.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t n = inst.classes[i].size();
        out.sizes[i] = n;
        const auto& blocks = w.parts[i];
        if (blocks.empty()) {
            errors.push_back("class " + std::to_string(i) + " has no blocks");
            continue;
        }
        out.block_counts[i] = static_cast<std::int64_t>(blocks.size());
        out.block_of[i].assign(n, -1);
        out.block_size[i].assign(blocks.size(), 0);
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            if (blocks[b].empty()) {
                errors.push_back("empty block in class " + std::to_string(i));
                continue;
            }
            for (auto el : blocks[b]) {
                if (el < 0 || static_cast<std::size_t>(el) >= n) {
                    errors.push_back("block element out of range in class " + std::to_string(i));
                    continue;
                }
                if (out.block_of[i][static_cast<std::size_t>(el)] != -1)
                    errors.push_back("element assigned to two blocks in class " + std::to_string(i));
                out.block_of[i][static_cast<std::size_t>(el)] = static_cast<std::int32_t>(b);
                ++out.block_size[i][b];
            }
        }
        for (std::size_t el = 0; el < n; ++el)
            if (out.block_of[i][el] == -1) {
                errors.push_back("blocks do not cover class " + std::to_string(i));
                break;
            }
    }
    for (const auto& cell : w.sigma) {
        if (cell.size() != k) {
            errors.push_back("sigma entry arity mismatch");
            break;
        }
        bool bad = false;
        for (std::size_t i = 0; i < k && i < out.block_counts.size(); ++i)
            if (cell[i] < 0 || cell[i] >= out.block_counts[i]) bad = true;
        if (bad) {
            errors.push_back("sigma entry indexes a nonexistent block");
            break;
        }
    }
    return errors.empty();
}

std::uint64_t encode_cell(const Edge& cell, const std::vector<std::int64_t>& radix) {
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < cell.size(); ++i)
        code = code * static_cast<std::uint64_t>(radix[i]) + static_cast<std::uint64_t>(cell[i]);
    return code;
}

Edge decode_cell(std::uint64_t code, const std::vector<std::int64_t>& radix) {
    Edge cell(radix.size(), 0);
    for (std::size_t i = radix.size(); i-- > 0;) {
        cell[i] = static_cast<std::int32_t>(code % static_cast<std::uint64_t>(radix[i]));
        code /= static_cast<std::uint64_t>(radix[i]);
    }
    return cell;
}

void guard_cell_space(const std::vector<std::int64_t>& radix) {
    long double prod = 1;
    for (auto r : radix) prod *= static_cast<long double>(r);
    if (prod > 9e18L) throw std::runtime_error("cell space too large");
}

std::vector<Edge> dedup_cells(std::vector<Edge> cells) {
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    return cells;
}

unsigned long long cell_mass(const Edge& cell, const WitnessIndex& idx) {
    unsigned long long m = 1;
    for (std::size_t i = 0; i < cell.size(); ++i)
        m *= static_cast<unsigned long long>(idx.block_size[i][static_cast<std::size_t>(cell[i])]);
    return m;
}

} // namespace

VerificationOutcome verify_witness(const Instance& inst, const RegularityWitness& w, VerifyMode mode) {
    VerificationOutcome out;
    out.strong_requested = (mode == VerifyMode::Strong);

    WitnessIndex idx;
    if (!structural_check(inst, w, out.structural_errors, idx)) {
        out.structurally_valid = false;
        out.passed = false;
        return out;
    }
    out.structurally_valid = true;

    const auto k = static_cast<std::size_t>(inst.k);
    guard_cell_space(idx.block_counts);

    const auto sigma = dedup_cells(w.sigma);
    std::unordered_set<std::uint64_t> sigma_set;
    sigma_set.reserve(sigma.size() * 2);
    for (const auto& cell : sigma) sigma_set.insert(encode_cell(cell, idx.block_counts));

    // (a) meagre bad cells
    unsigned long long bad_mass = 0;
    for (const auto& cell : sigma) bad_mass += cell_mass(cell, idx);
    out.bad_mass = bad_mass;
    const long double total = [&] {
        long double p = 1;
        for (auto n : idx.sizes) p *= static_cast<long double>(n);
        return p;
    }();
    out.meagre_mass = static_cast<double>(static_cast<long double>(bad_mass) / total);

    // (b) homogeneous good cells: only cells containing at least one edge can
    // fail (empty cells are homogeneous), so bucketing the edges suffices.
    std::unordered_map<std::uint64_t, unsigned long long> counts;
    counts.reserve(inst.edges.size() * 2 + 1);
    Edge cell(k, 0);
    for (const auto& e : inst.edges) {
        for (std::size_t i = 0; i < k; ++i) cell[i] = idx.block_of[i][static_cast<std::size_t>(e[i])];
        ++counts[encode_cell(cell, idx.block_counts)];
    }
    for (const auto& [code, cnt] : counts) {
        if (sigma_set.count(code)) continue;
        Edge c = decode_cell(code, idx.block_counts);
        if (cnt != cell_mass(c, idx)) out.offending_cells.push_back(std::move(c));
    }
    std::sort(out.offending_cells.begin(), out.offending_cells.end());

    // (c) polynomially many cells, plus the equipartition slack.
    out.max_size_ratio.resize(k);
    out.equipartition_slack.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double cap = w.tuple.lambda * std::pow(w.delta, -w.tuple.c[i]);
        out.max_size_ratio[i] = static_cast<double>(idx.block_counts[i]) / cap;
        const auto [mn, mx] = std::minmax_element(idx.block_size[i].begin(), idx.block_size[i].end());
        out.equipartition_slack[i] = *mx - *mn;
    }

    bool ok = out.offending_cells.empty();
    ok = ok && static_cast<long double>(bad_mass) <=
                   static_cast<long double>(w.tuple.lambda) * static_cast<long double>(w.delta) * total;
    for (double r : out.max_size_ratio) ok = ok && r <= 1.0;
    if (out.strong_requested)
        for (auto s : out.equipartition_slack) ok = ok && s <= 1;
    out.passed = ok;
    return out;
}

RefineResult refine_to_strong(const Instance& inst, const RegularityWitness& w) {
    {
        auto pre = verify_witness(inst, w, VerifyMode::Weak);
        if (!pre.structurally_valid)
            throw std::invalid_argument("refine_to_strong: structurally invalid witness: " +
                                        pre.structural_errors.front());
        if (!pre.passed) throw std::invalid_argument("refine_to_strong requires a passing weak witness");
    }
    if (!(w.delta < 1.0 / w.tuple.lambda))
        throw std::invalid_argument("refine_to_strong requires delta < 1/lambda");

    const auto k = static_cast<std::size_t>(inst.k);
    const double delta = w.delta;

    RefineResult res;
    res.witness.delta = delta;
    res.witness.tuple.lambda = static_cast<double>(k + 2) * w.tuple.lambda;
    res.witness.tuple.c.resize(k);
    for (std::size_t i = 0; i < k; ++i) res.witness.tuple.c[i] = w.tuple.c[i] + 1.0;
    res.witness.parts.resize(k);
    res.stats.piece_size.resize(k);
    res.stats.full_blocks.resize(k);
    res.stats.remainder_blocks.resize(k);
    res.stats.remainder_mass.resize(k);

    // Parent original block of each full piece; -1 marks remainder-derived
    // blocks. Remainder blocks are numbered first within each class.
    std::vector<std::vector<std::int32_t>> parent(k);
    std::vector<std::int64_t> radix_old(k);

    for (std::size_t i = 0; i < k; ++i) {
        const auto n = static_cast<std::int64_t>(inst.classes[i].size());
        radix_old[i] = static_cast<std::int64_t>(w.parts[i].size());
        auto piece = static_cast<std::int64_t>(std::ceil(0.5 * std::pow(delta, w.tuple.c[i] + 1.0) *
                                                         static_cast<double>(n)));
        if (piece < 1) piece = 1;
        res.stats.piece_size[i] = piece;

        std::vector<std::vector<std::int32_t>> remainders, fulls;
        std::vector<std::int32_t> full_parent;
        for (std::size_t j = 0; j < w.parts[i].size(); ++j) {
            auto elems = w.parts[i][j];
            std::sort(elems.begin(), elems.end());
            const auto sz = static_cast<std::int64_t>(elems.size());
            const std::int64_t n_full = sz / piece;
            for (std::int64_t p = 0; p < n_full; ++p) {
                fulls.emplace_back(elems.begin() + p * piece, elems.begin() + (p + 1) * piece);
                full_parent.push_back(static_cast<std::int32_t>(j));
            }
            if (sz % piece != 0)
                remainders.emplace_back(elems.begin() + n_full * piece, elems.end());
        }
        res.stats.full_blocks[i] = static_cast<int>(fulls.size());
        res.stats.remainder_blocks[i] = static_cast<int>(remainders.size());

        const std::size_t s_count = remainders.size();
        auto& blocks = res.witness.parts[i];
        blocks = std::move(remainders);
        blocks.insert(blocks.end(), std::make_move_iterator(fulls.begin()), std::make_move_iterator(fulls.end()));
        auto& par = parent[i];
        par.assign(blocks.size(), -1);
        for (std::size_t b = 0; b < full_parent.size(); ++b) par[s_count + b] = full_parent[b];

        // Rebalance to an exact equipartition. Targets are n/L rounded; the
        // larger targets go to full pieces first so that only
        // remainder-derived blocks ever receive elements.
        const auto L = static_cast<std::int64_t>(blocks.size());
        const std::int64_t lo = n / L;
        const std::int64_t r = n % L;
        std::vector<std::int64_t> target(static_cast<std::size_t>(L), lo);
        {
            std::vector<std::size_t> order;
            for (std::size_t b = s_count; b < blocks.size(); ++b) order.push_back(b);
            std::vector<std::size_t> rem_ids(s_count);
            for (std::size_t b = 0; b < s_count; ++b) rem_ids[b] = b;
            std::sort(rem_ids.begin(), rem_ids.end(), [&](std::size_t a, std::size_t b) {
                if (blocks[a].size() != blocks[b].size()) return blocks[a].size() > blocks[b].size();
                return a < b;
            });
            order.insert(order.end(), rem_ids.begin(), rem_ids.end());
            for (std::int64_t t = 0; t < r; ++t) ++target[order[static_cast<std::size_t>(t)]];
        }
        std::deque<std::int32_t> pool;
        for (std::size_t b = 0; b < blocks.size(); ++b)
            while (static_cast<std::int64_t>(blocks[b].size()) > target[b]) {
                pool.push_back(blocks[b].back());
                blocks[b].pop_back();
            }
        for (std::size_t b = 0; b < blocks.size(); ++b)
            while (static_cast<std::int64_t>(blocks[b].size()) < target[b]) {
                blocks[b].push_back(pool.front());
                pool.pop_front();
            }
        unsigned long long rem_mass = 0;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            std::sort(blocks[b].begin(), blocks[b].end());
            if (b < s_count) rem_mass += blocks[b].size();
        }
        res.stats.remainder_mass[i] = rem_mass;
    }

    // New bad set: every cell touching a remainder-derived block, plus every
    // all-full-piece cell whose enclosing original cell was bad.
    std::vector<std::int64_t> radix_new(k);
    long double cell_count = 1;
    for (std::size_t i = 0; i < k; ++i) {
        radix_new[i] = static_cast<std::int64_t>(res.witness.parts[i].size());
        cell_count *= static_cast<long double>(radix_new[i]);
    }
    if (cell_count > 5e7L) throw std::runtime_error("refined bad set too large to enumerate");
    guard_cell_space(radix_old);

    std::unordered_set<std::uint64_t> old_sigma;
    for (const auto& cell : dedup_cells(w.sigma)) old_sigma.insert(encode_cell(cell, radix_old));

    Edge cell(k, 0);
    Edge parent_cell(k, 0);
    unsigned long long bad_mass = 0;
    while (true) {
        bool touches_remainder = false;
        for (std::size_t i = 0; i < k; ++i)
            if (parent[i][static_cast<std::size_t>(cell[i])] < 0) touches_remainder = true;
        bool bad = touches_remainder;
        if (!bad) {
            for (std::size_t i = 0; i < k; ++i)
                parent_cell[i] = parent[i][static_cast<std::size_t>(cell[i])];
            bad = old_sigma.count(encode_cell(parent_cell, radix_old)) > 0;
        }
        if (bad) {
            res.witness.sigma.push_back(cell);
            unsigned long long m = 1;
            for (std::size_t i = 0; i < k; ++i)
                m *= res.witness.parts[i][static_cast<std::size_t>(cell[i])].size();
            bad_mass += m;
        }
        std::size_t pos = k;
        bool wrapped = true;
        while (pos-- > 0) {
            if (++cell[pos] < radix_new[pos]) {
                wrapped = false;
                break;
            }
            cell[pos] = 0;
        }
        if (wrapped) break;
    }
    res.stats.bad_mass = bad_mass;
    return res;
}

RestrictResult restrict_witness(const Instance& inst, const RegularityWitness& w, const ElementList& pins) {
    if (inst.k < 2) throw std::invalid_argument("restrict_witness requires arity >= 2");
    {
        auto pre = verify_witness(inst, w, VerifyMode::Strong);
        if (!pre.structurally_valid)
            throw std::invalid_argument("restrict_witness: structurally invalid witness: " +
                                        pre.structural_errors.front());
        if (!pre.passed) throw std::invalid_argument("restrict_witness requires a passing strong witness");
    }
    for (const auto& block : w.parts[0])
        if (block.size() != 1) throw std::invalid_argument("class-1 partition must consist of singletons");

    const std::size_t u = inst.classes[0].size();
    if (pins.size() != u) throw std::invalid_argument("pins must enumerate class 1");
    {
        std::unordered_set<std::string> want(inst.classes[0].begin(), inst.classes[0].end());
        std::unordered_set<std::string> got(pins.begin(), pins.end());
        if (got.size() != pins.size()) throw std::invalid_argument("duplicate pins");
        if (want != got) throw std::invalid_argument("pins must enumerate class 1");
    }
    const double c1 = w.tuple.c[0];
    if (!(w.delta < std::pow(static_cast<double>(u), -c1)))
        throw std::invalid_argument("restrict_witness requires delta < u^{-c_1}");

    const auto k = static_cast<std::size_t>(inst.k);

    // Intersection of the class-1 fibers; edges are sorted lexicographically,
    // so the per-fiber projections come out sorted.
    std::vector<std::vector<Edge>> fibers(u);
    for (const auto& e : inst.edges)
        fibers[static_cast<std::size_t>(e[0])].emplace_back(e.begin() + 1, e.end());
    std::vector<Edge> common = std::move(fibers[0]);
    for (std::size_t j = 1; j < u && !common.empty(); ++j) {
        std::vector<Edge> next;
        std::set_intersection(common.begin(), common.end(), fibers[j].begin(), fibers[j].end(),
                              std::back_inserter(next));
        common = std::move(next);
    }

    RestrictResult res;
    res.instance = make_instance(inst.k - 1, ClassList(inst.classes.begin() + 1, inst.classes.end()),
                                 std::move(common));
    res.witness.delta = w.delta;
    res.witness.tuple.lambda = w.tuple.lambda;
    res.witness.tuple.c.assign(w.tuple.c.begin() + 1, w.tuple.c.end());
    res.witness.parts.assign(w.parts.begin() + 1, w.parts.end());
    std::vector<Edge> projected;
    projected.reserve(w.sigma.size());
    for (const auto& cell : w.sigma) projected.emplace_back(cell.begin() + 1, cell.end());
    res.witness.sigma = dedup_cells(std::move(projected));
    (void)k;
    return res;
}

namespace {

// Greedy partition search state for one delta point.
struct SearchState {
    std::vector<std::vector<std::vector<std::int32_t>>> blocks; // per class
    const Instance* inst = nullptr;

    struct Eval {
        unsigned long long bad_mass = 0;
        std::vector<Edge> bad_cells; // sorted lex
        std::vector<unsigned long long> bad_cell_mass;
    };

    Eval evaluate() const {
        const auto k = static_cast<std::size_t>(inst->k);
        std::vector<std::vector<std::int32_t>> block_of(k);
        std::vector<std::int64_t> radix(k);
        for (std::size_t i = 0; i < k; ++i) {
            block_of[i].assign(inst->classes[i].size(), 0);
            radix[i] = static_cast<std::int64_t>(blocks[i].size());
            for (std::size_t b = 0; b < blocks[i].size(); ++b)
                for (auto el : blocks[i][b]) block_of[i][static_cast<std::size_t>(el)] = static_cast<std::int32_t>(b);
        }
        guard_cell_space(radix);
        std::unordered_map<std::uint64_t, unsigned long long> counts;
        counts.reserve(inst->edges.size() * 2 + 1);
        Edge cell(k, 0);
        for (const auto& e : inst->edges) {
            for (std::size_t i = 0; i < k; ++i) cell[i] = block_of[i][static_cast<std::size_t>(e[i])];
            ++counts[encode_cell(cell, radix)];
        }
        Eval ev;
        for (const auto& [code, cnt] : counts) {
            Edge c = decode_cell(code, radix);
            unsigned long long m = 1;
            for (std::size_t i = 0; i < k; ++i) m *= blocks[i][static_cast<std::size_t>(c[i])].size();
            if (cnt != m) {
                ev.bad_mass += m;
                ev.bad_cells.push_back(std::move(c));
            }
        }
        // Sort bad cells for deterministic tie-breaking.
        std::sort(ev.bad_cells.begin(), ev.bad_cells.end());
        ev.bad_cell_mass.resize(ev.bad_cells.size());
        for (std::size_t i = 0; i < ev.bad_cells.size(); ++i) {
            unsigned long long m = 1;
            for (std::size_t j = 0; j < k; ++j)
                m *= blocks[j][static_cast<std::size_t>(ev.bad_cells[i][j])].size();
            ev.bad_cell_mass[i] = m;
        }
        return ev;
    }
};

DeltaSearchPoint search_delta_point(const Instance& inst, double delta, int budget, std::uint64_t seed) {
    const auto k = static_cast<std::size_t>(inst.k);
    DeltaSearchPoint point;
    point.delta = delta;

    long double total = 1;
    for (const auto& c : inst.classes) total *= static_cast<long double>(c.size());
    const long double budget_mass = static_cast<long double>(delta) * total;

    SearchState st;
    st.inst = &inst;
    st.blocks.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<std::int32_t> all(inst.classes[i].size());
        for (std::size_t e = 0; e < all.size(); ++e) all[e] = static_cast<std::int32_t>(e);
        st.blocks[i].push_back(std::move(all));
    }

    int evals = 0;
    bool found = false;
    unsigned long long last_mass = 0;

    // Split phase: halve the largest block of the worst bad cell.
    while (evals < budget) {
        ++evals;
        auto ev = st.evaluate();
        last_mass = ev.bad_mass;
        if (static_cast<long double>(ev.bad_mass) <= budget_mass) {
            found = true;
            break;
        }
        std::size_t worst = 0;
        for (std::size_t i = 1; i < ev.bad_cells.size(); ++i)
            if (ev.bad_cell_mass[i] > ev.bad_cell_mass[worst]) worst = i; // ties keep the lex-smallest
        const Edge& cell = ev.bad_cells[worst];
        std::size_t cls = k;
        std::size_t best_size = 1;
        for (std::size_t i = 0; i < k; ++i) {
            const auto sz = st.blocks[i][static_cast<std::size_t>(cell[i])].size();
            if (sz > best_size) {
                best_size = sz;
                cls = i;
            }
        }
        if (cls == k) break; // all singleton blocks; cannot happen for a bad cell
        auto& blk = st.blocks[cls];
        const auto b = static_cast<std::size_t>(cell[cls]);
        auto elems = blk[b];
        std::sort(elems.begin(), elems.end());
        const std::size_t keep = (elems.size() + 1) / 2;
        std::vector<std::int32_t> head(elems.begin(), elems.begin() + static_cast<std::ptrdiff_t>(keep));
        std::vector<std::int32_t> tail(elems.begin() + static_cast<std::ptrdiff_t>(keep), elems.end());
        blk[b] = std::move(head);
        blk.insert(blk.begin() + static_cast<std::ptrdiff_t>(b) + 1, std::move(tail));
    }

    if (found) {
        // Merge phase: lowest-index adjacent pairs first, then a seeded pass
        // over random pairs; keep a merge only if the mass budget still holds.
        auto try_merge = [&](std::size_t cls, std::size_t a, std::size_t b) -> bool {
            if (evals >= budget) return false;
            auto saved = st.blocks[cls];
            auto merged = st.blocks[cls][a];
            merged.insert(merged.end(), st.blocks[cls][b].begin(), st.blocks[cls][b].end());
            std::sort(merged.begin(), merged.end());
            st.blocks[cls][a] = std::move(merged);
            st.blocks[cls].erase(st.blocks[cls].begin() + static_cast<std::ptrdiff_t>(b));
            ++evals;
            auto ev = st.evaluate();
            if (static_cast<long double>(ev.bad_mass) <= budget_mass) {
                last_mass = ev.bad_mass;
                return true;
            }
            st.blocks[cls] = std::move(saved);
            return false;
        };
        bool improved = true;
        while (improved && evals < budget) {
            improved = false;
            for (std::size_t i = 0; i < k && evals < budget; ++i)
                for (std::size_t b = 0; b + 1 < st.blocks[i].size() && evals < budget;)
                    if (try_merge(i, b, b + 1))
                        improved = true;
                    else
                        ++b;
        }
        std::uint64_t state = seed;
        for (int attempt = 0; attempt < 2 * static_cast<int>(k) + 8 && evals < budget; ++attempt) {
            state = splitmix64(state);
            const std::size_t i = static_cast<std::size_t>(state % k);
            if (st.blocks[i].size() < 2) continue;
            const std::uint64_t h = splitmix64(state);
            std::size_t a = static_cast<std::size_t>(h % st.blocks[i].size());
            std::size_t b = static_cast<std::size_t>(splitmix64(h) % st.blocks[i].size());
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            try_merge(i, a, b);
        }
    }

    point.found = found;
    point.evaluations = evals;
    point.bad_fraction = static_cast<double>(static_cast<long double>(last_mass) / total);
    for (std::size_t i = 0; i < k; ++i) point.block_counts.push_back(static_cast<int>(st.blocks[i].size()));
    return point;
}

} // namespace

TupleEstimate estimate_tuple(const Relation& rel, const std::vector<std::size_t>& class_sizes,
                             const std::vector<double>& delta_grid, int search_budget, std::uint64_t seed) {
    if (delta_grid.size() < 3) throw std::invalid_argument("delta grid needs at least 3 points");
    for (std::size_t t = 0; t < delta_grid.size(); ++t) {
        if (!(delta_grid[t] > 0.0 && delta_grid[t] < 1.0))
            throw std::invalid_argument("delta grid values must lie in (0,1)");
        if (t > 0 && !(delta_grid[t] < delta_grid[t - 1]))
            throw std::invalid_argument("delta grid must be strictly decreasing");
    }
    if (search_budget < 1) throw std::invalid_argument("search budget must be >= 1");
    if (rel.classes.size() != static_cast<std::size_t>(rel.k))
        throw std::invalid_argument("relation has no canonical classes");
    if (class_sizes.size() != static_cast<std::size_t>(rel.k))
        throw std::invalid_argument("size sequence length mismatch");

    ClassList classes(class_sizes.size());
    for (std::size_t i = 0; i < class_sizes.size(); ++i) {
        if (class_sizes[i] < 1) throw std::invalid_argument("class sizes must be positive");
        if (class_sizes[i] > rel.classes[i].size())
            throw std::invalid_argument("class size exceeds canonical class");
        classes[i].assign(rel.classes[i].begin(),
                          rel.classes[i].begin() + static_cast<std::ptrdiff_t>(class_sizes[i]));
    }
    const Instance inst = induce(rel, classes);
    const auto k = static_cast<std::size_t>(inst.k);

    TupleEstimate est;
    est.points.resize(delta_grid.size());
    parallel_for(delta_grid.size(), [&](std::size_t t) {
        est.points[t] = search_delta_point(inst, delta_grid[t], search_budget, splitmix64(seed + t));
    });

    std::vector<std::size_t> good;
    for (std::size_t t = 0; t < est.points.size(); ++t) {
        if (est.points[t].found)
            good.push_back(t);
        else
            est.budget_exhausted = true;
    }
    if (good.size() < 2) {
        est.fit_valid = false;
        return est;
    }
    est.fit_valid = true;

    std::vector<double> xs;
    for (auto t : good) xs.push_back(std::log(1.0 / est.points[t].delta));
    double xbar = 0.0;
    for (double x : xs) xbar += x;
    xbar /= static_cast<double>(xs.size());
    double varx = 0.0;
    for (double x : xs) varx += (x - xbar) * (x - xbar);

    est.c_hat.resize(k);
    est.residuals.assign(k, {});
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<double> ys;
        for (auto t : good) ys.push_back(std::log(static_cast<double>(est.points[t].block_counts[i])));
        double ybar = 0.0;
        for (double y : ys) ybar += y;
        ybar /= static_cast<double>(ys.size());
        double cov = 0.0;
        for (std::size_t j = 0; j < xs.size(); ++j) cov += (xs[j] - xbar) * (ys[j] - ybar);
        const double slope = cov / varx;
        est.c_hat[i] = std::max(0.0, slope);
        for (std::size_t j = 0; j < xs.size(); ++j)
            est.residuals[i].push_back(ys[j] - (ybar + slope * (xs[j] - xbar)));
    }

    double lambda_hat = 0.0;
    for (auto t : good)
        for (std::size_t i = 0; i < k; ++i)
            lambda_hat = std::max(lambda_hat, static_cast<double>(est.points[t].block_counts[i]) *
                                                  std::pow(est.points[t].delta, est.c_hat[i]));
    est.lambda_hat = std::max(lambda_hat, 1.0 + 1e-9);
    return est;
}

} // namespace zlab
