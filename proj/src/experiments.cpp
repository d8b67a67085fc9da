#include "zlab/experiments.hpp"

#include "zlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
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

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void validate_config(const SweepConfig& config) {
    if (config.family.name.empty()) throw SweepConfigError("family name required");
    if (config.grid_param.empty()) throw SweepConfigError("grid_param required");
    if (config.grid.empty()) throw SweepConfigError("grid must be nonempty");
    for (std::size_t t = 1; t < config.grid.size(); ++t)
        if (!(config.grid[t] > config.grid[t - 1])) throw SweepConfigError("grid must be increasing");
    if (config.u < 1) throw SweepConfigError("u must be >= 1");
    if (!(config.epsilon > 0.0)) throw SweepConfigError("epsilon must be positive");
    if (config.format != "csv" && config.format != "json")
        throw SweepConfigError("format must be csv or json");
    if (config.tuple.c.empty()) throw SweepConfigError("tuple exponents required");
    for (double ci : config.tuple.c)
        if (!(ci >= 1.0)) throw SweepConfigError("tuple exponents must be >= 1 for bound evaluation");
}

} // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
    validate_config(config);
    std::vector<SweepRow> rows(config.grid.size());
    parallel_for(config.grid.size(), [&](std::size_t t) {
        FamilySpec spec = config.family;
        spec.params[config.grid_param] = static_cast<double>(config.grid[t]);
        if (config.seed != 0) spec.seed = splitmix64(config.seed + t);
        Instance inst;
        std::string params;
        try {
            const Relation rel = generate_family(spec);
            params = rel.params;
            inst = induce_canonical(rel);
        } catch (const std::exception& e) {
            throw GenerationError("grid point " + std::to_string(t) + " (" + config.grid_param + "=" +
                                  std::to_string(config.grid[t]) + "): " + e.what());
        }
        if (inst.k != static_cast<int>(config.tuple.c.size()))
            throw SweepConfigError("tuple arity does not match family arity");

        SweepRow row;
        row.family = spec.name;
        row.params = params;
        row.k = inst.k;
        row.u = config.u;
        std::vector<double> sizes;
        for (int i = 0; i < inst.k; ++i) {
            row.n.push_back(inst.class_size(i));
            sizes.push_back(static_cast<double>(inst.class_size(i)));
        }
        row.edges = inst.edge_count();
        row.free_flag = !contains_complete(inst, config.u);
        const auto rep = evaluate_report(config.tuple.c, sizes, config.epsilon, config.u, row.edges);
        row.f_value = rep.f_value;
        row.e_value = rep.e_value;
        row.kst_exp = rep.kst_exponent;
        row.erdos_exp = rep.erdos_exponent;
        row.ratio = static_cast<double>(row.edges) / rep.f_value;
        rows[t] = std::move(row);
    });
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    if (rows.empty()) return "";
    std::string out = "family,params,k,u";
    for (int i = 1; i <= rows.front().k; ++i) out += ",n" + std::to_string(i);
    out += ",edges,free,f_value,e_value,kst_exp,erdos_exp,ratio\n";
    for (const auto& r : rows) {
        out += r.family + "," + r.params + "," + std::to_string(r.k) + "," + std::to_string(r.u);
        for (auto n : r.n) out += "," + std::to_string(n);
        out += "," + std::to_string(r.edges);
        out += r.free_flag ? ",1" : ",0";
        out += "," + fmt_double(r.f_value) + "," + fmt_double(r.e_value) + "," + fmt_double(r.kst_exp) +
               "," + fmt_double(r.erdos_exp) + "," + fmt_double(r.ratio) + "\n";
    }
    return out;
}

DecompositionAudit audit_decomposition(const Instance& inst, const RegularityWitness& w) {
    const auto k = static_cast<std::size_t>(inst.k);
    if (w.parts.size() != k) throw std::invalid_argument("witness does not match instance arity");

    std::vector<std::vector<std::int32_t>> block_of(k);
    std::vector<std::int64_t> radix(k);
    std::vector<std::vector<std::int64_t>> block_size(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t n = inst.classes[i].size();
        block_of[i].assign(n, -1);
        radix[i] = static_cast<std::int64_t>(w.parts[i].size());
        if (radix[i] < 1) throw std::invalid_argument("witness class " + std::to_string(i) + " has no blocks");
        block_size[i].assign(w.parts[i].size(), 0);
        for (std::size_t b = 0; b < w.parts[i].size(); ++b)
            for (auto el : w.parts[i][b]) {
                if (el < 0 || static_cast<std::size_t>(el) >= n || block_of[i][static_cast<std::size_t>(el)] != -1)
                    throw std::invalid_argument("witness blocks do not partition class " + std::to_string(i));
                block_of[i][static_cast<std::size_t>(el)] = static_cast<std::int32_t>(b);
                ++block_size[i][b];
            }
        for (std::size_t el = 0; el < n; ++el)
            if (block_of[i][el] == -1)
                throw std::invalid_argument("witness blocks do not cover class " + std::to_string(i));
    }
    for (const auto& cell : w.sigma) {
        if (cell.size() != k) throw std::invalid_argument("sigma entry arity mismatch");
        for (std::size_t i = 0; i < k; ++i)
            if (cell[i] < 0 || cell[i] >= radix[i])
                throw std::invalid_argument("sigma entry indexes a nonexistent block");
    }

    std::unordered_set<std::uint64_t> sigma_set;
    auto encode = [&](const Edge& cell) {
        std::uint64_t code = 0;
        for (std::size_t i = 0; i < k; ++i)
            code = code * static_cast<std::uint64_t>(radix[i]) + static_cast<std::uint64_t>(cell[i]);
        return code;
    };
    for (const auto& cell : w.sigma) sigma_set.insert(encode(cell));

    DecompositionAudit audit;
    audit.sigma_count = sigma_set.size();
    audit.per_class_block_edges.resize(k);
    for (std::size_t i = 0; i < k; ++i)
        audit.per_class_block_edges[i].assign(w.parts[i].size(), 0);

    Edge cell(k, 0);
    for (const auto& e : inst.edges) {
        for (std::size_t i = 0; i < k; ++i) {
            cell[i] = block_of[i][static_cast<std::size_t>(e[i])];
            ++audit.per_class_block_edges[i][static_cast<std::size_t>(cell[i])];
        }
        if (sigma_set.count(encode(cell)))
            ++audit.i1;
        else
            ++audit.i2;
    }

    double csum = 0.0;
    for (double ci : w.tuple.c) csum += ci;
    audit.sigma_cap = std::pow(2.0, static_cast<double>(k)) *
                      std::pow(w.tuple.lambda, static_cast<double>(k) + 1.0) *
                      std::pow(w.delta, 1.0 - csum);

    audit.near_equal_blocks = true;
    for (std::size_t i = 0; i < k; ++i) {
        const auto [mn, mx] = std::minmax_element(block_size[i].begin(), block_size[i].end());
        const double n = static_cast<double>(inst.classes[i].size());
        const double kcount = static_cast<double>(radix[i]);
        if (*mx - *mn > 1 || static_cast<double>(*mn) < n / (2.0 * kcount)) audit.near_equal_blocks = false;
    }
    return audit;
}

} // namespace zlab
