#pragma once

#include "zlab/bounds.hpp"
#include "zlab/families.hpp"
#include "zlab/regularity.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace zlab {

struct SweepConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GenerationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One sweep: a family, a grid of values substituted into `grid_param`, and
// the evaluation parameters. When `seed` is nonzero, per-point family seeds
// are derived from it; otherwise the family's own seed is used everywhere.
struct SweepConfig {
    FamilySpec family;
    std::string grid_param;
    std::vector<std::int64_t> grid;
    int u = 2;
    RegularityTuple tuple;
    double epsilon = 0.05;
    std::string out_path;
    std::string format = "csv"; // csv | json
    std::uint64_t seed = 0;
};

struct SweepRow {
    std::string family;
    std::string params;
    int k = 0;
    int u = 0;
    std::vector<std::size_t> n;
    unsigned long long edges = 0;
    bool free_flag = false;
    double f_value = 0.0;
    double e_value = 0.0;
    double kst_exp = 0.0;
    double erdos_exp = 0.0;
    double ratio = 0.0; // edges / f_value
};

// Generates one instance per grid point (concurrently; rows ordered by grid
// index), counts edges exactly, evaluates the bounds, and flags
// K_{u,...,u}-freeness. Invalid configs throw SweepConfigError; generator
// failures throw GenerationError naming the grid point.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

// Fixed schema: family,params,k,u,n1..nk,edges,free,f_value,e_value,
// kst_exp,erdos_exp,ratio.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

struct DecompositionAudit {
    unsigned long long i1 = 0; // edge mass inside bad cells
    unsigned long long i2 = 0; // edge mass in good cells
    std::vector<std::vector<unsigned long long>> per_class_block_edges;
    std::size_t sigma_count = 0;
    double sigma_cap = 0.0;        // 2^k lambda^{k+1} delta^{1-sum c_i}, reported not asserted
    bool near_equal_blocks = false; // block sizes within 1 and >= n_i/(2 K_i)
};

// Splits the exact edge count into bad-cell and good-cell mass; i1 + i2
// always equals the edge count. Throws std::invalid_argument when the
// witness does not fit the instance.
DecompositionAudit audit_decomposition(const Instance& inst, const RegularityWitness& w);

} // namespace zlab
