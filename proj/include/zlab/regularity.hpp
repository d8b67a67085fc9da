#pragma once

#include "zlab/bounds.hpp"
#include "zlab/hypergraph.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace zlab {

// Per-class partitions of the element index ranges, a bad-cell index set
// sigma, and the parameters (delta, c, lambda). Blocks hold element indices
// of the paired instance; sigma holds k-tuples of block indices.
struct RegularityWitness {
    double delta = 0.0;
    RegularityTuple tuple;
    std::vector<std::vector<std::vector<std::int32_t>>> parts;
    std::vector<Edge> sigma;
};

enum class VerifyMode { Weak, Strong };

struct VerificationOutcome {
    bool passed = false;
    bool structurally_valid = false;
    std::vector<std::string> structural_errors;
    // Bad-cell mass divided by n_1...n_k; condition (a) requires <= lambda*delta.
    double meagre_mass = 0.0;
    unsigned long long bad_mass = 0;
    // Per class: K_i / (lambda * delta^{-c_i}); condition (c) requires <= 1.
    std::vector<double> max_size_ratio;
    // Cells outside sigma that are not homogeneous.
    std::vector<Edge> offending_cells;
    // Per class: max block size - min block size.
    std::vector<std::int64_t> equipartition_slack;
    bool strong_requested = false;
};

// Checks condition (a) meagre bad cells, (b) homogeneous good cells,
// (c) polynomially many cells, and (strong mode) equipartitions. Structural
// violations are reported in structural_errors, separately from condition
// failures.
VerificationOutcome verify_witness(const Instance& inst, const RegularityWitness& w, VerifyMode mode);

struct RefineStats {
    std::vector<std::int64_t> piece_size;               // N_i = ceil(delta^{c_i+1} n_i / 2)
    std::vector<int> full_blocks;                       // K'_i, pieces of exact size N_i
    std::vector<int> remainder_blocks;                  // surviving remainder-derived blocks
    std::vector<unsigned long long> remainder_mass;     // total size of remainder blocks, post-rebalance
    unsigned long long bad_mass = 0;                    // mass of the new bad set
};

struct RefineResult {
    RegularityWitness witness;
    RefineStats stats;
};

// Weak -> strong refinement: cuts each block into pieces of size N_i plus a
// remainder, rebalances to an exact equipartition (remainder-derived blocks
// absorb surplus; full pieces only shed elements, so they stay inside their
// original block), and marks bad every cell touching a remainder-derived
// block plus every cell whose enclosing original cell was bad. The output
// has tuple c+1 and coefficient (k+2)*lambda.
// Preconditions: verify_witness(inst, w, Weak).passed and delta < 1/lambda.
RefineResult refine_to_strong(const Instance& inst, const RegularityWitness& w);

struct RestrictResult {
    Instance instance; // induced instance of the intersection relation on classes 2..k
    RegularityWitness witness;
};

// Restriction along class 1: given a strong witness whose class-1 partition
// is into singletons and pins equal to the class-1 elements, produces the
// intersection instance on the remaining classes together with the witness
// keeping the class-2..k partitions, the projected bad set, tuple c without
// its first entry, and the same lambda.
// Preconditions: verify_witness(inst, w, Strong).passed, singleton class-1
// partition, delta < u^{-c_1}.
RestrictResult restrict_witness(const Instance& inst, const RegularityWitness& w, const ElementList& pins);

struct DeltaSearchPoint {
    double delta = 0.0;
    bool found = false;
    std::vector<int> block_counts;
    double bad_fraction = 0.0;
    int evaluations = 0;
};

struct TupleEstimate {
    std::vector<double> c_hat;
    double lambda_hat = 0.0;
    bool fit_valid = false;
    bool budget_exhausted = false; // true when some grid point found no passing partition
    std::vector<DeltaSearchPoint> points;
    std::vector<std::vector<double>> residuals; // per class, per successful grid point
};

// Empirical regularity-tuple estimator. For each delta in the (strictly
// decreasing) grid, greedily splits blocks of the worst non-homogeneous cell
// at the median until the non-homogeneous mass is at most delta * n_1...n_k,
// then tries lowest-index adjacent merges; the budget caps candidate
// evaluations per grid point. Slopes of log K_i against log(1/delta) give
// c_hat; lambda_hat is the smallest coefficient covering the observed block
// counts. Grid points run concurrently with seeds derived from `seed`.
TupleEstimate estimate_tuple(const Relation& rel, const std::vector<std::size_t>& class_sizes,
                             const std::vector<double>& delta_grid, int search_budget, std::uint64_t seed);

} // namespace zlab
