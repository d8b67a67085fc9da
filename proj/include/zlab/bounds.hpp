#pragma once

#include <span>
#include <utility>
#include <vector>

namespace zlab {

// Exponent vector c (entries >= 0) together with a coefficient lambda > 1.
struct RegularityTuple {
    std::vector<double> c;
    double lambda = 2.0;
};

// Throws std::invalid_argument when the tuple invariants fail.
void validate_tuple(const RegularityTuple& t);

// gamma_i(c) = 1 - (1/(c_i-1)) / (k-1 + sum_j 1/(c_j-1)) for c_j > 1, with
// the limit rule 1 - 1(c_i=1)/#{j: c_j=1} when some c_j equals 1.
// Requires all c_j >= 1.
double gamma_exponent(std::span<const double> c, int i);
std::vector<double> gamma_vector(std::span<const double> c);

// E_c(n) = prod_i n_i^{gamma_i(c)}, with 0^0 := 1. Requires c_i >= 1, n_i >= 0.
double e_value(std::span<const double> c, std::span<const double> n);

// F^eps_c(n) = sum over subsets I of [k] with |I| >= 2 of
//   E_{c_I}(n_I) * prod_{i in I} n_i^eps * prod_{i not in I} n_i
// plus (1/n_1 + ... + 1/n_k) * prod n_i; the constant 1 when k = 1.
// Requires c_i >= 1 and, for k >= 2, n_i >= 1.
double f_value(std::span<const double> c, std::span<const double> n, double epsilon);

// The bipartite exponent pair (c2(c1-1)/(c1c2-1), c1(c2-1)/(c1c2-1)),
// with the limit value (1/2, 1/2) at c1 = c2 = 1. Requires c1, c2 >= 1.
std::pair<double, double> binary_exponents(double c1, double c2);

// Classical baselines: the bipartite exponent 2 - 1/u and the k-partite
// exponent k - 1/u^{k-1}. Requires k >= 2, u >= 1.
std::pair<double, double> baseline_exponents(int k, int u);

// Iterates gamma -> 1/(1 + c(1 - gamma)) from 0, returning the first
// `steps` values. The sequence is nondecreasing in [1/(c+1), 1/c] and
// converges to 1/c. Requires c >= 1, steps >= 1.
std::vector<double> prelim_fixed_point(double c, int steps);

// Checks k*F >= E*prod(n_i^eps) + sum_i n_i * F_{c without i}(n without i)
// with 1e-9 relative slack. Requires k >= 2 and f_value preconditions.
bool check_remark_inequality(std::span<const double> c, std::span<const double> n, double epsilon);

// Diagnostic only: ratio F / (E * prod n_i^eps) and whether the dominance
// hypothesis n_1...n_k n_i^{-1/c_i+eps} >= n_i F_{c without i}(n without i)
// holds for every i. No pass/fail semantics (the implied constant is
// non-explicit).
struct DominanceReport {
    bool hypothesis_holds = false;
    double ratio = 0.0;
    double e_term = 0.0;
    double f_val = 0.0;
};
DominanceReport dominance_report(std::span<const double> c, std::span<const double> n, double epsilon);

// Evaluated bounds for one instance.
struct BoundReport {
    std::vector<double> n;
    double epsilon = 0.0;
    unsigned long long exact_edges = 0;
    double f_value = 0.0;
    double e_value = 0.0;
    double kst_exponent = 0.0;
    double erdos_exponent = 0.0;
    std::vector<double> gamma;
};

// Assembles a report; u feeds the baseline exponents (k >= 2 required).
BoundReport evaluate_report(std::span<const double> c, std::span<const double> n, double epsilon,
                            int u, unsigned long long exact_edges);

} // namespace zlab
