#include "zlab/bounds.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace zlab {

namespace {

void check_exponents(std::span<const double> c) {
    if (c.empty()) throw std::invalid_argument("exponent sequence must be nonempty");
    for (double ci : c)
        if (!(ci >= 1.0)) throw std::invalid_argument("all exponents must be >= 1");
}

double pow0(double base, double exp) {
    if (base == 0.0 && exp == 0.0) return 1.0;
    return std::pow(base, exp);
}

} // namespace

void validate_tuple(const RegularityTuple& t) {
    if (t.c.empty()) throw std::invalid_argument("tuple must have k >= 1 exponents");
    if (!(t.lambda > 1.0)) throw std::invalid_argument("coefficient lambda must be > 1");
    for (double ci : t.c)
        if (!std::isfinite(ci) || ci < 0.0)
            throw std::invalid_argument("tuple exponents must be finite and >= 0");
}

double gamma_exponent(std::span<const double> c, int i) {
    check_exponents(c);
    const auto k = c.size();
    if (i < 0 || static_cast<std::size_t>(i) >= k) throw std::invalid_argument("class index out of range");

    std::size_t ones = 0;
    for (double cj : c)
        if (cj == 1.0) ++ones;
    if (ones > 0)
        return 1.0 - (c[static_cast<std::size_t>(i)] == 1.0 ? 1.0 / static_cast<double>(ones) : 0.0);

    double sum = 0.0;
    for (double cj : c) sum += 1.0 / (cj - 1.0);
    return 1.0 - (1.0 / (c[static_cast<std::size_t>(i)] - 1.0)) / (static_cast<double>(k) - 1.0 + sum);
}

std::vector<double> gamma_vector(std::span<const double> c) {
    std::vector<double> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = gamma_exponent(c, static_cast<int>(i));
    return out;
}

double e_value(std::span<const double> c, std::span<const double> n) {
    check_exponents(c);
    if (n.size() != c.size()) throw std::invalid_argument("size sequence length mismatch");
    for (double ni : n)
        if (!(ni >= 0.0)) throw std::invalid_argument("sizes must be >= 0");
    double prod = 1.0;
    for (std::size_t i = 0; i < n.size(); ++i) prod *= pow0(n[i], gamma_exponent(c, static_cast<int>(i)));
    return prod;
}

double f_value(std::span<const double> c, std::span<const double> n, double epsilon) {
    check_exponents(c);
    if (n.size() != c.size()) throw std::invalid_argument("size sequence length mismatch");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    const auto k = c.size();
    if (k == 1) return 1.0;
    if (k > 20) throw std::invalid_argument("arity too large for subset enumeration");
    for (double ni : n)
        if (!(ni >= 1.0)) throw std::invalid_argument("sizes must be >= 1 when k >= 2");

    double total = 0.0;
    std::vector<double> ci, ni;
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        if (std::popcount(mask) < 2) continue;
        ci.clear();
        ni.clear();
        double outside = 1.0;
        double eps_part = 1.0;
        for (std::size_t i = 0; i < k; ++i) {
            if (mask & (1u << i)) {
                ci.push_back(c[i]);
                ni.push_back(n[i]);
                eps_part *= std::pow(n[i], epsilon);
            } else {
                outside *= n[i];
            }
        }
        total += e_value(ci, ni) * eps_part * outside;
    }

    double prod = 1.0, inv = 0.0;
    for (double x : n) {
        prod *= x;
        inv += 1.0 / x;
    }
    return total + inv * prod;
}

std::pair<double, double> binary_exponents(double c1, double c2) {
    if (!(c1 >= 1.0) || !(c2 >= 1.0)) throw std::invalid_argument("exponents must be >= 1");
    if (c1 == 1.0 && c2 == 1.0) return {0.5, 0.5};
    const double den = c1 * c2 - 1.0;
    return {c2 * (c1 - 1.0) / den, c1 * (c2 - 1.0) / den};
}

std::pair<double, double> baseline_exponents(int k, int u) {
    if (k < 2) throw std::invalid_argument("k must be >= 2");
    if (u < 1) throw std::invalid_argument("u must be >= 1");
    const double kst = 2.0 - 1.0 / static_cast<double>(u);
    const double erdos = static_cast<double>(k) - 1.0 / std::pow(static_cast<double>(u), static_cast<double>(k - 1));
    return {kst, erdos};
}

std::vector<double> prelim_fixed_point(double c, int steps) {
    if (!(c >= 1.0)) throw std::invalid_argument("c must be >= 1");
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(steps));
    double g = 0.0;
    for (int s = 0; s < steps; ++s) {
        g = 1.0 / (1.0 + c * (1.0 - g));
        out.push_back(g);
    }
    return out;
}

bool check_remark_inequality(std::span<const double> c, std::span<const double> n, double epsilon) {
    if (c.size() < 2) throw std::invalid_argument("k must be >= 2");
    const auto k = c.size();
    const double lhs = static_cast<double>(k) * f_value(c, n, epsilon);

    double eps_prod = 1.0;
    for (double ni : n) eps_prod *= std::pow(ni, epsilon);
    double rhs = e_value(c, n) * eps_prod;

    std::vector<double> cr, nr;
    for (std::size_t drop = 0; drop < k; ++drop) {
        cr.clear();
        nr.clear();
        for (std::size_t i = 0; i < k; ++i) {
            if (i == drop) continue;
            cr.push_back(c[i]);
            nr.push_back(n[i]);
        }
        rhs += n[drop] * f_value(cr, nr, epsilon);
    }
    return lhs >= rhs * (1.0 - 1e-9);
}

DominanceReport dominance_report(std::span<const double> c, std::span<const double> n, double epsilon) {
    if (c.size() < 2) throw std::invalid_argument("k must be >= 2");
    const auto k = c.size();
    DominanceReport rep;
    rep.f_val = f_value(c, n, epsilon);

    double eps_prod = 1.0, prod = 1.0;
    for (double ni : n) {
        eps_prod *= std::pow(ni, epsilon);
        prod *= ni;
    }
    rep.e_term = e_value(c, n) * eps_prod;
    rep.ratio = rep.f_val / rep.e_term;

    rep.hypothesis_holds = true;
    std::vector<double> cr, nr;
    for (std::size_t i = 0; i < k; ++i) {
        cr.clear();
        nr.clear();
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            cr.push_back(c[j]);
            nr.push_back(n[j]);
        }
        const double lhs = prod * std::pow(n[i], -1.0 / c[i] + epsilon);
        if (lhs < n[i] * f_value(cr, nr, epsilon)) rep.hypothesis_holds = false;
    }
    return rep;
}

BoundReport evaluate_report(std::span<const double> c, std::span<const double> n, double epsilon,
                            int u, unsigned long long exact_edges) {
    if (c.size() < 2) throw std::invalid_argument("report requires k >= 2");
    BoundReport rep;
    rep.n.assign(n.begin(), n.end());
    rep.epsilon = epsilon;
    rep.exact_edges = exact_edges;
    rep.f_value = zlab::f_value(c, n, epsilon);
    rep.e_value = zlab::e_value(c, n);
    auto base = baseline_exponents(static_cast<int>(c.size()), u);
    rep.kst_exponent = base.first;
    rep.erdos_exponent = base.second;
    rep.gamma = gamma_vector(c);
    return rep;
}

} // namespace zlab
