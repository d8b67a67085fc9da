#pragma once

#include "zlab/hypergraph.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace zlab {

// Generator spec. `params` holds the scalar parameters; `residues` is the
// target set of the modular_sum family. Families:
//   projective_plane(q)      points/lines of the plane over Z_q (prime q),
//                            incidence = orthogonality of homogeneous triples
//   grid_point_line(m, p)    points of [m]^2 vs lines y = a x + b (mod p)
//   order(n)                 x < y on {1..n}
//   interval_overlap(n)      n seeded intervals, nonempty intersection
//   box_order(n, dim)        componentwise dominance on n grid points
//   modular_sum(k, n)        sum of coordinates mod n lands in `residues`
//   random(k, n, p)          seeded coin flips with edge probability p
//                            (per-class sizes via n or n1..nk)
struct FamilySpec {
    std::string name;
    std::map<std::string, double> params;
    std::vector<std::int64_t> residues;
    std::uint64_t seed = 0;
};

// Deterministic relation with canonical classes; byte-identical output for
// equal specs. Throws std::invalid_argument on invalid parameters
// (non-prime q, probability outside [0,1], modulus < 2, ...).
Relation generate_family(const FamilySpec& spec);

struct IncidenceRow {
    std::int64_t q = 0;
    std::size_t points = 0;
    std::size_t lines = 0;
    std::size_t incidences = 0;
    bool k22_free = false;
};

// Point/line incidence counts for projective planes over the listed primes
// (each <= 13), with the K_{2,2}-freeness flag from the exact oracle.
std::vector<IncidenceRow> extremal_incidence_counts(const std::vector<std::int64_t>& q_list);

bool is_prime(std::int64_t n);

} // namespace zlab
