#include "doctest.h"

#include "test_util.hpp"
#include "zlab/families.hpp"
#include "zlab/json_io.hpp"

#include <set>

using namespace zlab;

namespace {

FamilySpec spec_of(const std::string& name, std::map<std::string, double> params,
                   std::vector<std::int64_t> residues = {}, std::uint64_t seed = 0) {
    FamilySpec spec;
    spec.name = name;
    spec.params = std::move(params);
    spec.residues = std::move(residues);
    spec.seed = seed;
    return spec;
}

} // namespace

TEST_CASE("projective planes have the classical degree structure") {
    for (std::int64_t q : {2, 3, 5}) {
        auto inst = induce_canonical(generate_family(spec_of("projective_plane", {{"q", static_cast<double>(q)}})));
        const auto expect_points = static_cast<std::size_t>(q * q + q + 1);
        CHECK(inst.class_size(0) == expect_points);
        CHECK(inst.class_size(1) == expect_points);
        CHECK(inst.edge_count() == expect_points * static_cast<std::size_t>(q + 1));

        std::vector<int> point_deg(expect_points, 0), line_deg(expect_points, 0);
        for (const auto& e : inst.edges) {
            ++point_deg[static_cast<std::size_t>(e[0])];
            ++line_deg[static_cast<std::size_t>(e[1])];
        }
        for (auto d : point_deg) CHECK(d == q + 1);
        for (auto d : line_deg) CHECK(d == q + 1);

        // Any two distinct points share exactly one line.
        for (std::int32_t p1 = 0; p1 < static_cast<std::int32_t>(expect_points); ++p1)
            for (std::int32_t p2 = p1 + 1; p2 < static_cast<std::int32_t>(expect_points); ++p2) {
                int shared = 0;
                for (std::int32_t l = 0; l < static_cast<std::int32_t>(expect_points); ++l)
                    if (inst.has_edge({p1, l}) && inst.has_edge({p2, l})) ++shared;
                CHECK(shared == 1);
            }
        CHECK_FALSE(contains_complete(inst, 2));
    }
}

TEST_CASE("larger planes cover every point pair exactly once") {
    // K_{2,2}-freeness rules out pairs sharing two lines; the counting
    // identity sum_l C(deg_l, 2) = C(#points, 2) then forces exactly one
    // shared line per pair.
    for (std::int64_t q : {7, 11, 13}) {
        auto inst = induce_canonical(generate_family(spec_of("projective_plane", {{"q", static_cast<double>(q)}})));
        const auto n = static_cast<unsigned long long>(q * q + q + 1);
        std::vector<unsigned long long> line_deg(n, 0);
        for (const auto& e : inst.edges) ++line_deg[static_cast<std::size_t>(e[1])];
        unsigned long long covered = 0;
        for (auto d : line_deg) covered += d * (d - 1) / 2;
        CHECK(covered == n * (n - 1) / 2);
        CHECK_FALSE(contains_complete(inst, 2));
    }
}

TEST_CASE("order counts pairs and contains boxes once large enough") {
    auto inst3 = induce_canonical(generate_family(spec_of("order", {{"n", 3}})));
    CHECK(inst3.edge_count() == 3);

    for (int u : {1, 2, 3}) {
        auto inst = induce_canonical(generate_family(spec_of("order", {{"n", 2.0 * u}})));
        auto w = find_complete(inst, u);
        REQUIRE(w.has_value());
        CHECK(witness_in_edges(inst, *w));
        // Bottom u against top u is itself a witness.
        CompleteWitness manual;
        manual.subsets.resize(2);
        for (int j = 0; j < u; ++j) {
            manual.subsets[0].push_back(j);
            manual.subsets[1].push_back(u + j);
        }
        CHECK(witness_in_edges(inst, manual));
    }
    CHECK_FALSE(contains_complete(induce_canonical(generate_family(spec_of("order", {{"n", 3}}))), 2));
}

TEST_CASE("modular_sum enumerates residue tuples") {
    auto inst = induce_canonical(generate_family(spec_of("modular_sum", {{"k", 3}, {"n", 2}}, {0})));
    CHECK(inst.k == 3);
    CHECK(inst.edge_count() == 4);
    // Oracle: enumerate the 8 triples over Z_2.
    int even = 0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                if ((a + b + c) % 2 == 0) ++even;
    CHECK(static_cast<int>(inst.edge_count()) == even);
}

TEST_CASE("grid_point_line puts each point on exactly p lines") {
    auto inst = induce_canonical(generate_family(spec_of("grid_point_line", {{"m", 4}, {"p", 5}})));
    CHECK(inst.class_size(0) == 16);
    CHECK(inst.class_size(1) == 25);
    // For every point (x,y) and slope a there is exactly one intercept b,
    // so the incidence count is m^2 * p = 80.
    CHECK(inst.edge_count() == 80);
    std::vector<int> deg(16, 0);
    for (const auto& e : inst.edges) ++deg[static_cast<std::size_t>(e[0])];
    for (auto d : deg) CHECK(d == 5);
}

TEST_CASE("interval_overlap is symmetric and reflexive") {
    auto inst = induce_canonical(generate_family(spec_of("interval_overlap", {{"n", 20}}, {}, 42)));
    CHECK(inst.class_size(0) == 20);
    for (std::int32_t a = 0; a < 20; ++a) {
        CHECK(inst.has_edge({a, a}));
        for (std::int32_t b = 0; b < 20; ++b) CHECK(inst.has_edge({a, b}) == inst.has_edge({b, a}));
    }
}

TEST_CASE("box_order is a strict dominance order") {
    auto inst = induce_canonical(generate_family(spec_of("box_order", {{"n", 8}, {"dim", 2}})));
    for (std::int32_t a = 0; a < 8; ++a) {
        CHECK_FALSE(inst.has_edge({a, a}));
        for (std::int32_t b = 0; b < 8; ++b)
            if (a != b) CHECK_FALSE((inst.has_edge({a, b}) && inst.has_edge({b, a})));
    }
    // dim = 1 reduces to the linear order.
    auto line = induce_canonical(generate_family(spec_of("box_order", {{"n", 5}, {"dim", 1}})));
    CHECK(line.edge_count() == 10);
}

TEST_CASE("random family density tracks p and distinct seeds differ") {
    auto inst = induce_canonical(
        generate_family(spec_of("random", {{"k", 2}, {"n", 40}, {"p", 0.3}}, {}, 7)));
    const double density = static_cast<double>(inst.edge_count()) / (40.0 * 40.0);
    CHECK(density > 0.2);
    CHECK(density < 0.4);

    auto other = induce_canonical(
        generate_family(spec_of("random", {{"k", 2}, {"n", 40}, {"p", 0.3}}, {}, 8)));
    CHECK(other.edges != inst.edges);

    auto sized = induce_canonical(
        generate_family(spec_of("random", {{"k", 2}, {"n1", 5}, {"n2", 9}, {"p", 0.5}}, {}, 7)));
    CHECK(sized.class_size(0) == 5);
    CHECK(sized.class_size(1) == 9);
}

TEST_CASE("generators are deterministic down to the serialized bytes") {
    for (const auto& spec :
         {spec_of("projective_plane", {{"q", 5}}), spec_of("order", {{"n", 30}}),
          spec_of("interval_overlap", {{"n", 15}}, {}, 3),
          spec_of("random", {{"k", 3}, {"n", 6}, {"p", 0.4}}, {}, 11),
          spec_of("modular_sum", {{"k", 2}, {"n", 7}}, {1, 3})}) {
        const auto a = instance_to_json(induce_canonical(generate_family(spec))).dump();
        const auto b = instance_to_json(induce_canonical(generate_family(spec))).dump();
        CHECK(a == b);
    }
}

TEST_CASE("incidence table matches the closed-form counts") {
    auto rows = extremal_incidence_counts({2, 3, 5});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].points == 7);
    CHECK(rows[0].incidences == 21);
    CHECK(rows[1].points == 13);
    CHECK(rows[1].incidences == 52);
    CHECK(rows[2].points == 31);
    CHECK(rows[2].incidences == 186);
    for (const auto& r : rows) CHECK(r.k22_free);
    CHECK_THROWS_AS(extremal_incidence_counts({4}), std::invalid_argument);
    CHECK_THROWS_AS(extremal_incidence_counts({17}), std::invalid_argument);
}

TEST_CASE("family parameter validation") {
    CHECK_THROWS_AS(generate_family(spec_of("projective_plane", {{"q", 4}})), std::invalid_argument);
    CHECK_THROWS_AS(generate_family(spec_of("random", {{"k", 2}, {"n", 5}, {"p", -0.5}})),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_family(spec_of("modular_sum", {{"k", 2}, {"n", 1}}, {0})),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_family(spec_of("modular_sum", {{"k", 2}, {"n", 5}})), std::invalid_argument);
    CHECK_THROWS_AS(generate_family(spec_of("nosuch", {})), std::invalid_argument);
    CHECK_THROWS_AS(generate_family(spec_of("grid_point_line", {{"m", 3}, {"p", 6}})),
                    std::invalid_argument);
}
