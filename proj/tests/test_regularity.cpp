#include "doctest.h"

#include "test_util.hpp"
#include "zlab/families.hpp"
#include "zlab/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

using namespace zlab;

namespace {

Instance order_instance(int n) {
    FamilySpec spec;
    spec.name = "order";
    spec.params["n"] = n;
    return induce_canonical(generate_family(spec));
}

// Contiguous-range witness for the order relation: K blocks per class,
// diagonal cells bad.
RegularityWitness order_witness(int n, int kblocks, double delta, double lambda, double c) {
    RegularityWitness w;
    w.delta = delta;
    w.tuple.lambda = lambda;
    w.tuple.c = {c, c};
    std::vector<std::vector<std::int32_t>> blocks;
    for (int b = 0; b < kblocks; ++b) {
        std::vector<std::int32_t> blk;
        for (int e = b * n / kblocks; e < (b + 1) * n / kblocks; ++e) blk.push_back(e);
        blocks.push_back(std::move(blk));
    }
    w.parts = {blocks, blocks};
    for (std::int32_t b = 0; b < kblocks; ++b) w.sigma.push_back({b, b});
    return w;
}

Instance full_instance(std::vector<std::size_t> sizes) {
    std::vector<Edge> edges;
    Edge e(sizes.size(), 0);
    while (true) {
        edges.push_back(e);
        std::size_t pos = sizes.size();
        bool wrapped = true;
        while (pos-- > 0) {
            if (static_cast<std::size_t>(++e[pos]) < sizes[pos]) {
                wrapped = false;
                break;
            }
            e[pos] = 0;
        }
        if (wrapped) break;
    }
    return make_instance(static_cast<int>(sizes.size()), zt::index_classes(sizes), std::move(edges));
}

std::vector<std::vector<std::int32_t>> single_block(std::size_t n) {
    std::vector<std::int32_t> blk(n);
    for (std::size_t i = 0; i < n; ++i) blk[i] = static_cast<std::int32_t>(i);
    return {blk};
}

} // namespace

TEST_CASE("verify accepts the diagonal order witness") {
    const int n = 100;
    auto inst = order_instance(n);
    auto w = order_witness(n, 10, 0.1, 3.0, 1.0);
    auto out = verify_witness(inst, w, VerifyMode::Weak);
    CHECK(out.structurally_valid);
    CHECK(out.passed);

    // Enumeration oracle for the bad mass: pairs in same contiguous block.
    unsigned long long diag = 0;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (x / 10 == y / 10) ++diag;
    CHECK(out.bad_mass == diag);
    CHECK(out.meagre_mass == doctest::Approx(static_cast<double>(diag) / (100.0 * 100.0)));
    CHECK(out.offending_cells.empty());
    // Contiguous equal blocks: strong verification also passes here.
    CHECK(verify_witness(inst, w, VerifyMode::Strong).passed);
}

TEST_CASE("verify accepts one homogeneous cell and flags a missing edge") {
    auto inst = full_instance({3, 3});
    RegularityWitness w;
    w.delta = 0.4;
    w.tuple.lambda = 2.0;
    w.tuple.c = {0.0, 0.0};
    w.parts = {single_block(3), single_block(3)};
    CHECK(verify_witness(inst, w, VerifyMode::Weak).passed);

    auto damaged = inst;
    damaged.edges.erase(damaged.edges.begin());
    damaged = make_instance(2, damaged.classes, damaged.edges);
    auto out = verify_witness(damaged, w, VerifyMode::Weak);
    CHECK(out.structurally_valid);
    CHECK_FALSE(out.passed);
    REQUIRE(out.offending_cells.size() == 1);
    CHECK(out.offending_cells.front() == Edge{0, 0});
}

TEST_CASE("verify reports structural violations distinctly") {
    auto inst = order_instance(10);
    auto good = order_witness(10, 2, 0.3, 2.0, 1.0);

    auto w = good;
    w.tuple.lambda = 1.0; // strictness required
    auto out = verify_witness(inst, w, VerifyMode::Weak);
    CHECK_FALSE(out.structurally_valid);
    CHECK_FALSE(out.passed);
    CHECK_FALSE(out.structural_errors.empty());

    w = good;
    w.parts[0][0].push_back(99); // out of range
    CHECK_FALSE(verify_witness(inst, w, VerifyMode::Weak).structurally_valid);

    w = good;
    w.parts[1][0].erase(w.parts[1][0].begin()); // coverage gap
    CHECK_FALSE(verify_witness(inst, w, VerifyMode::Weak).structurally_valid);

    w = good;
    w.sigma.push_back({7, 0}); // nonexistent block
    CHECK_FALSE(verify_witness(inst, w, VerifyMode::Weak).structurally_valid);

    w = good;
    w.parts[0].push_back({}); // empty block
    CHECK_FALSE(verify_witness(inst, w, VerifyMode::Weak).structurally_valid);
}

TEST_CASE("verify treats sigma as a set") {
    const int n = 40;
    auto inst = order_instance(n);
    auto w = order_witness(n, 4, 0.3, 3.0, 1.0);
    auto base = verify_witness(inst, w, VerifyMode::Weak);
    REQUIRE(base.passed);

    auto dup = w;
    dup.sigma.insert(dup.sigma.end(), w.sigma.begin(), w.sigma.end());
    auto out = verify_witness(inst, dup, VerifyMode::Weak);
    CHECK(out.passed);
    CHECK(out.bad_mass == base.bad_mass);

    auto nodelta = w;
    nodelta.delta = 1.0;
    CHECK_FALSE(verify_witness(inst, nodelta, VerifyMode::Weak).structurally_valid);
    nodelta.delta = 0.0;
    CHECK_FALSE(verify_witness(inst, nodelta, VerifyMode::Weak).structurally_valid);

    auto shortc = w;
    shortc.tuple.c = {1.0};
    CHECK_FALSE(verify_witness(inst, shortc, VerifyMode::Weak).structurally_valid);
}

TEST_CASE("verify is insensitive to block order") {
    const int n = 60;
    auto inst = order_instance(n);
    auto w = order_witness(n, 6, 0.2, 3.0, 1.0);
    auto base = verify_witness(inst, w, VerifyMode::Weak);

    // Swap two blocks in class 0 and rename them inside sigma.
    auto permuted = w;
    std::swap(permuted.parts[0][1], permuted.parts[0][4]);
    for (auto& cell : permuted.sigma) {
        if (cell[0] == 1)
            cell[0] = 4;
        else if (cell[0] == 4)
            cell[0] = 1;
    }
    auto alt = verify_witness(inst, permuted, VerifyMode::Weak);
    CHECK(alt.passed == base.passed);
    CHECK(alt.bad_mass == base.bad_mass);
    CHECK(alt.offending_cells.size() == base.offending_cells.size());
}

TEST_CASE("refine_to_strong on the order witness") {
    const int n = 100;
    auto inst = order_instance(n);
    auto w = order_witness(n, 10, 0.1, 3.0, 1.0);
    auto res = refine_to_strong(inst, w);

    CHECK(res.witness.tuple.c == std::vector<double>{2.0, 2.0});
    CHECK(res.witness.tuple.lambda == 12.0);
    auto out = verify_witness(inst, res.witness, VerifyMode::Strong);
    CHECK(out.passed);
    for (auto s : out.equipartition_slack) CHECK(s <= 1);

    for (int i = 0; i < 2; ++i) {
        CHECK(res.stats.full_blocks[static_cast<std::size_t>(i)] <=
              2.0 * std::pow(0.1, -2.0)); // K' <= 2 delta^{-(c+1)}
        CHECK(static_cast<double>(res.stats.remainder_mass[static_cast<std::size_t>(i)]) <=
              3.0 * 0.1 * n);
    }
    CHECK(static_cast<double>(res.stats.bad_mass) <= (2 + 1) * 3.0 * 0.1 * n * n);
}

TEST_CASE("refine_to_strong on a one-block witness") {
    auto inst = full_instance({10, 10});
    RegularityWitness w;
    w.delta = 0.5;
    w.tuple.lambda = 1.5;
    w.tuple.c = {0.0, 0.0};
    w.parts = {single_block(10), single_block(10)};
    REQUIRE(verify_witness(inst, w, VerifyMode::Weak).passed);

    auto res = refine_to_strong(inst, w);
    auto out = verify_witness(inst, res.witness, VerifyMode::Strong);
    CHECK(out.passed);
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(static_cast<double>(res.witness.parts[i].size()) <= (1.5 + 2.0) / 0.5);
    CHECK(res.witness.tuple.lambda == 4 * 1.5);
}

TEST_CASE("refine_to_strong handles unary witnesses") {
    // Arity-1 instances arise as restriction outputs.
    auto inst = make_instance(1, zt::index_classes({12}), {{0}, {3}, {4}, {7}});
    RegularityWitness w;
    w.delta = 0.4;
    w.tuple.lambda = 2.0;
    w.tuple.c = {1.0};
    w.parts = {{{0, 1, 2, 3}, {4, 5, 6, 7}, {8, 9, 10, 11}}};
    w.sigma = {{0}, {1}};
    REQUIRE(verify_witness(inst, w, VerifyMode::Weak).passed);
    auto res = refine_to_strong(inst, w);
    CHECK(res.witness.tuple.c == std::vector<double>{2.0});
    CHECK(res.witness.tuple.lambda == 6.0);
    CHECK(verify_witness(inst, res.witness, VerifyMode::Strong).passed);
}

TEST_CASE("refine_to_strong rejects invalid inputs") {
    auto inst = order_instance(20);
    auto w = order_witness(20, 2, 0.48, 2.1, 1.0);
    REQUIRE(verify_witness(inst, w, VerifyMode::Weak).passed);
    CHECK_THROWS_AS(refine_to_strong(inst, w), std::invalid_argument); // delta >= 1/lambda

    auto bad = order_witness(20, 2, 0.1, 2.0, 1.0);
    bad.sigma.clear(); // diagonal cells now unexplained
    CHECK_THROWS_AS(refine_to_strong(inst, bad), std::invalid_argument);
}

TEST_CASE("refinement round-trip over fuzzed weak witnesses") {
    zt::Rng rng(20250811);
    for (int trial = 0; trial < 40; ++trial) {
        auto sc = zt::make_weak_scenario(rng);
        REQUIRE(verify_witness(sc.instance, sc.witness, VerifyMode::Weak).passed);

        auto res = refine_to_strong(sc.instance, sc.witness);
        const auto k = static_cast<std::size_t>(sc.instance.k);
        auto out = verify_witness(sc.instance, res.witness, VerifyMode::Strong);
        CHECK(out.passed);

        for (std::size_t i = 0; i < k; ++i) {
            CHECK(res.witness.tuple.c[i] == sc.witness.tuple.c[i] + 1.0);
            CHECK(static_cast<double>(res.stats.remainder_mass[i]) <=
                  sc.witness.tuple.lambda * sc.witness.delta *
                      static_cast<double>(sc.instance.class_size(static_cast<int>(i))));
            CHECK(static_cast<double>(res.stats.full_blocks[i]) <=
                  2.0 * std::pow(sc.witness.delta, -(sc.witness.tuple.c[i] + 1.0)));
        }
        CHECK(res.witness.tuple.lambda == static_cast<double>(k + 2) * sc.witness.tuple.lambda);

        long double total = 1;
        for (std::size_t i = 0; i < k; ++i) total *= static_cast<long double>(sc.instance.class_size(static_cast<int>(i)));
        CHECK(static_cast<long double>(res.stats.bad_mass) <=
              static_cast<long double>(k + 1) * sc.witness.tuple.lambda * sc.witness.delta * total);
    }
}

TEST_CASE("restrict a single-fiber witness") {
    // Class 1 = {5}, class 2 = {1..9} split into three contiguous blocks.
    FamilySpec spec;
    spec.name = "order";
    spec.params["n"] = 9;
    auto rel = generate_family(spec);
    ClassList classes{{"5"}, rel.classes[1]};
    auto inst = induce(rel, classes);

    RegularityWitness w;
    w.delta = 0.4;
    w.tuple.lambda = 2.0;
    w.tuple.c = {1.0, 1.0};
    w.parts = {{{0}}, {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}}};
    w.sigma = {{0, 1}}; // the cell {5} x {4,5,6} is mixed
    REQUIRE(verify_witness(inst, w, VerifyMode::Strong).passed);

    auto res = restrict_witness(inst, w, {"5"});
    CHECK(res.instance.k == 1);
    CHECK(res.instance.edge_count() == 4); // {6,7,8,9}
    CHECK(res.witness.tuple.c == std::vector<double>{1.0});
    CHECK(res.witness.tuple.lambda == 2.0);
    CHECK(res.witness.sigma == std::vector<Edge>{{1}});
    CHECK(verify_witness(res.instance, res.witness, VerifyMode::Strong).passed);
}

TEST_CASE("restrict the modular-sum relation at two pins") {
    Relation mod5;
    mod5.k = 3;
    mod5.membership = [](const std::vector<std::string>& t) {
        return (std::stoll(t[0]) + std::stoll(t[1]) + std::stoll(t[2])) % 5 == 0;
    };
    ElementList residues{"0", "1", "2", "3", "4"};
    auto inst = induce(mod5, {{"1", "2"}, residues, residues});

    RegularityWitness w;
    w.delta = 0.4; // < 2^{-1}
    w.tuple.lambda = 2.1;
    w.tuple.c = {1.0, 1.0, 1.0};
    w.parts.resize(3);
    w.parts[0] = {{0}, {1}};
    for (int i = 1; i < 3; ++i)
        for (std::int32_t v = 0; v < 5; ++v) w.parts[static_cast<std::size_t>(i)].push_back({v});
    REQUIRE(verify_witness(inst, w, VerifyMode::Strong).passed);

    auto res = restrict_witness(inst, w, {"1", "2"});
    CHECK(res.instance.edge_count() == 0); // y+z = 4 and y+z = 3 cannot both hold
    CHECK(res.witness.tuple.c == std::vector<double>{1.0, 1.0});
    CHECK(verify_witness(res.instance, res.witness, VerifyMode::Strong).passed);

    CHECK_THROWS_AS(restrict_witness(inst, w, {"1", "3"}), std::invalid_argument);
    CHECK_THROWS_AS(restrict_witness(inst, w, {"1"}), std::invalid_argument);
}

TEST_CASE("restrict round-trip over fuzzed strong witnesses") {
    zt::Rng rng(777);
    for (int trial = 0; trial < 25; ++trial) {
        auto sc = zt::make_restrict_scenario(rng);
        REQUIRE(verify_witness(sc.instance, sc.witness, VerifyMode::Strong).passed);

        auto res = restrict_witness(sc.instance, sc.witness, sc.instance.classes[0]);
        CHECK(res.witness.tuple.lambda == sc.witness.tuple.lambda);
        CHECK(res.witness.tuple.c ==
              std::vector<double>(sc.witness.tuple.c.begin() + 1, sc.witness.tuple.c.end()));
        CHECK(verify_witness(res.instance, res.witness, VerifyMode::Strong).passed);

        // The restricted edges are the intersection of the class-1 fibers.
        for (const auto& e : res.instance.edges) {
            for (std::int32_t pin = 0; pin < static_cast<std::int32_t>(sc.instance.class_size(0)); ++pin) {
                Edge full{pin};
                full.insert(full.end(), e.begin(), e.end());
                CHECK(sc.instance.has_edge(full));
            }
        }
    }
}

TEST_CASE("restrict requires singleton class-1 blocks and small delta") {
    auto inst = full_instance({2, 6});
    RegularityWitness w;
    w.delta = 0.2;
    w.tuple.lambda = 2.0;
    w.tuple.c = {1.0, 1.0};
    w.parts = {{{0, 1}}, {{0, 1, 2}, {3, 4, 5}}};
    REQUIRE(verify_witness(inst, w, VerifyMode::Strong).passed);
    CHECK_THROWS_AS(restrict_witness(inst, w, {"c0e0", "c0e1"}), std::invalid_argument);

    w.parts[0] = {{0}, {1}};
    w.delta = 0.6; // >= 2^{-1}
    REQUIRE(verify_witness(inst, w, VerifyMode::Strong).passed);
    CHECK_THROWS_AS(restrict_witness(inst, w, {"c0e0", "c0e1"}), std::invalid_argument);
}

TEST_CASE("estimate_tuple finds slope one for the order relation") {
    FamilySpec spec;
    spec.name = "order";
    spec.params["n"] = 64;
    auto rel = generate_family(spec);
    auto est = estimate_tuple(rel, {64, 64}, {0.25, 0.125, 0.0625}, 500, 3);
    REQUIRE(est.fit_valid);
    CHECK_FALSE(est.budget_exhausted);
    for (double c : est.c_hat) {
        CHECK(c > 0.7);
        CHECK(c < 1.3);
    }
    CHECK(est.lambda_hat > 1.0);

    // Deterministic given the seed, independent of the worker cap.
    setenv("ZLAB_THREADS", "1", 1);
    auto again = estimate_tuple(rel, {64, 64}, {0.25, 0.125, 0.0625}, 500, 3);
    unsetenv("ZLAB_THREADS");
    CHECK(again.c_hat == est.c_hat);
    CHECK(again.lambda_hat == est.lambda_hat);
    for (std::size_t t = 0; t < est.points.size(); ++t)
        CHECK(again.points[t].block_counts == est.points[t].block_counts);
}

TEST_CASE("estimate_tuple reports zero slope on the full relation") {
    FamilySpec spec;
    spec.name = "random";
    spec.params["k"] = 2;
    spec.params["n"] = 32;
    spec.params["p"] = 1.0;
    auto rel = generate_family(spec);
    auto est = estimate_tuple(rel, {32, 32}, {0.5, 0.25, 0.125, 0.0625}, 200, 5);
    REQUIRE(est.fit_valid);
    for (const auto& p : est.points) {
        CHECK(p.found);
        CHECK(p.block_counts == std::vector<int>{1, 1});
    }
    for (double c : est.c_hat) CHECK(c == 0.0);
}

TEST_CASE("estimate_tuple flags exhausted budgets instead of failing") {
    FamilySpec spec;
    spec.name = "random";
    spec.params["k"] = 2;
    spec.params["n"] = 32;
    spec.params["p"] = 0.5;
    spec.seed = 9;
    auto rel = generate_family(spec);
    auto est = estimate_tuple(rel, {32, 32}, {0.4, 0.2, 0.1}, 3, 0);
    CHECK(est.budget_exhausted);
    CHECK_FALSE(est.fit_valid);
    for (const auto& p : est.points) CHECK_FALSE(p.found);
}

TEST_CASE("estimate_tuple validates its inputs") {
    FamilySpec spec;
    spec.name = "order";
    spec.params["n"] = 16;
    auto rel = generate_family(spec);
    CHECK_THROWS_AS(estimate_tuple(rel, {16, 16}, {0.5, 0.25}, 100, 0), std::invalid_argument);
    CHECK_THROWS_AS(estimate_tuple(rel, {16, 16}, {0.25, 0.5, 0.125}, 100, 0), std::invalid_argument);
    CHECK_THROWS_AS(estimate_tuple(rel, {16}, {0.5, 0.25, 0.125}, 100, 0), std::invalid_argument);
    CHECK_THROWS_AS(estimate_tuple(rel, {16, 99}, {0.5, 0.25, 0.125}, 100, 0), std::invalid_argument);
}
