#include <doctest.h>

#include <random>

#include "mfh/hier_solver.hpp"
#include "oracles/oracles.hpp"

using namespace mfh;

namespace {

GroupStructure structure(const std::vector<std::vector<int>>& blocks, int p) {
    GroupStructure gs;
    gs.p = p;
    for (std::size_t b = 0; b < blocks.size(); ++b) gs.blocks.push_back({"b" + std::to_string(b), blocks[b], {}});
    return gs;
}

// Random partition of {0..p-1} into blocks with a random order inside each.
std::vector<std::vector<int>> random_blocks(int p, std::mt19937_64& rng) {
    std::vector<int> perm(static_cast<std::size_t>(p));
    for (int k = 0; k < p; ++k) perm[static_cast<std::size_t>(k)] = k;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::vector<int>> blocks;
    std::size_t at = 0;
    std::uniform_int_distribution<int> len(1, p);
    while (at < perm.size()) {
        const auto l = std::min<std::size_t>(static_cast<std::size_t>(len(rng)), perm.size() - at);
        blocks.emplace_back(perm.begin() + static_cast<long>(at), perm.begin() + static_cast<long>(at + l));
        at += l;
    }
    return blocks;
}

}  // namespace

TEST_SUITE("prox_oracle") {

TEST_CASE("oracle self-check: dual and grid routes agree on the two-coefficient example") {
    const auto g = oracle::suffix_groups({{0, 1}}, 2);
    const Eigen::Vector2d v(1.0, 0.8);
    const Eigen::VectorXd dual = oracle::prox_dual(v, g, 0.5);
    const Eigen::VectorXd grid = oracle::prox_grid(v, g, 0.5);
    CHECK((dual - grid).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("frozen oracle value for v=(1.0, 0.8), nested groups, threshold 0.5") {
    // Produced by the dual oracle (and confirmed by the grid route above).
    const Eigen::Vector2d frozen(0.521086857389424, 0.156326057216827);
    const Eigen::VectorXd got = prox_nested(Eigen::Vector2d(1.0, 0.8), structure({{0, 1}}, 2), 0.5);
    CHECK((got - frozen).cwiseAbs().maxCoeff() < 1e-6);
    CHECK((got - frozen).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("penalty examples") {
    CHECK(penalty(Eigen::VectorXd::Zero(3), structure({{0, 1, 2}}, 3)) == 0.0);
    CHECK(penalty(Eigen::Vector2d(3, 4), structure({{0, 1}}, 2)) == 9.0);
    CHECK(penalty(Eigen::Vector2d(-2, 5), structure({{0}, {1}}, 2)) == 7.0);
    // weights
    GroupStructure w = structure({{0, 1}}, 2).with_size_weights();
    CHECK(penalty(Eigen::Vector2d(3, 4), w) == doctest::Approx(5.0 * std::sqrt(2.0) + 4.0));
}

TEST_CASE("prox examples") {
    // A single unnested group: the inner suffix group gets a negligible weight.
    GroupStructure single = structure({{0, 1}}, 2);
    single.blocks[0].weights = {1.0, 1e-300};
    const Eigen::Vector2d v(3, 4);
    CHECK(prox_nested(v, single, 5.0).isZero());
    CHECK(prox_nested(v, single, 2.5) == Eigen::Vector2d(1.5, 2.0));

    oracle::Groups flat;
    flat.p = 2;
    flat.add({0, 1});
    CHECK(oracle::prox_dual(v, flat, 5.0).isZero());
    CHECK((oracle::prox_dual(v, flat, 2.5) - Eigen::Vector2d(1.5, 2.0)).cwiseAbs().maxCoeff() < 1e-12);

    const GroupStructure nested = structure({{0, 1}}, 2);
    CHECK(prox_nested(v, nested, 5.0).isZero());
    CHECK(prox_nested(v, nested, 0.0) == v);
    // Singleton blocks reduce to soft thresholding.
    const Eigen::VectorXd st = prox_nested(Eigen::Vector3d(2.0, -0.5, -3.0), structure({{0}, {1}, {2}}, 3), 1.0);
    CHECK(st == Eigen::Vector3d(1.0, 0.0, -2.0));
}

TEST_CASE("prox matches the dual oracle on random nested structures") {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> n01(0.0, 1.0);
    std::uniform_int_distribution<int> pdist(1, 6);
    std::uniform_real_distribution<double> tdist(0.0, 2.0);
    double worst = 0.0;
    for (int rep = 0; rep < 300; ++rep) {
        const int p = pdist(rng);
        const auto blocks = random_blocks(p, rng);
        Eigen::VectorXd v(p);
        for (auto& x : v) x = 2.0 * n01(rng);
        const double t = tdist(rng);
        const Eigen::VectorXd lib = prox_nested(v, structure(blocks, p), t);
        const Eigen::VectorXd ref = oracle::prox_dual(v, oracle::suffix_groups(blocks, p), t);
        worst = std::max(worst, (lib - ref).cwiseAbs().maxCoeff());
        CHECK(oracle::hierarchy_violations(lib, blocks) == 0);
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("prox with size weights matches the weighted oracle") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n01(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        const std::vector<std::vector<int>> blocks{{2, 0, 4}, {1, 3}};
        GroupStructure gs = structure(blocks, 5).with_size_weights();
        oracle::Groups g = oracle::suffix_groups(blocks, 5);
        for (std::size_t k = 0; k < g.members.size(); ++k) g.weights[k] = std::sqrt(double(g.members[k].size()));
        Eigen::VectorXd v(5);
        for (auto& x : v) x = 2.0 * n01(rng);
        CHECK((prox_nested(v, gs, 0.7) - oracle::prox_dual(v, g, 0.7)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("prox output has exact zeros and is idempotent at zero threshold") {
    const GroupStructure gs = structure({{0, 1, 2, 3}}, 4);
    const Eigen::VectorXd u = prox_nested(Eigen::Vector4d(2.0, 1.0, 0.1, 0.05), gs, 0.3);
    CHECK(u(2) == 0.0);
    CHECK(u(3) == 0.0);
    CHECK(u(0) != 0.0);
    Eigen::VectorXd w = Eigen::Vector4d(1, 2, 3, 4);
    prox_nested_inplace(w, gs, 0.0);
    CHECK(w == Eigen::Vector4d(1, 2, 3, 4));
}

TEST_CASE("group structure validation") {
    GroupStructure gs = structure({{0, 1}, {1, 2}}, 3);
    CHECK_THROWS(gs.validate());
    gs = structure({{0, 1}}, 3);
    CHECK_THROWS(gs.validate());
    gs = structure({{0, 2}, {1}}, 3);
    CHECK_NOTHROW(gs.validate());
    gs.blocks[0].weights = {1.0, -1.0};
    CHECK_THROWS(gs.validate());
}

}
