#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <random>

#include "mfh/design.hpp"
#include "mfh/error.hpp"
#include "mfh/hier_solver.hpp"
#include "oracles/oracles.hpp"
#include "support.hpp"

using namespace mfh;
using testing_support::random_matrix;

namespace {

Design raw_design(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    Design d;
    d.X = X;
    d.target = y;
    for (Eigen::Index c = 0; c < X.cols(); ++c)
        d.columns.push_back({ColumnRole::Hf, -1, static_cast<int>(c) + 1, 0, "c" + std::to_string(c)});
    d.centering = CenteringRecord::identity(X.cols());
    return d;
}

GroupStructure structure(const std::vector<std::vector<int>>& blocks, int p) {
    GroupStructure gs;
    gs.p = p;
    for (std::size_t b = 0; b < blocks.size(); ++b) gs.blocks.push_back({"b" + std::to_string(b), blocks[b], {}});
    return gs;
}

std::vector<std::vector<int>> block_indices(const GroupStructure& gs) {
    std::vector<std::vector<int>> out;
    for (const auto& b : gs.blocks) out.push_back(b.indices);
    return out;
}

SolverConfig tight() {
    SolverConfig c;
    c.tolerance = 1e-15;
    c.certificate_tolerance = 1e-12;
    c.max_iterations = 500000;
    return c;
}

// Sparse truth with signal in the leading coordinates of each block.
struct Problem {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
};

Problem random_problem(int n, int p, std::uint64_t seed, double noise = 0.5) {
    std::mt19937_64 rng(seed);
    Problem pr{random_matrix(n, p, rng), Eigen::VectorXd()};
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    for (int k = 0; k < p; ++k) beta(k) = (k % 3 == 0) ? 1.0 : (k % 3 == 1 ? 0.4 : 0.0);
    pr.y = pr.X * beta + noise * random_matrix(n, 1, rng);
    return pr;
}

}  // namespace

TEST_SUITE("hier_solver") {

TEST_CASE("lambda grid: top value, log spacing, degenerate target") {
    const Problem pr = random_problem(40, 6, 1);
    const Design d = raw_design(pr.X, pr.y);
    const GroupStructure gs = structure({{0, 1, 2}, {3, 4, 5}}, 6);
    const Eigen::VectorXd xty = pr.X.transpose() * pr.y;
    const double expected_top = std::max(xty.head(3).norm(), xty.tail(3).norm());
    CHECK(lambda_top(d, gs) == doctest::Approx(expected_top).epsilon(1e-14));

    SolverConfig cfg;
    cfg.n_lambda = 10;
    cfg.lambda_min_ratio = 1e-2;
    const auto grid = lambda_grid(d, gs, cfg);
    REQUIRE(grid.size() == 10);
    CHECK(grid.front() == lambda_top(d, gs));
    const double ratio = std::pow(1e-2, 1.0 / 9.0);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        CHECK(grid[k] < grid[k - 1]);
        CHECK(grid[k] / grid[k - 1] == doctest::Approx(ratio).epsilon(1e-12));
    }
    CHECK(grid.back() == doctest::Approx(expected_top * 1e-2).epsilon(1e-12));

    const Design zero = raw_design(pr.X, Eigen::VectorXd::Zero(40));
    CHECK(lambda_grid(zero, gs, cfg) == std::vector<double>{0.0});
    const auto path = fit_path(zero, gs, cfg);
    REQUIRE(path.points.size() == 1);
    CHECK(path.points[0].coefficients.isZero());
}

TEST_CASE("limit cases: lambda_top gives zeros, lambda 0 gives OLS") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Problem pr = random_problem(50, 6, seed);
        const Design d = raw_design(pr.X, pr.y);
        const GroupStructure gs = structure({{0, 1, 2}, {3, 4, 5}}, 6);
        const double top = lambda_top(d, gs);
        CHECK(solve_hierarchical(d, gs, top, tight()).coefficients.isZero());
        // lambda_top is sufficient, not tight, under nesting; far below it the fit is nonzero
        CHECK_FALSE(solve_hierarchical(d, gs, 0.01 * top, tight()).coefficients.isZero());
        const Eigen::VectorXd ref = pr.X.colPivHouseholderQr().solve(pr.y);
        const Eigen::VectorXd got = solve_hierarchical(d, gs, 0.0, tight()).coefficients;
        CHECK((got - ref).norm() <= 1e-6 * ref.norm());
    }
}

TEST_CASE("objective is nonincreasing along accepted iterates") {
    for (bool accel : {true, false}) {
        const Problem pr = random_problem(60, 6, 5);
        const Design d = raw_design(pr.X, pr.y);
        const GroupStructure gs = structure({{0, 1, 2, 3, 4, 5}}, 6);
        SolverConfig cfg = tight();
        cfg.acceleration = accel;
        cfg.record_objective = true;
        const double lam = 0.1 * lambda_top(d, gs);
        const auto pt = solve_hierarchical(d, gs, lam, cfg);
        REQUIRE(pt.objective_trace.size() > 2);
        int increases = 0;
        for (std::size_t k = 1; k < pt.objective_trace.size(); ++k)
            if (pt.objective_trace[k] > pt.objective_trace[k - 1] * (1.0 + 1e-13)) ++increases;
        CHECK(increases == 0);
        CHECK(pt.converged);
    }
}

TEST_CASE("tiny problem: every path point matches the multi-start reference and the grid search") {
    const Problem pr = random_problem(30, 4, 77);
    const Design d = raw_design(pr.X, pr.y);
    const std::vector<std::vector<int>> blocks{{0, 1}, {2, 3}};
    const GroupStructure gs = structure(blocks, 4);
    const oracle::Groups og = oracle::suffix_groups(blocks, 4);
    SolverConfig cfg;
    cfg.n_lambda = 8;
    const auto path = fit_path(d, gs, cfg);
    for (const auto& pt : path.points) {
        const auto ref = oracle::ista_reference(pr.X, pr.y, og, pt.lambda, 10, 123);
        CHECK(ref.spread < 1e-8);
        CHECK((pt.coefficients - ref.theta).cwiseAbs().maxCoeff() < 1e-5);
        const Eigen::VectorXd grid = oracle::grid_search(pr.X, pr.y, og, pt.lambda, ref.theta, 0.5, 11);
        const double f_ref = oracle::objective(pr.X, pr.y, og, pt.lambda, ref.theta);
        const double f_grid = oracle::objective(pr.X, pr.y, og, pt.lambda, grid);
        CHECK(f_ref <= f_grid + 1e-9 * std::max(1.0, f_grid));
        CHECK((grid - ref.theta).cwiseAbs().maxCoeff() < 1e-3);
        CHECK(oracle::certificate(pr.X, pr.y, og, pt.lambda, pt.coefficients) < 1e-6);
        CHECK(oracle::hierarchy_violations(pt.coefficients, blocks) == 0);
    }
}

TEST_CASE("library certificate agrees with the oracle certificate") {
    const Problem pr = random_problem(50, 6, 9);
    const Design d = raw_design(pr.X, pr.y);
    const GroupStructure gs = structure({{0, 1, 2}, {3, 4, 5}}, 6);
    const auto path = fit_path(d, gs, SolverConfig{});
    for (const auto& pt : path.points) {
        CHECK(optimality_residual(d, gs, pt.lambda, pt.coefficients, path.step_constant) < 1e-6);
        CHECK(oracle::certificate(pr.X, pr.y, oracle::suffix_groups(block_indices(gs), 6), pt.lambda,
                                  pt.coefficients) < 1e-6);
    }
}

TEST_CASE("hierarchy of zeros along the path of a pooled design") {
    const MFDataset ds = testing_support::random_dataset(6, 60, 2, 3);
    ModelSpec s;
    s.kind = ModelKind::Pooled;
    const Design d = center_scale(build_pooled(ds, s), true);
    const GroupStructure gs = make_groups(d);
    const auto path = fit_path(d, gs, SolverConfig{});
    for (const auto& pt : path.points) {
        CHECK(oracle::hierarchy_violations(pt.coefficients, block_indices(gs)) == 0);
        CHECK(respects_hierarchy(pt.coefficients, gs));
    }
}

TEST_CASE("warm and cold starts reach the same solution") {
    const Problem pr = random_problem(50, 6, 21);
    const Design d = raw_design(pr.X, pr.y);
    const GroupStructure gs = structure({{0, 1, 2}, {3, 4, 5}}, 6);
    const double lam = 0.05 * lambda_top(d, gs);
    const Eigen::VectorXd warm = Eigen::VectorXd::Constant(6, 3.0);
    const auto a = solve_hierarchical(d, gs, lam, tight());
    const auto b = solve_hierarchical(d, gs, lam, tight(), &warm);
    CHECK((a.coefficients - b.coefficients).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("scaling equivariance") {
    const Problem pr = random_problem(50, 6, 4);
    const GroupStructure gs = structure({{0, 1, 2}, {3, 4, 5}}, 6);
    const double c = 3.7;
    const double lam = 0.2 * lambda_top(raw_design(pr.X, pr.y), gs);
    const auto a = solve_hierarchical(raw_design(pr.X, pr.y), gs, lam, tight());
    const auto b = solve_hierarchical(raw_design(pr.X, c * pr.y), gs, c * lam, tight());
    CHECK((b.coefficients - c * a.coefficients).cwiseAbs().maxCoeff() < 1e-8 * c);
}

TEST_CASE("non-convergence is flagged, not fatal") {
    const Problem pr = random_problem(50, 6, 2);
    Design d = raw_design(pr.X, pr.y);
    const GroupStructure gs = structure({{0, 1, 2}, {3, 4, 5}}, 6);
    SolverConfig cfg;
    cfg.max_iterations = 1;
    const auto pt = solve_hierarchical(d, gs, 0.01 * lambda_top(d, gs), cfg);
    CHECK_FALSE(pt.converged);
    CHECK(pt.iterations == 1);
    HierOptions opt;
    opt.solver = cfg;
    const FitResult fit = fit_hier(d, opt);
    CHECK_FALSE(fit.converged);
    CHECK_FALSE(fit.warnings.empty());
}

TEST_CASE("largest eigenvalue by power iteration") {
    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 10; ++rep) {
        const Eigen::MatrixXd X = random_matrix(30, 8, rng);
        const Eigen::MatrixXd G = X.transpose() * X;
        const double exact = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G).eigenvalues().maxCoeff();
        CHECK(std::abs(largest_eigenvalue(G) - exact) <= 1e-6 * exact);
    }
    CHECK(largest_eigenvalue(Eigen::MatrixXd::Zero(3, 3)) == 0.0);
}

TEST_CASE("BIC selection") {
    RegularizationPath path;
    path.n = 100;
    auto point = [](double lambda, double rss, int df) {
        PathPoint p;
        p.lambda = lambda;
        p.rss = rss;
        p.df = df;
        p.bic = bic_value(rss, df, 100);
        return p;
    };
    SUBCASE("equal RSS: fewer nonzeros wins") {
        path.points = {point(2.0, 10.0, 5), point(1.0, 10.0, 3)};
        CHECK(bic_select(path).index == 1);
    }
    SUBCASE("single lambda") {
        path.points = {point(0.3, 4.0, 2)};
        const auto c = bic_select(path);
        CHECK(c.index == 0);
        CHECK(c.lambda == 0.3);
    }
    SUBCASE("exact ties go to the larger lambda") {
        path.points = {point(2.0, 10.0, 3), point(1.0, 10.0, 3)};
        CHECK(bic_select(path).index == 0);
    }
    SUBCASE("a perfect fit is selected and flagged") {
        path.points = {point(2.0, 10.0, 1), point(1.0, 0.0, 4), point(0.5, 0.0, 5)};
        const auto c = bic_select(path);
        CHECK(c.index == 1);
        CHECK(c.perfect_fit);
        CHECK(std::isinf(path.points[1].bic));
    }
    CHECK(bic_value(50.0, 3, 100) == doctest::Approx(100 * std::log(0.5) + 3 * std::log(100.0)));
    path.points.clear();
    CHECK_THROWS_AS(bic_select(path), UsageError);
}

TEST_CASE("BIC keeps the true HF support in at least 95% of seeds [Monte Carlo]") {
    int hits = 0;
    for (int seed = 1; seed <= 200; ++seed) {
        SimulationConfig cfg;
        cfg.m = 20;
        cfg.T = 100;
        cfg.alpha = Eigen::MatrixXd::Zero(1, 20);
        cfg.beta = Eigen::VectorXd::Zero(20);
        cfg.beta(0) = 0.5;
        cfg.beta(1) = 0.3;
        cfg.noise_scale = 1.0;
        cfg.seed = static_cast<std::uint64_t>(seed);
        const auto sim = simulate_pooled_rumidas(cfg);
        ModelSpec s;
        s.kind = ModelKind::Pooled;
        const Design d = build_pooled(sim.dataset, s);
        const FitResult fit = fit_hier(d);
        const auto& act = fit.active_set;
        const bool has1 = std::find(act.begin(), act.end(), 20) != act.end();
        const bool has2 = std::find(act.begin(), act.end(), 21) != act.end();
        hits += (has1 && has2) ? 1 : 0;
    }
    CHECK(hits >= 190);
}

TEST_CASE("BIC residuals: refit on each support or the shrunken fit") {
    const Problem pr = random_problem(80, 6, 21);
    const Design d = raw_design(pr.X, pr.y);
    HierOptions o = {};
    o.solver = tight();
    o.solver.n_lambda = 15;
    const FitResult refit = fit_hier(d, o);

    const Design centered = center_scale(d, true);
    const RegularizationPath path = fit_path(centered, make_groups(centered), o.solver);
    REQUIRE(refit.path.size() == path.points.size());
    for (std::size_t k = 0; k < path.points.size(); ++k) {
        const auto act = active_set(path.points[k].coefficients);
        Eigen::MatrixXd Xa(centered.n(), static_cast<Eigen::Index>(act.size()));
        for (std::size_t j = 0; j < act.size(); ++j) Xa.col(static_cast<Eigen::Index>(j)) = centered.X.col(act[j]);
        double rss = centered.target.squaredNorm();
        if (!act.empty()) {
            const Eigen::VectorXd b = Xa.colPivHouseholderQr().solve(centered.target);
            rss = (centered.target - Xa * b).squaredNorm();
        }
        CHECK(refit.path[k].rss == doctest::Approx(rss).epsilon(1e-9));
        CHECK(refit.path[k].rss <= path.points[k].rss * (1 + 1e-12));
        CHECK(refit.path[k].df == path.points[k].df);
    }

    o.bic_rss = BicRss::Regularized;
    const FitResult shrunk = fit_hier(d, o);
    for (std::size_t k = 0; k < path.points.size(); ++k) CHECK(shrunk.path[k].rss == path.points[k].rss);
    CHECK(shrunk.lambda == path.points[bic_select(path).index].lambda);
    CHECK(parse_bic_rss("regularized") == BicRss::Regularized);
    CHECK_THROWS_AS(parse_bic_rss("both"), UsageError);
}

TEST_CASE("post-lasso examples") {
    const Problem pr = random_problem(40, 5, 13);
    const Design d = raw_design(pr.X, pr.y);
    const auto all = post_lasso(d, {0, 1, 2, 3, 4});
    CHECK((all.coefficients - ols(d).coefficients).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(post_lasso(d, {}).coefficients.isZero());

    // Noiseless truth on its own support.
    std::mt19937_64 rng(3);
    const Eigen::MatrixXd X = random_matrix(60, 6, rng);
    Eigen::VectorXd truth(6);
    truth << 1.5, -0.7, 0.0, 0.0, 2.0, 0.0;
    const auto pl = post_lasso(raw_design(X, X * truth), {0, 1, 4});
    CHECK((pl.coefficients - truth).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("empty selection forecasts the stored target mean") {
    const MFDataset ds = testing_support::random_dataset(4, 20, 1, 5);
    ModelSpec s;
    s.kind = ModelKind::Pooled;
    Design d = build_pooled(ds, s);
    d.target.setConstant(3.7);
    const FitResult fit = fit_hier(d);
    CHECK(fit.active_set.empty());
    CHECK(fit.predict(regressor_row(ds, d, ds.hf_length())) == doctest::Approx(3.7).epsilon(1e-14));
}

TEST_CASE("OLS examples") {
    std::mt19937_64 rng(4);
    const Eigen::MatrixXd Q = random_matrix(30, 4, rng).householderQr().householderQ() * Eigen::MatrixXd::Identity(30, 4);
    const Eigen::VectorXd y = random_matrix(30, 1, rng);
    CHECK((ols(Q, y).coefficients - Q.transpose() * y).cwiseAbs().maxCoeff() < 1e-12);

    const Eigen::MatrixXd X = random_matrix(30, 4, rng);
    const Eigen::VectorXd exact = X * Eigen::Vector4d(1, -2, 0.5, 3);
    const auto fit = ols(X, exact);
    CHECK((exact - X * fit.coefficients).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_FALSE(fit.rank_deficient);
    CHECK(fit.warnings.empty());

    Eigen::MatrixXd dup(30, 2);
    dup.col(0) = X.col(0);
    dup.col(1) = X.col(0);
    const auto rd = ols(dup, X.col(0));
    CHECK(rd.rank_deficient);
    CHECK(rd.coefficients(0) == doctest::Approx(0.5));
    CHECK(rd.coefficients(1) == doctest::Approx(0.5));
    CHECK_FALSE(rd.warnings.empty());

    Eigen::MatrixXd ill = X.leftCols(2);
    ill.col(1) = ill.col(0) + 1e-13 * X.col(1);
    CHECK(ols(ill, y).condition_number > 1e12);
    CHECK_FALSE(ols(ill, y).warnings.empty());
}

TEST_CASE("OLS on simulated HAR data lies within 3 standard errors [Monte Carlo]") {
    const Eigen::Vector4d truth(0.1, 0.4, 0.3, 0.2);  // intercept, day, week, month
    std::mt19937_64 rng(55);
    std::normal_distribution<double> n01(0.0, 1.0);
    const int N = 20 * 1000;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(N);
    for (int s = 20; s < N; ++s) {
        const double day = x(s - 1), week = x.segment(s - 5, 5).mean(), month = x.segment(s - 20, 20).mean();
        x(s) = truth(0) + truth(1) * day + truth(2) * week + truth(3) * month + n01(rng);
    }
    MFDataset ds(x, Eigen::MatrixXd::Zero(1000, 1), 20, {"y"});
    ModelSpec s;
    s.kind = ModelKind::Har;
    s.include_intercept = true;
    const Design d = build_har(ds, s);
    const auto fit = ols(d);
    const Eigen::VectorXd resid = d.target - d.X * fit.coefficients;
    const double sigma2 = resid.squaredNorm() / static_cast<double>(d.n() - 4);
    const Eigen::MatrixXd cov = sigma2 * (d.X.transpose() * d.X).inverse();
    for (int k = 0; k < 4; ++k) CHECK(std::abs(fit.coefficients(k) - truth(k)) <= 3.0 * std::sqrt(cov(k, k)));
}

TEST_CASE("group layouts from column metadata") {
    ModelSpec s;
    s.kind = ModelKind::Pooled;
    SUBCASE("pooled, K=1, m=3") {
        const Design d = build_pooled(testing_support::random_dataset(3, 5, 1, 1), s);
        const auto gs = make_groups(d);
        REQUIRE(gs.blocks.size() == 2);
        CHECK(gs.blocks[0].indices == std::vector<int>{0, 1, 2});
        CHECK(gs.blocks[1].indices == std::vector<int>{3, 4, 5});
        CHECK(gs.blocks[1].name == "beta");
    }
    SUBCASE("pooled, K=11, m=20") {
        const Design d = build_pooled(testing_support::random_dataset(20, 3, 11, 1), s);
        const auto gs = make_groups(d);
        CHECK(gs.blocks.size() == 12);
        CHECK(gs.p == 240);
        std::size_t total = 0;
        for (const auto& b : gs.blocks) total += b.size();
        CHECK(total == 240);
    }
    SUBCASE("dwm priority order") {
        s.kind = ModelKind::PooledDwm;
        const Design d = build_pooled_dwm(testing_support::random_dataset(20, 3, 1, 1), s);
        const auto gs = make_groups(d);
        REQUIRE(gs.blocks.size() == 2);
        CHECK(gs.blocks[1].indices == std::vector<int>{20, 21, 22});
    }
    SUBCASE("one equation: LF scalar is an l1 term, HF lags nested") {
        s.kind = ModelKind::RumidasEq;
        const Design d = build_rumidas_eq(testing_support::random_dataset(4, 6, 2, 1), s, 2);
        const auto gs = make_groups(d);
        REQUIRE(gs.blocks.size() == 3);
        CHECK(gs.blocks[0].size() == 1);
        CHECK(gs.blocks[1].size() == 1);
        CHECK(gs.blocks[2].indices == std::vector<int>{2, 3, 4, 5});
    }
    SUBCASE("dummy layout: LF over positions, HF per position over lags") {
        s.kind = ModelKind::RumidasDummy;
        const Design d = build_rumidas_dummy(testing_support::random_dataset(3, 6, 1, 1), s);
        const auto gs = make_groups(d);
        REQUIRE(gs.blocks.size() == 4);
        CHECK(gs.blocks[0].indices == std::vector<int>{0, 1, 2});
        // position 1: lags 1..3 live at columns 3, 6, 9
        CHECK(gs.blocks[1].indices == std::vector<int>{3, 6, 9});
    }
    SUBCASE("an intercept cannot be penalized") {
        s.kind = ModelKind::Har;
        s.include_intercept = true;
        const Design d = build_har(testing_support::random_dataset(20, 3, 1, 1), s);
        CHECK_THROWS_AS(make_groups(d), UsageError);
    }
}

TEST_CASE("fit results serialize to JSON") {
    const MFDataset ds = testing_support::random_dataset(4, 30, 1, 2);
    ModelSpec s;
    s.kind = ModelKind::Pooled;
    const FitResult fit = fit_hier(build_pooled(ds, s));
    const auto j = nlohmann::json::parse(fit_to_json(fit));
    CHECK(j["coefficients"].size() == 8);
    CHECK(j["coefficients"][0]["column"] == "lf[y1,l1,i1]");
    CHECK(j["path"].size() == 50);
    CHECK(j.contains("lambda"));
    CHECK(j.contains("active_set"));
    // coefficients outside the active set are exactly zero on the regularized fit
    for (Eigen::Index k = 0; k < fit.regularized.size(); ++k) {
        const bool active = std::find(fit.active_set.begin(), fit.active_set.end(), k) != fit.active_set.end();
        if (!active) CHECK(fit.regularized(k) == 0.0);
    }
}

TEST_CASE("solver configuration validation") {
    SolverConfig c;
    c.tolerance = 0.0;
    CHECK_THROWS_AS(c.validate(), UsageError);
    c = SolverConfig{};
    c.n_lambda = 0;
    CHECK_THROWS_AS(c.validate(), UsageError);
    CHECK(parse_estimator("HAR-OLS") == Estimator::HarOls);
    CHECK(to_string(Estimator::Hier) == "HIER");
}

}
