#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mfh/design.hpp"

namespace mfh {

/// One top-level block of coefficients ordered by priority: `indices[0]` is
/// the most recent lag. The block carries the nested suffix groups
/// g_k = {indices[k], ..., indices[len-1]} for k = 0..len-1.
struct GroupBlock {
    std::string name;
    std::vector<int> indices;
    std::vector<double> weights;  // one per suffix group; empty means all 1

    std::size_t size() const { return indices.size(); }
    double weight(std::size_t k) const { return weights.empty() ? 1.0 : weights[k]; }
};

struct GroupStructure {
    std::vector<GroupBlock> blocks;
    int p = 0;

    /// Throws unless the blocks partition {0..p-1} and weights are positive.
    void validate() const;
    /// Replaces the weights with sqrt(|g_k|).
    GroupStructure with_size_weights() const;
};

/// Sum over blocks and suffix groups of w_k * ||theta_{g_k}||_2.
double penalty(const Eigen::VectorXd& theta, const GroupStructure& groups);

/// Exact proximal map of threshold * penalty: per block, group soft-thresholding
/// from the innermost suffix group out to the whole block.
Eigen::VectorXd prox_nested(const Eigen::VectorXd& v, const GroupStructure& groups, double threshold);
void prox_nested_inplace(Eigen::VectorXd& v, const GroupStructure& groups, double threshold);

struct SolverConfig {
    int max_iterations = 10000;
    double tolerance = 1e-8;            // relative objective change
    double certificate_tolerance = 1e-9;  // fixed-point residual, relative to max(1, |theta|_inf)
    bool acceleration = true;
    int n_lambda = 50;
    double lambda_min_ratio = 1e-3;
    bool size_weights = false;
    bool record_objective = false;

    void validate() const;
};

double lambda_top(const Design& design, const GroupStructure& groups);

/// Log-spaced grid from lambda_top down to lambda_top * lambda_min_ratio.
std::vector<double> lambda_grid(const Design& design, const GroupStructure& groups,
                                const SolverConfig& config);

struct PathPoint {
    double lambda = 0.0;
    Eigen::VectorXd coefficients;  // fitting scale
    double rss = 0.0;
    int df = 0;
    double bic = 0.0;
    int iterations = 0;
    bool converged = false;
    double objective = 0.0;
    std::vector<double> objective_trace;  // filled when config.record_objective
};

struct RegularizationPath {
    std::vector<PathPoint> points;
    double step_constant = 0.0;  // L, the largest eigenvalue of X'X
    Eigen::Index n = 0;
};

/// Largest eigenvalue of a symmetric positive semidefinite matrix by power iteration.
double largest_eigenvalue(const Eigen::MatrixXd& gram, double rel_tol = 1e-6, int max_iter = 10000);

/// Solves min 0.5 * ||y - X theta||^2 + lambda * penalty(theta) for one lambda.
PathPoint solve_hierarchical(const Design& design, const GroupStructure& groups, double lambda,
                             const SolverConfig& config, const Eigen::VectorXd* warm_start = nullptr);

/// Warm-started proximal gradient over a descending lambda list (or the
/// default grid when `lambdas` is empty).
RegularizationPath fit_path(const Design& design, const GroupStructure& groups,
                            const SolverConfig& config, std::vector<double> lambdas = {});

/// Fixed-point residual ||theta - prox(theta - grad / L, lambda / L)||_inf.
double optimality_residual(const Design& design, const GroupStructure& groups, double lambda,
                           const Eigen::VectorXd& theta, double step_constant);

struct BicChoice {
    std::size_t index = 0;
    double lambda = 0.0;
    bool perfect_fit = false;
};

double bic_value(double rss, int df, Eigen::Index n);
/// argmin BIC; ties go to the larger lambda (earlier in a descending path).
BicChoice bic_select(const RegularizationPath& path);

struct LeastSquares {
    Eigen::VectorXd coefficients;
    bool rank_deficient = false;
    double condition_number = 1.0;
    std::vector<std::string> warnings;
};

/// Least squares through a complete orthogonal decomposition. Rank-deficient
/// problems receive the minimum-norm solution.
LeastSquares ols(const Design& design);
LeastSquares ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

/// OLS restricted to `active` columns, zeros elsewhere.
LeastSquares post_lasso(const Design& design, const std::vector<int>& active);

std::vector<int> active_set(const Eigen::VectorXd& theta);

/// Nested-group layout for a design's columns: suffix groups over positions for
/// each LF variable and lag, suffix groups over HF lags (per position for the
/// per-equation and dummy layouts), and a day, week, month ordering for dwm.
GroupStructure make_groups(const Design& design);

/// True when, in every block, a zero coefficient is followed only by zeros.
bool respects_hierarchy(const Eigen::VectorXd& theta, const GroupStructure& groups);

struct FitResult {
    Eigen::VectorXd coefficients;           // post-lasso (or OLS), raw regressor scale
    Eigen::VectorXd regularized;            // regularized solution, raw regressor scale
    double intercept = 0.0;                 // implied by centering; 0 for raw OLS designs
    std::vector<int> active_set;
    double lambda = 0.0;
    std::vector<PathPoint> path;            // (lambda, rss, df, bic, iterations, converged)
    Eigen::VectorXd residuals;              // on the fitting sample, raw target scale
    bool converged = true;
    std::vector<std::string> warnings;
    std::vector<std::string> column_labels;
    CenteringRecord centering;

    /// Forecast from a raw regressor row.
    double predict(const Eigen::RowVectorXd& raw_row) const;
};

enum class Estimator { Hier, Ols, HarOls };
std::string to_string(Estimator e);
Estimator parse_estimator(const std::string& text);

// Which residuals enter BIC at each lambda: those of the least-squares refit on
// that lambda's active set, or those of the shrunken solution itself.
enum class BicRss { PostLasso, Regularized };
std::string to_string(BicRss r);
BicRss parse_bic_rss(const std::string& text);

struct HierOptions {
    SolverConfig solver;
    bool standardize = true;
    bool post_lasso = true;
    BicRss bic_rss = BicRss::PostLasso;
};

/// Centers and scales the design, runs the path, picks lambda by BIC and refits
/// the selected columns by least squares on the centered design.
FitResult fit_hier(const Design& raw, const HierOptions& options = {});
/// Least squares on the centered design (no intercept column needed).
FitResult fit_ols_centered(const Design& raw);
/// Least squares on the design as given (HAR with intercept).
FitResult fit_ols_raw(const Design& raw);

std::string fit_to_json(const FitResult& fit);

}  // namespace mfh
