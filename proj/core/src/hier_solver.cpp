#include "mfh/hier_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <random>
#include <set>

#include "mfh/error.hpp"

namespace mfh {

// ---------------------------------------------------------------------------
// Group structure and penalty

void GroupStructure::validate() const {
    std::vector<int> seen(static_cast<std::size_t>(std::max(p, 0)), 0);
    for (const auto& b : blocks) {
        if (b.indices.empty()) throw UsageError("empty group block '" + b.name + "'");
        if (!b.weights.empty() && b.weights.size() != b.indices.size())
            throw UsageError("block '" + b.name + "' has a weight count mismatch");
        for (double w : b.weights) {
            if (!(w > 0.0)) throw UsageError("block '" + b.name + "' has a non-positive weight");
        }
        for (int idx : b.indices) {
            if (idx < 0 || idx >= p) throw UsageError("block '" + b.name + "' index out of range");
            ++seen[static_cast<std::size_t>(idx)];
        }
    }
    for (int k = 0; k < p; ++k) {
        if (seen[static_cast<std::size_t>(k)] != 1)
            throw UsageError("group blocks do not partition the coefficients (index " +
                             std::to_string(k) + ")");
    }
}

GroupStructure GroupStructure::with_size_weights() const {
    GroupStructure out = *this;
    for (auto& b : out.blocks) {
        b.weights.resize(b.indices.size());
        for (std::size_t k = 0; k < b.indices.size(); ++k)
            b.weights[k] = std::sqrt(static_cast<double>(b.indices.size() - k));
    }
    return out;
}

double penalty(const Eigen::VectorXd& theta, const GroupStructure& groups) {
    double total = 0.0;
    for (const auto& b : groups.blocks) {
        double sq = 0.0;
        for (std::size_t k = b.size(); k-- > 0;) {
            const double v = theta(b.indices[k]);
            sq += v * v;
            total += b.weight(k) * std::sqrt(sq);
        }
    }
    return total;
}

void prox_nested_inplace(Eigen::VectorXd& v, const GroupStructure& groups, double threshold) {
    if (threshold < 0.0) throw UsageError("prox threshold must be non-negative");
    if (threshold == 0.0) return;
    std::vector<double> factor;
    for (const auto& b : groups.blocks) {
        const std::size_t len = b.size();
        factor.assign(len, 1.0);
        // Innermost suffix first; sq tracks the squared norm of the current
        // suffix after the inner groups have been shrunk.
        double sq = 0.0;
        for (std::size_t k = len; k-- > 0;) {
            const double x = v(b.indices[k]);
            sq += x * x;
            const double norm = std::sqrt(sq);
            const double thr = threshold * b.weight(k);
            const double f = norm <= thr ? 0.0 : 1.0 - thr / norm;
            factor[k] = f;
            sq *= f * f;
        }
        // Element k sits in groups g_0..g_k.
        double cum = 1.0;
        for (std::size_t k = 0; k < len; ++k) {
            cum *= factor[k];
            if (cum == 0.0) {
                for (std::size_t r = k; r < len; ++r) v(b.indices[r]) = 0.0;
                break;
            }
            v(b.indices[k]) *= cum;
        }
    }
}

Eigen::VectorXd prox_nested(const Eigen::VectorXd& v, const GroupStructure& groups, double threshold) {
    Eigen::VectorXd out = v;
    prox_nested_inplace(out, groups, threshold);
    return out;
}

bool respects_hierarchy(const Eigen::VectorXd& theta, const GroupStructure& groups) {
    for (const auto& b : groups.blocks) {
        bool zero_seen = false;
        for (int idx : b.indices) {
            if (theta(idx) == 0.0) zero_seen = true;
            else if (zero_seen) return false;
        }
    }
    return true;
}

std::vector<int> active_set(const Eigen::VectorXd& theta) {
    std::vector<int> out;
    for (Eigen::Index k = 0; k < theta.size(); ++k) {
        if (theta(k) != 0.0) out.push_back(static_cast<int>(k));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Least-squares reduction and proximal gradient

void SolverConfig::validate() const {
    if (!(tolerance > 0.0)) throw UsageError("solver tolerance must be positive");
    if (n_lambda < 1) throw UsageError("n_lambda must be >= 1");
    if (max_iterations < 1) throw UsageError("max_iterations must be >= 1");
    if (!(lambda_min_ratio > 0.0) || lambda_min_ratio > 1.0)
        throw UsageError("lambda_min_ratio must lie in (0, 1]");
}

namespace {

// ||y - X theta||^2 == ||b - R theta||^2 + rss0 with R upper triangular
// (from a Householder QR of X) whenever n >= p. Keeps the objective accurate
// when the residual is small relative to ||y||.
struct Reduced {
    Eigen::MatrixXd R;
    Eigen::VectorXd b;
    double rss0 = 0.0;
    Eigen::MatrixXd gram;
    Eigen::VectorXd xty;
    double L = 0.0;

    double rss(const Eigen::VectorXd& theta) const {
        return (b - R * theta).squaredNorm() + rss0;
    }
};

Reduced reduce(const Design& d) {
    Reduced red;
    const Eigen::Index n = d.n(), p = d.p();
    if (n >= p && p > 0) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(d.X);
        Eigen::VectorXd qty = qr.householderQ().adjoint() * d.target;
        red.R = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
        red.b = qty.head(p);
        red.rss0 = qty.tail(n - p).squaredNorm();
    } else {
        red.R = d.X;
        red.b = d.target;
    }
    red.gram = red.R.transpose() * red.R;
    red.xty = red.R.transpose() * red.b;
    red.L = p > 0 ? largest_eigenvalue(red.gram) : 0.0;
    return red;
}

PathPoint solve_reduced(const Reduced& red, const GroupStructure& groups, double lambda,
                        const SolverConfig& cfg, const Eigen::VectorXd& start) {
    const Eigen::Index p = red.gram.rows();
    PathPoint pt;
    pt.lambda = lambda;
    if (p == 0) {
        pt.coefficients = Eigen::VectorXd::Zero(0);
        pt.rss = red.rss0 + red.b.squaredNorm();
        pt.converged = true;
        pt.objective = 0.5 * pt.rss;
        return pt;
    }
    if (red.L <= 0.0) {
        // X == 0: the penalty alone decides, and it is minimised at 0.
        pt.coefficients = Eigen::VectorXd::Zero(p);
        pt.rss = red.rss(pt.coefficients);
        pt.converged = true;
        pt.objective = 0.5 * pt.rss;
        return pt;
    }

    const double step = 1.0 / red.L;
    const double thr = lambda * step;
    auto objective = [&](const Eigen::VectorXd& th) {
        return 0.5 * red.rss(th) + lambda * penalty(th, groups);
    };
    auto prox_step = [&](const Eigen::VectorXd& at) {
        Eigen::VectorXd next = at - step * (red.gram * at - red.xty);
        prox_nested_inplace(next, groups, thr);
        return next;
    };

    Eigen::VectorXd x = start;
    double F = objective(x);
    const double floor = 1e-14 * std::max(0.5 * (red.b.squaredNorm() + red.rss0), 1e-300);
    Eigen::VectorXd z = x;
    double t = 1.0;
    if (cfg.record_objective) pt.objective_trace.push_back(F);

    int it = 0;
    bool converged = false;
    while (it < cfg.max_iterations) {
        ++it;
        Eigen::VectorXd x_new = prox_step(cfg.acceleration ? z : x);
        double F_new = objective(x_new);
        if (cfg.acceleration && F_new > F) {
            // Momentum overshot: restart from the last accepted iterate.
            t = 1.0;
            x_new = prox_step(x);
            F_new = objective(x_new);
        }
        const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        if (cfg.acceleration) z = x_new + ((t - 1.0) / t_new) * (x_new - x);
        t = t_new;

        const double change = std::abs(F - F_new) / std::max({std::abs(F), std::abs(F_new), floor});
        x = std::move(x_new);
        F = F_new;
        if (cfg.record_objective) pt.objective_trace.push_back(F);

        if (change < cfg.tolerance) {
            const Eigen::VectorXd fixed = prox_step(x);
            const double resid = (fixed - x).cwiseAbs().maxCoeff();
            const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
            if (resid <= cfg.certificate_tolerance * scale) {
                converged = true;
                break;
            }
            if (cfg.acceleration && change == 0.0) {
                // Stalled momentum; fall back to plain steps from here.
                z = x;
                t = 1.0;
            }
        }
    }
    pt.coefficients = std::move(x);
    pt.iterations = it;
    pt.converged = converged;
    pt.rss = red.rss(pt.coefficients);
    pt.objective = F;
    pt.df = static_cast<int>(active_set(pt.coefficients).size());
    return pt;
}

}  // namespace

double largest_eigenvalue(const Eigen::MatrixXd& gram, double rel_tol, int max_iter) {
    const Eigen::Index p = gram.rows();
    if (p == 0) return 0.0;
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unif(0.5, 1.5);
    Eigen::VectorXd v(p);
    for (Eigen::Index k = 0; k < p; ++k) v(k) = unif(rng);
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        const Eigen::VectorXd w = gram * v;
        lambda = v.dot(w);
        const double norm = w.norm();
        if (norm == 0.0) return 0.0;
        // Some eigenvalue lies within the residual of the Rayleigh quotient.
        const bool done = (w - lambda * v).norm() <= rel_tol * std::abs(lambda);
        v = w / norm;
        if (done) break;
    }
    // The Rayleigh quotient approaches from below; ||G v|| bounds it from above.
    return std::max(lambda, (gram * v).norm());
}

double lambda_top(const Design& design, const GroupStructure& groups) {
    const Eigen::VectorXd xty = design.X.transpose() * design.target;
    double top = 0.0;
    for (const auto& b : groups.blocks) {
        double sq = 0.0;
        for (int idx : b.indices) sq += xty(idx) * xty(idx);
        top = std::max(top, std::sqrt(sq) / b.weight(0));
    }
    return top;
}

std::vector<double> lambda_grid(const Design& design, const GroupStructure& groups,
                                const SolverConfig& config) {
    config.validate();
    const double top = lambda_top(design, groups);
    if (top == 0.0) return {0.0};
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(config.n_lambda));
    if (config.n_lambda == 1) return {top};
    const double log_ratio = std::log(config.lambda_min_ratio);
    for (int k = 0; k < config.n_lambda; ++k)
        grid.push_back(top * std::exp(log_ratio * k / (config.n_lambda - 1)));
    grid.front() = top;
    return grid;
}

PathPoint solve_hierarchical(const Design& design, const GroupStructure& groups, double lambda,
                             const SolverConfig& config, const Eigen::VectorXd* warm_start) {
    config.validate();
    groups.validate();
    if (groups.p != design.p()) throw UsageError("group structure does not match the design width");
    const Reduced red = reduce(design);
    Eigen::VectorXd start = warm_start ? *warm_start : Eigen::VectorXd::Zero(design.p());
    PathPoint pt = solve_reduced(red, groups, lambda, config, start);
    pt.bic = bic_value(pt.rss, pt.df, design.n());
    return pt;
}

RegularizationPath fit_path(const Design& design, const GroupStructure& groups, const SolverConfig& config,
                            std::vector<double> lambdas) {
    config.validate();
    groups.validate();
    if (groups.p != design.p()) throw UsageError("group structure does not match the design width");
    if (!design.X.allFinite() || !design.target.allFinite())
        throw NumericalError("design contains non-finite values");
    if (lambdas.empty()) lambdas = lambda_grid(design, groups, config);

    RegularizationPath path;
    path.n = design.n();
    const Reduced red = reduce(design);
    path.step_constant = red.L;
    Eigen::VectorXd warm = Eigen::VectorXd::Zero(design.p());
    for (double lambda : lambdas) {
        PathPoint pt = solve_reduced(red, groups, lambda, config, warm);
        pt.bic = bic_value(pt.rss, pt.df, design.n());
        warm = pt.coefficients;
        path.points.push_back(std::move(pt));
    }
    return path;
}

double optimality_residual(const Design& design, const GroupStructure& groups, double lambda,
                           const Eigen::VectorXd& theta, double step_constant) {
    const Eigen::VectorXd grad = design.X.transpose() * (design.X * theta - design.target);
    Eigen::VectorXd next = theta - grad / step_constant;
    prox_nested_inplace(next, groups, lambda / step_constant);
    return (next - theta).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Selection and least squares

double bic_value(double rss, int df, Eigen::Index n) {
    const double dn = static_cast<double>(n);
    if (rss <= 0.0) return -std::numeric_limits<double>::infinity();
    return dn * std::log(rss / dn) + df * std::log(dn);
}

BicChoice bic_select(const RegularizationPath& path) {
    if (path.points.empty()) throw UsageError("cannot select from an empty path");
    BicChoice best;
    double best_bic = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < path.points.size(); ++k) {
        const double b = path.points[k].bic;
        if (k == 0 || b < best_bic) {
            best_bic = b;
            best.index = k;
        }
        if (std::isinf(b) && b < 0) break;  // perfect fit
    }
    best.lambda = path.points[best.index].lambda;
    best.perfect_fit = path.points[best.index].rss <= 0.0;
    return best;
}

LeastSquares ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    LeastSquares ls;
    const Eigen::Index p = X.cols();
    if (p == 0) {
        ls.coefficients = Eigen::VectorXd::Zero(0);
        return ls;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    const Eigen::Index k = std::min(X.rows(), p);
    Eigen::MatrixXd R = qr.matrixR().topLeftCorner(k, p).triangularView<Eigen::Upper>();
    Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXd>(R).singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    const double smin = (X.rows() >= p && sv.size()) ? sv(sv.size() - 1) : 0.0;
    ls.condition_number = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (ls.condition_number > 1e12)
        ls.warnings.push_back("ill-conditioned design (condition number > 1e12)");

    if (qr.rank() < p) {
        ls.rank_deficient = true;
        ls.warnings.push_back("rank-deficient design; minimum-norm solution");
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(X);
        ls.coefficients = cod.solve(y);
    } else {
        ls.coefficients = qr.solve(y);
    }
    return ls;
}

LeastSquares ols(const Design& design) { return ols(design.X, design.target); }

LeastSquares post_lasso(const Design& design, const std::vector<int>& active) {
    LeastSquares out;
    out.coefficients = Eigen::VectorXd::Zero(design.p());
    if (active.empty()) return out;
    Eigen::MatrixXd Xa(design.n(), static_cast<Eigen::Index>(active.size()));
    for (std::size_t k = 0; k < active.size(); ++k) Xa.col(static_cast<Eigen::Index>(k)) = design.X.col(active[k]);
    LeastSquares sub = ols(Xa, design.target);
    if (static_cast<Eigen::Index>(active.size()) >= design.n())
        sub.warnings.push_back("active set not smaller than the sample; minimum-norm solution");
    for (std::size_t k = 0; k < active.size(); ++k) out.coefficients(active[k]) = sub.coefficients(static_cast<Eigen::Index>(k));
    out.rank_deficient = sub.rank_deficient;
    out.condition_number = sub.condition_number;
    out.warnings = std::move(sub.warnings);
    return out;
}

// ---------------------------------------------------------------------------
// Groups from column metadata

GroupStructure make_groups(const Design& design) {
    GroupStructure gs;
    gs.p = static_cast<int>(design.p());
    const ModelKind kind = design.spec.kind;

    // key -> (order key, column) lists
    std::map<std::tuple<int, int, int>, std::vector<std::pair<int, int>>> lf_blocks;  // (var, lag, pos-or-0)
    std::map<int, std::vector<std::pair<int, int>>> hf_blocks;                        // position (0 = shared)
    std::vector<std::pair<int, int>> dwm;

    for (std::size_t c = 0; c < design.columns.size(); ++c) {
        const Column& col = design.columns[c];
        const int idx = static_cast<int>(c);
        switch (col.role) {
            case ColumnRole::Lf:
                if (kind == ModelKind::RumidasEq) lf_blocks[{col.variable, col.lag, col.position}].push_back({0, idx});
                else lf_blocks[{col.variable, col.lag, 0}].push_back({col.position, idx});
                break;
            case ColumnRole::Hf: hf_blocks[col.position].push_back({col.lag, idx}); break;
            case ColumnRole::HfDay: dwm.push_back({0, idx}); break;
            case ColumnRole::HfWeek: dwm.push_back({1, idx}); break;
            case ColumnRole::HfMonth: dwm.push_back({2, idx}); break;
            case ColumnRole::Intercept:
                throw UsageError("column '" + col.label + "' (intercept) has no place in the penalty");
        }
    }

    auto push = [&](std::string name, std::vector<std::pair<int, int>> cols) {
        std::sort(cols.begin(), cols.end());
        GroupBlock b;
        b.name = std::move(name);
        for (const auto& [order, idx] : cols) b.indices.push_back(idx);
        gs.blocks.push_back(std::move(b));
    };
    for (auto& [key, cols] : lf_blocks) {
        const auto [var, lag, pos] = key;
        std::string name = "alpha[" + design.lf_labels[static_cast<std::size_t>(var)] + ",l" + std::to_string(lag);
        if (pos > 0) name += ",i" + std::to_string(pos);
        push(name + "]", cols);
    }
    for (auto& [pos, cols] : hf_blocks) push(pos > 0 ? "beta[i" + std::to_string(pos) + "]" : "beta", cols);
    if (!dwm.empty()) push("beta[dwm]", dwm);
    gs.validate();
    return gs;
}

// ---------------------------------------------------------------------------
// Estimators

std::string to_string(Estimator e) {
    switch (e) {
        case Estimator::Hier: return "HIER";
        case Estimator::Ols: return "OLS";
        case Estimator::HarOls: return "HAR-OLS";
    }
    return "?";
}

Estimator parse_estimator(const std::string& text) {
    for (auto e : {Estimator::Hier, Estimator::Ols, Estimator::HarOls}) {
        if (to_string(e) == text) return e;
    }
    throw UsageError("unknown estimator '" + text + "'");
}

double FitResult::predict(const Eigen::RowVectorXd& raw_row) const {
    return raw_row.dot(coefficients) + intercept;
}

namespace {

void finish_centered_fit(FitResult& fit, const Design& centered, const Eigen::VectorXd& fitted_scale_coef) {
    fit.centering = centered.centering;
    fit.coefficients = centered.centering.coefficients_to_raw(fitted_scale_coef);
    fit.intercept = centered.centering.target_mean - centered.centering.column_means.dot(fit.coefficients);
    fit.residuals = centered.target - centered.X * fitted_scale_coef;
    fit.column_labels = centered.column_labels();
}

}  // namespace

std::string to_string(BicRss r) {
    return r == BicRss::PostLasso ? "post_lasso" : "regularized";
}

BicRss parse_bic_rss(const std::string& text) {
    for (auto r : {BicRss::PostLasso, BicRss::Regularized}) {
        if (to_string(r) == text) return r;
    }
    throw UsageError("unknown BIC residual choice '" + text + "'");
}

FitResult fit_hier(const Design& raw, const HierOptions& options) {
    const Design centered = center_scale(raw, options.standardize);
    GroupStructure groups = make_groups(centered);
    if (options.solver.size_weights) groups = groups.with_size_weights();

    RegularizationPath path = fit_path(centered, groups, options.solver);
    if (options.bic_rss == BicRss::PostLasso) {
        // Shrinkage inflates the RSS of the true model, which pushes BIC toward
        // smaller lambda and extra columns; score each support by its refit.
        // Refits run on the triangular factor: ||y - X c||^2 = ||b - R c||^2 + rss0.
        Eigen::MatrixXd R = centered.X;
        Eigen::VectorXd b = centered.target;
        double rss0 = 0.0;
        if (centered.n() > centered.p()) {
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(centered.X);
            const Eigen::VectorXd qty = qr.householderQ().adjoint() * centered.target;
            R = qr.matrixQR().topRows(centered.p()).triangularView<Eigen::Upper>();
            b = qty.head(centered.p());
            rss0 = qty.tail(centered.n() - centered.p()).squaredNorm();
        }
        std::map<std::vector<int>, double> seen;
        for (auto& p : path.points) {
            const std::vector<int> act = active_set(p.coefficients);
            auto it = seen.find(act);
            if (it == seen.end()) {
                double rss = b.squaredNorm() + rss0;
                if (!act.empty()) {
                    Eigen::MatrixXd Ra(R.rows(), static_cast<Eigen::Index>(act.size()));
                    for (std::size_t k = 0; k < act.size(); ++k) Ra.col(static_cast<Eigen::Index>(k)) = R.col(act[k]);
                    const Eigen::VectorXd c = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(Ra).solve(b);
                    rss = (b - Ra * c).squaredNorm() + rss0;
                }
                it = seen.emplace(act, rss).first;
            }
            p.rss = it->second;
            p.bic = bic_value(p.rss, p.df, centered.n());
        }
    }
    const BicChoice choice = bic_select(path);
    const PathPoint& sel = path.points[choice.index];

    FitResult fit;
    fit.lambda = choice.lambda;
    fit.active_set = active_set(sel.coefficients);
    fit.regularized = centered.centering.coefficients_to_raw(sel.coefficients);
    fit.converged = std::all_of(path.points.begin(), path.points.end(),
                                [](const PathPoint& p) { return p.converged; });
    if (!fit.converged) fit.warnings.push_back("proximal gradient hit max_iterations on part of the path");
    if (choice.perfect_fit) fit.warnings.push_back("perfect fit: RSS = 0 at the selected lambda");
    for (const auto& p : path.points) {
        PathPoint lite = p;
        lite.coefficients.resize(0);
        lite.objective_trace.clear();
        fit.path.push_back(std::move(lite));
    }

    Eigen::VectorXd coef = sel.coefficients;
    if (options.post_lasso) {
        LeastSquares ls = post_lasso(centered, fit.active_set);
        coef = ls.coefficients;
        fit.warnings.insert(fit.warnings.end(), ls.warnings.begin(), ls.warnings.end());
    }
    finish_centered_fit(fit, centered, coef);
    return fit;
}

FitResult fit_ols_centered(const Design& raw) {
    const Design centered = center_scale(raw, false);
    LeastSquares ls = ols(centered);
    FitResult fit;
    fit.warnings = ls.warnings;
    fit.active_set = active_set(ls.coefficients);
    finish_centered_fit(fit, centered, ls.coefficients);
    fit.regularized = fit.coefficients;
    return fit;
}

FitResult fit_ols_raw(const Design& raw) {
    LeastSquares ls = ols(raw);
    FitResult fit;
    fit.warnings = ls.warnings;
    fit.active_set = active_set(ls.coefficients);
    fit.centering = raw.centering;
    fit.coefficients = ls.coefficients;
    fit.regularized = ls.coefficients;
    fit.intercept = 0.0;
    fit.residuals = raw.target - raw.X * ls.coefficients;
    fit.column_labels = raw.column_labels();
    return fit;
}

std::string fit_to_json(const FitResult& fit) {
    nlohmann::json j;
    nlohmann::json coef = nlohmann::json::array();
    for (Eigen::Index k = 0; k < fit.coefficients.size(); ++k) {
        const std::string label = static_cast<std::size_t>(k) < fit.column_labels.size()
                                      ? fit.column_labels[static_cast<std::size_t>(k)]
                                      : std::to_string(k);
        coef.push_back({{"column", label}, {"value", fit.coefficients(k)}});
    }
    j["coefficients"] = coef;
    j["intercept"] = fit.intercept;
    j["active_set"] = fit.active_set;
    j["lambda"] = fit.lambda;
    nlohmann::json path = nlohmann::json::array();
    for (const auto& p : fit.path) {
        path.push_back({{"lambda", p.lambda},
                        {"rss", p.rss},
                        {"df", p.df},
                        {"bic", std::isfinite(p.bic) ? nlohmann::json(p.bic) : nlohmann::json("-inf")},
                        {"iterations", p.iterations},
                        {"converged", p.converged}});
    }
    j["path"] = path;
    j["converged"] = fit.converged;
    j["warnings"] = fit.warnings;
    return j.dump(2);
}

}  // namespace mfh
