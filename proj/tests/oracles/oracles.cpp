#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace oracle {

Groups suffix_groups(const std::vector<std::vector<int>>& blocks, int p) {
    Groups g;
    g.p = p;
    for (const auto& b : blocks)
        for (std::size_t k = 0; k < b.size(); ++k) g.add(std::vector<int>(b.begin() + static_cast<long>(k), b.end()));
    return g;
}

double penalty(const Eigen::VectorXd& u, const Groups& g) {
    double total = 0.0;
    for (std::size_t k = 0; k < g.members.size(); ++k) {
        double sq = 0.0;
        for (int i : g.members[k]) sq += u(i) * u(i);
        total += g.weights[k] * std::sqrt(sq);
    }
    return total;
}

double objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Groups& g, double lambda,
                 const Eigen::VectorXd& theta) {
    return 0.5 * (y - X * theta).squaredNorm() + lambda * penalty(theta, g);
}

Eigen::VectorXd prox_dual(const Eigen::VectorXd& v, const Groups& g, double t, std::vector<Eigen::VectorXd>* dual,
                          double tol, int max_sweeps) {
    const std::size_t G = g.members.size();
    std::vector<Eigen::VectorXd> local;
    std::vector<Eigen::VectorXd>& z = dual ? *dual : local;
    if (z.size() != G) {
        z.clear();
        for (const auto& m : g.members) z.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.size())));
    }
    Eigen::VectorXd u = v;
    for (std::size_t k = 0; k < G; ++k)
        for (std::size_t a = 0; a < g.members[k].size(); ++a) u(g.members[k][a]) -= z[k](static_cast<Eigen::Index>(a));

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double change = 0.0;
        for (std::size_t k = 0; k < G; ++k) {
            const auto& idx = g.members[k];
            const auto len = static_cast<Eigen::Index>(idx.size());
            // Residual without this group's dual, then project onto the ball.
            Eigen::VectorXd r(len);
            for (Eigen::Index a = 0; a < len; ++a) r(a) = u(idx[static_cast<std::size_t>(a)]) + z[k](a);
            const double radius = t * g.weights[k];
            const double nr = r.norm();
            Eigen::VectorXd znew = nr <= radius ? r : Eigen::VectorXd(r * (radius / nr));
            change = std::max(change, (znew - z[k]).cwiseAbs().maxCoeff());
            for (Eigen::Index a = 0; a < len; ++a) u(idx[static_cast<std::size_t>(a)]) = r(a) - znew(a);
            z[k] = std::move(znew);
        }
        if (change <= tol) break;
    }
    // Exact zeros where a group's dual absorbs the whole residual.
    for (std::size_t k = 0; k < G; ++k) {
        const auto& idx = g.members[k];
        double rn = 0.0;
        for (std::size_t a = 0; a < idx.size(); ++a) {
            const double r = u(idx[a]) + z[k](static_cast<Eigen::Index>(a));
            rn += r * r;
        }
        if (std::sqrt(rn) < t * g.weights[k] * (1.0 - 1e-12))
            for (int i : idx) u(i) = 0.0;
    }
    return u;
}

Eigen::VectorXd prox_grid(const Eigen::VectorXd& v, const Groups& g, double t, double step) {
    if (v.size() > 2) throw std::invalid_argument("prox_grid supports p <= 2");
    auto f = [&](const Eigen::VectorXd& u) { return 0.5 * (u - v).squaredNorm() + t * penalty(u, g); };
    const double R = v.cwiseAbs().maxCoeff() + 0.1;
    Eigen::VectorXd best = Eigen::VectorXd::Zero(v.size());
    double fbest = f(best);
    const int n = static_cast<int>(std::ceil(2.0 * R / step));
    Eigen::VectorXd u(v.size());
    if (v.size() == 1) {
        for (int a = 0; a <= n; ++a) {
            u(0) = -R + a * step;
            if (const double fu = f(u); fu < fbest) fbest = fu, best = u;
        }
    } else {
        for (int a = 0; a <= n; ++a)
            for (int b = 0; b <= n; ++b) {
                u(0) = -R + a * step;
                u(1) = -R + b * step;
                if (const double fu = f(u); fu < fbest) fbest = fu, best = u;
            }
    }
    return coordinate_refine(f, best, 2.0 * step);
}

namespace {

double exact_lipschitz(const Eigen::MatrixXd& X) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X.transpose() * X);
    return es.eigenvalues().maxCoeff();
}

}  // namespace

Reference ista_reference(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Groups& g, double lambda,
                         int starts, std::uint64_t seed, double tol, int max_iter) {
    const double L = exact_lipschitz(X);
    const Eigen::MatrixXd G = X.transpose() * X;
    const Eigen::VectorXd c = X.transpose() * y;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    Reference ref;
    std::vector<Eigen::VectorXd> sols;
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < starts; ++s) {
        Eigen::VectorXd theta(X.cols());
        for (Eigen::Index k = 0; k < theta.size(); ++k) theta(k) = 2.0 * normal(rng);
        std::vector<Eigen::VectorXd> dual;
        for (int it = 0; it < max_iter; ++it) {
            const Eigen::VectorXd v = theta - (G * theta - c) / L;
            Eigen::VectorXd next = prox_dual(v, g, lambda / L, &dual);
            const double diff = (next - theta).cwiseAbs().maxCoeff();
            theta = std::move(next);
            if (diff < tol) break;
        }
        const double f = objective(X, y, g, lambda, theta);
        if (f < best) {
            best = f;
            ref.theta = theta;
        }
        sols.push_back(theta);
    }
    ref.objective = best;
    for (const auto& a : sols)
        for (const auto& b : sols) ref.spread = std::max(ref.spread, (a - b).cwiseAbs().maxCoeff());
    return ref;
}

double certificate(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Groups& g, double lambda,
                   const Eigen::VectorXd& theta) {
    const double L = exact_lipschitz(X);
    const Eigen::VectorXd v = theta - X.transpose() * (X * theta - y) / L;
    return (prox_dual(v, g, lambda / L) - theta).cwiseAbs().maxCoeff();
}

Eigen::VectorXd grid_search(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Groups& g, double lambda,
                            const Eigen::VectorXd& center, double radius, int points) {
    const auto p = center.size();
    auto f = [&](const Eigen::VectorXd& th) { return objective(X, y, g, lambda, th); };
    Eigen::VectorXd best = center, cur(p);
    double fbest = f(best);
    std::vector<int> digit(static_cast<std::size_t>(p), 0);
    const double h = points > 1 ? 2.0 * radius / (points - 1) : 0.0;
    while (true) {
        for (Eigen::Index k = 0; k < p; ++k) cur(k) = center(k) - radius + h * digit[static_cast<std::size_t>(k)];
        if (const double fc = f(cur); fc < fbest) fbest = fc, best = cur;
        std::size_t k = 0;
        while (k < digit.size() && ++digit[k] == points) digit[k++] = 0;
        if (k == digit.size()) break;
    }
    // The all-zero point and every grid point with zeroed coordinates matter for
    // sparse minimisers; include the origin explicitly.
    if (f(Eigen::VectorXd::Zero(p)) < fbest) best = Eigen::VectorXd::Zero(p);
    return coordinate_refine(f, best, std::max(h, 1e-6), 2000);
}

Eigen::VectorXd restricted_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::MatrixXd& A) {
    const auto p = X.cols(), r = A.rows();
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(p + r, p + r);
    K.topLeftCorner(p, p) = X.transpose() * X;
    K.topRightCorner(p, r) = A.transpose();
    K.bottomLeftCorner(r, p) = A;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p + r);
    rhs.head(p) = X.transpose() * y;
    const Eigen::VectorXd sol = K.fullPivLu().solve(rhs);
    return sol.head(p);
}

int hierarchy_violations(const Eigen::VectorXd& theta, const std::vector<std::vector<int>>& blocks) {
    int bad = 0;
    for (const auto& b : blocks) {
        bool seen_zero = false;
        for (int i : b) {
            if (theta(i) == 0.0) seen_zero = true;
            else if (seen_zero) {
                ++bad;
                break;
            }
        }
    }
    return bad;
}

}  // namespace oracle
