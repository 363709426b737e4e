#include "mfh/eval_stats.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <random>

#include "mfh/csv_io.hpp"
#include "mfh/error.hpp"

namespace mfh {

double normal_two_sided_p(double z) {
    if (std::isnan(z)) return 1.0;
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

double newey_west_variance(std::span<const double> d, int lag) {
    const std::size_t n = d.size();
    if (n == 0) return 0.0;
    double mean = 0.0;
    for (double v : d) mean += v;
    mean /= static_cast<double>(n);
    auto autocov = [&](std::size_t k) {
        double acc = 0.0;
        for (std::size_t t = k; t < n; ++t) acc += (d[t] - mean) * (d[t - k] - mean);
        return acc / static_cast<double>(n);
    };
    double v = autocov(0);
    for (int k = 1; k <= lag && static_cast<std::size_t>(k) < n; ++k)
        v += 2.0 * (1.0 - static_cast<double>(k) / (lag + 1)) * autocov(static_cast<std::size_t>(k));
    return v;
}

DMResult dm_test(std::span<const double> loss1, std::span<const double> loss2, int horizon,
                 const DMOptions& options) {
    if (loss1.size() != loss2.size()) throw DataError("DM test: loss vectors differ in length");
    if (horizon < 1) throw UsageError("DM test: horizon must be >= 1");
    const std::size_t n = loss1.size();
    if (n <= static_cast<std::size_t>(horizon)) throw DataError("DM test: need n > h");

    DMResult res;
    res.n = n;
    res.hac_lag = horizon - 1;
    std::vector<double> d(n);
    bool all_zero = true;
    double sum = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        d[t] = loss1[t] - loss2[t];
        all_zero = all_zero && d[t] == 0.0;
        sum += d[t];
    }
    if (all_zero) return res;
    const double mean = sum / static_cast<double>(n);

    double v = newey_west_variance(d, res.hac_lag);
    if (!(v > 0.0)) {
        res.variance_fallback = true;
        v = newey_west_variance(d, 0);
    }
    if (!(v > 0.0)) {
        res.degenerate = true;
        res.statistic = mean > 0 ? std::numeric_limits<double>::infinity()
                                 : -std::numeric_limits<double>::infinity();
        res.p_value = 0.0;
        return res;
    }
    res.statistic = mean / std::sqrt(v / static_cast<double>(n));
    if (options.harvey_correction) {
        const double dn = static_cast<double>(n);
        const double h = horizon;
        const double factor = (dn + 1.0 - 2.0 * h + h * (h - 1.0) / dn) / dn;
        res.statistic *= std::sqrt(std::max(factor, 0.0));
        boost::math::students_t dist(dn - 1.0);
        res.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(res.statistic)));
    } else {
        res.p_value = normal_two_sided_p(res.statistic);
    }
    res.p_value = std::clamp(res.p_value, 0.0, 1.0);
    return res;
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::vector<int> block_bootstrap_indices(int n, int block_length, std::uint64_t seed, int replication) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(replication) + 1)));
    const int b = std::clamp(block_length, 1, n);
    std::uniform_int_distribution<int> start(0, n - b);
    std::vector<int> idx;
    idx.reserve(static_cast<std::size_t>(n));
    while (static_cast<int>(idx.size()) < n) {
        const int s = start(rng);
        for (int k = 0; k < b && static_cast<int>(idx.size()) < n; ++k) idx.push_back(s + k);
    }
    return idx;
}

bool MCSResult::contains(int model) const {
    return std::find(survivors.begin(), survivors.end(), model) != survivors.end();
}

MCSResult mcs(const Eigen::MatrixXd& losses, const MCSOptions& options) {
    const int n = static_cast<int>(losses.rows());
    const int M = static_cast<int>(losses.cols());
    if (M < 1) throw DataError("MCS: no models");
    if (!losses.allFinite()) throw DataError("MCS: non-finite losses");
    if (options.replications < 1) throw UsageError("MCS: replications must be >= 1");
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw UsageError("MCS: alpha must lie in (0,1)");

    MCSResult res;
    res.alpha = options.alpha;
    res.replications = options.replications;
    res.p_values.assign(static_cast<std::size_t>(M), 1.0);
    if (M == 1) {
        res.survivors = {0};
        return res;
    }
    const int block = options.block_length > 0 ? options.block_length
                                               : static_cast<int>(std::ceil(std::cbrt(static_cast<double>(n))));
    if (n <= block) throw DataError("MCS: need n > block length");
    res.block_length = block;

    const int B = options.replications;
    const Eigen::RowVectorXd mean = losses.colwise().mean();
    Eigen::MatrixXd boot(B, M);  // bootstrap means per model
    for (int b = 0; b < B; ++b) {
        const auto idx = block_bootstrap_indices(n, block, options.seed, b);
        Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(M);
        for (int t : idx) acc += losses.row(t);
        boot.row(b) = acc / static_cast<double>(n);
    }

    std::vector<int> alive(static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i) alive[static_cast<std::size_t>(i)] = i;
    double running = 0.0;
    const double inf = std::numeric_limits<double>::infinity();

    while (alive.size() > 1) {
        const std::size_t S = alive.size();
        Eigen::MatrixXd t_stat = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(S), static_cast<Eigen::Index>(S));
        Eigen::MatrixXd se = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(S), static_cast<Eigen::Index>(S));
        double T = 0.0;
        for (std::size_t a = 0; a < S; ++a) {
            for (std::size_t c = a + 1; c < S; ++c) {
                const int i = alive[a], j = alive[c];
                const double dbar = mean(i) - mean(j);
                const double var = ((boot.col(i) - boot.col(j)).array() - dbar).square().mean();
                const double s = std::sqrt(var);
                double t = 0.0;
                if (s > 0.0) t = dbar / s;
                else if (dbar != 0.0) t = dbar > 0 ? inf : -inf;
                const auto A = static_cast<Eigen::Index>(a), C = static_cast<Eigen::Index>(c);
                t_stat(A, C) = t;
                t_stat(C, A) = -t;
                se(A, C) = se(C, A) = s;
                T = std::max(T, std::abs(t));
            }
        }
        int exceed = 0;
        for (int b = 0; b < B; ++b) {
            double Tb = 0.0;
            for (std::size_t a = 0; a < S; ++a) {
                for (std::size_t c = a + 1; c < S; ++c) {
                    const double s = se(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c));
                    if (s == 0.0) continue;
                    const int i = alive[a], j = alive[c];
                    const double centered = (boot(b, i) - boot(b, j)) - (mean(i) - mean(j));
                    Tb = std::max(Tb, std::abs(centered) / s);
                }
            }
            if (Tb >= T) ++exceed;
        }
        const double p = static_cast<double>(exceed) / B;

        // Model with the largest standardized deficit against any other survivor.
        std::size_t worst = 0;
        double worst_val = -inf;
        int ties = 0;
        for (std::size_t a = 0; a < S; ++a) {
            const double v = t_stat.row(static_cast<Eigen::Index>(a)).maxCoeff();
            if (v > worst_val) {
                worst_val = v;
                worst = a;
                ties = 1;
            } else if (v == worst_val) {
                ++ties;
            }
        }
        if (ties > 1 && p < options.alpha) res.tie_in_elimination = true;

        running = std::max(running, p);
        const int removed = alive[worst];
        res.p_values[static_cast<std::size_t>(removed)] = running;
        res.elimination_order.push_back(removed);
        alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(worst));
    }
    res.p_values[static_cast<std::size_t>(alive.front())] = 1.0;

    for (int i = 0; i < M; ++i) {
        if (res.p_values[static_cast<std::size_t>(i)] >= options.alpha) res.survivors.push_back(i);
    }
    return res;
}

std::string dm_matrix_to_csv(const std::vector<std::string>& models, const Eigen::MatrixXd& losses,
                             int horizon, const DMOptions& options) {
    std::string out = "horizon,model1,model2,statistic,p_value\n";
    const auto M = losses.cols();
    for (Eigen::Index a = 0; a < M; ++a) {
        for (Eigen::Index b = 0; b < M; ++b) {
            if (a == b) continue;
            const Eigen::VectorXd la = losses.col(a), lb = losses.col(b);
            const DMResult r = dm_test(std::span<const double>(la.data(), static_cast<std::size_t>(la.size())),
                                       std::span<const double>(lb.data(), static_cast<std::size_t>(lb.size())),
                                       horizon, options);
            out += std::to_string(horizon) + "," + models[static_cast<std::size_t>(a)] + "," +
                   models[static_cast<std::size_t>(b)] + "," + format_double(r.statistic) + "," +
                   format_double(r.p_value) + "\n";
        }
    }
    return out;
}

std::string mcs_to_json(const MCSResult& result, const std::vector<std::string>& models) {
    nlohmann::ordered_json j;
    j["alpha"] = result.alpha;
    j["B"] = result.replications;
    j["block_length"] = result.block_length;
    j["statistic"] = result.statistic;
    nlohmann::ordered_json surv = nlohmann::ordered_json::array();
    for (int i : result.survivors) surv.push_back(models[static_cast<std::size_t>(i)]);
    j["survivors"] = surv;
    nlohmann::ordered_json pv;
    for (std::size_t i = 0; i < models.size(); ++i) pv[models[i]] = result.p_values[i];
    j["p_values"] = pv;
    j["tie_in_elimination"] = result.tie_in_elimination;
    return j.dump(2);
}

}  // namespace mfh
