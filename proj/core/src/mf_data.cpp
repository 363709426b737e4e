#include "mfh/mf_data.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <unordered_map>

#include "mfh/error.hpp"

namespace mfh {

void RawSeries::validate() const {
    if (timestamps.size() != values.size())
        throw DataError("series '" + label + "': timestamp/value length mismatch");
    if (values.size() < 2) throw DataError("series '" + label + "': fewer than 2 observations");
    for (std::size_t k = 1; k < timestamps.size(); ++k) {
        if (!(timestamps[k - 1] < timestamps[k]))
            throw DataError("series '" + label + "': timestamps not strictly increasing at " +
                            timestamps[k].iso());
    }
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!is_missing(values[k]) && !std::isfinite(values[k]))
            throw DataError("series '" + label + "': non-finite value at index " + std::to_string(k));
    }
}

TCode::TCode(int code) : code_(code) {
    if (code < 1 || code > 6) throw DataError("unknown T-code " + std::to_string(code));
}

int TCode::lost_observations() const {
    switch (code_) {
        case 2:
        case 5: return 1;
        case 3:
        case 6: return 2;
        default: return 0;
    }
}

RawSeries apply_tcode(const RawSeries& series, TCode code) {
    series.validate();
    const std::size_t n = series.size();
    std::vector<double> base(series.values);
    if (code.uses_log()) {
        for (std::size_t k = 0; k < n; ++k) {
            if (is_missing(base[k])) continue;
            if (base[k] <= 0.0)
                throw DataError("series '" + series.label + "': non-positive value at index " +
                                std::to_string(k) + " under log T-code " +
                                std::to_string(code.value()));
            base[k] = std::log(base[k]);
        }
    }
    auto diff = [](const std::vector<double>& v) {
        std::vector<double> d(v.size(), kMissing);
        for (std::size_t k = 1; k < v.size(); ++k) {
            if (!is_missing(v[k]) && !is_missing(v[k - 1])) d[k] = v[k] - v[k - 1];
        }
        return d;
    };
    int differences = 0;
    switch (code.value()) {
        case 2:
        case 5: differences = 1; break;
        case 3:
        case 6: differences = 2; break;
        default: break;
    }
    for (int d = 0; d < differences; ++d) base = diff(base);

    RawSeries out;
    out.timestamps = series.timestamps;
    out.values = std::move(base);
    out.label = series.label;
    return out;
}

// ---------------------------------------------------------------------------

MFDataset::MFDataset(Eigen::VectorXd hf, Eigen::MatrixXd lf, int m, std::vector<std::string> labels,
                     std::vector<std::string> period_labels)
    : hf_(std::move(hf)),
      lf_(std::move(lf)),
      m_(m),
      labels_(std::move(labels)),
      period_labels_(std::move(period_labels)) {
    if (m_ < 1) throw DataError("frequency mismatch m must be positive");
    if (hf_.size() != lf_.rows() * m_)
        throw DataError("hf length " + std::to_string(hf_.size()) + " != T*m = " +
                        std::to_string(lf_.rows() * m_));
    if (static_cast<Eigen::Index>(labels_.size()) != lf_.cols())
        throw DataError("label count does not match LF column count");
    if (!period_labels_.empty() && static_cast<Eigen::Index>(period_labels_.size()) != lf_.rows())
        throw DataError("period label count does not match T");
    if (!hf_.allFinite() || !lf_.allFinite()) throw DataError("dataset contains missing values");
    std::set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size()) throw DataError("duplicate LF labels");
}

int MFDataset::label_index(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw DataError("unknown LF variable '" + label + "'");
    return static_cast<int>(it - labels_.begin());
}

MFDataset MFDataset::select_lf(const std::vector<std::string>& labels) const {
    Eigen::MatrixXd lf(lf_.rows(), static_cast<Eigen::Index>(labels.size()));
    for (std::size_t k = 0; k < labels.size(); ++k) lf.col(static_cast<Eigen::Index>(k)) = lf_.col(label_index(labels[k]));
    return MFDataset(hf_, std::move(lf), m_, labels, period_labels_);
}

// ---------------------------------------------------------------------------

std::vector<std::string> month_calendar(const RawSeries& series) {
    std::vector<std::string> keys;
    keys.reserve(series.timestamps.size());
    for (const auto& d : series.timestamps) keys.push_back(d.month_key());
    return keys;
}

AlignedPanel align_fixed_m(const RawSeries& hf, int m, std::span<const std::string> period_of,
                           int sanity_bound) {
    hf.validate();
    if (m < 1) throw DataError("m must be positive");
    if (period_of.size() != hf.size())
        throw DataError("calendar length does not match the HF series length");

    // Group observations into contiguous periods, skipping missing values.
    struct Group {
        std::string key;
        std::vector<double> values;
    };
    std::vector<Group> groups;
    std::set<std::string> closed;
    for (std::size_t k = 0; k < hf.size(); ++k) {
        const std::string& key = period_of[k];
        if (groups.empty() || groups.back().key != key) {
            if (closed.count(key))
                throw DataError("period '" + key + "' is not contiguous in the HF series");
            if (!groups.empty()) closed.insert(groups.back().key);
            groups.push_back({key, {}});
        }
        if (!is_missing(hf.values[k])) groups.back().values.push_back(hf.values[k]);
    }

    AlignedPanel panel;
    panel.m = m;
    panel.original_length = 0;
    std::vector<double> out;
    out.reserve(groups.size() * static_cast<std::size_t>(m));

    for (std::size_t g = 0; g < groups.size(); ++g) {
        auto& grp = groups[g];
        const int count = static_cast<int>(grp.values.size());
        panel.original_length += count;
        if (count < m - sanity_bound || count > m + sanity_bound || count == 0)
            throw DataError("period '" + grp.key + "' has " + std::to_string(count) +
                            " observations, outside [" + std::to_string(m - sanity_bound) + ", " +
                            std::to_string(m + sanity_bound) + "]");
        panel.periods.push_back(grp.key);
        if (count > m) {
            const int excess = count - m;
            for (int r = 0; r < excess; ++r)
                panel.log.push_back({grp.key, AlignAction::Delete, r + 1, grp.values[r]});
            out.insert(out.end(), grp.values.begin() + excess, grp.values.end());
        } else if (count < m) {
            const int shortfall = m - count;
            const double first = grp.values.front();
            if (g == 0) {
                for (int r = 0; r < shortfall; ++r) {
                    out.push_back(first);
                    panel.log.push_back({grp.key, AlignAction::Pad, r + 1, first});
                }
            } else {
                const double prev = out.back();
                for (int r = 1; r <= shortfall; ++r) {
                    const double v = prev + (first - prev) * r / (shortfall + 1);
                    out.push_back(v);
                    panel.log.push_back({grp.key, AlignAction::Insert, r, v});
                }
            }
            out.insert(out.end(), grp.values.begin(), grp.values.end());
        } else {
            out.insert(out.end(), grp.values.begin(), grp.values.end());
        }
    }
    panel.values = Eigen::Map<const Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
    return panel;
}

MFDataset assemble(const AlignedPanel& hf, std::span<const RawSeries> lf, int m,
                   const PeriodKeyFn& period_key) {
    if (hf.m != m) throw DataError("aligned panel m does not match requested m");
    if (hf.values.size() != static_cast<Eigen::Index>(hf.periods.size()) * m)
        throw DataError("aligned panel is not a complete T x m block");

    std::vector<std::unordered_map<std::string, double>> lf_maps(lf.size());
    for (std::size_t k = 0; k < lf.size(); ++k) {
        const auto& s = lf[k];
        if (s.timestamps.size() != s.values.size())
            throw DataError("series '" + s.label + "': timestamp/value length mismatch");
        for (std::size_t t = 0; t < s.size(); ++t) {
            if (is_missing(s.values[t])) continue;
            lf_maps[k][period_key(s.timestamps[t])] = s.values[t];
        }
    }

    // Periods (in HF order) where every LF series is observed.
    std::vector<int> keep;
    for (std::size_t p = 0; p < hf.periods.size(); ++p) {
        bool all = true;
        for (const auto& mp : lf_maps) {
            if (!mp.count(hf.periods[p])) {
                all = false;
                break;
            }
        }
        if (all) keep.push_back(static_cast<int>(p));
    }
    if (keep.empty()) throw DataError("empty intersection between HF and LF periods");
    for (std::size_t r = 1; r < keep.size(); ++r) {
        if (keep[r] != keep[r - 1] + 1)
            throw DataError("gap in LF coverage at period '" + hf.periods[keep[r - 1] + 1] + "'");
    }

    const int T = static_cast<int>(keep.size());
    Eigen::VectorXd x(static_cast<Eigen::Index>(T) * m);
    Eigen::MatrixXd y(T, static_cast<Eigen::Index>(lf.size()));
    std::vector<std::string> labels, period_labels;
    for (const auto& s : lf) labels.push_back(s.label);
    for (int t = 0; t < T; ++t) {
        const int p = keep[t];
        x.segment(static_cast<Eigen::Index>(t) * m, m) = hf.values.segment(static_cast<Eigen::Index>(p) * m, m);
        for (std::size_t k = 0; k < lf.size(); ++k) y(t, static_cast<Eigen::Index>(k)) = lf_maps[k].at(hf.periods[p]);
        period_labels.push_back(hf.periods[p]);
    }
    return MFDataset(std::move(x), std::move(y), m, std::move(labels), std::move(period_labels));
}

// ---------------------------------------------------------------------------

SimulationResult simulate_pooled_rumidas(const SimulationConfig& cfg) {
    if (cfg.m < 1 || cfg.T < 2) throw DataError("simulation needs m >= 1 and T >= 2");
    const int K = static_cast<int>(cfg.alpha.rows());
    if (K > 0 && cfg.alpha.cols() != cfg.m) throw DataError("alpha must be K x m");
    if (cfg.beta.cwiseAbs().sum() >= 1.0)
        throw NumericalError("unstable HF dynamics: sum |beta_j| must be < 1");
    if (cfg.noise_scale < 0.0 || cfg.lf_scale < 0.0) throw DataError("negative scale");
    if (std::abs(cfg.lf_ar) >= 1.0) throw NumericalError("unstable LF AR(1) coefficient");

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    const int burn = std::max(cfg.burn_in_periods, 1);
    const int total_periods = cfg.T + burn;
    const int m = cfg.m;
    const int p = static_cast<int>(cfg.beta.size());

    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(total_periods, K);
    for (int t = 0; t < total_periods; ++t) {
        for (int k = 0; k < K; ++k) {
            const double prev = t > 0 ? y(t - 1, k) : 0.0;
            y(t, k) = cfg.lf_ar * prev + cfg.lf_scale * normal(rng);
        }
    }

    const Eigen::Index n = static_cast<Eigen::Index>(total_periods) * m;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    for (Eigen::Index s = 0; s < n; ++s) {
        const int period = static_cast<int>(s / m);
        const int pos = static_cast<int>(s % m);
        double v = 0.0;
        if (period > 0) {
            for (int k = 0; k < K; ++k) v += cfg.alpha(k, pos) * y(period - 1, k);
        }
        for (int j = 1; j <= p; ++j) {
            if (s - j >= 0) v += cfg.beta(j - 1) * x(s - j);
        }
        e(s) = cfg.noise_scale * normal(rng);
        x(s) = v + e(s);
    }

    std::vector<std::string> labels = cfg.labels;
    if (labels.empty()) {
        for (int k = 0; k < K; ++k) labels.push_back("y" + std::to_string(k + 1));
    }
    if (static_cast<int>(labels.size()) != K) throw DataError("label count does not match K");

    std::vector<std::string> period_labels;
    int year = cfg.start.year, month = cfg.start.month;
    for (int t = 0; t < cfg.T; ++t) {
        period_labels.push_back(Date{year, month, 1}.month_key());
        if (++month > 12) {
            month = 1;
            ++year;
        }
    }

    const Eigen::Index offset = static_cast<Eigen::Index>(burn) * m;
    SimulationResult res{
        MFDataset(x.tail(n - offset), y.bottomRows(cfg.T), m, labels, period_labels),
        cfg.alpha, cfg.beta, e.tail(n - offset)};
    return res;
}

}  // namespace mfh
