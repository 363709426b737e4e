#include "mfh/forecaster.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "mfh/csv_io.hpp"
#include "mfh/error.hpp"

namespace mfh {

LossKind parse_loss(const std::string& text) {
    if (text == "MAFE" || text == "mafe") return LossKind::Mafe;
    if (text == "RMSFE" || text == "rmsfe") return LossKind::Rmsfe;
    throw UsageError("unknown loss '" + text + "'");
}

std::string to_string(LossKind kind) { return kind == LossKind::Mafe ? "MAFE" : "RMSFE"; }

void BacktestSpec::validate(const MFDataset& ds) const {
    if (window_length < 2) throw UsageError("window length must be >= 2");
    if (step < 1 || refit_every < 1) throw UsageError("step and refit_every must be >= 1");
    if (horizons.empty()) throw UsageError("no horizons configured");
    for (int h : horizons) {
        if (h < 1) throw UsageError("horizons must be positive");
    }
    if (models.empty()) throw UsageError("no models configured");
    std::set<std::string> ids;
    for (const auto& m : models) {
        if (!ids.insert(m.id).second) throw UsageError("duplicate model id '" + m.id + "'");
    }
    if (window_length % ds.m() != 0)
        throw UsageError("window length " + std::to_string(window_length) + " is not a multiple of m=" +
                         std::to_string(ds.m()));
    const int hmax = *std::max_element(horizons.begin(), horizons.end());
    if (window_length + hmax > ds.hf_length())
        throw UsageError("window length + max horizon exceeds the data length");
}

// ---------------------------------------------------------------------------

std::vector<int> ForecastTable::common_origins(int horizon) const {
    std::map<int, std::size_t> ok_count;
    for (const auto& e : entries) {
        if (e.horizon == horizon && e.ok) ++ok_count[e.origin];
    }
    std::vector<int> out;
    for (const auto& [origin, count] : ok_count) {
        if (count == models.size()) out.push_back(origin);
    }
    return out;
}

void ForecastTable::finalize_common_sample() {
    std::map<int, std::set<int>> common;
    for (int h : horizons) {
        auto o = common_origins(h);
        common[h] = std::set<int>(o.begin(), o.end());
    }
    for (auto& e : entries) e.in_common_sample = e.ok && common[e.horizon].count(e.origin) > 0;
}

Eigen::MatrixXd ForecastTable::loss_matrix(int horizon, LossKind kind) const {
    const auto origins = common_origins(horizon);
    std::map<int, Eigen::Index> row_of;
    for (std::size_t r = 0; r < origins.size(); ++r) row_of[origins[r]] = static_cast<Eigen::Index>(r);
    std::map<std::string, Eigen::Index> col_of;
    for (std::size_t c = 0; c < models.size(); ++c) col_of[models[c]] = static_cast<Eigen::Index>(c);
    Eigen::MatrixXd L = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(origins.size()),
                                                  static_cast<Eigen::Index>(models.size()), kMissing);
    for (const auto& e : entries) {
        if (e.horizon != horizon || !e.ok) continue;
        auto r = row_of.find(e.origin);
        if (r == row_of.end()) continue;
        L(r->second, col_of.at(e.model)) = kind == LossKind::Mafe ? e.abs_loss : e.sq_loss;
    }
    return L;
}

// ---------------------------------------------------------------------------

namespace {

struct Task {
    std::size_t model;
    int horizon;
};

bool any_lf_active(const Design& d, const std::vector<int>& active) {
    return std::any_of(active.begin(), active.end(), [&](int idx) {
        return d.columns[static_cast<std::size_t>(idx)].role == ColumnRole::Lf;
    });
}

FitResult estimate(const Design& d, Estimator est, const HierOptions& hier) {
    switch (est) {
        case Estimator::Hier: return fit_hier(d, hier);
        case Estimator::Ols: return fit_ols_centered(d);
        case Estimator::HarOls: return fit_ols_raw(d);
    }
    throw UsageError("unknown estimator");
}

std::vector<ForecastEntry> run_task(const MFDataset& ds, const BacktestSpec& spec, const Task& task,
                                    std::vector<std::string>& log) {
    const ModelEntry& entry = spec.models[task.model];
    ModelSpec ms = entry.spec;
    ms.horizon = task.horizon;
    if (entry.estimator == Estimator::HarOls) ms.include_intercept = true;

    const int N = ds.hf_length();
    const int W = spec.window_length;
    const int h = task.horizon;
    const int windows = (N - W - h) / spec.step + 1;

    std::vector<ForecastEntry> out;
    out.reserve(static_cast<std::size_t>(std::max(windows, 0)));
    std::optional<Design> cached_design;
    std::optional<FitResult> cached_fit;

    for (int k = 0; k < windows; ++k) {
        const int first = k * spec.step;
        const int last = first + W - 1;
        const int origin_row = last + 1;
        ForecastEntry fe;
        fe.model = entry.id;
        fe.horizon = h;
        fe.origin = last;
        fe.realized = ds.hf()(last + h);
        try {
            const int position = origin_row % ds.m() + 1;
            const bool refit = !cached_fit || k % spec.refit_every == 0 || ms.kind == ModelKind::RumidasEq;
            if (refit) {
                cached_design = build_design(ds, ms, SampleWindow{first, last}, position);
                cached_fit = estimate(*cached_design, entry.estimator, spec.hier);
            }
            const Eigen::RowVectorXd row = regressor_row(ds, *cached_design, origin_row);
            fe.forecast = cached_fit->predict(row);
            if (!std::isfinite(fe.forecast)) throw NumericalError("non-finite forecast");
            fe.error = fe.realized - fe.forecast;
            fe.abs_loss = std::abs(fe.error);
            fe.sq_loss = fe.error * fe.error;
            fe.n_active = static_cast<int>(cached_fit->active_set.size());
            fe.lf_selected = any_lf_active(*cached_design, cached_fit->active_set);
            fe.ok = true;
        } catch (const std::exception& ex) {
            fe.ok = false;
            fe.message = ex.what();
            log.push_back(entry.id + " h=" + std::to_string(h) + " origin=" + std::to_string(last) +
                          ": " + ex.what());
        }
        out.push_back(std::move(fe));
    }
    return out;
}

}  // namespace

ForecastTable rolling_backtest(const MFDataset& ds, const BacktestSpec& spec) {
    spec.validate(ds);
    std::vector<Task> tasks;
    for (std::size_t m = 0; m < spec.models.size(); ++m) {
        for (int h : spec.horizons) tasks.push_back({m, h});
    }

    std::vector<std::vector<ForecastEntry>> results(tasks.size());
    std::vector<std::vector<std::string>> logs(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < tasks.size(); t = next++)
            results[t] = run_task(ds, spec, tasks[t], logs[t]);
    };
    unsigned threads = spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(tasks.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    }

    ForecastTable table;
    for (const auto& m : spec.models) table.models.push_back(m.id);
    table.horizons = spec.horizons;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        for (auto& e : results[t]) table.entries.push_back(std::move(e));
        for (auto& l : logs[t]) table.log.push_back(std::move(l));
    }
    table.finalize_common_sample();
    return table;
}

// ---------------------------------------------------------------------------

LossSummary loss_summary(const ForecastTable& table, LossKind kind) {
    LossSummary s;
    s.kind = kind;
    s.models = table.models;
    s.horizons = table.horizons;
    s.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s.models.size()),
                                     static_cast<Eigen::Index>(s.horizons.size()));
    for (std::size_t c = 0; c < s.horizons.size(); ++c) {
        const Eigen::MatrixXd L = table.loss_matrix(s.horizons[c], kind);
        if (L.rows() == 0)
            throw DataError("empty common sample at h=" + std::to_string(s.horizons[c]));
        for (Eigen::Index r = 0; r < L.cols(); ++r) {
            const double mean = L.col(r).mean();
            s.values(r, static_cast<Eigen::Index>(c)) = kind == LossKind::Mafe ? mean : std::sqrt(mean);
        }
    }
    return s;
}

LossSummary selection_frequency(const ForecastTable& table) {
    LossSummary s;
    s.models = table.models;
    s.horizons = table.horizons;
    s.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s.models.size()),
                                     static_cast<Eigen::Index>(s.horizons.size()));
    std::map<std::pair<std::string, int>, std::pair<int, int>> counts;  // (selected, total)
    for (const auto& e : table.entries) {
        if (!e.in_common_sample) continue;
        auto& c = counts[{e.model, e.horizon}];
        c.first += e.lf_selected ? 1 : 0;
        c.second += 1;
    }
    for (std::size_t r = 0; r < s.models.size(); ++r) {
        for (std::size_t c = 0; c < s.horizons.size(); ++c) {
            auto it = counts.find({s.models[r], s.horizons[c]});
            if (it == counts.end() || it->second.second == 0) continue;
            s.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                100.0 * it->second.first / it->second.second;
        }
    }
    return s;
}

std::string forecasts_to_csv(const ForecastTable& table) {
    std::string out = "model,horizon,origin,forecast,realized,error\n";
    for (const auto& e : table.entries) {
        if (!e.in_common_sample) continue;
        out += e.model + "," + std::to_string(e.horizon) + "," + std::to_string(e.origin) + "," +
               format_double(e.forecast) + "," + format_double(e.realized) + "," +
               format_double(e.error) + "\n";
    }
    return out;
}

ForecastTable forecasts_from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line.rfind("model,horizon,origin,forecast,realized,error", 0) != 0)
        throw DataError("forecast table: unexpected header");
    ForecastTable table;
    std::set<int> horizons;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 6) throw DataError("forecast table: malformed row '" + line + "'");
        ForecastEntry e;
        e.model = cells[0];
        e.horizon = std::stoi(cells[1]);
        e.origin = std::stoi(cells[2]);
        e.forecast = std::stod(cells[3]);
        e.realized = std::stod(cells[4]);
        e.error = std::stod(cells[5]);
        e.abs_loss = std::abs(e.error);
        e.sq_loss = e.error * e.error;
        e.ok = true;
        if (std::find(table.models.begin(), table.models.end(), e.model) == table.models.end())
            table.models.push_back(e.model);
        horizons.insert(e.horizon);
        table.entries.push_back(std::move(e));
    }
    table.horizons.assign(horizons.begin(), horizons.end());
    table.finalize_common_sample();
    return table;
}

std::string selection_log_to_csv(const ForecastTable& table) {
    std::string out = "model,horizon,origin,n_active,lf_selected\n";
    for (const auto& e : table.entries) {
        if (!e.in_common_sample) continue;
        out += e.model + "," + std::to_string(e.horizon) + "," + std::to_string(e.origin) + "," +
               std::to_string(e.n_active) + "," + (e.lf_selected ? "1" : "0") + "\n";
    }
    return out;
}

void merge_selection_log(ForecastTable& table, const std::string& text) {
    std::map<std::tuple<std::string, int, int>, std::pair<int, bool>> rows;
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto c = split_csv_line(line);
        if (c.size() != 5) throw DataError("selection log: malformed row '" + line + "'");
        rows[{c[0], std::stoi(c[1]), std::stoi(c[2])}] = {std::stoi(c[3]), c[4] == "1"};
    }
    for (auto& e : table.entries) {
        auto it = rows.find({e.model, e.horizon, e.origin});
        if (it == rows.end()) continue;
        e.n_active = it->second.first;
        e.lf_selected = it->second.second;
    }
}

std::string summary_to_json(const LossSummary& summary) {
    nlohmann::ordered_json j;
    j["loss"] = to_string(summary.kind);
    j["horizons"] = summary.horizons;
    j["models"] = summary.models;
    nlohmann::ordered_json values;
    for (std::size_t r = 0; r < summary.models.size(); ++r) {
        nlohmann::ordered_json row;
        for (std::size_t c = 0; c < summary.horizons.size(); ++c)
            row[std::to_string(summary.horizons[c])] =
                summary.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        values[summary.models[r]] = row;
    }
    j["values"] = values;
    return j.dump(2) + "\n";
}

}  // namespace mfh
