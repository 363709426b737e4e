#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mfh/design.hpp"
#include "mfh/hier_solver.hpp"
#include "mfh/mf_data.hpp"

namespace mfh {

struct ModelEntry {
    std::string id;
    ModelSpec spec;  // horizon is overwritten per task
    Estimator estimator = Estimator::Hier;
};

struct BacktestSpec {
    int window_length = 1200;
    std::vector<int> horizons{1, 5, 20, 40, 60, 120};
    int step = 1;
    int refit_every = 1;
    std::vector<ModelEntry> models;
    HierOptions hier;
    int threads = 1;  // 0 = hardware concurrency

    void validate(const MFDataset& ds) const;
};

struct ForecastEntry {
    std::string model;
    int horizon = 0;
    int origin = 0;  // HF index of the last in-window observation
    double forecast = 0.0;
    double realized = 0.0;
    double error = 0.0;  // realized - forecast
    double abs_loss = 0.0;
    double sq_loss = 0.0;
    bool ok = false;
    bool in_common_sample = false;
    int n_active = 0;
    bool lf_selected = false;
    std::string message;
};

enum class LossKind { Mafe, Rmsfe };
LossKind parse_loss(const std::string& text);
std::string to_string(LossKind kind);

class ForecastTable {
public:
    std::vector<ForecastEntry> entries;  // ordered by (model, horizon, origin)
    std::vector<std::string> models;
    std::vector<int> horizons;
    std::vector<std::string> log;

    /// Origins at which every model produced a forecast for horizon h.
    std::vector<int> common_origins(int horizon) const;
    /// n x M matrix of absolute or squared losses over the common sample, columns in `models` order.
    Eigen::MatrixXd loss_matrix(int horizon, LossKind kind) const;
    /// Marks `in_common_sample` from the ok flags.
    void finalize_common_sample();
};

/// Rolling-window direct forecasts. Window k covers HF indices
/// [k*step, k*step + W - 1]; the forecast for x[origin + h] uses the regressor
/// row at origin + 1, built from in-window data only.
ForecastTable rolling_backtest(const MFDataset& ds, const BacktestSpec& spec);

struct LossSummary {
    LossKind kind = LossKind::Mafe;
    std::vector<std::string> models;
    std::vector<int> horizons;
    Eigen::MatrixXd values;  // models x horizons
};

LossSummary loss_summary(const ForecastTable& table, LossKind kind);

/// Percentage of common-sample windows whose fit kept at least one LF column.
LossSummary selection_frequency(const ForecastTable& table);

/// Long CSV `model,horizon,origin,forecast,realized,error` over the common sample.
std::string forecasts_to_csv(const ForecastTable& table);
ForecastTable forecasts_from_csv(const std::string& text);
/// `model,horizon,origin,n_active,lf_selected` over the common sample.
std::string selection_log_to_csv(const ForecastTable& table);
void merge_selection_log(ForecastTable& table, const std::string& text);

/// {"loss": ..., "horizons": [...], "models": [...], "values": {model: {h: v}}}
std::string summary_to_json(const LossSummary& summary);

}  // namespace mfh
