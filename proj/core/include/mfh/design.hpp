#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "mfh/mf_data.hpp"

namespace mfh {

enum class ModelKind { RumidasEq, RumidasDummy, Pooled, Har, PooledDwm };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& text);

struct ModelSpec {
    ModelKind kind = ModelKind::Pooled;
    int q_lf = 1;                          // LF lags per variable
    int p_hf = 0;                          // HF lags; 0 means "use m"
    int horizon = 1;                       // direct-forecast horizon in HF steps
    bool include_intercept = false;
    std::optional<std::vector<std::string>> lf_variables;  // unset means every dataset variable

    int hf_lags(int m) const { return p_hf > 0 ? p_hf : m; }
    void validate() const;
};

enum class ColumnRole { Lf, Hf, HfDay, HfWeek, HfMonth, Intercept };

struct Column {
    ColumnRole role;
    int variable = -1;  // index into the design's LF variable list
    int lag = 0;        // LF lag (1..q) or HF lag j (1..p)
    int position = 0;   // within-period position i (1..m); 0 when shared across positions
    std::string label;
};

struct CenteringRecord {
    double target_mean = 0.0;
    Eigen::VectorXd column_means;
    Eigen::VectorXd column_scales;
    std::vector<bool> constant;  // zero-variance columns: centered, not scaled

    static CenteringRecord identity(Eigen::Index p);
    /// Applies the column transform to raw regressor rows.
    Eigen::MatrixXd transform(const Eigen::MatrixXd& raw_rows) const;
    /// Maps coefficients fitted on the transformed scale back to raw regressors.
    Eigen::VectorXd coefficients_to_raw(const Eigen::VectorXd& fitted) const;
};

/// Half-open range of HF indices [first, last] whose observations a design may use.
struct SampleWindow {
    int first = 0;
    int last = -1;  // inclusive; -1 means end of data
};

struct Design {
    Eigen::VectorXd target;
    Eigen::MatrixXd X;
    std::vector<Column> columns;
    CenteringRecord centering;
    std::vector<int> origins;  // HF index of the regressor row (information set ends at origin-1)
    std::vector<std::string> lf_labels;
    ModelSpec spec;
    int m = 0;

    Eigen::Index n() const { return X.rows(); }
    Eigen::Index p() const { return X.cols(); }
    std::vector<std::string> column_labels() const;
    bool has_intercept() const;
};

// All builders produce one row per valid origin s inside the window: regressors
// are observed strictly before s, the target is x[s + h - 1]. For HF index s
// in period tau (0-based), LF lag l refers to period tau - l.

Design build_rumidas_eq(const MFDataset& ds, const ModelSpec& spec, int position,
                        SampleWindow window = {});
Design build_rumidas_dummy(const MFDataset& ds, const ModelSpec& spec, SampleWindow window = {});
Design build_pooled(const MFDataset& ds, const ModelSpec& spec, SampleWindow window = {});
Design build_har(const MFDataset& ds, const ModelSpec& spec, SampleWindow window = {});
Design build_pooled_dwm(const MFDataset& ds, const ModelSpec& spec, SampleWindow window = {});

/// Dispatches on spec.kind. RumidasEq needs a position.
Design build_design(const MFDataset& ds, const ModelSpec& spec, SampleWindow window = {},
                    int position = 0);

/// Raw regressor row for origin s, laid out like `design.columns`. Reads only
/// observations before s (LF values from completed periods).
Eigen::RowVectorXd regressor_row(const MFDataset& ds, const Design& design, int origin);

/// Minimum number of HF observations preceding an origin that the model needs.
int required_history(const ModelSpec& spec, int m);

/// De-means the target and every non-intercept column; divides by the sample
/// standard deviation when do_scale. The record is stored in the returned design.
Design center_scale(const Design& design, bool do_scale);

/// Header row from the column labels, then `target,<columns>` at full precision.
std::string design_to_csv(const Design& design);

/// Matrix that maps pooled HF coefficients onto the dummy layout: dummy X * R == pooled X.
Eigen::MatrixXd pooling_matrix(const Design& dummy, const Design& pooled);

}  // namespace mfh
