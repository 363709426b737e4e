#include "mfh/design.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mfh/csv_io.hpp"
#include "mfh/error.hpp"

namespace mfh {

namespace {

constexpr int kDay = 1;
constexpr int kWeek = 5;
constexpr int kMonth = 20;

struct Layout {
    std::vector<int> lf_index;  // dataset column per design LF variable
    std::vector<std::string> lf_labels;
    int m = 0;
    int q = 0;
    int p = 0;
    int hf_need = 0;  // HF observations needed before the origin
};

Layout make_layout(const MFDataset& ds, const ModelSpec& spec) {
    spec.validate();
    Layout lay;
    lay.m = ds.m();
    lay.lf_labels = spec.lf_variables ? *spec.lf_variables : ds.labels();
    for (const auto& label : lay.lf_labels) lay.lf_index.push_back(ds.label_index(label));
    lay.q = lay.lf_index.empty() ? 0 : spec.q_lf;
    lay.p = spec.hf_lags(ds.m());
    if (spec.kind == ModelKind::Har || spec.kind == ModelKind::PooledDwm) lay.hf_need = kMonth;
    else lay.hf_need = lay.p;
    return lay;
}

std::string lf_label(const std::string& var, int lag, int pos) {
    std::string s = "lf[" + var + ",l" + std::to_string(lag);
    if (pos > 0) s += ",i" + std::to_string(pos);
    return s + "]";
}

std::string hf_label(int lag, int pos) {
    std::string s = "hf[j" + std::to_string(lag);
    if (pos > 0) s += ",i" + std::to_string(pos);
    return s + "]";
}

void add_lf_dummy_block(const Layout& lay, std::vector<Column>& cols) {
    for (std::size_t k = 0; k < lay.lf_index.size(); ++k) {
        for (int l = 1; l <= lay.q; ++l) {
            for (int i = 1; i <= lay.m; ++i) {
                cols.push_back({ColumnRole::Lf, static_cast<int>(k), l, i, lf_label(lay.lf_labels[k], l, i)});
            }
        }
    }
}

void add_dwm_block(std::vector<Column>& cols) {
    cols.push_back({ColumnRole::HfDay, -1, kDay, 0, "day"});
    cols.push_back({ColumnRole::HfWeek, -1, kWeek, 0, "week"});
    cols.push_back({ColumnRole::HfMonth, -1, kMonth, 0, "month"});
}

double lag_mean(const Eigen::VectorXd& x, int origin, int len) {
    return x.segment(origin - len, len).mean();
}

double column_value(const MFDataset& ds, const std::vector<int>& lf_index, const Column& c,
                    int origin) {
    const int m = ds.m();
    const int pos = origin % m + 1;
    const int period = origin / m;
    switch (c.role) {
        case ColumnRole::Intercept: return 1.0;
        case ColumnRole::Lf:
            if (c.position != 0 && c.position != pos) return 0.0;
            return ds.lf()(period - c.lag, lf_index[static_cast<std::size_t>(c.variable)]);
        case ColumnRole::Hf:
            if (c.position != 0 && c.position != pos) return 0.0;
            return ds.hf()(origin - c.lag);
        case ColumnRole::HfDay: return ds.hf()(origin - kDay);
        case ColumnRole::HfWeek: return lag_mean(ds.hf(), origin, kWeek);
        case ColumnRole::HfMonth: return lag_mean(ds.hf(), origin, kMonth);
    }
    return 0.0;
}

int resolve_last(const MFDataset& ds, SampleWindow w) {
    return w.last < 0 ? ds.hf_length() - 1 : std::min(w.last, ds.hf_length() - 1);
}

Design fill(const MFDataset& ds, const ModelSpec& spec, const Layout& lay, std::vector<Column> cols,
            SampleWindow window, int only_position) {
    const int first = std::max(window.first, 0);
    const int last = resolve_last(ds, window);
    const int h = spec.horizon;
    std::vector<int> origins;
    for (int s = first + lay.hf_need; s + h - 1 <= last; ++s) {
        if (s / lay.m - lay.q < 0) continue;
        if (only_position > 0 && s % lay.m + 1 != only_position) continue;
        origins.push_back(s);
    }
    if (origins.empty()) {
        throw DataError("insufficient history for " + to_string(spec.kind) + " at h=" +
                        std::to_string(h) + ": need at least " +
                        std::to_string(std::max(lay.hf_need, lay.q * lay.m) + h +
                                       (only_position > 0 ? lay.m : 0)) +
                        " HF observations in the sample");
    }

    Design d;
    d.spec = spec;
    d.m = lay.m;
    d.lf_labels = lay.lf_labels;
    d.columns = std::move(cols);
    const auto n = static_cast<Eigen::Index>(origins.size());
    const auto p = static_cast<Eigen::Index>(d.columns.size());
    d.X.resize(n, p);
    d.target.resize(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const int s = origins[static_cast<std::size_t>(r)];
        d.target(r) = ds.hf()(s + h - 1);
        for (Eigen::Index c = 0; c < p; ++c)
            d.X(r, c) = column_value(ds, lay.lf_index, d.columns[static_cast<std::size_t>(c)], s);
    }
    d.origins = std::move(origins);
    d.centering = CenteringRecord::identity(p);
    return d;
}

}  // namespace

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::RumidasEq: return "RUMIDAS_EQ";
        case ModelKind::RumidasDummy: return "RUMIDAS_DUMMY";
        case ModelKind::Pooled: return "POOLED";
        case ModelKind::Har: return "HAR";
        case ModelKind::PooledDwm: return "POOLED_DWM";
    }
    return "?";
}

ModelKind parse_model_kind(const std::string& text) {
    for (auto k : {ModelKind::RumidasEq, ModelKind::RumidasDummy, ModelKind::Pooled, ModelKind::Har,
                   ModelKind::PooledDwm}) {
        if (to_string(k) == text) return k;
    }
    throw UsageError("unknown model kind '" + text + "'");
}

void ModelSpec::validate() const {
    if (horizon < 1) throw UsageError("horizon must be >= 1");
    if (q_lf < 0) throw UsageError("q_lf must be >= 0");
    if (p_hf < 0) throw UsageError("p_hf must be >= 0");
}

CenteringRecord CenteringRecord::identity(Eigen::Index p) {
    CenteringRecord rec;
    rec.column_means = Eigen::VectorXd::Zero(p);
    rec.column_scales = Eigen::VectorXd::Ones(p);
    rec.constant.assign(static_cast<std::size_t>(p), false);
    return rec;
}

Eigen::MatrixXd CenteringRecord::transform(const Eigen::MatrixXd& raw_rows) const {
    Eigen::MatrixXd out = raw_rows.rowwise() - column_means.transpose();
    return out.array().rowwise() / column_scales.transpose().array();
}

Eigen::VectorXd CenteringRecord::coefficients_to_raw(const Eigen::VectorXd& fitted) const {
    return fitted.array() / column_scales.array();
}

std::vector<std::string> Design::column_labels() const {
    std::vector<std::string> out;
    out.reserve(columns.size());
    for (const auto& c : columns) out.push_back(c.label);
    return out;
}

bool Design::has_intercept() const {
    return std::any_of(columns.begin(), columns.end(),
                       [](const Column& c) { return c.role == ColumnRole::Intercept; });
}

int required_history(const ModelSpec& spec, int m) {
    const int lf = spec.q_lf * m;
    const int hf = (spec.kind == ModelKind::Har || spec.kind == ModelKind::PooledDwm) ? kMonth
                                                                                       : spec.hf_lags(m);
    return std::max(lf, hf);
}

Design build_rumidas_eq(const MFDataset& ds, const ModelSpec& spec, int position, SampleWindow window) {
    const Layout lay = make_layout(ds, spec);
    if (position < 1 || position > lay.m)
        throw UsageError("within-period position must lie in 1..m");
    std::vector<Column> cols;
    if (spec.include_intercept) cols.push_back({ColumnRole::Intercept, -1, 0, 0, "intercept"});
    for (std::size_t k = 0; k < lay.lf_index.size(); ++k) {
        for (int l = 1; l <= lay.q; ++l)
            cols.push_back({ColumnRole::Lf, static_cast<int>(k), l, position,
                            lf_label(lay.lf_labels[k], l, position)});
    }
    for (int j = 1; j <= lay.p; ++j) cols.push_back({ColumnRole::Hf, -1, j, position, hf_label(j, position)});
    return fill(ds, spec, lay, std::move(cols), window, position);
}

Design build_rumidas_dummy(const MFDataset& ds, const ModelSpec& spec, SampleWindow window) {
    const Layout lay = make_layout(ds, spec);
    std::vector<Column> cols;
    if (spec.include_intercept) cols.push_back({ColumnRole::Intercept, -1, 0, 0, "intercept"});
    add_lf_dummy_block(lay, cols);
    for (int j = 1; j <= lay.p; ++j) {
        for (int i = 1; i <= lay.m; ++i) cols.push_back({ColumnRole::Hf, -1, j, i, hf_label(j, i)});
    }
    return fill(ds, spec, lay, std::move(cols), window, 0);
}

Design build_pooled(const MFDataset& ds, const ModelSpec& spec, SampleWindow window) {
    const Layout lay = make_layout(ds, spec);
    std::vector<Column> cols;
    if (spec.include_intercept) cols.push_back({ColumnRole::Intercept, -1, 0, 0, "intercept"});
    add_lf_dummy_block(lay, cols);
    for (int j = 1; j <= lay.p; ++j) cols.push_back({ColumnRole::Hf, -1, j, 0, hf_label(j, 0)});
    return fill(ds, spec, lay, std::move(cols), window, 0);
}

Design build_har(const MFDataset& ds, const ModelSpec& spec, SampleWindow window) {
    ModelSpec har = spec;
    har.lf_variables = std::vector<std::string>{};
    Layout lay = make_layout(ds, har);
    lay.lf_index.clear();
    lay.lf_labels.clear();
    lay.q = 0;
    std::vector<Column> cols;
    if (spec.include_intercept) cols.push_back({ColumnRole::Intercept, -1, 0, 0, "intercept"});
    add_dwm_block(cols);
    return fill(ds, spec, lay, std::move(cols), window, 0);
}

Design build_pooled_dwm(const MFDataset& ds, const ModelSpec& spec, SampleWindow window) {
    const Layout lay = make_layout(ds, spec);
    std::vector<Column> cols;
    if (spec.include_intercept) cols.push_back({ColumnRole::Intercept, -1, 0, 0, "intercept"});
    add_lf_dummy_block(lay, cols);
    add_dwm_block(cols);
    return fill(ds, spec, lay, std::move(cols), window, 0);
}

Design build_design(const MFDataset& ds, const ModelSpec& spec, SampleWindow window, int position) {
    switch (spec.kind) {
        case ModelKind::RumidasEq: return build_rumidas_eq(ds, spec, position, window);
        case ModelKind::RumidasDummy: return build_rumidas_dummy(ds, spec, window);
        case ModelKind::Pooled: return build_pooled(ds, spec, window);
        case ModelKind::Har: return build_har(ds, spec, window);
        case ModelKind::PooledDwm: return build_pooled_dwm(ds, spec, window);
    }
    throw UsageError("unknown model kind");
}

Eigen::RowVectorXd regressor_row(const MFDataset& ds, const Design& design, int origin) {
    std::vector<int> lf_index;
    for (const auto& label : design.lf_labels) lf_index.push_back(ds.label_index(label));
    int hf_need = 0, lf_need = 0;
    for (const auto& c : design.columns) {
        switch (c.role) {
            case ColumnRole::Lf: lf_need = std::max(lf_need, c.lag); break;
            case ColumnRole::Hf: hf_need = std::max(hf_need, c.lag); break;
            case ColumnRole::HfDay:
            case ColumnRole::HfWeek:
            case ColumnRole::HfMonth: hf_need = std::max(hf_need, kMonth); break;
            case ColumnRole::Intercept: break;
        }
    }
    if (origin - hf_need < 0 || origin / ds.m() - lf_need < 0 || origin > ds.hf_length())
        throw DataError("origin " + std::to_string(origin) + " lacks the required history");
    Eigen::RowVectorXd row(static_cast<Eigen::Index>(design.columns.size()));
    for (std::size_t c = 0; c < design.columns.size(); ++c)
        row(static_cast<Eigen::Index>(c)) = column_value(ds, lf_index, design.columns[c], origin);
    return row;
}

Design center_scale(const Design& design, bool do_scale) {
    const Eigen::Index n = design.n();
    if (n < 2) throw DataError("centering needs at least 2 rows");
    Design out = design;
    const double tmean = design.target.mean();
    out.target = design.target.array() - tmean;
    out.centering.target_mean += tmean;

    for (Eigen::Index c = 0; c < design.p(); ++c) {
        const auto idx = static_cast<std::size_t>(c);
        if (design.columns[idx].role == ColumnRole::Intercept) continue;
        auto col = design.X.col(c);
        const double mean = col.mean();
        Eigen::VectorXd centered = col.array() - mean;
        const double sd = std::sqrt(centered.squaredNorm() / static_cast<double>(n - 1));
        const bool constant = !(sd > 1e-12 * std::max(1.0, std::abs(mean)));
        if (constant) centered.setZero();
        double scale = 1.0;
        if (do_scale && !constant) scale = sd;
        out.X.col(c) = centered / scale;

        // Compose with any earlier transform: raw -> (raw - m0)/s0 -> ((.) - mean)/scale.
        const double m0 = design.centering.column_means(c);
        const double s0 = design.centering.column_scales(c);
        out.centering.column_means(c) = m0 + s0 * mean;
        out.centering.column_scales(c) = s0 * scale;
        out.centering.constant[idx] = design.centering.constant[idx] || constant;
    }
    return out;
}

std::string design_to_csv(const Design& design) {
    std::ostringstream os;
    os << "target";
    for (const auto& c : design.columns) os << ',' << c.label;
    os << '\n';
    for (Eigen::Index r = 0; r < design.n(); ++r) {
        os << format_double(design.target(r));
        for (Eigen::Index c = 0; c < design.p(); ++c) os << ',' << format_double(design.X(r, c));
        os << '\n';
    }
    return os.str();
}

Eigen::MatrixXd pooling_matrix(const Design& dummy, const Design& pooled) {
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(dummy.p(), pooled.p());
    for (std::size_t a = 0; a < dummy.columns.size(); ++a) {
        const auto& dc = dummy.columns[a];
        for (std::size_t b = 0; b < pooled.columns.size(); ++b) {
            const auto& pc = pooled.columns[b];
            if (dc.role != pc.role) continue;
            bool match = false;
            if (dc.role == ColumnRole::Lf)
                match = dc.variable == pc.variable && dc.lag == pc.lag && dc.position == pc.position;
            else if (dc.role == ColumnRole::Hf)
                match = dc.lag == pc.lag && pc.position == 0;
            else
                match = true;
            if (match) R(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = 1.0;
        }
    }
    return R;
}

}  // namespace mfh
