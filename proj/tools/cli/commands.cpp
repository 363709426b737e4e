#include "commands.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>

#include "mfh/csv_io.hpp"
#include "mfh/error.hpp"
#include "mfh/eval_stats.hpp"
#include "mfh/forecaster.hpp"
#include "mfh/mf_data.hpp"

#ifndef MFH_VERSION
#define MFH_VERSION "0.0.0"
#endif

namespace mfh::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

RunConfig resolve_config(const Overrides& o) {
    RunConfig c = o.config ? RunConfig::from_file(*o.config) : RunConfig::defaults();
    if (o.seed) c.seed = *o.seed;
    if (o.window) c.window = *o.window;
    if (o.horizons) c.horizons = *o.horizons;
    if (o.m) c.m = *o.m;
    if (o.out) c.out_dir = *o.out;
    if (o.step) c.step = *o.step;
    if (o.threads) c.threads = *o.threads;
    if (o.alpha) c.alpha = *o.alpha;
    if (o.replications) c.replications = *o.replications;

    if (c.m < 2) throw UsageError("m must be >= 2");
    if (c.horizons.empty()) throw UsageError("at least one horizon is required");
    for (int h : c.horizons)
        if (h < 1) throw UsageError("horizons must be positive");
    if (c.window < 1 || c.step < 1 || c.refit_every < 1) throw UsageError("window, step and refit_every must be >= 1");
    c.hier.solver.validate();
    return c;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int k = 0; k < len; ++k) {
        out += hex[digest[k] >> 4];
        out += hex[digest[k] & 15];
    }
    return out;
}

namespace {

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

OutputDir::OutputDir(fs::path dir, std::string command, const RunConfig& config)
    : dir_(std::move(dir)), command_(std::move(command)), config_hash_(sha256_hex(config.canonical())) {
    fs::create_directories(dir_);
}

void OutputDir::add_input(const fs::path& file) {
    inputs_.emplace_back(file.string(), sha256_hex(read_text_file(file)));
}

void OutputDir::write(const std::string& name, const std::string& content) {
    write_file_atomic(dir_ / name, content);
    outputs_.emplace_back(name, sha256_hex(content));
}

void OutputDir::add_failure(std::string message) { failures_.push_back(std::move(message)); }

void OutputDir::finish(std::optional<std::uint64_t> seed) {
    json j;
    j["command"] = command_;
    j["version"] = MFH_VERSION;
    j["created_at"] = utc_now();
    j["config_hash"] = config_hash_;
    j["seed"] = seed ? json(*seed) : json(nullptr);
    auto files = [](const auto& list) {
        json arr = json::array();
        for (const auto& [p, h] : list) arr.push_back({{"path", p}, {"sha256", h}});
        return arr;
    };
    j["inputs"] = files(inputs_);
    j["outputs"] = files(outputs_);
    j["failures"] = failures_;
    write_file_atomic(dir_ / "manifest.json", j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------

namespace {

fs::path require_file(const fs::path& p, const std::string& what) {
    if (p.empty()) throw UsageError(what + " path is not configured");
    if (!fs::exists(p)) throw UsageError(what + " '" + p.string() + "' does not exist");
    return p;
}

fs::path transformed_lf_path(const RunConfig& c) { return c.out_dir / "transform" / "lf.csv"; }
fs::path forecasts_path(const RunConfig& c) { return c.out_dir / "backtest" / "forecasts.csv"; }

MFDataset load_dataset(const RunConfig& c, OutputDir& out) {
    const auto path = require_file(c.dataset_or_default(), "dataset");
    out.add_input(path);
    MFDataset ds = dataset_from_csv(read_text_file(path));
    if (ds.m() != c.m)
        throw UsageError("dataset has m=" + std::to_string(ds.m()) + " but the configuration asks for m=" +
                         std::to_string(c.m));
    return ds;
}

std::string fixed(double v, int digits) {
    if (std::isnan(v)) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// Wide table: one row per model, one column per horizon.
std::string summary_csv(const LossSummary& s, const std::map<int, std::set<std::string>>* members) {
    std::string out = "model";
    for (int h : s.horizons) out += ",h" + std::to_string(h);
    if (members)
        for (int h : s.horizons) out += ",mcs_h" + std::to_string(h);
    out += "\n";
    for (std::size_t i = 0; i < s.models.size(); ++i) {
        out += s.models[i];
        for (std::size_t k = 0; k < s.horizons.size(); ++k)
            out += "," + format_double(s.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)));
        if (members)
            for (int h : s.horizons) out += members->at(h).count(s.models[i]) ? ",1" : ",0";
        out += "\n";
    }
    return out;
}

std::string summary_markdown(const LossSummary& s, const std::string& title, int digits,
                             const std::map<int, std::set<std::string>>* members,
                             const std::vector<std::string>& rows) {
    std::string out = "| " + title + " |";
    for (int h : s.horizons) out += " h=" + std::to_string(h) + " |";
    out += "\n|---|";
    for (std::size_t k = 0; k < s.horizons.size(); ++k) out += "---:|";
    out += "\n";
    for (const auto& model : rows) {
        const auto it = std::find(s.models.begin(), s.models.end(), model);
        const auto i = static_cast<Eigen::Index>(it - s.models.begin());
        out += "| " + model + " |";
        for (std::size_t k = 0; k < s.horizons.size(); ++k) {
            const std::string cell = fixed(s.values(i, static_cast<Eigen::Index>(k)), digits);
            const bool bold = members && members->at(s.horizons[k]).count(model);
            out += " " + (bold ? "**" + cell + "**" : cell) + " |";
        }
        out += "\n";
    }
    return out;
}

void check_origin_sets(const ForecastTable& table) {
    for (int h : table.horizons) {
        std::map<std::string, std::set<int>> origins;
        for (const auto& e : table.entries)
            if (e.horizon == h) origins[e.model].insert(e.origin);
        const std::set<int>* ref = nullptr;
        std::string ref_model;
        for (const auto& model : table.models) {
            const auto& o = origins[model];
            if (!ref) {
                ref = &o;
                ref_model = model;
            } else if (o != *ref) {
                throw DataError("forecast origins differ between '" + ref_model + "' and '" + model +
                                "' at h=" + std::to_string(h) + "; rerun the backtest for all models together");
            }
        }
    }
}

std::vector<std::string> hier_models(const std::vector<std::string>& models) {
    std::vector<std::string> out;
    for (const auto& m : models)
        if (m.find("-HIER[") != std::string::npos) out.push_back(m);
    return out;
}

}  // namespace

void cmd_transform(const RunConfig& c) {
    const auto lf_path = require_file(c.lf_path, "LF file");
    OutputDir out(c.out_dir / "transform", "transform", c);
    out.add_input(lf_path);
    LfTable table = read_lf_csv(lf_path);

    for (const auto& [name, code] : c.tcode_overrides)
        if (std::find(table.labels.begin(), table.labels.end(), name) == table.labels.end())
            throw UsageError("T-code override names unknown column '" + name + "'");

    json provenance;
    provenance["source"] = lf_path.string();
    json columns = json::array();
    for (std::size_t k = 0; k < table.labels.size(); ++k) {
        const auto& label = table.labels[k];
        int code = table.tcodes ? (*table.tcodes)[k] : 1;
        const bool overridden = c.tcode_overrides.count(label) > 0;
        if (overridden) code = c.tcode_overrides.at(label);
        try {
            table.series[k] = apply_tcode(table.series[k], TCode(code));
        } catch (const DataError& e) {
            throw DataError("column '" + label + "': " + e.what());
        }
        columns.push_back({{"column", label},
                           {"tcode", code},
                           {"file_tcode", table.tcodes ? json((*table.tcodes)[k]) : json(nullptr)},
                           {"overridden", overridden}});
    }
    provenance["columns"] = columns;
    table.tcodes.reset();
    out.write("lf.csv", lf_to_csv(table, false));
    out.write("provenance.json", provenance.dump(2) + "\n");
    out.finish(std::nullopt);
}

void cmd_align(const RunConfig& c) {
    const auto hf_path = require_file(c.hf_path, "HF file");
    const auto lf_path = transformed_lf_path(c);
    if (!fs::exists(lf_path))
        throw UsageError("transformed LF file '" + lf_path.string() + "' is missing; run `mfh transform` first");
    OutputDir out(c.out_dir / "align", "align", c);
    out.add_input(hf_path);
    out.add_input(lf_path);

    RawSeries hf = read_hf_csv(hf_path);
    if (c.log_hf) {
        for (std::size_t k = 0; k < hf.values.size(); ++k) {
            double& v = hf.values[k];
            if (is_missing(v)) continue;
            if (!(v > 0.0))
                throw DataError("log of non-positive HF value at " + hf.timestamps[k].iso());
            v = std::log(v);
        }
    }
    const LfTable lf = read_lf_csv(lf_path);
    const auto calendar = month_calendar(hf);
    const AlignedPanel panel = align_fixed_m(hf, c.m, calendar, c.sanity_bound);
    const MFDataset ds = assemble(panel, lf.series, c.m);

    out.write("dataset.csv", dataset_to_csv(ds));
    out.write("alignment_log.json", alignment_log_to_json(panel.log) + "\n");
    for (const auto& rec : panel.log)
        if (rec.action == AlignAction::Pad) out.add_failure("padded short first period " + rec.period);
    out.finish(std::nullopt);
}

void cmd_simulate(const RunConfig& c) {
    const auto seed = c.require_seed();
    const auto& s = c.simulate;
    if (s.K < 1 || s.relevant < 0 || s.relevant > s.K) throw UsageError("simulate: need 0 <= relevant <= K, K >= 1");
    if (static_cast<int>(s.alpha.size()) > c.m) throw UsageError("simulate: more alpha values than positions");
    if (!s.lf_tcodes.empty() && static_cast<int>(s.lf_tcodes.size()) != s.K)
        throw UsageError("simulate: lf_tcodes needs one code per LF variable");
    for (int code : s.lf_tcodes)
        if (code != 1 && code != 2 && code != 4 && code != 5)
            throw UsageError("simulate: lf_tcodes supports codes 1, 2, 4 and 5");
    if (!s.labels.empty() && static_cast<int>(s.labels.size()) != s.K)
        throw UsageError("simulate: labels needs one name per LF variable");

    SimulationConfig cfg;
    cfg.m = c.m;
    cfg.T = s.T;
    cfg.alpha = Eigen::MatrixXd::Zero(s.K, c.m);
    for (int k = 0; k < s.relevant; ++k)
        for (std::size_t i = 0; i < s.alpha.size(); ++i) cfg.alpha(k, static_cast<Eigen::Index>(i)) = s.alpha[i];
    cfg.beta = Eigen::Map<const Eigen::VectorXd>(s.beta.data(), static_cast<Eigen::Index>(s.beta.size()));
    cfg.lf_ar = s.lf_ar;
    cfg.lf_scale = s.lf_scale;
    cfg.noise_scale = s.noise;
    cfg.seed = seed;
    cfg.labels = s.labels;
    Date start = Date::parse(s.start);
    start.day = 1;
    cfg.start = start;
    const SimulationResult sim = simulate_pooled_rumidas(cfg);
    const MFDataset& ds = sim.dataset;

    OutputDir out(c.out_dir / "simulate", "simulate", c);
    out.write("dataset.csv", dataset_to_csv(ds));

    // Raw HF file on a calendar. With weekdays, months longer than m get filler
    // days at the start, which alignment deletes again.
    RawSeries hf;
    hf.label = "hf";
    const int m = c.m;
    for (int t = 0; t < ds.periods(); ++t) {
        int year = start.year + (start.month - 1 + t) / 12;
        int month = (start.month - 1 + t) % 12 + 1;
        std::vector<Date> days;
        for (int d = 1; d <= days_in_month(year, month); ++d) {
            Date day{year, month, d};
            if (s.weekday_calendar ? day.weekday() < 5 : static_cast<int>(days.size()) < m) days.push_back(day);
        }
        if (static_cast<int>(days.size()) < m)
            throw UsageError("simulate: month " + Date{year, month, 1}.month_key() + " has fewer than m days");
        const int extra = static_cast<int>(days.size()) - m;
        const double first = ds.hf()(t * m);
        for (int k = 0; k < extra; ++k) {
            hf.timestamps.push_back(days[static_cast<std::size_t>(k)]);
            hf.values.push_back(first);
        }
        for (int i = 0; i < m; ++i) {
            hf.timestamps.push_back(days[static_cast<std::size_t>(extra + i)]);
            hf.values.push_back(ds.hf()(t * m + i));
        }
    }
    out.write("hf.csv", hf_to_csv(hf));

    // Raw LF file: integrate each column so that its T-code recovers the
    // simulated values. One extra leading month carries the base level.
    LfTable lf;
    lf.labels = ds.labels();
    std::vector<int> codes = s.lf_tcodes.empty() ? std::vector<int>(static_cast<std::size_t>(s.K), 1) : s.lf_tcodes;
    lf.tcodes = codes;
    std::vector<Date> months;
    for (int t = -1; t < ds.periods(); ++t) {
        const int idx = start.year * 12 + start.month - 1 + t;
        months.push_back(Date{idx / 12, idx % 12 + 1, 1});
    }
    for (int k = 0; k < s.K; ++k) {
        RawSeries col;
        col.label = lf.labels[static_cast<std::size_t>(k)];
        col.timestamps = months;
        const int code = codes[static_cast<std::size_t>(k)];
        double level = code == 5 ? 100.0 : 0.0;
        col.values.push_back(code == 1 || code == 4 ? kMissing : level);
        for (int t = 0; t < ds.periods(); ++t) {
            const double y = ds.lf()(t, k);
            switch (code) {
                case 1: col.values.push_back(y); break;
                case 2: level += y; col.values.push_back(level); break;
                case 4: col.values.push_back(std::exp(y)); break;
                default: level *= std::exp(y); col.values.push_back(level); break;
            }
        }
        lf.series.push_back(std::move(col));
    }
    out.write("lf.csv", lf_to_csv(lf, true));

    json truth;
    truth["seed"] = seed;
    truth["m"] = m;
    truth["T"] = s.T;
    truth["labels"] = ds.labels();
    json alpha = json::object();
    for (int k = 0; k < s.K; ++k) {
        std::vector<double> row(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) row[static_cast<std::size_t>(i)] = sim.alpha(k, i);
        alpha[ds.labels()[static_cast<std::size_t>(k)]] = row;
    }
    truth["alpha"] = alpha;
    truth["beta"] = s.beta;
    truth["lf_ar"] = s.lf_ar;
    truth["lf_scale"] = s.lf_scale;
    truth["noise"] = s.noise;
    truth["lf_tcodes"] = codes;
    out.write("truth.json", truth.dump(2) + "\n");
    out.finish(seed);
}

void cmd_backtest(const RunConfig& c) {
    OutputDir out(c.out_dir / "backtest", "backtest", c);
    const MFDataset ds = load_dataset(c, out);
    const BacktestSpec spec = c.backtest_spec(ds.labels());
    if (spec.models.empty()) throw UsageError("no models configured");
    const ForecastTable table = rolling_backtest(ds, spec);

    out.write("forecasts.csv", forecasts_to_csv(table));
    out.write("selection.csv", selection_log_to_csv(table));
    json summary;
    summary["MAFE"] = json::parse(summary_to_json(loss_summary(table, LossKind::Mafe)));
    summary["RMSFE"] = json::parse(summary_to_json(loss_summary(table, LossKind::Rmsfe)));
    json counts = json::object();
    for (int h : table.horizons) counts[std::to_string(h)] = table.common_origins(h).size();
    summary["common_origins"] = counts;
    out.write("summary.json", summary.dump(2) + "\n");
    for (const auto& line : table.log) out.add_failure(line);
    out.finish(c.seed);

    std::size_t failed = 0;
    for (const auto& e : table.entries) failed += e.ok ? 0 : 1;
    if (failed > 0)
        throw NumericalError(std::to_string(failed) + " forecast(s) failed; partial results and the failure list are in " +
                             (out.path() / "manifest.json").string());
}

void cmd_evaluate(const RunConfig& c) {
    const auto fpath = require_file(forecasts_path(c), "forecast table");
    const auto spath = c.out_dir / "backtest" / "selection.csv";
    const MCSOptions mcs_opts = c.mcs_options();
    OutputDir out(c.out_dir / "evaluate", "evaluate", c);
    out.add_input(fpath);

    ForecastTable table = forecasts_from_csv(read_text_file(fpath));
    check_origin_sets(table);
    if (fs::exists(spath)) {
        out.add_input(spath);
        merge_selection_log(table, read_text_file(spath));
    }

    DMOptions dm_opts;
    dm_opts.harvey_correction = c.harvey;
    std::string dm_csv;
    json mcs_all;
    mcs_all["loss"] = to_string(c.loss);
    json per_h = json::object();
    std::map<int, std::set<std::string>> members;
    for (int h : table.horizons) {
        const Eigen::MatrixXd losses = table.loss_matrix(h, c.loss == LossKind::Rmsfe ? LossKind::Rmsfe : LossKind::Mafe);
        std::string block = dm_matrix_to_csv(table.models, losses, h, dm_opts);
        dm_csv += dm_csv.empty() ? block : block.substr(block.find('\n') + 1);
        const MCSResult r = mcs(losses, mcs_opts);
        per_h[std::to_string(h)] = json::parse(mcs_to_json(r, table.models));
        for (int i : r.survivors) members[h].insert(table.models[static_cast<std::size_t>(i)]);
        if (r.tie_in_elimination) out.add_failure("MCS tie in elimination at h=" + std::to_string(h));
    }
    if (dm_csv.empty()) dm_csv = "horizon,model1,model2,statistic,p_value\n";
    mcs_all["horizons"] = per_h;
    out.write("dm.csv", dm_csv);
    out.write("mcs.json", mcs_all.dump(2) + "\n");

    const LossSummary loss = loss_summary(table, c.loss);
    const std::string name = c.loss == LossKind::Mafe ? "mafe" : "rmsfe";
    out.write(name + ".csv", summary_csv(loss, &members));
    const int conf = static_cast<int>(std::lround(100.0 * (1.0 - c.alpha)));
    out.write(name + ".md", summary_markdown(loss, to_string(c.loss), 4, &members, table.models) +
                                "\nBold: member of the " + std::to_string(conf) + "% model confidence set.\n");

    const LossSummary freq = selection_frequency(table);
    const auto rows = hier_models(table.models);
    out.write("selection_frequency.csv", summary_csv(freq, nullptr));
    out.write("selection_frequency.md", summary_markdown(freq, "LF selected (%)", 1, nullptr, rows));
    out.finish(mcs_opts.seed);
}

void cmd_report(const RunConfig& c) {
    const fs::path eval = c.out_dir / "evaluate";
    const std::string name = c.loss == LossKind::Mafe ? "mafe" : "rmsfe";
    const auto loss_md = require_file(eval / (name + ".md"), "evaluation table");
    const auto sel_md = require_file(eval / "selection_frequency.md", "selection table");
    const auto mcs_path = require_file(eval / "mcs.json", "MCS result");
    OutputDir out(c.out_dir / "report", "report", c);
    for (const auto& p : {loss_md, sel_md, mcs_path}) out.add_input(p);

    const json mcs_all = json::parse(read_text_file(mcs_path));
    std::string md = "# Forecast evaluation\n\n## " + to_string(c.loss) + "\n\n" + read_text_file(loss_md) +
                     "\n## Model confidence set\n\n| horizon | survivors |\n|---|---|\n";
    std::string csv = "horizon,model,p_value,in_mcs\n";
    for (const auto& [h, r] : mcs_all["horizons"].items()) {
        std::string surv;
        std::set<std::string> in;
        for (const auto& s : r["survivors"]) {
            surv += (surv.empty() ? "" : ", ") + s.get<std::string>();
            in.insert(s.get<std::string>());
        }
        md += "| " + h + " | " + surv + " |\n";
        for (const auto& [model, p] : r["p_values"].items())
            csv += h + "," + model + "," + format_double(p.get<double>()) + "," + (in.count(model) ? "1" : "0") + "\n";
    }
    md += "\n## Selection frequency of LF predictors\n\n" + read_text_file(sel_md);
    out.write("report.md", md);
    out.write("mcs_pvalues.csv", csv);
    out.finish(c.seed);
}

// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv) {
    CLI::App app{"Pooled mixed-frequency forecasting with hierarchical regularization", "mfh"};
    app.set_version_flag("--version", std::string(MFH_VERSION));
    app.require_subcommand(1);

    Overrides o;
    std::string config, out_dir, horizons;
    std::uint64_t seed = 0;
    int window = 0, m = 0, step = 0, threads = 0, replications = 0;
    double alpha = 0.0;
    auto* opt_config = app.add_option("--config", config, "INI configuration file");
    auto* opt_seed = app.add_option("--seed", seed, "seed for stochastic steps");
    auto* opt_window = app.add_option("--window", window, "rolling window length in HF observations");
    auto* opt_horizons = app.add_option("--horizons", horizons, "comma-separated forecast horizons");
    auto* opt_m = app.add_option("--m", m, "HF observations per LF period");
    auto* opt_out = app.add_option("--out", out_dir, "output directory");
    auto* opt_step = app.add_option("--step", step, "origin step between windows");
    auto* opt_threads = app.add_option("--threads", threads, "backtest worker threads (0 = all cores)");
    auto* opt_alpha = app.add_option("--alpha", alpha, "MCS significance level");
    auto* opt_reps = app.add_option("--replications", replications, "MCS bootstrap replications");

    std::string command;
    const std::pair<const char*, const char*> subcommands[] = {
        {"transform", "apply stationarity codes to the monthly panel"},
        {"align", "match daily rows to months and write the aligned dataset"},
        {"simulate", "draw a dataset from the pooled data-generating process"},
        {"backtest", "rolling-window forecasts for every configured model"},
        {"evaluate", "losses, Diebold-Mariano tests, model confidence sets"},
        {"report", "collect the evaluation tables into report.md"},
    };
    for (const auto& [name, help] : subcommands) {
        auto* sub = app.add_subcommand(name, help);
        sub->fallthrough();
        sub->callback([&command, name] { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*opt_config) o.config = fs::path(config);
        if (*opt_seed) o.seed = seed;
        if (*opt_window) o.window = window;
        if (*opt_horizons) o.horizons = parse_int_list(horizons);
        if (*opt_m) o.m = m;
        if (*opt_out) o.out = fs::path(out_dir);
        if (*opt_step) o.step = step;
        if (*opt_threads) o.threads = threads;
        if (*opt_alpha) o.alpha = alpha;
        if (*opt_reps) o.replications = replications;
        const RunConfig c = resolve_config(o);

        if (command == "transform") cmd_transform(c);
        else if (command == "align") cmd_align(c);
        else if (command == "simulate") cmd_simulate(c);
        else if (command == "backtest") cmd_backtest(c);
        else if (command == "evaluate") cmd_evaluate(c);
        else cmd_report(c);
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "mfh " << command << ": " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "mfh " << command << ": data error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "mfh " << command << ": numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "mfh " << command << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "mfh " << command << ": unexpected failure: " << e.what() << "\n";
        return 3;
    }
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("mfh");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace mfh::cli
