#include "run_config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <set>
#include <sstream>

#include "mfh/csv_io.hpp"
#include "mfh/error.hpp"

namespace mfh::cli {

namespace pt = boost::property_tree;

namespace {

std::string strip(std::string s) {
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
    std::size_t k = 0;
    while (k < s.size() && (s[k] == ' ' || s[k] == '\t')) ++k;
    return s.substr(k);
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw UsageError("config key '" + key + "': expected a boolean, got '" + v + "'");
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        T out{};
        if constexpr (std::is_same_v<T, double>) out = std::stod(v, &used);
        else if constexpr (std::is_same_v<T, std::uint64_t>) out = std::stoull(v, &used);
        else out = static_cast<T>(std::stoll(v, &used));
        if (used != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw UsageError("config key '" + key + "': cannot parse '" + v + "'");
    }
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + v[k];
    return out;
}

template <class T>
std::string join_num(const std::vector<T>& v) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) out += ",";
        if constexpr (std::is_floating_point_v<T>) out += format_double(v[k]);
        else out += std::to_string(v[k]);
    }
    return out;
}

}  // namespace

std::vector<std::string> parse_string_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(text);
    while (std::getline(is, cur, ',')) {
        cur = strip(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (const auto& s : parse_string_list(text)) out.push_back(parse_number<int>("list", s));
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& s : parse_string_list(text)) out.push_back(parse_number<double>("list", s));
    return out;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    pt::ptree tree;
    try {
        pt::read_ini(path.string(), tree);
    } catch (const pt::ini_parser_error& e) {
        throw UsageError("cannot read config '" + path.string() + "': " + e.message());
    }
    const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    auto resolve = [&](const std::string& p) {
        std::filesystem::path fp(p);
        return fp.is_absolute() ? fp : base / fp;
    };

    static const std::map<std::string, std::set<std::string>> known{
        {"data", {"hf", "lf", "dataset", "m", "log_hf", "sanity_bound", "tcode_overrides"}},
        {"models",
         {"har", "pooled_hier", "pooled_ols", "dwm_hier", "dwm_ols", "rumidas_hier", "rumidas_ols", "q_lf",
          "p_hf"}},
        {"backtest", {"window", "horizons", "step", "refit_every", "threads"}},
        {"solver",
         {"max_iterations", "tolerance", "certificate_tolerance", "acceleration", "n_lambda",
          "lambda_min_ratio", "size_weights", "standardize", "post_lasso", "bic_rss"}},
        {"evaluate", {"alpha", "replications", "block_length", "seed", "loss", "harvey"}},
        {"simulate",
         {"T", "K", "relevant", "alpha", "beta", "lf_ar", "lf_scale", "noise", "start", "calendar",
          "lf_tcodes", "labels"}},
        {"output", {"dir"}},
    };

    RunConfig c;
    for (const auto& [section, body] : tree) {
        auto sec = known.find(section);
        if (sec == known.end()) throw UsageError("unknown config section [" + section + "]");
        for (const auto& [key, node] : body) {
            if (!sec->second.count(key))
                throw UsageError("unknown config key '" + key + "' in [" + section + "]");
            const std::string v = strip(node.get_value<std::string>());
            const std::string full = section + "." + key;
            if (section == "data") {
                if (key == "hf") c.hf_path = resolve(v);
                else if (key == "lf") c.lf_path = resolve(v);
                else if (key == "dataset") c.dataset_path = resolve(v);
                else if (key == "m") c.m = parse_number<int>(full, v);
                else if (key == "log_hf") c.log_hf = parse_bool(full, v);
                else if (key == "sanity_bound") c.sanity_bound = parse_number<int>(full, v);
                else if (key == "tcode_overrides") {
                    for (const auto& item : parse_string_list(v)) {
                        auto colon = item.find(':');
                        if (colon == std::string::npos)
                            throw UsageError("tcode_overrides entries look like NAME:CODE, got '" + item + "'");
                        c.tcode_overrides[strip(item.substr(0, colon))] =
                            parse_number<int>(full, strip(item.substr(colon + 1)));
                    }
                }
            } else if (section == "models") {
                if (key == "har") c.har = parse_bool(full, v);
                else if (key == "pooled_hier") c.pooled_hier = parse_string_list(v);
                else if (key == "pooled_ols") c.pooled_ols = parse_string_list(v);
                else if (key == "dwm_hier") c.dwm_hier = parse_string_list(v);
                else if (key == "dwm_ols") c.dwm_ols = parse_string_list(v);
                else if (key == "rumidas_hier") c.rumidas_hier = parse_string_list(v);
                else if (key == "rumidas_ols") c.rumidas_ols = parse_string_list(v);
                else if (key == "q_lf") c.q_lf = parse_number<int>(full, v);
                else if (key == "p_hf") c.p_hf = parse_number<int>(full, v);
            } else if (section == "backtest") {
                if (key == "window") c.window = parse_number<int>(full, v);
                else if (key == "horizons") c.horizons = parse_int_list(v);
                else if (key == "step") c.step = parse_number<int>(full, v);
                else if (key == "refit_every") c.refit_every = parse_number<int>(full, v);
                else if (key == "threads") c.threads = parse_number<int>(full, v);
            } else if (section == "solver") {
                auto& s = c.hier.solver;
                if (key == "max_iterations") s.max_iterations = parse_number<int>(full, v);
                else if (key == "tolerance") s.tolerance = parse_number<double>(full, v);
                else if (key == "certificate_tolerance") s.certificate_tolerance = parse_number<double>(full, v);
                else if (key == "acceleration") s.acceleration = parse_bool(full, v);
                else if (key == "n_lambda") s.n_lambda = parse_number<int>(full, v);
                else if (key == "lambda_min_ratio") s.lambda_min_ratio = parse_number<double>(full, v);
                else if (key == "size_weights") s.size_weights = parse_bool(full, v);
                else if (key == "standardize") c.hier.standardize = parse_bool(full, v);
                else if (key == "post_lasso") c.hier.post_lasso = parse_bool(full, v);
                else if (key == "bic_rss") c.hier.bic_rss = parse_bic_rss(v);
            } else if (section == "evaluate") {
                if (key == "alpha") c.alpha = parse_number<double>(full, v);
                else if (key == "replications") c.replications = parse_number<int>(full, v);
                else if (key == "block_length") c.block_length = parse_number<int>(full, v);
                else if (key == "seed") c.seed = parse_number<std::uint64_t>(full, v);
                else if (key == "loss") c.loss = parse_loss(v);
                else if (key == "harvey") c.harvey = parse_bool(full, v);
            } else if (section == "simulate") {
                auto& s = c.simulate;
                if (key == "T") s.T = parse_number<int>(full, v);
                else if (key == "K") s.K = parse_number<int>(full, v);
                else if (key == "relevant") s.relevant = parse_number<int>(full, v);
                else if (key == "alpha") s.alpha = parse_double_list(v);
                else if (key == "beta") s.beta = parse_double_list(v);
                else if (key == "lf_ar") s.lf_ar = parse_number<double>(full, v);
                else if (key == "lf_scale") s.lf_scale = parse_number<double>(full, v);
                else if (key == "noise") s.noise = parse_number<double>(full, v);
                else if (key == "start") s.start = v;
                else if (key == "calendar") {
                    if (v != "weekdays" && v != "aligned")
                        throw UsageError("simulate.calendar must be 'weekdays' or 'aligned'");
                    s.weekday_calendar = v == "weekdays";
                } else if (key == "lf_tcodes") s.lf_tcodes = parse_int_list(v);
                else if (key == "labels") s.labels = parse_string_list(v);
            } else if (section == "output") {
                if (key == "dir") c.out_dir = resolve(v);
            }
        }
    }
    return c;
}

std::string RunConfig::canonical() const {
    std::ostringstream os;
    os << "data.hf=" << hf_path.string() << "\n"
       << "data.lf=" << lf_path.string() << "\n"
       << "data.dataset=" << dataset_path.string() << "\n"
       << "data.m=" << m << "\n"
       << "data.log_hf=" << log_hf << "\n"
       << "data.sanity_bound=" << sanity_bound << "\n";
    for (const auto& [k, v] : tcode_overrides) os << "data.tcode_override." << k << "=" << v << "\n";
    os << "models.har=" << har << "\n"
       << "models.pooled_hier=" << join(pooled_hier) << "\n"
       << "models.pooled_ols=" << join(pooled_ols) << "\n"
       << "models.dwm_hier=" << join(dwm_hier) << "\n"
       << "models.dwm_ols=" << join(dwm_ols) << "\n"
       << "models.rumidas_hier=" << join(rumidas_hier) << "\n"
       << "models.rumidas_ols=" << join(rumidas_ols) << "\n"
       << "models.q_lf=" << q_lf << "\n"
       << "models.p_hf=" << p_hf << "\n"
       << "backtest.window=" << window << "\n"
       << "backtest.horizons=" << join_num(horizons) << "\n"
       << "backtest.step=" << step << "\n"
       << "backtest.refit_every=" << refit_every << "\n"
       << "solver.max_iterations=" << hier.solver.max_iterations << "\n"
       << "solver.tolerance=" << format_double(hier.solver.tolerance) << "\n"
       << "solver.certificate_tolerance=" << format_double(hier.solver.certificate_tolerance) << "\n"
       << "solver.acceleration=" << hier.solver.acceleration << "\n"
       << "solver.n_lambda=" << hier.solver.n_lambda << "\n"
       << "solver.lambda_min_ratio=" << format_double(hier.solver.lambda_min_ratio) << "\n"
       << "solver.size_weights=" << hier.solver.size_weights << "\n"
       << "solver.standardize=" << hier.standardize << "\n"
       << "solver.post_lasso=" << hier.post_lasso << "\n"
       << "solver.bic_rss=" << to_string(hier.bic_rss) << "\n"
       << "evaluate.alpha=" << format_double(alpha) << "\n"
       << "evaluate.replications=" << replications << "\n"
       << "evaluate.block_length=" << block_length << "\n"
       << "evaluate.seed=" << (seed ? std::to_string(*seed) : std::string("unset")) << "\n"
       << "evaluate.loss=" << to_string(loss) << "\n"
       << "evaluate.harvey=" << harvey << "\n"
       << "simulate.T=" << simulate.T << "\n"
       << "simulate.K=" << simulate.K << "\n"
       << "simulate.relevant=" << simulate.relevant << "\n"
       << "simulate.alpha=" << join_num(simulate.alpha) << "\n"
       << "simulate.beta=" << join_num(simulate.beta) << "\n"
       << "simulate.lf_ar=" << format_double(simulate.lf_ar) << "\n"
       << "simulate.lf_scale=" << format_double(simulate.lf_scale) << "\n"
       << "simulate.noise=" << format_double(simulate.noise) << "\n"
       << "simulate.start=" << simulate.start << "\n"
       << "simulate.calendar=" << (simulate.weekday_calendar ? "weekdays" : "aligned") << "\n"
       << "simulate.lf_tcodes=" << join_num(simulate.lf_tcodes) << "\n"
       << "simulate.labels=" << join(simulate.labels) << "\n";
    // threads and output dir do not change results and are left out.
    return os.str();
}

std::filesystem::path RunConfig::dataset_or_default() const {
    return dataset_path.empty() ? out_dir / "align" / "dataset.csv" : dataset_path;
}

std::vector<ModelEntry> RunConfig::model_entries(const std::vector<std::string>& labels) const {
    std::vector<ModelEntry> out;
    auto check = [&](const std::string& v) {
        if (v == "all" || v == "none") return;
        if (std::find(labels.begin(), labels.end(), v) == labels.end())
            throw UsageError("model list names unknown LF variable '" + v + "'");
    };
    auto add = [&](const std::vector<std::string>& vars, ModelKind kind, Estimator est, const std::string& prefix) {
        for (const auto& v : vars) {
            check(v);
            ModelEntry e;
            e.id = prefix + "[" + v + "]";
            e.estimator = est;
            e.spec.kind = kind;
            e.spec.q_lf = q_lf;
            e.spec.p_hf = p_hf;
            if (v == "none") e.spec.lf_variables = std::vector<std::string>{};
            else if (v != "all") e.spec.lf_variables = std::vector<std::string>{v};
            out.push_back(std::move(e));
        }
    };
    if (har) {
        ModelEntry e;
        e.id = "HAR";
        e.estimator = Estimator::HarOls;
        e.spec.kind = ModelKind::Har;
        e.spec.include_intercept = true;
        out.push_back(std::move(e));
    }
    add(pooled_hier, ModelKind::Pooled, Estimator::Hier, "pooled-HIER");
    add(pooled_ols, ModelKind::Pooled, Estimator::Ols, "pooled-OLS");
    add(dwm_hier, ModelKind::PooledDwm, Estimator::Hier, "dwm-HIER");
    add(dwm_ols, ModelKind::PooledDwm, Estimator::Ols, "dwm-OLS");
    add(rumidas_hier, ModelKind::RumidasEq, Estimator::Hier, "rumidas-HIER");
    add(rumidas_ols, ModelKind::RumidasEq, Estimator::Ols, "rumidas-OLS");
    return out;
}

BacktestSpec RunConfig::backtest_spec(const std::vector<std::string>& labels) const {
    BacktestSpec spec;
    spec.window_length = window;
    spec.horizons = horizons;
    spec.step = step;
    spec.refit_every = refit_every;
    spec.threads = threads;
    spec.hier = hier;
    spec.models = model_entries(labels);
    return spec;
}

MCSOptions RunConfig::mcs_options() const {
    MCSOptions o;
    o.alpha = alpha;
    o.replications = replications;
    o.block_length = block_length;
    o.seed = require_seed();
    return o;
}

std::uint64_t RunConfig::require_seed() const {
    if (!seed) throw UsageError("a seed is required for this command (--seed N or [evaluate] seed)");
    return *seed;
}

}  // namespace mfh::cli
