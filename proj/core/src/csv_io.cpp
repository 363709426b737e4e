#include "mfh/csv_io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "mfh/error.hpp"

namespace mfh {

namespace {

std::string trim(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
    std::size_t k = 0;
    while (k < s.size() && (s[k] == ' ' || s[k] == '\t')) ++k;
    return s.substr(k);
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty()) continue;
        out.push_back(line);
    }
    return out;
}

double parse_value(const std::string& cell, const std::string& where) {
    const std::string c = trim(cell);
    if (c.empty() || c == "NA" || c == "NaN" || c == "nan" || c == ".") return kMissing;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
    if (ec != std::errc() || ptr != c.data() + c.size())
        throw DataError("cannot parse number '" + c + "' in " + where);
    return v;
}

bool parse_int_cell(const std::string& cell, int& out) {
    const std::string c = trim(cell);
    if (c.empty()) return false;
    auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), out);
    if (ec == std::errc() && ptr == c.data() + c.size()) return true;
    // FRED-MD writes codes as "5.0" in some vintages.
    double d = 0.0;
    auto [p2, e2] = std::from_chars(c.data(), c.data() + c.size(), d);
    if (e2 == std::errc() && p2 == c.data() + c.size() && d == static_cast<int>(d)) {
        out = static_cast<int>(d);
        return true;
    }
    return false;
}

}  // namespace

std::string format_double(double v) {
    if (is_missing(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') {
            quoted = !quoted;
        } else if (ch == ',' && !quoted) {
            cells.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    cells.push_back(trim(cur));
    return cells;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out) throw DataError("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

RawSeries read_hf_csv(const std::filesystem::path& path, const std::string& label) {
    const auto lines = lines_of(read_text_file(path));
    if (lines.empty()) throw DataError("'" + path.string() + "' is empty");
    const auto header = split_csv_line(lines.front());
    if (header.size() < 2 || header[0] != "date")
        throw DataError("'" + path.string() + "': expected header 'date,value'");
    RawSeries s;
    s.label = label;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto cells = split_csv_line(lines[r]);
        if (cells.size() < 2)
            throw DataError("'" + path.string() + "' line " + std::to_string(r + 1) + ": expected 2 cells");
        s.timestamps.push_back(Date::parse(cells[0]));
        s.values.push_back(parse_value(cells[1], path.string() + " line " + std::to_string(r + 1)));
    }
    s.validate();
    return s;
}

std::string hf_to_csv(const RawSeries& series) {
    std::string out = "date,value\n";
    for (std::size_t k = 0; k < series.size(); ++k)
        out += series.timestamps[k].iso() + "," + format_double(series.values[k]) + "\n";
    return out;
}

LfTable read_lf_csv(const std::filesystem::path& path) {
    const auto lines = lines_of(read_text_file(path));
    if (lines.size() < 2) throw DataError("'" + path.string() + "' has no data rows");
    const auto header = split_csv_line(lines.front());
    if (header.size() < 2) throw DataError("'" + path.string() + "': no series columns");

    LfTable table;
    table.labels.assign(header.begin() + 1, header.end());
    const std::size_t K = table.labels.size();
    for (const auto& l : table.labels) {
        RawSeries s;
        s.label = l;
        table.series.push_back(std::move(s));
    }

    std::size_t first_data = 1;
    {
        const auto cells = split_csv_line(lines[1]);
        Date probe;
        if (!Date::try_parse(cells[0], probe)) {
            std::vector<int> codes;
            for (std::size_t k = 1; k < cells.size() && k <= K; ++k) {
                int code = 0;
                if (!parse_int_cell(cells[k], code))
                    throw DataError("'" + path.string() + "': T-code row has non-integer entry for '" +
                                    table.labels[k - 1] + "'");
                codes.push_back(code);
            }
            if (codes.size() != K) throw DataError("'" + path.string() + "': T-code row is incomplete");
            table.tcodes = std::move(codes);
            first_data = 2;
        }
    }
    for (std::size_t r = first_data; r < lines.size(); ++r) {
        const auto cells = split_csv_line(lines[r]);
        const std::string where = path.string() + " line " + std::to_string(r + 1);
        if (cells.size() < K + 1) throw DataError(where + ": expected " + std::to_string(K + 1) + " cells");
        const Date d = Date::parse(cells[0]);
        for (std::size_t k = 0; k < K; ++k) {
            table.series[k].timestamps.push_back(d);
            table.series[k].values.push_back(parse_value(cells[k + 1], where));
        }
    }
    return table;
}

std::string lf_to_csv(const LfTable& table, bool write_tcodes) {
    std::string out = "date";
    for (const auto& l : table.labels) out += "," + l;
    out += "\n";
    if (write_tcodes && table.tcodes) {
        out += "Transform:";
        for (int c : *table.tcodes) out += "," + std::to_string(c);
        out += "\n";
    }
    const std::size_t n = table.series.empty() ? 0 : table.series.front().size();
    for (std::size_t t = 0; t < n; ++t) {
        out += table.series.front().timestamps[t].iso();
        for (const auto& s : table.series) out += "," + format_double(s.values[t]);
        out += "\n";
    }
    return out;
}

std::string alignment_log_to_json(const std::vector<AlignmentRecord>& log) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& rec : log) {
        const char* action = rec.action == AlignAction::Delete ? "delete" : "insert";
        nlohmann::json j{{"period", rec.period}, {"action", action}, {"position", rec.position},
                         {"value", rec.value}};
        if (rec.action == AlignAction::Pad) j["warning"] = "first period short; padded with first value";
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

std::string dataset_to_csv(const MFDataset& ds) {
    std::string out = "# m=" + std::to_string(ds.m()) + "\n";
    out += "period,position,x";
    for (const auto& l : ds.labels()) out += "," + l;
    out += "\n";
    for (int s = 0; s < ds.hf_length(); ++s) {
        const auto pp = ds.period_index(s);
        const std::string period =
            ds.period_labels().empty() ? std::to_string(pp.period) : ds.period_labels()[pp.period - 1];
        out += period + "," + std::to_string(pp.position) + "," + format_double(ds.hf()(s));
        for (int k = 0; k < ds.lf_count(); ++k) out += "," + format_double(ds.lf()(pp.period - 1, k));
        out += "\n";
    }
    return out;
}

MFDataset dataset_from_csv(const std::string& text) {
    auto lines = lines_of(text);
    if (lines.size() < 3 || lines[0].rfind("# m=", 0) != 0)
        throw DataError("dataset bundle: missing '# m=' preamble");
    int m = 0;
    if (!parse_int_cell(lines[0].substr(4), m) || m < 1) throw DataError("dataset bundle: bad m");
    const auto header = split_csv_line(lines[1]);
    if (header.size() < 3 || header[0] != "period" || header[1] != "position" || header[2] != "x")
        throw DataError("dataset bundle: bad header");
    std::vector<std::string> labels(header.begin() + 3, header.end());
    const auto K = static_cast<Eigen::Index>(labels.size());
    const std::size_t rows = lines.size() - 2;
    if (rows % static_cast<std::size_t>(m) != 0) throw DataError("dataset bundle: row count not a multiple of m");
    const auto T = static_cast<Eigen::Index>(rows / static_cast<std::size_t>(m));
    Eigen::VectorXd x(static_cast<Eigen::Index>(rows));
    Eigen::MatrixXd y(T, K);
    std::vector<std::string> period_labels;
    for (std::size_t r = 0; r < rows; ++r) {
        const auto cells = split_csv_line(lines[r + 2]);
        const std::string where = "dataset bundle line " + std::to_string(r + 3);
        if (static_cast<Eigen::Index>(cells.size()) != K + 3) throw DataError(where + ": wrong cell count");
        int pos = 0;
        if (!parse_int_cell(cells[1], pos) || pos != static_cast<int>(r % static_cast<std::size_t>(m)) + 1)
            throw DataError(where + ": positions must cycle 1..m");
        x(static_cast<Eigen::Index>(r)) = parse_value(cells[2], where);
        const auto t = static_cast<Eigen::Index>(r / static_cast<std::size_t>(m));
        if (pos == 1) {
            period_labels.push_back(cells[0]);
            for (Eigen::Index k = 0; k < K; ++k) y(t, k) = parse_value(cells[static_cast<std::size_t>(k) + 3], where);
        }
    }
    return MFDataset(std::move(x), std::move(y), m, std::move(labels), std::move(period_labels));
}

}  // namespace mfh
