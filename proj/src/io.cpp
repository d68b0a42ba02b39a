#include "dms/io.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dms/errors.hpp"

namespace dms::io {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(field);
    return fields;
}

double parse_double_field(const std::string& s, long row, const std::string& col) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw schema_error(row, col, "cannot parse '" + s + "' as a number");
    }
}

std::int64_t parse_int_field(const std::string& s, long row, const std::string& col) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw schema_error(row, col, "cannot parse '" + s + "' as an integer");
    }
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw io_error("cannot open '" + path.string() + "' for writing");
    return os;
}

}  // namespace

void write_distribution_csv(std::ostream& os, const DegreeDistribution& d,
                            const std::map<std::int64_t, std::int64_t>* counts) {
    os << (counts ? "q,p,count\n" : "q,p\n");
    for (const auto& [q, p] : d.entries) {
        os << q << ',' << format_double(p);
        if (counts) {
            auto it = counts->find(q);
            os << ',' << (it == counts->end() ? 0 : it->second);
        }
        os << '\n';
    }
    if (d.tail_mass != 0.0) {
        // the remainder row: q = -1 carries the mass beyond the stored support
        os << -1 << ',' << format_double(d.tail_mass);
        if (counts) os << ",0";
        os << '\n';
    }
}

void write_distribution_csv(const std::filesystem::path& path, const DegreeDistribution& d,
                            const std::map<std::int64_t, std::int64_t>* counts) {
    auto os = open_for_write(path);
    write_distribution_csv(os, d, counts);
    if (!os) throw io_error("write failed for '" + path.string() + "'");
}

DegreeDistribution read_distribution_csv(std::istream& is,
                                         std::map<std::int64_t, double>* counts_out) {
    std::string line;
    if (!std::getline(is, line)) throw schema_error(1, "q", "missing header line");
    const std::vector<std::string> header = split_csv_line(line);

    int col_q = -1, col_p = -1, col_count = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "q") col_q = static_cast<int>(c);
        else if (header[c] == "p") col_p = static_cast<int>(c);
        else if (header[c] == "count") col_count = static_cast<int>(c);
        else throw schema_error(1, header[c], "unknown column in header");
    }
    if (col_q < 0) throw schema_error(1, "q", "missing required column");
    if (col_p < 0) throw schema_error(1, "p", "missing required column");

    DegreeDistribution d;
    long row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw schema_error(row, "q", "expected " + std::to_string(header.size()) +
                                             " fields, got " + std::to_string(fields.size()));
        const std::int64_t q = parse_int_field(fields[col_q], row, "q");
        const double p = parse_double_field(fields[col_p], row, "p");
        if (q == -1) {
            d.tail_mass = p;
        } else if (q < -1) {
            throw schema_error(row, "q", "negative degree " + std::to_string(q));
        } else {
            if (d.entries.count(q)) throw schema_error(row, "q", "duplicate degree " + std::to_string(q));
            d.entries[q] = p;
            if (counts_out && col_count >= 0)
                (*counts_out)[q] = parse_double_field(fields[col_count], row, "count");
        }
    }
    return d;
}

DegreeDistribution read_distribution_csv(const std::filesystem::path& path,
                                         std::map<std::int64_t, double>* counts_out) {
    std::ifstream is(path);
    if (!is) throw io_error("cannot open '" + path.string() + "' for reading");
    return read_distribution_csv(is, counts_out);
}

void write_convergence_csv(std::ostream& os, const ConvergenceSeries& series) {
    os << "t,p,t_delta_p\n";
    for (const ConvergencePoint& pt : series.points)
        os << pt.t << ',' << format_double(pt.p) << ',' << format_double(pt.t_delta_p) << '\n';
}

void write_first_passage_csv(std::ostream& os, const FirstPassageTable& table, std::int64_t q) {
    os << "s,f\n";
    for (const auto& [key, f] : table.rows)
        if (key.first == q) os << key.second << ',' << format_double(f) << '\n';
}

void write_edges_csv(std::ostream& os,
                     const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    os << "step,target\n";
    for (const auto& [step, target] : edges) os << step << ',' << target << '\n';
}

std::string distribution_json(const DegreeDistribution& d, const ModelParams* params) {
    nlohmann::json j;
    if (params) {
        j["params"] = {{"m", params->m}, {"A", params->A}, {"a", params->a()}};
    }
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [q, p] : d.entries) entries.push_back({q, p});
    j["entries"] = entries;
    j["tail_mass"] = d.tail_mass;
    return j.dump(2);
}

std::string comparison_report_json(const ComparisonReport& rep) {
    nlohmann::json j;
    j["left_label"] = rep.left_label;
    j["right_label"] = rep.right_label;
    j["tv"] = rep.tv;
    j["chi_square"] = {{"statistic", rep.chi2.statistic},
                       {"dof", rep.chi2.dof},
                       {"pooled_bins", rep.chi2.pooled_bins}};
    j["ks"] = rep.ks;
    j["q_range"] = {rep.q_min, rep.q_max};
    j["notes"] = rep.notes;
    return j.dump(2);
}

std::string manifest_path(const std::filesystem::path& output) {
    return output.string() + ".manifest.json";
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
    nlohmann::json j;
    j["command"] = m.command;
    j["argv"] = m.argv;
    if (m.seed) j["seed"] = *m.seed;
    j["started_at"] = m.started_at;
    j["finished_at"] = m.finished_at;
    j["version"] = m.version;
    j["outputs"] = m.outputs;
    if (!m.extra_json.empty()) j["extra"] = nlohmann::json::parse(m.extra_json);

    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        auto os = open_for_write(tmp);
        os << j.dump(2) << '\n';
        if (!os) throw io_error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw io_error("cannot move manifest into place: " + ec.message());
}

std::string iso8601_now() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

}  // namespace dms::io
