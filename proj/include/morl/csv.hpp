#pragma once

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "morl/solution_set.hpp"

namespace morl {

/// Shortest round-trip decimal form of a double; locale-free and
/// deterministic, so emitted artifacts are byte-stable.
inline std::string format_double(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, ptr);
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::map<std::string, std::string> meta; // leading "# key=value" lines

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw std::runtime_error("csv: missing column '" + name + "'");
    }
    bool has_column(const std::string& name) const {
        for (const auto& h : header)
            if (h == name) return true;
        return false;
    }
};

/// Comma-separated, one header row, UTF-8, LF line endings. Lines starting
/// with '#' before the header carry provenance metadata (config hash).
inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("csv: cannot open " + path);
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!have_header && line.front() == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                std::string key = line.substr(1, eq - 1);
                while (!key.empty() && key.front() == ' ') key.erase(key.begin());
                table.meta[key] = line.substr(eq + 1);
            }
            continue;
        }
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (line.back() == ',') fields.push_back("");
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
        } else {
            table.rows.push_back(std::move(fields));
        }
    }
    if (!have_header) throw std::runtime_error("csv: " + path + " has no header row");
    return table;
}

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("csv: cannot write " + path);
    }

    void meta(const std::string& key, const std::string& value) {
        out_ << "# " << key << "=" << value << "\n";
    }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << fields[i];
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

/// One row per entry: policy_id, then one column per objective (the water
/// environment fixes "flooding,water-demand" to match the study's data files).
inline void write_solution_set_csv(const std::string& path, const SolutionSet& set,
                                   const std::vector<std::string>& objective_names,
                                   const std::string& config_hash = "") {
    CsvWriter w(path);
    if (!config_hash.empty()) w.meta("config_hash", config_hash);
    std::vector<std::string> header{"policy_id"};
    header.insert(header.end(), objective_names.begin(), objective_names.end());
    w.row(header);
    for (const auto& e : set.entries) {
        std::vector<std::string> row{e.policy_id};
        for (double v : e.value) row.push_back(format_double(v));
        w.row(row);
    }
}

inline SolutionSet read_solution_set_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    const std::size_t id_col = table.column("policy_id");
    SolutionSet set;
    for (const auto& row : table.rows) {
        ValueVector v;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i == id_col) continue;
            v.push_back(std::stod(row[i]));
        }
        set.add(row[id_col], std::move(v));
    }
    return set;
}

/// Training archive: iteration, policy_index, then objective columns.
inline void write_archive_csv(const std::string& path, const std::vector<SolutionSet>& archive,
                              const std::vector<std::string>& objective_names,
                              const std::string& config_hash = "") {
    CsvWriter w(path);
    if (!config_hash.empty()) w.meta("config_hash", config_hash);
    std::vector<std::string> header{"iteration", "policy_index"};
    header.insert(header.end(), objective_names.begin(), objective_names.end());
    w.row(header);
    for (std::size_t t = 0; t < archive.size(); ++t) {
        for (std::size_t k = 0; k < archive[t].entries.size(); ++k) {
            std::vector<std::string> row{std::to_string(t), std::to_string(k)};
            for (double v : archive[t].entries[k].value) row.push_back(format_double(v));
            w.row(row);
        }
    }
}

} // namespace morl
