#include "corrinv/tabulated_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "corrinv/errors.hpp"

namespace corrinv {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) {
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    return fields;
}

double parse_number(const std::string& s, const std::string& where) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError(where + ": not a number: '" + s + "'");
    }
    if (used != s.size()) throw ConfigError(where + ": trailing junk in '" + s + "'");
    return v;
}

// Yields data rows, skipping blanks and # comments; validates the header.
std::vector<std::vector<double>> read_rows(std::istream& in, const std::string& name,
                                           const std::vector<std::string>& header) {
    std::string line;
    bool saw_header = false;
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        auto fields = split_csv_line(line);
        if (!saw_header) {
            if (fields != header) {
                std::string want;
                for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
                throw ConfigError(name + ": expected header '" + want + "'");
            }
            saw_header = true;
            continue;
        }
        if (fields.size() != header.size())
            throw ConfigError(name + ": line " + std::to_string(line_no) + " has " +
                              std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(header.size()));
        std::vector<double> row;
        for (const auto& f : fields)
            row.push_back(parse_number(f, name + ": line " + std::to_string(line_no)));
        rows.push_back(std::move(row));
    }
    if (!saw_header) throw ConfigError(name + ": missing header");
    return rows;
}

} // namespace

RadialTable read_radial_csv(std::istream& in, const std::string& source_name) {
    RadialTable t;
    for (const auto& row : read_rows(in, source_name, {"r", "g2"})) {
        t.r.push_back(row[0]);
        t.value.push_back(row[1]);
    }
    return t;
}

RadialTable read_radial_csv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open " + path);
    return read_radial_csv(f, path);
}

PairTable read_pair_csv(std::istream& in, const std::string& source_name) {
    std::map<double, std::map<double, double>> grid;
    for (const auto& row : read_rows(in, source_name, {"r1", "r2", "t3"}))
        grid[row[0]][row[1]] = row[2];

    PairTable t;
    if (grid.empty()) throw ConfigError(source_name + ": empty t3 table");
    for (const auto& [u, _] : grid) t.u.push_back(u);
    for (const auto& [v, _] : grid.begin()->second) t.v.push_back(v);
    for (const auto& [u, cols] : grid) {
        std::size_t j = 0;
        for (const auto& [v, val] : cols) {
            if (j >= t.v.size() || v != t.v[j])
                throw ConfigError(source_name + ": t3 rows do not form a rectangular grid" +
                                  " (row r1 = " + std::to_string(u) + ")");
            t.values.push_back(val);
            ++j;
        }
        if (j != t.v.size())
            throw ConfigError(source_name + ": t3 rows do not form a rectangular grid" +
                              " (row r1 = " + std::to_string(u) + ")");
    }
    return t;
}

PairTable read_pair_csv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open " + path);
    return read_pair_csv(f, path);
}

RadialTable tabulate_g2(const CorrelationModel& model, double r_max, int points) {
    RadialTable t;
    const double rho2 = model.density() * model.density();
    for (int i = 0; i < points; ++i) {
        const double r = r_max * i / (points - 1);
        const double pts[] = {0.0, r};
        t.r.push_back(r);
        t.value.push_back(model.rho(2, pts) / rho2);
    }
    return t;
}

PairTable tabulate_t3(const CorrelationModel& model, double span, int points) {
    PairTable t;
    const double rho3 = std::pow(model.density(), 3);
    for (int i = 0; i < points; ++i) t.u.push_back(-span + 2.0 * span * i / (points - 1));
    t.v = t.u;
    for (double u : t.u)
        for (double v : t.v) {
            const double pts[] = {u, v, 0.0};
            t.values.push_back(model.rho_t(3, pts) / rho3);
        }
    return t;
}

void write_radial_csv(std::ostream& out, const RadialTable& table) {
    out << "r,g2\n" << std::setprecision(17);
    for (std::size_t i = 0; i < table.r.size(); ++i)
        out << table.r[i] << "," << table.value[i] << "\n";
}

void write_pair_csv(std::ostream& out, const PairTable& table) {
    out << "r1,r2,t3\n" << std::setprecision(17);
    for (std::size_t i = 0; i < table.u.size(); ++i)
        for (std::size_t j = 0; j < table.v.size(); ++j)
            out << table.u[i] << "," << table.v[j] << ","
                << table.values[i * table.v.size() + j] << "\n";
}

} // namespace corrinv
