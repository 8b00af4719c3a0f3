#include "apch/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace apch::csv {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    out.push_back(field);
    return out;
}

double parse_number(const std::string& s, const std::string& column, std::size_t row) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = begin + s.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw DataError("column '" + column + "' row " + std::to_string(row) +
                        ": bad number '" + s + "'");
    return v;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

DataSet read_series(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open data file: " + path);

    std::string line;
    std::size_t row = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line[0] == '#') continue;
        header = split_fields(line);
        break;
    }
    if (header.empty()) throw DataError(path + ": missing header row");

    int col_t = -1, col_y = -1, col_truth = -1, col_regime = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string& name = header[i];
        if (name == "t")
            col_t = static_cast<int>(i);
        else if (name == "y")
            col_y = static_cast<int>(i);
        else if (name == "sigma2_true")
            col_truth = static_cast<int>(i);
        else if (name == "regime")
            col_regime = static_cast<int>(i);
        else
            throw DataError(path + ": unknown column '" + name + "'");
    }
    if (col_t < 0 || col_y < 0) throw DataError(path + ": columns t and y are required");

    DataSet data;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line[0] == '#') continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != header.size())
            throw DataError(path + ": row " + std::to_string(row) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(header.size()));
        data.t.push_back(fields[col_t]);
        data.y.push_back(parse_number(fields[col_y], "y", row));
        if (col_truth >= 0)
            data.sigma2_true.push_back(parse_number(fields[col_truth], "sigma2_true", row));
        if (col_regime >= 0)
            data.regime.push_back(
                static_cast<int>(parse_number(fields[col_regime], "regime", row)));
    }
    if (data.y.empty()) throw DataError(path + ": no data rows");
    return data;
}

void write_series(const std::string& path, const std::vector<std::string>& comments,
                  const DataSet& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open output file: " + path);
    for (const std::string& c : comments) out << "# " << c << "\n";
    out << "t,y";
    if (!data.sigma2_true.empty()) out << ",sigma2_true";
    if (!data.regime.empty()) out << ",regime";
    out << "\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        out << data.t[i] << "," << format_double(data.y[i]);
        if (!data.sigma2_true.empty()) out << "," << format_double(data.sigma2_true[i]);
        if (!data.regime.empty()) out << "," << data.regime[i];
        out << "\n";
    }
}

} // namespace apch::csv
