#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace apch::csv {

/// Input data schema for the CLI: header row required, columns t and y, with
/// optional sigma2_true and regime. Unknown columns are rejected so schema
/// mistakes surface immediately.
struct DataSet {
    std::vector<std::string> t;
    std::vector<double> y;
    std::vector<double> sigma2_true; // empty when the column is absent
    std::vector<int> regime;         // empty when the column is absent

    bool has_truth() const { return !sigma2_true.empty(); }
    std::size_t size() const { return y.size(); }
};

/// Raised on malformed input; the message names the column and row.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

DataSet read_series(const std::string& path);

/// Writes t,y[,sigma2_true][,regime] preceded by '#' comment lines.
void write_series(const std::string& path, const std::vector<std::string>& comments,
                  const DataSet& data);

std::string format_double(double v);

} // namespace apch::csv
