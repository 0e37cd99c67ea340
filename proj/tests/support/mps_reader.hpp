#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace tnepfacts::testsupport {

// Minimal free-format MPS reader used as an independent check on the writer.
// Deliberately separate from the production code path.
struct ParsedMps {
    std::string name;
    std::string obj_name;
    std::vector<std::pair<char, std::string>> rows;  // sense L/G/E, name
    std::vector<std::string> columns;                // first-appearance order
    std::set<std::string> integer_columns;
    std::map<std::string, std::map<std::string, double>> entries;  // col -> row -> coef
    std::map<std::string, double> rhs;
    std::map<std::string, std::pair<double, double>> bounds;  // col -> lo, up

    int n_columns() const { return static_cast<int>(columns.size()); }
    int n_rows() const { return static_cast<int>(rows.size()); }
    std::pair<double, double> bound_of(const std::string& col) const;
};

ParsedMps parse_mps_text(const std::string& text);
ParsedMps parse_mps_file(const std::string& path);

}  // namespace tnepfacts::testsupport
