#pragma once

#include <cctype>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

namespace trsc::detail {

// Reads comma separated rows, skipping blank lines and a leading header row
// whose first field is not numeric.
inline std::vector<std::vector<std::string>> read_csv_rows(std::istream& is)
{
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos)
            continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
        if (first) {
            first = false;
            const auto& head = fields.front();
            const auto pos = head.find_first_not_of(" \t");
            if (pos != std::string::npos
                && !(std::isdigit(static_cast<unsigned char>(head[pos])) || head[pos] == '-'
                     || head[pos] == '+' || head[pos] == '.'))
                continue;
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

inline double parse_double(const std::string& field)
{
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(field, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed number in CSV: '" + field + "'");
    }
    if (field.find_first_not_of(" \t", used) != std::string::npos)
        throw std::invalid_argument("malformed number in CSV: '" + field + "'");
    return value;
}

} // namespace trsc::detail
