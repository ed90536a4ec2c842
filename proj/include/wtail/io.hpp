#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace wtail {

// 17 significant digits: enough for exact double round-trips, so emitted
// CSV is reproducible and diffable.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Whitespace/newline-separated decimals; '#' starts a comment running to the
// end of the line. Errors cite <source>:<line>.
inline std::vector<double> parse_values(std::istream& in, const std::string& source) {
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream tokens(line);
        std::string token;
        while (tokens >> token) {
            std::size_t pos = 0;
            double v = 0.0;
            bool ok = true;
            try {
                v = std::stod(token, &pos);
            } catch (const std::exception&) {
                ok = false;
            }
            if (!ok || pos != token.size()) {
                throw std::runtime_error(source + ":" + std::to_string(line_no) +
                                         ": invalid number '" + token + "'");
            }
            if (!(v > 0.0)) {
                throw std::runtime_error(source + ":" + std::to_string(line_no) +
                                         ": nonpositive value " + token);
            }
            values.push_back(v);
        }
    }
    return values;
}

// Loads a data file of positive observations; requires at least 3 values.
inline std::vector<double> load_data_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path.string() + "'");
    }
    std::vector<double> values = parse_values(in, path.string());
    if (values.size() < 3) {
        throw std::runtime_error(path.string() + ": need at least 3 values, got " +
                                 std::to_string(values.size()));
    }
    return values;
}

}  // namespace wtail
