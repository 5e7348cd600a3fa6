#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "hadlab/errors.hpp"

namespace hadlab {

/// Round-trip-safe formatting: 17 significant digits, '.' decimal separator
/// (snprintf with the C locale semantics of %g).
inline std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Deterministic CSV writer: header row then numeric rows.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header)
        : out_(path) {
        if (!out_) throw config_error("cannot open CSV output: " + path);
        for (std::size_t i = 0; i < header.size(); ++i)
            out_ << (i ? "," : "") << header[i];
        out_ << "\n";
        columns_ = header.size();
    }

    void row(const std::vector<double>& values) {
        if (values.size() != columns_)
            throw std::invalid_argument("CSV row width differs from the header");
        for (std::size_t i = 0; i < values.size(); ++i)
            out_ << (i ? "," : "") << format_value(values[i]);
        out_ << "\n";
    }

private:
    std::ofstream out_;
    std::size_t columns_ = 0;
};

} // namespace hadlab
