#pragma once

// CSV serialization for sweep and degradation results. Formatting goes
// through snprintf with fixed precisions so identical results produce
// identical bytes.

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "quplink/errors.hpp"
#include "quplink/simulator.hpp"

namespace quplink {

namespace detail {

inline std::string format_double(const char* fmt, double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), fmt, value);
    return buffer;
}

}  // namespace detail

inline constexpr const char* kSweepCsvHeader =
    "ebn0_db,bits,detector,modulation,m,k,bit_errors,bits_total,ber";

inline constexpr const char* kDegradationCsvHeader =
    "modulation,detector,bits,m,k,target_ber,degradation_db,achieved";

inline std::string sweep_csv_text(const std::vector<BerCurve>& curves, std::size_t m,
                                  std::size_t k) {
    std::ostringstream out;
    out << kSweepCsvHeader << '\n';
    for (const BerCurve& curve : curves) {
        for (const BerPoint& point : curve.points) {
            out << detail::format_double("%.6g", point.ebn0_db) << ',' << curve.bits.to_string()
                << ',' << to_string(curve.detector) << ',' << to_string(curve.modulation) << ','
                << m << ',' << k << ',' << point.bit_errors << ',' << point.bits_total << ','
                << detail::format_double("%.8e", point.ber) << '\n';
        }
    }
    return out.str();
}

struct DegradationRow {
    ModulationScheme modulation = ModulationScheme::Qpsk;
    DetectorKind detector = DetectorKind::Zf;
    BitDepth bits = BitDepth::infinite();
    std::size_t m = 0;
    std::size_t k = 0;
    double target_ber = 1e-4;
    std::optional<double> degradation_db;
};

inline std::string degradation_csv_text(const std::vector<DegradationRow>& rows) {
    std::ostringstream out;
    out << kDegradationCsvHeader << '\n';
    for (const DegradationRow& row : rows) {
        out << to_string(row.modulation) << ',' << to_string(row.detector) << ','
            << row.bits.to_string() << ',' << row.m << ',' << row.k << ','
            << detail::format_double("%.6g", row.target_ber) << ',';
        if (row.degradation_db) {
            out << detail::format_double("%.4f", *row.degradation_db) << ",1\n";
        } else {
            out << ",0\n";
        }
    }
    return out.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << text;
    if (!out) {
        throw IoError("failed while writing '" + path + "'");
    }
}

// Minimal CSV reader for our own outputs: no quoting, comma separated, first
// line is the header.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) {
                return i;
            }
        }
        throw ConfigError("csv: missing column '" + name + "'");
    }
};

inline CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    CsvTable table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t pos = line.find(',', start);
            if (pos == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, pos - start));
            start = pos + 1;
        }
        if (line_no == 1) {
            table.header = std::move(fields);
        } else {
            if (fields.size() != table.header.size()) {
                throw ConfigError(path + ":" + std::to_string(line_no) + ": expected " +
                                  std::to_string(table.header.size()) + " fields, got " +
                                  std::to_string(fields.size()));
            }
            table.rows.push_back(std::move(fields));
        }
    }
    if (table.header.empty()) {
        throw ConfigError(path + ": file is empty");
    }
    return table;
}

}  // namespace quplink
