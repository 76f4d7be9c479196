#pragma once

// The four operations behind the CLI subcommands. Each one validates the run
// description, simulates (or reads results back), writes files under the
// output directory and returns the list of paths it wrote.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "quplink/io/csv.hpp"
#include "quplink/io/run_config.hpp"
#include "quplink/io/svg.hpp"
#include "quplink/simulator.hpp"

namespace quplink {

namespace detail {

inline std::string ensure_out_dir(const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());
    }
    return out_dir;
}

inline std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

}  // namespace detail

inline std::vector<std::string> cmd_sweep(const RunSpec& spec, const std::string& out_dir) {
    validate_run_spec(spec);
    detail::ensure_out_dir(out_dir);
    const ExecutionPolicy exec = make_execution_policy(spec);
    std::vector<std::string> written;
    for (const std::size_t m : spec.m_list) {
        for (const ModulationScheme mod : spec.modulations) {
            for (const DetectorKind det : spec.detectors) {
                const SimConfig cfg = make_sim_config(spec, m, mod, det);
                const auto curves = run_sweep_multi(cfg, spec.bits_list, exec);
                const std::string name = "sweep_" + to_string(mod) + "_" + to_string(det) + "_m" +
                                         std::to_string(m) + ".csv";
                const std::string path = detail::join_path(out_dir, name);
                write_text_file(path, sweep_csv_text(curves, m, spec.k_users));
                written.push_back(path);
            }
        }
    }
    return written;
}

// Degradation of every requested resolution against the unquantized curve of
// the same configuration, measured at the target BER.
inline std::vector<DegradationRow> run_degradation_study(const RunSpec& spec) {
    validate_run_spec(spec);
    const ExecutionPolicy exec = make_execution_policy(spec);

    std::vector<BitDepth> depths = spec.bits_list;
    bool has_reference = false;
    for (const BitDepth depth : depths) {
        has_reference = has_reference || !depth.is_finite();
    }
    if (!has_reference) {
        depths.push_back(BitDepth::infinite());
    }

    std::vector<DegradationRow> rows;
    for (const std::size_t m : spec.m_list) {
        for (const ModulationScheme mod : spec.modulations) {
            for (const DetectorKind det : spec.detectors) {
                const SimConfig cfg = make_sim_config(spec, m, mod, det);
                const auto curves = run_sweep_multi(cfg, depths, exec);
                const BerCurve* reference = nullptr;
                for (const BerCurve& curve : curves) {
                    if (!curve.bits.is_finite()) {
                        reference = &curve;
                    }
                }
                for (const BitDepth requested : spec.bits_list) {
                    const BerCurve* test = nullptr;
                    for (const BerCurve& curve : curves) {
                        if (curve.bits == requested) {
                            test = &curve;
                        }
                    }
                    DegradationRow row;
                    row.modulation = mod;
                    row.detector = det;
                    row.bits = requested;
                    row.m = m;
                    row.k = spec.k_users;
                    row.target_ber = spec.target_ber;
                    row.degradation_db = ber_degradation(*test, *reference, spec.target_ber);
                    rows.push_back(row);
                }
            }
        }
    }
    return rows;
}

inline std::vector<std::string> cmd_degradation(const RunSpec& spec, const std::string& out_dir) {
    const auto rows = run_degradation_study(spec);
    detail::ensure_out_dir(out_dir);
    const std::string path = detail::join_path(out_dir, "degradation.csv");
    write_text_file(path, degradation_csv_text(rows));
    return {path};
}

// Same study, but the antenna-count axis is the point: how resolution trades
// against array size. The file keeps the degradation schema.
inline std::vector<std::string> cmd_mscale(const RunSpec& spec, const std::string& out_dir) {
    if (spec.m_list.size() < 2) {
        throw ConfigError("m: antenna scaling needs at least two antenna counts");
    }
    const auto rows = run_degradation_study(spec);
    detail::ensure_out_dir(out_dir);
    const std::string path = detail::join_path(out_dir, "mscale.csv");
    write_text_file(path, degradation_csv_text(rows));
    return {path};
}

namespace detail {

inline std::string file_stem(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

inline std::string plot_sweep_csv(const CsvTable& table, const std::string& input,
                                  const std::string& out_dir) {
    const std::size_t c_db = table.column("ebn0_db");
    const std::size_t c_bits = table.column("bits");
    const std::size_t c_det = table.column("detector");
    const std::size_t c_mod = table.column("modulation");
    const std::size_t c_m = table.column("m");
    const std::size_t c_ber = table.column("ber");

    std::vector<std::string> order;
    std::map<std::string, PlotSeries> grouped;
    for (const auto& row : table.rows) {
        const std::string key =
            row[c_mod] + " " + row[c_det] + " m=" + row[c_m] + " b=" + row[c_bits];
        if (grouped.find(key) == grouped.end()) {
            grouped[key] = PlotSeries{key, {}};
            order.push_back(key);
        }
        grouped[key].points.push_back(
            {parse_double("ebn0_db", row[c_db]), parse_double("ber", row[c_ber])});
    }
    std::vector<PlotSeries> series;
    for (const std::string& key : order) {
        series.push_back(grouped[key]);
    }
    const std::string path = join_path(out_dir, file_stem(input) + ".svg");
    write_text_file(path, render_ber_chart_svg(file_stem(input), series));
    return path;
}

inline std::string plot_degradation_csv(const CsvTable& table, const std::string& input,
                                        const std::string& out_dir) {
    const std::size_t c_mod = table.column("modulation");
    const std::size_t c_det = table.column("detector");
    const std::size_t c_bits = table.column("bits");
    const std::size_t c_m = table.column("m");
    const std::size_t c_deg = table.column("degradation_db");
    const std::size_t c_ach = table.column("achieved");

    std::vector<std::string> m_values;
    for (const auto& row : table.rows) {
        bool seen = false;
        for (const std::string& m : m_values) {
            seen = seen || (m == row[c_m]);
        }
        if (!seen) {
            m_values.push_back(row[c_m]);
        }
    }
    const bool against_m = m_values.size() > 1;

    std::vector<std::string> order;
    std::map<std::string, PlotSeries> grouped;
    for (const auto& row : table.rows) {
        if (row[c_ach] != "1") {
            continue;  // the target was never reached; nothing to place
        }
        std::string key;
        double x = 0.0;
        if (against_m) {
            if (row[c_bits] == "inf") {
                continue;
            }
            key = row[c_mod] + " " + row[c_det] + " b=" + row[c_bits];
            x = parse_double("m", row[c_m]);
        } else {
            if (row[c_bits] == "inf") {
                continue;
            }
            key = row[c_mod] + " " + row[c_det];
            x = parse_double("bits", row[c_bits]);
        }
        if (grouped.find(key) == grouped.end()) {
            grouped[key] = PlotSeries{key, {}};
            order.push_back(key);
        }
        grouped[key].points.push_back({x, parse_double("degradation_db", row[c_deg])});
    }
    std::vector<PlotSeries> series;
    for (const std::string& key : order) {
        series.push_back(grouped[key]);
    }
    const std::string path = join_path(out_dir, file_stem(input) + ".svg");
    write_text_file(path, render_degradation_chart_svg(
                              file_stem(input), against_m ? "antennas (m)" : "ADC bits", series));
    return path;
}

}  // namespace detail

inline std::vector<std::string> cmd_plot(const std::vector<std::string>& inputs,
                                         const std::string& out_dir) {
    if (inputs.empty()) {
        throw ConfigError("plot: no input files given");
    }
    detail::ensure_out_dir(out_dir);
    std::vector<std::string> written;
    for (const std::string& input : inputs) {
        const CsvTable table = read_csv_file(input);
        std::string header;
        for (std::size_t i = 0; i < table.header.size(); ++i) {
            header += (i ? "," : "") + table.header[i];
        }
        if (header == kSweepCsvHeader) {
            written.push_back(detail::plot_sweep_csv(table, input, out_dir));
        } else if (header == kDegradationCsvHeader) {
            written.push_back(detail::plot_degradation_csv(table, input, out_dir));
        } else {
            throw ConfigError(input + ": unrecognized csv header '" + header + "'");
        }
    }
    return written;
}

}  // namespace quplink
