#pragma once

// Run description shared by the CLI and the command layer: which experiment
// axes to sweep, how much work to spend, and where randomness comes from.
// Values arrive as key=value text from a config file or command-line flags,
// funnelled through one parser so diagnostics are uniform.

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "quplink/detector.hpp"
#include "quplink/errors.hpp"
#include "quplink/modem.hpp"
#include "quplink/quantizer.hpp"
#include "quplink/simulator.hpp"

namespace quplink {

struct RunSpec {
    std::vector<std::size_t> m_list = {100};
    std::size_t k_users = 10;
    std::vector<ModulationScheme> modulations = {ModulationScheme::Qpsk};
    std::vector<DetectorKind> detectors = {DetectorKind::Zf};
    std::vector<BitDepth> bits_list = {BitDepth::infinite()};
    std::vector<double> ebn0_grid_db = {-18, -17, -16, -15, -14, -13, -12, -11, -10, -9, -8};
    std::size_t n_channel_realizations = 100;
    std::size_t n_vectors_per_realization = 2000;
    std::uint64_t master_seed = 1;
    double target_ber = 1e-4;
    double sigma_x2 = 1.0;
    StepRule step_rule = StepRule::FullScaleFourSigma;
    bool deterministic = true;
    unsigned n_threads = 0;
};

namespace detail {

inline double parse_double(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return value;
    } catch (const std::exception&) {
        throw ConfigError(key + ": '" + text + "' is not a number");
    }
}

inline std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const long long value = std::stoll(text, &used);
        if (used != text.size() || value < 0) {
            throw std::invalid_argument(text);
        }
        return static_cast<std::uint64_t>(value);
    } catch (const std::exception&) {
        throw ConfigError(key + ": '" + text + "' is not a non-negative integer");
    }
}

inline std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

inline std::string trim(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return "";
    }
    const auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

}  // namespace detail

// Grid syntax: either "start:step:stop" (inclusive) or a comma list of dB
// values.
inline std::vector<double> parse_ebn0_grid(const std::string& text) {
    std::vector<double> grid;
    if (text.find(':') != std::string::npos) {
        const auto parts = detail::split(text, ':');
        if (parts.size() != 3) {
            throw ConfigError("ebn0: range '" + text + "' must be start:step:stop");
        }
        const double start = detail::parse_double("ebn0", detail::trim(parts[0]));
        const double step = detail::parse_double("ebn0", detail::trim(parts[1]));
        const double stop = detail::parse_double("ebn0", detail::trim(parts[2]));
        if (!(step > 0.0)) {
            throw ConfigError("ebn0: range step must be positive");
        }
        if (stop < start) {
            throw ConfigError("ebn0: range stop is below start");
        }
        const long long count = static_cast<long long>((stop - start) / step + 1e-9) + 1;
        grid.reserve(static_cast<std::size_t>(count));
        for (long long i = 0; i < count; ++i) {
            grid.push_back(start + static_cast<double>(i) * step);
        }
        return grid;
    }
    for (const std::string& raw : detail::split(text, ',')) {
        grid.push_back(detail::parse_double("ebn0", detail::trim(raw)));
    }
    return grid;
}

// Applies one key=value setting. Both the config-file loader and the CLI
// flags go through here.
inline void apply_setting(RunSpec& spec, const std::string& key, const std::string& value) {
    const std::string v = detail::trim(value);
    if (key == "m") {
        spec.m_list.clear();
        for (const std::string& raw : detail::split(v, ',')) {
            spec.m_list.push_back(
                static_cast<std::size_t>(detail::parse_unsigned("m", detail::trim(raw))));
        }
    } else if (key == "k") {
        spec.k_users = static_cast<std::size_t>(detail::parse_unsigned("k", v));
    } else if (key == "mod") {
        spec.modulations.clear();
        for (const std::string& raw : detail::split(v, ',')) {
            spec.modulations.push_back(parse_modulation(detail::trim(raw)));
        }
    } else if (key == "detector") {
        spec.detectors.clear();
        for (const std::string& raw : detail::split(v, ',')) {
            spec.detectors.push_back(parse_detector(detail::trim(raw)));
        }
    } else if (key == "bits") {
        spec.bits_list.clear();
        for (const std::string& raw : detail::split(v, ',')) {
            spec.bits_list.push_back(BitDepth::parse(detail::trim(raw)));
        }
    } else if (key == "ebn0") {
        spec.ebn0_grid_db = parse_ebn0_grid(v);
    } else if (key == "channels") {
        spec.n_channel_realizations =
            static_cast<std::size_t>(detail::parse_unsigned("channels", v));
    } else if (key == "vectors") {
        spec.n_vectors_per_realization =
            static_cast<std::size_t>(detail::parse_unsigned("vectors", v));
    } else if (key == "seed") {
        spec.master_seed = detail::parse_unsigned("seed", v);
    } else if (key == "target_ber") {
        spec.target_ber = detail::parse_double("target_ber", v);
        if (!(spec.target_ber > 0.0) || spec.target_ber >= 1.0) {
            throw ConfigError("target_ber: must be in (0, 1)");
        }
    } else if (key == "sigma_x2") {
        spec.sigma_x2 = detail::parse_double("sigma_x2", v);
    } else if (key == "step_rule") {
        spec.step_rule = parse_step_rule(v);
    } else if (key == "deterministic") {
        if (v == "on") {
            spec.deterministic = true;
        } else if (v == "off") {
            spec.deterministic = false;
        } else {
            throw ConfigError("deterministic: expected on or off, got '" + v + "'");
        }
    } else if (key == "threads") {
        spec.n_threads = static_cast<unsigned>(detail::parse_unsigned("threads", v));
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

// key = value lines with # comments; [section] headers are accepted and
// ignored so hand-edited files can stay organized. Errors cite file and line.
inline void load_config_file(RunSpec& spec, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file '" + path + "'");
    }
    std::string line;
    int line_no = 0;
    std::vector<std::string> seen_keys;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        const std::string text = detail::trim(line);
        if (text.empty()) {
            continue;
        }
        if (text.front() == '[' && text.back() == ']') {
            continue;
        }
        const std::size_t eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(line_no) +
                              ": expected key = value, got '" + text + "'");
        }
        const std::string key = detail::trim(text.substr(0, eq));
        const std::string value = detail::trim(text.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
        }
        for (const std::string& prior : seen_keys) {
            if (prior == key) {
                throw ConfigError(path + ":" + std::to_string(line_no) + ": duplicate key '" +
                                  key + "'");
            }
        }
        seen_keys.push_back(key);
        try {
            apply_setting(spec, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

// Checks the axes that the per-run validate_config cannot see.
inline void validate_run_spec(const RunSpec& spec) {
    if (spec.m_list.empty()) {
        throw ConfigError("m: list is empty");
    }
    if (spec.modulations.empty()) {
        throw ConfigError("mod: list is empty");
    }
    if (spec.detectors.empty()) {
        throw ConfigError("detector: list is empty");
    }
    if (spec.bits_list.empty()) {
        throw ConfigError("bits: list is empty");
    }
    SimConfig probe;
    probe.k_users = spec.k_users;
    probe.sigma_x2 = spec.sigma_x2;
    probe.ebn0_grid_db = spec.ebn0_grid_db;
    probe.n_channel_realizations = spec.n_channel_realizations;
    probe.n_vectors_per_realization = spec.n_vectors_per_realization;
    for (const std::size_t m : spec.m_list) {
        probe.m_antennas = m;
        validate_config(probe);
    }
}

inline SimConfig make_sim_config(const RunSpec& spec, std::size_t m, ModulationScheme mod,
                                 DetectorKind det) {
    SimConfig cfg;
    cfg.m_antennas = m;
    cfg.k_users = spec.k_users;
    cfg.modulation = mod;
    cfg.detector = det;
    cfg.step_rule = spec.step_rule;
    cfg.sigma_x2 = spec.sigma_x2;
    cfg.ebn0_grid_db = spec.ebn0_grid_db;
    cfg.n_channel_realizations = spec.n_channel_realizations;
    cfg.n_vectors_per_realization = spec.n_vectors_per_realization;
    cfg.master_seed = spec.master_seed;
    return cfg;
}

inline ExecutionPolicy make_execution_policy(const RunSpec& spec) {
    ExecutionPolicy exec;
    exec.n_threads = spec.n_threads;
    exec.deterministic = spec.deterministic;
    return exec;
}

}  // namespace quplink
