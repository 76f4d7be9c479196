// Command line front end: sweep, degradation, mscale and plot subcommands on
// top of the header library. Exit codes: 0 success, 1 bad configuration,
// 2 numerical failure, 3 I/O failure.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "quplink/io/commands.hpp"

namespace {

struct SimFlags {
    std::string config;
    std::string out = ".";
    std::string m, k, mod, detector, bits, ebn0, channels, vectors, seed;
    std::string target_ber, sigma_x2, step_rule, deterministic, threads;
};

void add_sim_options(CLI::App* cmd, SimFlags& flags) {
    cmd->add_option("--config", flags.config, "config file with key = value lines");
    cmd->add_option("--out", flags.out, "output directory")->capture_default_str();
    cmd->add_option("--m", flags.m, "antenna counts, comma separated");
    cmd->add_option("--k", flags.k, "number of single-antenna users");
    cmd->add_option("--mod", flags.mod, "modulations, comma separated: qpsk, 16qam");
    cmd->add_option("--detector", flags.detector, "detectors, comma separated: zf, mmse");
    cmd->add_option("--bits", flags.bits, "ADC resolutions, comma separated: 1..8 or inf");
    cmd->add_option("--ebn0", flags.ebn0, "Eb/N0 grid in dB: start:step:stop or comma list");
    cmd->add_option("--channels", flags.channels, "channel realizations per grid point");
    cmd->add_option("--vectors", flags.vectors, "symbol vectors per realization");
    cmd->add_option("--seed", flags.seed, "master seed for all random streams");
    cmd->add_option("--target-ber", flags.target_ber, "target bit error rate for degradation");
    cmd->add_option("--sigma-x2", flags.sigma_x2, "per-user symbol energy");
    cmd->add_option("--step-rule", flags.step_rule,
                    "quantizer step rule: fullscale4 or gaussopt");
    cmd->add_option("--deterministic", flags.deterministic,
                    "on or off; off permits early stopping");
    cmd->add_option("--threads", flags.threads, "worker threads, 0 uses all cores");
}

quplink::RunSpec build_spec(const CLI::App* cmd, const SimFlags& flags) {
    quplink::RunSpec spec;
    if (cmd->count("--config") > 0) {
        quplink::load_config_file(spec, flags.config);
    }
    const struct {
        const char* flag;
        const char* key;
        const std::string* value;
    } overrides[] = {
        {"--m", "m", &flags.m},
        {"--k", "k", &flags.k},
        {"--mod", "mod", &flags.mod},
        {"--detector", "detector", &flags.detector},
        {"--bits", "bits", &flags.bits},
        {"--ebn0", "ebn0", &flags.ebn0},
        {"--channels", "channels", &flags.channels},
        {"--vectors", "vectors", &flags.vectors},
        {"--seed", "seed", &flags.seed},
        {"--target-ber", "target_ber", &flags.target_ber},
        {"--sigma-x2", "sigma_x2", &flags.sigma_x2},
        {"--step-rule", "step_rule", &flags.step_rule},
        {"--deterministic", "deterministic", &flags.deterministic},
        {"--threads", "threads", &flags.threads},
    };
    for (const auto& entry : overrides) {
        if (cmd->count(entry.flag) > 0) {
            quplink::apply_setting(spec, entry.key, *entry.value);
        }
    }
    return spec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"BER simulator for the quantized massive MIMO uplink"};
    app.require_subcommand(1);

    SimFlags sweep_flags;
    CLI::App* sweep = app.add_subcommand("sweep", "simulate BER curves over an Eb/N0 grid");
    add_sim_options(sweep, sweep_flags);

    SimFlags degradation_flags;
    CLI::App* degradation = app.add_subcommand(
        "degradation", "extra Eb/N0 each resolution needs to hit the target BER");
    add_sim_options(degradation, degradation_flags);

    SimFlags mscale_flags;
    CLI::App* mscale =
        app.add_subcommand("mscale", "degradation across several antenna counts");
    add_sim_options(mscale, mscale_flags);

    std::vector<std::string> plot_inputs;
    std::string plot_out = ".";
    CLI::App* plot = app.add_subcommand("plot", "render result CSV files as SVG charts");
    plot->add_option("--in", plot_inputs, "result csv files")->required();
    plot->add_option("--out", plot_out, "output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        std::vector<std::string> written;
        if (sweep->parsed()) {
            written = quplink::cmd_sweep(build_spec(sweep, sweep_flags), sweep_flags.out);
        } else if (degradation->parsed()) {
            written = quplink::cmd_degradation(build_spec(degradation, degradation_flags),
                                               degradation_flags.out);
        } else if (mscale->parsed()) {
            written = quplink::cmd_mscale(build_spec(mscale, mscale_flags), mscale_flags.out);
        } else {
            written = quplink::cmd_plot(plot_inputs, plot_out);
        }
        for (const std::string& path : written) {
            std::cout << "wrote " << path << "\n";
        }
        return 0;
    } catch (const quplink::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const quplink::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
