#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <rbm/cli/commands.hpp>

namespace {

struct Option {
    const char* key;
    const char* help;
};

const std::vector<Option> kOptions = {
    {"seed", "master seed"},
    {"workers", "worker threads (RMT_THREADS overrides)"},
    {"out", "output directory"},
    {"ensemble", "goe or band"},
    {"N", "matrix size / chain size"},
    {"W", "bandwidth"},
    {"theta", "band exponent, W = N^((1+theta)/2) when W is unset"},
    {"lambda0", "reference energy (transfer-check: comma list)"},
    {"xi_center", "centre of the xi pairs"},
    {"separations", "comma list of xi1 - xi2"},
    {"samples", "Monte Carlo sample count"},
    {"bins", "histogram bins"},
    {"range", "histogram half range"},
    {"ks_tolerance", "semicircle KS tolerance"},
    {"ds_tolerance", "DS deviation tolerance"},
    {"draws", "Monte Carlo draws"},
    {"sets", "random parameter sets"},
    {"u2_mc", "also run the U(2) Monte Carlo (0/1)"},
    {"deltas", "tail thresholds (comma list)"},
    {"m", "chain length for the tail test"},
    {"mc_samples", "Monte Carlo samples for transfer-check"},
    {"panels", "quadrature panels"},
    {"order", "Gauss-Legendre order per panel"},
    {"radius", "quadrature truncation radius"},
    {"perturb", "scale factor on reference values (negative control)"},
};

} // namespace

int main(int argc, char** argv)
{
    using namespace rbm::cli;
    CLI::App app{"Band random matrix moments and identity checks"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::function<CommandResult(RunConfig&)>>> commands = {
        {"spectrum", cmd_spectrum},
        {"scan-f2", cmd_scan_f2},
        {"verify-hciz", cmd_verify_hciz},
        {"verify-chain", cmd_verify_chain},
        {"verify-reduction", cmd_verify_reduction},
        {"transfer-check", cmd_transfer_check},
        {"report", cmd_report},
    };

    std::string config_file;
    std::vector<std::string> assignments;
    std::map<std::string, std::string> flags;
    std::vector<std::pair<CLI::App*, std::function<CommandResult(RunConfig&)>>> subs;
    for (const auto& [name, fn] : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("-c,--config", config_file, "key = value config file");
        sub->add_option("--set", assignments, "key=value override (repeatable)");
        for (const auto& o : kOptions) sub->add_option(std::string("--") + o.key, flags[o.key], o.help);
        subs.emplace_back(sub, fn);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        for (const auto& [sub, fn] : subs) {
            if (!sub->parsed()) continue;
            RunConfig cfg;
            if (!config_file.empty()) cfg.load_file(config_file);
            for (const auto& kv : assignments) cfg.set_assignment(kv);
            for (const auto& o : kOptions)
                if (sub->count(std::string("--") + o.key) > 0) cfg.set(o.key, flags[o.key]);
            const CommandResult res = fn(cfg);
            for (const auto& c : res.checks)
                std::cout << (c.pass ? "PASS " : "FAIL ") << c.id << " measured=" << fmt(c.measured)
                          << " tolerance=" << fmt(c.tolerance) << '\n';
            for (const auto& f : res.files) std::cout << "wrote " << f.string() << '\n';
            return res.ok() ? EXIT_SUCCESS : EXIT_FAILURE;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return EXIT_FAILURE;
}
