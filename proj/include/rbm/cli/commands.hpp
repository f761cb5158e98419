#pragma once

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "output.hpp"
#include "suites.hpp"

#ifndef RBM_VERSION
#define RBM_VERSION "0.0.0"
#endif
#ifndef RBM_GIT_DESCRIBE
#define RBM_GIT_DESCRIBE "unknown"
#endif

namespace rbm::cli {

namespace fs = std::filesystem;

struct CommandResult {
    std::vector<Check> checks;
    std::vector<fs::path> files;
    bool ok() const { return all_pass(checks); }
};

struct Common {
    std::uint64_t seed;
    std::size_t workers;
    fs::path out;
    double perturb;
};

inline Common read_common(RunConfig& cfg, const std::string& default_out)
{
    Common c;
    c.seed = cfg.get_u64("seed", 20240601);
    c.workers = resolve_workers(cfg.get_size("workers", 1));
    c.out = cfg.get_string("out", default_out);
    c.perturb = cfg.get_double("perturb", 1.0);
    return c;
}

inline std::string utc_timestamp()
{
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

inline void write_manifest(const fs::path& dir, const std::string& command, const RunConfig& cfg, const Common& c,
                           const CommandResult& res)
{
    nlohmann::ordered_json j;
    j["command"] = command;
    j["version"] = RBM_VERSION;
    j["git_describe"] = RBM_GIT_DESCRIBE;
    j["timestamp"] = utc_timestamp();
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["config"] = cfg.resolved();
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& ch : res.checks) checks.push_back({{"check_id", ch.id}, {"pass", ch.pass}});
    j["checks"] = checks;
    j["all_pass"] = res.ok();
    nlohmann::ordered_json files = nlohmann::ordered_json::array();
    for (const auto& f : res.files) files.push_back(f.filename().string());
    j["files"] = files;
    auto os = open_output(dir / "manifest.json");
    os << j.dump(2) << '\n';
}

inline EnsembleSpec read_ensemble(RunConfig& cfg, std::size_t default_N, const std::string& default_kind)
{
    EnsembleSpec e;
    const std::string kind = cfg.get_string("ensemble", default_kind);
    const std::size_t N = cfg.get_size("N", default_N);
    if (kind == "goe") {
        e.kind = EnsembleKind::goe;
        e.lattice = LatticeParams::with_size(N, 1.0);
    } else if (kind == "band") {
        e.kind = EnsembleKind::band;
        // W defaults to N^{(1+theta)/2}
        const double theta = cfg.get_double("theta", 0.5);
        const double W = cfg.get_double("W", std::pow(static_cast<double>(N), 0.5 * (1.0 + theta)));
        e.lattice = LatticeParams::with_size(N, W);
    } else {
        throw std::invalid_argument("ensemble must be 'goe' or 'band', got '" + kind + "'");
    }
    return e;
}

inline CommandResult cmd_spectrum(RunConfig& cfg)
{
    const Common c = read_common(cfg, "out/spectrum");
    SpectrumOptions o;
    o.ensemble = read_ensemble(cfg, 1024, "goe");
    o.samples = cfg.get_size("samples", 50);
    o.bins = cfg.get_size("bins", 200);
    o.range = cfg.get_double("range", 2.5);
    o.ks_tolerance = cfg.get_double("ks_tolerance", o.ensemble.kind == EnsembleKind::goe ? 0.02 : 0.03);
    o.seed = c.seed;
    o.workers = c.workers;
    const SpectrumRun run = spectrum_suite(o);

    CommandResult res;
    res.checks = run.checks;
    const fs::path hist = c.out / "spectrum.csv";
    {
        auto os = open_output(hist);
        os << "bin_left,bin_right,mass,semicircle_mass\n";
        const auto& h = run.histogram;
        for (std::size_t k = 0; k < h.masses.size(); ++k)
            os << fmt(h.edges[k]) << ',' << fmt(h.edges[k + 1]) << ',' << fmt(h.masses[k]) << ','
               << fmt(semicircle_cdf(h.edges[k + 1]) - semicircle_cdf(h.edges[k])) << '\n';
    }
    write_checks(c.out / "verify.csv", res.checks);
    res.files = {hist, c.out / "verify.csv"};
    write_manifest(c.out, "spectrum", cfg, c, res);
    return res;
}

inline CommandResult cmd_scan_f2(RunConfig& cfg)
{
    const Common c = read_common(cfg, "out/scan-f2");
    ScanConfig sc;
    sc.ensemble = read_ensemble(cfg, 256, "goe");
    sc.lambda0 = cfg.get_double("lambda0", 0.0);
    sc.samples = cfg.get_size("samples", 20000);
    sc.master_seed = c.seed;
    sc.workers = c.workers;
    const auto seps = cfg.get_list("separations", {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0});
    const double center = cfg.get_double("xi_center", 0.0);
    for (double d : seps) sc.xi_pairs.emplace_back(center + 0.5 * d, center - 0.5 * d);
    const bool goe = sc.ensemble.kind == EnsembleKind::goe;
    const double tol = cfg.get_double("ds_tolerance", goe ? 0.10 : 0.15);
    const ScanRun run = scan_suite(sc, tol, goe);

    CommandResult res;
    res.checks = run.checks;
    const fs::path table = c.out / "scan_f2.csv";
    {
        auto os = open_output(table);
        os << "xi1,xi2,ratio,stderr,ds_ref,flag\n";
        for (const auto& r : run.rows)
            os << fmt(r.xi1) << ',' << fmt(r.xi2) << ',' << fmt(r.ratio) << ',' << fmt(r.stderr_abs) << ','
               << fmt(r.ds_ref) << ',' << (r.sign_unresolved ? "sign_unresolved" : "ok") << '\n';
    }
    write_checks(c.out / "verify.csv", res.checks);
    res.files = {table, c.out / "verify.csv"};
    write_manifest(c.out, "scan-f2", cfg, c, res);
    return res;
}

template <typename Suite>
CommandResult run_verify(RunConfig& cfg, const std::string& name, Suite&& suite)
{
    const Common c = read_common(cfg, "out/" + name);
    CommandResult res;
    res.checks = suite(cfg, c);
    write_checks(c.out / "verify.csv", res.checks);
    res.files = {c.out / "verify.csv"};
    write_manifest(c.out, name, cfg, c, res);
    return res;
}

inline CommandResult cmd_verify_hciz(RunConfig& cfg)
{
    return run_verify(cfg, "verify-hciz", [](RunConfig& k, const Common& c) {
        HcizOptions o;
        o.sets = k.get_size("sets", 20);
        o.draws = k.get_size("draws", 1000000);
        o.u2_monte_carlo = k.get_size("u2_mc", 1) != 0;
        o.seed = c.seed;
        o.perturb = c.perturb;
        return hciz_suite(o);
    });
}

inline CommandResult cmd_verify_reduction(RunConfig& cfg)
{
    return run_verify(cfg, "verify-reduction", [](RunConfig& k, const Common& c) {
        ReductionOptions o;
        o.draws = k.get_size("draws", 10000000);
        o.seed = c.seed;
        o.perturb = c.perturb;
        return reduction_suite(o);
    });
}

inline CommandResult cmd_verify_chain(RunConfig& cfg)
{
    return run_verify(cfg, "verify-chain", [](RunConfig& k, const Common& c) {
        ChainOptions o;
        o.tail_draws = k.get_size("draws", 100000);
        o.tail_deltas = k.get_list("deltas", o.tail_deltas);
        o.tail_m = k.get_size("m", o.tail_m);
        o.tail_W = k.get_double("W", o.tail_W);
        o.seed = c.seed;
        o.perturb = c.perturb;
        return chain_suite(o);
    });
}

inline CommandResult cmd_transfer_check(RunConfig& cfg)
{
    return run_verify(cfg, "transfer-check", [](RunConfig& k, const Common& c) {
        TransferOptions o;
        if (k.has("N")) {
            o.points.clear();
            const std::size_t N = k.get_size("N", 3);
            const double W = k.get_double("W", 1.0);
            for (double l : k.get_list("lambda0", {0.0, 1.0})) o.points.push_back({N, W, l});
        }
        o.mc_samples = k.get_size("mc_samples", 1000000);
        o.grid.panels = k.get_size("panels", o.grid.panels);
        o.grid.order = k.get_size("order", o.grid.order);
        o.grid.radius = k.get_double("radius", 0.0);
        o.seed = c.seed;
        o.workers = c.workers;
        o.perturb = c.perturb;
        return transfer_suite(o);
    });
}

// Runs every command with its defaults into subdirectories of `out`.
inline CommandResult cmd_report(RunConfig& cfg)
{
    const Common c = read_common(cfg, "out/report");
    CommandResult res;
    auto sub = [&](const std::string& name, const std::vector<std::string>& extra, auto&& fn) {
        RunConfig k;
        k.set("seed", std::to_string(c.seed));
        k.set("workers", std::to_string(c.workers));
        k.set("perturb", cfg.get_string("perturb", "1"));
        k.set("out", (c.out / name).string());
        for (const auto& kv : extra) k.set_assignment(kv);
        const CommandResult r = fn(k);
        for (auto ch : r.checks) {
            ch.id = name + "/" + ch.id;
            res.checks.push_back(ch);
        }
        for (const auto& f : r.files) res.files.push_back(fs::path(name) / f.filename());
    };
    sub("spectrum-goe", {"ensemble=goe"}, cmd_spectrum);
    sub("spectrum-band", {"ensemble=band", "W=64"}, cmd_spectrum);
    sub("scan-f2-goe", {"ensemble=goe"}, cmd_scan_f2);
    sub("scan-f2-band", {"ensemble=band", "W=64"}, cmd_scan_f2);
    sub("verify-hciz", {}, cmd_verify_hciz);
    sub("verify-reduction", {}, cmd_verify_reduction);
    sub("verify-chain", {}, cmd_verify_chain);
    sub("transfer-check", {}, cmd_transfer_check);
    write_checks(c.out / "verify.csv", res.checks);
    res.files.push_back(c.out / "verify.csv");
    write_manifest(c.out, "report", cfg, c, res);
    return res;
}

} // namespace rbm::cli
