#include "anslab/dyadic.hpp"
#include "anslab/harness.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>

using namespace anslab;

namespace {

Real parse_exponent(const std::string& s) {
    if (s == "inf") return kInf;
    return std::stod(s);
}

int do_run(const std::string& config_path) {
    FullConfig cfg = parse_config_file(config_path);
    cfg.plan.kind = "single_run";
    const ExecuteResult result = execute(cfg);
    const RunRecord& rec = result.records.front();
    std::cout << "verdict = " << rec.verdict << (rec.resumed ? " (resumed)" : "") << "\n"
              << "dir = " << rec.dir << "\n"
              << "Psi0 = " << rec.psi0 << "\n"
              << "sup_Psi = " << rec.sup_psi << "\n"
              << "sup_XY = " << rec.sup_xy << "\n"
              << "theta_final = " << rec.theta_final << "\n"
              << "radius_final = " << rec.radius_final << "\n"
              << "largeness = " << rec.largeness << "\n";
    return rec.verdict == "completed" ? 0 : 3;
}

int do_sweep(const std::string& config_path) {
    const FullConfig cfg = parse_config_file(config_path);
    const ExecuteResult result = execute(cfg);
    for (const auto& rec : result.records)
        std::cout << rec.sweep_value << "  " << rec.verdict << (rec.resumed ? " (resumed)" : "")
                  << "  " << rec.dir << "\n";
    if (!result.summary_path.empty()) std::cout << "summary = " << result.summary_path << "\n";
    return 0;
}

int do_accept(const std::string& dir) {
    const auto records = load_run_records(dir);
    const AcceptanceReport report = evaluate_acceptance(records);
    std::cout << report.to_json();
    return report.exit_code();
}

int do_norms(const std::string& snapshot_path, const std::string& spec_str) {
    auto [header, v] = read_snapshot(snapshot_path);
    std::vector<std::string> parts;
    std::string item;
    std::stringstream ss(spec_str);
    while (std::getline(ss, item, ',')) parts.push_back(item);
    if (parts.size() != 4)
        throw std::invalid_argument("--spec expects four comma-separated values: sigma,s,p,r");
    BesovSpec spec;
    spec.sigma = std::stod(parts[0]);
    spec.s = std::stod(parts[1]);
    spec.p = parse_exponent(parts[2]);
    spec.r = parse_exponent(parts[3]);
    spec.validate();

    DyadicPartition part(v.grid_ptr());
    std::printf("norm = %.12g\n", besov_norm(v, spec, part));
    for (int c = 0; c < v.dim(); ++c)
        std::printf("component_%d = %.12g\n", c, besov_norm(v[c], spec, part));
    return 0;
}

int do_largeness(const std::string& snapshot_path) {
    auto [header, v] = read_snapshot(snapshot_path);
    std::printf("largeness = %.12g\n", standard_largeness(v));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"anisotropic spectral solver and diagnostics"};
    app.require_subcommand(1);

    std::string config_path, dir, snapshot_path, spec_str;

    auto* run_cmd = app.add_subcommand("run", "integrate a single configuration");
    run_cmd->add_option("config", config_path, "config file")->required();

    auto* sweep_cmd = app.add_subcommand("sweep", "execute the [plan] section of a config");
    sweep_cmd->add_option("config", config_path, "config file")->required();

    auto* accept_cmd = app.add_subcommand("accept", "evaluate records in a plan output dir");
    accept_cmd->add_option("dir", dir, "plan output directory")->required();

    auto* norms_cmd = app.add_subcommand("norms", "Besov norms of a stored state");
    norms_cmd->add_option("snapshot", snapshot_path, "snapshot file")->required();
    norms_cmd->add_option("--spec", spec_str, "sigma,s,p,r (p and r accept 'inf')")->required();

    auto* large_cmd = app.add_subcommand("largeness", "heat-flow largeness of a stored state");
    large_cmd->add_option("snapshot", snapshot_path, "snapshot file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return do_run(config_path);
        if (sweep_cmd->parsed()) return do_sweep(config_path);
        if (accept_cmd->parsed()) return do_accept(dir);
        if (norms_cmd->parsed()) return do_norms(snapshot_path, spec_str);
        if (large_cmd->parsed()) return do_largeness(snapshot_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
