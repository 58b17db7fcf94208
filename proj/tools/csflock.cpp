// csflock: run, sweep and certify flocking experiments from a config file.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "csflock/config.hpp"
#include "csflock/errors.hpp"
#include "csflock/harness.hpp"
#include "csflock/theory.hpp"
#include "csflock/topology.hpp"

namespace fs = std::filesystem;
using namespace csflock;

namespace {

enum Exit { kOk = 0, kInputError = 1, kRefused = 2 };

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> steps;
    std::optional<double> threshold;
    bool explore = false;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--seed", o.seed, "Seed for random initial data");
    cmd->add_option("--steps", o.steps, "Number of simulated steps")->check(CLI::PositiveNumber);
    cmd->add_option("--threshold", o.threshold, "Near-alignment threshold on |vhat|_inf")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--explore", o.explore, "Simulate even when certificates are blocked");
}

harness::ExperimentConfig load(const std::string& path, const Overrides& o) {
    auto cfg = harness::load_config(path);
    if (o.seed) {
        if (auto* r = std::get_if<harness::RandomInit>(&cfg.init))
            r->seed = *o.seed;
        else
            std::cerr << "warning: --seed ignored, the config gives explicit initial data\n";
    }
    if (o.steps) cfg.steps = *o.steps;
    if (o.threshold) cfg.threshold = *o.threshold;
    if (o.explore) cfg.mode = harness::Mode::Exploration;
    return cfg;
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
}

void print_config_error(const std::string& path, const harness::ConfigError& e) {
    for (const auto& d : e.diagnostics()) {
        std::cerr << path;
        if (d.line) std::cerr << ':' << d.line;
        std::cerr << ": " << d.message << '\n';
    }
}

int cmd_run(const std::string& path, const Overrides& o, const fs::path& out_dir) {
    const auto cfg = load(path, o);
    const auto res = harness::run(cfg);
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
    {
        auto out = open_output(out_dir, cfg.outputs.trajectory);
        harness::write_trajectory_csv(out, cfg, res);
    }
    {
        auto out = open_output(out_dir, cfg.outputs.metrics);
        harness::write_metrics(out, cfg, res);
    }
    harness::write_metrics(std::cout, cfg, res);
    if (res.certificate) {
        auto out = open_output(out_dir, cfg.outputs.certificate);
        harness::write_certificate(out, res.certificate_inputs, *res.certificate,
                                   res.time_to_alignment.has_value());
    }
    return kOk;
}

int cmd_sweep(const std::string& path, const Overrides& o, const std::vector<std::uint64_t>& dwells,
              const std::optional<fs::path>& out_dir) {
    const auto cfg = load(path, o);
    const auto rows = harness::dwell_sweep(cfg, dwells);
    if (out_dir) {
        auto out = open_output(*out_dir, "sweep.csv");
        harness::write_sweep_csv(out, cfg, rows);
    } else {
        harness::write_sweep_csv(std::cout, cfg, rows);
    }
    return kOk;
}

int cmd_certify(const std::string& path, Overrides o) {
    o.explore = false;
    const auto cfg = load(path, o);
    const auto res = harness::run(cfg);
    harness::write_certificate(std::cout, res.certificate_inputs, *res.certificate,
                               res.time_to_alignment.has_value());
    return kOk;
}

std::string agents(const std::vector<topology::Vertex>& vs) {
    if (vs.empty()) return "none";
    std::string out;
    for (std::size_t k = 0; k < vs.size(); ++k) out += (k ? "," : "") + std::to_string(vs[k] + 1);
    return out;
}

int cmd_graphs_check(const std::string& path) {
    const auto doc = harness::load_graph_document(path);
    std::vector<bool> used(doc.graphs.size(), !doc.signal);
    if (doc.signal)
        for (auto idx : doc.signal->used_indices()) used[idx] = true;

    bool all_used_valid = true;
    for (std::size_t k = 0; k < doc.graphs.size(); ++k) {
        const auto& g = doc.graphs[k];
        const auto roots = topology::is_rooted(g);
        const auto lead = topology::is_rooted_leadership(g);
        const auto strong = topology::is_strongly_rooted(g);
        std::cout << "graph " << doc.ids[k] << (used[k] ? "" : " (unused)") << ": arcs=" << g.arc_count()
                  << " rooted=" << (roots.rooted ? "yes" : "no") << " roots=" << agents(roots.roots)
                  << " strongly_rooted=" << (strong.strongly_rooted ? "yes" : "no");
        if (lead.valid)
            std::cout << " leader=" << *lead.leader + 1 << '\n';
        else
            std::cout << " leader=none (" << lead.diagnostic << ")\n";
        if (used[k] && !lead.valid) all_used_valid = false;
    }
    std::cout << (all_used_valid ? "every scheduled graph has rooted leadership\n"
                                 : "some scheduled graph lacks rooted leadership\n");
    return all_used_valid ? kOk : kRefused;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete Cucker-Smale flocking under switching leader graphs"};
    app.require_subcommand(1);

    std::string config;
    Overrides overrides;
    std::string out_dir = ".";
    std::optional<std::string> sweep_out;
    std::vector<std::uint64_t> dwells{1, 5, 15, 35};
    std::string graph_file;

    auto* run = app.add_subcommand("run", "Simulate and write trajectory, metrics and certificate");
    run->add_option("config", config, "Experiment config file")->required()->check(CLI::ExistingFile);
    run->add_option("--out-dir", out_dir, "Directory for output files");
    add_overrides(run, overrides);

    auto* sweep = app.add_subcommand("sweep", "Re-run a cyclic signal over several dwell times");
    sweep->add_option("config", config, "Experiment config file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--dwell", dwells, "Dwell times in steps")->delimiter(',')->check(CLI::PositiveNumber);
    sweep->add_option("--out-dir", sweep_out, "Write sweep.csv here instead of stdout");
    add_overrides(sweep, overrides);

    auto* certify = app.add_subcommand("certify", "Print the flocking certificate for a config");
    certify->add_option("config", config, "Experiment config file")->required()->check(CLI::ExistingFile);
    certify->add_option("--seed", overrides.seed, "Seed for random initial data");
    certify->add_option("--steps", overrides.steps, "Steps simulated for the empirical check")
        ->check(CLI::PositiveNumber);
    certify->add_option("--threshold", overrides.threshold, "Near-alignment threshold on |vhat|_inf")
        ->check(CLI::PositiveNumber);

    auto* graphs = app.add_subcommand("graphs", "Graph utilities");
    graphs->require_subcommand(1);
    auto* check = graphs->add_subcommand("check", "Report rootedness and leaders of each graph");
    check->add_option("file", graph_file, "Graph file")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    const std::string& input = check->parsed() ? graph_file : config;
    try {
        if (run->parsed()) return cmd_run(config, overrides, out_dir);
        if (sweep->parsed())
            return cmd_sweep(config, overrides, dwells,
                             sweep_out ? std::optional<fs::path>(*sweep_out) : std::nullopt);
        if (certify->parsed()) return cmd_certify(config, overrides);
        if (check->parsed()) return cmd_graphs_check(graph_file);
    } catch (const harness::ConfigError& e) {
        print_config_error(input, e);
        return kInputError;
    } catch (const harness::RefusedError& e) {
        std::cerr << e.what() << '\n';
        return kRefused;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kOk;
}
