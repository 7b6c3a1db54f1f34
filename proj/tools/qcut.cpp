// Copyright 2026 The qcut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: cut, run, merge, sample, bench and cost.

#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcut/pipeline.hpp"

namespace {

using qcut::Json;
using qcut::RunConfig;

/// Binds flags to a scratch config and remembers how to copy the ones the
/// user actually passed, so flags override values from --config.
class FlagSet {
public:
    template <typename Accessor>
    CLI::Option *add(CLI::App *app, const std::string &flag, Accessor acc, const std::string &desc) {
        auto *o = app->add_option(flag, acc(scratch_), desc)->capture_default_str();
        appliers_.push_back([o, acc, this](RunConfig &dst) {
            if (o->count() > 0) {
                acc(dst) = acc(scratch_);
            }
        });
        return o;
    }

    RunConfig resolve(const std::string &config_path) {
        RunConfig cfg;
        if (!config_path.empty()) {
            qcut::apply_json(cfg, Json::parse(qcut::read_file(config_path)));
        }
        for (const auto &f : appliers_) {
            f(cfg);
        }
        return cfg;
    }

private:
    RunConfig scratch_;
    std::vector<std::function<void(RunConfig &)>> appliers_;
};

void add_source(FlagSet &fs, CLI::App *app) {
    fs.add(app, "circuit", [](RunConfig &c) -> auto & { return c.circuit.path; }, "Circuit file in the text format");
    fs.add(app, "--bench", [](RunConfig &c) -> auto & { return c.circuit.generator; },
           "Generator: bv, qaoa-regular, qaoa-erdos, supremacy-grid, aqft, planted3");
    fs.add(app, "--n", [](RunConfig &c) -> auto & { return c.circuit.n; }, "Generator qubit count");
    fs.add(app, "--secret", [](RunConfig &c) -> auto & { return c.circuit.secret; }, "BV secret bitstring");
    fs.add(app, "--bench-seed", [](RunConfig &c) -> auto & { return c.circuit.seed; }, "Generator seed");
    fs.add(app, "--rows", [](RunConfig &c) -> auto & { return c.circuit.rows; }, "Grid rows");
    fs.add(app, "--cols", [](RunConfig &c) -> auto & { return c.circuit.cols; }, "Grid columns");
    fs.add(app, "--cycles", [](RunConfig &c) -> auto & { return c.circuit.cycles; }, "Grid cz cycles");
    fs.add(app, "--rounds", [](RunConfig &c) -> auto & { return c.circuit.rounds; }, "QAOA rounds");
    fs.add(app, "--edge-prob", [](RunConfig &c) -> auto & { return c.circuit.edge_prob; }, "Erdos-Renyi edge probability");
    fs.add(app, "--degree", [](RunConfig &c) -> auto & { return c.circuit.degree; }, "AQFT approximation degree");
}

void add_cut_flags(FlagSet &fs, CLI::App *app) {
    fs.add(app, "--alpha", [](RunConfig &c) -> auto & { return c.alpha; }, "Max load factor per subcircuit");
    fs.add(app, "--max-subcircuits", [](RunConfig &c) -> auto & { return c.max_subcircuits; },
           "Largest subcircuit count tried");
    fs.add(app, "--subcircuits", [](RunConfig &c) -> auto & { return c.subcircuits; },
           "Fixed subcircuit count (0 = search 2..max)");
    fs.add(app, "--solver-timeout-s", [](RunConfig &c) -> auto & { return c.solver_timeout_s; },
           "Branch-and-bound time limit per subcircuit count");
    fs.add(app, "--degree-cap", [](RunConfig &c) -> auto & { return c.degree_cap; }, "Max compute-graph degree");
    fs.add(app, "--width-cap", [](RunConfig &c) -> auto & { return c.width_cap; }, "Simulator qubit cap");
    fs.add(app, "--memory-limit-values", [](RunConfig &c) -> auto & { return c.memory_limit; },
           "Contraction memory limit in stored values");
}

void add_sampling_flags(FlagSet &fs, CLI::App *app) {
    fs.add(app, "--sampler", [](RunConfig &c) -> auto & { return c.sampler; }, "none, uniform, essential or optimal");
    fs.add(app, "--samples", [](RunConfig &c) -> auto & { return c.samples; }, "Sample count c");
    fs.add(app, "--seed", [](RunConfig &c) -> auto & { return c.seed; }, "Sampling seed");
    fs.add(app, "--trials", [](RunConfig &c) -> auto & { return c.trials; }, "Independent seeded trials");
    fs.add(app, "--narrow", [](RunConfig &c) -> auto & { return c.narrow; }, "Narrow subcircuit for essential sampling");
}

void add_merge_flags(FlagSet &fs, CLI::App *app) {
    fs.add(app, "--max-bins", [](RunConfig &c) -> auto & { return c.max_bins; }, "Bins per recursion M");
    fs.add(app, "--top-R", [](RunConfig &c) -> auto & { return c.top_r; }, "Length R of the candidate list");
    fs.add(app, "--max-recursions", [](RunConfig &c) -> auto & { return c.max_recursions; }, "Recursion cap");
    fs.add(app, "--solution-threshold", [](RunConfig &c) -> auto & { return c.solution_threshold; },
           "Probability floor for reported solutions");
    fs.add(app, "--subset", [](RunConfig &c) -> auto & { return c.subset_states; },
           "Bitstrings to evaluate in one recursion (subset mode)")
        ->delimiter(',');
}

void emit(const Json &report, const std::string &path) {
    const auto text = report.dump(2);
    if (path.empty()) {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw qcut::Error("cannot write '" + path + "'");
    }
    out << text << '\n';
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"qcut: circuit cutting, reconstruction and states merging"};
    app.require_subcommand(1);
    FlagSet fs;
    std::string config_path;
    std::string output;

    auto *cut = app.add_subcommand("cut", "Find cut locations and report the cut solution");
    auto *run = app.add_subcommand("run", "Cut, simulate and reconstruct");
    auto *merge = app.add_subcommand("merge", "States-merging search for solution states");
    auto *sample = app.add_subcommand("sample", "Importance-sampled reconstruction with error statistics");
    for (auto *sc : {cut, run, merge, sample}) {
        add_source(fs, sc);
        add_cut_flags(fs, sc);
        sc->add_option("--config", config_path, "JSON config file; explicit flags override it");
        sc->add_option("-o,--output", output, "Report path (default stdout)");
    }
    fs.add(run, "--mode", [](RunConfig &c) -> auto & { return c.mode; }, "full, merge or subset");
    fs.add(run, "--probabilities-csv", [](RunConfig &c) -> auto & { return c.probabilities_csv; },
           "Also write the reconstructed distribution as CSV");
    fs.add(run, "--top-states", [](RunConfig &c) -> auto & { return c.top_states; }, "States listed in the report");
    add_sampling_flags(fs, run);
    add_merge_flags(fs, run);
    add_merge_flags(fs, merge);
    add_sampling_flags(fs, sample);

    auto *bench = app.add_subcommand("bench", "Print a generated benchmark circuit");
    qcut::CircuitSource src;
    bench->add_option("kind", src.generator, "bv, qaoa-regular, qaoa-erdos, supremacy-grid, aqft, planted3")
        ->required();
    bench->add_option("--n", src.n, "Qubit count")->capture_default_str();
    bench->add_option("--secret", src.secret, "BV secret bitstring");
    bench->add_option("--seed", src.seed, "Generator seed")->capture_default_str();
    bench->add_option("--rows", src.rows, "Grid rows")->capture_default_str();
    bench->add_option("--cols", src.cols, "Grid columns")->capture_default_str();
    bench->add_option("--cycles", src.cycles, "Grid cz cycles")->capture_default_str();
    bench->add_option("--rounds", src.rounds, "QAOA rounds")->capture_default_str();
    bench->add_option("--edge-prob", src.edge_prob, "Erdos-Renyi edge probability")->capture_default_str();
    bench->add_option("--degree", src.degree, "AQFT approximation degree")->capture_default_str();
    bench->add_option("-o,--output", output, "Circuit path (default stdout)");

    auto *cost = app.add_subcommand("cost", "Cost model of a compute-graph spec file");
    std::string graph_path;
    std::vector<std::size_t> order;
    std::uint64_t memory_limit = qcut::kDefaultMemoryLimit;
    cost->add_option("graph", graph_path, "Graph spec JSON: {\"output_dims\": [...], \"edges\": [[a, b], ...]}")
        ->required();
    cost->add_option("--order", order, "Fixed node order (default: searched)")->delimiter(',');
    cost->add_option("--memory-limit-values", memory_limit, "Memory limit for the sliced plan")
        ->capture_default_str();
    cost->add_option("-o,--output", output, "Report path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (bench->parsed()) {
            const auto text = qcut::serialize(qcut::generate_benchmark(src));
            if (output.empty()) {
                std::cout << text;
            } else {
                std::ofstream(output) << text;
            }
            return 0;
        }
        if (cost->parsed()) {
            const auto spec = Json::parse(qcut::read_file(graph_path));
            std::optional<std::vector<std::size_t>> ord;
            if (!order.empty()) {
                ord = order;
            } else if (spec.contains("order")) {
                ord = spec.at("order").get<std::vector<std::size_t>>();
            }
            emit(qcut::cost_report(qcut::graph_from_json(spec), ord, memory_limit), output);
            return 0;
        }
        RunConfig cfg = fs.resolve(config_path);
        if (!output.empty()) {
            cfg.output = output;
        }
        Json report;
        if (cut->parsed()) {
            report = qcut::cut_report(cfg);
        } else if (merge->parsed()) {
            cfg.mode = cfg.subset_states.empty() ? "merge" : "subset";
            report = qcut::run_pipeline(cfg);
        } else if (sample->parsed()) {
            if (cfg.sampler == "none") {
                cfg.sampler = "optimal";
            }
            report = qcut::run_pipeline(cfg);
        } else {
            report = qcut::run_pipeline(cfg);
        }
        emit(report, cfg.output);
        return 0;
    } catch (const qcut::InfeasibleError &e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
