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

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "qcut/benchmarks.hpp"
#include "qcut/report.hpp"
#include "qcut/sampling.hpp"

namespace qcut {

/// Where the input circuit comes from: a file or a named generator.
struct CircuitSource {
    std::string path;
    std::string generator;  // bv, qaoa-regular, qaoa-erdos, supremacy-grid, aqft, planted3
    std::size_t n = 8;
    std::string secret;
    std::uint64_t seed = 1;
    std::size_t rows = 2;
    std::size_t cols = 3;
    std::size_t rounds = 1;
    double edge_prob = 0.5;
    std::size_t degree = 2;
    std::size_t cycles = kGridCycles.size();
};

struct RunConfig {
    CircuitSource circuit;
    double alpha = 0.5;
    std::size_t max_subcircuits = 3;
    /// Fixed subcircuit count; 0 lets find_cuts pick one in 2..max_subcircuits.
    std::size_t subcircuits = 0;
    double solver_timeout_s = 30.0;
    std::size_t degree_cap = kDefaultDegreeCap;
    std::size_t width_cap = kDefaultSimulatorCap;
    std::string mode = "full";  // full, merge, subset
    std::uint64_t max_bins = 256;
    std::size_t top_r = 1;
    std::size_t max_recursions = 64;
    double solution_threshold = 1e-3;
    std::vector<std::string> subset_states;
    std::string sampler = "none";  // none, uniform, essential, optimal
    std::uint64_t samples = 1024;
    std::uint64_t seed = 1;
    std::size_t trials = 1;
    /// Narrow subcircuit for essential sampling; -1 picks the default.
    std::int64_t narrow = -1;
    std::uint64_t memory_limit = kDefaultMemoryLimit;
    std::size_t top_states = 16;
    std::string output;
    std::string probabilities_csv;

    void validate() const {
        if (!(alpha > 0.0 && alpha <= 1.0)) {
            throw Error("alpha must lie in (0, 1]");
        }
        if (mode != "full" && mode != "merge" && mode != "subset") {
            throw Error("unknown mode '" + mode + "' (expected full, merge or subset)");
        }
        if (sampler != "none" && sampler != "uniform" && sampler != "essential" && sampler != "optimal") {
            throw Error("unknown sampler '" + sampler + "'");
        }
        if (sampler != "none" && mode != "full") {
            throw Error("sampling runs in full mode only");
        }
        if (sampler != "none" && (samples == 0 || trials == 0)) {
            throw Error("sampling needs positive --samples and --trials");
        }
        if (max_subcircuits < 2 && subcircuits == 0) {
            throw Error("max subcircuits must be at least 2");
        }
    }
};

/// Reads RunConfig fields from a JSON object; absent keys keep their value.
inline void apply_json(RunConfig &c, const Json &j) {
    auto get = [&](const char *key, auto &field) {
        if (j.contains(key)) {
            j.at(key).get_to(field);
        }
    };
    if (j.contains("circuit")) {
        const auto &s = j.at("circuit");
        auto gs = [&](const char *key, auto &field) {
            if (s.contains(key)) {
                s.at(key).get_to(field);
            }
        };
        gs("path", c.circuit.path);
        gs("generator", c.circuit.generator);
        gs("n", c.circuit.n);
        gs("secret", c.circuit.secret);
        gs("seed", c.circuit.seed);
        gs("rows", c.circuit.rows);
        gs("cols", c.circuit.cols);
        gs("rounds", c.circuit.rounds);
        gs("edge_prob", c.circuit.edge_prob);
        gs("degree", c.circuit.degree);
        gs("cycles", c.circuit.cycles);
    }
    get("alpha", c.alpha);
    get("max_subcircuits", c.max_subcircuits);
    get("subcircuits", c.subcircuits);
    get("solver_timeout_s", c.solver_timeout_s);
    get("degree_cap", c.degree_cap);
    get("width_cap", c.width_cap);
    get("mode", c.mode);
    get("max_bins", c.max_bins);
    get("top_r", c.top_r);
    get("max_recursions", c.max_recursions);
    get("solution_threshold", c.solution_threshold);
    get("subset_states", c.subset_states);
    get("sampler", c.sampler);
    get("samples", c.samples);
    get("seed", c.seed);
    get("trials", c.trials);
    get("narrow", c.narrow);
    get("memory_limit", c.memory_limit);
    get("top_states", c.top_states);
    get("output", c.output);
    get("probabilities_csv", c.probabilities_csv);
}

inline Json source_json(const CircuitSource &s) {
    if (!s.path.empty()) {
        return {{"path", s.path}};
    }
    return {{"generator", s.generator}, {"n", s.n},         {"secret", s.secret},       {"seed", s.seed},
            {"rows", s.rows},           {"cols", s.cols},   {"rounds", s.rounds},       {"edge_prob", s.edge_prob},
            {"degree", s.degree},       {"cycles", s.cycles}};
}

inline std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Builds a generator circuit. `secret` may be filled in for bv and planted3.
inline Circuit generate_benchmark(CircuitSource &s) {
    const auto &k = s.generator;
    if (k == "bv") {
        if (s.secret.empty()) {
            s.secret = random_secret(s.n, s.seed);
        }
        return bv_circuit(s.secret);
    }
    if (k == "planted3") {
        if (s.secret.empty()) {
            s.secret = random_secret(s.n < 4 ? 2 : s.n - 2, s.seed);
        }
        return planted_three(s.secret);
    }
    if (k == "qaoa-regular") {
        return qaoa_regular(s.n, s.rounds, s.seed);
    }
    if (k == "qaoa-erdos") {
        return qaoa_erdos(s.n, s.edge_prob, s.rounds, s.seed);
    }
    if (k == "supremacy-grid") {
        return supremacy_grid(s.rows, s.cols, s.seed, s.cycles);
    }
    if (k == "aqft") {
        return aqft_circuit(s.n, s.degree, s.seed);
    }
    throw Error("unknown benchmark '" + k + "' (expected bv, qaoa-regular, qaoa-erdos, supremacy-grid, aqft, planted3)");
}

inline Circuit load_circuit(CircuitSource &s) {
    if (!s.path.empty()) {
        return parse_circuit(read_file(s.path));
    }
    if (s.generator.empty()) {
        throw Error("no circuit given: pass a circuit file or a benchmark generator");
    }
    return generate_benchmark(s);
}

namespace detail {

/// Runs `fn`, timing it under `timing[phase]` and prefixing errors with the
/// phase name while keeping their type.
template <typename F>
auto in_phase(const char *phase, Json &timing, F &&fn) {
    const auto t0 = std::chrono::steady_clock::now();
    auto stop = [&] {
        timing[phase] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    const std::string tag = std::string(phase) + ": ";
    try {
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            stop();
        } else {
            auto r = fn();
            stop();
            return r;
        }
    } catch (const InfeasibleError &e) {
        throw InfeasibleError(tag + e.what());
    } catch (const ParseError &e) {
        throw ParseError(e.line, tag + e.what());
    } catch (const std::exception &e) {
        throw Error(tag + e.what());
    }
}

inline Json top_states(const std::vector<double> &p, std::size_t n_qubits, std::size_t count) {
    std::vector<std::size_t> idx(p.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    count = std::min(count, idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(count), idx.end(),
                      [&](std::size_t a, std::size_t b) { return p[a] > p[b] || (p[a] == p[b] && a < b); });
    Json out = Json::array();
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back({{"state", index_to_bitstring(idx[i], n_qubits)}, {"probability", p[idx[i]]}});
    }
    return out;
}

inline double linf(const std::vector<double> &a, const std::vector<double> &b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

}  // namespace detail

/// Finds cuts per the config: a fixed subcircuit count or the cheapest of 2..max.
inline CutSolution cut_for_config(const Circuit &c, const GateDag &dag, const RunConfig &cfg) {
    SolverOptions opt;
    opt.alpha = cfg.alpha;
    opt.time_limit_s = cfg.solver_timeout_s;
    opt.degree_cap = cfg.degree_cap;
    opt.width_cap = cfg.width_cap;
    if (cfg.subcircuits > 0) {
        return solve_partition(dag, cfg.subcircuits, opt);
    }
    return find_cuts(c, dag, cfg.max_subcircuits, opt);
}

/// Sampling section of a full-mode report.
inline Json run_sampling(const RunConfig &cfg, const ComputeGraph &g, const std::vector<DenseTensor> &tensors,
                         const CutCircuit &cc, const std::optional<std::vector<double>> &oracle) {
    const auto tw = compute_weights(g, tensors);
    const std::size_t narrow = cfg.narrow >= 0 ? static_cast<std::size_t>(cfg.narrow) : default_narrow_node(g);
    std::vector<double> q;
    if (cfg.sampler == "uniform") {
        q = uniform_probabilities(tw.term_count());
    } else if (cfg.sampler == "essential") {
        q = essential_probabilities(tw, narrow);
    } else {
        q = optimal_probabilities(tw);
    }
    double p_norm2 = 0.0;
    if (oracle) {
        for (auto v : *oracle) {
            p_norm2 += v * v;
        }
    }
    const auto plan = term_plan(g);
    std::vector<std::vector<double>> runs;
    Json trials = Json::array();
    Json first_hist = Json::object();
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        const auto seed = stream_seed(cfg.seed, t);
        const auto sp = sample_terms(q, cfg.samples, seed);
        if (t == 0) {
            for (const auto &[k, lam] : sp.counts) {
                first_hist[std::to_string(k)] = lam;
            }
        }
        const auto r = estimate(g, tensors, sp, plan);
        auto p = to_global_order(r.values, cc);
        Json tr = {{"seed", seed}, {"distinct_samples", sp.distinct()}, {"multiplications", r.multiplications}};
        if (oracle) {
            tr["squared_error"] = empirical_mse({p}, *oracle);
        }
        trials.push_back(std::move(tr));
        runs.push_back(std::move(p));
    }
    Json errors = {{"expected", expected_error(q, tw, cfg.samples, p_norm2)},
                   {"uniform", uniform_error(tw, cfg.samples, p_norm2)},
                   {"optimal", optimal_error(tw, cfg.samples, p_norm2)}};
    try {
        errors["essential"] = essential_error(tw, narrow, cfg.samples, p_norm2);
    } catch (const SamplingError &e) {
        errors["essential"] = nullptr;
        errors["essential_note"] = e.what();
    }
    errors["includes_norm_term"] = oracle.has_value();
    if (oracle) {
        errors["empirical_mse"] = empirical_mse(runs, *oracle);
        errors["empirical_mse_standard_error"] = mse_standard_error(runs, *oracle);
    }
    std::size_t nonzero = 0;
    for (auto v : q) {
        nonzero += v > 0.0;
    }
    return {{"sampler", cfg.sampler},
            {"samples", cfg.samples},
            {"seed", cfg.seed},
            {"trials", cfg.trials},
            {"narrow_subcircuit", narrow},
            {"terms", q.size()},
            {"q_nonzero", nonzero},
            {"q_max", *std::max_element(q.begin(), q.end())},
            {"lambda_histogram_trial0", first_hist},
            {"errors", errors},
            {"per_trial", trials}};
}

/// Runs the configured pipeline and returns the JSON report. Wall-clock
/// values live under "timing" only.
inline Json run_pipeline(RunConfig cfg) {
    cfg.validate();
    Json timing = Json::object();
    Json report;
    report["schema_version"] = kReportSchemaVersion;

    const Circuit circuit = detail::in_phase("load", timing, [&] { return load_circuit(cfg.circuit); });
    report["circuit"] = {{"source", source_json(cfg.circuit)},
                         {"n_qubits", circuit.n_qubits()},
                         {"gates", circuit.gates().size()},
                         {"two_qubit_gates", circuit.two_qubit_gate_count()},
                         {"depth", circuit.depth()}};
    report["config"] = {{"alpha", cfg.alpha},           {"max_subcircuits", cfg.max_subcircuits},
                        {"subcircuits", cfg.subcircuits}, {"degree_cap", cfg.degree_cap},
                        {"width_cap", cfg.width_cap},   {"mode", cfg.mode},
                        {"memory_limit", cfg.memory_limit}};

    const GateDag dag = build_dag(circuit);
    const CutSolution sol = detail::in_phase("cut", timing, [&] { return cut_for_config(circuit, dag, cfg); });
    const CutCircuit cc = cut_circuit(circuit, dag, sol.assignment, sol.n_subcircuits);
    report["cut"] = to_json(sol, dag, cc);
    report["cut"]["quantum_area"] = to_json(quantum_area(sol, circuit, dag));

    const ComputeGraph graph = compute_graph(cc);
    report["compute_graph"] = to_json(graph);
    EntryCache cache(cc, cfg.width_cap);
    detail::in_phase("simulate", timing, [&] { cache.all_full(); });

    const bool oracle_ok = circuit.n_qubits() <= cfg.width_cap;
    if (cfg.mode == "full") {
        if (circuit.n_qubits() > cfg.width_cap) {
            throw WidthError("full mode needs n <= " + std::to_string(cfg.width_cap) + " qubits");
        }
        const auto plan = detail::in_phase("plan", timing, [&] { return plan_contraction(graph, cfg.memory_limit); });
        const auto cost = predict_cost(graph, plan);
        const auto result = detail::in_phase("contract", timing, [&] { return contract(graph, cache.all_full(), plan); });
        report["contraction"] = to_json(plan, cost);
        report["contraction"]["actual_multiplications"] = result.multiplications;
        report["contraction"]["cost_model_exact"] = result.multiplications == cost.multiplications;
        report["contraction"]["naive_multiplications"] = naive_multiplications(graph);
        const auto p = to_global_order(result.values, cc);
        Json res = {{"sum", std::accumulate(p.begin(), p.end(), 0.0)},
                    {"min_value", *std::min_element(p.begin(), p.end())},
                    {"top_states", detail::top_states(p, circuit.n_qubits(), cfg.top_states)}};
        std::optional<std::vector<double>> oracle;
        if (oracle_ok) {
            oracle = detail::in_phase("oracle", timing, [&] { return simulate_full(circuit, cfg.width_cap); });
            res["linf_vs_oracle"] = detail::linf(p, *oracle);
        }
        if (!cfg.probabilities_csv.empty()) {
            std::ofstream out(cfg.probabilities_csv);
            if (!out) {
                throw Error("cannot write '" + cfg.probabilities_csv + "'");
            }
            out << "state,probability\n";
            out.precision(17);
            for (std::size_t i = 0; i < p.size(); ++i) {
                out << index_to_bitstring(i, circuit.n_qubits()) << ',' << p[i] << '\n';
            }
        }
        report["result"] = res;
        if (cfg.sampler != "none") {
            report["sampling"] = detail::in_phase(
                "sampling", timing, [&] { return run_sampling(cfg, graph, cache.all_full(), cc, oracle); });
        }
    } else if (cfg.mode == "merge") {
        MergeOptions mo;
        mo.max_bins = cfg.max_bins;
        mo.top_r = cfg.top_r;
        mo.max_recursions = cfg.max_recursions;
        mo.solution_threshold = cfg.solution_threshold;
        mo.memory_limit = cfg.memory_limit;
        const auto st = detail::in_phase("merge", timing, [&] { return run_merge(cc, cache, mo); });
        report["merge"] = to_json(st, st.trace.size() <= 64 && cfg.max_bins <= 4096);
        if (oracle_ok && circuit.n_qubits() <= 24) {
            const auto oracle = detail::in_phase("oracle", timing, [&] { return simulate_full(circuit, cfg.width_cap); });
            Json check = Json::array();
            for (const auto &s : st.solutions) {
                check.push_back({{"bitstring", s.bitstring},
                                 {"oracle_probability", oracle[bitstring_to_index(s.bitstring)]}});
            }
            report["merge"]["oracle_check"] = check;
        }
    } else {
        const auto probs = detail::in_phase("subset", timing, [&] {
            return arbitrary_subset_mode(cc, cache, cfg.subset_states, cfg.max_bins, cfg.memory_limit);
        });
        Json res = Json::array();
        std::optional<std::vector<double>> oracle;
        if (oracle_ok) {
            oracle = detail::in_phase("oracle", timing, [&] { return simulate_full(circuit, cfg.width_cap); });
        }
        for (std::size_t i = 0; i < probs.size(); ++i) {
            Json r = {{"state", cfg.subset_states[i]}, {"probability", probs[i]}};
            if (oracle) {
                r["oracle_probability"] = (*oracle)[bitstring_to_index(cfg.subset_states[i])];
            }
            res.push_back(std::move(r));
        }
        report["subset"] = res;
    }
    report["timing"] = timing;
    return report;
}

/// Report of the cut phase alone: solution, compute graph and predicted cost.
inline Json cut_report(RunConfig cfg) {
    cfg.validate();
    Json timing = Json::object();
    Json report;
    report["schema_version"] = kReportSchemaVersion;
    const Circuit circuit = detail::in_phase("load", timing, [&] { return load_circuit(cfg.circuit); });
    report["circuit"] = {{"source", source_json(cfg.circuit)},
                         {"n_qubits", circuit.n_qubits()},
                         {"gates", circuit.gates().size()},
                         {"two_qubit_gates", circuit.two_qubit_gate_count()},
                         {"depth", circuit.depth()}};
    const GateDag dag = build_dag(circuit);
    const CutSolution sol = detail::in_phase("cut", timing, [&] { return cut_for_config(circuit, dag, cfg); });
    const CutCircuit cc = cut_circuit(circuit, dag, sol.assignment, sol.n_subcircuits);
    report["cut"] = to_json(sol, dag, cc);
    report["cut"]["quantum_area"] = to_json(quantum_area(sol, circuit, dag));
    const ComputeGraph graph = compute_graph(cc);
    report["compute_graph"] = to_json(graph);
    const auto plan = plan_contraction(graph, cfg.memory_limit);
    report["contraction"] = to_json(plan, predict_cost(graph, plan));
    report["contraction"]["naive_multiplications"] = naive_multiplications(graph);
    report["timing"] = timing;
    return report;
}

/// Cost-only report for a graph spec.
inline Json cost_report(const ComputeGraph &graph, std::optional<std::vector<std::size_t>> order,
                        std::uint64_t memory_limit) {
    Json report;
    report["schema_version"] = kReportSchemaVersion;
    report["compute_graph"] = to_json(graph);
    const auto plan = order ? make_plan(graph, *order) : find_order(graph);
    const auto cost = predict_cost(graph, plan);
    report["plan"] = to_json(plan, cost);
    report["step_multiplications"] = cost.step_multiplications;
    report["input_storage"] = cost.input_storage;
    report["multiplications"] = cost.multiplications;
    const auto naive = naive_multiplications(graph);
    report["naive_multiplications"] = naive;
    report["naive_ratio"] =
        cost.multiplications ? static_cast<double>(naive) / static_cast<double>(cost.multiplications) : 0.0;
    const auto sliced = plan_contraction(graph, memory_limit);
    report["sliced_plan"] = to_json(sliced, predict_cost(graph, sliced));
    report["sliced_plan"]["memory_limit"] = memory_limit;
    return report;
}

}  // namespace qcut
