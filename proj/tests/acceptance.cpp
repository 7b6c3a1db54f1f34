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

// Acceptance harness: prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <string>

#include "qcut/benchmarks.hpp"
#include "qcut/cut_solver.hpp"
#include "qcut/merge.hpp"
#include "qcut/sampling.hpp"
#include "support.hpp"

namespace {

using namespace qcut;
using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

// Criterion 1: exact reconstruction against direct simulation.
Outcome oracle_equivalence() {
    const auto t0 = Clock::now();
    const double alphas[] = {0.3, 0.4, 0.5};
    const std::size_t grids[][2] = {{2, 2}, {2, 3}, {2, 4}, {3, 3}, {2, 5}, {2, 6}, {3, 4}, {2, 7}};
    const char *names[] = {"bv", "qaoa-regular", "supremacy-grid"};
    std::size_t per_family[3] = {0, 0, 0};
    std::size_t per_cuts[5] = {0, 0, 0, 0, 0};
    double worst_linf = 0.0, worst_sum = 0.0;
    std::size_t min_q = 99, max_q = 0;
    for (std::uint64_t seed = 0; seed < 3000 && per_family[0] + per_family[1] + per_family[2] < 60; ++seed) {
        const int fam = static_cast<int>(seed % 3);
        if (per_family[fam] >= 20) {
            continue;
        }
        SplitMix64 rng(seed * 7919 + 1);
        Circuit c(1);
        if (fam == 0) {
            c = bv_circuit(random_secret(4 + rng.below(11), seed));
        } else if (fam == 1) {
            c = qaoa_regular(4 + 2 * rng.below(6), 1, seed);
        } else {
            const auto &g = grids[rng.below(8)];
            c = supremacy_grid(g[0], g[1], seed, 2 + rng.below(3));
        }
        const auto dag = build_dag(c);
        SolverOptions opt;
        opt.alpha = alphas[rng.below(3)];
        opt.time_limit_s = 2.0;
        std::optional<CutSolution> chosen;
        for (std::size_t nc = 2; nc <= 4 && !chosen; ++nc) {
            try {
                auto s = solve_partition(dag, nc, opt);
                if (s.cut_count() >= 1 && s.cut_count() <= 4) {
                    chosen = std::move(s);
                }
            } catch (const InfeasibleError &) {
            } catch (const SolverTimeout &) {
            }
        }
        if (!chosen) {
            continue;
        }
        const auto r = testing::reconstruct(c, chosen->assignment, chosen->n_subcircuits);
        const auto oracle = simulate_full(c);
        worst_linf = std::max(worst_linf, testing::linf(r.probabilities, oracle));
        worst_sum = std::max(worst_sum, std::abs(std::accumulate(r.probabilities.begin(), r.probabilities.end(), 0.0) - 1.0));
        ++per_family[fam];
        ++per_cuts[chosen->cut_count()];
        min_q = std::min(min_q, c.n_qubits());
        max_q = std::max(max_q, c.n_qubits());
    }
    const std::size_t total = per_family[0] + per_family[1] + per_family[2];
    const double el = seconds_since(t0);
    Outcome o;
    o.pass = total >= 50 && worst_linf <= 1e-9 && worst_sum <= 1e-9 && el < 120.0;
    for (int f = 0; f < 3; ++f) {
        o.pass = o.pass && per_family[f] > 0;
    }
    o.detail = fmt("%zu circuits (%s %zu, %s %zu, %s %zu), %zu-%zu qubits, cuts 1/2/3/4 = %zu/%zu/%zu/%zu, "
                   "max Linf %.2e, max |sum-1| %.2e, %.1f s",
                   total, names[0], per_family[0], names[1], per_family[1], names[2], per_family[2], min_q, max_q,
                   per_cuts[1], per_cuts[2], per_cuts[3], per_cuts[4], worst_linf, worst_sum, el);
    return o;
}

// Criterion 2: cost-model golden numbers and instrumented counts.
Outcome cost_golden() {
    const auto g = testing::three_node_graph();
    const auto cost = predict_cost(g, make_plan(g, {0, 1, 2}));
    const auto naive = naive_multiplications(g);
    const double ratio = static_cast<double>(naive) / static_cast<double>(cost.multiplications);
    bool golden = cost.input_storage == 1168 && cost.step_multiplications.size() == 2 &&
                  cost.step_multiplications[0] == 512 && cost.step_multiplications[1] == 2048 && naive == 8704 &&
                  std::abs(ratio - 3.4) < 1e-12;
    SplitMix64 rng(2);
    std::size_t exact = 0;
    for (int t = 0; t < 20; ++t) {
        const auto rg = testing::random_graph(rng, 2 + rng.below(4), 1 + rng.below(5), 3);
        const auto plan = find_order(rg);
        const auto res = contract(rg, testing::random_tensors(rng, rg), plan);
        exact += res.multiplications == predict_cost(rg, plan).multiplications;
    }
    return {golden && exact == 20,
            fmt("input storage %llu, steps %llu + %llu, naive %llu (ratio %.2f), instrumented == predicted on "
                "%zu/20 random graphs",
                static_cast<unsigned long long>(cost.input_storage),
                static_cast<unsigned long long>(cost.step_multiplications.at(0)),
                static_cast<unsigned long long>(cost.step_multiplications.at(1)),
                static_cast<unsigned long long>(naive), ratio, exact)};
}

// Criterion 3: slicing golden number and sliced/unsliced agreement.
Outcome slicing_golden() {
    const auto g = testing::three_node_graph();
    const auto level1 = slice_level1(g, 1000);
    const auto plan = make_plan(g, {0, 1, 2}, level1);
    const auto cost = predict_cost(g, plan);
    const bool golden = level1 == std::vector<std::size_t>{1} && cost.input_storage == 304 &&
                        plan.subgraph_count() == 4;
    SplitMix64 rng(31);
    double worst = 0.0;
    std::size_t compared = 0;
    while (compared < 10) {
        const auto rg = testing::random_graph(rng, 3 + rng.below(2), 2 + rng.below(3), 3);
        const auto tensors = testing::random_tensors(rng, rg);
        const auto base = find_order(rg);
        const auto full = contract(rg, tensors, base);
        const auto limit = predict_cost(rg, base).input_storage / 2;
        const auto sliced = contract(rg, tensors, find_order(rg, slice_level1(rg, limit)));
        worst = std::max(worst, testing::linf(sliced.values, full.values));
        ++compared;
    }
    return {golden && worst <= 1e-12,
            fmt("sliced edge %zu, input storage %llu, %llu subgraphs; max |sliced - unsliced| %.2e on %zu toy graphs",
                level1.empty() ? 99 : level1[0], static_cast<unsigned long long>(cost.input_storage),
                static_cast<unsigned long long>(plan.subgraph_count()), worst, compared)};
}

CutCircuit cut_in_two(const Circuit &c) {
    const auto dag = build_dag(c);
    return cut_circuit(c, dag, solve_partition(dag, 2, SolverOptions{}).assignment, 2);
}

// Criterion 4: states merging.
Outcome states_merging() {
    bool pass = true;
    std::size_t worst_ratio_num = 0, worst_ratio_den = 1;
    double min_prob = 1.0;
    for (std::size_t n = 16; n <= 20; ++n) {
        const auto secret = random_secret(n, 100 + n);
        const auto cc = cut_in_two(bv_circuit(secret));
        EntryCache cache(cc);
        MergeOptions opt;
        opt.max_bins = 256;
        opt.top_r = 1;
        const auto st = run_merge(cc, cache, opt);
        const bool ok = !st.solutions.empty() && st.solutions[0].bitstring == secret &&
                        st.solutions[0].found_at <= ceil_div(n, 8) && st.solutions[0].probability >= 1.0 - 1e-6;
        pass = pass && ok;
        if (!st.solutions.empty()) {
            min_prob = std::min(min_prob, st.solutions[0].probability);
            if (st.solutions[0].found_at * worst_ratio_den > worst_ratio_num * ceil_div(n, 8)) {
                worst_ratio_num = st.solutions[0].found_at;
                worst_ratio_den = ceil_div(n, 8);
            }
        }
    }

    double conservation = 0.0;
    std::size_t expansions = 0;
    for (std::uint64_t run = 0; run < 20; ++run) {
        SplitMix64 rng(run + 500);
        const Circuit c = run % 2 ? bv_circuit(random_secret(10 + rng.below(7), run))
                                  : testing::random_circuit(8 + rng.below(5), 10, run, 0.3);
        const auto cc = cut_in_two(c);
        EntryCache cache(cc);
        MergeOptions opt;
        opt.max_bins = std::uint64_t{4} << rng.below(5);
        opt.top_r = 1 + rng.below(3);
        opt.max_recursions = 12;
        const auto st = run_merge(cc, cache, opt);
        conservation = std::max(conservation, st.max_conservation_error);
        expansions += st.trace.size();
    }
    pass = pass && conservation <= 1e-9;

    const auto secret = random_secret(16, 77);
    const auto planted = planted_three(secret);
    const auto cc = cut_in_two(planted);
    EntryCache cache(cc);
    MergeOptions opt;
    opt.max_bins = 256;
    opt.top_r = 3;
    const auto st = run_merge(cc, cache, opt);
    const auto expect = planted_three_solutions(secret);
    std::set<std::string> found;
    std::size_t last = 0;
    for (const auto &s : st.solutions) {
        found.insert(s.bitstring);
        last = std::max(last, s.found_at);
    }
    const std::size_t bound = 3 * ceil_div(planted.n_qubits(), 8);
    const bool planted_ok = found == std::set<std::string>(expect.begin(), expect.end()) && last <= bound;
    pass = pass && planted_ok;
    return {pass, fmt("bv16-20 secrets found (worst %zu of %zu allowed recursions, min probability %.9f); "
                      "conservation error %.2e over %zu expansions in 20 runs; planted3 (n=%zu) %zu/3 solutions by "
                      "recursion %zu of %zu",
                      worst_ratio_num, worst_ratio_den, min_prob, conservation, expansions, planted.n_qubits(),
                      found.size(), last, bound)};
}

struct SamplingInstance {
    Circuit circuit{1};
    CutCircuit cc;
    ComputeGraph graph;
    std::vector<DenseTensor> tensors;
    std::vector<double> oracle;
    double oracle_norm2 = 0.0;
    TermWeights tw;
    ContractionPlan plan;
};

SamplingInstance build_instance(const Circuit &c, const CutSolution &s) {
    SamplingInstance in;
    in.circuit = c;
    in.cc = cut_circuit(c, build_dag(c), s.assignment, s.n_subcircuits);
    in.graph = compute_graph(in.cc);
    EntryCache cache(in.cc);
    in.tensors = cache.all_full();
    in.oracle = simulate_full(c);
    for (auto p : in.oracle) {
        in.oracle_norm2 += p * p;
    }
    in.tw = compute_weights(in.graph, in.tensors);
    in.plan = term_plan(in.graph);
    return in;
}

std::vector<std::vector<double>> sampling_runs(const SamplingInstance &in, const std::vector<double> &q,
                                               std::uint64_t c, std::size_t trials, std::uint64_t seed,
                                               std::size_t *max_distinct = nullptr) {
    std::vector<std::vector<double>> runs;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto sp = sample_terms(q, c, stream_seed(seed, t));
        if (max_distinct) {
            *max_distinct = std::max(*max_distinct, sp.distinct());
        }
        runs.push_back(to_global_order(estimate(in.graph, in.tensors, sp, in.plan).values, in.cc));
    }
    return runs;
}

// Criterion 5: sampling statistics on toy instances with 1, 2 and 3 cuts.
Outcome sampling_statistics() {
    const std::size_t trials = 500;
    const std::uint64_t c = 256;
    std::vector<SamplingInstance> instances;
    std::set<std::size_t> have;
    for (std::uint64_t seed = 0; seed < 500 && have.size() < 3; ++seed) {
        const auto circ = testing::random_circuit(5 + seed % 3, 6 + seed % 4, seed + 3000, 0.6);
        const auto dag = build_dag(circ);
        try {
            const auto s = solve_partition(dag, 2 + seed % 2, SolverOptions{});
            if (s.cut_count() >= 1 && s.cut_count() <= 3 && !have.count(s.cut_count())) {
                auto in = build_instance(circ, s);
                // skip instances where optimal sampling has zero variance
                if (optimal_error(in.tw, 1, in.oracle_norm2) > 1e-6 * optimal_error(in.tw, 1)) {
                    have.insert(s.cut_count());
                    instances.push_back(std::move(in));
                }
            }
        } catch (const InfeasibleError &) {
        }
    }
    bool unbiased = true, mse_ok = true, lemma = true, halving = true;
    double worst_bias_se = 0.0, worst_mse_se = 0.0;
    std::size_t samplers_checked = 0;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto &in = instances[i];
        std::vector<std::pair<std::vector<double>, double>> cases = {
            {uniform_probabilities(in.tw.term_count()), uniform_error(in.tw, c, in.oracle_norm2)},
            {optimal_probabilities(in.tw), optimal_error(in.tw, c, in.oracle_norm2)},
        };
        for (std::size_t narrow = 0; narrow < in.graph.node_count(); ++narrow) {
            try {
                const auto node = (default_narrow_node(in.graph) + narrow) % in.graph.node_count();
                cases.emplace_back(essential_probabilities(in.tw, node),
                                   essential_error(in.tw, node, c, in.oracle_norm2));
                break;
            } catch (const SamplingError &) {
            }
        }
        for (std::size_t k = 0; k < cases.size(); ++k) {
            const auto runs = sampling_runs(in, cases[k].first, c, trials, 1000 * i + k);
            for (std::size_t j = 0; j < in.oracle.size(); ++j) {
                double mean = 0.0, m2 = 0.0;
                for (const auto &r : runs) {
                    mean += r[j];
                }
                mean /= static_cast<double>(trials);
                for (const auto &r : runs) {
                    m2 += (r[j] - mean) * (r[j] - mean);
                }
                const double se = std::sqrt(m2 / static_cast<double>(trials - 1) / static_cast<double>(trials));
                const double dev = std::abs(mean - in.oracle[j]);
                if (dev > 1e-12) {
                    worst_bias_se = std::max(worst_bias_se, dev / se);
                }
                unbiased = unbiased && dev <= 5 * se + 1e-12;
            }
            const double mse = empirical_mse(runs, in.oracle);
            const double se = mse_standard_error(runs, in.oracle);
            if (se > 0.0) {
                worst_mse_se = std::max(worst_mse_se, std::abs(mse - cases[k].second) / se);
            }
            mse_ok = mse_ok && std::abs(mse - cases[k].second) <= 3 * se + 1e-15;
            ++samplers_checked;
        }
        const auto q_opt = optimal_probabilities(in.tw);
        const double best = optimal_error(in.tw, c, in.oracle_norm2);
        const double tol = 1e-12 * optimal_error(in.tw, c);
        lemma = lemma && best <= uniform_error(in.tw, c, in.oracle_norm2) + tol;
        SplitMix64 rng(i + 1);
        for (int t = 0; t < 100; ++t) {
            auto q = q_opt;
            for (auto &x : q) {
                x *= std::exp(2 * rng.uniform() - 1);
            }
            lemma = lemma && best <= expected_error(normalized(q, "perturbed"), in.tw, c, in.oracle_norm2) + tol;
        }
        for (const auto &[q, closed] : cases) {
            halving = halving && expected_error(q, in.tw, 2 * c, in.oracle_norm2) * 2 ==
                                     expected_error(q, in.tw, c, in.oracle_norm2);
        }
    }
    const bool pass = instances.size() == 3 && unbiased && mse_ok && lemma && halving;
    return {pass, fmt("%zu instances (K = 1, 2, 3), %zu sampler runs of T=%zu, c=%llu: unbiased %s (worst %.2f SE), "
                      "MSE vs closed form %s (worst %.2f SE), optimal <= uniform and 100 perturbations %s, "
                      "exact halving at 2c %s",
                      instances.size(), samplers_checked, trials, static_cast<unsigned long long>(c),
                      unbiased ? "yes" : "NO", worst_bias_se, mse_ok ? "yes" : "NO", worst_mse_se,
                      lemma ? "yes" : "NO", halving ? "yes" : "NO")};
}

// Criterion 6: branch-and-bound optimality against exhaustive enumeration.
Outcome solver_optimality() {
    std::size_t matched = 0, feasible = 0, dags = 0;
    bool limits = true;
    const double alphas[] = {0.4, 0.5, 0.6, 0.7};
    for (std::uint64_t seed = 0; dags < 30; ++seed) {
        SplitMix64 rng(seed + 11);
        const auto c = testing::random_circuit(3 + rng.below(4), 5 + rng.below(8), seed + 700, 0.2);
        const auto dag = build_dag(c);
        if (dag.vertex_count() > 12 || dag.vertex_count() < 3) {
            continue;
        }
        ++dags;
        const std::size_t nc = 2 + rng.below(2);
        const double alpha = alphas[rng.below(4)];
        const auto oracle = testing::exhaustive_partition(dag, nc, alpha);
        SolverOptions opt;
        opt.alpha = alpha;
        std::optional<CutSolution> s;
        try {
            s = solve_partition(dag, nc, opt);
        } catch (const InfeasibleError &) {
        }
        if (s.has_value() != oracle.objective.has_value()) {
            continue;
        }
        if (!s) {
            ++matched;
            continue;
        }
        ++feasible;
        matched += s->objective == *oracle.objective;
        const auto cap = load_cap(alpha, dag.vertex_count());
        for (auto g : s->gate_counts) {
            limits = limits && g <= cap;
        }
        limits = limits && s->objective <= kDefaultDegreeCap;
    }
    return {matched == dags && limits,
            fmt("%zu/%zu random DAGs (|V| <= 12, n_C in {2,3}, %zu feasible) match the exhaustive minimum; "
                "load and degree limits %s",
                matched, dags, feasible, limits ? "respected" : "VIOLATED")};
}

// Criterion 7: few distinct terms under optimal sampling on a concentrated instance.
Outcome distinct_samples() {
    // BV with a small phase on the ancilla: the X and I terms of the single
    // cut dominate, the Y term is small and Z vanishes.
    const std::string secret = "1101011011";
    const Circuit bv = bv_circuit(secret);
    Circuit c(bv.n_qubits());
    const std::size_t anc = secret.find_last_of('1');
    std::size_t h_seen = 0;
    for (const auto &g : bv.gates()) {
        c.append(g.kind, g.qubits, g.params);
        if (g.kind == GateKind::H && g.qubits[0] == anc && h_seen++ == 0) {
            c.append(GateKind::RZ, {anc}, {0.1});
        }
    }
    const auto dag = build_dag(c);
    const auto s = solve_partition(dag, 2, SolverOptions{});
    const auto in = build_instance(c, s);
    const auto q = optimal_probabilities(in.tw);
    auto sorted = q;
    std::sort(sorted.rbegin(), sorted.rend());
    const double top2 = sorted[0] + (sorted.size() > 1 ? sorted[1] : 0.0);
    const std::uint64_t samples = 1024;
    std::size_t max_distinct = 0;
    const auto runs = sampling_runs(in, q, samples, 500, 4242, &max_distinct);
    const double mse = empirical_mse(runs, in.oracle);
    const double closed = optimal_error(in.tw, samples, in.oracle_norm2);
    const double rel = std::abs(mse / closed - 1.0);
    return {max_distinct <= 8 && rel <= 0.3 && top2 >= 0.9,
            fmt("%zu cut(s), %zu terms, top-2 optimal mass %.4f; c=%llu gives at most %zu distinct terms over 500 "
                "trials; empirical MSE %.3e vs closed form %.3e (%.1f%% off)",
                s.cut_count(), q.size(), top2, static_cast<unsigned long long>(samples), max_distinct, mse, closed,
                100.0 * rel)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
        {"oracle equivalence (exact mode)", oracle_equivalence},
        {"cost-model golden numbers", cost_golden},
        {"slicing golden number", slicing_golden},
        {"states merging", states_merging},
        {"sampling statistics", sampling_statistics},
        {"cut-solver optimality", solver_optimality},
        {"distinct-sample sublinearity", distinct_samples},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] criterion %zu [PRIMARY] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
