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
#include <cstdint>
#include <future>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <thread>
#include <utility>
#include <vector>

#include "qcut/tensor.hpp"

namespace qcut {

inline constexpr std::size_t kCutDim = 4;
inline constexpr std::uint64_t kDefaultMemoryLimit = std::uint64_t{1} << 28;
inline constexpr std::size_t kDefaultDegreeCap = 15;
inline constexpr std::size_t kExhaustiveOrderLimit = 8;

/// Subcircuits as tensor-network nodes. Node i carries one output index of
/// dimension `output_dims[i]` (2^qubits, or its bin count); every cut edge is
/// a dimension-4 index shared by its two endpoints (which may coincide).
struct ComputeGraph {
    std::vector<std::size_t> output_dims;
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    std::size_t node_count() const { return output_dims.size(); }
    std::size_t edge_count() const { return edges.size(); }

    bool touches(std::size_t edge, std::size_t node) const {
        return edges[edge].first == node || edges[edge].second == node;
    }
    bool is_self_edge(std::size_t edge) const { return edges[edge].first == edges[edge].second; }

    std::vector<std::size_t> node_edges(std::size_t node) const {
        std::vector<std::size_t> out;
        for (std::size_t e = 0; e < edges.size(); ++e) {
            if (touches(e, node)) {
                out.push_back(e);
            }
        }
        return out;
    }

    /// Compute-graph degree: cut endpoints on the node (a self edge counts twice).
    std::size_t degree(std::size_t node) const {
        std::size_t d = 0;
        for (const auto &[a, b] : edges) {
            d += (a == node) + (b == node);
        }
        return d;
    }

    void validate() const {
        for (const auto &[a, b] : edges) {
            if (a >= node_count() || b >= node_count()) {
                throw Error("compute graph edge refers to a missing node");
            }
        }
        for (auto d : output_dims) {
            if (d == 0) {
                throw Error("compute graph node with zero output dimension");
            }
        }
    }
};

namespace detail {

inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
        return std::numeric_limits<std::uint64_t>::max();
    }
    return a * b;
}

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    return (b > std::numeric_limits<std::uint64_t>::max() - a) ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

inline std::uint64_t pow4(std::size_t k) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < k; ++i) {
        r = sat_mul(r, kCutDim);
    }
    return r;
}

}  // namespace detail

/// One pairwise product: node `node` (leading matrix, rows = its kept
/// indices) times the accumulated cluster (trailing matrix, columns = the
/// cluster's kept indices), summing over `contracted` edges.
struct ContractionStep {
    std::size_t node = 0;
    std::vector<std::size_t> contracted;
    std::vector<std::size_t> leading_kept;   // cut edges kept from the node
    std::vector<std::size_t> trailing_kept;  // cut edges kept from the cluster
    std::uint64_t rows = 1;
    std::uint64_t inner = 1;
    std::uint64_t cols = 1;
    std::uint64_t multiplications = 0;
    std::uint64_t operand_storage = 0;
    std::uint64_t result_storage = 0;
};

struct ContractionPlan {
    std::vector<std::size_t> order;
    std::vector<ContractionStep> steps;
    std::vector<std::size_t> sliced_level1;
    std::vector<std::size_t> sliced_level2;
    /// False when the order came from the greedy search.
    bool exhaustive = true;

    std::vector<std::size_t> sliced() const {
        auto s = sliced_level1;
        s.insert(s.end(), sliced_level2.begin(), sliced_level2.end());
        std::sort(s.begin(), s.end());
        return s;
    }
    std::uint64_t subgraph_count() const { return detail::pow4(sliced_level1.size() + sliced_level2.size()); }
};

struct CostReport {
    std::uint64_t input_storage = 0;
    std::uint64_t peak_intermediate_storage = 0;
    /// Total over all sliced subgraphs.
    std::uint64_t multiplications = 0;
    std::uint64_t multiplications_per_subgraph = 0;
    std::uint64_t subgraph_count = 1;
    std::vector<std::uint64_t> step_multiplications;
    std::vector<std::uint64_t> step_operand_storage;
};

namespace detail {

inline bool contains(const std::vector<std::size_t> &v, std::size_t x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

/// Input tensor size of `node` with `sliced` edges removed.
inline std::uint64_t node_storage(const ComputeGraph &g, std::size_t node, const std::vector<std::size_t> &sliced) {
    std::size_t cuts = 0;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        if (g.touches(e, node) && !contains(sliced, e)) {
            ++cuts;
        }
    }
    return sat_mul(pow4(cuts), g.output_dims[node]);
}

inline std::vector<ContractionStep> build_steps(const ComputeGraph &g, const std::vector<std::size_t> &order,
                                                const std::vector<std::size_t> &sliced) {
    std::vector<ContractionStep> steps;
    if (order.empty()) {
        return steps;
    }
    std::vector<bool> in_cluster(g.node_count(), false);
    in_cluster[order[0]] = true;
    std::uint64_t cluster_out = g.output_dims[order[0]];
    for (std::size_t s = 1; s < order.size(); ++s) {
        const auto node = order[s];
        ContractionStep step;
        step.node = node;
        std::uint64_t node_out = g.output_dims[node];
        for (std::size_t e = 0; e < g.edge_count(); ++e) {
            if (contains(sliced, e) || g.is_self_edge(e)) {
                continue;
            }
            const auto [a, b] = g.edges[e];
            const bool node_side = (a == node || b == node);
            const bool cluster_side = in_cluster[a] || in_cluster[b];
            if (node_side && cluster_side) {
                step.contracted.push_back(e);
            } else if (node_side) {
                step.leading_kept.push_back(e);
            } else if (cluster_side && !(in_cluster[a] && in_cluster[b])) {
                step.trailing_kept.push_back(e);
            }
        }
        step.rows = sat_mul(pow4(step.leading_kept.size()), node_out);
        step.inner = pow4(step.contracted.size());
        step.cols = sat_mul(pow4(step.trailing_kept.size()), cluster_out);
        step.multiplications = sat_mul(sat_mul(step.rows, step.inner), step.cols);
        step.operand_storage = sat_add(sat_mul(step.rows, step.inner), sat_mul(step.inner, step.cols));
        step.result_storage = sat_mul(step.rows, step.cols);
        steps.push_back(std::move(step));
        in_cluster[node] = true;
        cluster_out = sat_mul(cluster_out, node_out);
    }
    return steps;
}

inline std::uint64_t total_multiplications(const std::vector<ContractionStep> &steps) {
    std::uint64_t total = 0;
    for (const auto &s : steps) {
        total = sat_add(total, s.multiplications);
    }
    return total;
}

}  // namespace detail

/// Builds the plan for a fixed node order.
inline ContractionPlan make_plan(const ComputeGraph &graph, std::vector<std::size_t> order,
                                 std::vector<std::size_t> sliced_level1 = {},
                                 std::vector<std::size_t> sliced_level2 = {}) {
    graph.validate();
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] != i) {
            throw Error("contraction order is not a permutation of the nodes");
        }
    }
    if (sorted.size() != graph.node_count()) {
        throw Error("contraction order is not a permutation of the nodes");
    }
    ContractionPlan plan;
    plan.order = std::move(order);
    plan.sliced_level1 = std::move(sliced_level1);
    plan.sliced_level2 = std::move(sliced_level2);
    plan.steps = detail::build_steps(graph, plan.order, plan.sliced());
    return plan;
}

/// Storage and multiplication counts of `plan`. Input storage is the sum of
/// the subcircuit tensors of one sliced subgraph; multiplications cover all
/// subgraphs.
inline CostReport predict_cost(const ComputeGraph &graph, const ContractionPlan &plan) {
    CostReport r;
    const auto sliced = plan.sliced();
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
        r.input_storage = detail::sat_add(r.input_storage, detail::node_storage(graph, i, sliced));
    }
    for (const auto &s : plan.steps) {
        r.peak_intermediate_storage = std::max(r.peak_intermediate_storage, s.result_storage);
        r.step_multiplications.push_back(s.multiplications);
        r.step_operand_storage.push_back(s.operand_storage);
    }
    r.multiplications_per_subgraph = detail::total_multiplications(plan.steps);
    r.subgraph_count = plan.subgraph_count();
    r.multiplications = detail::sat_mul(r.multiplications_per_subgraph, r.subgraph_count);
    return r;
}

/// Multiplications of evaluating every one of the 4^K terms as explicit
/// outer products, nodes taken in index order.
inline std::uint64_t naive_multiplications(const ComputeGraph &graph) {
    std::uint64_t per_term = 0;
    std::uint64_t acc = graph.node_count() ? graph.output_dims[0] : 0;
    for (std::size_t i = 1; i < graph.node_count(); ++i) {
        acc = detail::sat_mul(acc, graph.output_dims[i]);
        per_term = detail::sat_add(per_term, acc);
    }
    return detail::sat_mul(detail::pow4(graph.edge_count()), per_term);
}

/// Minimum-multiplication node order. Exhaustive over all permutations for
/// up to 8 nodes (first minimum in lexicographic order wins); greedy above.
inline ContractionPlan find_order(const ComputeGraph &graph, const std::vector<std::size_t> &sliced = {}) {
    graph.validate();
    const std::size_t n = graph.node_count();
    if (n == 0) {
        throw Error("compute graph has no nodes");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (n <= kExhaustiveOrderLimit) {
        std::vector<std::size_t> best = order;
        std::uint64_t best_cost = std::numeric_limits<std::uint64_t>::max();
        bool first = true;
        do {
            const auto cost = detail::total_multiplications(detail::build_steps(graph, order, sliced));
            if (first || cost < best_cost) {
                best_cost = cost;
                best = order;
                first = false;
            }
        } while (std::next_permutation(order.begin(), order.end()));
        auto plan = make_plan(graph, best, sliced);
        plan.exhaustive = true;
        return plan;
    }

    // Greedy: cheapest first pair, then the cheapest next node each step.
    std::vector<std::size_t> chosen;
    std::uint64_t best_cost = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b) {
                continue;
            }
            auto steps = detail::build_steps(graph, {a, b}, sliced);
            if (steps[0].multiplications < best_cost) {
                best_cost = steps[0].multiplications;
                chosen = {a, b};
            }
        }
    }
    while (chosen.size() < n) {
        std::uint64_t step_best = std::numeric_limits<std::uint64_t>::max();
        std::size_t pick = n;
        for (std::size_t c = 0; c < n; ++c) {
            if (detail::contains(chosen, c)) {
                continue;
            }
            auto trial = chosen;
            trial.push_back(c);
            auto steps = detail::build_steps(graph, trial, sliced);
            if (steps.back().multiplications < step_best) {
                step_best = steps.back().multiplications;
                pick = c;
            }
        }
        chosen.push_back(pick);
    }
    auto plan = make_plan(graph, chosen, sliced);
    plan.exhaustive = false;
    return plan;
}

/// First-level slicing: greedily fixes the cut edge whose removal shrinks the
/// total input storage the most (ties: lowest edge id) until it fits.
inline std::vector<std::size_t> slice_level1(const ComputeGraph &graph, std::uint64_t memory_limit) {
    graph.validate();
    std::vector<std::size_t> sliced;
    auto storage = [&](const std::vector<std::size_t> &s) {
        std::uint64_t total = 0;
        for (std::size_t i = 0; i < graph.node_count(); ++i) {
            total = detail::sat_add(total, detail::node_storage(graph, i, s));
        }
        return total;
    };
    std::uint64_t current = storage(sliced);
    while (current > memory_limit) {
        std::optional<std::size_t> best;
        std::uint64_t best_storage = current;
        for (std::size_t e = 0; e < graph.edge_count(); ++e) {
            if (detail::contains(sliced, e)) {
                continue;
            }
            auto trial = sliced;
            trial.push_back(e);
            const auto s = storage(trial);
            if (!best || s < best_storage) {
                best = e;
                best_storage = s;
            }
        }
        if (!best) {
            throw MemoryLimitError("input tensors need " + std::to_string(current) +
                                   " values even with every cut sliced; limit is " + std::to_string(memory_limit));
        }
        sliced.push_back(*best);
        current = best_storage;
    }
    return sliced;
}

/// Second-level slicing: repeatedly slices the cut edge that most reduces
/// the largest intermediate product until the peak fits in `memory_limit`.
/// The node order is kept.
inline ContractionPlan slice_level2(const ComputeGraph &graph, const ContractionPlan &plan,
                                    std::uint64_t memory_limit) {
    ContractionPlan out = plan;
    auto peak_of = [](const ContractionPlan &p) {
        std::uint64_t peak = 0;
        for (const auto &s : p.steps) {
            peak = std::max(peak, s.result_storage);
        }
        return peak;
    };
    std::uint64_t peak = peak_of(out);
    while (peak > memory_limit) {
        const auto worst = std::max_element(out.steps.begin(), out.steps.end(), [](const auto &a, const auto &b) {
            return a.result_storage < b.result_storage;
        });
        std::vector<std::size_t> candidates = worst->leading_kept;
        candidates.insert(candidates.end(), worst->trailing_kept.begin(), worst->trailing_kept.end());
        std::sort(candidates.begin(), candidates.end());
        std::optional<ContractionPlan> best;
        std::uint64_t best_peak = peak;
        for (auto e : candidates) {
            auto level2 = out.sliced_level2;
            level2.push_back(e);
            auto trial = make_plan(graph, out.order, out.sliced_level1, level2);
            trial.exhaustive = out.exhaustive;
            const auto p = peak_of(trial);
            if (!best || p < best_peak) {
                best = std::move(trial);
                best_peak = p;
            }
        }
        if (!best || best_peak >= peak) {
            throw MemoryLimitError("largest intermediate (" + std::to_string(peak) +
                                   " values) cannot be sliced below the limit " + std::to_string(memory_limit));
        }
        out = std::move(*best);
        peak = best_peak;
    }
    return out;
}

/// Full planning pipeline: level-1 slicing of the inputs, order search on
/// the sliced graph, then level-2 slicing of the intermediates.
inline ContractionPlan plan_contraction(const ComputeGraph &graph, std::uint64_t memory_limit = kDefaultMemoryLimit) {
    const auto level1 = slice_level1(graph, memory_limit);
    return slice_level2(graph, find_order(graph, level1), memory_limit);
}

/// A set of values for the plan's sliced edges (ascending edge id order) and
/// a scale applied to that subgraph's contribution.
struct SliceTerm {
    std::vector<std::uint8_t> values;
    double scale = 1.0;
};

struct ContractionResult {
    /// Mixed-radix over node outputs, node 0 most significant.
    std::vector<double> values;
    std::uint64_t multiplications = 0;
};

namespace detail {

/// Contracts one sliced subgraph. `tensors[i]` carries labels for node i's
/// attached edges plus output_label(i).
inline DenseTensor contract_one(const ComputeGraph &graph, const std::vector<DenseTensor> &tensors,
                                const ContractionPlan &plan, const std::vector<std::size_t> &sliced,
                                const SliceTerm &term, std::uint64_t &mults) {
    std::vector<DenseTensor> work;
    work.reserve(tensors.size());
    for (std::size_t i = 0; i < tensors.size(); ++i) {
        DenseTensor t = tensors[i];
        for (std::size_t s = 0; s < sliced.size(); ++s) {
            const auto label = static_cast<Label>(sliced[s]);
            if (t.has(label)) {
                t = t.sliced(label, term.values[s]);
            }
        }
        for (std::size_t e = 0; e < graph.edge_count(); ++e) {
            if (graph.is_self_edge(e) && graph.edges[e].first == i && t.has(static_cast<Label>(e))) {
                t = t.summed(static_cast<Label>(e));
            }
        }
        work.push_back(std::move(t));
    }
    if (term.scale != 1.0) {
        work[plan.order[0]].scale(term.scale);
    }

    DenseTensor cluster = std::move(work[plan.order[0]]);
    for (std::size_t s = 1; s < plan.order.size(); ++s) {
        const DenseTensor &node = work[plan.order[s]];
        std::vector<Label> contracted, node_kept, cluster_kept;
        for (auto l : node.labels()) {
            if (!is_output_label(l) && cluster.has(l)) {
                contracted.push_back(l);
            } else {
                node_kept.push_back(l);
            }
        }
        for (auto l : cluster.labels()) {
            if (std::find(contracted.begin(), contracted.end(), l) == contracted.end()) {
                cluster_kept.push_back(l);
            }
        }
        for (auto l : contracted) {
            if (node.dim(l) != cluster.dim(l)) {
                throw Error("dimension mismatch on cut " + std::to_string(l));
            }
        }
        std::vector<Label> lead_order = node_kept;
        lead_order.insert(lead_order.end(), contracted.begin(), contracted.end());
        std::vector<Label> trail_order = contracted;
        trail_order.insert(trail_order.end(), cluster_kept.begin(), cluster_kept.end());
        DenseTensor leading = node.permuted(lead_order);
        DenseTensor trailing = cluster.permuted(trail_order);

        std::vector<std::size_t> out_dims;
        std::size_t rows = 1, inner = 1, cols = 1;
        for (auto l : node_kept) {
            rows *= node.dim(l);
            out_dims.push_back(node.dim(l));
        }
        for (auto l : contracted) {
            inner *= node.dim(l);
        }
        for (auto l : cluster_kept) {
            cols *= cluster.dim(l);
            out_dims.push_back(cluster.dim(l));
        }
        std::vector<Label> out_labels = node_kept;
        out_labels.insert(out_labels.end(), cluster_kept.begin(), cluster_kept.end());
        DenseTensor result(out_labels, out_dims);
        matmul(leading.values(), trailing.values(), result.values(), rows, inner, cols, mults);
        cluster = std::move(result);
    }
    std::vector<Label> final_order;
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
        final_order.push_back(output_label(i));
    }
    for (auto l : cluster.labels()) {
        if (!is_output_label(l)) {
            throw Error("uncontracted cut index " + std::to_string(l) + " left after contraction");
        }
    }
    return cluster.permuted(final_order);
}

inline std::vector<SliceTerm> all_slice_terms(std::size_t n_sliced) {
    const auto count = pow4(n_sliced);
    std::vector<SliceTerm> terms(count);
    for (std::uint64_t t = 0; t < count; ++t) {
        terms[t].values.resize(n_sliced);
        std::uint64_t rem = t;
        for (std::size_t s = n_sliced; s-- > 0;) {
            terms[t].values[s] = static_cast<std::uint8_t>(rem % kCutDim);
            rem /= kCutDim;
        }
    }
    return terms;
}

inline constexpr std::size_t kSliceBlock = 16;

}  // namespace detail

/// Contracts the listed subgraph terms and sums them. Terms are grouped in
/// fixed blocks evaluated concurrently; block partial sums are reduced in
/// ascending term order, so results do not depend on thread count.
inline ContractionResult contract_terms(const ComputeGraph &graph, const std::vector<DenseTensor> &tensors,
                                        const ContractionPlan &plan, const std::vector<SliceTerm> &terms) {
    graph.validate();
    if (tensors.size() != graph.node_count()) {
        throw Error("missing subcircuit entry tensors: have " + std::to_string(tensors.size()) + ", need " +
                    std::to_string(graph.node_count()));
    }
    for (std::size_t i = 0; i < tensors.size(); ++i) {
        if (tensors[i].dim(output_label(i)) != graph.output_dims[i]) {
            throw Error("output dimension mismatch on node " + std::to_string(i));
        }
        for (auto e : graph.node_edges(i)) {
            if (!tensors[i].has(static_cast<Label>(e)) || tensors[i].dim(static_cast<Label>(e)) != kCutDim) {
                throw Error("node " + std::to_string(i) + " tensor lacks cut index " + std::to_string(e));
            }
        }
    }
    const auto sliced = plan.sliced();
    ContractionResult out;
    std::size_t total = 1;
    for (auto d : graph.output_dims) {
        total *= d;
    }
    out.values.assign(total, 0.0);
    if (terms.empty()) {
        return out;
    }

    const std::size_t n_blocks = (terms.size() + detail::kSliceBlock - 1) / detail::kSliceBlock;
    struct Partial {
        std::vector<double> sum;
        std::uint64_t mults = 0;
    };
    auto run_block = [&](std::size_t b) {
        Partial p;
        p.sum.assign(total, 0.0);
        const auto end = std::min(terms.size(), (b + 1) * detail::kSliceBlock);
        for (std::size_t t = b * detail::kSliceBlock; t < end; ++t) {
            auto r = detail::contract_one(graph, tensors, plan, sliced, terms[t], p.mults);
            for (std::size_t i = 0; i < total; ++i) {
                p.sum[i] += r.values()[i];
            }
        }
        return p;
    };
    std::vector<Partial> partials(n_blocks);
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n_blocks, std::thread::hardware_concurrency()));
    if (workers == 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) {
            partials[b] = run_block(b);
        }
    } else {
        std::vector<std::future<void>> futs;
        for (std::size_t w = 0; w < workers; ++w) {
            futs.push_back(std::async(std::launch::async, [&, w] {
                for (std::size_t b = w; b < n_blocks; b += workers) {
                    partials[b] = run_block(b);
                }
            }));
        }
        for (auto &f : futs) {
            f.get();
        }
    }
    for (const auto &p : partials) {
        for (std::size_t i = 0; i < total; ++i) {
            out.values[i] += p.sum[i];
        }
        out.multiplications += p.mults;
    }
    return out;
}

/// Exact contraction: sums every assignment of the plan's sliced edges.
inline ContractionResult contract(const ComputeGraph &graph, const std::vector<DenseTensor> &tensors,
                                  const ContractionPlan &plan) {
    return contract_terms(graph, tensors, plan, detail::all_slice_terms(plan.sliced().size()));
}

}  // namespace qcut
