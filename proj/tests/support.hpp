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
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "qcut/benchmarks.hpp"
#include "qcut/cut_solver.hpp"
#include "qcut/rng.hpp"
#include "qcut/subsim.hpp"

namespace qcut::testing {

/// Random circuit with `n_two` two-qubit gates and a sprinkle of random
/// single-qubit gates from the full gate set.
inline Circuit random_circuit(std::size_t n, std::size_t n_two, std::uint64_t seed, double single_rate = 1.0) {
    SplitMix64 rng(seed);
    Circuit c(n);
    const GateKind singles[] = {GateKind::H, GateKind::X, GateKind::Y, GateKind::Z, GateKind::S,
                                GateKind::T, GateKind::RX, GateKind::RY, GateKind::RZ};
    auto add_single = [&] {
        const auto kind = singles[rng.below(9)];
        const std::size_t q = rng.below(n);
        if (kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ) {
            c.append(kind, {q}, {2.0 * std::numbers::pi * rng.uniform() - std::numbers::pi});
        } else {
            c.append(kind, {q});
        }
    };
    for (std::size_t q = 0; q < n; ++q) {
        c.append(GateKind::H, {q});
    }
    for (std::size_t g = 0; g < n_two; ++g) {
        while (rng.uniform() < single_rate / (1.0 + single_rate)) {
            add_single();
        }
        const std::size_t a = rng.below(n);
        std::size_t b = rng.below(n - 1);
        if (b >= a) {
            ++b;
        }
        c.append(rng.below(2) ? GateKind::CX : GateKind::CZ, {a, b});
    }
    for (std::size_t q = 0; q < n; ++q) {
        if (rng.below(2)) {
            add_single();
        }
    }
    return c;
}

struct ExhaustiveResult {
    std::optional<std::size_t> objective;
    /// Lexicographically smallest optimal assignment in canonical labelling.
    std::vector<std::size_t> assignment;
};

/// Minimum of max_c (I_c + O_c) over all n_C^|V| assignments.
inline ExhaustiveResult exhaustive_partition(const GateDag &dag, std::size_t n_c, double alpha,
                                             std::size_t degree_cap = kDefaultDegreeCap,
                                             std::size_t width_cap = kDefaultSimulatorCap) {
    const std::size_t n = dag.vertex_count();
    const auto cap = load_cap(alpha, n);
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total *= n_c;
    }
    ExhaustiveResult best;
    std::vector<std::size_t> y(n);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t rem = code;
        for (std::size_t v = n; v-- > 0;) {
            y[v] = rem % n_c;
            rem /= n_c;
        }
        // canonical labels only: label of first appearance increases
        std::size_t next = 0;
        bool canonical = true;
        for (auto c : y) {
            if (c > next) {
                canonical = false;
                break;
            }
            if (c == next) {
                ++next;
            }
        }
        if (!canonical || next != n_c) {
            continue;
        }
        std::vector<std::size_t> size(n_c, 0), deg(n_c, 0);
        for (auto c : y) {
            ++size[c];
        }
        if (*std::max_element(size.begin(), size.end()) > cap) {
            continue;
        }
        for (const auto &e : dag.edges) {
            if (y[e.src] != y[e.dst]) {
                ++deg[y[e.src]];
                ++deg[y[e.dst]];
            }
        }
        const auto l = *std::max_element(deg.begin(), deg.end());
        if (l > degree_cap) {
            continue;
        }
        const auto widths = fragment_widths(dag, y, n_c);
        if (*std::max_element(widths.begin(), widths.end()) > width_cap) {
            continue;
        }
        if (!best.objective || l < *best.objective) {
            best.objective = l;
            best.assignment = y;
        }
    }
    return best;
}

inline double linf(const std::vector<double> &a, const std::vector<double> &b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

/// Exact reconstruction of `c` cut into `n_c` subcircuits by the solver.
struct Reconstruction {
    CutCircuit cc;
    std::vector<double> probabilities;
    std::uint64_t multiplications = 0;
    std::uint64_t predicted = 0;
};

inline Reconstruction reconstruct(const Circuit &c, const std::vector<std::size_t> &assignment, std::size_t n_c,
                                  std::uint64_t memory_limit = kDefaultMemoryLimit) {
    const auto dag = build_dag(c);
    Reconstruction r;
    r.cc = cut_circuit(c, dag, assignment, n_c);
    const auto g = compute_graph(r.cc);
    const auto plan = plan_contraction(g, memory_limit);
    EntryCache cache(r.cc);
    const auto res = contract(g, cache.all_full(), plan);
    r.probabilities = to_global_order(res.values, r.cc);
    r.multiplications = res.multiplications;
    r.predicted = predict_cost(g, plan).multiplications;
    return r;
}

/// The three-node compute graph of the worked cost example.
inline ComputeGraph three_node_graph() {
    ComputeGraph g;
    g.output_dims = {2, 1, 16};
    g.edges = {{0, 1}, {0, 2}, {0, 2}, {1, 2}};
    return g;
}

/// Random compute graph with random tensors (labels: attached edges
/// ascending, then the output label).
inline ComputeGraph random_graph(SplitMix64 &rng, std::size_t nodes, std::size_t edges, std::size_t max_out_bits) {
    ComputeGraph g;
    for (std::size_t i = 0; i < nodes; ++i) {
        g.output_dims.push_back(std::size_t{1} << rng.below(max_out_bits + 1));
    }
    for (std::size_t e = 0; e < edges; ++e) {
        const std::size_t a = rng.below(nodes);
        std::size_t b = rng.below(nodes - 1);
        if (b >= a) {
            ++b;
        }
        g.edges.emplace_back(a, b);
    }
    return g;
}

inline std::vector<DenseTensor> random_tensors(SplitMix64 &rng, const ComputeGraph &g) {
    std::vector<DenseTensor> out;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        std::vector<Label> labels;
        std::vector<std::size_t> dims;
        for (auto e : g.node_edges(i)) {
            labels.push_back(static_cast<Label>(e));
            dims.push_back(kCutDim);
        }
        labels.push_back(output_label(i));
        dims.push_back(g.output_dims[i]);
        DenseTensor t(labels, dims);
        for (auto &v : t.values()) {
            v = 2.0 * rng.uniform() - 1.0;
        }
        out.push_back(std::move(t));
    }
    return out;
}

/// Reference contraction: explicit sum over all 4^K assignments of the
/// outer products, nodes in index order.
inline std::vector<double> brute_force_contract(const ComputeGraph &g, const std::vector<DenseTensor> &tensors) {
    std::size_t total = 1;
    for (auto d : g.output_dims) {
        total *= d;
    }
    std::vector<double> out(total, 0.0);
    const std::size_t k_cuts = g.edge_count();
    const std::size_t terms = std::size_t{1} << (2 * k_cuts);
    std::vector<std::size_t> digit(g.node_count());
    for (std::size_t k = 0; k < terms; ++k) {
        std::vector<const double *> rows;
        for (std::size_t i = 0; i < g.node_count(); ++i) {
            std::size_t row = 0;
            for (auto l : tensors[i].labels()) {
                if (!is_output_label(l)) {
                    row = row * 4 + ((k >> (2 * (k_cuts - 1 - static_cast<std::size_t>(l)))) & 3U);
                }
            }
            rows.push_back(tensors[i].values().data() + row * g.output_dims[i]);
        }
        for (std::size_t idx = 0; idx < total; ++idx) {
            std::size_t rem = idx;
            double v = 1.0;
            for (std::size_t i = g.node_count(); i-- > 0;) {
                v *= rows[i][rem % g.output_dims[i]];
                rem /= g.output_dims[i];
            }
            out[idx] += v;
        }
    }
    return out;
}

}  // namespace qcut::testing
