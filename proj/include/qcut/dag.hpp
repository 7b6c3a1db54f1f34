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

#include <array>
#include <optional>
#include <vector>

#include "qcut/circuit.hpp"

namespace qcut {

/// A two-qubit gate of the circuit.
struct DagVertex {
    std::size_t gate_index;
    std::array<std::size_t, 2> qubits;
};

/// Qubit-line segment between two consecutive two-qubit gates on `qubit`.
struct DagEdge {
    std::size_t src;
    std::size_t dst;
    std::size_t qubit;

    bool operator==(const DagEdge &) const = default;
};

/// Two-qubit-gate DAG used for partitioning. Single-qubit gates are not
/// vertices; each one is attached to the nearest two-qubit gate on its line.
struct GateDag {
    std::size_t n_qubits = 0;
    std::vector<DagVertex> vertices;
    std::vector<DagEdge> edges;
    /// Per circuit gate: owning vertex, or nullopt for gates on idle lines.
    std::vector<std::optional<std::size_t>> gate_vertex;
    /// Per qubit line: its vertices in time order.
    std::vector<std::vector<std::size_t>> line_vertices;

    std::size_t vertex_count() const { return vertices.size(); }

    std::vector<std::size_t> idle_lines() const {
        std::vector<std::size_t> out;
        for (std::size_t q = 0; q < line_vertices.size(); ++q) {
            if (line_vertices[q].empty()) {
                out.push_back(q);
            }
        }
        return out;
    }
};

inline GateDag build_dag(const Circuit &circuit) {
    GateDag dag;
    dag.n_qubits = circuit.n_qubits();
    dag.gate_vertex.assign(circuit.size(), std::nullopt);
    dag.line_vertices.assign(circuit.n_qubits(), {});

    // Per line: the gate indices touching it, in order.
    std::vector<std::vector<std::size_t>> line_gates(circuit.n_qubits());
    const auto &gates = circuit.gates();
    for (std::size_t gi = 0; gi < gates.size(); ++gi) {
        const auto &g = gates[gi];
        for (auto q : g.qubits) {
            line_gates[q].push_back(gi);
        }
        if (g.is_two_qubit()) {
            const std::size_t v = dag.vertices.size();
            dag.vertices.push_back({gi, {g.qubits[0], g.qubits[1]}});
            dag.gate_vertex[gi] = v;
            for (auto q : g.qubits) {
                auto &lv = dag.line_vertices[q];
                if (!lv.empty()) {
                    dag.edges.push_back({lv.back(), v, q});
                }
                lv.push_back(v);
            }
        }
    }

    for (std::size_t q = 0; q < circuit.n_qubits(); ++q) {
        const auto &lg = line_gates[q];
        for (std::size_t pos = 0; pos < lg.size(); ++pos) {
            const std::size_t gi = lg[pos];
            if (gates[gi].is_two_qubit()) {
                continue;
            }
            std::optional<std::size_t> before, after;
            for (std::size_t p = pos; p-- > 0;) {
                if (gates[lg[p]].is_two_qubit()) {
                    before = p;
                    break;
                }
            }
            for (std::size_t p = pos + 1; p < lg.size(); ++p) {
                if (gates[lg[p]].is_two_qubit()) {
                    after = p;
                    break;
                }
            }
            std::optional<std::size_t> pick;
            if (before && after) {
                // ties go to the earlier gate
                pick = (pos - *before <= *after - pos) ? before : after;
            } else {
                pick = before ? before : after;
            }
            if (pick) {
                dag.gate_vertex[gi] = dag.gate_vertex[lg[*pick]];
            }
        }
    }
    return dag;
}

}  // namespace qcut
