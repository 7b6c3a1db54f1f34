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
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcut/dag.hpp"

namespace qcut {

enum class CutSide : std::uint8_t { Measure, Init };

/// One end of a cut as seen from a subcircuit.
struct CutRole {
    std::size_t cut_id;
    CutSide side;
    std::size_t subcircuit;
    std::size_t local_qubit;
};

/// A severed qubit-line segment between two consecutive two-qubit gates.
struct Cut {
    std::size_t id;
    std::size_t dag_edge;
    std::size_t qubit;
    std::size_t gate_a;  // circuit index of the upstream two-qubit gate
    std::size_t gate_b;  // circuit index of the downstream two-qubit gate
    CutRole measure;
    CutRole init;
};

struct OutputQubit {
    std::size_t qubit;  // global line
    std::size_t local;  // local qubit inside the fragment
};

/// A subcircuit rebuilt as a standalone circuit over its local qubits.
struct Fragment {
    std::size_t id = 0;
    Circuit circuit;
    /// Output qubits sorted by global line; entry index bits follow this order.
    std::vector<OutputQubit> outputs;
    /// Attached cut roles sorted by cut id.
    std::vector<CutRole> attached;

    std::size_t width() const { return circuit.n_qubits(); }
    std::size_t n_outputs() const { return outputs.size(); }
};

/// A circuit split into fragments by a vertex partition of its DAG.
struct CutCircuit {
    std::size_t n_qubits = 0;
    std::vector<Fragment> fragments;
    std::vector<Cut> cuts;
    /// Per global qubit: owning fragment of its output segment.
    std::vector<std::size_t> output_fragment;
};

namespace detail {

struct LineState {
    std::size_t sub;
    std::size_t local;
};

/// Local-qubit counts per subcircuit, ignoring idle lines.
inline std::vector<std::size_t> segment_counts(const GateDag &dag, const std::vector<std::size_t> &assignment,
                                               std::size_t n_subcircuits) {
    std::vector<std::size_t> count(n_subcircuits, 0);
    for (const auto &lv : dag.line_vertices) {
        std::optional<std::size_t> prev;
        for (auto v : lv) {
            const auto c = assignment[v];
            if (!prev || *prev != c) {
                ++count[c];
            }
            prev = c;
        }
    }
    return count;
}

/// Subcircuit receiving each idle line: the one with the fewest local qubits
/// at the time of assignment, ties to the lowest index.
inline std::map<std::size_t, std::size_t> assign_idle_lines(const GateDag &dag,
                                                            const std::vector<std::size_t> &assignment,
                                                            std::size_t n_subcircuits) {
    auto count = segment_counts(dag, assignment, n_subcircuits);
    std::map<std::size_t, std::size_t> out;
    for (auto q : dag.idle_lines()) {
        auto it = std::min_element(count.begin(), count.end());
        const auto c = static_cast<std::size_t>(it - count.begin());
        out[q] = c;
        ++count[c];
    }
    return out;
}

}  // namespace detail

/// Local qubit count of every subcircuit under `assignment`.
inline std::vector<std::size_t> fragment_widths(const GateDag &dag, const std::vector<std::size_t> &assignment,
                                                std::size_t n_subcircuits) {
    auto count = detail::segment_counts(dag, assignment, n_subcircuits);
    for (auto [q, c] : detail::assign_idle_lines(dag, assignment, n_subcircuits)) {
        ++count[c];
    }
    return count;
}

/// Output (data) qubit count of every subcircuit under `assignment`.
inline std::vector<std::size_t> fragment_outputs(const GateDag &dag, const std::vector<std::size_t> &assignment,
                                                 std::size_t n_subcircuits) {
    std::vector<std::size_t> count(n_subcircuits, 0);
    for (const auto &lv : dag.line_vertices) {
        if (!lv.empty()) {
            ++count[assignment[lv.back()]];
        }
    }
    for (auto [q, c] : detail::assign_idle_lines(dag, assignment, n_subcircuits)) {
        ++count[c];
    }
    return count;
}

/// Splits `circuit` into fragments. `assignment[v]` is the subcircuit of DAG
/// vertex v; single-qubit gates follow their attached vertex.
inline CutCircuit cut_circuit(const Circuit &circuit, const GateDag &dag, const std::vector<std::size_t> &assignment,
                              std::size_t n_subcircuits) {
    if (assignment.size() != dag.vertex_count()) {
        throw Error("assignment size does not match the DAG");
    }
    for (auto c : assignment) {
        if (c >= n_subcircuits) {
            throw Error("assignment refers to subcircuit " + std::to_string(c) + " of " +
                        std::to_string(n_subcircuits));
        }
    }
    const auto idle = detail::assign_idle_lines(dag, assignment, n_subcircuits);
    const auto &gates = circuit.gates();

    std::vector<std::size_t> gate_sub(gates.size());
    for (std::size_t gi = 0; gi < gates.size(); ++gi) {
        if (dag.gate_vertex[gi]) {
            gate_sub[gi] = assignment[*dag.gate_vertex[gi]];
        } else {
            gate_sub[gi] = idle.at(gates[gi].qubits[0]);
        }
    }

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_by_src;  // (src vertex, qubit) -> edge
    for (std::size_t e = 0; e < dag.edges.size(); ++e) {
        edge_by_src[{dag.edges[e].src, dag.edges[e].qubit}] = e;
    }

    std::vector<std::size_t> width(n_subcircuits, 0);
    std::vector<std::optional<detail::LineState>> current(circuit.n_qubits());
    std::vector<std::optional<std::size_t>> last_vertex(circuit.n_qubits());
    std::vector<Cut> cuts;
    // local operands of every gate, resolved in time order
    std::vector<std::vector<std::size_t>> gate_locals(gates.size());

    for (std::size_t gi = 0; gi < gates.size(); ++gi) {
        const auto c = gate_sub[gi];
        for (auto q : gates[gi].qubits) {
            auto &cur = current[q];
            if (!cur) {
                cur = detail::LineState{c, width[c]++};
            } else if (cur->sub != c) {
                const detail::LineState next{c, width[c]++};
                const auto e = edge_by_src.at({*last_vertex[q], q});
                Cut cut;
                cut.id = 0;
                cut.dag_edge = e;
                cut.qubit = q;
                cut.gate_a = dag.vertices[dag.edges[e].src].gate_index;
                cut.gate_b = dag.vertices[dag.edges[e].dst].gate_index;
                cut.measure = {0, CutSide::Measure, cur->sub, cur->local};
                cut.init = {0, CutSide::Init, next.sub, next.local};
                cuts.push_back(cut);
                cur = next;
            }
            gate_locals[gi].push_back(cur->local);
        }
        if (dag.gate_vertex[gi] && gates[gi].is_two_qubit()) {
            for (auto q : gates[gi].qubits) {
                last_vertex[q] = *dag.gate_vertex[gi];
            }
        }
    }

    CutCircuit out;
    out.n_qubits = circuit.n_qubits();
    out.output_fragment.assign(circuit.n_qubits(), 0);
    for (std::size_t q = 0; q < circuit.n_qubits(); ++q) {
        if (!current[q]) {
            // line without any gate
            const auto c = idle.at(q);
            current[q] = detail::LineState{c, width[c]++};
        }
    }

    std::sort(cuts.begin(), cuts.end(), [](const Cut &a, const Cut &b) { return a.dag_edge < b.dag_edge; });
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        cuts[i].id = cuts[i].measure.cut_id = cuts[i].init.cut_id = i;
    }

    out.fragments.resize(n_subcircuits);
    for (std::size_t c = 0; c < n_subcircuits; ++c) {
        out.fragments[c].id = c;
        if (width[c] == 0) {
            throw Error("subcircuit " + std::to_string(c) + " is empty");
        }
        out.fragments[c].circuit = Circuit(width[c]);
    }
    for (std::size_t gi = 0; gi < gates.size(); ++gi) {
        out.fragments[gate_sub[gi]].circuit.append(gates[gi].kind, gate_locals[gi], gates[gi].params);
    }
    for (std::size_t q = 0; q < circuit.n_qubits(); ++q) {
        out.fragments[current[q]->sub].outputs.push_back({q, current[q]->local});
        out.output_fragment[q] = current[q]->sub;
    }
    for (const auto &cut : cuts) {
        out.fragments[cut.measure.subcircuit].attached.push_back(cut.measure);
        out.fragments[cut.init.subcircuit].attached.push_back(cut.init);
    }
    for (auto &f : out.fragments) {
        std::sort(f.attached.begin(), f.attached.end(),
                  [](const CutRole &a, const CutRole &b) { return a.cut_id < b.cut_id; });
    }
    out.cuts = std::move(cuts);
    return out;
}

}  // namespace qcut
