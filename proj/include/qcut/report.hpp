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

#include <string>
#include <vector>

#include "json.hpp"
#include "qcut/contraction.hpp"
#include "qcut/cut_solver.hpp"
#include "qcut/merge.hpp"

namespace qcut {

using Json = nlohmann::json;

inline constexpr int kReportSchemaVersion = 1;

inline Json to_json(const CutSolution &s, const GateDag &dag, const CutCircuit &cc) {
    Json cuts = Json::array();
    for (const auto &c : cc.cuts) {
        cuts.push_back({{"gate_index_a", c.gate_a},
                        {"gate_index_b", c.gate_b},
                        {"qubit", c.qubit},
                        {"measure_subcircuit", c.measure.subcircuit},
                        {"init_subcircuit", c.init.subcircuit}});
    }
    Json subcircuit_map = Json::array();
    for (std::size_t v = 0; v < s.assignment.size(); ++v) {
        subcircuit_map.push_back({{"gate_index", dag.vertices[v].gate_index}, {"subcircuit", s.assignment[v]}});
    }
    Json fragments = Json::array();
    for (const auto &f : cc.fragments) {
        std::vector<std::size_t> outs;
        for (const auto &o : f.outputs) {
            outs.push_back(o.qubit);
        }
        fragments.push_back({{"id", f.id},
                             {"qubits", f.width()},
                             {"output_qubits", outs},
                             {"attached_cuts", f.attached.size()},
                             {"gates", f.circuit.gates().size()}});
    }
    return {{"n_subcircuits", s.n_subcircuits},
            {"K", s.cut_count()},
            {"L", s.objective},
            {"proven_optimal", s.proven_optimal},
            {"cut_edges", cuts},
            {"subcircuit_map", subcircuit_map},
            {"gate_counts", s.gate_counts},
            {"incoming", s.incoming},
            {"outgoing", s.outgoing},
            {"qubit_counts", s.qubit_counts},
            {"effective_qubit_counts", s.output_counts},
            {"fragments", fragments}};
}

inline Json to_json(const QuantumArea &qa) {
    return {{"full_area", qa.full_area}, {"max_subcircuit_area", qa.max_subcircuit_area}, {"ratio", qa.ratio}};
}

inline Json to_json(const ComputeGraph &g) {
    Json edges = Json::array();
    for (const auto &[a, b] : g.edges) {
        edges.push_back({a, b});
    }
    return {{"output_dims", g.output_dims}, {"edges", edges}};
}

inline Json to_json(const ContractionPlan &p, const CostReport &c) {
    Json steps = Json::array();
    for (const auto &s : p.steps) {
        steps.push_back({{"node", s.node},
                         {"contracted", s.contracted},
                         {"leading_kept", s.leading_kept},
                         {"trailing_kept", s.trailing_kept},
                         {"rows", s.rows},
                         {"inner", s.inner},
                         {"cols", s.cols},
                         {"multiplications", s.multiplications},
                         {"operand_storage", s.operand_storage},
                         {"result_storage", s.result_storage}});
    }
    return {{"order", p.order},
            {"exhaustive_order", p.exhaustive},
            {"sliced_level1", p.sliced_level1},
            {"sliced_level2", p.sliced_level2},
            {"subgraph_count", c.subgraph_count},
            {"steps", steps},
            {"input_storage", c.input_storage},
            {"peak_intermediate_storage", c.peak_intermediate_storage},
            {"multiplications_per_subgraph", c.multiplications_per_subgraph},
            {"predicted_multiplications", c.multiplications}};
}

inline Json to_json(const MergeState &st, bool include_bins) {
    Json trace = Json::array();
    for (const auto &r : st.trace) {
        Json rec = {{"recursion", r.recursion},
                    {"bin_counts", r.bin_counts},
                    {"parent_probability", r.parent_probability},
                    {"children_sum", r.children_sum},
                    {"multiplications", r.multiplications},
                    {"list_size", r.list_size}};
        if (include_bins) {
            rec["bin_probabilities"] = r.bin_probabilities;
        }
        trace.push_back(std::move(rec));
    }
    Json sols = Json::array();
    for (const auto &s : st.solutions) {
        sols.push_back({{"bitstring", s.bitstring}, {"probability", s.probability}, {"found_at", s.found_at}});
    }
    return {{"max_bins", st.options.max_bins},
            {"top_r", st.options.top_r},
            {"max_recursions", st.options.max_recursions},
            {"solution_threshold", st.threshold},
            {"recursions", st.recursions},
            {"max_conservation_error", st.max_conservation_error},
            {"solutions", sols},
            {"trace", trace}};
}

/// Graph-spec input for cost-only runs:
/// {"output_dims": [...], "edges": [[a, b], ...], "order": [...]?}
inline ComputeGraph graph_from_json(const Json &j) {
    ComputeGraph g;
    g.output_dims = j.at("output_dims").get<std::vector<std::size_t>>();
    for (const auto &e : j.at("edges")) {
        g.edges.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
    }
    g.validate();
    return g;
}

}  // namespace qcut
