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
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qcut/contraction.hpp"
#include "qcut/fragments.hpp"
#include "qcut/statevector.hpp"
#include "qcut/subsim.hpp"

namespace qcut {

struct SolverOptions {
    double alpha = 0.5;
    double time_limit_s = 30.0;
    std::size_t degree_cap = kDefaultDegreeCap;
    std::size_t width_cap = kDefaultSimulatorCap;
};

/// Partition of the DAG vertices into subcircuits and the derived cut set.
struct CutSolution {
    std::size_t n_subcircuits = 0;
    /// Subcircuit of every DAG vertex.
    std::vector<std::size_t> assignment;
    /// DAG edges whose endpoints sit in different subcircuits.
    std::vector<std::size_t> cut_edges;
    std::size_t objective = 0;  // max_c (I_c + O_c)
    std::vector<std::size_t> gate_counts;
    std::vector<std::size_t> incoming;
    std::vector<std::size_t> outgoing;
    std::vector<std::size_t> qubit_counts;
    std::vector<std::size_t> output_counts;
    /// True when the search finished within its time limit.
    bool proven_optimal = false;
    /// Predicted post-processing multiplications (set by find_cuts).
    std::uint64_t predicted_multiplications = 0;

    std::size_t cut_count() const { return cut_edges.size(); }
};

/// Largest subcircuit gate count allowed by load factor `alpha`.
inline std::size_t load_cap(double alpha, std::size_t n_vertices) {
    return static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(n_vertices) - 1e-9));
}

/// Recomputes all derived fields of a solution from its assignment.
inline CutSolution describe_partition(const GateDag &dag, std::vector<std::size_t> assignment,
                                      std::size_t n_subcircuits) {
    CutSolution s;
    s.n_subcircuits = n_subcircuits;
    s.assignment = std::move(assignment);
    s.gate_counts.assign(n_subcircuits, 0);
    s.incoming.assign(n_subcircuits, 0);
    s.outgoing.assign(n_subcircuits, 0);
    for (auto c : s.assignment) {
        ++s.gate_counts[c];
    }
    for (std::size_t e = 0; e < dag.edges.size(); ++e) {
        const auto a = s.assignment[dag.edges[e].src];
        const auto b = s.assignment[dag.edges[e].dst];
        if (a != b) {
            s.cut_edges.push_back(e);
            ++s.outgoing[a];
            ++s.incoming[b];
        }
    }
    for (std::size_t c = 0; c < n_subcircuits; ++c) {
        s.objective = std::max(s.objective, s.incoming[c] + s.outgoing[c]);
    }
    s.qubit_counts = fragment_widths(dag, s.assignment, n_subcircuits);
    s.output_counts = fragment_outputs(dag, s.assignment, n_subcircuits);
    return s;
}

struct SolverTimeout : Error {
    using Error::Error;
};

namespace detail {

class PartitionSearch {
public:
    PartitionSearch(const GateDag &dag, std::size_t n_sub, std::size_t cap, const SolverOptions &opt)
        : dag_(dag), n_sub_(n_sub), cap_(cap), opt_(opt), n_(dag.vertex_count()), y_(n_, 0), size_(n_sub, 0),
          deg_(n_sub, 0), in_edges_(n_) {
        for (std::size_t e = 0; e < dag.edges.size(); ++e) {
            in_edges_[dag.edges[e].dst].push_back(dag.edges[e].src);
        }
        best_ = opt.degree_cap + 1;
        start_ = std::chrono::steady_clock::now();
    }

    /// Returns true when the search completed.
    bool run() {
        if (n_ == 0) {
            return true;
        }
        dfs(0, 0);
        return !timed_out_;
    }

    const std::optional<std::vector<std::size_t>> &incumbent() const { return incumbent_; }

private:
    void dfs(std::size_t v, std::size_t used) {
        if (timed_out_) {
            return;
        }
        if ((++nodes_ & 0xFFFU) == 0) {
            const std::chrono::duration<double> el = std::chrono::steady_clock::now() - start_;
            if (el.count() > opt_.time_limit_s) {
                timed_out_ = true;
                return;
            }
        }
        if (v == n_) {
            if (used != n_sub_) {
                return;
            }
            auto widths = fragment_widths(dag_, y_, n_sub_);
            if (*std::max_element(widths.begin(), widths.end()) > opt_.width_cap) {
                return;
            }
            best_ = *std::max_element(deg_.begin(), deg_.end());
            incumbent_ = y_;
            return;
        }
        const std::size_t remaining = n_ - v - 1;
        const std::size_t limit = std::min(used + 1, n_sub_);
        for (std::size_t c = 0; c < limit; ++c) {
            if (size_[c] >= cap_) {
                continue;
            }
            const std::size_t used_after = std::max(used, c + 1);
            if (remaining < n_sub_ - used_after) {
                continue;
            }
            y_[v] = c;
            ++size_[c];
            std::size_t bound = 0;
            std::vector<std::size_t> touched;
            for (auto u : in_edges_[v]) {
                if (y_[u] != c) {
                    ++deg_[y_[u]];
                    ++deg_[c];
                    touched.push_back(y_[u]);
                }
            }
            bound = *std::max_element(deg_.begin(), deg_.end());
            if (bound < best_) {
                dfs(v + 1, used_after);
            }
            for (auto t : touched) {
                --deg_[t];
                --deg_[c];
            }
            --size_[c];
            if (timed_out_) {
                return;
            }
        }
    }

    const GateDag &dag_;
    std::size_t n_sub_;
    std::size_t cap_;
    SolverOptions opt_;
    std::size_t n_;
    std::vector<std::size_t> y_;
    std::vector<std::size_t> size_;
    std::vector<std::size_t> deg_;
    std::vector<std::vector<std::size_t>> in_edges_;
    std::size_t best_;
    std::optional<std::vector<std::size_t>> incumbent_;
    std::chrono::steady_clock::time_point start_;
    std::uint64_t nodes_ = 0;
    bool timed_out_ = false;
};

}  // namespace detail

/// Minimizes max_c (I_c + O_c) over partitions of the DAG into exactly
/// `n_subcircuits` non-empty parts of at most ceil(alpha |V|) gates each.
/// Branch and bound over vertex assignments in circuit order; vertex 0 sits
/// in subcircuit 0 and labels appear in order of their smallest vertex. The
/// lexicographically smallest optimal assignment is returned. When the time
/// limit hits, the best incumbent is returned with proven_optimal = false.
inline CutSolution solve_partition(const GateDag &dag, std::size_t n_subcircuits, const SolverOptions &opt) {
    if (n_subcircuits == 0) {
        throw Error("need at least one subcircuit");
    }
    const std::size_t n = dag.vertex_count();
    if (n == 0) {
        throw InfeasibleError("circuit has no two-qubit gates; nothing to cut");
    }
    if (n_subcircuits > n) {
        throw InfeasibleError("cannot split " + std::to_string(n) + " gates into " + std::to_string(n_subcircuits) +
                              " non-empty subcircuits");
    }
    const auto cap = load_cap(opt.alpha, n);
    if (cap == 0 || cap * n_subcircuits < n) {
        throw InfeasibleError("load factor " + std::to_string(opt.alpha) + " admits at most " + std::to_string(cap) +
                              " gates per subcircuit; " + std::to_string(n_subcircuits) + " subcircuits cannot hold " +
                              std::to_string(n) + " gates");
    }
    detail::PartitionSearch search(dag, n_subcircuits, cap, opt);
    const bool complete = search.run();
    if (!search.incumbent()) {
        if (complete) {
            throw InfeasibleError("no partition into " + std::to_string(n_subcircuits) +
                                  " subcircuits meets the load, degree and width limits");
        }
        throw SolverTimeout("no feasible partition found within " + std::to_string(opt.time_limit_s) + " s");
    }
    auto sol = describe_partition(dag, *search.incumbent(), n_subcircuits);
    sol.proven_optimal = complete;
    return sol;
}

/// Tries n_C = 2..max_subcircuits and keeps the solution with the fewest
/// predicted post-processing multiplications (ties: fewer cuts, then fewer
/// subcircuits).
inline CutSolution find_cuts(const Circuit &circuit, const GateDag &dag, std::size_t max_subcircuits,
                             const SolverOptions &opt) {
    if (max_subcircuits < 2) {
        throw Error("max subcircuits must be at least 2");
    }
    std::optional<CutSolution> best;
    std::string last_error = "no candidate subcircuit count";
    for (std::size_t nc = 2; nc <= max_subcircuits; ++nc) {
        CutSolution sol;
        try {
            sol = solve_partition(dag, nc, opt);
        } catch (const InfeasibleError &e) {
            last_error = e.what();
            continue;
        } catch (const SolverTimeout &e) {
            last_error = e.what();
            continue;
        }
        const auto cc = cut_circuit(circuit, dag, sol.assignment, nc);
        sol.predicted_multiplications = predict_cost(compute_graph(cc), find_order(compute_graph(cc))).multiplications;
        const bool better =
            !best || sol.predicted_multiplications < best->predicted_multiplications ||
            (sol.predicted_multiplications == best->predicted_multiplications && sol.cut_count() < best->cut_count());
        if (better) {
            best = std::move(sol);
        }
    }
    if (!best) {
        throw InfeasibleError("no feasible cut solution for 2.." + std::to_string(max_subcircuits) +
                              " subcircuits: " + last_error);
    }
    return *best;
}

struct QuantumArea {
    std::size_t full_area = 0;
    std::size_t max_subcircuit_area = 0;
    double ratio = 1.0;
};

/// Width x depth of the circuit against the largest rebuilt fragment.
inline QuantumArea quantum_area(const CutSolution &solution, const Circuit &circuit, const GateDag &dag) {
    QuantumArea qa;
    qa.full_area = circuit.n_qubits() * circuit.depth();
    const auto cc = cut_circuit(circuit, dag, solution.assignment, solution.n_subcircuits);
    for (const auto &f : cc.fragments) {
        qa.max_subcircuit_area = std::max(qa.max_subcircuit_area, f.width() * f.circuit.depth());
    }
    qa.ratio = qa.full_area ? static_cast<double>(qa.max_subcircuit_area) / static_cast<double>(qa.full_area) : 1.0;
    return qa;
}

}  // namespace qcut
