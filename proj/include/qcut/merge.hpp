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
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "qcut/contraction.hpp"
#include "qcut/subsim.hpp"

namespace qcut {

/// Per-subcircuit binning of one recursion.
struct BinAssignment {
    std::size_t recursion = 0;
    /// Local states under analysis per subcircuit, ascending.
    std::vector<std::vector<std::uint64_t>> states;
    /// Bin count l'_i per subcircuit.
    std::vector<std::size_t> bin_counts;

    std::uint64_t total_bins() const {
        std::uint64_t p = 1;
        for (auto l : bin_counts) {
            p = detail::sat_mul(p, l);
        }
        return p;
    }

    /// Bin of the state at position j of subcircuit i (round robin).
    std::size_t bin_of_position(std::size_t i, std::size_t j) const { return j % bin_counts[i]; }

    /// Members of bin b of subcircuit i, ascending.
    std::vector<std::uint64_t> members(std::size_t i, std::size_t b) const {
        std::vector<std::uint64_t> out;
        for (std::size_t j = b; j < states[i].size(); j += bin_counts[i]) {
            out.push_back(states[i][j]);
        }
        return out;
    }

    std::vector<BinMap> bin_maps(const CutCircuit &cc) const {
        std::vector<BinMap> maps(states.size());
        for (std::size_t i = 0; i < states.size(); ++i) {
            maps[i].n_bins = bin_counts[i];
            maps[i].bin_of_state.assign(std::size_t{1} << cc.fragments[i].n_outputs(), -1);
            for (std::size_t j = 0; j < states[i].size(); ++j) {
                maps[i].bin_of_state[states[i][j]] = static_cast<std::int64_t>(bin_of_position(i, j));
            }
        }
        return maps;
    }
};

/// Halves the largest count (ceil, ties to the lowest index) until the
/// product fits in `max_bins`.
inline std::vector<std::size_t> halve_bin_counts(std::vector<std::size_t> counts, std::uint64_t max_bins) {
    if (max_bins == 0) {
        throw Error("max bins must be at least 1");
    }
    auto product = [&] {
        std::uint64_t p = 1;
        for (auto l : counts) {
            p = detail::sat_mul(p, l);
        }
        return p;
    };
    while (product() > max_bins) {
        auto it = std::max_element(counts.begin(), counts.end());
        *it = (*it + 1) / 2;
    }
    return counts;
}

/// Builds the bin assignment of one recursion. `states[i]` lists the local
/// states of subcircuit i inside the bin being expanded.
inline BinAssignment assign_states(std::size_t recursion, std::vector<std::vector<std::uint64_t>> states,
                                   std::uint64_t max_bins) {
    BinAssignment a;
    a.recursion = recursion;
    std::vector<std::size_t> counts;
    for (auto &s : states) {
        std::sort(s.begin(), s.end());
        counts.push_back(s.size());
    }
    a.bin_counts = halve_bin_counts(std::move(counts), max_bins);
    a.states = std::move(states);
    return a;
}

/// Root assignment: every local state of every subcircuit.
inline BinAssignment assign_root(const CutCircuit &cc, std::uint64_t max_bins) {
    std::vector<std::vector<std::uint64_t>> states;
    for (const auto &f : cc.fragments) {
        std::vector<std::uint64_t> all(std::size_t{1} << f.n_outputs());
        std::iota(all.begin(), all.end(), std::uint64_t{0});
        states.push_back(std::move(all));
    }
    return assign_states(0, std::move(states), max_bins);
}

/// A bin of the global state space: the product of one bin per subcircuit.
struct MergeBin {
    std::vector<std::vector<std::uint64_t>> members;
    double probability = 0.0;
    std::size_t created_at = 0;
    /// Position inside its recursion (mixed radix over subcircuit bins).
    std::uint64_t index = 0;

    bool fully_expanded() const {
        return std::all_of(members.begin(), members.end(), [](const auto &m) { return m.size() == 1; });
    }
    std::uint64_t state_count() const {
        std::uint64_t p = 1;
        for (const auto &m : members) {
            p = detail::sat_mul(p, m.size());
        }
        return p;
    }
};

/// Bitstring (qubit 0 leftmost) of a single global state given one local
/// state per subcircuit.
inline std::string assemble_bitstring(const CutCircuit &cc, const std::vector<std::uint64_t> &local) {
    std::string s(cc.n_qubits, '0');
    for (std::size_t i = 0; i < cc.fragments.size(); ++i) {
        const auto &f = cc.fragments[i];
        const std::size_t no = f.n_outputs();
        for (std::size_t t = 0; t < no; ++t) {
            if ((local[i] >> (no - 1 - t)) & 1U) {
                s[f.outputs[t].qubit] = '1';
            }
        }
    }
    return s;
}

/// Local state of every subcircuit for a global bitstring.
inline std::vector<std::uint64_t> project_bitstring(const CutCircuit &cc, const std::string &bits) {
    if (bits.size() != cc.n_qubits) {
        throw Error("bitstring '" + bits + "' does not have " + std::to_string(cc.n_qubits) + " bits");
    }
    std::vector<std::uint64_t> local(cc.fragments.size(), 0);
    for (std::size_t i = 0; i < cc.fragments.size(); ++i) {
        for (const auto &oq : cc.fragments[i].outputs) {
            if (bits[oq.qubit] != '0' && bits[oq.qubit] != '1') {
                throw Error("bitstring '" + bits + "' has a non-binary character");
            }
            local[i] = (local[i] << 1U) | static_cast<std::uint64_t>(bits[oq.qubit] == '1');
        }
    }
    return local;
}

struct MergeOptions {
    std::uint64_t max_bins = 256;       // M
    std::size_t top_r = 1;              // R
    std::size_t max_recursions = 64;    // R_max
    double solution_threshold = 1e-3;
    std::uint64_t memory_limit = kDefaultMemoryLimit;
};

struct MergeSolution {
    std::string bitstring;
    double probability = 0.0;
    /// 1-based recursion that fully expanded it.
    std::size_t found_at = 0;
};

struct RecursionRecord {
    std::size_t recursion = 0;
    std::vector<std::size_t> bin_counts;
    double parent_probability = 1.0;
    double children_sum = 0.0;
    std::vector<double> bin_probabilities;
    std::uint64_t multiplications = 0;
    std::size_t list_size = 0;
};

struct MergeState {
    std::vector<MergeBin> list;  // L, sorted by probability descending
    std::size_t recursions = 0;
    MergeOptions options;
    double threshold = 0.0;
    std::vector<MergeSolution> solutions;
    std::vector<RecursionRecord> trace;
    /// Largest |children sum - parent probability| over all expansions.
    double max_conservation_error = 0.0;
};

namespace detail {

/// Contracts the binned entries of one assignment; values are mixed radix
/// over subcircuits, subcircuit 0 most significant.
inline ContractionResult contract_bins(const CutCircuit &cc, EntryCache &cache, const BinAssignment &a,
                                       std::uint64_t memory_limit) {
    auto g = compute_graph(cc);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        g.output_dims[i] = a.bin_counts[i];
    }
    const auto tensors = cache.all_binned(a.bin_maps(cc));
    return contract(g, tensors, plan_contraction(g, memory_limit));
}

inline bool bin_before(const MergeBin &x, const MergeBin &y) {
    if (x.probability != y.probability) {
        return x.probability > y.probability;
    }
    if (x.created_at != y.created_at) {
        return x.created_at < y.created_at;
    }
    return x.index < y.index;
}

}  // namespace detail

/// States merging. Each recursion bins the states of the bin being expanded,
/// contracts the binned entries into bin probabilities, keeps the R most
/// probable unexpanded bins in L and expands the head of L next. Fully
/// expanded bins at or above the threshold are reported as solutions. Bins
/// below the threshold are dropped, which is exact for non-negative bin
/// probabilities since no member can exceed its bin's total.
inline MergeState run_merge(const CutCircuit &cc, EntryCache &cache, const MergeOptions &opt) {
    if (opt.max_bins < 2) {
        throw Error("states merging needs at least 2 bins per recursion");
    }
    if (opt.top_r < 1) {
        throw Error("top-R must be at least 1");
    }
    MergeState st;
    st.options = opt;
    st.threshold = std::max(10.0 * std::pow(0.5, static_cast<double>(cc.n_qubits)), opt.solution_threshold);

    BinAssignment a = assign_root(cc, opt.max_bins);
    double parent_prob = 1.0;
    while (st.recursions < opt.max_recursions) {
        const auto res = detail::contract_bins(cc, cache, a, opt.memory_limit);
        ++st.recursions;
        RecursionRecord rec;
        rec.recursion = st.recursions;
        rec.bin_counts = a.bin_counts;
        rec.parent_probability = parent_prob;
        rec.bin_probabilities = res.values;
        rec.multiplications = res.multiplications;

        std::vector<MergeBin> fresh;
        std::vector<std::size_t> digit(a.bin_counts.size(), 0);
        for (std::uint64_t idx = 0; idx < res.values.size(); ++idx) {
            rec.children_sum += res.values[idx];
            std::uint64_t rem = idx;
            for (std::size_t i = a.bin_counts.size(); i-- > 0;) {
                digit[i] = rem % a.bin_counts[i];
                rem /= a.bin_counts[i];
            }
            MergeBin bin;
            bin.probability = res.values[idx];
            bin.created_at = st.recursions;
            bin.index = idx;
            bool empty = false;
            for (std::size_t i = 0; i < digit.size(); ++i) {
                bin.members.push_back(a.members(i, digit[i]));
                empty = empty || bin.members.back().empty();
            }
            if (empty || bin.probability < st.threshold) {
                continue;
            }
            if (bin.fully_expanded()) {
                std::vector<std::uint64_t> local;
                for (const auto &m : bin.members) {
                    local.push_back(m[0]);
                }
                st.solutions.push_back({assemble_bitstring(cc, local), bin.probability, st.recursions});
            } else {
                fresh.push_back(std::move(bin));
            }
        }
        st.max_conservation_error = std::max(st.max_conservation_error, std::abs(rec.children_sum - parent_prob));

        std::sort(fresh.begin(), fresh.end(), detail::bin_before);
        if (fresh.size() > opt.top_r) {
            fresh.resize(opt.top_r);
        }
        st.list.insert(st.list.end(), std::make_move_iterator(fresh.begin()), std::make_move_iterator(fresh.end()));
        std::sort(st.list.begin(), st.list.end(), detail::bin_before);
        if (st.list.size() > opt.top_r) {
            st.list.resize(opt.top_r);
        }
        rec.list_size = st.list.size();
        st.trace.push_back(std::move(rec));
        if (st.list.empty() || st.recursions >= opt.max_recursions) {
            break;
        }
        MergeBin next = std::move(st.list.front());
        st.list.erase(st.list.begin());
        parent_prob = next.probability;
        a = assign_states(st.recursions, std::move(next.members), opt.max_bins);
    }
    std::stable_sort(st.solutions.begin(), st.solutions.end(),
                     [](const MergeSolution &x, const MergeSolution &y) { return x.probability > y.probability; });
    return st;
}

/// Exact probabilities of the listed bitstrings in a single recursion: each
/// subcircuit gets one singleton bin per distinct local projection of the
/// list plus one catch-all bin.
inline std::vector<double> arbitrary_subset_mode(const CutCircuit &cc, EntryCache &cache,
                                                 const std::vector<std::string> &states, std::uint64_t max_bins,
                                                 std::uint64_t memory_limit = kDefaultMemoryLimit) {
    if (states.size() > max_bins) {
        throw Error("state list has " + std::to_string(states.size()) + " entries, more than the " +
                    std::to_string(max_bins) + " bins allowed");
    }
    if (states.empty()) {
        return {};
    }
    const std::size_t nf = cc.fragments.size();
    std::vector<std::vector<std::uint64_t>> proj;
    std::vector<std::map<std::uint64_t, std::size_t>> bin_of(nf);
    for (const auto &s : states) {
        proj.push_back(project_bitstring(cc, s));
        for (std::size_t i = 0; i < nf; ++i) {
            bin_of[i].emplace(proj.back()[i], 0);
        }
    }
    auto g = compute_graph(cc);
    std::vector<BinMap> maps(nf);
    for (std::size_t i = 0; i < nf; ++i) {
        std::size_t b = 0;
        for (auto &[state, bin] : bin_of[i]) {
            bin = b++;
        }
        maps[i].n_bins = b + 1;
        maps[i].bin_of_state.assign(g.output_dims[i], static_cast<std::int64_t>(b));
        for (const auto &[state, bin] : bin_of[i]) {
            maps[i].bin_of_state[state] = static_cast<std::int64_t>(bin);
        }
        g.output_dims[i] = maps[i].n_bins;
    }
    const auto tensors = cache.all_binned(maps);
    const auto res = contract(g, tensors, plan_contraction(g, memory_limit));
    std::vector<double> out;
    for (const auto &p : proj) {
        std::uint64_t idx = 0;
        for (std::size_t i = 0; i < nf; ++i) {
            idx = idx * maps[i].n_bins + bin_of[i].at(p[i]);
        }
        out.push_back(res.values[idx]);
    }
    return out;
}

}  // namespace qcut
