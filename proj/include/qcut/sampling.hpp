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
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "qcut/contraction.hpp"
#include "qcut/rng.hpp"

namespace qcut {

/// Norms of every subcircuit entry and their per-term products. Term k is a
/// 0-based global basis index with cut 0 as its most significant base-4 digit.
struct TermWeights {
    std::size_t n_cuts = 0;
    /// norms[i][t]: Euclidean norm of row t (local basis tuple) of node i.
    std::vector<std::vector<double>> norms;
    /// w_k = prod_i ||p_{i,k}||.
    std::vector<double> w;
    /// prod_i ||p_{i,k}||^2, the squared norm of the full term vector.
    std::vector<double> w2;
    /// row_of[i][k]: local tuple row of node i used by term k.
    std::vector<std::vector<std::uint32_t>> row_of;

    std::size_t term_count() const { return w.size(); }
};

namespace detail {

/// Tensor with its output index moved last, so rows are local basis tuples.
inline DenseTensor rows_last(const DenseTensor &t, std::size_t node) {
    std::vector<Label> order;
    for (auto l : t.labels()) {
        if (!is_output_label(l)) {
            order.push_back(l);
        }
    }
    order.push_back(output_label(node));
    return t.permuted(order);
}

}  // namespace detail

/// Per-node row norms computed once per local basis tuple, combined per term.
inline TermWeights compute_weights(const ComputeGraph &graph, const std::vector<DenseTensor> &tensors) {
    TermWeights tw;
    tw.n_cuts = graph.edge_count();
    if (tw.n_cuts > 12) {
        throw SamplingError("term enumeration over 4^" + std::to_string(tw.n_cuts) + " assignments is too large");
    }
    const std::size_t n_terms = std::size_t{1} << (2 * tw.n_cuts);
    tw.norms.resize(tensors.size());
    tw.row_of.resize(tensors.size());
    for (std::size_t i = 0; i < tensors.size(); ++i) {
        const auto t = detail::rows_last(tensors[i], i);
        const std::size_t cols = t.dims().back();
        const std::size_t rows = t.size() / cols;
        tw.norms[i].resize(rows);
        for (std::size_t r = 0; r < rows; ++r) {
            double s = 0.0;
            for (std::size_t c = 0; c < cols; ++c) {
                s += t.values()[r * cols + c] * t.values()[r * cols + c];
            }
            tw.norms[i][r] = std::sqrt(s);
        }
        std::vector<std::size_t> cut_labels;
        for (auto l : t.labels()) {
            if (!is_output_label(l)) {
                cut_labels.push_back(static_cast<std::size_t>(l));
            }
        }
        tw.row_of[i].resize(n_terms);
        for (std::size_t k = 0; k < n_terms; ++k) {
            std::uint32_t row = 0;
            for (auto e : cut_labels) {
                row = row * 4 + static_cast<std::uint32_t>((k >> (2 * (tw.n_cuts - 1 - e))) & 3U);
            }
            tw.row_of[i][k] = row;
        }
    }
    tw.w.assign(n_terms, 1.0);
    tw.w2.assign(n_terms, 1.0);
    for (std::size_t k = 0; k < n_terms; ++k) {
        for (std::size_t i = 0; i < tensors.size(); ++i) {
            const double nrm = tw.norms[i][tw.row_of[i][k]];
            tw.w[k] *= nrm;
            tw.w2[k] *= nrm * nrm;
        }
    }
    return tw;
}

inline std::vector<double> normalized(const std::vector<double> &v, const char *what) {
    const double total = std::accumulate(v.begin(), v.end(), 0.0);
    if (!(total > 0.0)) {
        throw SamplingError(std::string(what) + ": weights sum to zero");
    }
    std::vector<double> q(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        q[k] = v[k] / total;
    }
    return q;
}

/// q_k proportional to w_k; minimizes the expected error.
inline std::vector<double> optimal_probabilities(const TermWeights &tw) {
    return normalized(tw.w, "optimal sampling");
}

inline std::vector<double> uniform_probabilities(std::size_t n_terms) {
    return std::vector<double>(n_terms, 1.0 / static_cast<double>(n_terms));
}

/// Default narrow node: smallest 4^{cuts} * output_dim (ties to lowest index).
inline std::size_t default_narrow_node(const ComputeGraph &graph) {
    std::size_t best = 0;
    std::uint64_t best_size = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
        const auto s = detail::sat_mul(detail::pow4(graph.node_edges(i).size()), graph.output_dims[i]);
        if (s < best_size) {
            best = i;
            best_size = s;
        }
    }
    return best;
}

/// q_k proportional to the norm of the narrow node's entry for term k.
inline std::vector<double> essential_probabilities(const TermWeights &tw, std::size_t narrow) {
    if (narrow >= tw.norms.size()) {
        throw SamplingError("narrow subcircuit " + std::to_string(narrow) + " does not exist");
    }
    std::vector<double> a(tw.term_count());
    for (std::size_t k = 0; k < a.size(); ++k) {
        a[k] = tw.norms[narrow][tw.row_of[narrow][k]];
        if (a[k] == 0.0 && tw.w[k] > 0.0) {
            throw SamplingError("essential sampling undefined: narrow entry of term " + std::to_string(k) +
                                " is zero while the term weight is " + std::to_string(tw.w[k]));
        }
    }
    return normalized(a, "essential sampling");
}

/// (1/c) sum_k w2_k / q_k - |P|^2 / c. Pass p_norm2 = 0 for the first term only.
inline double expected_error(const std::vector<double> &q, const TermWeights &tw, std::uint64_t c,
                             double p_norm2 = 0.0) {
    if (q.size() != tw.term_count()) {
        throw SamplingError("probability vector has the wrong length");
    }
    if (c == 0) {
        throw SamplingError("sample count must be positive");
    }
    double s = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        if (tw.w2[k] == 0.0) {
            continue;
        }
        if (!(q[k] > 0.0)) {
            throw SamplingError("term " + std::to_string(k) + " has nonzero weight but zero probability");
        }
        s += tw.w2[k] / q[k];
    }
    return (s - p_norm2) / static_cast<double>(c);
}

inline double uniform_error(const TermWeights &tw, std::uint64_t c, double p_norm2 = 0.0) {
    const double n = static_cast<double>(tw.term_count());
    return (n * std::accumulate(tw.w2.begin(), tw.w2.end(), 0.0) - p_norm2) / static_cast<double>(c);
}

inline double optimal_error(const TermWeights &tw, std::uint64_t c, double p_norm2 = 0.0) {
    const double s = std::accumulate(tw.w.begin(), tw.w.end(), 0.0);
    return (s * s - p_norm2) / static_cast<double>(c);
}

/// Essential-sampling error as the double sum over (k, k') of
/// (a_k' / a_k) * w2_k with a the narrow node's entry norms.
inline double essential_error(const TermWeights &tw, std::size_t narrow, std::uint64_t c, double p_norm2 = 0.0) {
    const auto &norm = tw.norms.at(narrow);
    const auto &row = tw.row_of.at(narrow);
    double s = 0.0;
    for (std::size_t k = 0; k < tw.term_count(); ++k) {
        if (tw.w2[k] == 0.0) {
            continue;
        }
        const double ak = norm[row[k]];
        if (ak == 0.0) {
            throw SamplingError("essential sampling undefined for term " + std::to_string(k));
        }
        for (std::size_t kp = 0; kp < tw.term_count(); ++kp) {
            s += norm[row[kp]] / ak * tw.w2[k];
        }
    }
    return (s - p_norm2) / static_cast<double>(c);
}

/// Sample count c, term probabilities q and the drawn counters.
struct SamplingPlan {
    std::uint64_t samples = 0;
    std::vector<double> q;
    std::map<std::uint64_t, std::uint64_t> counts;  // lambda_k for sampled k
    std::uint64_t seed = 0;

    std::size_t distinct() const { return counts.size(); }
};

/// c independent draws from q by inverse CDF on a seeded stream.
inline SamplingPlan sample_terms(std::vector<double> q, std::uint64_t samples, std::uint64_t seed) {
    if (q.empty()) {
        throw SamplingError("empty probability vector");
    }
    std::vector<double> cdf(q.size());
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        if (q[k] < 0.0 || !std::isfinite(q[k])) {
            throw SamplingError("probability of term " + std::to_string(k) + " is invalid");
        }
        if (q[k] > 0.0) {
            last_positive = k;
        }
        acc += q[k];
        cdf[k] = acc;
    }
    if (std::abs(acc - 1.0) > 1e-9) {
        throw SamplingError("term probabilities sum to " + std::to_string(acc));
    }
    SamplingPlan plan;
    plan.samples = samples;
    plan.q = std::move(q);
    plan.seed = seed;
    SplitMix64 rng(seed);
    for (std::uint64_t t = 0; t < samples; ++t) {
        const double u = rng.uniform() * acc;
        auto k = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        k = std::min(k, last_positive);
        ++plan.counts[k];
    }
    return plan;
}

/// Plan with every cut sliced, so each sampled term is one subgraph.
inline ContractionPlan term_plan(const ComputeGraph &graph) {
    std::vector<std::size_t> all(graph.edge_count());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return find_order(graph, all);
}

/// Unbiased estimate sum_k lambda_k / (c q_k) * (outer product of term k),
/// contracting only the distinct sampled terms. `plan` must slice every cut.
inline ContractionResult estimate(const ComputeGraph &graph, const std::vector<DenseTensor> &tensors,
                                  const SamplingPlan &sp, const ContractionPlan &plan) {
    const std::size_t k_cuts = graph.edge_count();
    if (plan.sliced().size() != k_cuts) {
        throw SamplingError("the estimator needs a plan with every cut sliced");
    }
    std::vector<SliceTerm> terms;
    for (const auto &[k, lambda] : sp.counts) {
        if (!(sp.q.at(k) > 0.0)) {
            throw SamplingError("sampled term " + std::to_string(k) + " has zero probability");
        }
        SliceTerm t;
        t.values.resize(k_cuts);
        for (std::size_t e = 0; e < k_cuts; ++e) {
            t.values[e] = static_cast<std::uint8_t>((k >> (2 * (k_cuts - 1 - e))) & 3U);
        }
        t.scale = static_cast<double>(lambda) / (static_cast<double>(sp.samples) * sp.q[k]);
        terms.push_back(std::move(t));
    }
    return contract_terms(graph, tensors, plan, terms);
}

/// Mean over runs of sum_j (P_j - Ptilde_j)^2.
inline double empirical_mse(const std::vector<std::vector<double>> &runs, const std::vector<double> &truth) {
    if (runs.empty()) {
        return 0.0;
    }
    double total = 0.0;
    for (const auto &r : runs) {
        if (r.size() != truth.size()) {
            throw SamplingError("estimate length differs from the ground truth");
        }
        for (std::size_t j = 0; j < r.size(); ++j) {
            total += (r[j] - truth[j]) * (r[j] - truth[j]);
        }
    }
    return total / static_cast<double>(runs.size());
}

/// Standard error of the mean of per-run squared errors.
inline double mse_standard_error(const std::vector<std::vector<double>> &runs, const std::vector<double> &truth) {
    if (runs.size() < 2) {
        return 0.0;
    }
    std::vector<double> e;
    for (const auto &r : runs) {
        double s = 0.0;
        for (std::size_t j = 0; j < r.size(); ++j) {
            s += (r[j] - truth[j]) * (r[j] - truth[j]);
        }
        e.push_back(s);
    }
    const double mean = std::accumulate(e.begin(), e.end(), 0.0) / static_cast<double>(e.size());
    double var = 0.0;
    for (auto x : e) {
        var += (x - mean) * (x - mean);
    }
    var /= static_cast<double>(e.size() - 1);
    return std::sqrt(var / static_cast<double>(e.size()));
}

}  // namespace qcut
