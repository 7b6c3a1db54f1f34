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
#include <array>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qcut/circuit.hpp"
#include "qcut/rng.hpp"

namespace qcut {

using Graph = std::vector<std::pair<std::size_t, std::size_t>>;

/// Bernstein-Vazirani circuit whose output is exactly `secret` (qubit 0 is the
/// leftmost character). The highest-index set bit doubles as the
/// phase-kickback ancilla, so the circuit uses exactly secret.size() qubits.
inline Circuit bv_circuit(const std::string &secret) {
    if (secret.empty()) {
        throw Error("bv secret must not be empty");
    }
    const std::size_t n = secret.size();
    Circuit c(n);
    std::optional<std::size_t> anc;
    for (std::size_t q = 0; q < n; ++q) {
        if (secret[q] != '0' && secret[q] != '1') {
            throw Error("bv secret must be a bitstring, got '" + secret + "'");
        }
        if (secret[q] == '1') {
            anc = q;
        }
    }
    for (std::size_t q = 0; q < n; ++q) {
        if (anc && q == *anc) {
            c.append(GateKind::X, {q});
        }
        c.append(GateKind::H, {q});
    }
    for (std::size_t q = 0; q < n; ++q) {
        if (secret[q] == '1' && q != *anc) {
            c.append(GateKind::CX, {q, *anc});
        }
    }
    for (std::size_t q = 0; q < n; ++q) {
        c.append(GateKind::H, {q});
    }
    return c;
}

/// Random n-bit secret with at least two set bits (n >= 2).
inline std::string random_secret(std::size_t n, std::uint64_t seed) {
    if (n < 2) {
        throw Error("bv needs at least 2 qubits");
    }
    SplitMix64 rng(seed);
    for (;;) {
        std::string s(n, '0');
        std::size_t ones = 0;
        for (auto &ch : s) {
            if (rng.next() & 1U) {
                ch = '1';
                ++ones;
            }
        }
        if (ones >= 2) {
            return s;
        }
    }
}

/// Random simple 3-regular graph on n vertices (configuration model with
/// rejection of loops and multi-edges). Edges are sorted.
inline Graph random_regular3(std::size_t n, std::uint64_t seed) {
    if (n < 4 || n % 2 != 0) {
        throw Error("a 3-regular graph needs an even vertex count >= 4, got " + std::to_string(n));
    }
    SplitMix64 rng(seed);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<std::size_t> points;
        for (std::size_t v = 0; v < n; ++v) {
            points.insert(points.end(), 3, v);
        }
        rng.shuffle(points);
        std::set<std::pair<std::size_t, std::size_t>> edges;
        bool ok = true;
        for (std::size_t i = 0; i < points.size(); i += 2) {
            auto a = std::min(points[i], points[i + 1]);
            auto b = std::max(points[i], points[i + 1]);
            if (a == b || !edges.emplace(a, b).second) {
                ok = false;
                break;
            }
        }
        if (ok) {
            return Graph(edges.begin(), edges.end());
        }
    }
    throw Error("failed to sample a simple 3-regular graph on " + std::to_string(n) + " vertices");
}

/// G(n, p) random graph; resampled until it has at least one edge.
inline Graph random_erdos(std::size_t n, double p, std::uint64_t seed) {
    if (n < 2) {
        throw Error("an Erdos-Renyi graph needs at least 2 vertices");
    }
    if (!(p > 0.0 && p <= 1.0)) {
        throw Error("edge probability must lie in (0, 1]");
    }
    SplitMix64 rng(seed);
    for (;;) {
        Graph g;
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                if (rng.uniform() < p) {
                    g.emplace_back(a, b);
                }
            }
        }
        if (!g.empty()) {
            return g;
        }
    }
}

/// QAOA-style ansatz on `graph`: an h layer, then per round a cost layer of
/// cx-rz-cx terms on every edge and an rx mixer. Angles are random per round.
inline Circuit qaoa_circuit(std::size_t n, const Graph &graph, std::size_t rounds, std::uint64_t seed) {
    Circuit c(n);
    SplitMix64 rng(seed ^ 0x5bd1e995ULL);
    for (std::size_t q = 0; q < n; ++q) {
        c.append(GateKind::H, {q});
    }
    for (std::size_t r = 0; r < rounds; ++r) {
        const double gamma = 2.0 * std::numbers::pi * rng.uniform();
        const double beta = std::numbers::pi * rng.uniform();
        for (const auto &[a, b] : graph) {
            c.append(GateKind::CX, {a, b});
            c.append(GateKind::RZ, {b}, {gamma});
            c.append(GateKind::CX, {a, b});
        }
        for (std::size_t q = 0; q < n; ++q) {
            c.append(GateKind::RX, {q}, {2.0 * beta});
        }
    }
    return c;
}

inline Circuit qaoa_regular(std::size_t n, std::size_t rounds, std::uint64_t seed) {
    return qaoa_circuit(n, random_regular3(n, seed), rounds, seed);
}

inline Circuit qaoa_erdos(std::size_t n, double p, std::size_t rounds, std::uint64_t seed) {
    return qaoa_circuit(n, random_erdos(n, p, seed), rounds, seed);
}

/// Coupler pattern t of a rows x cols grid (qubit i*cols+j). Patterns 0 and 1
/// are horizontal couplers starting at even and odd columns, 2 and 3 vertical
/// couplers starting at even and odd rows.
inline Graph grid_pattern(std::size_t rows, std::size_t cols, int t) {
    Graph g;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const std::size_t q = i * cols + j;
            if (t < 2 && j + 1 < cols && j % 2 == static_cast<std::size_t>(t)) {
                g.emplace_back(q, q + 1);
            } else if (t >= 2 && i + 1 < rows && i % 2 == static_cast<std::size_t>(t - 2)) {
                g.emplace_back(q, q + cols);
            }
        }
    }
    return g;
}

inline constexpr std::array<int, 8> kGridCycles{0, 1, 2, 3, 2, 3, 0, 1};

/// Random grid circuit: h layer, `cycles` cz cycles following kGridCycles
/// (repeated when longer) with a random gate from {t, rx(pi/2), ry(pi/2)} on
/// every idle qubit of a cycle, then a final h layer. With the default eight
/// cycles the gate count is 10N - sum of the cycle pattern sizes.
inline Circuit supremacy_grid(std::size_t rows, std::size_t cols, std::uint64_t seed,
                              std::size_t cycles = kGridCycles.size()) {
    if (rows == 0 || cols == 0 || rows * cols < 2) {
        throw Error("supremacy grid needs at least 2 qubits");
    }
    if (cycles == 0) {
        throw Error("supremacy grid needs at least one cycle");
    }
    const std::size_t n = rows * cols;
    Circuit c(n);
    SplitMix64 rng(seed);
    for (std::size_t q = 0; q < n; ++q) {
        c.append(GateKind::H, {q});
    }
    for (std::size_t cy = 0; cy < cycles; ++cy) {
        const int t = kGridCycles[cy % kGridCycles.size()];
        const auto pattern = grid_pattern(rows, cols, t);
        std::vector<bool> busy(n, false);
        for (const auto &[a, b] : pattern) {
            c.append(GateKind::CZ, {a, b});
            busy[a] = busy[b] = true;
        }
        for (std::size_t q = 0; q < n; ++q) {
            if (busy[q]) {
                continue;
            }
            switch (rng.below(3)) {
                case 0: c.append(GateKind::T, {q}); break;
                case 1: c.append(GateKind::RX, {q}, {std::numbers::pi / 2}); break;
                default: c.append(GateKind::RY, {q}, {std::numbers::pi / 2}); break;
            }
        }
    }
    for (std::size_t q = 0; q < n; ++q) {
        c.append(GateKind::H, {q});
    }
    return c;
}

/// Appends a controlled phase diag(1,1,1,e^{i theta}) up to global phase.
inline void append_controlled_phase(Circuit &c, std::size_t a, std::size_t b, double theta) {
    c.append(GateKind::RZ, {a}, {theta / 2});
    c.append(GateKind::RZ, {b}, {theta / 2});
    c.append(GateKind::CX, {a, b});
    c.append(GateKind::RZ, {b}, {-theta / 2});
    c.append(GateKind::CX, {a, b});
}

/// Approximate QFT keeping controlled rotations pi/2^d with d <= `degree`,
/// applied to a seeded random basis input. The final qubit reversal is left
/// out, so outputs come in bit-reversed order.
inline Circuit aqft_circuit(std::size_t n, std::size_t degree, std::uint64_t seed) {
    if (n < 2) {
        throw Error("aqft needs at least 2 qubits");
    }
    Circuit c(n);
    SplitMix64 rng(seed);
    for (std::size_t q = 0; q < n; ++q) {
        if (rng.next() & 1U) {
            c.append(GateKind::X, {q});
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        c.append(GateKind::H, {j});
        for (std::size_t k = j + 1; k < n && k - j <= degree; ++k) {
            append_controlled_phase(c, k, j, std::numbers::pi / static_cast<double>(std::size_t{1} << (k - j)));
        }
    }
    return c;
}

/// Three planted solutions with probabilities 1/2, 1/4, 1/4. Qubits 0 and 1
/// are selectors, qubits 2.. run a BV circuit for `secret`; the selectors then
/// flip data bits 0 and 1 so every branch yields a distinct bitstring.
inline Circuit planted_three(const std::string &secret) {
    if (secret.size() < 2) {
        throw Error("planted circuit needs a secret of at least 2 bits");
    }
    const std::size_t n = secret.size() + 2;
    Circuit c(n);
    c.append(GateKind::H, {0});
    // controlled ry(pi/2) from qubit 0 onto qubit 1
    c.append(GateKind::RY, {1}, {std::numbers::pi / 4});
    c.append(GateKind::CX, {0, 1});
    c.append(GateKind::RY, {1}, {-std::numbers::pi / 4});
    c.append(GateKind::CX, {0, 1});
    const Circuit bv = bv_circuit(secret);
    for (const auto &g : bv.gates()) {
        std::vector<std::size_t> qs;
        for (auto q : g.qubits) {
            qs.push_back(q + 2);
        }
        c.append(g.kind, qs, g.params);
    }
    c.append(GateKind::CX, {0, 2});
    c.append(GateKind::CX, {1, 3});
    return c;
}

/// The three solution bitstrings of planted_three(secret), most probable first.
inline std::vector<std::string> planted_three_solutions(const std::string &secret) {
    auto flip = [](char ch) { return ch == '0' ? '1' : '0'; };
    std::string s1 = "10" + secret;
    s1[2] = flip(s1[2]);
    std::string s2 = "11" + secret;
    s2[2] = flip(s2[2]);
    s2[3] = flip(s2[3]);
    return {"00" + secret, s1, s2};
}

}  // namespace qcut
