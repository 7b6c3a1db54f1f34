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

#include <gtest/gtest.h>

#include <numeric>

#include "qcut/benchmarks.hpp"
#include "qcut/dag.hpp"
#include "qcut/statevector.hpp"
#include "support.hpp"

namespace qcut {
namespace {

TEST(Parser, ReadsHeaderAndGates) {
    const auto c = parse_circuit("qubits 2; h 0; cx 0 1");
    ASSERT_EQ(c.n_qubits(), 2U);
    ASSERT_EQ(c.gates().size(), 2U);
    EXPECT_EQ(c.gates()[0], (Gate{GateKind::H, {0}, {}}));
    EXPECT_EQ(c.gates()[1], (Gate{GateKind::CX, {0, 1}, {}}));
}

TEST(Parser, CommentsAnglesAndBlankLines) {
    const auto c = parse_circuit("# header comment\nqubits 4\n\nrz 3 1.5707963267948966  # trailing\nry 0 -0.25\n");
    ASSERT_EQ(c.gates().size(), 2U);
    EXPECT_DOUBLE_EQ(c.gates()[0].params[0], 1.5707963267948966);
    EXPECT_EQ(c.gates()[0].qubits[0], 3U);
    EXPECT_DOUBLE_EQ(c.gates()[1].params[0], -0.25);
}

TEST(Parser, RejectsDuplicateQubitOnTwoQubitGate) {
    EXPECT_THROW(parse_circuit("qubits 1; cx 0 0"), ParseError);
}

TEST(Parser, ErrorsCarryLineNumbers) {
    try {
        parse_circuit("qubits 2\nh 0\nfoo 1\n");
        FAIL() << "expected a parse error";
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line, 3U);
    }
    try {
        parse_circuit("qubits 2\nh 0\n\ncx 0 5\n");
        FAIL() << "expected a parse error";
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line, 4U);
    }
}

TEST(Parser, RejectsArityAndAngleMismatches) {
    EXPECT_THROW(parse_circuit("qubits 2; cx 0"), ParseError);
    EXPECT_THROW(parse_circuit("qubits 2; rz 0"), ParseError);
    EXPECT_THROW(parse_circuit("qubits 2; h 0 0.5"), ParseError);
    EXPECT_THROW(parse_circuit("qubits 2; rz 0 abc"), ParseError);
    EXPECT_THROW(parse_circuit("h 0"), ParseError);
    EXPECT_THROW(parse_circuit(""), ParseError);
    EXPECT_THROW(parse_circuit("qubits 2; qubits 3"), ParseError);
}

TEST(Parser, RoundTripIsIdentity) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto c = testing::random_circuit(5, 12, seed);
        EXPECT_EQ(parse_circuit(serialize(c)), c) << "seed " << seed;
    }
}

TEST(Simulator, HadamardAndEmpty) {
    const auto p = simulate_full(parse_circuit("qubits 1; h 0"));
    EXPECT_NEAR(p[0], 0.5, 1e-15);
    EXPECT_NEAR(p[1], 0.5, 1e-15);
    const auto e = simulate_full(parse_circuit("qubits 2"));
    EXPECT_EQ(e, (std::vector<double>{1, 0, 0, 0}));
}

TEST(Simulator, QubitZeroIsMostSignificant) {
    const auto p = simulate_full(parse_circuit("qubits 3; x 0"));
    EXPECT_DOUBLE_EQ(p[bitstring_to_index("100")], 1.0);
}

TEST(Simulator, ProbabilityConservation) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto p = simulate_full(testing::random_circuit(6, 20, seed));
        EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
    }
}

TEST(Simulator, WidthCapEnforced) {
    EXPECT_THROW(simulate_full(Circuit(5), 4), WidthError);
}

TEST(Simulator, BernsteinVaziraniSecrets) {
    for (const std::string s : {"101", "1011", "10110010", "0001", "1"}) {
        const auto p = simulate_full(bv_circuit(s));
        EXPECT_NEAR(p[bitstring_to_index(s)], 1.0, 1e-12) << s;
    }
}

TEST(Simulator, BvOracleUsesSetBitsOnly) {
    const auto c = bv_circuit("101");
    std::size_t cx = 0;
    for (const auto &g : c.gates()) {
        if (g.kind == GateKind::CX) {
            ++cx;
            EXPECT_EQ(g.qubits, (std::vector<std::size_t>{0, 2}));
        }
    }
    EXPECT_EQ(cx, 1U);
}

TEST(Dag, SingleGateHasNoEdges) {
    const auto d = build_dag(parse_circuit("qubits 2; h 0; cx 0 1; t 1"));
    EXPECT_EQ(d.vertex_count(), 1U);
    EXPECT_TRUE(d.edges.empty());
    EXPECT_EQ(d.gate_vertex[0], std::optional<std::size_t>(0));
    EXPECT_EQ(d.gate_vertex[2], std::optional<std::size_t>(0));
}

TEST(Dag, ChainSharesMiddleLine) {
    const auto d = build_dag(parse_circuit("qubits 3; cx 0 1; cx 1 2"));
    ASSERT_EQ(d.vertex_count(), 2U);
    ASSERT_EQ(d.edges.size(), 1U);
    EXPECT_EQ(d.edges[0].src, 0U);
    EXPECT_EQ(d.edges[0].dst, 1U);
    EXPECT_EQ(d.edges[0].qubit, 1U);
}

TEST(Dag, NoTwoQubitGatesGivesEmptyDag) {
    const auto d = build_dag(parse_circuit("qubits 2; h 0; h 1"));
    EXPECT_EQ(d.vertex_count(), 0U);
    EXPECT_FALSE(d.gate_vertex[0].has_value());
    EXPECT_EQ(d.idle_lines(), (std::vector<std::size_t>{0, 1}));
}

TEST(Dag, AttachmentTieGoesToEarlierGate) {
    // on line 1: cx(v0), h, t, cx(v1) -> h is closer to v0, t to v1
    // on line 1: cx(v0), h, cx(v1) -> h is equidistant and goes to v0
    auto d = build_dag(parse_circuit("qubits 2; cx 0 1; h 1; t 1; cx 0 1"));
    EXPECT_EQ(d.gate_vertex[1], std::optional<std::size_t>(0));
    EXPECT_EQ(d.gate_vertex[2], std::optional<std::size_t>(1));
    d = build_dag(parse_circuit("qubits 2; cx 0 1; h 1; cx 0 1"));
    EXPECT_EQ(d.gate_vertex[1], std::optional<std::size_t>(0));
}

TEST(Dag, EdgeCountMatchesLineTouches) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto c = testing::random_circuit(5, 15, seed);
        const auto d = build_dag(c);
        std::vector<std::size_t> touches(c.n_qubits(), 0);
        for (const auto &g : c.gates()) {
            if (g.is_two_qubit()) {
                ++touches[g.qubits[0]];
                ++touches[g.qubits[1]];
            }
        }
        std::size_t expected = 0;
        for (auto t : touches) {
            expected += t > 0 ? t - 1 : 0;
        }
        EXPECT_EQ(d.edges.size(), expected);
        for (const auto &e : d.edges) {
            EXPECT_LT(e.src, e.dst);  // acyclic by construction
        }
        EXPECT_EQ(d.vertex_count(), c.two_qubit_gate_count());
        for (std::size_t gi = 0; gi < c.size(); ++gi) {
            const bool on_active_line = touches[c.gates()[gi].qubits[0]] > 0;
            EXPECT_EQ(d.gate_vertex[gi].has_value(), on_active_line);
        }
    }
}

}  // namespace
}  // namespace qcut
