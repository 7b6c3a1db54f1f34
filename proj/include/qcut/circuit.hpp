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
#include <charconv>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qcut/error.hpp"

namespace qcut {

enum class GateKind : std::uint8_t { H, X, Y, Z, S, T, RX, RY, RZ, CX, CZ };

struct GateInfo {
    GateKind kind;
    std::string_view name;
    int arity;
    int n_params;
};

inline constexpr std::array<GateInfo, 11> kGateTable{{
    {GateKind::H, "h", 1, 0},
    {GateKind::X, "x", 1, 0},
    {GateKind::Y, "y", 1, 0},
    {GateKind::Z, "z", 1, 0},
    {GateKind::S, "s", 1, 0},
    {GateKind::T, "t", 1, 0},
    {GateKind::RX, "rx", 1, 1},
    {GateKind::RY, "ry", 1, 1},
    {GateKind::RZ, "rz", 1, 1},
    {GateKind::CX, "cx", 2, 0},
    {GateKind::CZ, "cz", 2, 0},
}};

inline const GateInfo &gate_info(GateKind kind) {
    return kGateTable[static_cast<std::size_t>(kind)];
}

inline std::optional<GateKind> gate_kind_from_name(std::string_view name) {
    for (const auto &info : kGateTable) {
        if (info.name == name) {
            return info.kind;
        }
    }
    return std::nullopt;
}

struct Gate {
    GateKind kind;
    std::vector<std::size_t> qubits;
    std::vector<double> params;

    int arity() const { return gate_info(kind).arity; }
    bool is_two_qubit() const { return arity() == 2; }
    std::string_view name() const { return gate_info(kind).name; }

    bool operator==(const Gate &) const = default;
};

inline constexpr std::size_t kMaxCircuitQubits = 1024;

/// Ordered gate list over `n_qubits` lines. Gate order is time order per line.
class Circuit {
public:
    Circuit() = default;
    explicit Circuit(std::size_t n_qubits) : n_qubits_(n_qubits) {
        if (n_qubits == 0 || n_qubits > kMaxCircuitQubits) {
            throw Error("qubit count must be in [1, " + std::to_string(kMaxCircuitQubits) + "], got " +
                        std::to_string(n_qubits));
        }
    }

    std::size_t n_qubits() const { return n_qubits_; }
    const std::vector<Gate> &gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }

    void append(Gate gate) {
        validate(gate);
        gates_.push_back(std::move(gate));
    }

    void append(GateKind kind, std::vector<std::size_t> qubits, std::vector<double> params = {}) {
        append(Gate{kind, std::move(qubits), std::move(params)});
    }

    /// Circuit depth with every gate occupying one layer on each of its lines.
    std::size_t depth() const {
        std::vector<std::size_t> line_depth(n_qubits_, 0);
        std::size_t result = 0;
        for (const auto &g : gates_) {
            std::size_t layer = 0;
            for (auto q : g.qubits) {
                layer = std::max(layer, line_depth[q]);
            }
            for (auto q : g.qubits) {
                line_depth[q] = layer + 1;
            }
            result = std::max(result, layer + 1);
        }
        return result;
    }

    std::size_t two_qubit_gate_count() const {
        return static_cast<std::size_t>(
            std::count_if(gates_.begin(), gates_.end(), [](const Gate &g) { return g.is_two_qubit(); }));
    }

    bool operator==(const Circuit &) const = default;

private:
    void validate(const Gate &gate) const {
        const auto &info = gate_info(gate.kind);
        if (static_cast<int>(gate.qubits.size()) != info.arity) {
            throw Error(std::string(info.name) + " takes " + std::to_string(info.arity) + " qubit(s), got " +
                        std::to_string(gate.qubits.size()));
        }
        if (static_cast<int>(gate.params.size()) != info.n_params) {
            throw Error(std::string(info.name) + " takes " + std::to_string(info.n_params) + " angle(s), got " +
                        std::to_string(gate.params.size()));
        }
        for (auto q : gate.qubits) {
            if (q >= n_qubits_) {
                throw Error("qubit index " + std::to_string(q) + " out of range for " + std::to_string(n_qubits_) +
                            " qubits");
            }
        }
        if (info.arity == 2 && gate.qubits[0] == gate.qubits[1]) {
            throw Error(std::string(info.name) + " needs two distinct qubits");
        }
    }

    std::size_t n_qubits_ = 0;
    std::vector<Gate> gates_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) {
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') {
            ++j;
        }
        if (j > i) {
            out.push_back(s.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

inline std::size_t parse_index(std::string_view tok, std::size_t line, const char *what) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError(line, std::string("expected ") + what + ", got '" + std::string(tok) + "'");
    }
    return value;
}

inline double parse_angle(std::string_view tok, std::size_t line) {
    // std::from_chars for double is missing on some toolchains still in use.
    std::string s(tok);
    std::size_t used = 0;
    double value = 0;
    try {
        value = std::stod(s, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used != s.size() || s.empty()) {
        throw ParseError(line, "expected angle, got '" + s + "'");
    }
    return value;
}

}  // namespace detail

/// Parses the line-oriented circuit format. Statements are separated by
/// newlines or ';', '#' starts a comment. The first statement must be
/// `qubits <n>`; every other statement is `<gate> <qubit...> [<angle>]`.
inline Circuit parse_circuit(std::string_view text) {
    std::optional<Circuit> circuit;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) {
            eol = text.size();
        }
        ++line_no;
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        std::size_t stmt_pos = 0;
        while (stmt_pos <= line.size()) {
            std::size_t semi = line.find(';', stmt_pos);
            if (semi == std::string_view::npos) {
                semi = line.size();
            }
            auto stmt = detail::trim(line.substr(stmt_pos, semi - stmt_pos));
            stmt_pos = semi + 1;
            if (stmt.empty()) {
                continue;
            }
            auto toks = detail::split_ws(stmt);
            if (!circuit) {
                if (toks[0] != "qubits" || toks.size() != 2) {
                    throw ParseError(line_no, "expected header 'qubits <n>'");
                }
                auto n = detail::parse_index(toks[1], line_no, "qubit count");
                try {
                    circuit.emplace(n);
                } catch (const Error &e) {
                    throw ParseError(line_no, e.what());
                }
                continue;
            }
            if (toks[0] == "qubits") {
                throw ParseError(line_no, "duplicate 'qubits' header");
            }
            auto kind = gate_kind_from_name(toks[0]);
            if (!kind) {
                throw ParseError(line_no, "unknown gate '" + std::string(toks[0]) + "'");
            }
            const auto &info = gate_info(*kind);
            const std::size_t expected = static_cast<std::size_t>(info.arity + info.n_params);
            if (toks.size() - 1 != expected) {
                throw ParseError(line_no, std::string(info.name) + " expects " + std::to_string(info.arity) +
                                              " qubit(s) and " + std::to_string(info.n_params) +
                                              " angle(s), got " + std::to_string(toks.size() - 1) + " operand(s)");
            }
            Gate gate{*kind, {}, {}};
            for (int a = 0; a < info.arity; ++a) {
                gate.qubits.push_back(detail::parse_index(toks[1 + a], line_no, "qubit index"));
            }
            for (int p = 0; p < info.n_params; ++p) {
                gate.params.push_back(detail::parse_angle(toks[1 + info.arity + p], line_no));
            }
            try {
                circuit->append(std::move(gate));
            } catch (const ParseError &) {
                throw;
            } catch (const Error &e) {
                throw ParseError(line_no, e.what());
            }
        }
    }
    if (!circuit) {
        throw ParseError(line_no, "missing 'qubits <n>' header");
    }
    return std::move(*circuit);
}

inline std::string serialize(const Circuit &circuit) {
    std::ostringstream out;
    out.precision(17);
    out << "qubits " << circuit.n_qubits() << "\n";
    for (const auto &g : circuit.gates()) {
        out << g.name();
        for (auto q : g.qubits) {
            out << ' ' << q;
        }
        for (auto p : g.params) {
            out << ' ' << p;
        }
        out << "\n";
    }
    return out.str();
}

/// Bitstring of a basis-state index; qubit 0 is the leftmost character and
/// the most significant bit of the index.
inline std::string index_to_bitstring(std::uint64_t index, std::size_t n_qubits) {
    std::string s(n_qubits, '0');
    for (std::size_t q = 0; q < n_qubits; ++q) {
        if ((index >> (n_qubits - 1 - q)) & 1U) {
            s[q] = '1';
        }
    }
    return s;
}

inline std::uint64_t bitstring_to_index(std::string_view bits) {
    std::uint64_t index = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw Error("invalid bitstring '" + std::string(bits) + "'");
        }
        index = (index << 1U) | static_cast<std::uint64_t>(c == '1');
    }
    return index;
}

}  // namespace qcut
