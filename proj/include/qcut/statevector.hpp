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
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "qcut/circuit.hpp"

namespace qcut {

inline constexpr std::size_t kDefaultSimulatorCap = 24;

using Amplitude = std::complex<double>;
using Matrix2 = std::array<Amplitude, 4>;  // row-major 2x2

/// Dense statevector over `n` qubits. Qubit q is bit (n - 1 - q) of the
/// basis index, so index order matches bitstrings read left to right.
class StateVector {
public:
    explicit StateVector(std::size_t n_qubits, std::size_t cap = kDefaultSimulatorCap) : n_(n_qubits) {
        if (n_qubits > cap) {
            throw WidthError("simulator width cap exceeded: " + std::to_string(n_qubits) + " > " +
                             std::to_string(cap));
        }
        amps_.assign(std::size_t{1} << n_qubits, Amplitude{0.0, 0.0});
        amps_[0] = 1.0;
    }

    std::size_t n_qubits() const { return n_; }
    const std::vector<Amplitude> &amplitudes() const { return amps_; }

    void apply_matrix(std::size_t qubit, const Matrix2 &m) {
        const std::size_t stride = std::size_t{1} << (n_ - 1 - qubit);
        const std::size_t size = amps_.size();
        for (std::size_t base = 0; base < size; base += 2 * stride) {
            for (std::size_t i = base; i < base + stride; ++i) {
                const Amplitude a0 = amps_[i];
                const Amplitude a1 = amps_[i + stride];
                amps_[i] = m[0] * a0 + m[1] * a1;
                amps_[i + stride] = m[2] * a0 + m[3] * a1;
            }
        }
    }

    void apply_cx(std::size_t control, std::size_t target) {
        const std::uint64_t cbit = std::uint64_t{1} << (n_ - 1 - control);
        const std::uint64_t tbit = std::uint64_t{1} << (n_ - 1 - target);
        for (std::uint64_t i = 0; i < amps_.size(); ++i) {
            if ((i & cbit) && !(i & tbit)) {
                std::swap(amps_[i], amps_[i | tbit]);
            }
        }
    }

    void apply_cz(std::size_t a, std::size_t b) {
        const std::uint64_t mask = (std::uint64_t{1} << (n_ - 1 - a)) | (std::uint64_t{1} << (n_ - 1 - b));
        for (std::uint64_t i = 0; i < amps_.size(); ++i) {
            if ((i & mask) == mask) {
                amps_[i] = -amps_[i];
            }
        }
    }

    void apply(const Gate &g) {
        using std::numbers::sqrt2;
        const double r = 1.0 / sqrt2;
        const Amplitude i1{0.0, 1.0};
        switch (g.kind) {
            case GateKind::H: apply_matrix(g.qubits[0], {r, r, r, -r}); break;
            case GateKind::X: apply_matrix(g.qubits[0], {0.0, 1.0, 1.0, 0.0}); break;
            case GateKind::Y: apply_matrix(g.qubits[0], {0.0, -i1, i1, 0.0}); break;
            case GateKind::Z: apply_matrix(g.qubits[0], {1.0, 0.0, 0.0, -1.0}); break;
            case GateKind::S: apply_matrix(g.qubits[0], {1.0, 0.0, 0.0, i1}); break;
            case GateKind::T: apply_matrix(g.qubits[0], {1.0, 0.0, 0.0, std::polar(1.0, std::numbers::pi / 4)}); break;
            case GateKind::RX: {
                const double c = std::cos(g.params[0] / 2), s = std::sin(g.params[0] / 2);
                apply_matrix(g.qubits[0], {c, -i1 * s, -i1 * s, c});
                break;
            }
            case GateKind::RY: {
                const double c = std::cos(g.params[0] / 2), s = std::sin(g.params[0] / 2);
                apply_matrix(g.qubits[0], {c, -s, s, c});
                break;
            }
            case GateKind::RZ:
                apply_matrix(g.qubits[0],
                             {std::polar(1.0, -g.params[0] / 2), 0.0, 0.0, std::polar(1.0, g.params[0] / 2)});
                break;
            case GateKind::CX: apply_cx(g.qubits[0], g.qubits[1]); break;
            case GateKind::CZ: apply_cz(g.qubits[0], g.qubits[1]); break;
        }
    }

    void run(const Circuit &circuit) {
        for (const auto &g : circuit.gates()) {
            apply(g);
        }
    }

    std::vector<double> probabilities() const {
        std::vector<double> p(amps_.size());
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            p[i] = std::norm(amps_[i]);
        }
        return p;
    }

private:
    std::size_t n_;
    std::vector<Amplitude> amps_;
};

/// Brute-force output distribution of `circuit` from |0...0>.
inline std::vector<double> simulate_full(const Circuit &circuit, std::size_t cap = kDefaultSimulatorCap) {
    StateVector state(circuit.n_qubits(), cap);
    state.run(circuit);
    return state.probabilities();
}

}  // namespace qcut
