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
#include <cmath>
#include <cstdint>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "qcut/contraction.hpp"
#include "qcut/fragments.hpp"
#include "qcut/statevector.hpp"

namespace qcut {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

/// Global basis assignment k <-> per-cut labels; cut 0 is the most
/// significant base-4 digit. k is 0-based.
struct BasisAssignment {
    std::vector<Pauli> labels;

    static BasisAssignment from_index(std::uint64_t k, std::size_t n_cuts) {
        BasisAssignment b;
        b.labels.resize(n_cuts);
        for (std::size_t c = n_cuts; c-- > 0;) {
            b.labels[c] = static_cast<Pauli>(k % 4);
            k /= 4;
        }
        return b;
    }

    std::uint64_t index() const {
        std::uint64_t k = 0;
        for (auto l : labels) {
            k = k * 4 + static_cast<std::uint64_t>(l);
        }
        return k;
    }

    /// Labels of the cuts attached to `fragment`, in its attachment order.
    std::vector<Pauli> local(const Fragment &fragment) const {
        std::vector<Pauli> out;
        for (const auto &role : fragment.attached) {
            out.push_back(labels[role.cut_id]);
        }
        return out;
    }
};

/// Row offset of a local basis tuple inside a fragment's entry tensor.
inline std::size_t local_tuple_index(const std::vector<Pauli> &local) {
    std::size_t idx = 0;
    for (auto p : local) {
        idx = idx * 4 + static_cast<std::size_t>(p);
    }
    return idx;
}

/// Pure state used to seed an initialization-side cut qubit.
enum class InitState : std::uint8_t { Zero = 0, One = 1, Plus = 2, PlusI = 3 };

namespace detail {

// sigma_O = sum_s kInitCoeff[O][s] |s><s| over the four pure seeds.
inline constexpr std::array<std::array<double, 4>, 4> kInitCoeff{{
    {1.0, 1.0, 0.0, 0.0},    // I
    {-1.0, -1.0, 2.0, 0.0},  // X
    {-1.0, -1.0, 0.0, 2.0},  // Y
    {1.0, -1.0, 0.0, 0.0},   // Z
}};

inline void append_init_prep(Circuit &c, std::size_t q, InitState s) {
    switch (s) {
        case InitState::Zero: break;
        case InitState::One: c.append(GateKind::X, {q}); break;
        case InitState::Plus: c.append(GateKind::H, {q}); break;
        case InitState::PlusI:
            c.append(GateKind::H, {q});
            c.append(GateKind::S, {q});
            break;
    }
}

/// Rotation mapping the eigenbasis of `basis` onto Z. Y uses rz(-pi/2),
/// which equals s^dagger up to a global phase.
inline void append_measure_rotation(Circuit &c, std::size_t q, Pauli basis) {
    if (basis == Pauli::X) {
        c.append(GateKind::H, {q});
    } else if (basis == Pauli::Y) {
        c.append(GateKind::RZ, {q}, {-std::numbers::pi / 2});
        c.append(GateKind::H, {q});
    }
}

inline double measure_sign(Pauli basis, bool outcome) {
    return (basis == Pauli::I || !outcome) ? 1.0 : -1.0;
}

struct RoleSplit {
    std::vector<std::size_t> init_pos;     // positions in fragment.attached
    std::vector<std::size_t> measure_pos;
};

inline RoleSplit split_roles(const Fragment &f) {
    RoleSplit r;
    for (std::size_t i = 0; i < f.attached.size(); ++i) {
        (f.attached[i].side == CutSide::Init ? r.init_pos : r.measure_pos).push_back(i);
    }
    return r;
}

/// Reduces a probability vector over all local qubits to a signed vector
/// over output qubits: each measured cut qubit contributes its eigen-sign.
inline std::vector<double> signed_marginal(const Fragment &f, const std::vector<double> &probs,
                                           const std::vector<std::size_t> &measured_locals,
                                           const std::vector<Pauli> &bases) {
    const std::size_t w = f.width();
    std::vector<double> out(std::size_t{1} << f.n_outputs(), 0.0);
    for (std::size_t idx = 0; idx < probs.size(); ++idx) {
        if (probs[idx] == 0.0) {
            continue;
        }
        std::size_t o = 0;
        for (const auto &oq : f.outputs) {
            o = (o << 1U) | ((idx >> (w - 1 - oq.local)) & 1U);
        }
        double sign = 1.0;
        for (std::size_t j = 0; j < measured_locals.size(); ++j) {
            sign *= measure_sign(bases[j], (idx >> (w - 1 - measured_locals[j])) & 1U);
        }
        out[o] += sign * probs[idx];
    }
    return out;
}

}  // namespace detail

/// One concrete circuit run and its recombination weight.
struct VariantRun {
    Circuit circuit;
    double weight = 1.0;
    /// Measurement basis per measurement-side cut (attachment order).
    std::vector<Pauli> measure_bases;
};

/// Runs whose weighted signed marginals give the entry of one local tuple.
struct VariantSet {
    std::vector<Pauli> local;
    std::vector<VariantRun> runs;
};

/// Concrete runs for every one of the 4^(attached cuts) local bases.
inline std::vector<VariantSet> enumerate_variants(const Fragment &fragment,
                                                  std::size_t width_cap = kDefaultSimulatorCap) {
    if (fragment.width() > width_cap) {
        throw WidthError("fragment " + std::to_string(fragment.id) + " has " + std::to_string(fragment.width()) +
                         " qubits, simulator cap is " + std::to_string(width_cap));
    }
    const auto roles = detail::split_roles(fragment);
    const std::size_t n_att = fragment.attached.size();
    const std::size_t n_tuples = std::size_t{1} << (2 * n_att);
    std::vector<VariantSet> sets;
    sets.reserve(n_tuples);
    for (std::size_t t = 0; t < n_tuples; ++t) {
        VariantSet set;
        set.local.resize(n_att);
        for (std::size_t c = 0; c < n_att; ++c) {
            set.local[c] = static_cast<Pauli>((t >> (2 * (n_att - 1 - c))) & 3U);
        }
        std::vector<Pauli> mbases;
        for (auto p : roles.measure_pos) {
            mbases.push_back(set.local[p]);
        }
        const double measure_weight = std::pow(0.5, static_cast<double>(roles.measure_pos.size()));
        // every combination of seed states with non-zero coefficient
        const std::size_t n_init = roles.init_pos.size();
        for (std::size_t s = 0; s < (std::size_t{1} << (2 * n_init)); ++s) {
            double w = measure_weight;
            std::vector<InitState> seeds(n_init);
            for (std::size_t j = 0; j < n_init; ++j) {
                seeds[j] = static_cast<InitState>((s >> (2 * (n_init - 1 - j))) & 3U);
                w *= detail::kInitCoeff[static_cast<std::size_t>(set.local[roles.init_pos[j]])]
                                       [static_cast<std::size_t>(seeds[j])];
            }
            if (w == 0.0) {
                continue;
            }
            Circuit c(fragment.width());
            for (std::size_t j = 0; j < n_init; ++j) {
                detail::append_init_prep(c, fragment.attached[roles.init_pos[j]].local_qubit, seeds[j]);
            }
            for (const auto &g : fragment.circuit.gates()) {
                c.append(g);
            }
            for (std::size_t j = 0; j < roles.measure_pos.size(); ++j) {
                detail::append_measure_rotation(c, fragment.attached[roles.measure_pos[j]].local_qubit, mbases[j]);
            }
            set.runs.push_back({std::move(c), w, mbases});
        }
        sets.push_back(std::move(set));
    }
    return sets;
}

/// Evaluates a variant set run by run.
inline std::vector<double> evaluate_variant_set(const Fragment &fragment, const VariantSet &set) {
    const auto roles = detail::split_roles(fragment);
    std::vector<std::size_t> measured;
    for (auto p : roles.measure_pos) {
        measured.push_back(fragment.attached[p].local_qubit);
    }
    std::vector<double> out(std::size_t{1} << fragment.n_outputs(), 0.0);
    for (const auto &run : set.runs) {
        auto probs = simulate_full(run.circuit, run.circuit.n_qubits());
        auto m = detail::signed_marginal(fragment, probs, measured, run.measure_bases);
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] += run.weight * m[i];
        }
    }
    return out;
}

/// Entry tensor of a fragment: labels are its attached cut ids (ascending)
/// followed by output_label(fragment.id) of dimension 2^outputs.
inline DenseTensor entry_tensor_shape(const Fragment &fragment) {
    std::vector<Label> labels;
    std::vector<std::size_t> dims;
    for (const auto &role : fragment.attached) {
        labels.push_back(static_cast<Label>(role.cut_id));
        dims.push_back(kCutDim);
    }
    labels.push_back(output_label(fragment.id));
    dims.push_back(std::size_t{1} << fragment.n_outputs());
    return DenseTensor(std::move(labels), std::move(dims));
}

/// Full-state entries of every local basis of `fragment`. Simulates once per
/// seed-state tuple and once more per measurement rotation tuple, then
/// recombines; equivalent to evaluating enumerate_variants run by run.
inline DenseTensor evaluate_fragment(const Fragment &fragment, std::size_t width_cap = kDefaultSimulatorCap) {
    if (fragment.width() > width_cap) {
        throw WidthError("fragment " + std::to_string(fragment.id) + " has " + std::to_string(fragment.width()) +
                         " qubits, simulator cap is " + std::to_string(width_cap));
    }
    const auto roles = detail::split_roles(fragment);
    const std::size_t a = roles.init_pos.size();
    const std::size_t b = roles.measure_pos.size();
    const std::size_t n_out = std::size_t{1} << fragment.n_outputs();
    const std::size_t n_seed = std::size_t{1} << (2 * a);
    const std::size_t n_mbasis = std::size_t{1} << (2 * b);
    std::vector<std::size_t> measured;
    for (auto p : roles.measure_pos) {
        measured.push_back(fragment.attached[p].local_qubit);
    }
    std::size_t n_rot = 1;
    for (std::size_t j = 0; j < b; ++j) {
        n_rot *= 3;
    }
    const double measure_weight = std::pow(0.5, static_cast<double>(b));

    // by_seed[s][mbasis * n_out + o]
    std::vector<std::vector<double>> by_seed(n_seed, std::vector<double>(n_mbasis * n_out, 0.0));
    for (std::size_t s = 0; s < n_seed; ++s) {
        Circuit prep(fragment.width());
        for (std::size_t j = 0; j < a; ++j) {
            detail::append_init_prep(prep, fragment.attached[roles.init_pos[j]].local_qubit,
                                     static_cast<InitState>((s >> (2 * (a - 1 - j))) & 3U));
        }
        StateVector base(fragment.width(), width_cap);
        base.run(prep);
        base.run(fragment.circuit);
        for (std::size_t r = 0; r < n_rot; ++r) {
            // rotation digit per measured cut: 0 -> Z, 1 -> X, 2 -> Y
            std::vector<Pauli> rot(b);
            std::size_t rem = r;
            for (std::size_t j = b; j-- > 0;) {
                static constexpr std::array<Pauli, 3> kRot{Pauli::Z, Pauli::X, Pauli::Y};
                rot[j] = kRot[rem % 3];
                rem /= 3;
            }
            StateVector sv = base;
            Circuit rc(fragment.width());
            for (std::size_t j = 0; j < b; ++j) {
                detail::append_measure_rotation(rc, measured[j], rot[j]);
            }
            sv.run(rc);
            const auto probs = sv.probabilities();
            // measurement bases compatible with this rotation (Z rotation serves I and Z)
            const std::size_t n_compat = std::size_t{1} << static_cast<std::size_t>(
                                             std::count(rot.begin(), rot.end(), Pauli::Z));
            for (std::size_t cmask = 0; cmask < n_compat; ++cmask) {
                std::vector<Pauli> bases = rot;
                std::size_t bit = 0;
                for (std::size_t j = 0; j < b; ++j) {
                    if (rot[j] == Pauli::Z) {
                        bases[j] = ((cmask >> bit) & 1U) ? Pauli::I : Pauli::Z;
                        ++bit;
                    }
                }
                const auto m = detail::signed_marginal(fragment, probs, measured, bases);
                const std::size_t mb = local_tuple_index(bases);
                for (std::size_t o = 0; o < n_out; ++o) {
                    by_seed[s][mb * n_out + o] = measure_weight * m[o];
                }
            }
        }
    }

    DenseTensor out = entry_tensor_shape(fragment);
    auto &vals = out.values();
    const std::size_t n_att = fragment.attached.size();
    for (std::size_t t = 0; t < (std::size_t{1} << (2 * n_att)); ++t) {
        std::vector<Pauli> local(n_att);
        for (std::size_t c = 0; c < n_att; ++c) {
            local[c] = static_cast<Pauli>((t >> (2 * (n_att - 1 - c))) & 3U);
        }
        std::vector<Pauli> mb(b);
        for (std::size_t j = 0; j < b; ++j) {
            mb[j] = local[roles.measure_pos[j]];
        }
        const std::size_t mbi = local_tuple_index(mb);
        for (std::size_t s = 0; s < n_seed; ++s) {
            double w = 1.0;
            for (std::size_t j = 0; j < a; ++j) {
                w *= detail::kInitCoeff[static_cast<std::size_t>(local[roles.init_pos[j]])]
                                       [(s >> (2 * (a - 1 - j))) & 3U];
            }
            if (w == 0.0) {
                continue;
            }
            for (std::size_t o = 0; o < n_out; ++o) {
                vals[t * n_out + o] += w * by_seed[s][mbi * n_out + o];
            }
        }
    }
    return out;
}

/// Per-subcircuit bin map: local output state -> bin, or -1 when the state is
/// outside the region under analysis.
struct BinMap {
    std::size_t n_bins = 1;
    std::vector<std::int64_t> bin_of_state;
};

/// Sums a full-state entry tensor into bins along its output index.
inline DenseTensor bin_entries(const DenseTensor &full, std::size_t fragment_id, const BinMap &bins) {
    const Label out_label = output_label(fragment_id);
    const std::size_t n_states = full.dim(out_label);
    if (bins.bin_of_state.size() != n_states) {
        throw Error("bin map covers " + std::to_string(bins.bin_of_state.size()) + " states, fragment has " +
                    std::to_string(n_states));
    }
    auto dims = full.dims();
    dims.back() = bins.n_bins;
    DenseTensor out(full.labels(), dims);
    const std::size_t rows = full.size() / n_states;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t s = 0; s < n_states; ++s) {
            const auto b = bins.bin_of_state[s];
            if (b >= 0) {
                out.values()[r * bins.n_bins + static_cast<std::size_t>(b)] += full.values()[r * n_states + s];
            }
        }
    }
    return out;
}

/// Compute graph of a cut circuit; node output dims are 2^outputs.
inline ComputeGraph compute_graph(const CutCircuit &cc) {
    ComputeGraph g;
    for (const auto &f : cc.fragments) {
        g.output_dims.push_back(std::size_t{1} << f.n_outputs());
    }
    for (const auto &cut : cc.cuts) {
        g.edges.emplace_back(cut.measure.subcircuit, cut.init.subcircuit);
    }
    return g;
}

/// Thread-safe cache of full-state fragment entries. Fragments evaluate
/// concurrently; each slot is written once, so results are order independent.
class EntryCache {
public:
    explicit EntryCache(const CutCircuit &cc, std::size_t width_cap = kDefaultSimulatorCap)
        : cc_(cc), width_cap_(width_cap), slots_(cc.fragments.size()) {}

    const DenseTensor &full(std::size_t fragment) {
        std::call_once(slots_[fragment].once,
                       [&] { slots_[fragment].tensor = evaluate_fragment(cc_.fragments[fragment], width_cap_); });
        return slots_[fragment].tensor;
    }

    std::vector<DenseTensor> all_full() {
        std::vector<std::future<void>> futs;
        for (std::size_t i = 0; i < slots_.size(); ++i) {
            futs.push_back(std::async(std::launch::async, [this, i] { full(i); }));
        }
        for (auto &f : futs) {
            f.get();
        }
        std::vector<DenseTensor> out;
        for (std::size_t i = 0; i < slots_.size(); ++i) {
            out.push_back(full(i));
        }
        return out;
    }

    std::vector<DenseTensor> all_binned(const std::vector<BinMap> &bins) {
        if (bins.size() != slots_.size()) {
            throw Error("need one bin map per subcircuit");
        }
        all_full();
        std::vector<DenseTensor> out;
        for (std::size_t i = 0; i < slots_.size(); ++i) {
            out.push_back(bin_entries(full(i), i, bins[i]));
        }
        return out;
    }

private:
    struct Slot {
        std::once_flag once;
        DenseTensor tensor;
    };
    const CutCircuit &cc_;
    std::size_t width_cap_;
    std::vector<Slot> slots_;
};

/// Maps a node-order contraction result (node 0 most significant) to the
/// global basis-state order of the original circuit.
inline std::vector<double> to_global_order(const std::vector<double> &node_order, const CutCircuit &cc) {
    const std::size_t n = cc.n_qubits;
    std::vector<double> out(std::size_t{1} << n, 0.0);
    // For every node, the global bit position of each of its output bits.
    std::vector<std::size_t> radix;
    for (const auto &f : cc.fragments) {
        radix.push_back(std::size_t{1} << f.n_outputs());
    }
    std::vector<std::size_t> digit(cc.fragments.size(), 0);
    for (std::size_t idx = 0; idx < node_order.size(); ++idx) {
        std::size_t rem = idx;
        for (std::size_t i = cc.fragments.size(); i-- > 0;) {
            digit[i] = rem % radix[i];
            rem /= radix[i];
        }
        std::size_t global = 0;
        for (std::size_t i = 0; i < cc.fragments.size(); ++i) {
            const auto &f = cc.fragments[i];
            const std::size_t no = f.n_outputs();
            for (std::size_t t = 0; t < no; ++t) {
                if ((digit[i] >> (no - 1 - t)) & 1U) {
                    global |= std::size_t{1} << (n - 1 - f.outputs[t].qubit);
                }
            }
        }
        out[global] = node_order[idx];
    }
    return out;
}

}  // namespace qcut
