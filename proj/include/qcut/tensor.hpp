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
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "qcut/error.hpp"

namespace qcut {

/// Index label of a tensor. Cut edges use their id (>= 0); the output index
/// of compute-graph node i uses `output_label(i)`.
using Label = std::int64_t;

inline constexpr Label output_label(std::size_t node) { return -1 - static_cast<Label>(node); }
inline constexpr bool is_output_label(Label l) { return l < 0; }
inline constexpr std::size_t output_node(Label l) { return static_cast<std::size_t>(-1 - l); }

/// Row-major dense real tensor with labelled indices.
class DenseTensor {
public:
    DenseTensor() : values_(1, 0.0) {}
    DenseTensor(std::vector<Label> labels, std::vector<std::size_t> dims)
        : labels_(std::move(labels)), dims_(std::move(dims)) {
        if (labels_.size() != dims_.size()) {
            throw Error("tensor label/dimension count mismatch");
        }
        values_.assign(element_count(dims_), 0.0);
    }
    DenseTensor(std::vector<Label> labels, std::vector<std::size_t> dims, std::vector<double> values)
        : labels_(std::move(labels)), dims_(std::move(dims)), values_(std::move(values)) {
        if (labels_.size() != dims_.size() || values_.size() != element_count(dims_)) {
            throw Error("tensor shape does not match its value count");
        }
    }

    static std::size_t element_count(std::span<const std::size_t> dims) {
        return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
    }

    const std::vector<Label> &labels() const { return labels_; }
    const std::vector<std::size_t> &dims() const { return dims_; }
    const std::vector<double> &values() const { return values_; }
    std::vector<double> &values() { return values_; }
    std::size_t size() const { return values_.size(); }
    std::size_t rank() const { return labels_.size(); }

    std::ptrdiff_t position(Label l) const {
        auto it = std::find(labels_.begin(), labels_.end(), l);
        return it == labels_.end() ? -1 : it - labels_.begin();
    }
    bool has(Label l) const { return position(l) >= 0; }
    std::size_t dim(Label l) const {
        auto p = position(l);
        if (p < 0) {
            throw Error("tensor has no index " + std::to_string(l));
        }
        return dims_[static_cast<std::size_t>(p)];
    }

    /// Copy with indices reordered to `order` (a permutation of labels()).
    DenseTensor permuted(const std::vector<Label> &order) const {
        if (order.size() != labels_.size()) {
            throw Error("permutation rank mismatch");
        }
        std::vector<std::size_t> src_axis(order.size());
        std::vector<std::size_t> new_dims(order.size());
        for (std::size_t a = 0; a < order.size(); ++a) {
            auto p = position(order[a]);
            if (p < 0) {
                throw Error("permutation names unknown index " + std::to_string(order[a]));
            }
            src_axis[a] = static_cast<std::size_t>(p);
            new_dims[a] = dims_[src_axis[a]];
        }
        if (order == labels_) {
            return *this;
        }
        std::vector<std::size_t> src_stride(rank());
        std::size_t s = 1;
        for (std::size_t a = rank(); a-- > 0;) {
            src_stride[a] = s;
            s *= dims_[a];
        }
        std::vector<std::size_t> stride(order.size());
        for (std::size_t a = 0; a < order.size(); ++a) {
            stride[a] = src_stride[src_axis[a]];
        }
        DenseTensor out(order, new_dims);
        std::vector<std::size_t> idx(order.size(), 0);
        std::size_t src = 0;
        for (std::size_t dst = 0; dst < out.values_.size(); ++dst) {
            out.values_[dst] = values_[src];
            for (std::size_t a = order.size(); a-- > 0;) {
                ++idx[a];
                src += stride[a];
                if (idx[a] < new_dims[a]) {
                    break;
                }
                src -= stride[a] * new_dims[a];
                idx[a] = 0;
            }
        }
        return out;
    }

    /// Fixes index `l` to `value` and drops it.
    DenseTensor sliced(Label l, std::size_t value) const {
        auto p = position(l);
        if (p < 0) {
            throw Error("cannot slice missing index " + std::to_string(l));
        }
        const auto axis = static_cast<std::size_t>(p);
        if (value >= dims_[axis]) {
            throw Error("slice value out of range");
        }
        std::size_t outer = 1, inner = 1;
        for (std::size_t a = 0; a < axis; ++a) {
            outer *= dims_[a];
        }
        for (std::size_t a = axis + 1; a < rank(); ++a) {
            inner *= dims_[a];
        }
        auto labels = labels_;
        auto dims = dims_;
        labels.erase(labels.begin() + p);
        dims.erase(dims.begin() + p);
        std::vector<double> vals(outer * inner);
        for (std::size_t o = 0; o < outer; ++o) {
            std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>((o * dims_[axis] + value) * inner), inner,
                        vals.begin() + static_cast<std::ptrdiff_t>(o * inner));
        }
        return DenseTensor(std::move(labels), std::move(dims), std::move(vals));
    }

    /// Sums index `l` out.
    DenseTensor summed(Label l) const {
        DenseTensor acc = sliced(l, 0);
        for (std::size_t v = 1; v < dim(l); ++v) {
            auto part = sliced(l, v);
            for (std::size_t i = 0; i < acc.values_.size(); ++i) {
                acc.values_[i] += part.values_[i];
            }
        }
        return acc;
    }

    void scale(double factor) {
        for (auto &v : values_) {
            v *= factor;
        }
    }

private:
    std::vector<Label> labels_;
    std::vector<std::size_t> dims_;
    std::vector<double> values_;
};

/// C = A * B with A (m x k) and B (k x n), all row-major. Adds the number of
/// scalar multiplications performed to `mult_count`.
inline void matmul(std::span<const double> a, std::span<const double> b, std::span<double> c, std::size_t m,
                   std::size_t k, std::size_t n, std::uint64_t &mult_count) {
    std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double *crow = c.data() + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            const double aip = a[i * k + p];
            const double *brow = b.data() + p * n;
            for (std::size_t j = 0; j < n; ++j) {
                crow[j] += aip * brow[j];
            }
            mult_count += n;
        }
    }
}

}  // namespace qcut
