// SPDX-License-Identifier: Apache-2.0
//
// antopt - automatic Wi-Fi antenna orientation tuning toolkit
// Copyright (C) 2026 antopt contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace antopt {

namespace detail {

// Primitive polynomial (degree s, interior coefficient bits a) and initial
// m values per dimension, from the Joe-Kuo "new-joe-kuo-6.21201" direction
// number tables. Dimension 1 is the plain van der Corput sequence.
struct SobolDim {
    int s;
    std::uint32_t a;
    std::array<std::uint32_t, 6> m;
};

inline constexpr std::array<SobolDim, 15> kSobolDims = {{
    {1, 0, {1, 0, 0, 0, 0, 0}},       // d = 2
    {2, 1, {1, 3, 0, 0, 0, 0}},       // d = 3
    {3, 1, {1, 3, 1, 0, 0, 0}},       // d = 4
    {3, 2, {1, 1, 1, 0, 0, 0}},       // d = 5
    {4, 1, {1, 1, 3, 3, 0, 0}},       // d = 6
    {4, 4, {1, 3, 5, 13, 0, 0}},      // d = 7
    {5, 2, {1, 1, 5, 5, 17, 0}},      // d = 8
    {5, 4, {1, 1, 5, 5, 5, 0}},       // d = 9
    {5, 7, {1, 1, 7, 11, 19, 0}},     // d = 10
    {5, 11, {1, 1, 5, 1, 1, 0}},      // d = 11
    {5, 13, {1, 1, 1, 3, 11, 0}},     // d = 12
    {5, 14, {1, 3, 5, 5, 31, 0}},     // d = 13
    {6, 1, {1, 3, 3, 9, 7, 49}},      // d = 14
    {6, 13, {1, 1, 1, 15, 21, 21}},   // d = 15
    {6, 16, {1, 3, 1, 13, 27, 49}},   // d = 16
}};

} // namespace detail

// Unscrambled Sobol low-discrepancy sequence in [0, 1)^d, Gray-code order,
// with the all-zeros point at index 0 never emitted. Fully deterministic:
// equal construction parameters give equal sequences on every platform.
class SobolSequence {
  public:
    static constexpr int kMaxDimension = 1 + static_cast<int>(detail::kSobolDims.size());
    static constexpr int kBits = 52; // points are exact multiples of 2^-52

    explicit SobolSequence(int dimension) : dim_(dimension) {
        if (dimension < 1 || dimension > kMaxDimension)
            throw std::invalid_argument("SobolSequence: dimension must be in [1, " +
                                        std::to_string(kMaxDimension) + "]");
        dirs_.resize(dim_);
        for (int d = 0; d < dim_; ++d)
            compute_directions(d + 1, dirs_[d]);
        state_.assign(dim_, 0);
    }

    int dimension() const { return dim_; }

    /// Index of the most recently emitted point (0 = nothing emitted yet).
    std::uint64_t index() const { return index_; }

    /// Positions the stream so the next draw returns point #(index + 1).
    void seek(std::uint64_t index) {
        std::uint64_t gray = index ^ (index >> 1);
        for (int d = 0; d < dim_; ++d) {
            std::uint64_t x = 0;
            for (int b = 0; b < kBits; ++b)
                if ((gray >> b) & 1u)
                    x ^= dirs_[d][b];
            state_[d] = x;
        }
        index_ = index;
    }

    void next_into(std::span<double> out) {
        if (out.size() != static_cast<std::size_t>(dim_))
            throw std::invalid_argument("SobolSequence: output span size mismatch");
        ++index_;
        int c = std::countr_zero(index_);
        for (int d = 0; d < dim_; ++d) {
            state_[d] ^= dirs_[d][c];
            out[d] = static_cast<double>(state_[d]) * 0x1.0p-52;
        }
    }

    std::vector<double> next() {
        std::vector<double> out(dim_);
        next_into(out);
        return out;
    }

  private:
    static void compute_directions(int dimension, std::array<std::uint64_t, kBits> &v) {
        std::array<std::uint64_t, kBits> m{};
        if (dimension == 1) {
            for (int j = 0; j < kBits; ++j)
                m[j] = 1;
        } else {
            const auto &row = detail::kSobolDims[dimension - 2];
            for (int j = 0; j < row.s; ++j)
                m[j] = row.m[j];
            for (int j = row.s; j < kBits; ++j) {
                std::uint64_t x = m[j - row.s] ^ (m[j - row.s] << row.s);
                for (int k = 1; k < row.s; ++k)
                    if ((row.a >> (row.s - 1 - k)) & 1u)
                        x ^= m[j - k] << k;
                m[j] = x;
            }
        }
        for (int j = 0; j < kBits; ++j)
            v[j] = m[j] << (kBits - (j + 1));
    }

    int dim_;
    std::uint64_t index_ = 0;
    std::vector<std::array<std::uint64_t, kBits>> dirs_;
    std::vector<std::uint64_t> state_;
};

} // namespace antopt
