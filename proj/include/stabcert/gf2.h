// Copyright 2026 The stabcert Authors
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

#ifndef STABCERT_GF2_H
#define STABCERT_GF2_H

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stabcert {

class Rng;

/// Largest qubit count for which dense 2^n vectors are materialized.
inline constexpr int kMaxQubits = 24;

/// Raised when vectors of different lengths are mixed.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised when a value violates a documented domain constraint.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

void check_qubit_count(int n);

inline int popcount_parity(uint32_t x) {
    return __builtin_parityll(x);
}

/// A vector in F_2^n naming one stabilizer element in the reference labeling.
/// Bit i of `bits()` is coordinate u_{i+1}; coordinate 0 is the least significant bit.
class Label {
   public:
    Label() = default;
    Label(int n, uint32_t bits);

    static Label zero(int n) {
        return Label(n, 0);
    }
    /// Standard basis vector e_{i+1} (0-based index i).
    static Label unit(int n, int i);
    /// Parses a coordinate string such as "110" (u_1 u_2 u_3, left to right).
    static Label from_string(std::string_view coords);
    /// Parses the serialized form "u<hex>".
    static Label from_hex(int n, std::string_view text);

    int n() const {
        return n_;
    }
    uint32_t bits() const {
        return bits_;
    }
    bool is_zero() const {
        return bits_ == 0;
    }
    bool coord(int i) const {
        return (bits_ >> i) & 1u;
    }

    /// Mod-2 inner product u.s.
    int dot(Label other) const;
    Label operator^(Label other) const;

    std::string to_hex() const;
    std::string to_string() const;

    bool operator==(const Label &other) const = default;
    auto operator<=>(const Label &other) const = default;

   private:
    int n_ = 0;
    uint32_t bits_ = 0;
};

/// Incremental row-echelon basis over F_2 for rank tests and span membership.
class Gf2Basis {
   public:
    explicit Gf2Basis(int n);

    /// Inserts v; returns true iff the rank increased.
    bool insert(uint32_t v);
    bool contains(uint32_t v) const;
    /// Reduces v against the basis.
    uint32_t reduce(uint32_t v) const;
    int rank() const {
        return rank_;
    }

   private:
    int n_;
    int rank_ = 0;
    std::vector<uint32_t> pivot_rows_;
};

/// Dimension of the F_2-span of `vectors`.
int rank(std::span<const Label> vectors);

/// Basis of the annihilator {u : u.v = 0 for all v in span(vectors)}.
std::vector<Label> annihilator_basis(int n, std::span<const Label> vectors);

/// Dense membership set over F_2^n.
class LabelSet {
   public:
    LabelSet() = default;
    explicit LabelSet(int n);

    int n() const {
        return n_;
    }
    bool contains(uint32_t bits) const {
        return mask_[bits] != 0;
    }
    bool contains(Label u) const {
        return contains(u.bits());
    }
    /// Returns true iff u was not already present.
    bool insert(Label u);
    size_t size() const {
        return count_;
    }
    /// Number of nonzero labels absent from the set.
    size_t unqueried_count() const;
    bool covers_all_nonzero() const {
        return unqueried_count() == 0;
    }
    std::vector<Label> labels() const;

   private:
    int n_ = 0;
    size_t count_ = 0;
    std::vector<uint8_t> mask_;
};

/// An invertible n x n matrix over F_2, stored by columns (one measurement round).
class Gauge {
   public:
    explicit Gauge(std::vector<Label> columns);

    static Gauge identity(int n);

    int n() const {
        return static_cast<int>(columns_.size());
    }
    const std::vector<Label> &columns() const {
        return columns_;
    }
    /// Columns in ascending encoding order.
    std::vector<Label> column_set() const;

    /// A^T s: the syndrome expressed in this gauge's coordinates (t_i = a_i . s).
    Label to_gauge_coordinates(Label syndrome) const;
    /// Inverse of to_gauge_coordinates.
    Label from_gauge_coordinates(Label coordinates) const;

    bool operator==(const Gauge &other) const = default;

   private:
    std::vector<Label> columns_;
    // Rows of (A^T)^{-1}, one bitmask per output coordinate.
    std::vector<uint32_t> inverse_transpose_rows_;
};

/// Uniform sample from GL(n,2); column i is uniform outside the span of columns 1..i-1.
Gauge sample_uniform_gauge(int n, Rng &rng);

/// Greedy maximum-weight basis of the vector matroid on F_2^n \ {0}.
/// `weights` is indexed by label encoding (entry 0 ignored). Labels are scanned in nonincreasing
/// weight, ties broken unqueried-first and then by ascending encoding. Returned in ascending order.
std::vector<Label> greedy_max_weight_basis(int n, std::span<const double> weights, const LabelSet &queried);

}  // namespace stabcert

#endif
