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

#include "stabcert/gf2.h"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "stabcert/rng.h"

namespace stabcert {

void check_qubit_count(int n) {
    if (n < 1 || n > kMaxQubits) {
        throw ValidationError("qubit count " + std::to_string(n) + " outside supported range [1, " +
                              std::to_string(kMaxQubits) + "]");
    }
}

Label::Label(int n, uint32_t bits) : n_(n), bits_(bits) {
    check_qubit_count(n);
    if (n < 32 && (bits >> n) != 0) {
        throw ValidationError("label bits exceed qubit count");
    }
}

Label Label::unit(int n, int i) {
    if (i < 0 || i >= n) {
        throw ValidationError("unit label index out of range");
    }
    return Label(n, 1u << i);
}

Label Label::from_string(std::string_view coords) {
    uint32_t bits = 0;
    for (size_t i = 0; i < coords.size(); i++) {
        if (coords[i] == '1') {
            bits |= 1u << i;
        } else if (coords[i] != '0') {
            throw ValidationError("coordinate string must contain only 0 and 1: " + std::string(coords));
        }
    }
    return Label(static_cast<int>(coords.size()), bits);
}

Label Label::from_hex(int n, std::string_view text) {
    if (text.size() < 2 || text[0] != 'u') {
        throw ValidationError("label must look like u<hex>: " + std::string(text));
    }
    uint32_t bits = 0;
    auto body = text.substr(1);
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), bits, 16);
    if (ec != std::errc() || ptr != body.data() + body.size()) {
        throw ValidationError("bad hex label: " + std::string(text));
    }
    return Label(n, bits);
}

int Label::dot(Label other) const {
    if (other.n_ != n_) {
        throw DimensionError("label dimension mismatch");
    }
    return popcount_parity(bits_ & other.bits_);
}

Label Label::operator^(Label other) const {
    if (other.n_ != n_) {
        throw DimensionError("label dimension mismatch");
    }
    return Label(n_, bits_ ^ other.bits_);
}

std::string Label::to_hex() const {
    char buf[16];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), bits_, 16);
    return "u" + std::string(buf, ptr);
}

std::string Label::to_string() const {
    std::string s(n_, '0');
    for (int i = 0; i < n_; i++) {
        if (coord(i)) {
            s[i] = '1';
        }
    }
    return s;
}

Gf2Basis::Gf2Basis(int n) : n_(n), pivot_rows_(n, 0) {
}

uint32_t Gf2Basis::reduce(uint32_t v) const {
    for (int b = n_ - 1; b >= 0 && v != 0; b--) {
        if (((v >> b) & 1u) && pivot_rows_[b] != 0) {
            v ^= pivot_rows_[b];
        }
    }
    return v;
}

bool Gf2Basis::contains(uint32_t v) const {
    return reduce(v) == 0;
}

bool Gf2Basis::insert(uint32_t v) {
    v = reduce(v);
    if (v == 0) {
        return false;
    }
    int top = 31 - __builtin_clz(v);
    pivot_rows_[top] = v;
    rank_++;
    return true;
}

int rank(std::span<const Label> vectors) {
    if (vectors.empty()) {
        return 0;
    }
    int n = vectors.front().n();
    Gf2Basis basis(n);
    for (const Label &v : vectors) {
        if (v.n() != n) {
            throw DimensionError("rank: vectors have mismatched dimensions");
        }
        basis.insert(v.bits());
    }
    return basis.rank();
}

std::vector<Label> annihilator_basis(int n, std::span<const Label> vectors) {
    // Reduced row echelon form of the spanning set, then read off the null space.
    std::vector<uint32_t> rows;
    for (const Label &v : vectors) {
        if (v.n() != n) {
            throw DimensionError("annihilator: vectors have mismatched dimensions");
        }
        rows.push_back(v.bits());
    }
    std::vector<int> pivot_cols;
    size_t r = 0;
    for (int c = 0; c < n && r < rows.size(); c++) {
        size_t p = r;
        while (p < rows.size() && !((rows[p] >> c) & 1u)) {
            p++;
        }
        if (p == rows.size()) {
            continue;
        }
        std::swap(rows[r], rows[p]);
        for (size_t i = 0; i < rows.size(); i++) {
            if (i != r && ((rows[i] >> c) & 1u)) {
                rows[i] ^= rows[r];
            }
        }
        pivot_cols.push_back(c);
        r++;
    }
    rows.resize(r);
    std::vector<bool> is_pivot(n, false);
    for (int c : pivot_cols) {
        is_pivot[c] = true;
    }
    std::vector<Label> out;
    for (int f = 0; f < n; f++) {
        if (is_pivot[f]) {
            continue;
        }
        uint32_t u = 1u << f;
        for (size_t i = 0; i < rows.size(); i++) {
            if ((rows[i] >> f) & 1u) {
                u |= 1u << pivot_cols[i];
            }
        }
        out.emplace_back(n, u);
    }
    return out;
}

LabelSet::LabelSet(int n) : n_(n), mask_(size_t{1} << n, 0) {
    check_qubit_count(n);
}

bool LabelSet::insert(Label u) {
    if (u.n() != n_) {
        throw DimensionError("label set dimension mismatch");
    }
    if (mask_[u.bits()]) {
        return false;
    }
    mask_[u.bits()] = 1;
    count_++;
    return true;
}

size_t LabelSet::unqueried_count() const {
    size_t nonzero_present = count_ - (mask_.empty() ? 0 : mask_[0]);
    return mask_.size() - 1 - nonzero_present;
}

std::vector<Label> LabelSet::labels() const {
    std::vector<Label> out;
    out.reserve(count_);
    for (uint32_t b = 0; b < mask_.size(); b++) {
        if (mask_[b]) {
            out.emplace_back(n_, b);
        }
    }
    return out;
}

Gauge::Gauge(std::vector<Label> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) {
        throw ValidationError("gauge needs at least one column");
    }
    int n = static_cast<int>(columns_.size());
    check_qubit_count(n);
    for (const Label &c : columns_) {
        if (c.n() != n) {
            throw DimensionError("gauge column dimension must equal the number of columns");
        }
    }
    // Gauss-Jordan on [A^T | I].
    std::vector<uint32_t> rows(n), inv(n);
    for (int i = 0; i < n; i++) {
        rows[i] = columns_[i].bits();
        inv[i] = 1u << i;
    }
    for (int c = 0; c < n; c++) {
        int p = c;
        while (p < n && !((rows[p] >> c) & 1u)) {
            p++;
        }
        if (p == n) {
            throw ValidationError("gauge columns are linearly dependent");
        }
        std::swap(rows[c], rows[p]);
        std::swap(inv[c], inv[p]);
        for (int i = 0; i < n; i++) {
            if (i != c && ((rows[i] >> c) & 1u)) {
                rows[i] ^= rows[c];
                inv[i] ^= inv[c];
            }
        }
    }
    inverse_transpose_rows_ = std::move(inv);
}

Gauge Gauge::identity(int n) {
    std::vector<Label> cols;
    for (int i = 0; i < n; i++) {
        cols.push_back(Label::unit(n, i));
    }
    return Gauge(std::move(cols));
}

std::vector<Label> Gauge::column_set() const {
    std::vector<Label> out = columns_;
    std::sort(out.begin(), out.end());
    return out;
}

Label Gauge::to_gauge_coordinates(Label syndrome) const {
    uint32_t t = 0;
    for (int i = 0; i < n(); i++) {
        t |= static_cast<uint32_t>(columns_[i].dot(syndrome)) << i;
    }
    return Label(n(), t);
}

Label Gauge::from_gauge_coordinates(Label coordinates) const {
    if (coordinates.n() != n()) {
        throw DimensionError("coordinate dimension mismatch");
    }
    uint32_t s = 0;
    for (int j = 0; j < n(); j++) {
        s |= static_cast<uint32_t>(popcount_parity(inverse_transpose_rows_[j] & coordinates.bits())) << j;
    }
    return Label(n(), s);
}

Gauge sample_uniform_gauge(int n, Rng &rng) {
    check_qubit_count(n);
    Gf2Basis span(n);
    std::vector<Label> cols;
    uint64_t space = uint64_t{1} << n;
    while (static_cast<int>(cols.size()) < n) {
        auto v = static_cast<uint32_t>(rng.uniform_below(space));
        if (span.insert(v)) {
            cols.emplace_back(n, v);
        }
    }
    return Gauge(std::move(cols));
}

std::vector<Label> greedy_max_weight_basis(int n, std::span<const double> weights, const LabelSet &queried) {
    check_qubit_count(n);
    size_t space = size_t{1} << n;
    if (weights.size() != space) {
        throw DimensionError("weights must have 2^n entries");
    }
    if (queried.n() != n) {
        throw DimensionError("queried set dimension mismatch");
    }
    std::vector<uint32_t> order(space - 1);
    std::iota(order.begin(), order.end(), 1u);
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
        if (weights[a] != weights[b]) {
            return weights[a] > weights[b];
        }
        bool qa = queried.contains(a), qb = queried.contains(b);
        if (qa != qb) {
            return !qa;
        }
        return a < b;
    });
    Gf2Basis basis(n);
    std::vector<Label> chosen;
    for (uint32_t u : order) {
        if (basis.insert(u)) {
            chosen.emplace_back(n, u);
            if (basis.rank() == n) {
                break;
            }
        }
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

}  // namespace stabcert
