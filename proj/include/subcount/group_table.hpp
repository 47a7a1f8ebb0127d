#pragma once

#include "subcount/bigint.hpp"
#include "subcount/errors.hpp"
#include "subcount/numtheory.hpp"

#include <array>
#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace subcount::congruence {

/// A finite group as a dense multiplication table over element ids 0..n-1.
struct GroupTable {
    std::uint32_t n = 0;
    std::uint16_t identity = 0;
    std::vector<std::uint16_t> mult; // n * n, row-major
    std::vector<std::uint16_t> inv;
    std::vector<std::uint32_t> elem_order;
    bool abelian = false;

    std::uint16_t mul(std::uint16_t a, std::uint16_t b) const {
        return mult[static_cast<std::size_t>(a) * n + b];
    }
    std::uint16_t conj(std::uint16_t g, std::uint16_t x) const {
        return mul(mul(g, x), inv[g]);
    }
};

namespace detail {

inline void finish_table(GroupTable &t) {
    const std::uint32_t n = t.n;
    // identity: the unique e with e*x = x for all x
    bool found = false;
    for (std::uint32_t e = 0; e < n && !found; ++e) {
        bool ok = true;
        for (std::uint32_t x = 0; x < n && ok; ++x)
            ok = t.mult[static_cast<std::size_t>(e) * n + x] == x;
        if (ok) {
            t.identity = static_cast<std::uint16_t>(e);
            found = true;
        }
    }
    if (!found)
        throw std::logic_error("GroupTable: no identity element");
    t.inv.assign(n, 0);
    for (std::uint32_t a = 0; a < n; ++a) {
        bool ok = false;
        for (std::uint32_t b = 0; b < n; ++b)
            if (t.mult[static_cast<std::size_t>(a) * n + b] == t.identity) {
                t.inv[a] = static_cast<std::uint16_t>(b);
                ok = true;
                break;
            }
        if (!ok)
            throw std::logic_error("GroupTable: element without inverse");
    }
    t.elem_order.assign(n, 0);
    for (std::uint32_t a = 0; a < n; ++a) {
        std::uint32_t ord = 1;
        std::uint16_t cur = static_cast<std::uint16_t>(a);
        while (cur != t.identity) {
            cur = t.mul(cur, static_cast<std::uint16_t>(a));
            ++ord;
        }
        t.elem_order[a] = ord;
    }
    t.abelian = true;
    for (std::uint32_t a = 0; a < n && t.abelian; ++a)
        for (std::uint32_t b = a + 1; b < n; ++b)
            if (t.mul(static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b)) !=
                t.mul(static_cast<std::uint16_t>(b), static_cast<std::uint16_t>(a))) {
                t.abelian = false;
                break;
            }
}

} // namespace detail

/// Element table of a finite abelian product of cyclic groups, in the same
/// mixed-radix element order the abelian module uses.
inline GroupTable abelian_table(const std::vector<std::uint64_t> &orders,
                                std::uint64_t order_cap = 5000) {
    std::uint64_t n = 1;
    for (auto o : orders) {
        if (o < 2)
            throw std::invalid_argument("abelian_table: orders must be >= 2");
        n *= o;
        if (n > order_cap)
            throw resource_error("abelian_table: group order exceeds cap");
    }
    const auto t = orders.size();
    std::vector<std::uint64_t> stride(t, 1);
    for (std::size_t i = 1; i < t; ++i)
        stride[i] = stride[i - 1] * orders[i - 1];

    GroupTable g;
    g.n = static_cast<std::uint32_t>(n);
    g.mult.resize(static_cast<std::size_t>(n) * n);
    for (std::uint64_t a = 0; a < n; ++a)
        for (std::uint64_t b = 0; b < n; ++b) {
            std::uint64_t r = 0;
            for (std::size_t i = 0; i < t; ++i) {
                const std::uint64_t xa = (a / stride[i]) % orders[i];
                const std::uint64_t xb = (b / stride[i]) % orders[i];
                r += ((xa + xb) % orders[i]) * stride[i];
            }
            g.mult[a * n + b] = static_cast<std::uint16_t>(r);
        }
    detail::finish_table(g);
    return g;
}

/// |SL2(Z/m)| = m^3 prod_{p | m} (1 - p^-2), as an exact integer.
inline BigInt sl2_order(std::uint64_t m) {
    if (m < 1)
        throw std::invalid_argument("sl2_order: need m >= 1");
    BigInt o = BigInt(m) * m * m;
    for (const auto &[p, e] : numtheory::factor_u64(m)) {
        (void)e;
        o /= BigInt(p) * p;
        o *= BigInt(p) * p - 1;
    }
    return o;
}

/// SL2(Z/m) with its elements in row-major lexicographic order (a, b, c, d).
struct Sl2Group {
    std::uint64_t m = 1;
    GroupTable table;
    std::vector<std::array<std::uint16_t, 4>> mats;

    std::uint16_t index_of(const std::array<std::uint16_t, 4> &mat) const {
        auto it = std::lower_bound(mats.begin(), mats.end(), mat);
        if (it == mats.end() || *it != mat)
            throw std::logic_error("Sl2Group: matrix not in SL2");
        return static_cast<std::uint16_t>(it - mats.begin());
    }
};

inline Sl2Group build_sl2(std::uint64_t m, std::uint64_t order_cap = 5000) {
    if (m < 1)
        throw std::invalid_argument("build_sl2: need m >= 1");
    const BigInt ord = sl2_order(m);
    if (ord > order_cap)
        throw resource_error("build_sl2: group order " + ord.str() + " exceeds cap " +
                             std::to_string(order_cap));

    Sl2Group g;
    g.m = m;
    if (m == 1) {
        g.mats.push_back({0, 0, 0, 0});
        g.table.n = 1;
        g.table.mult = {0};
        detail::finish_table(g.table);
        return g;
    }
    for (std::uint64_t a = 0; a < m; ++a)
        for (std::uint64_t b = 0; b < m; ++b)
            for (std::uint64_t c = 0; c < m; ++c)
                for (std::uint64_t d = 0; d < m; ++d)
                    if (((a * d) % m + m - (b * c) % m) % m == 1 % m)
                        g.mats.push_back({static_cast<std::uint16_t>(a),
                                          static_cast<std::uint16_t>(b),
                                          static_cast<std::uint16_t>(c),
                                          static_cast<std::uint16_t>(d)});
    const std::uint64_t n = g.mats.size();
    if (BigInt(n) != ord)
        throw std::logic_error("build_sl2: element count disagrees with the order formula");

    g.table.n = static_cast<std::uint32_t>(n);
    g.table.mult.resize(n * n);
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto &x = g.mats[i];
        for (std::uint64_t j = 0; j < n; ++j) {
            const auto &y = g.mats[j];
            const std::array<std::uint16_t, 4> p = {
                static_cast<std::uint16_t>((x[0] * y[0] + x[1] * y[2]) % m),
                static_cast<std::uint16_t>((x[0] * y[1] + x[1] * y[3]) % m),
                static_cast<std::uint16_t>((x[2] * y[0] + x[3] * y[2]) % m),
                static_cast<std::uint16_t>((x[2] * y[1] + x[3] * y[3]) % m)};
            g.table.mult[i * n + j] = g.index_of(p);
        }
    }
    detail::finish_table(g.table);
    return g;
}

} // namespace subcount::congruence
