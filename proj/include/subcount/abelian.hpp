#pragma once

#include "subcount/bigint.hpp"
#include "subcount/errors.hpp"
#include "subcount/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace subcount::abelian {

// ---------------------------------------------------------------------------
// Group specifications and layer types
// ---------------------------------------------------------------------------

/// A finite abelian group given as a product of cyclic groups.  The multiset
/// of cyclic orders is kept sorted descending as the canonical form.
struct AbelianGroupSpec {
    std::vector<std::uint64_t> cyclic_orders;

    AbelianGroupSpec() = default;
    explicit AbelianGroupSpec(std::vector<std::uint64_t> orders)
        : cyclic_orders(std::move(orders)) {
        for (auto x : cyclic_orders)
            if (x < 2)
                throw std::invalid_argument("AbelianGroupSpec: cyclic orders must be >= 2");
        std::sort(cyclic_orders.begin(), cyclic_orders.end(), std::greater<>());
    }

    BigInt order() const {
        BigInt o = 1;
        for (auto x : cyclic_orders)
            o *= x;
        return o;
    }

    std::vector<std::uint64_t> prime_support() const {
        std::vector<std::uint64_t> ps;
        for (auto x : cyclic_orders)
            for (const auto &[p, e] : numtheory::factor_u64(x)) {
                (void)e;
                if (std::find(ps.begin(), ps.end(), p) == ps.end())
                    ps.push_back(p);
            }
        std::sort(ps.begin(), ps.end());
        return ps;
    }
};

/// Per-prime layer partition lambda_1 >= lambda_2 >= ... of the Sylow
/// p-subgroup: lambda_i is the dimension of the i-th layer, equivalently the
/// conjugate partition of the p-adic valuations of the cyclic orders.
struct LayerType {
    std::uint64_t p = 0;
    std::vector<int> lambdas;

    int exponent_sum() const { return std::accumulate(lambdas.begin(), lambdas.end(), 0); }
};

inline LayerType layer_type(const AbelianGroupSpec &spec, std::uint64_t p) {
    if (!numtheory::is_prime_u64(p))
        throw std::invalid_argument("layer_type: p must be prime");
    std::vector<int> vals;
    for (auto x : spec.cyclic_orders) {
        int e = 0;
        while (x % p == 0) {
            x /= p;
            ++e;
        }
        if (e > 0)
            vals.push_back(e);
    }
    if (vals.empty())
        throw std::invalid_argument("layer_type: p does not divide the group order");
    std::sort(vals.begin(), vals.end(), std::greater<>());
    LayerType lt;
    lt.p = p;
    for (int i = 1;; ++i) {
        int c = static_cast<int>(std::count_if(vals.begin(), vals.end(),
                                               [&](int e) { return e >= i; }));
        if (c == 0)
            break;
        lt.lambdas.push_back(c);
    }
    return lt;
}

// ---------------------------------------------------------------------------
// Gaussian binomials and the layer-type product formula
// ---------------------------------------------------------------------------

/// Number of nu-dimensional subspaces of an F_p vector space of dimension
/// lam, computed by the exact product formula.  nu > lam yields 0.
inline BigInt gaussian_binomial(int lam, int nu, std::uint64_t p) {
    if (lam < 0 || nu < 0)
        throw std::invalid_argument("gaussian_binomial: negative arguments");
    if (p < 2)
        throw std::invalid_argument("gaussian_binomial: p must be >= 2");
    if (nu > lam)
        return 0;
    BigInt r = 1;
    const BigInt q = p;
    // running value stays integral: each prefix is itself a Gaussian binomial
    for (int i = 1; i <= nu; ++i) {
        r *= pow_big(q, static_cast<std::uint64_t>(lam - nu + i)) - 1;
        r /= pow_big(q, static_cast<std::uint64_t>(i)) - 1;
    }
    return r;
}

/// log of gaussian_binomial(lam, nu, q) evaluated in double precision without
/// materializing the integer; exact formula, float rounding only.
inline double log_gaussian_binomial(int lam, int nu, std::uint64_t q) {
    if (lam < 0 || nu < 0 || nu > lam)
        throw std::invalid_argument("log_gaussian_binomial: need 0 <= nu <= lam");
    const double lq = std::log(static_cast<double>(q));
    double s = 0.0;
    for (int i = 1; i <= nu; ++i) {
        const double a = (lam - nu + i) * lq;
        const double b = i * lq;
        s += a + std::log1p(-std::exp(-a));
        s -= b + std::log1p(-std::exp(-b));
    }
    return s;
}

/// Number of subgroups with layer type nu_1 >= nu_2 >= ... inside an abelian
/// p-group of layer type lambda:  prod_i p^{nu_{i+1}(lambda_i - nu_i)}
/// [lambda_i - nu_{i+1} choose nu_i - nu_{i+1}]_p.   Zero when some
/// nu_i > lambda_i; trailing zero entries of nu are permitted.
inline BigInt count_by_layer_type(const LayerType &g, std::vector<int> nus) {
    for (std::size_t i = 0; i + 1 < nus.size(); ++i)
        if (nus[i] < nus[i + 1])
            throw std::invalid_argument("count_by_layer_type: nu must be nonincreasing");
    for (int v : nus)
        if (v < 0)
            throw std::invalid_argument("count_by_layer_type: nu must be nonnegative");
    while (!nus.empty() && nus.back() == 0)
        nus.pop_back();
    BigInt r = 1;
    for (std::size_t i = 0; i < nus.size(); ++i) {
        const int l = i < g.lambdas.size() ? g.lambdas[i] : 0;
        const int v = nus[i];
        const int v2 = i + 1 < nus.size() ? nus[i + 1] : 0;
        if (v > l)
            return 0;
        r *= pow_big(BigInt(g.p), static_cast<std::uint64_t>(v2) * (l - v));
        r *= gaussian_binomial(l - v2, v - v2, g.p);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Whole-group counts
// ---------------------------------------------------------------------------

struct CountOptions {
    std::uint64_t max_layer_sequences = 20'000'000; // enumeration budget per prime
};

/// W[s] = number of subgroups of order p^s in a p-group of the given layer
/// type, obtained by summing the product formula over all admissible nu.
inline std::vector<BigInt> subgroup_counts_by_order(const LayerType &g,
                                                    const CountOptions &opts = {}) {
    const int total = g.exponent_sum();
    std::vector<BigInt> W(static_cast<std::size_t>(total) + 1);
    W[0] = 1; // empty nu: the trivial subgroup
    std::vector<int> nu;
    std::uint64_t visited = 0;

    auto rec = [&](auto &&self, std::size_t i, int prev, int sum) -> void {
        if (i == g.lambdas.size())
            return;
        const int cap = std::min(prev, g.lambdas[i]);
        for (int v = cap; v >= 1; --v) {
            if (++visited > opts.max_layer_sequences)
                throw resource_error("subgroup_counts_by_order: sequence budget exceeded");
            nu.push_back(v);
            W[static_cast<std::size_t>(sum + v)] += count_by_layer_type(g, nu);
            self(self, i + 1, v, sum + v);
            nu.pop_back();
        }
    };
    rec(rec, 0, total, 0);
    return W;
}

/// |Sub(G)|: multiplicative over Sylow subgroups, each counted exactly by the
/// layer-type formula.
inline BigInt count_all_subgroups(const AbelianGroupSpec &spec, const CountOptions &opts = {}) {
    BigInt total = 1;
    for (auto p : spec.prime_support()) {
        const auto W = subgroup_counts_by_order(layer_type(spec, p), opts);
        BigInt s = 0;
        for (const auto &w : W)
            s += w;
        total *= s;
    }
    return total;
}

/// Number of subgroups of order <= r.
inline BigInt count_subgroups_order_at_most(const AbelianGroupSpec &spec, const BigInt &r,
                                            const CountOptions &opts = {}) {
    if (r < 1)
        return 0;
    const auto ps = spec.prime_support();
    std::vector<std::vector<BigInt>> tables;
    tables.reserve(ps.size());
    for (auto p : ps)
        tables.push_back(subgroup_counts_by_order(layer_type(spec, p), opts));

    BigInt total = 0;
    auto rec = [&](auto &&self, std::size_t i, const BigInt &ord, const BigInt &mult) -> void {
        if (i == ps.size()) {
            total += mult;
            return;
        }
        BigInt po = 1;
        for (std::size_t s = 0; s < tables[i].size(); ++s) {
            if (s > 0) {
                po *= ps[i];
                if (ord * po > r)
                    break;
            }
            if (tables[i][s] != 0)
                self(self, i + 1, ord * po, mult * tables[i][s]);
        }
    };
    rec(rec, 0, 1, 1);
    return total;
}

/// Number of subgroups of index <= n.  Dual to the order-bounded count for
/// finite abelian groups: subgroups of index <= n are exactly those of order
/// >= |G|/n, counted as total minus the orders strictly below |G|/n.
inline BigInt count_subgroups_index_at_most(const AbelianGroupSpec &spec, const BigInt &n,
                                            const CountOptions &opts = {}) {
    if (n < 1)
        return 0;
    const BigInt g = spec.order();
    const BigInt below = (g - 1) / n; // largest integer < |G|/n
    return count_all_subgroups(spec, opts) - count_subgroups_order_at_most(spec, below, opts);
}

/// |End(G)| = prod over ordered pairs (j, k), diagonal included, of
/// gcd(x_j, x_k).
inline BigInt endomorphism_count(const AbelianGroupSpec &spec) {
    BigInt r = 1;
    for (auto a : spec.cyclic_orders)
        for (auto b : spec.cyclic_orders)
            r *= std::gcd(a, b);
    return r;
}

// ---------------------------------------------------------------------------
// Brute-force lattice oracle
// ---------------------------------------------------------------------------

struct LatticeOptions {
    std::uint64_t max_group_order = 10'000;
    std::uint64_t max_subgroups = 20'000'000;
    std::uint64_t max_recorded = 200'000; // generator records kept up to this many
};

struct SubgroupRecordAb {
    std::uint64_t order = 0;
    std::vector<std::vector<std::uint32_t>> gens; // coordinates w.r.t. cyclic_orders
};

struct SubgroupLatticeAb {
    std::uint64_t group_order = 0;
    std::uint64_t total = 0;
    std::map<std::uint64_t, std::uint64_t> counts_by_order;
    std::vector<SubgroupRecordAb> subgroups; // filled while total <= max_recorded
    bool subgroups_recorded = false;
};

namespace detail {

/// Open-addressing set of fixed-width bit-string keys, with the keys stored
/// contiguously so a level can be iterated in insertion order.
class KeyPoolSet {
  public:
    explicit KeyPoolSet(std::size_t words) : words_(words) { rehash(1 << 10); }

    std::size_t size() const { return count_; }
    const std::uint64_t *key(std::size_t i) const { return pool_.data() + i * words_; }

    bool insert(const std::uint64_t *k) {
        if ((count_ + 1) * 10 >= capacity_ * 7)
            rehash(capacity_ * 2);
        const std::uint64_t h = hash(k);
        std::size_t i = h & (capacity_ - 1);
        while (slots_[i] != empty_slot) {
            if (equal(key(slots_[i]), k))
                return false;
            i = (i + 1) & (capacity_ - 1);
        }
        slots_[i] = static_cast<std::uint32_t>(count_);
        pool_.insert(pool_.end(), k, k + words_);
        ++count_;
        return true;
    }

    void release() {
        pool_.clear();
        pool_.shrink_to_fit();
        slots_.clear();
        slots_.shrink_to_fit();
    }

  private:
    static constexpr std::uint32_t empty_slot = 0xffffffffu;

    std::uint64_t hash(const std::uint64_t *k) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (std::size_t i = 0; i < words_; ++i) {
            h ^= k[i];
            h *= 0xff51afd7ed558ccdULL;
            h ^= h >> 33;
        }
        return h;
    }
    bool equal(const std::uint64_t *a, const std::uint64_t *b) const {
        for (std::size_t i = 0; i < words_; ++i)
            if (a[i] != b[i])
                return false;
        return true;
    }
    void rehash(std::size_t cap) {
        capacity_ = cap;
        slots_.assign(capacity_, empty_slot);
        for (std::size_t i = 0; i < count_; ++i) {
            const std::uint64_t h = hash(key(i));
            std::size_t s = h & (capacity_ - 1);
            while (slots_[s] != empty_slot)
                s = (s + 1) & (capacity_ - 1);
            slots_[s] = static_cast<std::uint32_t>(i);
        }
    }

    std::size_t words_;
    std::size_t capacity_ = 0;
    std::size_t count_ = 0;
    std::vector<std::uint64_t> pool_;
    std::vector<std::uint32_t> slots_;
};

} // namespace detail

/// Enumerate every subgroup explicitly, closing generator sets over the
/// element set.  Subgroups of order o*p are built from each subgroup K of
/// order o by adjoining one representative g per coset of K with p*g in K.
/// Independent of the layer-type counting path; intended as its oracle.
inline SubgroupLatticeAb brute_force_lattice(const AbelianGroupSpec &spec,
                                             const LatticeOptions &opts = {}) {
    const BigInt big_order = spec.order();
    if (big_order > opts.max_group_order)
        throw resource_error("brute_force_lattice: group order exceeds cap");
    const auto n = big_order.convert_to<std::uint64_t>();
    const auto t = spec.cyclic_orders.size();

    // mixed-radix element coding
    std::vector<std::uint64_t> stride(t, 1);
    for (std::size_t i = 1; i < t; ++i)
        stride[i] = stride[i - 1] * spec.cyclic_orders[i - 1];
    auto decode = [&](std::uint64_t id, std::vector<std::uint32_t> &out) {
        out.resize(t);
        for (std::size_t i = 0; i < t; ++i)
            out[i] = static_cast<std::uint32_t>((id / stride[i]) % spec.cyclic_orders[i]);
    };
    auto add = [&](std::uint64_t a, std::uint64_t b) {
        std::uint64_t r = 0;
        for (std::size_t i = 0; i < t; ++i) {
            const std::uint64_t xa = (a / stride[i]) % spec.cyclic_orders[i];
            const std::uint64_t xb = (b / stride[i]) % spec.cyclic_orders[i];
            r += ((xa + xb) % spec.cyclic_orders[i]) * stride[i];
        }
        return r;
    };

    // dense addition table when affordable
    std::vector<std::uint32_t> add_tab;
    const bool use_tab = n <= 4096;
    if (use_tab) {
        add_tab.resize(n * n);
        for (std::uint64_t a = 0; a < n; ++a)
            for (std::uint64_t b = a; b < n; ++b) {
                const auto s = static_cast<std::uint32_t>(add(a, b));
                add_tab[a * n + b] = s;
                add_tab[b * n + a] = s;
            }
    }
    auto plus = [&](std::uint64_t a, std::uint64_t b) {
        return use_tab ? static_cast<std::uint64_t>(add_tab[a * n + b]) : add(a, b);
    };

    const auto primes = spec.prime_support();
    // scalar multiplication by each relevant prime
    std::map<std::uint64_t, std::vector<std::uint32_t>> pmul;
    for (auto p : primes) {
        auto &v = pmul[p];
        v.resize(n);
        for (std::uint64_t g = 0; g < n; ++g) {
            std::uint64_t r = 0;
            for (std::size_t i = 0; i < t; ++i) {
                const std::uint64_t x = (g / stride[i]) % spec.cyclic_orders[i];
                r += ((x * p) % spec.cyclic_orders[i]) * stride[i];
            }
            v[g] = static_cast<std::uint32_t>(r);
        }
    }

    const std::size_t words = (n + 63) / 64;
    auto test_bit = [&](const std::uint64_t *k, std::uint64_t i) {
        return (k[i >> 6] >> (i & 63)) & 1u;
    };
    auto set_bit = [](std::uint64_t *k, std::uint64_t i) { k[i >> 6] |= 1ull << (i & 63); };

    SubgroupLatticeAb lat;
    lat.group_order = n;
    lat.subgroups_recorded = true;

    std::map<std::uint64_t, detail::KeyPoolSet> levels;
    std::map<std::uint64_t, std::vector<std::vector<std::uint32_t>>> level_gens;

    std::vector<std::uint64_t> trivial(words, 0);
    set_bit(trivial.data(), 0);
    levels.emplace(1, detail::KeyPoolSet(words)).first->second.insert(trivial.data());
    level_gens[1].push_back({});

    std::uint64_t total = 0;
    std::vector<std::uint64_t> covered(words), grown(words), members;
    std::vector<std::uint32_t> coord;

    while (!levels.empty()) {
        auto it = levels.begin();
        const std::uint64_t ord = it->first;
        auto &pool = it->second;
        auto gens_it = level_gens.find(ord);

        total += pool.size();
        if (total > opts.max_subgroups)
            throw resource_error("brute_force_lattice: subgroup budget exceeded");
        lat.counts_by_order[ord] = pool.size();
        if (lat.subgroups_recorded && total <= opts.max_recorded) {
            for (std::size_t i = 0; i < pool.size(); ++i) {
                SubgroupRecordAb rec;
                rec.order = ord;
                for (auto gid : gens_it->second[i]) {
                    decode(gid, coord);
                    rec.gens.push_back(coord);
                }
                lat.subgroups.push_back(std::move(rec));
            }
        } else {
            lat.subgroups_recorded = false;
            lat.subgroups.clear();
            lat.subgroups.shrink_to_fit();
        }

        for (std::size_t ki = 0; ki < pool.size(); ++ki) {
            const std::uint64_t *K = pool.key(ki);
            members.clear();
            for (std::uint64_t w = 0; w < words; ++w) {
                std::uint64_t bits = K[w];
                while (bits) {
                    members.push_back(w * 64 + static_cast<std::uint64_t>(std::countr_zero(bits)));
                    bits &= bits - 1;
                }
            }
            for (auto p : primes) {
                if ((n / ord) % p != 0)
                    continue; // Lagrange rules the extension out
                const auto &pm = pmul[p];
                std::copy(K, K + words, covered.begin());
                for (std::uint64_t g = 0; g < n; ++g) {
                    if (test_bit(covered.data(), g))
                        continue;
                    // all of coset K+g behaves identically; mark it processed
                    for (auto e : members)
                        set_bit(covered.data(), plus(e, g));
                    if (!test_bit(K, pm[g]))
                        continue;
                    std::copy(K, K + words, grown.begin());
                    std::uint64_t cur = g;
                    for (std::uint64_t j = 1; j < p; ++j) {
                        for (auto e : members)
                            set_bit(grown.data(), plus(e, cur));
                        cur = plus(cur, g);
                    }
                    auto lv = levels.find(ord * p);
                    if (lv == levels.end())
                        lv = levels.emplace(ord * p, detail::KeyPoolSet(words)).first;
                    if (lv->second.insert(grown.data()) && lat.subgroups_recorded) {
                        auto gl = gens_it->second[ki];
                        gl.push_back(static_cast<std::uint32_t>(g));
                        level_gens[ord * p].push_back(std::move(gl));
                    }
                }
            }
        }
        pool.release();
        levels.erase(it);
        level_gens.erase(ord);
    }

    lat.total = total;
    return lat;
}

} // namespace subcount::abelian
