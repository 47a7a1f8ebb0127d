#pragma once

#include "subcount/bigint.hpp"
#include "subcount/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace subcount::numtheory {

// ---------------------------------------------------------------------------
// Prime tables
// ---------------------------------------------------------------------------

struct PrimeTable {
    std::uint64_t limit = 0;                // every prime <= limit is present
    std::vector<std::uint64_t> primes;      // strictly increasing

    bool contains(std::uint64_t n) const {
        return std::binary_search(primes.begin(), primes.end(), n);
    }
    /// Number of primes <= x (x must be <= limit for a meaningful answer).
    std::size_t count_leq(std::uint64_t x) const {
        return static_cast<std::size_t>(
            std::upper_bound(primes.begin(), primes.end(), x) - primes.begin());
    }
};

struct SieveOptions {
    std::uint64_t limit_budget = 2'000'000'000ULL;
    std::filesystem::path cache_dir; // empty: no disk cache
};

namespace detail {

inline constexpr char sieve_magic[8] = {'S', 'C', 'S', 'I', 'E', 'V', 'E', '1'};

inline void put_u64_le(std::ostream &os, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i)
        b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b, 8);
}

inline bool get_u64_le(std::istream &is, std::uint64_t &v) {
    char b[8];
    if (!is.read(b, 8))
        return false;
    v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return true;
}

inline std::filesystem::path cache_file(const std::filesystem::path &dir, std::uint64_t limit) {
    return dir / ("primes-" + std::to_string(limit) + ".bin");
}

inline std::optional<PrimeTable> load_cached_table(const std::filesystem::path &dir,
                                                   std::uint64_t limit) {
    std::ifstream in(cache_file(dir, limit), std::ios::binary);
    if (!in)
        return std::nullopt;
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, sieve_magic, 8) != 0)
        return std::nullopt;
    std::uint64_t file_limit = 0, count = 0;
    if (!get_u64_le(in, file_limit) || file_limit != limit || !get_u64_le(in, count))
        return std::nullopt;
    PrimeTable t;
    t.limit = limit;
    t.primes.resize(count);
    for (auto &p : t.primes)
        if (!get_u64_le(in, p))
            return std::nullopt;
    return t;
}

inline void store_cached_table(const std::filesystem::path &dir, const PrimeTable &t) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        return; // cache is best-effort
    std::ofstream out(cache_file(dir, t.limit), std::ios::binary | std::ios::trunc);
    if (!out)
        return;
    out.write(sieve_magic, 8);
    put_u64_le(out, t.limit);
    put_u64_le(out, t.primes.size());
    for (auto p : t.primes)
        put_u64_le(out, p);
}

/// Plain Eratosthenes up to n (inclusive), used for the base primes.
inline std::vector<std::uint64_t> small_sieve(std::uint64_t n) {
    std::vector<bool> comp(n + 1, false);
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p <= n; ++p) {
        if (comp[p])
            continue;
        out.push_back(p);
        for (std::uint64_t m = p * p; m <= n; m += p)
            comp[m] = true;
    }
    return out;
}

} // namespace detail

/// Segmented sieve of Eratosthenes.  Results are cached to disk keyed by
/// `limit` when a cache directory is configured; a cache file whose recorded
/// limit disagrees with its name is rebuilt.
inline PrimeTable sieve_primes(std::uint64_t limit, const SieveOptions &opts = {}) {
    if (limit < 2)
        throw std::invalid_argument("sieve_primes: limit must be >= 2");
    if (limit > opts.limit_budget)
        throw resource_error("sieve_primes: limit " + std::to_string(limit) +
                             " exceeds budget " + std::to_string(opts.limit_budget));

    if (!opts.cache_dir.empty())
        if (auto cached = detail::load_cached_table(opts.cache_dir, limit))
            return std::move(*cached);

    PrimeTable t;
    t.limit = limit;
    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
    const auto base = detail::small_sieve(root);

    constexpr std::uint64_t segment = 1u << 20;
    std::vector<bool> comp;
    for (std::uint64_t lo = 2; lo <= limit; lo += segment) {
        const std::uint64_t hi = std::min(limit, lo + segment - 1);
        comp.assign(hi - lo + 1, false);
        for (auto p : base) {
            if (p * p > hi)
                break;
            std::uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
            for (std::uint64_t m = start; m <= hi; m += p)
                comp[m - lo] = true;
        }
        for (std::uint64_t v = lo; v <= hi; ++v)
            if (!comp[v - lo])
                t.primes.push_back(v);
    }

    if (!opts.cache_dir.empty())
        detail::store_cached_table(opts.cache_dir, t);
    return t;
}

/// Process-wide table store.  Tables are immutable once built and may be
/// shared freely across threads; construction is serialized.
inline std::shared_ptr<const PrimeTable> shared_table(std::uint64_t limit,
                                                      const SieveOptions &opts = {}) {
    static std::mutex mu;
    static std::map<std::uint64_t, std::shared_ptr<const PrimeTable>> store;
    std::lock_guard<std::mutex> lock(mu);
    auto it = store.lower_bound(limit);
    if (it != store.end())
        return it->second; // any table with limit >= requested works
    auto t = std::make_shared<const PrimeTable>(sieve_primes(limit, opts));
    store[limit] = t;
    return t;
}

// ---------------------------------------------------------------------------
// Primes in arithmetic progressions and Chebyshev-type sums
// ---------------------------------------------------------------------------

inline std::vector<std::uint64_t> primes_in_ap(std::uint64_t x, std::uint64_t q,
                                               std::uint64_t a, const PrimeTable &tab) {
    if (q < 1 || x < 2)
        throw std::invalid_argument("primes_in_ap: need q >= 1 and x >= 2");
    if (std::gcd(a, q) != 1)
        throw std::invalid_argument("primes_in_ap: gcd(a, q) must be 1");
    if (tab.limit < x)
        throw std::invalid_argument("primes_in_ap: table limit below x");
    std::vector<std::uint64_t> out;
    const std::uint64_t r = a % q;
    for (auto p : tab.primes) {
        if (p > x)
            break;
        if (p % q == r)
            out.push_back(p);
    }
    return out;
}

inline std::vector<std::uint64_t> primes_in_ap(std::uint64_t x, std::uint64_t q,
                                               std::uint64_t a) {
    return primes_in_ap(x, q, a, *shared_table(x));
}

/// theta(x; q, a) = sum of log p over p <= x, p = a (mod q).
/// Summation runs in ascending p so results are reproducible bit-for-bit.
inline double theta(std::uint64_t x, std::uint64_t q, std::uint64_t a,
                    const PrimeTable &tab) {
    double s = 0.0;
    for (auto p : primes_in_ap(x, q, a, tab))
        s += std::log(static_cast<double>(p));
    return s;
}

inline double theta(std::uint64_t x, std::uint64_t q, std::uint64_t a) {
    return theta(x, q, a, *shared_table(x));
}

// ---------------------------------------------------------------------------
// Factorization
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    b %= m;
    while (e) {
        if (e & 1)
            r = mulmod_u64(r, b, m);
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    return r;
}

// Witness set deterministic for all n < 3.3e24, which covers 64-bit inputs.
inline constexpr std::array<std::uint64_t, 13> mr_witnesses = {2,  3,  5,  7,  11, 13, 17,
                                                               19, 23, 29, 31, 37, 41};

inline bool miller_rabin_u64(std::uint64_t n) {
    if (n < 2)
        return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull})
        if (n % p == 0)
            return n == p;
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (std::uint64_t a : mr_witnesses) {
        if (a % n == 0)
            continue;
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

/// Pollard-Brent rho; n must be composite, odd, with no tiny factors.
inline std::uint64_t pollard_brent_u64(std::uint64_t n) {
    if (n % 2 == 0)
        return 2;
    std::uint64_t c = 1;
    while (true) {
        std::uint64_t x = 2, y = 2, d = 1, q = 1, ys = 0;
        const std::uint64_t m = 128;
        std::uint64_t r = 1;
        auto f = [&](std::uint64_t v) { return (mulmod_u64(v, v, n) + c) % n; };
        while (d == 1) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i)
                y = f(y);
            std::uint64_t k = 0;
            while (k < r && d == 1) {
                ys = y;
                const std::uint64_t chunk = std::min(m, r - k);
                for (std::uint64_t i = 0; i < chunk; ++i) {
                    y = f(y);
                    q = mulmod_u64(q, x > y ? x - y : y - x, n);
                }
                d = std::gcd(q, n);
                k += chunk;
            }
            r <<= 1;
        }
        if (d == n) {
            d = 1;
            do {
                ys = f(ys);
                d = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (d == 1);
        }
        if (d != n)
            return d;
        ++c; // rare: retry with a different increment
    }
}

// BigInt variants for the 2^64..2^128 range.  Same witness set, extended with
// further small primes; no counterexample is known in this range.
inline BigInt powmod_big(BigInt b, BigInt e, const BigInt &m) {
    BigInt r = 1;
    b %= m;
    while (e > 0) {
        if ((e & 1) != 0)
            r = (r * b) % m;
        b = (b * b) % m;
        e >>= 1;
    }
    return r;
}

inline bool miller_rabin_big(const BigInt &n) {
    if (n < 2)
        return false;
    static const std::array<unsigned, 21> ws = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31,
                                                37, 41, 43, 47, 53, 59, 61, 67, 71, 73};
    for (unsigned p : ws)
        if (n % p == 0)
            return n == p;
    BigInt d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (unsigned a : ws) {
        BigInt x = powmod_big(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = (x * x) % n;
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

inline BigInt pollard_brent_big(const BigInt &n) {
    if (n % 2 == 0)
        return 2;
    BigInt c = 1;
    while (true) {
        BigInt x = 2, y = 2, d = 1, q = 1, ys = 0;
        std::uint64_t r = 1;
        const std::uint64_t m = 64;
        auto f = [&](const BigInt &v) { return (v * v + c) % n; };
        while (d == 1) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i)
                y = f(y);
            std::uint64_t k = 0;
            while (k < r && d == 1) {
                ys = y;
                const std::uint64_t chunk = std::min(m, r - k);
                for (std::uint64_t i = 0; i < chunk; ++i) {
                    y = f(y);
                    q = (q * abs(x - y)) % n;
                }
                d = gcd(q, n);
                k += chunk;
            }
            r <<= 1;
        }
        if (d == n) {
            d = 1;
            do {
                ys = f(ys);
                d = gcd(abs(x - ys), n);
            } while (d == 1);
        }
        if (d != n)
            return d;
        ++c;
    }
}

} // namespace detail

inline bool is_prime_u64(std::uint64_t n) { return detail::miller_rabin_u64(n); }

/// A positive integer together with its complete prime factorization.
struct FactoredNat {
    BigInt value = 1;
    std::map<BigInt, unsigned> factors; // prime -> exponent >= 1

    BigInt recompose() const {
        BigInt v = 1;
        for (const auto &[p, e] : factors)
            v *= pow_big(p, e);
        return v;
    }
};

inline std::map<std::uint64_t, unsigned> factor_u64(std::uint64_t n) {
    std::map<std::uint64_t, unsigned> out;
    if (n == 0)
        throw std::invalid_argument("factor_u64: n must be >= 1");
    for (std::uint64_t p : {2ull, 3ull, 5ull}) {
        while (n % p == 0) {
            ++out[p];
            n /= p;
        }
    }
    // trial division with a 2,3-coprime wheel up to 10^6
    for (std::uint64_t p = 7, step = 4; p <= 1'000'000 && p * p <= n; p += step, step = 6 - step) {
        while (n % p == 0) {
            ++out[p];
            n /= p;
        }
    }
    // remaining cofactor has no prime divisor <= 10^6
    std::vector<std::uint64_t> stack;
    if (n > 1)
        stack.push_back(n);
    while (!stack.empty()) {
        std::uint64_t v = stack.back();
        stack.pop_back();
        if (detail::miller_rabin_u64(v)) {
            ++out[v];
            continue;
        }
        std::uint64_t d = detail::pollard_brent_u64(v);
        stack.push_back(d);
        stack.push_back(v / d);
    }
    return out;
}

/// Complete factorization: trial division to 10^6, then Miller-Rabin plus
/// Pollard-Brent rho on the cofactor.  Inputs above 128 bits are rejected.
inline FactoredNat factor(const BigInt &n) {
    if (n < 1)
        throw std::invalid_argument("factor: n must be >= 1");
    if (msb(n) >= 128)
        throw std::invalid_argument("factor: values beyond 128 bits are out of scope");
    FactoredNat f;
    f.value = n;
    if (n == 1)
        return f;
    if (n <= BigInt(std::numeric_limits<std::uint64_t>::max())) {
        for (const auto &[p, e] : factor_u64(n.convert_to<std::uint64_t>()))
            f.factors[BigInt(p)] = e;
        return f;
    }
    BigInt rem = n;
    for (std::uint64_t p = 2; p <= 1'000'000; p = (p == 2 ? 3 : p + 2)) {
        while (rem % p == 0) {
            ++f.factors[BigInt(p)];
            rem /= p;
        }
        if (rem == 1)
            break;
    }
    std::vector<BigInt> stack;
    if (rem > 1)
        stack.push_back(rem);
    while (!stack.empty()) {
        BigInt v = stack.back();
        stack.pop_back();
        if (v <= BigInt(std::numeric_limits<std::uint64_t>::max())) {
            for (const auto &[p, e] : factor_u64(v.convert_to<std::uint64_t>()))
                f.factors[BigInt(p)] += e;
            continue;
        }
        if (detail::miller_rabin_big(v)) {
            ++f.factors[v];
            continue;
        }
        BigInt d = detail::pollard_brent_big(v);
        stack.push_back(d);
        stack.push_back(v / d);
    }
    return f;
}

inline std::uint64_t euler_phi(std::uint64_t q) {
    if (q == 0)
        throw std::invalid_argument("euler_phi: q must be >= 1");
    std::uint64_t r = q;
    for (const auto &[p, e] : factor_u64(q)) {
        (void)e;
        r -= r / p;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Error term E(x; q, a) = theta(x; q, a) - x/phi(q)
// ---------------------------------------------------------------------------

inline double error_term(std::uint64_t x, std::uint64_t q, std::uint64_t a,
                         const PrimeTable &tab) {
    return theta(x, q, a, tab) - static_cast<double>(x) / static_cast<double>(euler_phi(q));
}

inline double error_term(std::uint64_t x, std::uint64_t q, std::uint64_t a) {
    return error_term(x, q, a, *shared_table(x));
}

// ---------------------------------------------------------------------------
// Asymptotic scale functions
// ---------------------------------------------------------------------------

struct ScaleValues {
    std::uint64_t n = 0;
    double ell = 0.0;    // log n / log log n
    double lambda = 0.0; // (log n)^2 / log log n
};

inline ScaleValues scales(std::uint64_t n) {
    if (n < 3)
        throw std::invalid_argument("scales: need n >= 3 so that log log n > 0");
    const double ln = std::log(static_cast<double>(n));
    ScaleValues s;
    s.n = n;
    s.ell = ln / std::log(ln);
    s.lambda = s.ell * ln;
    return s;
}

} // namespace subcount::numtheory
