#pragma once

#include "subcount/numtheory.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace subcount::bombieri {

/// Verdict and audit trail for the certification of q against x:
/// q qualifies when max_{y <= x} |E(y; q, 1)| <= x / (phi(q) (log x)^2).
struct BombieriCertificate {
    std::uint64_t x = 0;
    std::uint64_t q = 0;
    double max_abs_error = 0.0; // max over integer y <= x of |E(y; q, 1)|
    double bound = 0.0;         // x / (phi(q) (log x)^2)
    bool is_bombieri = false;
    std::uint64_t set_size = 0; // L = #{p <= x : p = 1 (mod q)}
    double log_p = 0.0;         // theta(x; q, 1) = log of the product of the set
};

inline BombieriCertificate certify(std::uint64_t x, std::uint64_t q,
                                   const numtheory::PrimeTable &tab) {
    if (x < 100)
        throw std::invalid_argument("certify: need x >= 100");
    if (!numtheory::is_prime_u64(q))
        throw std::invalid_argument("certify: q must be prime");
    if (q * q > x)
        throw std::invalid_argument("certify: need q <= sqrt(x)");
    if (tab.limit < x)
        throw std::invalid_argument("certify: prime table limit below x");

    const double phi = static_cast<double>(q - 1);
    const auto ps = numtheory::primes_in_ap(x, q, 1, tab);

    // E(y) = theta(y;q,1) - y/phi decreases linearly in y between jumps at
    // the progression primes, so over integer y the extrema occur at y = p
    // (just after the jump), y = p - 1 (just before), and at y = x.
    double th = 0.0;
    double mx = 0.0;
    for (auto p : ps) {
        mx = std::max(mx, std::abs(th - static_cast<double>(p - 1) / phi));
        th += std::log(static_cast<double>(p));
        mx = std::max(mx, std::abs(th - static_cast<double>(p) / phi));
    }
    mx = std::max(mx, std::abs(th - static_cast<double>(x) / phi));

    BombieriCertificate c;
    c.x = x;
    c.q = q;
    c.max_abs_error = mx;
    const double lx = std::log(static_cast<double>(x));
    c.bound = static_cast<double>(x) / (phi * lx * lx);
    c.is_bombieri = mx <= c.bound;
    c.set_size = ps.size();
    c.log_p = th;
    return c;
}

inline BombieriCertificate certify(std::uint64_t x, std::uint64_t q) {
    return certify(x, q, *numtheory::shared_table(x));
}

struct ScanEntry {
    std::uint64_t q = 0;
    double max_abs_error = 0.0;
    double bound = 0.0;
};

struct ScanResult {
    std::optional<BombieriCertificate> certificate; // first qualifying q, ascending
    std::vector<ScanEntry> tried;                   // per-q diagnostics, ascending
    std::uint64_t lo = 0;                           // ceil(x^rho / log x)
    std::uint64_t hi = 0;                           // floor(x^rho)
};

/// Scan the interval [x^rho / log x, x^rho] for the smallest certified prime.
/// An empty result is not an error: the interval can genuinely contain none
/// at small x, and the diagnostics record every candidate inspected.
inline ScanResult find_bombieri_prime(std::uint64_t x, double rho,
                                      const numtheory::PrimeTable &tab) {
    if (!(rho > 0.0 && rho < 0.5))
        throw std::invalid_argument("find_bombieri_prime: need 0 < rho < 1/2");
    const double xr = std::pow(static_cast<double>(x), rho);
    const double lx = std::log(static_cast<double>(x));
    if (xr / lx < 2.0)
        throw std::invalid_argument("find_bombieri_prime: empty scan interval (x too small)");

    ScanResult res;
    res.lo = static_cast<std::uint64_t>(std::ceil(xr / lx));
    res.hi = static_cast<std::uint64_t>(std::floor(xr));
    for (auto q : tab.primes) {
        if (q < res.lo)
            continue;
        if (q > res.hi)
            break;
        if (q * q > x)
            break;
        auto cert = certify(x, q, tab);
        res.tried.push_back({q, cert.max_abs_error, cert.bound});
        if (cert.is_bombieri) {
            res.certificate = cert;
            break;
        }
    }
    return res;
}

inline ScanResult find_bombieri_prime(std::uint64_t x, double rho) {
    return find_bombieri_prime(x, rho, *numtheory::shared_table(x));
}

struct CardinalityCheck {
    bool holds = false;
    double lhs = 0.0;        // |L - x / (phi(q) log x)|
    double rhs = 0.0;        // 3 x / (phi(q) (log x)^2)
    double slack_ratio = 0.0; // lhs / rhs
};

/// Validate |#P(x, q) - x/(phi(q) log x)| <= 3 x/(phi(q) (log x)^2) from the
/// fields of a certificate (so corrupted inputs are detectable).
inline CardinalityCheck check_cardinality_bound(const BombieriCertificate &cert) {
    if (!cert.is_bombieri)
        throw std::invalid_argument("check_cardinality_bound: certificate is not Bombieri");
    const double phi = static_cast<double>(cert.q - 1);
    const double lx = std::log(static_cast<double>(cert.x));
    CardinalityCheck c;
    c.lhs = std::abs(static_cast<double>(cert.set_size) -
                     static_cast<double>(cert.x) / (phi * lx));
    c.rhs = 3.0 * static_cast<double>(cert.x) / (phi * lx * lx);
    c.holds = c.lhs <= c.rhs;
    c.slack_ratio = c.lhs / c.rhs;
    return c;
}

} // namespace subcount::bombieri
