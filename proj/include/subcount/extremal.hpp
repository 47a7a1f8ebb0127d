#pragma once

#include "subcount/abelian.hpp"
#include "subcount/bigint.hpp"
#include "subcount/errors.hpp"
#include "subcount/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace subcount::extremal {

// ---------------------------------------------------------------------------
// The extremal constant gamma(R) and the continuous ratio maximization
// ---------------------------------------------------------------------------

inline double gamma(double R) {
    if (!(R > 0.0))
        throw std::invalid_argument("gamma: need R > 0");
    const double s = std::sqrt(R * (R + 1.0)) - R;
    return s * s / (4.0 * R * R);
}

struct RatioMax {
    double sigma = 0.0;
    double rho = 0.0;
    double value = 0.0;
};

/// Maximize sigma(1-sigma) rho(1-rho) / (sigma rho + R)^2 over (0,1)^2:
/// coarse 200x200 grid, then 60 rounds of per-coordinate ternary refinement.
inline RatioMax maximize_ratio(double R) {
    if (!(R > 0.0))
        throw std::invalid_argument("maximize_ratio: need R > 0");
    auto f = [R](double s, double r) {
        const double d = s * r + R;
        return s * (1.0 - s) * r * (1.0 - r) / (d * d);
    };

    RatioMax best;
    const int grid = 200;
    for (int i = 1; i < grid; ++i)
        for (int j = 1; j < grid; ++j) {
            const double s = static_cast<double>(i) / grid;
            const double r = static_cast<double>(j) / grid;
            const double v = f(s, r);
            if (v > best.value) {
                best = {s, r, v};
            }
        }

    auto refine = [&](double fixed, bool sigma_free) {
        double lo = 1e-12, hi = 1.0 - 1e-12;
        while (hi - lo > 1e-12) {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            const double v1 = sigma_free ? f(m1, fixed) : f(fixed, m1);
            const double v2 = sigma_free ? f(m2, fixed) : f(fixed, m2);
            if (v1 < v2)
                lo = m1;
            else
                hi = m2;
        }
        return 0.5 * (lo + hi);
    };
    for (int it = 0; it < 60; ++it) {
        best.sigma = refine(best.rho, true);
        best.rho = refine(best.sigma, false);
    }
    best.value = f(best.sigma, best.rho);
    return best;
}

// ---------------------------------------------------------------------------
// Chevalley parameters
// ---------------------------------------------------------------------------

enum class ChevalleyFamily { A, B, C, D, G2, F4, E6, E7, E8 };

struct ChevalleyParams {
    ChevalleyFamily family{};
    int ell = 0;               // rank
    int dim = 0;               // dimension of the group scheme
    int kappa = 0;             // number of positive roots
    BigRat R;                  // (dim - ell) / (2 ell) = kappa / ell
    std::vector<int> degrees;  // invariant degrees, for Borel-index q-analogs
};

inline ChevalleyFamily parse_family(const std::string &s) {
    if (s == "A") return ChevalleyFamily::A;
    if (s == "B") return ChevalleyFamily::B;
    if (s == "C") return ChevalleyFamily::C;
    if (s == "D") return ChevalleyFamily::D;
    if (s == "G" || s == "G2") return ChevalleyFamily::G2;
    if (s == "F" || s == "F4") return ChevalleyFamily::F4;
    if (s == "E6") return ChevalleyFamily::E6;
    if (s == "E7") return ChevalleyFamily::E7;
    if (s == "E8") return ChevalleyFamily::E8;
    if (s == "E") throw std::invalid_argument("parse_family: E needs a rank, use E6/E7/E8");
    throw std::invalid_argument("parse_family: unknown family " + s);
}

inline std::string family_name(ChevalleyFamily f) {
    switch (f) {
    case ChevalleyFamily::A: return "A";
    case ChevalleyFamily::B: return "B";
    case ChevalleyFamily::C: return "C";
    case ChevalleyFamily::D: return "D";
    case ChevalleyFamily::G2: return "G2";
    case ChevalleyFamily::F4: return "F4";
    case ChevalleyFamily::E6: return "E6";
    case ChevalleyFamily::E7: return "E7";
    case ChevalleyFamily::E8: return "E8";
    }
    return "?";
}

inline ChevalleyParams chevalley_R(ChevalleyFamily family, int ell) {
    ChevalleyParams p;
    p.family = family;
    p.ell = ell;
    switch (family) {
    case ChevalleyFamily::A:
        if (ell < 1)
            throw std::invalid_argument("chevalley_R: A needs rank >= 1");
        for (int d = 2; d <= ell + 1; ++d)
            p.degrees.push_back(d);
        break;
    case ChevalleyFamily::B:
    case ChevalleyFamily::C:
        if (ell < 2)
            throw std::invalid_argument("chevalley_R: B/C need rank >= 2");
        for (int d = 2; d <= 2 * ell; d += 2)
            p.degrees.push_back(d);
        break;
    case ChevalleyFamily::D:
        if (ell < 3)
            throw std::invalid_argument("chevalley_R: D needs rank >= 3");
        for (int d = 2; d <= 2 * (ell - 1); d += 2)
            p.degrees.push_back(d);
        p.degrees.push_back(ell);
        std::sort(p.degrees.begin(), p.degrees.end());
        break;
    case ChevalleyFamily::G2:
        if (ell != 2)
            throw std::invalid_argument("chevalley_R: G2 has rank 2");
        p.degrees = {2, 6};
        break;
    case ChevalleyFamily::F4:
        if (ell != 4)
            throw std::invalid_argument("chevalley_R: F4 has rank 4");
        p.degrees = {2, 6, 8, 12};
        break;
    case ChevalleyFamily::E6:
        if (ell != 6)
            throw std::invalid_argument("chevalley_R: E6 has rank 6");
        p.degrees = {2, 5, 6, 8, 9, 12};
        break;
    case ChevalleyFamily::E7:
        if (ell != 7)
            throw std::invalid_argument("chevalley_R: E7 has rank 7");
        p.degrees = {2, 6, 8, 10, 12, 14, 18};
        break;
    case ChevalleyFamily::E8:
        if (ell != 8)
            throw std::invalid_argument("chevalley_R: E8 has rank 8");
        p.degrees = {2, 8, 12, 14, 18, 20, 24, 30};
        break;
    }
    p.kappa = 0;
    for (int d : p.degrees)
        p.kappa += d - 1;
    p.dim = p.ell + 2 * p.kappa;
    p.R = BigRat(p.dim - p.ell, 2 * p.ell);
    return p;
}

// ---------------------------------------------------------------------------
// Structured sequence-pair optimizer and its exhaustive oracle
// ---------------------------------------------------------------------------

/// A pair of integer sequences {lambda_i}, {nu_i} with lambda_i <= t and
/// budget sum(R lambda_i + nu_i) <= C; objective A = sum nu_i (lambda_i - nu_i).
struct SequencePair {
    double R = 1.0;
    int t = 1;
    long long C = 0;
    std::vector<int> lambdas;
    std::vector<int> nus;
    long long objective = 0;

    double cost() const {
        double c = 0.0;
        for (std::size_t i = 0; i < lambdas.size(); ++i)
            c += R * lambdas[i] + nus[i];
        return c;
    }
};

/// Normal-form conditions: sequences nonincreasing with 1 <= nu_i <= lambda_i,
/// all lambda_i but the last equal to t, the first r-1 nu values taking at
/// most two adjacent values (larger ones first), and nu_r within one of nu_1
/// whenever lambda_r = t.
inline bool satisfies_prop71_structure(const SequencePair &sp) {
    const auto &l = sp.lambdas;
    const auto &v = sp.nus;
    if (l.size() != v.size())
        return false;
    const std::size_t r = l.size();
    if (r == 0)
        return true;
    for (std::size_t i = 0; i < r; ++i) {
        if (v[i] < 1 || l[i] < v[i] || l[i] > sp.t)
            return false;
        if (i + 1 < r && (l[i] < l[i + 1] || v[i] < v[i + 1]))
            return false;
    }
    for (std::size_t i = 0; i + 1 < r; ++i)
        if (l[i] != sp.t)
            return false;
    if (r >= 2) {
        const int hi = v[0];
        for (std::size_t i = 0; i + 1 < r; ++i)
            if (v[i] != hi && v[i] != hi - 1)
                return false;
        // two-value runs must be ordered high block then low block
        bool dropped = false;
        for (std::size_t i = 0; i + 1 < r; ++i) {
            if (v[i] == hi - 1)
                dropped = true;
            else if (dropped)
                return false;
        }
        if (l[r - 1] == sp.t && v[r - 1] != hi && v[r - 1] != hi - 1)
            return false;
    }
    return sp.cost() <= static_cast<double>(sp.C) + 1e-9;
}

/// Maximize A over the Prop-7.1 normal form directly; the family provably
/// contains a global maximizer, and the exhaustive oracle below checks it.
inline SequencePair optimize_sequence_pair(double R, long long C, int t) {
    if (R < 1.0)
        throw std::invalid_argument("optimize_sequence_pair: need R >= 1");
    if (C < 0 || t < 1)
        throw std::invalid_argument("optimize_sequence_pair: need C >= 0, t >= 1");

    SequencePair best;
    best.R = R;
    best.t = t;
    best.C = C;

    const double eps = 1e-9;
    auto consider = [&](const std::vector<int> &ls, const std::vector<int> &vs) {
        long long A = 0;
        double cost = 0.0;
        for (std::size_t i = 0; i < ls.size(); ++i) {
            A += static_cast<long long>(vs[i]) * (ls[i] - vs[i]);
            cost += R * ls[i] + vs[i];
        }
        if (cost <= static_cast<double>(C) + eps && A > best.objective) {
            best.lambdas = ls;
            best.nus = vs;
            best.objective = A;
        }
    };

    // single block
    for (int lam = 1; lam <= t; ++lam)
        for (int nu = 1; nu <= lam; ++nu)
            if (R * lam + nu <= static_cast<double>(C) + eps)
                consider({lam}, {nu});

    // r >= 2 blocks: r-1 full blocks at lambda = t with nu in {v, v-1},
    // then a final block (lam_r, nu_r)
    for (int r = 2; (r - 1) * (R * t + 1) + (R + 1) <= static_cast<double>(C) + eps; ++r) {
        for (int v = 1; v <= t; ++v) {
            for (int b = 0; b <= r - 1; ++b) {
                if (b < r - 1 && v < 2)
                    continue; // the low value v-1 must stay >= 1
                const int first = (b >= 1) ? v : v - 1;
                const int last = (b == r - 1) ? v : v - 1;
                std::vector<int> ls(static_cast<std::size_t>(r) - 1, t);
                std::vector<int> vs;
                for (int i = 0; i < b; ++i)
                    vs.push_back(v);
                for (int i = b; i < r - 1; ++i)
                    vs.push_back(v - 1);
                for (int lam_r = 1; lam_r <= t; ++lam_r) {
                    for (int nu_r = 1; nu_r <= std::min(lam_r, last); ++nu_r) {
                        if (lam_r == t && nu_r != first && nu_r != first - 1)
                            continue;
                        ls.push_back(lam_r);
                        vs.push_back(nu_r);
                        consider(ls, vs);
                        ls.pop_back();
                        vs.pop_back();
                    }
                }
            }
        }
    }
    return best;
}

/// Brute force over all nonincreasing block multisets (lambda, nu) with
/// 1 <= nu <= lambda <= t under the budget; the independent oracle.
inline long long exhaustive_sequence_pair(double R, long long C, int t,
                                          std::uint64_t node_budget = 200'000'000) {
    if (C < 0 || t < 1)
        throw std::invalid_argument("exhaustive_sequence_pair: need C >= 0, t >= 1");
    struct Block {
        int lam, nu;
        double cost;
        long long val;
    };
    std::vector<Block> blocks;
    for (int lam = t; lam >= 1; --lam)
        for (int nu = lam; nu >= 1; --nu)
            blocks.push_back({lam, nu, R * lam + nu, static_cast<long long>(nu) * (lam - nu)});

    long long best = 0;
    std::uint64_t nodes = 0;
    const double eps = 1e-9;
    auto rec = [&](auto &&self, std::size_t idx, double left, long long acc) -> void {
        if (++nodes > node_budget)
            throw resource_error("exhaustive_sequence_pair: node budget exceeded");
        best = std::max(best, acc);
        for (std::size_t i = idx; i < blocks.size(); ++i)
            if (blocks[i].cost <= left + eps)
                self(self, i, left - blocks[i].cost, acc + blocks[i].val);
    };
    rec(rec, 0, static_cast<double>(C), 0);
    return best;
}

// ---------------------------------------------------------------------------
// Prop 7.2: product lower bound for integers with bounded repetition
// ---------------------------------------------------------------------------

/// Checks prod x_i >= (t / (e d))^t in exact rational arithmetic, with e
/// replaced by the upper bound 2.7182818285.
inline bool check_prop72(const std::vector<std::uint64_t> &xs, int d) {
    if (d < 1)
        throw std::invalid_argument("check_prop72: need d >= 1");
    for (auto x : xs)
        if (x == 0)
            throw std::invalid_argument("check_prop72: xs must be positive");
    std::map<std::uint64_t, int> mult;
    for (auto x : xs)
        if (++mult[x] > d)
            throw std::invalid_argument("check_prop72: more than d repeats of a value");
    const std::uint64_t t = xs.size();
    // prod * (E_num * d)^t >= t^t * E_den^t  with e <= E_num/E_den
    const BigInt e_num = 27182818285LL;
    const BigInt e_den = 10'000'000'000LL;
    BigInt lhs = 1;
    for (auto x : xs)
        lhs *= x;
    lhs *= pow_big(e_num * d, t);
    const BigInt rhs = pow_big(BigInt(t), t) * pow_big(e_den, t);
    return lhs >= rhs;
}

// ---------------------------------------------------------------------------
// The gcd-product extremal problems
// ---------------------------------------------------------------------------

/// Witness for a gcd-product optimum: a strictly increasing member list with
/// product at most n, and the objective taken over ordered pairs including
/// the diagonal.
struct GcdWitness {
    BigInt n;
    std::vector<std::uint64_t> members;
    BigInt product_of_members;
    BigInt objective;
};

struct SearchOutcome {
    GcdWitness witness;
    bool exact = true; // false when the node budget cut the search short
    std::uint64_t nodes = 0;
};

/// Objective over ordered pairs (i, j) including i = j.
inline BigInt gcd_pair_objective(const std::vector<std::uint64_t> &vals) {
    BigInt r = 1;
    for (std::size_t i = 0; i < vals.size(); ++i)
        for (std::size_t j = 0; j < vals.size(); ++j)
            r *= std::gcd(vals[i], vals[j]);
    return r;
}

namespace detail {

/// Tie-break: prefer larger objective, then fewer members, then the
/// lexicographically smallest member list.
inline bool better_witness(const BigInt &obj, const std::vector<std::uint64_t> &members,
                           const GcdWitness &best) {
    if (best.members.empty())
        return true; // nothing recorded yet
    if (obj != best.objective)
        return obj > best.objective;
    if (members.size() != best.members.size())
        return members.size() < best.members.size();
    return members < best.members;
}

} // namespace detail

/// Plain exhaustive scan over sets of distinct primes with product <= n.
inline SearchOutcome m2_search_exhaustive(const BigInt &n,
                                          std::uint64_t node_budget = 100'000'000) {
    if (n < 2)
        throw std::invalid_argument("m2_search: need n >= 2");
    if (n > BigInt(std::numeric_limits<std::uint64_t>::max()))
        throw resource_error("m2_search_exhaustive: n beyond search range");
    const auto nn = n.convert_to<std::uint64_t>();
    const auto tab = numtheory::shared_table(std::max<std::uint64_t>(nn, 2));

    SearchOutcome out;
    out.witness.n = n;
    std::vector<std::uint64_t> members, vals;
    auto rec = [&](auto &&self, std::size_t idx, std::uint64_t budget, const BigInt &obj) -> void {
        if (!members.empty() && detail::better_witness(obj, members, out.witness)) {
            out.witness.members = members;
            out.witness.objective = obj;
        }
        for (std::size_t i = idx; i < tab->primes.size(); ++i) {
            const std::uint64_t p = tab->primes[i];
            if (p > budget)
                break;
            if (++out.nodes > node_budget)
                throw resource_error("m2_search_exhaustive: node budget exceeded");
            BigInt obj2 = obj * (p - 1);
            for (auto v : vals)
                obj2 *= BigInt(std::gcd(v, p - 1)) * std::gcd(v, p - 1);
            members.push_back(p);
            vals.push_back(p - 1);
            self(self, i + 1, budget / p, obj2);
            members.pop_back();
            vals.pop_back();
        }
    };
    rec(rec, 0, nn, BigInt(1));
    BigInt prod = 1;
    for (auto p : out.witness.members)
        prod *= p;
    out.witness.product_of_members = prod;
    return out;
}

/// Branch and bound over prime sets: candidates ascend, and a node is pruned
/// only when an admissible bound on every extension falls strictly below the
/// incumbent, so optimal ties survive for the deterministic tie-break.
inline SearchOutcome m2_search(const BigInt &n, std::uint64_t node_budget = 100'000'000) {
    if (n < 2)
        throw std::invalid_argument("m2_search: need n >= 2");
    if (n > BigInt(std::numeric_limits<std::uint64_t>::max()))
        throw resource_error("m2_search: n beyond search range");
    const auto nn = n.convert_to<std::uint64_t>();
    const auto tab = numtheory::shared_table(std::max<std::uint64_t>(nn, 2));
    const auto &P = tab->primes;
    std::size_t np = 0;
    while (np < P.size() && P[np] <= nn)
        ++np;

    SearchOutcome out;
    out.witness.n = n;
    bool budget_hit = false;
    std::vector<std::uint64_t> members, vals;

    // upper bound on any extension of the current set from candidates i..np-1
    auto extension_bound = [&](std::size_t i, std::uint64_t budget, const BigInt &obj) {
        std::uint64_t b = budget;
        std::size_t m = 0;
        for (std::size_t j = i; j < np && P[j] <= b; ++j) {
            b /= P[j];
            ++m;
        }
        if (m == 0)
            return obj;
        std::size_t hi = i;
        while (hi < np && P[hi] <= budget)
            ++hi;
        BigInt prod_big = 1;
        for (std::size_t j = hi - m; j < hi; ++j)
            prod_big *= P[j] - 1;
        return obj * pow_big(prod_big, 2 * members.size() + m);
    };

    auto rec = [&](auto &&self, std::size_t idx, std::uint64_t budget, const BigInt &obj) -> void {
        if (!members.empty() && detail::better_witness(obj, members, out.witness)) {
            out.witness.members = members;
            out.witness.objective = obj;
        }
        if (idx >= np || P[idx] > budget)
            return;
        if (!out.witness.members.empty() && extension_bound(idx, budget, obj) < out.witness.objective)
            return;
        for (std::size_t i = idx; i < np; ++i) {
            const std::uint64_t p = P[i];
            if (p > budget)
                break;
            if (++out.nodes > node_budget) {
                budget_hit = true;
                return;
            }
            BigInt obj2 = obj * (p - 1);
            for (auto v : vals)
                obj2 *= BigInt(std::gcd(v, p - 1)) * std::gcd(v, p - 1);
            members.push_back(p);
            vals.push_back(p - 1);
            self(self, i + 1, budget / p, obj2);
            members.pop_back();
            vals.pop_back();
            if (budget_hit)
                return;
        }
    };
    rec(rec, 0, nn, BigInt(1));
    out.exact = !budget_hit;
    BigInt prod = 1;
    for (auto p : out.witness.members)
        prod *= p;
    out.witness.product_of_members = prod;
    return out;
}

/// Exhaustive optimum over sets of distinct positive integers with product
/// <= n.  The singleton {1} is the degenerate seed; sets gain nothing from
/// the element 1, so enumeration runs over integers >= 2.
inline SearchOutcome m1_search(const BigInt &n, std::uint64_t node_budget = 200'000'000,
                               std::uint64_t exhaustive_cap = 10'000) {
    if (n < 1)
        throw std::invalid_argument("m1_search: need n >= 1");
    if (n > BigInt(exhaustive_cap))
        throw resource_error("m1_search: n beyond the exhaustive cap");
    const auto nn = n.convert_to<std::uint64_t>();

    SearchOutcome out;
    out.witness.n = n;
    out.witness.members = {1};
    out.witness.objective = 1;

    std::vector<std::uint64_t> members;
    bool budget_hit = false;
    auto rec = [&](auto &&self, std::uint64_t from, std::uint64_t budget, const BigInt &obj) -> void {
        for (std::uint64_t a = from; a <= budget; ++a) {
            if (++out.nodes > node_budget) {
                budget_hit = true;
                return;
            }
            BigInt obj2 = obj * a;
            for (auto v : members)
                obj2 *= BigInt(std::gcd(v, a)) * std::gcd(v, a);
            members.push_back(a);
            if (detail::better_witness(obj2, members, out.witness)) {
                out.witness.members = members;
                out.witness.objective = obj2;
            }
            self(self, a + 1, budget / a, obj2);
            members.pop_back();
            if (budget_hit)
                return;
        }
    };
    rec(rec, 2, nn, BigInt(1));
    out.exact = !budget_hit;
    BigInt prod = 1;
    for (auto p : out.witness.members)
        prod *= p;
    out.witness.product_of_members = prod;
    return out;
}

// ---------------------------------------------------------------------------
// Trend table for the gcd-product growth
// ---------------------------------------------------------------------------

struct TrendRow {
    std::uint64_t n = 0;
    BigInt m2_objective;
    std::vector<std::uint64_t> witness;
    double log_m2 = 0.0;
    double lambda = 0.0;
    double ratio = 0.0; // log M2(n) / lambda(n)
};

inline std::vector<TrendRow> theorem9_trend(const std::vector<std::uint64_t> &ns,
                                            std::uint64_t node_budget = 100'000'000) {
    std::vector<TrendRow> rows;
    for (auto n : ns) {
        if (n < 3)
            throw std::invalid_argument("theorem9_trend: need n >= 3 so lambda(n) > 0");
        auto res = m2_search(BigInt(n), node_budget);
        if (!res.exact)
            throw resource_error("theorem9_trend: m2_search budget exceeded at n=" +
                                 std::to_string(n));
        TrendRow row;
        row.n = n;
        row.m2_objective = res.witness.objective;
        row.witness = res.witness.members;
        row.log_m2 = log_big(res.witness.objective);
        row.lambda = numtheory::scales(n).lambda;
        row.ratio = row.log_m2 / row.lambda;
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Search over products of near-prime cyclic groups
// ---------------------------------------------------------------------------

struct Prop57Config {
    std::vector<std::uint64_t> minus_primes; // contribute C_{q-1}
    std::vector<std::uint64_t> plus_primes;  // contribute C_{q+1}
    BigInt r;
};

struct Prop57Result {
    Prop57Config best;
    BigInt s_order;  // subgroups of order <= r in the best X
    BigInt s_index;  // subgroups of index <= r, reported alongside
    double log_s = 0.0;
    double lambda = 0.0;
    double ratio = 0.0;
    bool exhaustive = true;
    std::uint64_t configs_scored = 0;
};

/// Search over X = prod C_{q_i - 1} x prod C_{q'_j + 1} with
/// r * prod q_i * prod q'_j <= n, scoring by the order-bounded subgroup
/// count.  Exhaustive while the config budget lasts; best-found afterwards.
inline Prop57Result prop57_search(std::uint64_t n, std::uint64_t config_budget = 200'000) {
    if (n < 2)
        throw std::invalid_argument("prop57_search: need n >= 2");
    const auto tab = numtheory::shared_table(std::max<std::uint64_t>(n, 2));

    Prop57Result res;
    res.best.r = n; // empty prime sets, maximal r
    res.s_order = 1;
    res.s_index = 1;

    auto score = [&](const std::vector<std::uint64_t> &minus,
                     const std::vector<std::uint64_t> &plus, std::uint64_t prod) {
        ++res.configs_scored;
        std::vector<std::uint64_t> orders;
        for (auto q : minus)
            if (q > 2)
                orders.push_back(q - 1);
        for (auto q : plus)
            orders.push_back(q + 1);
        const BigInt r = BigInt(n / prod);
        abelian::AbelianGroupSpec spec(orders);
        const BigInt s = abelian::count_subgroups_order_at_most(spec, r);
        if (s > res.s_order) {
            res.s_order = s;
            res.s_index = abelian::count_subgroups_index_at_most(spec, r);
            res.best = {minus, plus, r};
        }
    };

    std::vector<std::uint64_t> minus, plus;
    bool budget_hit = false;
    auto rec = [&](auto &&self, std::size_t idx, std::uint64_t prod) -> void {
        if (res.configs_scored >= config_budget) {
            budget_hit = true;
            return;
        }
        score(minus, plus, prod);
        for (std::size_t i = idx; i < tab->primes.size(); ++i) {
            const std::uint64_t q = tab->primes[i];
            if (prod > n / q)
                break;
            minus.push_back(q);
            self(self, i + 1, prod * q);
            minus.pop_back();
            if (budget_hit)
                return;
            plus.push_back(q);
            self(self, i + 1, prod * q);
            plus.pop_back();
            if (budget_hit)
                return;
        }
    };
    rec(rec, 0, 1);
    res.exhaustive = !budget_hit;
    res.log_s = res.s_order > 0 ? log_big(res.s_order) : 0.0;
    if (n >= 3) {
        res.lambda = numtheory::scales(n).lambda;
        res.ratio = res.log_s / res.lambda;
    }
    return res;
}

// ---------------------------------------------------------------------------
// Subgroup-growth exponents for homocyclic towers
// ---------------------------------------------------------------------------

inline double cor8_exponent(int d) {
    if (d < 2)
        throw std::invalid_argument("cor8_exponent: need d >= 2");
    const double s2 = std::sqrt(2.0);
    return (3.0 - 2.0 * s2) * d * d - 2.0 * (2.0 - s2);
}

/// nu(d - nu) / (2d - nu) as an exact rational.
inline BigRat uniform_exponent(int d, int nu) {
    if (d < 2 || nu < 0 || nu > d)
        throw std::invalid_argument("uniform_exponent: need d >= 2 and 0 <= nu <= d");
    return BigRat(static_cast<long long>(nu) * (d - nu), 2LL * d - nu);
}

/// Nearest integer to d(2 - sqrt 2), the maximizing substitution.
inline int cor8_nu_bracket(int d) {
    return static_cast<int>(std::llround(d * (2.0 - std::sqrt(2.0))));
}

inline BigRat uniform_exponent_max(int d) {
    BigRat best = 0;
    for (int nu = 0; nu <= d; ++nu)
        best = std::max(best, uniform_exponent(d, nu));
    return best;
}

} // namespace subcount::extremal
