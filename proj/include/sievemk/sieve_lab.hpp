#pragma once

// Desk-scale instantiation of the multidimensional Selberg sieve: build the
// lambda_{d_1,...,d_k} weight table from a polynomial F, run the exact
// combinatorial identities (lambda <-> y transforms, direct-vs-pairsum
// rearrangements of S1 and S2), and compare against the main-term predictions.
//
// All identity checks are exact rational equalities. Only the main-term
// prediction itself is floating point, and it is advisory by construction:
// desk-scale N is far from the asymptotic regime.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include <json.hpp>

#include "sievemk/forms.hpp"
#include "sievemk/primes.hpp"
#include "sievemk/rational.hpp"
#include "sievemk/tuples.hpp"

namespace sievemk {
namespace lab {

using Tuple = std::vector<std::int64_t>;

// Squarefree helpers via trial division; table values stay well under 2^31.
inline std::vector<std::int64_t> factor_squarefree(std::int64_t v) {
    std::vector<std::int64_t> ps;
    for (std::int64_t p = 2; p * p <= v; ++p) {
        if (v % p == 0) {
            ps.push_back(p);
            v /= p;
            if (v % p == 0) throw error("factor_squarefree: value is not squarefree");
        }
    }
    if (v > 1) ps.push_back(v);
    return ps;
}

inline int mobius_squarefree(std::int64_t v) {
    return factor_squarefree(v).size() % 2 == 0 ? 1 : -1;
}

inline std::int64_t phi_squarefree(std::int64_t v) {
    std::int64_t out = 1;
    for (std::int64_t p : factor_squarefree(v)) out *= p - 1;
    return out;
}

// totally multiplicative with g(p) = p - 2
inline std::int64_t g_squarefree(std::int64_t v) {
    std::int64_t out = 1;
    for (std::int64_t p : factor_squarefree(v)) out *= p - 2;
    return out;
}

// The common support of every table: k-tuples whose product is squarefree,
// below the cut R, and coprime to W.
struct Support {
    unsigned k = 0;
    std::int64_t r_cut = 0;
    std::int64_t w = 1;
    std::vector<Tuple> tuples; // sorted, deterministic

    bool contains(const Tuple& t) const {
        return std::binary_search(tuples.begin(), tuples.end(), t);
    }
};

inline Support enumerate_support(unsigned k, std::int64_t r_cut, std::int64_t w,
                                 std::size_t pair_budget = 100000000) {
    if (k < 1) throw error("support: k must be >= 1");
    if (r_cut < 2) throw error("support: R must be >= 2");
    if (w < 1) throw error("support: W must be >= 1");
    Support s;
    s.k = k;
    s.r_cut = r_cut;
    s.w = w;
    for (std::int64_t v = 1; v < r_cut; ++v) {
        if (std::gcd(v, w) != 1) continue;
        std::vector<std::int64_t> ps;
        bool squarefree = true;
        std::int64_t rest = v;
        for (std::int64_t p = 2; p * p <= rest; ++p) {
            if (rest % p == 0) {
                rest /= p;
                if (rest % p == 0) {
                    squarefree = false;
                    break;
                }
                ps.push_back(p);
            }
        }
        if (!squarefree) continue;
        if (rest > 1) ps.push_back(rest);
        // distribute the prime factors of v over the k slots
        Tuple slots(k, 1);
        auto assign = [&](auto&& self, std::size_t idx) -> void {
            if (idx == ps.size()) {
                s.tuples.push_back(slots);
                return;
            }
            for (unsigned pos = 0; pos < k; ++pos) {
                slots[pos] *= ps[idx];
                self(self, idx + 1);
                slots[pos] /= ps[idx];
            }
        };
        assign(assign, 0);
    }
    std::sort(s.tuples.begin(), s.tuples.end());
    std::size_t n = s.tuples.size();
    if (n * n > pair_budget)
        throw error("support budget exceeded (" + std::to_string(n) +
                    " tuples); reduce R or raise the budget");
    return s;
}

// Sparse rational table on a support; absent entries are zero.
struct TupleTable {
    Support support;
    std::map<Tuple, Rational> entries;

    Rational at(const Tuple& t) const {
        auto it = entries.find(t);
        return it == entries.end() ? Rational(0) : it->second;
    }
    void set(const Tuple& t, Rational v) {
        if (!support.contains(t)) throw error("table: tuple outside support");
        if (v.is_zero())
            entries.erase(t);
        else
            entries[t] = std::move(v);
    }
    friend bool operator==(const TupleTable& a, const TupleTable& b) {
        return a.entries == b.entries;
    }
};

using WeightTable = TupleTable; // lambda values
using YTable = TupleTable;      // y or y^(m) values

struct SieveConfig {
    unsigned k = 0;
    KTuple h;
    std::int64_t n = 0;  // sums run over [N, 2N)
    std::int64_t d0 = 0; // small-prime cut
    std::int64_t w = 1;  // prod_{p <= D0} p
    std::int64_t v0 = 0; // residue class with v0 + h_i coprime to W
    std::int64_t r_cut = 0;
    SymmetricPoly f;
    Support support;
};

inline SymmetricPoly unit_poly() {
    SymmetricPoly f;
    f.add_term(Rational(1), BasisTerm{0, 0});
    return f;
}

// Explicit-R constructor: W from D0, v0 as the least residue making every
// v0 + h_i coprime to W (exists by admissibility, via CRT).
inline SieveConfig make_config(unsigned k, KTuple h, std::int64_t n, std::int64_t d0,
                               std::int64_t r_cut, SymmetricPoly f = unit_poly()) {
    if (h.k() != k) throw error("setup: tuple size does not match k");
    AdmissibilityResult adm = is_admissible(h);
    if (!adm.admissible)
        throw error("setup: tuple is not admissible (residues cover every class mod " +
                    std::to_string(adm.witness_prime) + ")");
    if (d0 < 2) throw error("setup: D0 must be >= 2");
    PrimeSieve sieve;
    std::int64_t w = 1;
    for (std::int64_t p : sieve.primes_up_to(d0)) {
        if (w > 1000000 / p) throw error("setup: W too large for desk scale");
        w *= p;
    }
    if (n <= w * w) throw error("setup: need N > W^2");
    if (r_cut < 2) throw error("setup: need R >= 2");
    if (r_cut > n) throw error("setup: need R <= N");

    std::int64_t v0 = -1;
    for (std::int64_t cand = 0; cand < w; ++cand) {
        bool ok = true;
        for (std::int64_t hi : h.elements())
            if (std::gcd((cand + hi) % w, w) != 1) {
                ok = false;
                break;
            }
        if (ok) {
            v0 = cand;
            break;
        }
    }
    if (v0 < 0) throw error("setup: no valid residue v0 found"); // unreachable for admissible h

    Support support = enumerate_support(k, r_cut, w);
    return SieveConfig{k, std::move(h), n, d0, w, v0, r_cut, std::move(f), std::move(support)};
}

inline SieveConfig setup(unsigned k, KTuple h, std::int64_t n, std::int64_t d0, double r_exponent,
                         SymmetricPoly f = unit_poly()) {
    if (!(r_exponent > 0.0) || !(r_exponent < 1.0))
        throw error("setup: R exponent must lie in (0, 1)");
    auto r_cut = static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(n), r_exponent)));
    return make_config(k, std::move(h), n, d0, r_cut, std::move(f));
}

// F values are snapped to denominator 2^48 so every downstream identity stays
// an exact statement about the snapped table.
inline Rational snap_dyadic(double x) {
    if (!std::isfinite(x) || std::fabs(x) > 1e6) throw error("snap_dyadic: value out of range");
    double scaled = std::round(std::ldexp(x, 48));
    return Rational(mpz_class(scaled), mpz_class(1) << 48);
}

// lambda_{d} = (prod mu(d_i) d_i) sum_{d_i | r_i} F(log r_1/log R, ...) / prod phi(r_i)
// over the support (the squarefree and coprimality conditions are the
// support's definition; the product cut r < R is where F's simplex support
// lives once logs are divided by log R).
inline WeightTable weights_from_f(const SieveConfig& cfg) {
    WeightTable lambda;
    lambda.support = cfg.support;
    const double log_r = std::log(static_cast<double>(cfg.r_cut));
    // snapped F values per support tuple
    std::map<Tuple, Rational> fval;
    for (const Tuple& r : cfg.support.tuples) {
        double s1 = 0, s2 = 0;
        for (std::int64_t ri : r) {
            double t = std::log(static_cast<double>(ri)) / log_r;
            s1 += t;
            s2 += t * t;
        }
        Rational snapped = snap_dyadic(cfg.f.eval(s1, s2));
        if (!snapped.is_zero()) fval.emplace(r, std::move(snapped));
    }
    for (const Tuple& d : cfg.support.tuples) {
        Rational sum(0);
        for (const auto& [r, fv] : fval) {
            bool divides = true;
            for (unsigned i = 0; i < cfg.k; ++i)
                if (r[i] % d[i] != 0) {
                    divides = false;
                    break;
                }
            if (!divides) continue;
            std::int64_t phi = 1;
            for (std::int64_t ri : r) phi *= phi_squarefree(ri);
            sum += fv / Rational(phi);
        }
        if (sum.is_zero()) continue;
        std::int64_t front = 1;
        for (std::int64_t di : d) front *= mobius_squarefree(di) * di;
        lambda.set(d, Rational(front) * sum);
    }
    return lambda;
}

// y_{r} = (prod mu(r_i) phi(r_i)) sum_{r_i | d_i} lambda_d / prod d_i
inline YTable y_from_lambda(const WeightTable& lambda) {
    YTable y;
    y.support = lambda.support;
    const unsigned k = lambda.support.k;
    for (const Tuple& r : lambda.support.tuples) {
        Rational sum(0);
        for (const auto& [d, lv] : lambda.entries) {
            bool divides = true;
            for (unsigned i = 0; i < k; ++i)
                if (d[i] % r[i] != 0) {
                    divides = false;
                    break;
                }
            if (!divides) continue;
            std::int64_t prod = 1;
            for (std::int64_t di : d) prod *= di;
            sum += lv / Rational(prod);
        }
        if (sum.is_zero()) continue;
        std::int64_t front = 1;
        for (std::int64_t ri : r) front *= mobius_squarefree(ri) * phi_squarefree(ri);
        y.set(r, Rational(front) * sum);
    }
    return y;
}

// lambda_{d} = (prod mu(d_i) d_i) sum_{d_i | r_i} y_r / prod phi(r_i); the
// inverse of y_from_lambda on the support.
inline WeightTable lambda_from_y(const YTable& y) {
    WeightTable lambda;
    lambda.support = y.support;
    const unsigned k = y.support.k;
    for (const Tuple& d : y.support.tuples) {
        Rational sum(0);
        for (const auto& [r, yv] : y.entries) {
            bool divides = true;
            for (unsigned i = 0; i < k; ++i)
                if (r[i] % d[i] != 0) {
                    divides = false;
                    break;
                }
            if (!divides) continue;
            std::int64_t phi = 1;
            for (std::int64_t ri : r) phi *= phi_squarefree(ri);
            sum += yv / Rational(phi);
        }
        if (sum.is_zero()) continue;
        std::int64_t front = 1;
        for (std::int64_t di : d) front *= mobius_squarefree(di) * di;
        lambda.set(d, Rational(front) * sum);
    }
    return lambda;
}

// y^(m)_{r} = (prod mu(r_i) g(r_i)) sum_{r_i | d_i, d_m = 1} lambda_d / prod phi(d_i),
// g(p) = p - 2. Vanishes unless r_m = 1 (r_m must divide d_m = 1).
inline YTable ym_from_lambda(const WeightTable& lambda, unsigned m) {
    const unsigned k = lambda.support.k;
    if (m < 1 || m > k) throw error("ym_from_lambda: m out of range");
    // g(2) = 0 cannot collide with the support when W is even, since support
    // values are coprime to W and hence odd
    if (lambda.support.w % 2 == 0)
        for (const Tuple& t : lambda.support.tuples)
            for (std::int64_t v : t)
                if (v % 2 == 0) throw error("ym_from_lambda: even support value despite even W");
    YTable y;
    y.support = lambda.support;
    for (const Tuple& r : lambda.support.tuples) {
        if (r[m - 1] != 1) continue; // r_m | d_m = 1
        Rational sum(0);
        for (const auto& [d, lv] : lambda.entries) {
            if (d[m - 1] != 1) continue;
            bool divides = true;
            for (unsigned i = 0; i < k; ++i)
                if (d[i] % r[i] != 0) {
                    divides = false;
                    break;
                }
            if (!divides) continue;
            std::int64_t phi = 1;
            for (std::int64_t di : d) phi *= phi_squarefree(di);
            sum += lv / Rational(phi);
        }
        if (sum.is_zero()) continue;
        std::int64_t front = 1;
        for (std::int64_t ri : r) front *= mobius_squarefree(ri) * g_squarefree(ri);
        y.set(r, Rational(front) * sum);
    }
    return y;
}

enum class SumMode { direct, pairsum };

namespace detail {

// residue class (value mod modulus), or nullopt when the congruences clash
struct Progression {
    std::int64_t value = 0;
    std::int64_t modulus = 1;
};

inline std::optional<Progression> crt_merge(Progression a, std::int64_t b_val,
                                            std::int64_t b_mod) {
    std::int64_t g = std::gcd(a.modulus, b_mod);
    std::int64_t diff = b_val - a.value;
    if (diff % g != 0) return std::nullopt;
    std::int64_t lcm = a.modulus / g * b_mod;
    // solve a.value + a.modulus * t == b_val (mod b_mod)
    std::int64_t m2 = b_mod / g;
    std::int64_t rhs = (diff / g) % m2;
    std::int64_t step = (a.modulus / g) % m2;
    // modular inverse of step mod m2 by extended Euclid
    std::int64_t r0 = m2, r1 = step % m2, s0 = 0, s1 = 1;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        r0 -= q * r1;
        std::swap(r0, r1);
        s0 -= q * s1;
        std::swap(s0, s1);
    }
    if (r0 != 1) throw error("crt: non-coprime step after gcd reduction");
    std::int64_t rhs_n = ((rhs % m2) + m2) % m2;
    std::int64_t inv = ((s0 % m2) + m2) % m2;
    std::int64_t t = static_cast<std::int64_t>(static_cast<__int128>(rhs_n) * inv % m2);
    __int128 val = static_cast<__int128>(a.value) + static_cast<__int128>(a.modulus) * t;
    std::int64_t v = static_cast<std::int64_t>(((val % lcm) + lcm) % lcm);
    return Progression{v, lcm};
}

// #{n in [lo, hi) : n == a (mod q)}
inline std::int64_t count_in_range(std::int64_t a, std::int64_t q, std::int64_t lo,
                                   std::int64_t hi) {
    if (lo >= hi) return 0;
    std::int64_t first = lo + (((a - lo) % q) + q) % q;
    if (first >= hi) return 0;
    return (hi - 1 - first) / q + 1;
}

// joint progression for n == v0 (mod W), lcm(d_i,e_i) | n + h_i for all i
inline std::optional<Progression> pair_progression(const SieveConfig& cfg, const Tuple& d,
                                                   const Tuple& e) {
    Progression prog{cfg.v0 % cfg.w, cfg.w};
    for (unsigned i = 0; i < cfg.k; ++i) {
        std::int64_t m = d[i] / std::gcd(d[i], e[i]) * e[i];
        if (m == 1) continue;
        std::int64_t hi = cfg.h.elements()[i];
        auto merged = crt_merge(prog, ((-hi) % m + m) % m, m);
        if (!merged) return std::nullopt;
        prog = *merged;
    }
    return prog;
}

} // namespace detail

// S1 = sum over n in [N,2N), n == v0 (W), of (sum_{d_i | n+h_i} lambda_d)^2.
// direct: the literal double loop. pairsum: expand the square, swap orders,
// count each joint progression exactly by CRT. Exact rational either way.
inline Rational s1(const SieveConfig& cfg, const WeightTable& lambda, SumMode mode) {
    if (mode == SumMode::direct) {
        Rational total(0);
        for (std::int64_t n = cfg.n + ((cfg.v0 - cfg.n) % cfg.w + cfg.w) % cfg.w; n < 2 * cfg.n;
             n += cfg.w) {
            Rational inner(0);
            for (const auto& [d, lv] : lambda.entries) {
                bool ok = true;
                for (unsigned i = 0; i < cfg.k; ++i)
                    if ((n + cfg.h.elements()[i]) % d[i] != 0) {
                        ok = false;
                        break;
                    }
                if (ok) inner += lv;
            }
            total += inner * inner;
        }
        return total;
    }
    Rational total(0);
    for (const auto& [d, ld] : lambda.entries) {
        for (const auto& [e, le] : lambda.entries) {
            auto prog = detail::pair_progression(cfg, d, e);
            if (!prog) continue;
            std::int64_t cnt =
                detail::count_in_range(prog->value, prog->modulus, cfg.n, 2 * cfg.n);
            if (cnt != 0) total += ld * le * Rational(cnt);
        }
    }
    return total;
}

// S2^(m): the same sum restricted by the primality of n + h_m. Prime counting
// is by sieve enumeration in both modes; the pairsum restriction to
// d_m = e_m = 1 is exact because any larger divisor of a prime n + h_m would
// have to equal it, and R <= N keeps divisors below that.
inline Rational s2(const SieveConfig& cfg, const WeightTable& lambda, unsigned m, SumMode mode) {
    if (m < 1 || m > cfg.k) throw error("s2: m out of range");
    const std::int64_t hm = cfg.h.elements()[m - 1];
    PrimeSieve sieve;
    sieve.is_prime(2 * cfg.n + cfg.h.diameter() + 2); // pre-extend once

    if (mode == SumMode::direct) {
        Rational total(0);
        for (std::int64_t n = cfg.n + ((cfg.v0 - cfg.n) % cfg.w + cfg.w) % cfg.w; n < 2 * cfg.n;
             n += cfg.w) {
            if (!sieve.is_prime(n + hm)) continue;
            Rational inner(0);
            for (const auto& [d, lv] : lambda.entries) {
                bool ok = true;
                for (unsigned i = 0; i < cfg.k; ++i)
                    if ((n + cfg.h.elements()[i]) % d[i] != 0) {
                        ok = false;
                        break;
                    }
                if (ok) inner += lv;
            }
            total += inner * inner;
        }
        return total;
    }
    Rational total(0);
    for (const auto& [d, ld] : lambda.entries) {
        if (d[m - 1] != 1) continue;
        for (const auto& [e, le] : lambda.entries) {
            if (e[m - 1] != 1) continue;
            auto prog = detail::pair_progression(cfg, d, e);
            if (!prog) continue;
            std::int64_t first =
                cfg.n + ((prog->value - cfg.n) % prog->modulus + prog->modulus) % prog->modulus;
            std::int64_t primes_found = 0;
            for (std::int64_t n = first; n < 2 * cfg.n; n += prog->modulus)
                if (sieve.is_prime(n + hm)) ++primes_found;
            if (primes_found != 0) total += ld * le * Rational(primes_found);
        }
    }
    return total;
}

struct MainTermPrediction {
    double s1_pred = 0.0;
    double s2_pred = 0.0; // sum over m of S2^(m)
};

// S1 ~ phi(W)^k N (log R)^k / W^{k+1} * I_k(F)
// S2 ~ phi(W)^k N (log R)^{k+1} / (W^{k+1} log N) * sum_m J_k^(m)(F)
// with I and sum J evaluated exactly and only the log factors in floats.
inline MainTermPrediction main_term_prediction(const SieveConfig& cfg) {
    const double phi_w = static_cast<double>(phi_squarefree(cfg.w));
    const double w = static_cast<double>(cfg.w);
    const double n = static_cast<double>(cfg.n);
    const double log_r = std::log(static_cast<double>(cfg.r_cut));
    const double log_n = std::log(n);
    double front = n;
    for (unsigned i = 0; i < cfg.k; ++i) front *= phi_w * log_r / w;
    front /= w;
    MainTermPrediction pred;
    pred.s1_pred = front * i_functional(cfg.k, cfg.f).to_double();
    pred.s2_pred = front * (log_r / log_n) * j_functional_sum(cfg.k, cfg.f).to_double();
    return pred;
}

inline nlohmann::ordered_json simulate_to_json(const SieveConfig& cfg) {
    WeightTable lambda = weights_from_f(cfg);
    Rational s1_direct = s1(cfg, lambda, SumMode::direct);
    Rational s1_pairsum = s1(cfg, lambda, SumMode::pairsum);
    MainTermPrediction pred = main_term_prediction(cfg);

    nlohmann::ordered_json j;
    j["schema"] = kSchemaTag;
    auto& c = j["config"];
    c["k"] = cfg.k;
    c["tuple"] = cfg.h.elements();
    c["N"] = cfg.n;
    c["D0"] = cfg.d0;
    c["W"] = cfg.w;
    c["v0"] = cfg.v0;
    c["R"] = cfg.r_cut;
    auto fterms = nlohmann::ordered_json::array();
    for (const auto& [coeff, term] : cfg.f.terms)
        fterms.push_back({{"b", term.b}, {"c", term.c}, {"coeff", coeff.str()}});
    c["F"] = fterms;
    c["lambda_support_size"] = cfg.support.tuples.size();

    j["S1_direct"] = s1_direct.str();
    j["S1_pairsum"] = s1_pairsum.str();
    auto s2_direct = nlohmann::ordered_json::array();
    auto s2_pairsum = nlohmann::ordered_json::array();
    Rational s2_total(0);
    for (unsigned m = 1; m <= cfg.k; ++m) {
        Rational dm = s2(cfg, lambda, m, SumMode::direct);
        Rational pm = s2(cfg, lambda, m, SumMode::pairsum);
        s2_total += dm;
        s2_direct.push_back(dm.str());
        s2_pairsum.push_back(pm.str());
    }
    j["S2_direct"] = s2_direct;
    j["S2_pairsum"] = s2_pairsum;
    j["S1_pred"] = pred.s1_pred;
    j["S2_pred"] = pred.s2_pred;
    auto& ratios = j["ratios"];
    ratios["s1_direct_over_pred"] = s1_direct.to_double() / pred.s1_pred;
    ratios["s2_total_over_pred"] = s2_total.to_double() / pred.s2_pred;
    ratios["identity_s1"] = (s1_direct == s1_pairsum);
    return j;
}

} // namespace lab
} // namespace sievemk
