#pragma once

// The two quadratic forms behind the sieve functional M_k.
//
// For F cut out of a symmetric polynomial P = sum a_i (1-P1)^{b_i} P2^{c_i}
// on the simplex R_k, both
//   I_k(F)              = int_{R_k} F^2
//   sum_m J_k^(m)(F)    = k * int_{R_{k-1}} (int F dt_1)^2
// are quadratic forms in the coefficient vector a, with exact rational
// matrices M1 and M2 computed entry-by-entry from the simplex moment
// formulas. The ratio a^T M2 a / a^T M1 a is then a certified lower bound
// for M_k at any rational a.

#include <cstddef>
#include <vector>

#include "sievemk/rational.hpp"
#include "sievemk/simplex_integrals.hpp"

namespace sievemk {

// Exponent pair in the monomial (1-P1)^b * P2^c.
struct BasisTerm {
    unsigned b = 0;
    unsigned c = 0;

    unsigned degree() const { return b + 2 * c; }
    friend bool operator==(const BasisTerm&, const BasisTerm&) = default;
    // lexicographic by (c, b); fixes the basis order certificates rely on
    friend bool operator<(const BasisTerm& s, const BasisTerm& t) {
        return s.c != t.c ? s.c < t.c : s.b < t.b;
    }
};

// Rational linear combination of basis terms; represents P on the simplex.
struct SymmetricPoly {
    std::vector<std::pair<Rational, BasisTerm>> terms;

    void add_term(Rational coeff, BasisTerm t) {
        for (auto& [a, u] : terms) {
            if (u == t) {
                a += coeff;
                return;
            }
        }
        terms.emplace_back(std::move(coeff), t);
    }

    // P(t) for a concrete point, via s1 = sum t_i and s2 = sum t_i^2.
    double eval(double s1, double s2) const {
        double total = 0.0;
        for (const auto& [a, u] : terms) {
            double v = a.to_double();
            for (unsigned i = 0; i < u.b; ++i) v *= (1.0 - s1);
            for (unsigned i = 0; i < u.c; ++i) v *= s2;
            total += v;
        }
        return total;
    }
};

using RationalMatrix = std::vector<std::vector<Rational>>;

// The symmetric pencil (M1, M2) over an ordered basis; M2 already carries the
// factor k, so a^T M2 a / a^T M1 a is sum_m J_k^(m) / I_k directly.
struct FormPair {
    unsigned long k = 0;
    std::vector<BasisTerm> basis;
    RationalMatrix m1;
    RationalMatrix m2;
};

// All (b,c) with b + 2c <= D, ordered lexicographically by (c, b).
inline std::vector<BasisTerm> basis_terms(unsigned degree_cap) {
    std::vector<BasisTerm> out;
    for (unsigned c = 0; 2 * c <= degree_cap; ++c)
        for (unsigned b = 0; b + 2 * c <= degree_cap; ++b)
            out.push_back({b, c});
    return out;
}

// Coefficient of a_s a_t in I_k(F):
//   (b_s+b_t)! G_{c_s+c_t,2}(k) / (k + b_s + b_t + 2c_s + 2c_t)!
inline Rational i_entry(unsigned long k, const BasisTerm& s, const BasisTerm& t) {
    if (k < 1) throw error("i_entry: k must be >= 1");
    Rational g = g_poly(s.c + t.c, 2).eval(Rational(static_cast<long>(k)));
    return Rational(factorial(s.b + t.b)) * g /
           Rational(factorial(k + s.b + t.b + 2 * (s.c + t.c)));
}

// Coefficient of a_s a_t in J_k^(1)(F). Integrating out t_1 leaves, for each
// split (c1', c2') of the P2 exponents, a product of beta factors gamma and a
// moment over R_{k-1}, hence G evaluated at k-1:
//   sum_{c1'<=c_s} sum_{c2'<=c_t} binom(c_s,c1') binom(c_t,c2')
//     * gamma * G_{c1'+c2',2}(k-1) / (k + b_s + b_t + 2c_s + 2c_t + 1)!
inline Rational j_entry(unsigned long k, const BasisTerm& s, const BasisTerm& t) {
    if (k < 1) throw error("j_entry: k must be >= 1");
    const Rational km1(static_cast<long>(k) - 1);
    Rational total(0);
    for (unsigned c1 = 0; c1 <= s.c; ++c1) {
        for (unsigned c2 = 0; c2 <= t.c; ++c2) {
            unsigned es = s.b + 2 * s.c - 2 * c1; // t_1-exponent block on the s side
            unsigned et = t.b + 2 * t.c - 2 * c2;
            mpz_class gamma_num = factorial(s.b) * factorial(t.b) *
                                  factorial(2 * (s.c - c1)) * factorial(2 * (t.c - c2)) *
                                  factorial(es + et + 2);
            mpz_class gamma_den = factorial(es + 1) * factorial(et + 1);
            Rational g = g_poly(c1 + c2, 2).eval(km1);
            mpz_class choose = binomial(s.c, c1) * binomial(t.c, c2);
            total += Rational(choose) * Rational(gamma_num, gamma_den) * g;
        }
    }
    return total / Rational(factorial(k + s.b + t.b + 2 * (s.c + t.c) + 1));
}

// M1[s][t] = i_entry, M2[s][t] = k * j_entry. The factor k is the m-sum:
// for symmetric F, J_k^(m)(F) does not depend on m.
inline FormPair assemble_forms(unsigned long k, unsigned degree_cap) {
    if (k < 2) throw error("assemble_forms: k must be >= 2");
    FormPair forms;
    forms.k = k;
    forms.basis = basis_terms(degree_cap);
    const std::size_t n = forms.basis.size();
    forms.m1.assign(n, std::vector<Rational>(n, Rational(0)));
    forms.m2.assign(n, std::vector<Rational>(n, Rational(0)));
    const Rational kk(static_cast<long>(k));
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = s; t < n; ++t) {
            Rational i = i_entry(k, forms.basis[s], forms.basis[t]);
            Rational j = kk * j_entry(k, forms.basis[s], forms.basis[t]);
            forms.m1[s][t] = i;
            forms.m1[t][s] = i;
            forms.m2[s][t] = j;
            forms.m2[t][s] = j;
        }
    }
    return forms;
}

inline Rational quadratic_form(const RationalMatrix& m, const std::vector<Rational>& a) {
    Rational total(0);
    for (std::size_t s = 0; s < a.size(); ++s) {
        if (a[s].is_zero()) continue;
        Rational row(0);
        for (std::size_t t = 0; t < a.size(); ++t) {
            if (a[t].is_zero()) continue;
            row += m[s][t] * a[t];
        }
        total += a[s] * row;
    }
    return total;
}

// Exact Rayleigh quotient a^T M2 a / a^T M1 a.
inline Rational evaluate_ratio(const FormPair& forms, const std::vector<Rational>& a) {
    if (a.size() != forms.basis.size())
        throw error("evaluate_ratio: coefficient vector does not match basis");
    bool all_zero = true;
    for (const auto& x : a)
        if (!x.is_zero()) { all_zero = false; break; }
    if (all_zero) throw error("degenerate coefficient vector");
    Rational denom = quadratic_form(forms.m1, a);
    if (denom.sign() <= 0)
        throw error("evaluate_ratio: a^T M1 a <= 0; M1 not positive definite?");
    return quadratic_form(forms.m2, a) / denom;
}

// I_k(F) for F given by an arbitrary term list (bilinear in the coefficients).
inline Rational i_functional(unsigned long k, const SymmetricPoly& p) {
    Rational total(0);
    for (const auto& [as, s] : p.terms)
        for (const auto& [at, t] : p.terms) total += as * at * i_entry(k, s, t);
    return total;
}

// sum_{m=1}^{k} J_k^(m)(F) = k * J_k^(1)(F) for symmetric F.
inline Rational j_functional_sum(unsigned long k, const SymmetricPoly& p) {
    Rational total(0);
    for (const auto& [as, s] : p.terms)
        for (const auto& [at, t] : p.terms) total += as * at * j_entry(k, s, t);
    return total * Rational(static_cast<long>(k));
}

// Exact LDL^T pivots; all positive iff the matrix is positive definite
// (Sylvester). Pivots are leading principal minor ratios, so no pivoting is
// needed for the definite case.
inline bool is_positive_definite(RationalMatrix m) {
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i][i].sign() <= 0) return false;
        for (std::size_t r = i + 1; r < n; ++r) {
            Rational f = m[r][i] / m[i][i];
            for (std::size_t c = i; c < n; ++c) m[r][c] -= f * m[i][c];
        }
    }
    return true;
}

} // namespace sievemk
