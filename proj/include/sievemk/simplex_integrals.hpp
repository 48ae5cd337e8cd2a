#pragma once

// Exact moment integrals over the standard simplex
//   R_k = { t in [0,1]^k : t_1 + ... + t_k <= 1 }.
//
// Everything reduces to the factorial formula
//   int_{R_k} (1 - sum t_i)^a prod t_i^{a_i} dt = a! prod(a_i!) / (k + a + sum a_i)!
// and to the family of polynomials G_{b,j} that collect the multinomial
// bookkeeping when a power sum P_j = sum t_i^j is raised to the b-th power.

#include <cstddef>
#include <vector>

#include "sievemk/rational.hpp"

namespace sievemk {

// Univariate polynomial with exact rational coefficients, coefficients[i] on x^i.
class UniPoly {
public:
    UniPoly() : coeffs_{Rational(0)} {}
    explicit UniPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    static UniPoly constant(Rational c) { return UniPoly({std::move(c)}); }

    std::size_t degree() const { return coeffs_.size() - 1; }
    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0].is_zero(); }
    const std::vector<Rational>& coefficients() const { return coeffs_; }

    Rational coefficient(std::size_t i) const {
        return i < coeffs_.size() ? coeffs_[i] : Rational(0);
    }

    Rational eval(const Rational& x) const {
        Rational acc(0);
        for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
        return acc;
    }

    UniPoly& operator+=(const UniPoly& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        trim();
        return *this;
    }

    UniPoly operator*(const UniPoly& o) const {
        std::vector<Rational> out(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
                out[i + j] += coeffs_[i] * o.coeffs_[j];
        return UniPoly(std::move(out));
    }

    UniPoly operator*(const Rational& c) const {
        std::vector<Rational> out(coeffs_);
        for (auto& a : out) a *= c;
        return UniPoly(std::move(out));
    }

    friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.coeffs_ == b.coeffs_; }

private:
    void trim() {
        while (coeffs_.size() > 1 && coeffs_.back().is_zero()) coeffs_.pop_back();
        if (coeffs_.empty()) coeffs_.push_back(Rational(0));
    }

    std::vector<Rational> coeffs_;
};

// binom(x, r) as a polynomial in x: x(x-1)...(x-r+1)/r!, degree r.
inline UniPoly falling_binomial_poly(unsigned r) {
    UniPoly p = UniPoly::constant(Rational(1));
    for (unsigned i = 0; i < r; ++i)
        p = p * UniPoly({Rational(-static_cast<long>(i)), Rational(1)});
    return p * Rational(mpz_class(1), factorial(r));
}

namespace detail {

template <typename F>
void compositions_rec(unsigned remaining, unsigned parts_left, std::vector<unsigned>& acc, F&& f) {
    if (parts_left == 1) {
        acc.push_back(remaining);
        f(static_cast<const std::vector<unsigned>&>(acc));
        acc.pop_back();
        return;
    }
    for (unsigned first = 1; first + (parts_left - 1) <= remaining; ++first) {
        acc.push_back(first);
        compositions_rec(remaining - first, parts_left - 1, acc, f);
        acc.pop_back();
    }
}

// Visits the compositions (b_1,...,b_r), b_i >= 1, sum = b, in lexicographic
// order, calling f(parts) for each.
template <typename F>
void for_each_composition(unsigned b, unsigned r, F&& f) {
    if (r == 0 || r > b) return;
    std::vector<unsigned> acc;
    acc.reserve(r);
    compositions_rec(b, r, acc, f);
}

} // namespace detail

// G_{b,j}(x) = b! sum_{r=1}^{b} binom(x,r) sum_{b_1+...+b_r=b, b_i>=1} prod (j b_i)!/b_i!.
// G_{0,j} := 1 (the r-sum is empty; forced by int (1-P1)^a = a!/(k+a)!).
// Degree b; depends only on b and j.
inline UniPoly g_poly(unsigned b, unsigned j) {
    if (j < 1) throw error("g_poly: j must be >= 1");
    if (b == 0) return UniPoly::constant(Rational(1));
    UniPoly total = UniPoly::constant(Rational(0));
    for (unsigned r = 1; r <= b; ++r) {
        mpz_class weight(0);
        detail::for_each_composition(b, r, [&](const std::vector<unsigned>& parts) {
            mpz_class prod(1);
            for (unsigned bi : parts) prod *= factorial(static_cast<unsigned long>(j) * bi) / factorial(bi);
            weight += prod;
        });
        total += falling_binomial_poly(r) * Rational(weight);
    }
    return total * Rational(factorial(b));
}

// int_{R_k} (1 - sum t_i)^a prod t_i^{a_i} dt = a! prod(a_i!) / (k + a + sum a_i)!
inline Rational monomial_integral(unsigned k, unsigned a, const std::vector<unsigned>& exponents) {
    if (k < 1) throw error("monomial_integral: k must be >= 1");
    if (exponents.size() != k) throw error("monomial_integral: need one exponent per variable");
    mpz_class numer = factorial(a);
    unsigned long total = k + a;
    for (unsigned ai : exponents) {
        numer *= factorial(ai);
        total += ai;
    }
    return Rational(numer, factorial(total));
}

// int_{R_k} (1-P_1)^a P_j^b dt = a! G_{b,j}(k) / (k + jb + a)!
inline Rational moment_integral(unsigned k, unsigned a, unsigned b, unsigned j) {
    if (k < 1) throw error("moment_integral: k must be >= 1");
    if (j < 1) throw error("moment_integral: j must be >= 1");
    Rational g = g_poly(b, j).eval(Rational(static_cast<long>(k)));
    return Rational(factorial(a)) * g / Rational(factorial(static_cast<unsigned long>(k) + static_cast<unsigned long>(j) * b + a));
}

} // namespace sievemk
