#pragma once

// Floating-point search for the largest generalized eigenvalue of the pencil
// M2 a = lambda M1 a, plus continued-fraction rationalization of the
// eigenvector. Floats here only ever *suggest* a witness vector; the
// certificate module re-evaluates every quotient in exact arithmetic.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "sievemk/forms.hpp"
#include "sievemk/rational.hpp"

namespace sievemk {

struct EigenPair {
    double eigenvalue = 0.0;
    std::vector<double> vector; // normalized to unit maximum-magnitude entry
};

struct NonConvergenceError : error {
    NonConvergenceError(const std::string& what, EigenPair last_iterate)
        : error(what), last(std::move(last_iterate)) {}
    EigenPair last;
};

namespace detail {

using DMatrix = std::vector<std::vector<double>>;

// Factorial-scale entries overflow any naive double conversion, so the pencil
// is first rescaled congruently by the exact powers of two
//   D[s] = 2^{round(-log2(M1[s][s]) / 2)},
// which puts the M1 diagonal in [1/2, 2] without changing the generalized
// spectrum (D M2 D) x = lambda (D M1 D) x.
inline std::vector<long> pow2_scaling(const RationalMatrix& m1) {
    std::vector<long> t(m1.size());
    for (std::size_t s = 0; s < m1.size(); ++s)
        t[s] = std::lround(-m1[s][s].approx_log2() / 2.0);
    return t;
}

inline RationalMatrix apply_scaling(const RationalMatrix& m, const std::vector<long>& t) {
    RationalMatrix out(m.size(), std::vector<Rational>(m.size()));
    for (std::size_t s = 0; s < m.size(); ++s)
        for (std::size_t u = 0; u < m.size(); ++u)
            out[s][u] = m[s][u].times_pow2(t[s] + t[u]);
    return out;
}

inline DMatrix to_double_matrix(const RationalMatrix& m) {
    DMatrix out(m.size(), std::vector<double>(m.size()));
    for (std::size_t s = 0; s < m.size(); ++s)
        for (std::size_t u = 0; u < m.size(); ++u) out[s][u] = m[s][u].to_double();
    return out;
}

// Lower-triangular Cholesky factor, m = L L^T.
inline DMatrix cholesky(const DMatrix& m) {
    const std::size_t n = m.size();
    DMatrix l(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = m[i][j];
            for (std::size_t p = 0; p < j; ++p) sum -= l[i][p] * l[j][p];
            if (i == j) {
                if (sum <= 0.0) throw error("cholesky: matrix not positive definite in doubles");
                l[i][i] = std::sqrt(sum);
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    return l;
}

inline std::vector<double> solve_lower(const DMatrix& l, std::vector<double> b) {
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t p = 0; p < i; ++p) b[i] -= l[i][p] * b[p];
        b[i] /= l[i][i];
    }
    return b;
}

inline std::vector<double> solve_upper_t(const DMatrix& l, std::vector<double> b) {
    for (std::size_t i = b.size(); i-- > 0;) {
        for (std::size_t p = i + 1; p < b.size(); ++p) b[i] -= l[p][i] * b[p];
        b[i] /= l[i][i];
    }
    return b;
}

inline std::vector<double> mat_vec(const DMatrix& m, const std::vector<double>& x) {
    std::vector<double> y(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] = std::inner_product(m[i].begin(), m[i].end(), x.begin(), 0.0);
    return y;
}

inline double norm2(const std::vector<double>& x) {
    return std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
}

inline void normalize_max_entry(std::vector<double>& v) {
    double best = 0.0;
    for (double x : v)
        if (std::fabs(x) > std::fabs(best)) best = x;
    if (best != 0.0)
        for (double& x : v) x /= best;
}

struct ScaledEigenResult {
    double eigenvalue = 0.0;
    std::vector<double> vector; // eigenvector of the pow2-scaled pencil
    std::vector<long> scaling;  // exponents t with D = diag(2^t)
    bool converged = false;
};

// Power iteration on B = L^{-1} M2s L^{-T} (the M1 inner product); B is
// symmetric positive definite, so the dominant eigenvalue is the largest
// generalized eigenvalue. Deterministic all-ones start.
inline ScaledEigenResult max_eigenpair_scaled(const FormPair& forms, unsigned iterations,
                                              double tolerance) {
    const std::size_t n = forms.basis.size();
    if (n == 0) throw error("max_generalized_eigenpair: empty basis");
    ScaledEigenResult res;
    res.scaling = pow2_scaling(forms.m1);
    DMatrix m1s = to_double_matrix(apply_scaling(forms.m1, res.scaling));
    DMatrix m2s = to_double_matrix(apply_scaling(forms.m2, res.scaling));
    DMatrix l = cholesky(m1s);

    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double lambda_prev = 0.0;
    for (unsigned it = 0; it < iterations; ++it) {
        std::vector<double> w = solve_lower(l, mat_vec(m2s, solve_upper_t(l, x)));
        double lambda = std::inner_product(x.begin(), x.end(), w.begin(), 0.0);
        double nw = norm2(w);
        if (nw == 0.0) throw error("max_generalized_eigenpair: iterate collapsed to zero");
        for (std::size_t i = 0; i < n; ++i) x[i] = w[i] / nw;
        if (it > 0 && std::fabs(lambda - lambda_prev) < tolerance) {
            res.converged = true;
            res.eigenvalue = lambda;
            break;
        }
        lambda_prev = lambda;
        res.eigenvalue = lambda;
    }
    res.vector = solve_upper_t(l, x); // back to pencil coordinates
    normalize_max_entry(res.vector);
    return res;
}

} // namespace detail

// Largest generalized eigenpair of (M2, M1) in doubles. Stops once successive
// Rayleigh quotients differ by less than `tolerance`; throws
// NonConvergenceError (carrying the last iterate) past `iterations` steps.
inline EigenPair max_generalized_eigenpair(const FormPair& forms, unsigned iterations = 10000,
                                           double tolerance = 1e-12) {
    detail::ScaledEigenResult res = detail::max_eigenpair_scaled(forms, iterations, tolerance);
    EigenPair pair;
    pair.eigenvalue = res.eigenvalue;
    pair.vector.resize(res.vector.size());
    for (std::size_t i = 0; i < res.vector.size(); ++i)
        pair.vector[i] = std::ldexp(res.vector[i], static_cast<int>(res.scaling[i]));
    detail::normalize_max_entry(pair.vector);
    if (!res.converged)
        throw NonConvergenceError("max_generalized_eigenpair: no convergence within iteration cap",
                                  std::move(pair));
    return pair;
}

// Best rational approximation with denominator <= max_denominator, via
// continued-fraction convergents, applied componentwise.
inline Rational rationalize(double x, std::uint64_t max_denominator) {
    if (max_denominator < 1) throw error("rationalize: max_denominator must be >= 1");
    if (!std::isfinite(x)) throw error("rationalize: non-finite input");
    bool neg = x < 0;
    double r = neg ? -x : x;
    if (r > 9e17) throw error("rationalize: input too large for int64 convergents");
    // convergents h/k of the continued fraction of r
    std::int64_t h0 = 1, h1 = static_cast<std::int64_t>(std::floor(r));
    std::int64_t k0 = 0, k1 = 1;
    double frac = r - std::floor(r);
    for (int step = 0; step < 64 && frac > 1e-18; ++step) {
        double inv = 1.0 / frac;
        double aid = std::floor(inv);
        if (aid > 9e17) break;
        std::int64_t a = static_cast<std::int64_t>(aid);
        __int128 h2 = static_cast<__int128>(a) * h1 + h0;
        __int128 k2 = static_cast<__int128>(a) * k1 + k0;
        if (k2 > static_cast<__int128>(max_denominator) || h2 > static_cast<__int128>(INT64_MAX))
            break;
        h0 = h1; h1 = static_cast<std::int64_t>(h2);
        k0 = k1; k1 = static_cast<std::int64_t>(k2);
        frac = inv - aid;
    }
    Rational out(h1, k1);
    return neg ? -out : out;
}

inline std::vector<Rational> rationalize_vector(const std::vector<double>& v,
                                                std::uint64_t max_denominator) {
    if (v.empty()) throw error("rationalize_vector: empty input");
    std::vector<Rational> out;
    out.reserve(v.size());
    bool all_zero = true;
    for (double x : v) {
        out.push_back(rationalize(x, max_denominator));
        if (!out.back().is_zero()) all_zero = false;
    }
    if (all_zero) throw error("rationalize_vector: all components rounded to zero; increase max_denominator");
    return out;
}

} // namespace sievemk
