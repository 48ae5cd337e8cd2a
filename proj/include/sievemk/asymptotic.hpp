#pragma once

// Closed-form large-k lower bound for M_k from the product profile
// F = prod g(k t_i) with g(t) = 1/(1+At) on [0,T], 1+AT = e^A.
//
// Everything here is advisory floating point: bounds carry an applicability
// guard and are never mixed with exact certificates.

#include <cmath>
#include <optional>

#include "sievemk/rational.hpp"

namespace sievemk {

struct LargeKParams {
    unsigned long k = 0;
    double a = 0.0;      // profile steepness A
    double t_cut = 0.0;  // support cut T = (e^A - 1)/A
    double mu = 0.0;     // center of mass of g^2
    double gamma = 0.0;  // int g^2
    double int_g = 0.0;  // int g (== 1 for this T)
};

struct GIntegralTriple {
    double int_g = 0.0;
    double gamma = 0.0;
    double int_ug2 = 0.0;
};

// With 1+AT = e^A the three integrals collapse to
//   int g = 1,  int g^2 = (1-e^{-A})/A,  int u g^2 = (A-1+e^{-A})/A^2,
// written via expm1 so small A does not cancel.
inline GIntegralTriple g_integral_triple(double a) {
    if (!(a > 0)) throw error("g_integral_triple: A must be positive");
    GIntegralTriple t;
    t.int_g = 1.0;
    t.gamma = -std::expm1(-a) / a;
    t.int_ug2 = (a + std::expm1(-a)) / (a * a);
    return t;
}

// mu = (int u g^2) / (int g^2) = 1/(1-e^{-A}) - 1/A.
inline double center_of_mass(double a) {
    if (!(a > 0)) throw error("center_of_mass: A must be positive");
    return (a + std::expm1(-a)) / (a * -std::expm1(-a));
}

inline LargeKParams large_k_params(unsigned long k, double a) {
    GIntegralTriple t = g_integral_triple(a);
    LargeKParams p;
    p.k = k;
    p.a = a;
    p.t_cut = (std::exp(a) - 1.0) / a;
    p.mu = t.int_ug2 / t.gamma;
    p.gamma = t.gamma;
    p.int_g = t.int_g;
    return p;
}

// A (1 - A e^A / (k (1 - A/(e^A-1) - e^A/k)^2)), valid as a lower bound on
// k J_k / I_k <= M_k only when mu < 1 - T/k and the inner margin
// 1 - A/(e^A-1) - e^A/k is positive. Outside that region the value is not a
// theorem, so nullopt is returned rather than a wrong number.
inline std::optional<double> ratio_lower_bound(unsigned long k, double a) {
    if (k < 2) throw error("ratio_lower_bound: k must be >= 2");
    if (!(a > 0)) throw error("ratio_lower_bound: A must be positive");
    LargeKParams p = large_k_params(k, a);
    double kd = static_cast<double>(k);
    if (!(p.mu < 1.0 - p.t_cut / kd)) return std::nullopt;
    double ea = std::exp(a);
    double margin = 1.0 - a / (ea - 1.0) - ea / kd;
    if (!(margin > 0.0)) return std::nullopt;
    return a * (1.0 - a * ea / (kd * margin * margin));
}

inline double default_profile_steepness(unsigned long k) {
    double lk = std::log(static_cast<double>(k));
    return lk - 2.0 * std::log(lk);
}

// Best applicable bound over a grid of A around log k - 2 log log k
// (+-25%, 101 points, midpoint included). The result is advisory: a positive
// float lower bound on M_k, not a certificate.
inline double mk_asymptotic(unsigned long k) {
    if (k < 16) throw error("mk_asymptotic: k must be >= 16");
    double a0 = default_profile_steepness(k);
    if (!(a0 > 0)) throw error("mk_asymptotic: default A not positive");
    double best = 0.0;
    bool found = false;
    for (int i = 0; i <= 100; ++i) {
        double a = a0 * (0.75 + 0.005 * i);
        std::optional<double> v = ratio_lower_bound(k, a);
        if (v && *v > 0.0 && (!found || *v > best)) {
            best = *v;
            found = true;
        }
    }
    if (!found) throw error("k below asymptotic regime; use eigen-certify");
    return best;
}

} // namespace sievemk
