#pragma once

// Machine-checkable lower-bound certificates for M_k.
//
// A certificate is a rational coefficient vector over the (c,b)-ordered basis
// together with its exactly-computed Rayleigh quotient. Verification recomputes
// the forms and the quotient from scratch; the stored float eigenvalue is an
// informational hint, never evidence.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sievemk/eigen.hpp"
#include "sievemk/forms.hpp"
#include "sievemk/rational.hpp"

namespace sievemk {

struct MkCertificate {
    unsigned long k = 0;
    unsigned degree = 0;
    std::vector<BasisTerm> basis;
    std::vector<Rational> vector;
    Rational ratio;
    Rational target;
    std::string float_eigenvalue_hint;
};

struct CertificationError : error {
    CertificationError(const std::string& what, double float_eig)
        : error(what), float_eigenvalue(float_eig) {}
    double float_eigenvalue = 0.0;
};

inline nlohmann::ordered_json certificate_to_json(const MkCertificate& cert) {
    nlohmann::ordered_json j;
    j["schema"] = kSchemaTag;
    j["k"] = cert.k;
    j["degree"] = cert.degree;
    auto basis = nlohmann::ordered_json::array();
    for (const auto& t : cert.basis) basis.push_back({t.b, t.c});
    j["basis"] = basis;
    auto vec = nlohmann::ordered_json::array();
    for (const auto& r : cert.vector) vec.push_back(r.str());
    j["vector"] = vec;
    j["ratio"] = cert.ratio.str();
    j["target"] = cert.target.str();
    j["float_eigenvalue_hint"] = cert.float_eigenvalue_hint;
    return j;
}

inline MkCertificate certificate_from_json(const nlohmann::json& j) {
    if (!j.is_object() || j.value("schema", "") != kSchemaTag)
        throw error("certificate: missing or unsupported schema tag");
    MkCertificate cert;
    cert.k = j.at("k").get<unsigned long>();
    cert.degree = j.at("degree").get<unsigned>();
    for (const auto& bt : j.at("basis")) {
        if (!bt.is_array() || bt.size() != 2) throw error("certificate: malformed basis term");
        cert.basis.push_back({bt[0].get<unsigned>(), bt[1].get<unsigned>()});
    }
    for (const auto& v : j.at("vector"))
        cert.vector.push_back(Rational::parse(v.get<std::string>()));
    cert.ratio = Rational::parse(j.at("ratio").get<std::string>());
    cert.target = Rational::parse(j.at("target").get<std::string>());
    cert.float_eigenvalue_hint = j.value("float_eigenvalue_hint", "");
    return cert;
}

// Canonical serialized form: 2-space-indented JSON of the ordered object.
inline std::string certificate_to_string(const MkCertificate& cert) {
    return certificate_to_json(cert).dump(2) + "\n";
}

inline MkCertificate certificate_from_string(const std::string& text) {
    return certificate_from_json(nlohmann::json::parse(text));
}

inline void write_certificate(const MkCertificate& cert, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw error("cannot write certificate file: " + path);
    out << certificate_to_string(cert);
}

inline MkCertificate read_certificate(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot read certificate file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return certificate_from_string(buf.str());
}

// FNV-1a 64-bit over the canonical serialization; used to content-address
// certificates in gap reports.
inline std::string content_hash(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

inline std::string certificate_hash(const MkCertificate& cert) {
    return content_hash(certificate_to_string(cert));
}

// Recompute everything from scratch and compare exactly. True iff the stored
// ratio is reproduced and exceeds the stored target.
inline bool verify_certificate(const MkCertificate& cert) {
    if (cert.k < 2) throw error("stale certificate format: k < 2");
    FormPair forms = assemble_forms(cert.k, cert.degree);
    if (forms.basis != cert.basis)
        throw error("stale certificate format: basis does not match lexicographic (c,b) order");
    if (cert.vector.size() != forms.basis.size())
        throw error("stale certificate format: vector length does not match basis");
    Rational recomputed = evaluate_ratio(forms, cert.vector);
    return recomputed == cert.ratio && recomputed > cert.target;
}

namespace detail {

inline std::string format_hint(double eigenvalue) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", eigenvalue);
    return std::string(buf);
}

// Exact rational certificate vector from the scaled float eigenvector:
// undo the power-of-two congruence exactly, then normalize so the largest
// magnitude entry is 1 (the quotient is scale invariant; normalized vectors
// keep certificates portable).
inline std::vector<Rational> certificate_vector(const std::vector<Rational>& scaled,
                                                const std::vector<long>& exponents) {
    std::vector<Rational> out(scaled.size());
    for (std::size_t i = 0; i < scaled.size(); ++i) out[i] = scaled[i].times_pow2(exponents[i]);
    Rational best(0);
    for (const auto& x : out)
        if (abs(x) > abs(best)) best = x;
    if (!best.is_zero())
        for (auto& x : out) x /= best;
    return out;
}

} // namespace detail

struct CertifyOptions {
    unsigned iterations = 10000;
    double tolerance = 1e-12;
    std::uint64_t first_denominator = 1000;
    std::uint64_t denominator_cap = 1000000000000ull; // 10^12
};

// Assemble the forms, locate the top eigenpair in floats, then escalate
// rationalization denominators (doubling) until the exact quotient clears the
// target. Only the exact quotient decides.
inline MkCertificate certify_mk(unsigned long k, unsigned degree, const Rational& target,
                                const CertifyOptions& opts = {}) {
    FormPair forms = assemble_forms(k, degree);
    detail::ScaledEigenResult eig =
        detail::max_eigenpair_scaled(forms, opts.iterations, opts.tolerance);

    for (std::uint64_t den = opts.first_denominator;; den *= 2) {
        std::vector<Rational> scaled;
        try {
            scaled = rationalize_vector(eig.vector, den);
        } catch (const error&) {
            if (den >= opts.denominator_cap) break;
            continue; // all-zero at this denominator; escalate
        }
        std::vector<Rational> candidate = detail::certificate_vector(scaled, eig.scaling);
        Rational ratio = evaluate_ratio(forms, candidate);
        if (ratio > target) {
            MkCertificate cert;
            cert.k = k;
            cert.degree = degree;
            cert.basis = forms.basis;
            cert.vector = std::move(candidate);
            cert.ratio = std::move(ratio);
            cert.target = target;
            cert.float_eigenvalue_hint = detail::format_hint(eig.eigenvalue);
            return cert;
        }
        if (den >= opts.denominator_cap) break;
    }
    std::ostringstream msg;
    msg << "certification failed at degree " << degree << " (k=" << k << ", target "
        << target.str() << "): float eigenvalue " << detail::format_hint(eig.eigenvalue)
        << (eig.converged ? "" : " [eigensolve did not converge]");
    throw CertificationError(msg.str(), eig.eigenvalue);
}

} // namespace sievemk
