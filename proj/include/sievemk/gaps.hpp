#pragma once

// Turns (theta, certified M_k lower bound, admissible tuple) into statements
// about primes in bounded intervals.
//
// theta_sup models the exclusive supremum of available levels of distribution
// (levels are always approached from below), so a guarantee of r primes needs
// the strict inequality theta * M_k / 2 > r - 1. At integer boundary points
// this yields B rather than B+1 primes.

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sievemk/asymptotic.hpp"
#include "sievemk/certificate.hpp"
#include "sievemk/rational.hpp"
#include "sievemk/tuples.hpp"

namespace sievemk {

// sup over admissible rho < B of floor(rho + 1), with B = theta_sup * mk/2:
// ceil(B) off integers, exactly B at integers.
inline long primes_guaranteed(const Rational& theta_sup, const Rational& mk_lower) {
    if (theta_sup.sign() <= 0 || theta_sup > Rational(1))
        throw error("primes_guaranteed: theta_sup must lie in (0, 1]");
    if (mk_lower.sign() <= 0) throw error("primes_guaranteed: M_k lower bound must be positive");
    Rational b = theta_sup * mk_lower / Rational(2);
    mpz_class r = b.is_integer() ? b.num() : b.ceil();
    if (!r.fits_slong_p()) throw error("primes_guaranteed: result out of range");
    return std::max(1L, r.get_si());
}

struct GapStatement {
    long m = 0;             // liminf index: p_{n+m} - p_n
    std::int64_t gap = 0;   // <= diameter of the tuple
};

struct GapBound {
    Rational theta_sup;
    Rational mk_lower;
    unsigned long k = 0;
    KTuple tuple;
    long primes_guaranteed = 0;
    GapStatement statement;
    bool advisory = false;           // float-derived bound, not a certificate
    std::string certificate_ref;     // content hash of the evidence
};

// Statement line shared by single bounds and the headline table.
inline std::string render_gap_line(const GapBound& g) {
    std::ostringstream out;
    out << "theta<" << g.theta_sup.str() << "  m=" << g.statement.m << "  liminf p_{n+"
        << g.statement.m << "} - p_n <= " << g.statement.gap << "  k=" << g.k << "  primes>="
        << g.primes_guaranteed << "  " << (g.advisory ? "advisory:" : "cert:")
        << g.certificate_ref;
    return out.str();
}

inline nlohmann::ordered_json gap_bound_to_json(const GapBound& g) {
    nlohmann::ordered_json j;
    j["theta_sup"] = g.theta_sup.str();
    j["k"] = g.k;
    j["m"] = g.statement.m;
    j["gap"] = g.statement.gap;
    j["certificate_ref"] = g.certificate_ref;
    j["advisory_flag"] = g.advisory;
    return j;
}

// Checks every precondition, then assembles the theorem-grade record. The
// certificate is re-verified here; a bound is never emitted on stale evidence.
inline GapBound gap_bound(const Rational& theta_sup, const MkCertificate& cert, const KTuple& h) {
    if (h.k() != cert.k) {
        std::ostringstream msg;
        msg << "tuple size " << h.k() << " does not match certificate k=" << cert.k;
        throw error(msg.str());
    }
    AdmissibilityResult adm = is_admissible(h);
    if (!adm.admissible) {
        std::ostringstream msg;
        msg << "tuple is not admissible: residues cover every class mod " << adm.witness_prime;
        throw error(msg.str());
    }
    if (!verify_certificate(cert)) throw error("certificate failed verification");

    long r = primes_guaranteed(theta_sup, cert.ratio);
    return GapBound{theta_sup,
                    cert.ratio,
                    cert.k,
                    h,
                    r,
                    GapStatement{r - 1, h.diameter()},
                    false,
                    certificate_hash(cert)};
}

struct MinKResult {
    unsigned long k = 0;
    KTuple tuple;
    std::int64_t gap = 0;
    bool advisory = false;
    Rational bound; // the M_k lower bound used
};

// The tuple attached to explicit (k, gap) statements: the embedded width-600
// tuple at k=105 (narrower than the prime-offset construction), prime offsets
// elsewhere.
inline KTuple tuple_for_k(unsigned long k) {
    if (k == 105) return builtin_h105();
    return prime_offset_tuple(k).tuple;
}

// Smallest k guaranteeing m+1 primes: certified table entries first, then the
// advisory asymptotic bound for k beyond the table.
inline MinKResult min_k_for_m(long m, const Rational& theta_sup,
                              const std::vector<std::pair<unsigned long, Rational>>& certified_table,
                              unsigned long search_cap = 1000000000000000000ull) {
    if (m < 1) throw error("min_k_for_m: m must be >= 1");
    for (const auto& [k, bound] : certified_table) {
        if (primes_guaranteed(theta_sup, bound) >= m + 1) {
            KTuple t = tuple_for_k(k);
            return MinKResult{k, t, t.diameter(), false, bound};
        }
    }

    unsigned long lo = 16;
    if (!certified_table.empty()) lo = std::max(lo, certified_table.back().first + 1);
    auto satisfied = [&](unsigned long k) -> std::optional<Rational> {
        try {
            Rational b = Rational::from_double(mk_asymptotic(k));
            if (b.sign() > 0 && primes_guaranteed(theta_sup, b) >= m + 1) return b;
        } catch (const error&) {
        }
        return std::nullopt;
    };

    unsigned long hi = lo;
    std::optional<Rational> hi_bound;
    while (hi <= search_cap) {
        hi_bound = satisfied(hi);
        if (hi_bound) break;
        if (hi > search_cap / 2) break;
        hi *= 2;
    }
    if (!hi_bound) {
        double best_b = 0;
        try {
            best_b = theta_sup.to_double() * mk_asymptotic(search_cap) / 2.0;
        } catch (const error&) {
        }
        std::ostringstream msg;
        msg << "min_k_for_m: no k up to " << search_cap << " reaches m=" << m
            << " (largest B achieved ~= " << best_b << ")";
        throw error(msg.str());
    }
    // the asymptotic bound grows with k; binary search for the first success
    while (lo < hi) {
        unsigned long mid = lo + (hi - lo) / 2;
        if (satisfied(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    Rational bound = *satisfied(lo);
    KTuple t = tuple_for_k(lo);
    return MinKResult{lo, t, t.diameter(), true, bound};
}

struct HeadlineReport {
    std::vector<GapBound> lines;
    std::vector<std::string> errors; // actionable, one per missing line
    std::string text;                // deterministic rendering, lines then errors

    bool complete() const { return errors.empty(); }
};

// The three headline bounds:
//   theta -> 1/2-:  p_{n+1} - p_n <= 600   (k=105 certificate)
//   theta -> 1-  :  p_{n+1} - p_n <= 12    (k=5 certificate)
//   theta -> 1-  :  p_{n+2} - p_n <= 600   (k=105 certificate)
// A missing certificate downgrades its line(s) to an actionable error naming
// the certify invocation to run; present lines are still emitted.
inline HeadlineReport reproduce_headline(const MkCertificate* cert5, const MkCertificate* cert105) {
    if (cert5 != nullptr && cert5->k != 5)
        throw error("headline needs a k=5 certificate; run: certify --k 5 --degree 3 --target 2/1");
    if (cert105 != nullptr && cert105->k != 105)
        throw error("headline needs a k=105 certificate; run: certify --k 105 --degree 11 --target 4/1");

    HeadlineReport report;
    std::ostringstream out;
    auto emit = [&](const Rational& theta, const MkCertificate* cert, const KTuple& h,
                    const char* hint) {
        if (cert == nullptr) {
            std::string msg = std::string("missing certificate; run: certify ") + hint;
            report.errors.push_back(msg);
            out << "error: " << msg << "\n";
            return;
        }
        report.lines.push_back(gap_bound(theta, *cert, h));
        out << render_gap_line(report.lines.back()) << "\n";
    };
    emit(Rational(1, 2), cert105, builtin_h105(), "--k 105 --degree 11 --target 4/1");
    emit(Rational(1), cert5, KTuple({0, 2, 6, 8, 12}), "--k 5 --degree 3 --target 2/1");
    emit(Rational(1), cert105, builtin_h105(), "--k 105 --degree 11 --target 4/1");
    report.text = out.str();
    return report;
}

inline HeadlineReport reproduce_headline(const MkCertificate& cert5, const MkCertificate& cert105) {
    return reproduce_headline(&cert5, &cert105);
}

inline nlohmann::ordered_json headline_to_json(const HeadlineReport& report) {
    nlohmann::ordered_json j;
    j["schema"] = kSchemaTag;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& line : report.lines) arr.push_back(gap_bound_to_json(line));
    j["bounds"] = arr;
    if (!report.errors.empty()) j["errors"] = report.errors;
    return j;
}

} // namespace sievemk
