#include <doctest.h>

#include <cmath>
#include <vector>

#include "sievemk/certificate.hpp"
#include "sievemk/eigen.hpp"
#include "sievemk/forms.hpp"

using namespace sievemk;

TEST_CASE("1x1 pencil is solved exactly") {
    FormPair f = assemble_forms(2, 0); // M1=[1/2], M2=[2/3]
    EigenPair p = max_generalized_eigenpair(f);
    CHECK(p.eigenvalue == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    REQUIRE(p.vector.size() == 1);
    CHECK(p.vector[0] == doctest::Approx(1.0));
}

TEST_CASE("k=5 D=3 eigenvalue dominates the explicit witness quotient") {
    FormPair f = assemble_forms(5, 3);
    EigenPair p = max_generalized_eigenpair(f);
    CHECK(p.eigenvalue >= Rational(1417255, 708216).to_double() - 1e-9);
    CHECK(p.eigenvalue > 2.0);
    // normalized to unit maximum magnitude
    double max_abs = 0;
    for (double x : p.vector) max_abs = std::max(max_abs, std::fabs(x));
    CHECK(max_abs == doctest::Approx(1.0));
}

TEST_CASE("generalized eigenvalues are invariant under congruent diagonal scaling") {
    FormPair f = assemble_forms(5, 3);
    FormPair scaled = f;
    std::vector<long> d = {1, 3, 7, 2, 9, 5};
    for (std::size_t s = 0; s < f.basis.size(); ++s)
        for (std::size_t t = 0; t < f.basis.size(); ++t) {
            Rational factor(d[s] * d[t]);
            scaled.m1[s][t] *= factor;
            scaled.m2[s][t] *= factor;
        }
    double a = max_generalized_eigenpair(f).eigenvalue;
    double b = max_generalized_eigenpair(scaled).eigenvalue;
    CHECK(std::fabs(a - b) / std::fabs(a) < 1e-9);
}

TEST_CASE("non-convergence carries the last iterate") {
    FormPair f = assemble_forms(5, 3);
    try {
        max_generalized_eigenpair(f, 1, 1e-30); // one step cannot converge
        FAIL("expected NonConvergenceError");
    } catch (const NonConvergenceError& e) {
        CHECK(e.last.vector.size() == f.basis.size());
        CHECK(e.last.eigenvalue > 0.0);
    }
}

TEST_CASE("rationalize_vector follows continued-fraction convergents") {
    CHECK(rationalize_vector({0.5}, 10) == std::vector<Rational>{Rational(1, 2)});
    CHECK(rationalize_vector({0.333333}, 100) == std::vector<Rational>{Rational(1, 3)});
    CHECK(rationalize_vector({1.0, -0.25}, 4) ==
          std::vector<Rational>{Rational(1), Rational(-1, 4)});
    CHECK(rationalize_vector({0.0, 0.125}, 1000) ==
          std::vector<Rational>{Rational(0), Rational(1, 8)});
    CHECK_THROWS_WITH(rationalize_vector({1e-9, -1e-9}, 10),
                      doctest::Contains("increase max_denominator"));
}

TEST_CASE("certify_mk refuses an unreachable target and reports the float eigenvalue") {
    try {
        certify_mk(2, 0, Rational(2));
        FAIL("expected CertificationError");
    } catch (const CertificationError& e) {
        CHECK(e.float_eigenvalue == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
        CHECK(std::string(e.what()).find("certification failed at degree 0") != std::string::npos);
    }
}

TEST_CASE("certify_mk(5, 3, 2) produces a verifiable certificate") {
    MkCertificate cert = certify_mk(5, 3, Rational(2));
    CHECK(cert.k == 5);
    CHECK(cert.degree == 3);
    CHECK(cert.basis.size() == 6);
    CHECK(cert.ratio > Rational(2));
    CHECK(cert.ratio >= Rational(1417255, 708216));
    CHECK(verify_certificate(cert));
}

TEST_CASE("certified ratio is non-decreasing in the degree cap (k=5, D=0..4)") {
    Rational prev(0);
    for (unsigned d = 0; d <= 4; ++d) {
        MkCertificate cert = certify_mk(5, d, Rational(0));
        CAPTURE(d);
        CHECK(cert.ratio >= prev);
        prev = cert.ratio;
    }
}

TEST_CASE("the explicit k=5 witness is itself a valid certificate") {
    FormPair f = assemble_forms(5, 3);
    std::vector<Rational> a(f.basis.size(), Rational(0));
    for (std::size_t i = 0; i < f.basis.size(); ++i) {
        if (f.basis[i] == BasisTerm{1, 1}) a[i] = Rational(1);
        if (f.basis[i] == BasisTerm{2, 0}) a[i] = Rational(7, 10);
        if (f.basis[i] == BasisTerm{0, 1}) a[i] = Rational(1, 14);
        if (f.basis[i] == BasisTerm{1, 0}) a[i] = Rational(-3, 14);
    }
    MkCertificate cert;
    cert.k = 5;
    cert.degree = 3;
    cert.basis = f.basis;
    cert.vector = a;
    cert.ratio = evaluate_ratio(f, a);
    cert.target = Rational(2);
    cert.float_eigenvalue_hint = "manual";
    CHECK(cert.ratio == Rational(1417255, 708216));
    CHECK(verify_certificate(cert));
}

TEST_CASE("verification fails closed on tampering") {
    MkCertificate cert = certify_mk(5, 3, Rational(2));

    MkCertificate edited_target = cert;
    edited_target.target = Rational(5);
    CHECK_FALSE(verify_certificate(edited_target));

    MkCertificate perturbed = cert;
    perturbed.vector[3] += Rational(1, 1000000);
    CHECK_FALSE(verify_certificate(perturbed)); // stored ratio no longer matches

    MkCertificate stale = cert;
    std::swap(stale.basis[0], stale.basis[1]);
    CHECK_THROWS_WITH(verify_certificate(stale), doctest::Contains("stale certificate"));
}

TEST_CASE("certificate JSON round-trips exactly") {
    MkCertificate cert = certify_mk(5, 2, Rational(1));
    std::string text = certificate_to_string(cert);
    MkCertificate back = certificate_from_string(text);
    CHECK(back.k == cert.k);
    CHECK(back.degree == cert.degree);
    CHECK(back.basis == cert.basis);
    CHECK(back.vector == cert.vector);
    CHECK(back.ratio == cert.ratio);
    CHECK(back.target == cert.target);
    CHECK(back.float_eigenvalue_hint == cert.float_eigenvalue_hint);
    CHECK(certificate_to_string(back) == text);
    CHECK(certificate_hash(back) == certificate_hash(cert));
    CHECK(verify_certificate(back));
}

TEST_CASE("certificate parsing rejects foreign schemas") {
    CHECK_THROWS_WITH(certificate_from_string("{\"schema\":\"other/9\"}"),
                      doctest::Contains("schema"));
}
