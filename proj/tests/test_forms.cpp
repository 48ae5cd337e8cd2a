#include <doctest.h>

#include <vector>

#include "oracles.hpp"
#include "sievemk/forms.hpp"

using namespace sievemk;

namespace {

// The k=5 witness vector: P = (1-P1)P2 + 7/10 (1-P1)^2 + 1/14 P2 - 3/14 (1-P1).
std::vector<Rational> k5_witness_vector(const std::vector<BasisTerm>& basis) {
    std::vector<Rational> a(basis.size(), Rational(0));
    auto set = [&](unsigned b, unsigned c, Rational v) {
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (basis[i] == BasisTerm{b, c}) {
                a[i] = v;
                return;
            }
        FAIL("term not in basis");
    };
    set(1, 1, Rational(1));
    set(2, 0, Rational(7, 10));
    set(0, 1, Rational(1, 14));
    set(1, 0, Rational(-3, 14));
    return a;
}

} // namespace

TEST_CASE("basis_terms enumerates (b,c) with b+2c <= D in (c,b) order") {
    auto d0 = basis_terms(0);
    REQUIRE(d0.size() == 1);
    CHECK(d0[0] == BasisTerm{0, 0});

    auto d2 = basis_terms(2);
    REQUIRE(d2.size() == 4);
    CHECK(d2[0] == BasisTerm{0, 0});
    CHECK(d2[1] == BasisTerm{1, 0});
    CHECK(d2[2] == BasisTerm{2, 0});
    CHECK(d2[3] == BasisTerm{0, 1});

    CHECK(basis_terms(11).size() == 42);

    auto d11 = basis_terms(11);
    for (std::size_t i = 1; i < d11.size(); ++i) CHECK(d11[i - 1] < d11[i]);
    for (const auto& t : d11) CHECK(t.degree() <= 11);
}

TEST_CASE("i_entry examples") {
    CHECK(i_entry(1, {0, 0}, {0, 0}) == Rational(1));
    CHECK(i_entry(2, {1, 0}, {1, 0}) == Rational(1, 12));
    CHECK(i_entry(2, {0, 1}, {0, 1}) == Rational(7, 90)); // G_{2,2}(2)/6! = 56/720
}

TEST_CASE("j_entry examples") {
    CHECK(j_entry(2, {0, 0}, {0, 0}) == Rational(1, 3));
    CHECK(j_entry(2, {1, 0}, {1, 0}) == Rational(1, 20));
    CHECK(j_entry(1, {0, 0}, {0, 0}) == Rational(1));
}

TEST_CASE("i_entry and j_entry match the expansion + iterated-beta oracle") {
    for (unsigned k = 2; k <= 4; ++k) {
        auto basis = basis_terms(4);
        for (std::size_t s = 0; s < basis.size(); ++s)
            for (std::size_t t = s; t < basis.size(); ++t) {
                CAPTURE(k);
                CAPTURE(s);
                CAPTURE(t);
                CHECK(i_entry(k, basis[s], basis[t]) == oracle::i_entry_oracle(k, basis[s], basis[t]));
                CHECK(j_entry(k, basis[s], basis[t]) == oracle::j_entry_oracle(k, basis[s], basis[t]));
            }
    }
}

TEST_CASE("assemble_forms at k=2, D=0") {
    FormPair f = assemble_forms(2, 0);
    REQUIRE(f.basis.size() == 1);
    CHECK(f.m1[0][0] == Rational(1, 2));
    CHECK(f.m2[0][0] == Rational(2, 3));
    CHECK(evaluate_ratio(f, {Rational(1)}) == Rational(4, 3));
}

TEST_CASE("assemble_forms rejects k below 2") {
    CHECK_THROWS(assemble_forms(1, 0));
}

TEST_CASE("form matrices are symmetric and positive definite (k=5, D=3)") {
    FormPair f = assemble_forms(5, 3);
    REQUIRE(f.basis.size() == 6);
    for (std::size_t s = 0; s < 6; ++s)
        for (std::size_t t = 0; t < 6; ++t) {
            CHECK(f.m1[s][t] == f.m1[t][s]);
            CHECK(f.m2[s][t] == f.m2[t][s]);
            CHECK(f.m1[s][t].sign() > 0);
            CHECK(f.m2[s][t].sign() > 0);
        }
    CHECK(is_positive_definite(f.m1));
    CHECK(is_positive_definite(f.m2));
}

TEST_CASE("the full k=105 pencil is symmetric positive definite with positive entries") {
    FormPair f = assemble_forms(105, 11);
    REQUIRE(f.basis.size() == 42);
    for (std::size_t s = 0; s < 42; ++s)
        for (std::size_t t = s; t < 42; ++t) {
            CHECK(f.m1[s][t] == f.m1[t][s]);
            CHECK(f.m2[s][t] == f.m2[t][s]);
            CHECK(f.m1[s][t].sign() > 0);
            CHECK(f.m2[s][t].sign() > 0);
        }
    CHECK(is_positive_definite(f.m1));
    CHECK(is_positive_definite(f.m2));
}

TEST_CASE("the k=5 witness quotient is exactly 1417255/708216") {
    FormPair f = assemble_forms(5, 3);
    auto a = k5_witness_vector(f.basis);
    Rational ratio = evaluate_ratio(f, a);
    CHECK(ratio == Rational(1417255, 708216));
    CHECK(ratio > Rational(2));
}

TEST_CASE("evaluate_ratio is invariant under nonzero rational scaling") {
    FormPair f = assemble_forms(5, 3);
    auto a = k5_witness_vector(f.basis);
    auto scaled = a;
    for (auto& x : scaled) x *= Rational(-35, 4);
    CHECK(evaluate_ratio(f, a) == evaluate_ratio(f, scaled));
}

TEST_CASE("evaluate_ratio rejects the zero vector and size mismatches") {
    FormPair f = assemble_forms(2, 2);
    CHECK_THROWS_WITH(evaluate_ratio(f, std::vector<Rational>(4, Rational(0))),
                      doctest::Contains("degenerate"));
    CHECK_THROWS(evaluate_ratio(f, {Rational(1)}));
}

TEST_CASE("quadratic forms are positive for nonzero vectors of mixed sign") {
    FormPair f = assemble_forms(3, 3);
    const std::size_t n = f.basis.size();
    REQUIRE(n == 6);
    std::vector<std::vector<long>> raw = {{1, 0, 0, 0, 0, 0},
                                          {0, -1, 2, 0, 1, 0},
                                          {3, -2, 1, -1, 2, 4},
                                          {-5, 7, -11, 13, -17, 19}};
    for (const auto& v : raw) {
        std::vector<Rational> a;
        for (long x : v) a.emplace_back(x);
        CHECK(quadratic_form(f.m1, a).sign() > 0);
        CHECK(quadratic_form(f.m2, a).sign() > 0);
    }
}

TEST_CASE("i/j functionals agree with the assembled quadratic forms") {
    SymmetricPoly p;
    p.add_term(Rational(1), {1, 1});
    p.add_term(Rational(7, 10), {2, 0});
    p.add_term(Rational(1, 14), {0, 1});
    p.add_term(Rational(-3, 14), {1, 0});
    Rational i5 = i_functional(5, p);
    Rational j5 = j_functional_sum(5, p);
    CHECK(j5 / i5 == Rational(1417255, 708216));
}
