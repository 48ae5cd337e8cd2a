#pragma once

// Exact rational arithmetic on top of GMP. Every certified quantity in this
// library is a Rational; floating point only ever appears in advisory values
// and in eigenvalue *hints*, never in evidence.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace sievemk {

class Rational {
public:
    Rational() : q_(0) {}
    Rational(long n) : q_(n) {}
    Rational(long n, long d) : q_(n, d) { require_nonzero_den(); q_.canonicalize(); }
    Rational(const mpz_class& n, const mpz_class& d) : q_(n, d) {
        require_nonzero_den();
        q_.canonicalize();
    }
    explicit Rational(const mpz_class& n) : q_(n) {}
    explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

    const mpz_class& num() const { return q_.get_num(); }
    const mpz_class& den() const { return q_.get_den(); }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

    // Lowest-terms "num/den" (den always printed, so the format round-trips
    // unambiguously through files and JSON).
    std::string str() const { return num().get_str() + "/" + den().get_str(); }

    // Range-safe conversion: num and den are converted via mantissa+exponent
    // so values like 22!/127! neither overflow nor flush to zero prematurely.
    double to_double() const {
        if (is_zero()) return 0.0;
        long en = 0, ed = 0;
        double mn = mpz_get_d_2exp(&en, num().get_mpz_t());
        double md = mpz_get_d_2exp(&ed, den().get_mpz_t());
        long shift = en - ed;
        if (shift > 4000) return mn > 0 ? HUGE_VAL : -HUGE_VAL;
        if (shift < -4000) return 0.0;
        return std::ldexp(mn / md, static_cast<int>(shift));
    }

    // this * 2^e, exact.
    Rational times_pow2(long e) const {
        mpq_class r;
        if (e >= 0)
            mpq_mul_2exp(r.get_mpq_t(), q_.get_mpq_t(), static_cast<unsigned long>(e));
        else
            mpq_div_2exp(r.get_mpq_t(), q_.get_mpq_t(), static_cast<unsigned long>(-e));
        return Rational(r);
    }

    // log2 of the magnitude, within rounding; only meaningful when nonzero.
    double approx_log2() const {
        long en = 0, ed = 0;
        double mn = mpz_get_d_2exp(&en, num().get_mpz_t());
        double md = mpz_get_d_2exp(&ed, den().get_mpz_t());
        return std::log2(std::fabs(mn / md)) + static_cast<double>(en - ed);
    }

    mpz_class floor() const {
        mpz_class f;
        mpz_fdiv_q(f.get_mpz_t(), num().get_mpz_t(), den().get_mpz_t());
        return f;
    }
    mpz_class ceil() const {
        mpz_class c;
        mpz_cdiv_q(c.get_mpz_t(), num().get_mpz_t(), den().get_mpz_t());
        return c;
    }

    // Exact value of the double (every finite double is a dyadic rational).
    static Rational from_double(double x) {
        if (!std::isfinite(x)) throw std::domain_error("Rational::from_double: non-finite");
        return Rational(mpq_class(x));
    }

    // Accepts "p/q", "p", optional leading '-'; whitespace is not tolerated.
    static Rational parse(std::string_view s) {
        auto bad = [&] { throw std::invalid_argument("not a rational literal: '" + std::string(s) + "'"); };
        if (s.empty()) bad();
        auto slash = s.find('/');
        std::string nums(slash == std::string_view::npos ? s : s.substr(0, slash));
        std::string dens(slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1));
        if (!valid_int(nums) || !valid_int(dens)) bad();
        mpz_class n(nums), d(dens);
        if (d == 0) bad();
        return Rational(n, d);
    }

private:
    static bool valid_int(const std::string& t) {
        if (t.empty()) return false;
        std::size_t i = (t[0] == '-') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    }
    void require_nonzero_den() {
        if (q_.get_den() == 0) throw std::domain_error("Rational: zero denominator");
    }

    mpq_class q_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

inline mpz_class factorial(unsigned long n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

inline mpz_class binomial(unsigned long n, unsigned long k) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return b;
}

// Base domain error for this library.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Schema version stamped on every JSON artifact.
inline constexpr const char* kSchemaTag = "sieve-mk/1";

} // namespace sievemk
