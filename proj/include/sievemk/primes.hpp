#pragma once

// Deterministic Eratosthenes sieve with on-demand extension. Primality at
// desk scale is always by sieve lookup, never probabilistic.

#include <cstdint>
#include <vector>

#include "sievemk/rational.hpp"

namespace sievemk {

class PrimeSieve {
public:
    PrimeSieve() { extend_to(64); }

    bool is_prime(std::int64_t n) {
        if (n < 2) return false;
        extend_to(n);
        return !composite_[static_cast<std::size_t>(n)];
    }

    // primes p <= n, ascending
    std::vector<std::int64_t> primes_up_to(std::int64_t n) {
        std::vector<std::int64_t> out;
        if (n < 2) return out;
        extend_to(n);
        for (std::int64_t p = 2; p <= n; ++p)
            if (!composite_[static_cast<std::size_t>(p)]) out.push_back(p);
        return out;
    }

    // 1-based: nth_prime(1) == 2
    std::int64_t nth_prime(std::size_t n) {
        if (n == 0) throw error("nth_prime: index is 1-based");
        std::int64_t bound = 64;
        while (true) {
            extend_to(bound);
            std::size_t seen = 0;
            for (std::int64_t p = 2; p <= bound; ++p)
                if (!composite_[static_cast<std::size_t>(p)] && ++seen == n) return p;
            bound *= 2;
        }
    }

    std::size_t count_up_to(std::int64_t n) {
        if (n < 2) return 0;
        extend_to(n);
        std::size_t c = 0;
        for (std::int64_t p = 2; p <= n; ++p)
            if (!composite_[static_cast<std::size_t>(p)]) ++c;
        return c;
    }

private:
    void extend_to(std::int64_t n) {
        std::size_t need = static_cast<std::size_t>(n) + 1;
        if (need <= composite_.size()) return;
        std::size_t size = composite_.empty() ? 2 : composite_.size();
        while (size < need) size *= 2;
        composite_.assign(size, false);
        composite_[0] = composite_[1] = true;
        for (std::size_t p = 2; p * p < size; ++p)
            if (!composite_[p])
                for (std::size_t m = p * p; m < size; m += p) composite_[m] = true;
    }

    std::vector<bool> composite_;
};

} // namespace sievemk
