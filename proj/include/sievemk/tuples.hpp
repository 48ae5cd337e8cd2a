#pragma once

// Admissible k-tuple machinery: a tuple H = {h_1 < ... < h_k} of non-negative
// integers is admissible when for every prime p the residues {h mod p} miss at
// least one class. Only primes p <= k can be covered by k elements, so the
// check is finite.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sievemk/primes.hpp"
#include "sievemk/rational.hpp"

namespace sievemk {

class KTuple {
public:
    explicit KTuple(std::vector<std::int64_t> elements) : elems_(std::move(elements)) {
        if (elems_.empty()) throw error("KTuple: empty tuple");
        std::sort(elems_.begin(), elems_.end());
        for (std::size_t i = 0; i < elems_.size(); ++i) {
            if (elems_[i] < 0) throw error("KTuple: elements must be non-negative");
            if (i > 0 && elems_[i] == elems_[i - 1]) throw error("KTuple: elements must be distinct");
        }
    }

    std::size_t k() const { return elems_.size(); }
    const std::vector<std::int64_t>& elements() const { return elems_; }
    std::int64_t diameter() const { return elems_.back() - elems_.front(); }

    friend bool operator==(const KTuple& a, const KTuple& b) { return a.elems_ == b.elems_; }

private:
    std::vector<std::int64_t> elems_;
};

inline std::int64_t diameter(const KTuple& h) { return h.diameter(); }

struct AdmissibilityResult {
    bool admissible = false;
    std::int64_t witness_prime = 0;           // covering prime when inadmissible
    std::vector<std::int64_t> residue_cover;  // all residues mod witness_prime

    explicit operator bool() const { return admissible; }
};

inline AdmissibilityResult is_admissible(const KTuple& h) {
    PrimeSieve sieve;
    const auto& elems = h.elements();
    for (std::int64_t p : sieve.primes_up_to(static_cast<std::int64_t>(h.k()))) {
        std::vector<bool> hit(static_cast<std::size_t>(p), false);
        std::int64_t distinct = 0;
        for (std::int64_t e : elems) {
            auto r = static_cast<std::size_t>(e % p);
            if (!hit[r]) {
                hit[r] = true;
                ++distinct;
            }
        }
        if (distinct == p) {
            AdmissibilityResult res;
            res.admissible = false;
            res.witness_prime = p;
            for (std::int64_t r = 0; r < p; ++r) res.residue_cover.push_back(r);
            return res;
        }
    }
    return {true, 0, {}};
}

struct PrimeOffsetTuple {
    KTuple tuple;        // shifted so the least element is 0
    std::int64_t shift;  // the subtracted prime p_{pi(k)+1}
};

// The k consecutive primes p_{pi(k)+1}, ..., p_{pi(k)+k}, normalized to start
// at 0. Every element is a prime exceeding k, so no prime p <= k divides one,
// and primes above k cannot be covered by k elements: always admissible.
inline PrimeOffsetTuple prime_offset_tuple(std::size_t k) {
    if (k == 0) throw error("prime_offset_tuple: k must be >= 1");
    PrimeSieve sieve;
    std::size_t skip = sieve.count_up_to(static_cast<std::int64_t>(k));
    std::int64_t bound = 64;
    std::vector<std::int64_t> primes;
    while (true) {
        primes = sieve.primes_up_to(bound);
        if (primes.size() >= skip + k) break;
        bound *= 2;
    }
    std::vector<std::int64_t> elems(primes.begin() + static_cast<std::ptrdiff_t>(skip),
                                    primes.begin() + static_cast<std::ptrdiff_t>(skip + k));
    std::int64_t shift = elems.front();
    for (auto& e : elems) e -= shift;
    return {KTuple(std::move(elems)), shift};
}

// For each prime p <= k in increasing order, delete the residue class mod p
// of minimum occupancy (ties: smallest residue). Every k-subset of the result
// is admissible, since no prime p <= k has all classes occupied afterwards.
inline std::vector<std::int64_t> refine_admissible(std::vector<std::int64_t> a, std::size_t k) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    PrimeSieve sieve;
    for (std::int64_t p : sieve.primes_up_to(static_cast<std::int64_t>(k))) {
        std::vector<std::size_t> occupancy(static_cast<std::size_t>(p), 0);
        for (std::int64_t x : a) ++occupancy[static_cast<std::size_t>(((x % p) + p) % p)];
        std::size_t victim = 0;
        for (std::size_t r = 1; r < occupancy.size(); ++r)
            if (occupancy[r] < occupancy[victim]) victim = r;
        std::erase_if(a, [&](std::int64_t x) {
            return static_cast<std::size_t>(((x % p) + p) % p) == victim;
        });
    }
    if (a.empty()) throw error("input too small for refinement");
    return a;
}

// The width-600 admissible 105-tuple (narrowest known at this size).
inline const KTuple& builtin_h105() {
    static const KTuple h105(std::vector<std::int64_t>{
        0,   10,  12,  24,  28,  30,  34,  42,  48,  52,  54,  64,  70,  72,  78,
        82,  90,  94,  100, 112, 114, 118, 120, 124, 132, 138, 148, 154, 168, 174,
        178, 180, 184, 190, 192, 202, 204, 208, 220, 222, 232, 234, 250, 252, 258,
        262, 264, 268, 280, 288, 294, 300, 310, 322, 324, 328, 330, 334, 342, 352,
        358, 360, 364, 372, 378, 384, 390, 394, 400, 402, 408, 412, 418, 420, 430,
        432, 442, 444, 450, 454, 462, 468, 472, 478, 484, 490, 492, 498, 504, 510,
        528, 532, 534, 538, 544, 558, 562, 570, 574, 580, 582, 588, 594, 598, 600});
    return h105;
}

// Tuple files: one integer per line, ascending.
inline KTuple parse_tuple_text(const std::string& text, const std::string& name = "<tuple>") {
    std::istringstream in(text);
    std::vector<std::int64_t> elems;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& why) {
        throw error(name + ":" + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        std::size_t last = line.find_last_not_of(" \t\r");
        std::string tok = line.substr(first, last - first + 1);
        std::int64_t v = 0;
        try {
            std::size_t used = 0;
            v = std::stoll(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            fail("not an integer: '" + tok + "'");
        }
        if (v < 0) fail("negative element");
        if (!elems.empty() && v <= elems.back()) fail("elements must be strictly ascending");
        elems.push_back(v);
    }
    if (elems.empty()) throw error(name + ": empty tuple file");
    return KTuple(std::move(elems));
}

inline KTuple read_tuple_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot read tuple file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_tuple_text(buf.str(), path);
}

inline std::string tuple_to_text(const KTuple& h) {
    std::string out;
    for (std::int64_t e : h.elements()) {
        out += std::to_string(e);
        out += '\n';
    }
    return out;
}

inline void write_tuple_file(const KTuple& h, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw error("cannot write tuple file: " + path);
    out << tuple_to_text(h);
}

} // namespace sievemk
