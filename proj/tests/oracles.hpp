#pragma once

// Brute-force references written without the library's algorithms. Shared by
// the unit tests and the acceptance runner.

#include "agm/ff.hpp"

#include <cstdint>
#include <numeric>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

namespace oracle {

// Reduction by elementary S/T moves.
inline std::tuple<long, long, long> naive_reduce(long a, long b, long c) {
    for (;;) {
        if (a > c) {
            std::swap(a, c);
            b = -b;
        } else if (b > a) {
            c = a - b + c;
            b -= 2 * a;
        } else if (b <= -a) {
            c = a + b + c;
            b += 2 * a;
        } else {
            break;
        }
    }
    if (a == c && b < 0) b = -b;
    return {a, b, c};
}

inline std::size_t class_number(long D) {
    std::set<std::tuple<long, long, long>> classes;
    long N = -D;
    for (long a = 1; a * a <= N + 1; ++a) {
        for (long b = -2 * a; b <= 2 * a; ++b) {
            long num = b * b + N;
            if (num % (4 * a) != 0) continue;
            long c = num / (4 * a);
            if (std::gcd(std::gcd(a, b), c) != 1) continue;
            classes.insert(naive_reduce(a, b, c));
        }
    }
    return classes.size();
}

// Schoolbook product of coefficient vectors reduced by the field modulus.
inline std::vector<std::uint64_t> naive_mul(const agm::ff::Field& f, const std::vector<std::uint64_t>& a,
                                            const std::vector<std::uint64_t>& b) {
    const auto p = f.characteristic();
    const auto n = f.degree();
    const agm::ff::Poly& m = f.modulus();
    std::vector<std::uint64_t> r(2 * n, 0);
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    for (unsigned k = 2 * n - 1; k >= n; --k) {
        auto c = r[k];
        if (c == 0) continue;
        r[k] = 0;
        for (unsigned i = 0; i < n; ++i) r[k - n + i] = (r[k - n + i] + (p - c) * m[i]) % p;
    }
    r.resize(n);
    return r;
}

// Vertices of A(F_p) with a parent, found by searching all candidate parents.
// Prime fields only; O(p^3).
inline std::uint64_t parent_count_prime(std::uint64_t p) {
    std::uint64_t count = 0;
    for (std::uint64_t a = 1; a < p; ++a)
        for (std::uint64_t b = 1; b < p; ++b) {
            if (b == a || b == p - a) continue;
            bool found = false;
            for (std::uint64_t x = 1; x < p && !found; ++x) {
                const std::uint64_t y = (2 * a + p - x) % p;
                if (y == 0 || y == x || y == p - x) continue;
                found = x * y % p == b * b % p;
            }
            count += found;
        }
    return count;
}

}  // namespace oracle
