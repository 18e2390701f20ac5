#pragma once

#include <cmath>
#include <cstdint>

namespace bohrlab {

// ---------------------------------------------------------------------------
// double-double helpers: torus coordinates are accumulated as hi+lo pairs so
// that frac(x + n*alpha) stays accurate for n up to 1e8.
// ---------------------------------------------------------------------------
struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DD quick_two_sum(double a, double b) { // requires |a| >= |b|
    double s = a + b;
    return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return {p, err};
}

inline DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline DD dd_add(DD a, double b) { return dd_add(a, DD{b, 0.0}); }

// fractional part of a dd value, collapsed to a double in [0,1)
inline double dd_frac01(DD a) {
    double f = std::floor(a.hi);
    DD r = quick_two_sum(a.hi - f, a.lo); // a.hi - floor(a.hi) is exact for |a.hi| < 2^52
    double v = r.hi + r.lo;
    v -= std::floor(v);
    if (v >= 1.0) v = 0.0;
    if (v < 0.0) v += 1.0;
    return v;
}

// ---------------------------------------------------------------------------
// Neumaier compensated summation; all window/orbit reductions use this in a
// fixed enumeration order so results do not depend on thread count.
// ---------------------------------------------------------------------------
struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }

    double value() const { return sum + comp; }
};

// distance on the unit circle R/Z for a, b in [0,1)
inline double circle_dist(double a, double b) {
    double m = std::abs(a - b);
    return m < 0.5 ? m : 1.0 - m;
}

// ---------------------------------------------------------------------------
// 64-bit modular arithmetic (exact orbit engine for the doubling map).
// ---------------------------------------------------------------------------
inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) r = mulmod_u64(r, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return r;
}

// deterministic Miller-Rabin, valid for all 64-bit inputs
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

} // namespace bohrlab
