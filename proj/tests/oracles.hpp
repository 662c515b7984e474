#pragma once

// Slow, independent reference implementations used only by the tests.

#include <cstdint>
#include <cstdlib>
#include <map>
#include <vector>

namespace oracle {

using i64 = std::int64_t;

inline std::map<i64, int> trial_factor(i64 n)
{
    std::map<i64, int> f;
    n = std::llabs(n);
    for (i64 q = 2; q * q <= n; ++q)
        while (n % q == 0) {
            ++f[q];
            n /= q;
        }
    if (n > 1) ++f[n];
    return f;
}

inline i64 mod(i64 a, i64 m) { return ((a % m) + m) % m; }

inline int legendre(i64 a, i64 p)
{
    a = mod(a, p);
    if (a == 0) return 0;
    for (i64 x = 1; x < p; ++x)
        if (x * x % p == a) return 1;
    return -1;
}

inline i64 ipow(i64 b, int e)
{
    i64 r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// z^2 = a x^2 + b y^2 has a primitive solution mod p^k, k = 3 (odd p) or
// 5 (p = 2). After removing even powers of p from a and b this is
// equivalent to solubility over Q_p (Hensel with gradient valuation <= 1,
// resp. <= 2 at p = 2).
inline int hilbert(i64 a, i64 b, i64 p)
{
    const int k = p == 2 ? 5 : 3;
    const i64 m = ipow(p, k);
    auto reduce = [&](i64 x) {
        while (x % (p * p) == 0) x /= p * p;
        return mod(x, m);
    };
    a = reduce(a);
    b = reduce(b);
    std::vector<char> sq_any(static_cast<std::size_t>(m), 0), sq_unit(static_cast<std::size_t>(m), 0);
    for (i64 z = 0; z < m; ++z) {
        const auto r = static_cast<std::size_t>(z * z % m);
        sq_any[r] = 1;
        if (z % p) sq_unit[r] = 1;
    }
    for (i64 x = 0; x < m; ++x)
        for (i64 y = 0; y < m; ++y) {
            const auto r = static_cast<std::size_t>((a * (x * x % m) + b * (y * y % m)) % m);
            const bool primitive_xy = x % p || y % p;
            if (primitive_xy ? sq_any[r] : sq_unit[r]) return 1;
        }
    return -1;
}

}  // namespace oracle
