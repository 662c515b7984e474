#include "dp4/numth.hpp"

#include <algorithm>
#include <cmath>

namespace dp4 {

namespace {

constexpr unsigned long kTrialBound = 1000000;

void require_nonzero(const Int& n, const char* what)
{
    if (n == 0) throw std::domain_error(what);
}

Int powm(const Int& b, const Int& e, const Int& m)
{
    Int r;
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

bool miller_rabin_round(const Int& n, const Int& d, unsigned s, unsigned long base)
{
    Int a = base;
    a %= n;
    if (a == 0) return true;
    Int x = powm(a, d, n);
    const Int n1 = n - 1;
    if (x == 1 || x == n1) return true;
    for (unsigned r = 1; r < s; ++r) {
        x = x * x % n;
        if (x == n1) return true;
    }
    return false;
}

// Brent's variant of Pollard rho; n odd composite without small factors.
Int pollard_rho(const Int& n)
{
    for (unsigned long c = 1;; ++c) {
        Int y = 2, x, ys, q = 1, g = 1;
        unsigned long r = 1;
        const unsigned long m = 128;
        auto f = [&](const Int& v) -> Int { return (v * v + c) % n; };
        do {
            x = y;
            for (unsigned long i = 0; i < r; ++i) y = f(y);
            unsigned long k = 0;
            do {
                ys = y;
                for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    Int diff = x - y;
                    q = q * abs(diff) % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                Int diff = x - ys;
                diff = abs(diff);
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_into(const Int& n, std::map<Int, unsigned>& out)
{
    if (n == 1) return;
    if (is_prime(n)) {
        out[n] += 1;
        return;
    }
    Int d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

// Integer in the square class of a nonzero rational.
Int class_integer(const Rat& q) { return q.get_num() * q.get_den(); }

int eps2(const Int& u)  // (u - 1)/2 mod 2 for odd u
{
    return mpz_fdiv_ui(u.get_mpz_t(), 4) == 3 ? 1 : 0;
}

int omega2(const Int& u)  // (u^2 - 1)/8 mod 2 for odd u
{
    unsigned long r = mpz_fdiv_ui(u.get_mpz_t(), 8);
    return (r == 3 || r == 5) ? 1 : 0;
}

}  // namespace

Rat make_rat(const Int& num, const Int& den)
{
    if (den == 0) throw std::domain_error("zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

Int FactoredInt::value() const
{
    Int v = sign;
    for (const auto& [p, e] : factors) {
        Int pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
        v *= pe;
    }
    return v;
}

Place Place::finite(const Int& p)
{
    if (!is_prime(p)) throw std::invalid_argument("place: not a prime");
    return Place(p);
}

const Int& Place::prime() const
{
    if (is_real()) throw std::logic_error("real place has no prime");
    return p_;
}

std::string Place::to_string() const { return is_real() ? "R" : p_.get_str(); }

bool is_prime(const Int& n)
{
    if (n < 2) return false;
    static constexpr unsigned long small_primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (unsigned long p : small_primes) {
        if (n == p) return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
    }
    Int d = n - 1;
    unsigned s = 0;
    while (mpz_even_p(d.get_mpz_t())) {
        d >>= 1;
        ++s;
    }
    for (unsigned long base : small_primes)
        if (!miller_rabin_round(n, d, s, base)) return false;
    // The fixed bases are deterministic below 3.3e24; above that, add
    // GMP's randomized rounds.
    static const Int deterministic_bound("3317044064679887385961981");
    if (n >= deterministic_bound) return mpz_probab_prime_p(n.get_mpz_t(), 25) != 0;
    return true;
}

int vp(const Int& n, const Int& p)
{
    require_nonzero(n, "valuation of zero");
    if (p < 2) throw std::invalid_argument("vp: p must be prime");
    Int m = abs(n);
    return static_cast<int>(mpz_remove(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t()));
}

int vp(const Rat& q, const Int& p)
{
    if (q == 0) throw std::domain_error("valuation of zero");
    return vp(q.get_num(), p) - vp(q.get_den(), p);
}

FactoredInt factorize(const Int& n)
{
    require_nonzero(n, "factorize: zero");
    FactoredInt f;
    f.sign = n < 0 ? -1 : 1;
    Int m = abs(n);
    for (unsigned long p = 2; p < kTrialBound; p += (p == 2 ? 1 : 2)) {
        if (Int(p) * p > m) break;
        if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            unsigned e = 0;
            while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
                mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
                ++e;
            }
            f.factors[Int(p)] = e;
        }
    }
    if (m > 1) factor_into(m, f.factors);
    return f;
}

std::vector<Int> prime_divisors(const Int& n)
{
    std::vector<Int> ps;
    for (const auto& [p, e] : factorize(n).factors) ps.push_back(p);
    return ps;
}

SquarefreeSplit squarefree_part(const Int& n)
{
    require_nonzero(n, "squarefree_part: zero");
    FactoredInt f = factorize(n);
    SquarefreeSplit s{Int(f.sign), Int(1)};
    for (const auto& [p, e] : f.factors) {
        if (e % 2) s.core *= p;
        Int pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e / 2);
        s.root *= pe;
    }
    return s;
}

SquareClass square_class(const Rat& q)
{
    if (q == 0) throw std::domain_error("square class of zero");
    return SquareClass{squarefree_part(class_integer(q)).core};
}

int legendre(const Int& a, const Int& p)
{
    if (p == 2) throw std::invalid_argument("legendre: p must be odd");
    if (p < 3) throw std::invalid_argument("legendre: p must be an odd prime");
    return mpz_legendre(a.get_mpz_t(), p.get_mpz_t());
}

int bracket_symbol(const Int& a, const Int& p)
{
    require_nonzero(a, "bracket symbol of zero");
    Int u = a;
    mpz_remove(u.get_mpz_t(), u.get_mpz_t(), p.get_mpz_t());
    return legendre(u, p);
}

bool is_rational_square(const Rat& q)
{
    if (q == 0) throw std::domain_error("square test of zero");
    return is_square(q.get_num()) && is_square(q.get_den());
}

bool is_square_in_quad(const Rat& a, const Rat& m)
{
    if (a == 0 || m == 0) throw std::domain_error("square test of zero");
    if (is_rational_square(a)) return true;
    if (is_rational_square(m)) return false;
    return is_rational_square(a * m);
}

int hilbert(const Rat& a, const Rat& b, const Place& v)
{
    if (a == 0 || b == 0) throw std::domain_error("hilbert symbol of zero");
    if (v.is_real()) return (a < 0 && b < 0) ? -1 : 1;

    const Int& p = v.prime();
    Int u = class_integer(a), w = class_integer(b);
    const int alpha = static_cast<int>(mpz_remove(u.get_mpz_t(), u.get_mpz_t(), p.get_mpz_t()));
    const int beta = static_cast<int>(mpz_remove(w.get_mpz_t(), w.get_mpz_t(), p.get_mpz_t()));

    if (p == 2) {
        int e = eps2(u) * eps2(w) + alpha * omega2(w) + beta * omega2(u);
        return e % 2 ? -1 : 1;
    }
    int s = 1;
    if ((alpha & 1) && (beta & 1) && mpz_fdiv_ui(p.get_mpz_t(), 4) == 3) s = -s;
    if (beta & 1) s *= legendre(u, p);
    if (alpha & 1) s *= legendre(w, p);
    return s;
}

Int gcd_all(const std::array<Int, 5>& xs)
{
    Int g = 0;
    for (const Int& x : xs) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    return g;
}

std::vector<long> primes_between(long lo, long hi)
{
    std::vector<long> out;
    if (hi < 2) return out;
    std::vector<bool> composite(static_cast<std::size_t>(hi) + 1, false);
    for (long n = 2; n <= hi; ++n) {
        if (composite[static_cast<std::size_t>(n)]) continue;
        if (n >= lo) out.push_back(n);
        for (long m = n * n; m <= hi; m += n) composite[static_cast<std::size_t>(m)] = true;
    }
    return out;
}

namespace small {

std::int64_t powmod(std::int64_t b, std::int64_t e, std::int64_t m)
{
    __int128 r = 1, x = mod(b, m);
    while (e > 0) {
        if (e & 1) r = r * x % m;
        x = x * x % m;
        e >>= 1;
    }
    return static_cast<std::int64_t>(r);
}

int legendre(std::int64_t a, std::int64_t p)
{
    std::int64_t r = powmod(a, (p - 1) / 2, p);
    if (r == 0) return 0;
    return r == 1 ? 1 : -1;
}

bool is_square(std::int64_t n)
{
    if (n <= 0) return false;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r * r == n;
}

std::int64_t squarefree_core(std::int64_t n)
{
    std::int64_t core = n < 0 ? -1 : 1;
    std::int64_t m = n < 0 ? -n : n;
    for (std::int64_t p = 2; p * p <= m; ++p) {
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (e & 1) core *= p;
    }
    return core * m;
}

}  // namespace small

}  // namespace dp4
