#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "trigbessel/characters.hpp"
#include "trigbessel/error.hpp"
#include "trigbessel/rational.hpp"
#include "trigbessel/summation.hpp"

namespace trigbessel::arith {

using cplx = std::complex<double>;
using chars::DirichletCharacter;

inline constexpr double kEulerGamma = 0.57721566490153286061;
inline constexpr long long kDefaultTableMax = 1'000'000;

// For integer x the terms with index (or index product) equal to x carry weight 1/2.
struct PrimedSumPolicy {
    bool halve_boundary = true;

    [[nodiscard]] static bool is_integer(double x) { return std::isfinite(x) && x == std::floor(x); }
    [[nodiscard]] double weight(double x, long long index) const
    {
        return (halve_boundary && is_integer(x) && static_cast<double>(index) == x) ? 0.5 : 1.0;
    }
};

inline long long floor_x(double x) { return x < 1 ? 0 : static_cast<long long>(std::floor(x)); }

// ---------------------------------------------------------------- pointwise

inline long long d(long long n)
{
    if (n <= 0) throw DomainError("d(n): n must be positive");
    long long c = 0;
    for (long long k = 1; k * k <= n; ++k)
        if (n % k == 0) c += (k * k == n) ? 1 : 2;
    return c;
}

inline long long binom(long long n, long long r)
{
    long long b = 1;
    for (long long i = 1; i <= r; ++i) b = b * (n - r + i) / i;
    return b;
}

// Number of ordered k-tuples with product n.
inline long long d_k(long long n, int k)
{
    if (n <= 0) throw DomainError("d_k(n): n must be positive");
    if (k < 1) throw DomainError("d_k: k must be >= 1");
    long long r = 1;
    for (long long p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) r *= binom(e + k - 1, k - 1);
    }
    if (n > 1) r *= k;
    return r;
}

inline long long isqrt(long long n)
{
    if (n <= 0) return 0;
    auto r = static_cast<long long>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Representations as a sum of two squares, order and signs distinguished; r2(0) = 1.
inline long long r2(long long n)
{
    if (n < 0) throw DomainError("r2(n): n must be >= 0");
    if (n == 0) return 1;
    long long c = 0;
    for (long long a = -isqrt(n); a <= isqrt(n); ++a) {
        long long rest = n - a * a;
        long long b = isqrt(rest);
        if (b * b == rest) c += (b == 0) ? 1 : 2;
    }
    return c;
}

struct TwistedDivisorSpec {
    std::vector<DirichletCharacter> characters;
    int weight_power = 0;  // 0: d_{chi...}(n), 1: n d_{chi...}(n)

    void validate() const
    {
        if (characters.empty()) throw ValidationError("twisted divisor spec needs at least one character");
        if (weight_power < 0) throw ValidationError("twisted divisor weight_power must be >= 0");
    }
    [[nodiscard]] TwistedDivisorSpec conj() const
    {
        TwistedDivisorSpec c{{}, weight_power};
        for (auto& chi : characters) c.characters.push_back(chi.conj());
        return c;
    }
};

namespace detail {
inline void ordered_factorizations(const std::vector<DirichletCharacter>& chi, std::size_t idx, long long n, cplx acc, cplx& out)
{
    if (idx + 1 == chi.size()) {
        out += acc * chi[idx](n);
        return;
    }
    for (long long k = 1; k * k <= n; ++k) {
        if (n % k) continue;
        ordered_factorizations(chi, idx + 1, n / k, acc * chi[idx](k), out);
        if (k * k != n) ordered_factorizations(chi, idx + 1, k, acc * chi[idx](n / k), out);
    }
}
}  // namespace detail

// Sum over ordered factorizations n1...nk = n of chi1(n1)...chik(nk), times n^weight_power.
inline cplx twisted_divisor(const TwistedDivisorSpec& spec, long long n)
{
    spec.validate();
    if (n <= 0) throw DomainError("twisted_divisor: n must be positive");
    cplx s{0.0, 0.0};
    detail::ordered_factorizations(spec.characters, 0, n, {1.0, 0.0}, s);
    return s * std::pow(static_cast<double>(n), spec.weight_power);
}

// ---------------------------------------------------------------- streaming sieve

// Streams f(1), f(2), ..., f(n_max) for a multiplicative f given on prime powers,
// in blocks, so memory stays O(block + sqrt(n_max)).
template <typename T, typename PrimePower, typename Consume>
void stream_multiplicative(long long n_max, PrimePower&& prime_power, Consume&& consume, long long block = 1 << 16)
{
    if (n_max < 1) return;
    const long long root = isqrt(n_max);
    std::vector<char> composite(static_cast<std::size_t>(root + 1), 0);
    std::vector<long long> primes;
    for (long long i = 2; i <= root; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (long long j = i * i; j <= root; j += i) composite[j] = 1;
    }
    std::vector<long long> rem;
    std::vector<T> val;
    for (long long lo = 1; lo <= n_max; lo += block) {
        const long long hi = std::min(n_max + 1, lo + block);
        const auto len = static_cast<std::size_t>(hi - lo);
        rem.resize(len);
        val.assign(len, T(1));
        for (std::size_t i = 0; i < len; ++i) rem[i] = lo + static_cast<long long>(i);
        for (long long p : primes) {
            if (p * p >= hi) break;
            long long start = ((lo + p - 1) / p) * p;
            for (long long m = start; m < hi; m += p) {
                auto i = static_cast<std::size_t>(m - lo);
                int e = 0;
                while (rem[i] % p == 0) {
                    rem[i] /= p;
                    ++e;
                }
                val[i] *= prime_power(p, e);
            }
        }
        for (std::size_t i = 0; i < len; ++i) {
            if (rem[i] > 1) val[i] *= prime_power(rem[i], 1);
            consume(lo + static_cast<long long>(i), val[i]);
        }
    }
}

// Prime-power values h_e(chi_1(p), ..., chi_k(p)) * p^{e w} of a twisted divisor function.
class TwistedPrimePower {
public:
    explicit TwistedPrimePower(const TwistedDivisorSpec& spec) : spec_(spec) { spec_.validate(); }

    cplx operator()(long long p, int e) const
    {
        std::vector<cplx> h(static_cast<std::size_t>(e + 1), cplx(0, 0));
        h[0] = 1;
        for (auto& chi : spec_.characters) {
            cplx c = chi(p);
            for (int j = 1; j <= e; ++j) h[j] += c * h[j - 1];
        }
        return h[e] * std::pow(static_cast<double>(p), e * spec_.weight_power);
    }

private:
    TwistedDivisorSpec spec_;
};

// ---------------------------------------------------------------- summatory functions

enum class SummandKind { plain_d, d_k, twisted };

struct SummatorySpec {
    SummandKind kind = SummandKind::plain_d;
    int k = 2;                    // for d_k
    TwistedDivisorSpec twisted;   // for twisted

    static SummatorySpec plain() { return {}; }
    static SummatorySpec piltz(int k) { return {SummandKind::d_k, k, {}}; }
    static SummatorySpec twisted_by(TwistedDivisorSpec t) { return {SummandKind::twisted, 2, std::move(t)}; }
};

// Unprimed D(N) = sum_{n <= N} d(n) by the hyperbola method.
inline long long divisor_summatory_int(long long n)
{
    if (n < 1) return 0;
    long long r = isqrt(n), s = 0;
    for (long long k = 1; k <= r; ++k) s += n / k;
    return 2 * s - r * r;
}

// Evaluates the primed summatory at each x in xs (any order) with one streaming pass.
inline std::vector<cplx> summatory_at(const SummatorySpec& spec, const std::vector<double>& xs, PrimedSumPolicy primed = {})
{
    std::vector<cplx> out(xs.size());
    for (double x : xs)
        if (!(x > 0) || !std::isfinite(x)) throw DomainError("summatory: x must be finite and > 0");
    if (spec.kind == SummandKind::plain_d) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            long long n = floor_x(xs[i]);
            double v = static_cast<double>(divisor_summatory_int(n));
            if (n >= 1 && primed.weight(xs[i], n) != 1.0) v -= 0.5 * static_cast<double>(d(n));
            out[i] = v;
        }
        return out;
    }
    std::vector<std::size_t> order(xs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
    long long n_max = xs.empty() ? 0 : floor_x(xs[order.back()]);

    std::size_t next = 0;
    CompensatedSum re, im;
    auto flush_upto = [&](long long n, cplx last) {
        // emit all x with floor(x) == n
        while (next < order.size() && floor_x(xs[order[next]]) == n) {
            double x = xs[order[next]];
            cplx v{re.value(), im.value()};
            if (n >= 1 && primed.weight(x, n) != 1.0) v -= 0.5 * last;
            out[order[next]] = v;
            ++next;
        }
    };
    flush_upto(0, {0, 0});
    auto consume = [&](long long n, const auto& value) {
        cplx v(value);
        re.add(v.real());
        im.add(v.imag());
        flush_upto(n, v);
    };
    if (spec.kind == SummandKind::d_k) {
        const int k = spec.k;
        if (k < 1) throw DomainError("d_k summatory: k must be >= 1");
        stream_multiplicative<double>(n_max, [k](long long, int e) { return static_cast<double>(binom(e + k - 1, k - 1)); }, consume);
    } else {
        TwistedPrimePower pp(spec.twisted);
        stream_multiplicative<cplx>(n_max, pp, consume);
    }
    return out;
}

inline cplx summatory(const SummatorySpec& spec, double x, PrimedSumPolicy primed = {}) { return summatory_at(spec, {x}, primed)[0]; }

// Delta(x) = D(x) - x (log x + 2 gamma - 1)
inline double delta_error(double x)
{
    double dx = summatory(SummatorySpec::plain(), x).real();
    return dx - x * (std::log(x) + 2 * kEulerGamma - 1);
}

struct CircleCount {
    double R;
    double P;
};

// R(x) = primed sum of r2(n) over 0 <= n <= x, P(x) = R(x) - pi x.
inline CircleCount circle_R_and_P(double x)
{
    if (!(x > 0) || !std::isfinite(x)) throw DomainError("circle_R_and_P: x must be finite and > 0");
    long long n = floor_x(x);
    long long count = 0;
    long long r = isqrt(n);
    for (long long a = -r; a <= r; ++a) count += 2 * isqrt(n - a * a) + 1;
    double R = static_cast<double>(count);
    if (PrimedSumPolicy::is_integer(x)) R -= 0.5 * static_cast<double>(r2(n));
    return {R, R - std::numbers::pi * x};
}

// Table of d(n) for 1 <= n <= n_max (index 0 unused).
inline std::vector<long long> divisor_table(long long n_max)
{
    std::vector<long long> t(static_cast<std::size_t>(std::max<long long>(n_max, 0) + 1), 0);
    for (long long k = 1; k <= n_max; ++k)
        for (long long m = k; m <= n_max; m += k) ++t[m];
    return t;
}

// Table of r2(n) for 0 <= n <= n_max by lattice enumeration.
inline std::vector<long long> r2_table(long long n_max)
{
    std::vector<long long> t(static_cast<std::size_t>(std::max<long long>(n_max, 0) + 1), 0);
    long long r = isqrt(n_max);
    for (long long a = -r; a <= r; ++a)
        for (long long b = -r; b <= r; ++b) {
            long long s = a * a + b * b;
            if (s <= n_max) ++t[s];
        }
    return t;
}

// ---------------------------------------------------------------- trigonometric sums

enum class TrigKind { CC, CS, SS, FLOOR_SIN, FLOOR_COS, ENTRY1_LHS, ENTRY2_LHS, BI_LHS, TI_LHS, TT_LHS, LATTICE_QQ };

inline const char* to_string(TrigKind k)
{
    switch (k) {
    case TrigKind::CC: return "CC";
    case TrigKind::CS: return "CS";
    case TrigKind::SS: return "SS";
    case TrigKind::FLOOR_SIN: return "FLOOR_SIN";
    case TrigKind::FLOOR_COS: return "FLOOR_COS";
    case TrigKind::ENTRY1_LHS: return "ENTRY1_LHS";
    case TrigKind::ENTRY2_LHS: return "ENTRY2_LHS";
    case TrigKind::BI_LHS: return "BI_LHS";
    case TrigKind::TI_LHS: return "TI_LHS";
    case TrigKind::TT_LHS: return "TT_LHS";
    case TrigKind::LATTICE_QQ: return "LATTICE_QQ";
    }
    return "?";
}

// A phase in (0,1), either an exact fraction a/p or a real number.
struct Phase {
    long long num = 0;
    long long den = 0;  // 0 means real
    double real = 0.0;

    static Phase fraction(long long a, long long p) { return {a, p, 0.0}; }
    static Phase of(double t) { return {0, 0, t}; }
    [[nodiscard]] bool is_fraction() const { return den != 0; }
    [[nodiscard]] double value() const { return is_fraction() ? static_cast<double>(num) / static_cast<double>(den) : real; }

    // 2 pi n * phase reduced mod 2 pi before calling sin/cos
    [[nodiscard]] double angle(long long n) const
    {
        if (is_fraction()) return 2 * std::numbers::pi * static_cast<double>(chars::mod(n * num, den)) / static_cast<double>(den);
        double t = static_cast<double>(n) * real;
        return 2 * std::numbers::pi * (t - std::floor(t));
    }
};

// Phase roles: for CC/CS/SS `first` = a/p pairs with n and `second` = b/q pairs with m,
// e.g. CC = sum' cos(2 pi n a/p) cos(2 pi m b/q). For BI/TI/TT `first` = sigma pairs
// with m and `second` = theta pairs with n. FLOOR_* and ENTRY* use `first` only.
struct TrigSumSpec {
    TrigKind kind = TrigKind::CC;
    Phase first;
    Phase second;
    double x = 0.0;
    double rho = 0.0;  // Riesz weight (x^2 - (mn)^2)^rho, SS only

    void validate() const
    {
        if (!(x > 0) || !std::isfinite(x)) throw ValidationError("trig sum: x must be finite and > 0");
        if (!(rho >= 0) || !std::isfinite(rho)) throw ValidationError("trig sum: rho must be finite and >= 0");
        if (rho != 0 && kind != TrigKind::SS) throw ValidationError("trig sum: Riesz weight only supported for SS");
        auto check = [](const Phase& ph, const char* which) {
            if (ph.is_fraction()) {
                if (ph.den < 2 || ph.num <= 0 || ph.num >= ph.den || chars::gcd(ph.num, ph.den) != 1)
                    throw ValidationError(std::string("trig sum: ") + which + " phase must be a reduced fraction a/p in (0,1)");
            } else if (!(ph.real > 0 && ph.real < 1)) {
                throw ValidationError(std::string("trig sum: ") + which + " phase must lie in (0,1)");
            }
        };
        switch (kind) {
        case TrigKind::LATTICE_QQ: break;
        case TrigKind::FLOOR_SIN:
        case TrigKind::FLOOR_COS:
        case TrigKind::ENTRY1_LHS:
        case TrigKind::ENTRY2_LHS: check(first, "first"); break;
        default:
            check(first, "first");
            check(second, "second");
        }
    }
};

namespace detail {
// sum' over m n <= x of f(m) g(n), halving mn = x when x is an integer.
template <typename F, typename G>
double primed_double_sum(double x, F&& f, G&& g)
{
    const long long X = floor_x(x);
    const bool integral = PrimedSumPolicy::is_integer(x);
    std::vector<double> gv(static_cast<std::size_t>(X + 1), 0.0), prefix(static_cast<std::size_t>(X + 1), 0.0);
    CompensatedSum acc;
    for (long long n = 1; n <= X; ++n) {
        gv[n] = g(n);
        acc.add(gv[n]);
        prefix[n] = acc.value();
    }
    CompensatedSum s;
    for (long long m = 1; m <= X; ++m) {
        const double fm = f(m);
        if (fm == 0.0) continue;
        const long long nmax = X / m;
        double r = prefix[nmax];
        if (integral && X % m == 0) r -= 0.5 * gv[nmax];
        s.add(fm * r);
    }
    return s.value();
}
}  // namespace detail

inline double trig_sum(const TrigSumSpec& spec)
{
    spec.validate();
    const double x = spec.x;
    const Phase a = spec.first, b = spec.second;
    auto one = [](long long) { return 1.0; };
    switch (spec.kind) {
    case TrigKind::CC:
        return detail::primed_double_sum(x, [&](long long m) { return std::cos(b.angle(m)); }, [&](long long n) { return std::cos(a.angle(n)); });
    case TrigKind::CS:
        return detail::primed_double_sum(x, [&](long long m) { return std::sin(b.angle(m)); }, [&](long long n) { return std::cos(a.angle(n)); });
    case TrigKind::SS: {
        if (spec.rho == 0)
            return detail::primed_double_sum(
                x, [&](long long m) { return m * std::sin(b.angle(m)); }, [&](long long n) { return n * std::sin(a.angle(n)); });
        // Riesz weight depends on the product, so enumerate directly
        const long long X = floor_x(x);
        CompensatedSum s;
        for (long long m = 1; m <= X; ++m)
            for (long long n = 1; m * n <= X; ++n) {
                double N = static_cast<double>(m * n);
                s.add(N * std::sin(a.angle(n)) * std::sin(b.angle(m)) * std::pow(x * x - N * N, spec.rho) * PrimedSumPolicy{}.weight(x, m * n));
            }
        return s.value();
    }
    case TrigKind::FLOOR_SIN:
    case TrigKind::ENTRY1_LHS: return detail::primed_double_sum(x, one, [&](long long n) { return std::sin(a.angle(n)); });
    case TrigKind::FLOOR_COS:
    case TrigKind::ENTRY2_LHS: return detail::primed_double_sum(x, one, [&](long long n) { return std::cos(a.angle(n)); });
    case TrigKind::BI_LHS:
        return detail::primed_double_sum(x, [&](long long m) { return std::cos(a.angle(m)); }, [&](long long n) { return std::sin(b.angle(n)); });
    case TrigKind::TI_LHS:
        return detail::primed_double_sum(x, [&](long long m) { return std::cos(a.angle(m)); }, [&](long long n) { return std::cos(b.angle(n)); });
    case TrigKind::TT_LHS:
        return detail::primed_double_sum(
            x, [&](long long m) { return m * std::sin(a.angle(m)); }, [&](long long n) { return n * std::sin(b.angle(n)); });
    case TrigKind::LATTICE_QQ: {
        // sum' over (2j+1)(2k+1) <= x of (-1)^{j+k} (2j+1)(2k+1)
        auto f = [](long long m) { return (m % 2 == 0) ? 0.0 : static_cast<double>(m) * ((m % 4 == 1) ? 1.0 : -1.0); };
        return detail::primed_double_sum(x, f, f);
    }
    }
    throw ValidationError("trig sum: unknown kind");
}

// ---------------------------------------------------------------- exponents

// theta = (A delta + rho (2A - 1) - 1/2) / (2A)
inline Rational cn_theta(Rational A, Rational delta, Rational rho)
{
    if (A <= Rational(0)) throw DomainError("cn_theta: A must be > 0");
    return (A * delta + rho * (Rational(2) * A - Rational(1)) - Rational(1, 2)) / (Rational(2) * A);
}

struct ExponentPair {
    Rational omega_exp;
    Rational bigO_exp;
};

// Omega and O exponents for the k-fold sine sums: A = k/2, delta = 3 (so A delta = 3k/2), rho = 0.
// The O exponent balances 2 - 1/k - eta against delta/2 - 1/(4A) + 2 A u eta with
// u = beta - delta/2 - 1/(4A), beta = 2.
inline ExponentPair cn_exponents(int k)
{
    if (k < 1) throw DomainError("cn_exponents: k must be >= 1");
    const Rational A(k, 2), delta(3), beta(2);
    const Rational omega = cn_theta(A, delta, Rational(0));
    const Rational inv4A = Rational(1) / (Rational(4) * A);
    const Rational u = beta - delta / Rational(2) - inv4A;
    const Rational lhs0 = Rational(2) - Rational(1, k);
    const Rational rhs0 = delta / Rational(2) - inv4A;
    const Rational slope = Rational(2) * A * u;
    const Rational eta = (lhs0 - rhs0) / (slope + Rational(1));
    return {omega, lhs0 - eta};
}

}  // namespace trigbessel::arith
