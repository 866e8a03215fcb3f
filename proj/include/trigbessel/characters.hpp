#pragma once

#include <complex>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "trigbessel/error.hpp"

namespace trigbessel::chars {

using cplx = std::complex<double>;

enum class Parity { even, odd };

inline bool is_prime(long long n)
{
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline long long mod(long long a, long long q)
{
    long long r = a % q;
    return r < 0 ? r + q : r;
}

inline long long gcd(long long a, long long b)
{
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) {
        long long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Smallest primitive root of a prime q.
inline int primitive_root(int q)
{
    if (!is_prime(q)) throw UnsupportedError("primitive_root: modulus " + std::to_string(q) + " is not prime");
    if (q == 2) return 1;
    std::vector<int> factors;
    int m = q - 1;
    for (int d = 2; d * d <= m; ++d) {
        if (m % d == 0) {
            factors.push_back(d);
            while (m % d == 0) m /= d;
        }
    }
    if (m > 1) factors.push_back(m);
    auto powmod = [q](long long b, long long e) {
        long long r = 1;
        b %= q;
        while (e) {
            if (e & 1) r = r * b % q;
            b = b * b % q;
            e >>= 1;
        }
        return r;
    };
    for (int g = 2; g < q; ++g) {
        bool ok = true;
        for (int f : factors)
            if (powmod(g, (q - 1) / f) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw UnsupportedError("primitive_root: none found");
}

// Discrete-log and root-of-unity tables for one prime modulus. Immutable once built.
class CharacterTable {
public:
    explicit CharacterTable(int q) : q_(q), g_(primitive_root(q)), dlog_(q, -1), roots_(q - 1)
    {
        long long v = 1;
        for (int k = 0; k < q - 1; ++k) {
            dlog_[v] = k;
            v = v * g_ % q;
        }
        for (int k = 0; k < q - 1; ++k) roots_[k] = std::polar(1.0, 2 * std::numbers::pi * k / (q - 1));
    }

    [[nodiscard]] int modulus() const { return q_; }
    [[nodiscard]] int generator() const { return g_; }
    // -1 when q | n
    [[nodiscard]] int dlog(long long n) const { return dlog_[mod(n, q_)]; }
    [[nodiscard]] const cplx& root(int k) const { return roots_[k]; }

private:
    int q_;
    int g_;
    std::vector<int> dlog_;
    std::vector<cplx> roots_;
};

class DirichletCharacter {
public:
    DirichletCharacter(std::shared_ptr<const CharacterTable> table, int index) : table_(std::move(table)), index_(index)
    {
        const int phi = table_->modulus() - 1;
        if (index_ < 0 || index_ >= phi) throw ValidationError("character index out of range");
    }

    [[nodiscard]] int modulus() const { return table_->modulus(); }
    [[nodiscard]] int index() const { return index_; }
    // chi(-1) = exp(pi i index), so odd iff the index is odd.
    [[nodiscard]] Parity parity() const { return index_ % 2 == 0 ? Parity::even : Parity::odd; }
    [[nodiscard]] bool is_odd() const { return parity() == Parity::odd; }
    [[nodiscard]] bool is_principal() const { return index_ == 0; }
    [[nodiscard]] const CharacterTable& table() const { return *table_; }

    [[nodiscard]] cplx operator()(long long n) const
    {
        int l = table_->dlog(n);
        if (l < 0) return {0.0, 0.0};
        const int phi = table_->modulus() - 1;
        return table_->root(static_cast<int>((static_cast<long long>(index_) * l) % phi));
    }

    [[nodiscard]] DirichletCharacter conj() const
    {
        const int phi = table_->modulus() - 1;
        return DirichletCharacter(table_, (phi - index_) % phi);
    }

private:
    std::shared_ptr<const CharacterTable> table_;
    int index_;
};

struct GaussSumValue {
    double re = 0.0;
    double im = 0.0;
    int modulus = 0;
    [[nodiscard]] cplx value() const { return {re, im}; }
};

// All q-1 characters mod a prime q, ordered by index (index 0 is principal).
inline std::vector<DirichletCharacter> enumerate_characters(int q)
{
    if (q < 3 || !is_prime(q)) throw UnsupportedError("enumerate_characters: modulus " + std::to_string(q) + " must be an odd prime");
    auto table = std::make_shared<const CharacterTable>(q);
    std::vector<DirichletCharacter> out;
    out.reserve(q - 1);
    for (int j = 0; j < q - 1; ++j) out.emplace_back(table, j);
    return out;
}

inline std::vector<DirichletCharacter> characters_with_parity(int q, Parity p)
{
    std::vector<DirichletCharacter> out;
    for (auto& c : enumerate_characters(q))
        if (c.parity() == p) out.push_back(c);
    return out;
}

// tau(chi) = sum_{n=1}^{q-1} chi(n) e^{2 pi i n / q}; for the principal character this is -1.
inline GaussSumValue gauss_sum_unchecked(const DirichletCharacter& chi)
{
    const int q = chi.modulus();
    cplx s{0.0, 0.0};
    for (int n = 1; n < q; ++n) s += chi(n) * std::polar(1.0, 2 * std::numbers::pi * n / q);
    return {s.real(), s.imag(), q};
}

inline GaussSumValue gauss_sum(const DirichletCharacter& chi)
{
    if (chi.is_principal()) throw ContractViolation("gauss_sum: principal character");
    return gauss_sum_unchecked(chi);
}

// (1/(i phi(q))) sum_{chi odd} chi(a) tau(conj chi) chi(n)
inline cplx sin_as_char_sum(long long a, int q, long long n)
{
    if (gcd(a, q) != 1) throw DomainError("sin_as_char_sum: gcd(a, q) must be 1");
    cplx s{0.0, 0.0};
    for (auto& chi : characters_with_parity(q, Parity::odd)) s += chi(a) * gauss_sum(chi.conj()).value() * chi(n);
    return s / cplx(0.0, q - 1.0);
}

// sum_{chi odd} chi(a) conj(chi(b))
inline cplx odd_char_orthogonality(long long a, long long b, int q)
{
    cplx s{0.0, 0.0};
    for (auto& chi : characters_with_parity(q, Parity::odd)) s += chi(a) * std::conj(chi(b));
    return s;
}

}  // namespace trigbessel::chars
