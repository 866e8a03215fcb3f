#pragma once

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <string>

#include "trigbessel/error.hpp"

namespace trigbessel::specfun {

inline constexpr double kEulerGamma = 0.57721566490153286061;
inline constexpr double kPi = std::numbers::pi;

// Stores 2*nu so integer and half-integer orders share one representation.
struct BesselOrder {
    int twice_order = 0;

    static constexpr BesselOrder integer(int n) { return {2 * n}; }
    static constexpr BesselOrder half(int twice) { return {twice}; }
    [[nodiscard]] constexpr bool is_integer() const { return twice_order % 2 == 0; }
    [[nodiscard]] constexpr int integer_value() const { return twice_order / 2; }
    [[nodiscard]] constexpr double nu() const { return twice_order / 2.0; }
};

enum class Method { power_series, asymptotic, recurrence };

inline const char* to_string(Method m)
{
    switch (m) {
    case Method::power_series: return "power_series";
    case Method::asymptotic: return "asymptotic";
    case Method::recurrence: return "recurrence";
    }
    return "?";
}

struct EvalReport {
    double value = 0.0;
    double est_abs_error = 0.0;
    Method method = Method::power_series;
};

enum class DerivKind { J, Icomb };

// Branch switch points. Overlap windows used by the consistency tests:
// J/Y series vs Hankel on [16, 24], K series vs asymptotic on [10, 16].
inline constexpr double kJYSwitch = 20.0;
inline constexpr double kKSwitch = 12.0;

namespace detail {

inline void require_positive(double z, const char* what)
{
    if (!(z > 0.0) || !std::isfinite(z)) throw DomainError(std::string(what) + ": argument must be finite and > 0");
}

inline double harmonic(int k)
{
    long double h = 0;
    for (int j = 1; j <= k; ++j) h += 1.0L / j;
    return static_cast<double>(h);
}

inline long double factorial(int n)
{
    long double f = 1;
    for (int j = 2; j <= n; ++j) f *= j;
    return f;
}

// Ascending series sum_k (-1)^k (z/2)^(2k+n) / (k! (k+n)!) in long double.
inline EvalReport j_series_nonneg(int n, double z)
{
    const long double h = static_cast<long double>(z) / 2;
    const long double q = h * h;
    long double term = std::pow(h, static_cast<long double>(n)) / factorial(n);
    long double sum = term, abs_sum = std::fabs(term);
    for (int k = 1; k < 500; ++k) {
        term *= -q / (static_cast<long double>(k) * (k + n));
        sum += term;
        abs_sum += std::fabs(term);
        if (std::fabs(term) <= 1e-21L * abs_sum) break;
    }
    double v = static_cast<double>(sum);
    double est = static_cast<double>(8 * LDBL_EPSILON * abs_sum) + 2 * DBL_EPSILON * std::fabs(v);
    return {v, est, Method::power_series};
}

// Hankel P, Q sums for order nu at z, truncated at the smallest term.
struct HankelPQ {
    double p = 1.0, q = 0.0, tail = 0.0;
};

inline HankelPQ hankel_pq(double nu, double z)
{
    const double mu = 4 * nu * nu;
    HankelPQ r;
    double t = 1.0, prev = 1.0;
    r.tail = 0.0;
    for (int k = 1; k < 200; ++k) {
        double f = (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k * z);
        double next = t * f;
        if (next == 0.0) {
            r.tail = 0.0;
            break;
        }
        if (std::fabs(next) > std::fabs(prev) && k > 2) {
            r.tail = std::fabs(next);
            break;
        }
        t = next;
        switch (k % 4) {
        case 0: r.p += t; break;
        case 1: r.q += t; break;
        case 2: r.p -= t; break;
        case 3: r.q -= t; break;
        }
        prev = t;
        if (std::fabs(t) < 1e-18) {
            r.tail = std::fabs(t);
            break;
        }
    }
    return r;
}

// Sum_k a_k(nu) / z^k (no alternation), used by the K asymptotic.
inline HankelPQ k_asym_sum(double nu, double z)
{
    const double mu = 4 * nu * nu;
    HankelPQ r;
    double t = 1.0;
    for (int k = 1; k < 200; ++k) {
        double next = t * (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k * z);
        if (next == 0.0) break;
        if (std::fabs(next) > std::fabs(t) && k > 2) {
            r.tail = std::fabs(next);
            break;
        }
        t = next;
        r.p += t;
        if (std::fabs(t) < 1e-18) {
            r.tail = std::fabs(t);
            break;
        }
    }
    return r;
}

// J0, J1, Y0, Y1 at one argument sharing a single sincos in the asymptotic regime.
struct Cyl01 {
    double j0, j1, y0, y1;
    double err;
};

}  // namespace detail

// Branch entry points, public so the overlap window can be tested.
inline EvalReport j_series(int n, double z)
{
    detail::require_positive(z, "j_series");
    if (n < 0) {
        auto r = detail::j_series_nonneg(-n, z);
        if (n % 2 != 0) r.value = -r.value;
        return r;
    }
    return detail::j_series_nonneg(n, z);
}

inline EvalReport j_hankel(double nu, double z)
{
    detail::require_positive(z, "j_hankel");
    auto pq = detail::hankel_pq(nu, z);
    const double w = z - nu * kPi / 2 - kPi / 4;
    const double amp = std::sqrt(2.0 / (kPi * z));
    double v = amp * (pq.p * std::cos(w) - pq.q * std::sin(w));
    double est = amp * pq.tail + 4 * DBL_EPSILON * (amp + std::fabs(v)) + amp * z * DBL_EPSILON;
    return {v, est, Method::asymptotic};
}

inline EvalReport y_hankel(double nu, double z)
{
    detail::require_positive(z, "y_hankel");
    auto pq = detail::hankel_pq(nu, z);
    const double w = z - nu * kPi / 2 - kPi / 4;
    const double amp = std::sqrt(2.0 / (kPi * z));
    double v = amp * (pq.p * std::sin(w) + pq.q * std::cos(w));
    double est = amp * pq.tail + 4 * DBL_EPSILON * (amp + std::fabs(v)) + amp * z * DBL_EPSILON;
    return {v, est, Method::asymptotic};
}

// Limit-form log series for integer n >= 0.
inline EvalReport y_series(int n, double z)
{
    detail::require_positive(z, "y_series");
    if (n < 0) throw UnsupportedError("y_series: negative order, use bessel_y");
    using LD = long double;
    const LD h = static_cast<LD>(z) / 2, q = h * h;
    const LD g = kEulerGamma;
    LD finite = 0, abs_sum = 0;
    for (int k = 0; k < n; ++k) {
        LD t = detail::factorial(n - k - 1) / detail::factorial(k) * std::pow(q, static_cast<LD>(k));
        finite += t;
    }
    finite *= -std::pow(h, static_cast<LD>(-n)) / std::numbers::pi_v<LD>;
    abs_sum += std::fabs(finite);

    auto jn = detail::j_series_nonneg(n, z);
    LD log_part = 2 / std::numbers::pi_v<LD> * std::log(h) * jn.value;
    abs_sum += std::fabs(log_part);

    LD term = 1 / detail::factorial(n);  // (-q)^k / (k! (n+k)!)
    LD hk = 0, hnk = detail::harmonic(n);
    LD series = 0, series_abs = 0;
    for (int k = 0; k < 500; ++k) {
        if (k > 0) {
            term *= -q / (static_cast<LD>(k) * (n + k));
            hk += 1.0L / k;
            hnk += 1.0L / (n + k);
        }
        LD t = (-2 * g + hk + hnk) * term;
        series += t;
        series_abs += std::fabs(t);
        if (k > 2 && std::fabs(t) <= 1e-21L * series_abs) break;
    }
    LD pre = std::pow(h, static_cast<LD>(n)) / std::numbers::pi_v<LD>;
    LD tail = -pre * series;
    abs_sum += pre * series_abs;
    double v = static_cast<double>(finite + log_part + tail);
    double est = static_cast<double>(8 * LDBL_EPSILON * abs_sum) + 2 * DBL_EPSILON * std::fabs(v) + jn.est_abs_error;
    return {v, est, Method::power_series};
}

inline EvalReport k_series(int n, double z)
{
    detail::require_positive(z, "k_series");
    if (n < 0) n = -n;
    using LD = long double;
    const LD h = static_cast<LD>(z) / 2, q = h * h;
    const LD g = kEulerGamma;
    LD finite = 0;
    for (int k = 0; k < n; ++k) {
        LD t = detail::factorial(n - k - 1) / detail::factorial(k) * std::pow(-q, static_cast<LD>(k));
        finite += t;
    }
    finite *= 0.5L * std::pow(h, static_cast<LD>(-n));

    // modified I_n(z) = sum q^k (h^n) / (k!(n+k)!)
    LD iterm = std::pow(h, static_cast<LD>(n)) / detail::factorial(n), isum = iterm;
    for (int k = 1; k < 500; ++k) {
        iterm *= q / (static_cast<LD>(k) * (k + n));
        isum += iterm;
        if (iterm <= 1e-21L * isum) break;
    }
    LD sign = (n % 2 == 0) ? 1 : -1;
    LD log_part = -sign * std::log(h) * isum;

    LD term = 1 / detail::factorial(n);
    LD hk = 0, hnk = detail::harmonic(n), series = 0;
    for (int k = 0; k < 500; ++k) {
        if (k > 0) {
            term *= q / (static_cast<LD>(k) * (n + k));
            hk += 1.0L / k;
            hnk += 1.0L / (n + k);
        }
        LD t = (-2 * g + hk + hnk) * term;
        series += t;
        if (k > 2 && std::fabs(t) <= 1e-21L * std::fabs(series)) break;
    }
    LD tail = sign * 0.5L * std::pow(h, static_cast<LD>(n)) * series;
    LD abs_sum = std::fabs(finite) + std::fabs(log_part) + std::fabs(tail);
    double v = static_cast<double>(finite + log_part + tail);
    double est = static_cast<double>(8 * LDBL_EPSILON * abs_sum) + 2 * DBL_EPSILON * std::fabs(v);
    return {v, est, Method::power_series};
}

inline EvalReport k_asymptotic(int n, double z)
{
    detail::require_positive(z, "k_asymptotic");
    auto s = detail::k_asym_sum(static_cast<double>(n), z);
    const double amp = std::sqrt(kPi / (2 * z)) * std::exp(-z);
    double v = amp * s.p;
    double est = amp * s.tail + 4 * DBL_EPSILON * std::fabs(v) + std::fabs(v) * z * DBL_EPSILON;
    return {v, est, Method::asymptotic};
}

namespace detail {

inline Cyl01 cyl01(double z)
{
    Cyl01 r{};
    if (z >= kJYSwitch) {
        auto p0 = hankel_pq(0.0, z);
        auto p1 = hankel_pq(1.0, z);
        const double w = z - kPi / 4;
        const double s = std::sin(w), c = std::cos(w);
        const double amp = std::sqrt(2.0 / (kPi * z));
        // omega_1 = omega_0 - pi/2: cos -> sin, sin -> -cos
        r.j0 = amp * (p0.p * c - p0.q * s);
        r.y0 = amp * (p0.p * s + p0.q * c);
        r.j1 = amp * (p1.p * s + p1.q * c);
        r.y1 = amp * (-p1.p * c + p1.q * s);
        r.err = amp * (std::max(p0.tail, p1.tail) + z * DBL_EPSILON + 4 * DBL_EPSILON);
    } else {
        auto j0 = j_series_nonneg(0, z), j1 = j_series_nonneg(1, z);
        auto y0 = y_series(0, z), y1 = y_series(1, z);
        r.j0 = j0.value;
        r.j1 = j1.value;
        r.y0 = y0.value;
        r.y1 = y1.value;
        r.err = std::max(std::max(j0.est_abs_error, j1.est_abs_error), std::max(y0.est_abs_error, y1.est_abs_error));
    }
    return r;
}

struct K01 {
    double k0, k1, err;
};

inline K01 k01(double z)
{
    if (z > 745.0) return {0.0, 0.0, 0.0};
    if (z >= kKSwitch) {
        auto s0 = k_asym_sum(0.0, z), s1 = k_asym_sum(1.0, z);
        const double amp = std::sqrt(kPi / (2 * z)) * std::exp(-z);
        double k0 = amp * s0.p, k1 = amp * s1.p;
        return {k0, k1, amp * std::max(s0.tail, s1.tail) + (4 + z) * DBL_EPSILON * k1};
    }
    auto a = k_series(0, z), b = k_series(1, z);
    return {a.value, b.value, std::max(a.est_abs_error, b.est_abs_error)};
}

// Fast value-only kernels for the double-series engines.
inline double j1_value(double z)
{
    if (z >= kJYSwitch) {
        auto p1 = hankel_pq(1.0, z);
        const double w = z - 0.75 * kPi;
        return std::sqrt(2.0 / (kPi * z)) * (p1.p * std::cos(w) - p1.q * std::sin(w));
    }
    return j_series_nonneg(1, z).value;
}

inline double icomb1_value(double z)
{
    double y1;
    if (z >= kJYSwitch) {
        auto p1 = hankel_pq(1.0, z);
        const double w = z - 0.75 * kPi;
        y1 = std::sqrt(2.0 / (kPi * z)) * (p1.p * std::sin(w) + p1.q * std::cos(w));
    } else {
        y1 = y_series(1, z).value;
    }
    return -y1 - 2.0 / kPi * k01(z).k1;
}

// T_{3/2}(u^2/4) expanded in Y0, Y1, K0, K1 at u.
inline double t32_of_u(double u, const Cyl01& c, const K01& k)
{
    const double iu = 1.0 / u, iu2 = iu * iu;
    return -4 * iu2 * c.y1 - 8 / kPi * iu2 * k.k1 + 2 * iu * c.y0 - 4 / kPi * iu * k.k0 + c.y1 - 2 / kPi * k.k1;
}

inline double t32_value_u(double u) { return t32_of_u(u, cyl01(u), k01(u)); }

}  // namespace detail

// ---------------------------------------------------------------------------

inline EvalReport bessel_j(BesselOrder order, double z)
{
    detail::require_positive(z, "bessel_j");
    if (!order.is_integer()) {
        const double amp = std::sqrt(2.0 / (kPi * z));
        const double s = std::sin(z), c = std::cos(z);
        double v;
        switch (order.twice_order) {
        case 1: v = amp * s; break;
        case -1: v = amp * c; break;
        case 3: v = amp * (s / z - c); break;
        case -3: v = amp * (-c / z - s); break;
        default: throw UnsupportedError("bessel_j: half-integer order must be in {-3/2,-1/2,1/2,3/2}");
        }
        double est = 4 * DBL_EPSILON * (std::fabs(v) + amp * (1 + 1 / z)) + amp * z * DBL_EPSILON;
        return {v, est, Method::power_series};
    }
    int n = order.integer_value();
    if (n < 0) {
        auto r = bessel_j(BesselOrder::integer(-n), z);
        if (n % 2 != 0) r.value = -r.value;
        return r;
    }
    if (z < kJYSwitch || 2 * n >= z) return detail::j_series_nonneg(n, z);
    if (n <= 1) return j_hankel(n, z);
    auto a = j_hankel(0, z), b = j_hankel(1, z);
    double e0 = a.est_abs_error, e1 = b.est_abs_error;
    double f0 = a.value, f1 = b.value;
    for (int k = 1; k < n; ++k) {
        double f2 = 2.0 * k / z * f1 - f0;
        double e2 = 2.0 * k / z * e1 + e0;
        f0 = f1;
        f1 = f2;
        e0 = e1;
        e1 = e2;
    }
    return {f1, e1 + 2 * DBL_EPSILON * std::fabs(f1), Method::recurrence};
}

inline EvalReport bessel_j(int n, double z) { return bessel_j(BesselOrder::integer(n), z); }

inline EvalReport bessel_y(int n, double z)
{
    detail::require_positive(z, "bessel_y");
    if (n < 0) {
        auto r = bessel_y(-n, z);
        if (n % 2 != 0) r.value = -r.value;
        return r;
    }
    auto base = [&](int k) { return z >= kJYSwitch ? y_hankel(k, z) : y_series(k, z); };
    if (n <= 1) return base(n);
    auto a = base(0), b = base(1);
    double f0 = a.value, f1 = b.value, e0 = a.est_abs_error, e1 = b.est_abs_error;
    for (int k = 1; k < n; ++k) {
        double f2 = 2.0 * k / z * f1 - f0;
        double e2 = 2.0 * k / z * e1 + e0;
        f0 = f1;
        f1 = f2;
        e0 = e1;
        e1 = e2;
    }
    return {f1, e1 + 2 * DBL_EPSILON * std::fabs(f1), Method::recurrence};
}

inline EvalReport bessel_k_mod(int n, double z)
{
    detail::require_positive(z, "bessel_k_mod");
    if (n < 0) n = -n;
    auto base = [&](int k) -> EvalReport {
        if (z > 745.0) return {0.0, DBL_MIN, Method::asymptotic};
        return z >= kKSwitch ? k_asymptotic(k, z) : k_series(k, z);
    };
    if (n <= 1) return base(n);
    auto a = base(0), b = base(1);
    double f0 = a.value, f1 = b.value, e0 = a.est_abs_error, e1 = b.est_abs_error;
    for (int k = 1; k < n; ++k) {
        double f2 = f0 + 2.0 * k / z * f1;
        double e2 = e0 + 2.0 * k / z * e1;
        f0 = f1;
        f1 = f2;
        e0 = e1;
        e1 = e2;
    }
    return {f1, e1 + 2 * DBL_EPSILON * std::fabs(f1), Method::recurrence};
}

// -Y_n(z) - (2/pi) K_n(z)
inline EvalReport i_comb(int n, double z)
{
    auto y = bessel_y(n, z);
    auto k = bessel_k_mod(n, z);
    return {-y.value - 2.0 / kPi * k.value, y.est_abs_error + 2.0 / kPi * k.est_abs_error + DBL_EPSILON * std::fabs(y.value),
            y.method};
}

inline EvalReport d_bessel_y(int n, double z)
{
    auto a = bessel_y(n - 1, z), b = bessel_y(n + 1, z);
    return {(a.value - b.value) / 2, (a.est_abs_error + b.est_abs_error) / 2, Method::recurrence};
}

inline EvalReport d_bessel_k(int n, double z)
{
    auto a = bessel_k_mod(n - 1, z), b = bessel_k_mod(n + 1, z);
    return {-(a.value + b.value) / 2, (a.est_abs_error + b.est_abs_error) / 2, Method::recurrence};
}

// Derivative from the two-term recurrences. For the I combination the K part
// enters with K' = -(K_{n-1} + K_{n+1})/2, so I' is not (I_{n-1} + I_{n+1})/2.
inline EvalReport d_bessel(DerivKind kind, int n, double z)
{
    if (kind == DerivKind::J) {
        auto a = bessel_j(n - 1, z), b = bessel_j(n + 1, z);
        return {(a.value - b.value) / 2, (a.est_abs_error + b.est_abs_error) / 2, Method::recurrence};
    }
    auto dy = d_bessel_y(n, z), dk = d_bessel_k(n, z);
    return {-dy.value - 2.0 / kPi * dk.value, dy.est_abs_error + 2.0 / kPi * dk.est_abs_error, Method::recurrence};
}

// T_{3/2}(v) through the expanded Y/K form with u = 2 sqrt(v).
inline EvalReport t_three_half(double v)
{
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("t_three_half: v must be finite and > 0");
    const double u = 2 * std::sqrt(v);
    auto y0 = bessel_y(0, u), y1 = bessel_y(1, u);
    auto k0 = bessel_k_mod(0, u), k1 = bessel_k_mod(1, u);
    const double iu = 1 / u, iu2 = iu * iu;
    double val = -4 * iu2 * y1.value - 8 / kPi * iu2 * k1.value + 2 * iu * y0.value - 4 / kPi * iu * k0.value + y1.value -
                 2 / kPi * k1.value;
    double est = (4 * iu2 + 1) * y1.est_abs_error + (8 / kPi * iu2 + 2 / kPi) * k1.est_abs_error + 2 * iu * y0.est_abs_error +
                 4 / kPi * iu * k0.est_abs_error + 4 * DBL_EPSILON * (std::fabs(val) + std::fabs(y1.value));
    return {val, est, y1.method};
}

// Same quantity composed as (2/u^2) I1(u) - (2/u) I1'(u) + Y1(u) - (2/pi) K1(u).
inline EvalReport t_three_half_composed(double v)
{
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("t_three_half_composed: v must be finite and > 0");
    const double u = 2 * std::sqrt(v);
    auto i1 = i_comb(1, u);
    auto di1 = d_bessel(DerivKind::Icomb, 1, u);
    auto y1 = bessel_y(1, u);
    auto k1 = bessel_k_mod(1, u);
    double val = 2 / (u * u) * i1.value - 2 / u * di1.value + y1.value - 2 / kPi * k1.value;
    double est = 2 / (u * u) * i1.est_abs_error + 2 / u * di1.est_abs_error + y1.est_abs_error + 2 / kPi * k1.est_abs_error +
                 4 * DBL_EPSILON * std::fabs(val);
    return {val, est, Method::recurrence};
}

}  // namespace trigbessel::specfun
