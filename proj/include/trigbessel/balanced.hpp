#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "trigbessel/arith_sums.hpp"
#include "trigbessel/error.hpp"
#include "trigbessel/rational.hpp"
#include "trigbessel/specfun.hpp"

namespace trigbessel::balanced {

enum class BesselKind { J, Y, Kmod, Icomb, T };
enum class ShiftSign { plus, minus };  // plus: m + sigma, minus: m + 1 - sigma

inline const char* to_string(BesselKind k)
{
    switch (k) {
    case BesselKind::J: return "J";
    case BesselKind::Y: return "Y";
    case BesselKind::Kmod: return "K";
    case BesselKind::Icomb: return "I";
    case BesselKind::T: return "T";
    }
    return "?";
}

inline constexpr int kDefaultMaxOrder = 6;

// coeff * pi^pi_power * sqrt(x)^x_power * B_order(u) / ((m+a)^gamma (n+b)^delta),
// u = 4 pi sqrt((m+a)(n+b)x). For kind T the function is T_{3/2}(u^2/4) and order is unused.
struct CellTerm {
    Rational coeff{1};
    int pi_power = 0;
    int x_power = 0;
    BesselKind kind = BesselKind::J;
    int order = 1;
    Rational gamma{1, 2};
    Rational delta{1, 2};
    ShiftSign sigma_sign = ShiftSign::plus;
    ShiftSign theta_sign = ShiftSign::plus;

    [[nodiscard]] auto key() const
    {
        return std::make_tuple(static_cast<int>(kind), order, gamma, delta, pi_power, x_power, static_cast<int>(sigma_sign),
                               static_cast<int>(theta_sign));
    }
};

struct TermExpansion {
    std::vector<CellTerm> terms;
    Rational main_gamma;
    Rational main_delta;
};

// Sort by key and merge equal keys; zero coefficients are dropped.
inline std::vector<CellTerm> canonical(std::vector<CellTerm> in)
{
    for (auto& t : in) {
        if (t.order < 0 && (t.kind == BesselKind::J || t.kind == BesselKind::Y)) {
            if (t.order % 2 != 0) t.coeff = -t.coeff;
            t.order = -t.order;
        } else if (t.order < 0 && t.kind == BesselKind::Kmod) {
            t.order = -t.order;
        }
    }
    std::sort(in.begin(), in.end(), [](const CellTerm& a, const CellTerm& b) { return a.key() < b.key(); });
    std::vector<CellTerm> out;
    for (auto& t : in) {
        if (!out.empty() && out.back().key() == t.key()) out.back().coeff = out.back().coeff + t.coeff;
        else out.push_back(t);
    }
    std::erase_if(out, [](const CellTerm& t) { return t.coeff == Rational(0); });
    return out;
}

namespace detail {

// Rewrite I and T into Y/K terms sharing the same u.
inline std::vector<CellTerm> lower(const CellTerm& t)
{
    auto with = [&](Rational c, int dpi, int dx, BesselKind k, int ord, Rational dg) {
        CellTerm r = t;
        r.coeff = t.coeff * c;
        r.pi_power += dpi;
        r.x_power += dx;
        r.kind = k;
        r.order = ord;
        r.gamma = t.gamma + dg;
        r.delta = t.delta + dg;
        return r;
    };
    if (t.kind == BesselKind::Icomb)
        return {with(Rational(-1), 0, 0, BesselKind::Y, t.order, 0), with(Rational(-2), -1, 0, BesselKind::Kmod, t.order, 0)};
    if (t.kind == BesselKind::T) {
        // T = -(4/u^2)Y1 - (8/(pi u^2))K1 + (2/u)Y0 - (4/(pi u))K0 + Y1 - (2/pi)K1,
        // 1/u = (1/4) pi^{-1} x^{-1/2} ((m+a)(n+b))^{-1/2}
        const Rational h(1, 2);
        return {with(Rational(-1, 4), -2, -2, BesselKind::Y, 1, 1), with(Rational(-1, 2), -3, -2, BesselKind::Kmod, 1, 1),
                with(Rational(1, 2), -1, -1, BesselKind::Y, 0, h),  with(Rational(-1), -2, -1, BesselKind::Kmod, 0, h),
                with(Rational(1), 0, 0, BesselKind::Y, 1, 0),       with(Rational(-2), -1, 0, BesselKind::Kmod, 1, 0)};
    }
    return {t};
}

// d/d(sigma) when wrt_sigma, else d/d(theta).
inline std::vector<CellTerm> differentiate(const std::vector<CellTerm>& terms, bool wrt_sigma)
{
    std::vector<CellTerm> out;
    for (const auto& orig : terms) {
        for (const auto& t : lower(orig)) {
            const ShiftSign sg = wrt_sigma ? t.sigma_sign : t.theta_sign;
            const Rational chain = sg == ShiftSign::plus ? Rational(1) : Rational(-1);
            const Rational& own = wrt_sigma ? t.gamma : t.delta;
            // power factor
            if (own != Rational(0)) {
                CellTerm r = t;
                r.coeff = -t.coeff * own * chain;
                (wrt_sigma ? r.gamma : r.delta) = own + Rational(1);
                out.push_back(r);
            }
            // Bessel factor: du/d(m+a) = u/(2(m+a)) = 2 pi sqrt(x) (m+a)^{-1/2} (n+b)^{1/2}
            auto bessel = [&](Rational c, int ord) {
                CellTerm r = t;
                r.coeff = t.coeff * c * chain;
                r.pi_power += 1;
                r.x_power += 1;
                r.order = ord;
                if (wrt_sigma) {
                    r.gamma = t.gamma + Rational(1, 2);
                    r.delta = t.delta - Rational(1, 2);
                } else {
                    r.delta = t.delta + Rational(1, 2);
                    r.gamma = t.gamma - Rational(1, 2);
                }
                out.push_back(r);
            };
            if (t.kind == BesselKind::Kmod) {
                bessel(Rational(-1), t.order - 1);
                bessel(Rational(-1), t.order + 1);
            } else {
                bessel(Rational(1), t.order - 1);
                bessel(Rational(-1), t.order + 1);
            }
        }
    }
    return canonical(std::move(out));
}

}  // namespace detail

inline TermExpansion identity_expansion(BesselKind kind, Rational s, Rational w, ShiftSign sigma_sign, ShiftSign theta_sign, int order = 1)
{
    if (kind == BesselKind::J || kind == BesselKind::Y || kind == BesselKind::Kmod || kind == BesselKind::Icomb) {
        if (order < 0) throw UnsupportedError("balanced: negative base order");
    }
    CellTerm t;
    t.kind = kind;
    t.order = kind == BesselKind::T ? 0 : order;
    t.gamma = s;
    t.delta = w;
    t.sigma_sign = sigma_sign;
    t.theta_sign = theta_sign;
    return {{t}, s, w};
}

// Symbolic d^{alpha+beta}/d sigma^alpha d theta^beta of B(u)/((m+a)^s (n+b)^w).
inline TermExpansion expand_mixed_partial(BesselKind kind, int alpha, int beta, Rational s, Rational w, ShiftSign sigma_sign,
                                          ShiftSign theta_sign, int max_order = kDefaultMaxOrder)
{
    if (alpha < 0 || beta < 0) throw DomainError("expand_mixed_partial: negative derivative order");
    if (alpha + beta > max_order) throw UnsupportedError("expand_mixed_partial: alpha + beta exceeds configured maximum");
    if (kind != BesselKind::J && kind != BesselKind::Icomb && kind != BesselKind::T)
        throw UnsupportedError(std::string("expand_mixed_partial: unsupported kind ") + to_string(kind));
    auto e = identity_expansion(kind, s, w, sigma_sign, theta_sign);
    for (int i = 0; i < alpha; ++i) e.terms = detail::differentiate(e.terms, true);
    for (int i = 0; i < beta; ++i) e.terms = detail::differentiate(e.terms, false);
    e.main_gamma = s + Rational(alpha, 2) - Rational(beta, 2);
    e.main_delta = w + Rational(beta, 2) - Rational(alpha, 2);
    return e;
}

// One more sigma (or theta) derivative of an existing expansion.
inline TermExpansion derive(const TermExpansion& e, bool wrt_sigma)
{
    TermExpansion r{detail::differentiate(e.terms, wrt_sigma), e.main_gamma, e.main_delta};
    if (wrt_sigma) {
        r.main_gamma = r.main_gamma + Rational(1, 2);
        r.main_delta = r.main_delta - Rational(1, 2);
    } else {
        r.main_gamma = r.main_gamma - Rational(1, 2);
        r.main_delta = r.main_delta + Rational(1, 2);
    }
    return r;
}

// Conditions of the mixed-derivative convergence theorem.
inline bool mixed_partial_admissible(int alpha, int beta, Rational s, Rational w, bool x_is_integer)
{
    const bool first = Rational(4) * s + Rational(2 * alpha - 2 * beta) > Rational(1);
    const bool second = Rational(4) * w + Rational(2 * beta - 2 * alpha) > Rational(1);
    const bool third = s + w > (x_is_integer ? Rational(25, 26) : Rational(5, 6));
    return first && second && third;
}

inline void check_cell(long long m, long long n, double sigma, double theta, double x)
{
    if (m < 0 || n < 0) throw DomainError("cell: m, n must be >= 0");
    if (!(sigma > 0 && sigma < 1)) throw DomainError("cell: sigma must lie in (0,1)");
    if (!(theta > 0 && theta < 1)) throw DomainError("cell: theta must lie in (0,1)");
    if (!(x > 0) || !std::isfinite(x)) throw DomainError("cell: x must be finite and > 0");
}

inline double evaluate_expansion(const TermExpansion& e, long long m, long long n, double sigma, double theta, double x)
{
    check_cell(m, n, sigma, theta, x);
    namespace sf = specfun;
    std::map<std::pair<int, int>, double> cache;
    double u = 0;
    auto bessel = [&](BesselKind k, int ord) {
        auto key = std::make_pair(static_cast<int>(k), ord);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
        double v = 0;
        switch (k) {
        case BesselKind::J: v = sf::bessel_j(ord, u).value; break;
        case BesselKind::Y: v = sf::bessel_y(ord, u).value; break;
        case BesselKind::Kmod: v = sf::bessel_k_mod(ord, u).value; break;
        case BesselKind::Icomb: v = sf::i_comb(ord, u).value; break;
        case BesselKind::T: v = sf::t_three_half(u * u / 4).value; break;
        }
        cache.emplace(key, v);
        return v;
    };
    CompensatedSum s;
    const double sx = std::sqrt(x);
    for (const auto& t : e.terms) {
        const double A = static_cast<double>(m) + (t.sigma_sign == ShiftSign::plus ? sigma : 1 - sigma);
        const double B = static_cast<double>(n) + (t.theta_sign == ShiftSign::plus ? theta : 1 - theta);
        u = 4 * std::numbers::pi * std::sqrt(A * B * x);
        const double f = t.coeff.to_double() * std::pow(std::numbers::pi, t.pi_power) * std::pow(sx, t.x_power);
        s.add(f * bessel(t.kind, t.order) / (std::pow(A, t.gamma.to_double()) * std::pow(B, t.delta.to_double())));
    }
    return s.value();
}

struct PointwiseCheck {
    double lhs;
    double rhs;
};

// (1/(4 pi^2)) d^2/d sigma d theta [I1(u)/sqrt(AB)] against x T_{3/2}(4 pi^2 A B x)/sqrt(AB).
inline PointwiseCheck verify_k1_pointwise(long long m, long long n, double sigma, double theta, double x)
{
    check_cell(m, n, sigma, theta, x);
    const double pi = std::numbers::pi;
    auto e = expand_mixed_partial(BesselKind::Icomb, 1, 1, Rational(1, 2), Rational(1, 2), ShiftSign::plus, ShiftSign::plus);
    const double lhs = evaluate_expansion(e, m, n, sigma, theta, x) / (4 * pi * pi);
    const double A = m + sigma, B = n + theta;
    const double rhs = x * specfun::t_three_half(4 * pi * pi * A * B * x).value / std::sqrt(A * B);
    return {lhs, rhs};
}

enum class LhsKind { BI, TI, TT };

inline const char* to_string(LhsKind k)
{
    switch (k) {
    case LhsKind::BI: return "BI";
    case LhsKind::TI: return "TI";
    case LhsKind::TT: return "TT";
    }
    return "?";
}

// d^{2k}/d sigma^k d theta^k of the finite trig sum plus its constant term.
inline double lhs_mixed_partial(LhsKind kind, int k, double sigma, double theta, double x)
{
    if (k < 0) throw DomainError("lhs_mixed_partial: k must be >= 0");
    if (!(sigma > 0 && sigma < 1) || !(theta > 0 && theta < 1)) throw DomainError("lhs_mixed_partial: phases must lie in (0,1)");
    if (!(x > 0) || !std::isfinite(x)) throw DomainError("lhs_mixed_partial: x must be finite and > 0");
    const double pi = std::numbers::pi;
    const double shift = k * pi / 2;
    const auto ps = arith::Phase::of(sigma), pt = arith::Phase::of(theta);
    auto pw = [&](long long j) { return std::pow(2 * pi * static_cast<double>(j), k); };
    double sum = 0;
    switch (kind) {
    case LhsKind::BI:
        sum = arith::detail::primed_double_sum(
            x, [&](long long m) { return pw(m) * std::cos(ps.angle(m) + shift); },
            [&](long long n) { return pw(n) * std::sin(pt.angle(n) + shift); });
        if (k == 0) sum += 1 / (4 * std::tan(pi * theta));
        break;
    case LhsKind::TI:
        sum = arith::detail::primed_double_sum(
            x, [&](long long m) { return pw(m) * std::cos(ps.angle(m) + shift); },
            [&](long long n) { return pw(n) * std::cos(pt.angle(n) + shift); });
        if (k == 0) sum -= 0.25;
        break;
    case LhsKind::TT:
        sum = arith::detail::primed_double_sum(
            x, [&](long long m) { return static_cast<double>(m) * pw(m) * std::sin(ps.angle(m) + shift); },
            [&](long long n) { return static_cast<double>(n) * pw(n) * std::sin(pt.angle(n) + shift); });
        break;
    }
    return sum;
}

// One line per term: coeff pi^p sqrtx^q kind order gamma delta sigma theta
inline std::string pretty(const TermExpansion& e)
{
    std::ostringstream os;
    os << "main " << e.main_gamma.str() << " " << e.main_delta.str() << "\n";
    for (const auto& t : e.terms) {
        os << t.coeff.str() << " pi^" << t.pi_power << " sqrtx^" << t.x_power << " " << to_string(t.kind);
        if (t.kind == BesselKind::T) os << " 3/2";
        else os << " " << t.order;
        os << " " << t.gamma.str() << " " << t.delta.str() << " " << (t.sigma_sign == ShiftSign::plus ? "+" : "-") << " "
           << (t.theta_sign == ShiftSign::plus ? "+" : "-") << "\n";
    }
    return os.str();
}

}  // namespace trigbessel::balanced
