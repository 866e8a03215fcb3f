#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "trigbessel/arith_sums.hpp"
#include "trigbessel/balanced.hpp"
#include "trigbessel/bessel_series.hpp"
#include "trigbessel/characters.hpp"
#include "trigbessel/error.hpp"
#include "trigbessel/rational.hpp"

namespace trigbessel::experiments {

using json = nlohmann::json;
using cplx = std::complex<double>;
using Params = std::map<std::string, double>;

inline constexpr const char* kVersion = "0.1.0";

struct ExperimentConfig {
    double cap = 1e-2;             // absolute error cap for the error-trend rule
    std::uint64_t seed = 20240611;
    int max_schedule_log2 = 13;    // resource ceiling on truncation size
    double max_x = 1e7;            // resource ceiling on probe and check sizes
    long long max_points = 10000;
    double decomposition_tol = 1e-9;
    double imag_tol = 1e-10;
    double pointwise_tol = 1e-8;
    double fd_tol = 1e-5;
};

// ---------------------------------------------------------------- identities

enum class IdentityId { ENTRY1, ENTRY2, BI_K0, TI_K0, TT_K0, BALANCED_K1, RIESZ_K2_RHO0 };

inline const char* to_string(IdentityId id)
{
    switch (id) {
    case IdentityId::ENTRY1: return "ENTRY1";
    case IdentityId::ENTRY2: return "ENTRY2";
    case IdentityId::BI_K0: return "BI_K0";
    case IdentityId::TI_K0: return "TI_K0";
    case IdentityId::TT_K0: return "TT_K0";
    case IdentityId::BALANCED_K1: return "BALANCED_K1";
    case IdentityId::RIESZ_K2_RHO0: return "RIESZ_K2_RHO0";
    }
    return "?";
}

inline IdentityId identity_from_string(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (auto id : {IdentityId::ENTRY1, IdentityId::ENTRY2, IdentityId::BI_K0, IdentityId::TI_K0, IdentityId::TT_K0, IdentityId::BALANCED_K1,
                    IdentityId::RIESZ_K2_RHO0})
        if (s == to_string(id)) return id;
    throw ValidationError("unknown identity id: " + s);
}

struct SweepSpec {
    int lo = 6;
    int hi = 12;

    void validate(const ExperimentConfig& cfg) const
    {
        if (lo < 0 || hi < lo) throw ValidationError("sweep must satisfy 0 <= lo <= hi");
        if (hi > cfg.max_schedule_log2) throw ResourceLimitError("sweep exceeds the configured schedule ceiling 2^" + std::to_string(cfg.max_schedule_log2));
    }
};

struct TracePoint {
    std::string label;
    double lhs = 0;
    double rhs = 0;
    double abs_error = 0;
};

struct IdentityReport {
    std::string identity_id;
    json params = json::object();
    std::vector<TracePoint> error_trace;
    bool passed = false;
    json details = json::object();
    std::uint64_t seed = 0;
    double elapsed_seconds = 0;

    [[nodiscard]] json to_json() const
    {
        json trace = json::array();
        for (const auto& t : error_trace) trace.push_back({{"schedule", t.label}, {"lhs", t.lhs}, {"rhs", t.rhs}, {"abs_error", t.abs_error}});
        return {{"id", identity_id},       {"params", params}, {"error_trace", trace},
                {"passed", passed},        {"details", details}, {"seed", seed},
                {"versions", {{"trigbessel", kVersion}}}, {"elapsed_seconds", elapsed_seconds}};
    }
};

struct TrendVerdict {
    double first = 0;
    double final = 0;
    bool trend_and_cap = false;  // final < first/5 and final < cap
    bool max_rule = false;       // final < max(cap, first/5)
};

inline TrendVerdict trend_verdict(const std::vector<TracePoint>& trace, double cap)
{
    TrendVerdict v;
    if (trace.empty()) return v;
    v.first = trace.front().abs_error;
    v.final = trace.back().abs_error;
    v.trend_and_cap = v.final < v.first / 5 && v.final < cap;
    v.max_rule = v.final < std::max(cap, v.first / 5);
    return v;
}

namespace detail {

inline double need(const Params& p, const std::string& key)
{
    auto it = p.find(key);
    if (it == p.end()) throw ValidationError("missing parameter: " + key);
    if (!std::isfinite(it->second)) throw ValidationError("parameter " + key + " must be finite");
    return it->second;
}

inline double get_or(const Params& p, const std::string& key, double fallback)
{
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

inline long long need_int(const Params& p, const std::string& key)
{
    double v = need(p, key);
    if (v != std::floor(v) || std::fabs(v) > 1e15) throw ValidationError("parameter " + key + " must be an integer");
    return static_cast<long long>(v);
}

inline void phase_param(double v, const char* name)
{
    if (!(v > 0 && v < 1)) throw ValidationError(std::string(name) + " must lie in (0,1)");
}

inline json to_json(const Params& p)
{
    json j = json::object();
    for (const auto& [k, v] : p) j[k] = v;
    return j;
}

inline void sweep_trace(IdentityReport& rep, const series::SeriesResult& r, double lhs, long long min_size)
{
    for (const auto& p : r.partial_trace) {
        if (std::max(p.m_max, p.n_max) < min_size) continue;
        rep.error_trace.push_back({std::to_string(p.m_max) + "x" + std::to_string(p.n_max), lhs, p.value, std::fabs(p.value - lhs)});
    }
    rep.details["est_tail"] = r.est_tail;
}

}  // namespace detail

inline IdentityReport verify_balanced_k1(const Params& params, const ExperimentConfig& cfg)
{
    IdentityReport rep;
    rep.identity_id = to_string(IdentityId::BALANCED_K1);
    const long long cells = static_cast<long long>(detail::get_or(params, "cells", 10));
    if (cells < 1 || cells > 10000) throw ValidationError("cells must be in [1, 10000]");
    rep.seed = static_cast<std::uint64_t>(detail::get_or(params, "seed", static_cast<double>(cfg.seed)));
    rep.params = detail::to_json(params);
    std::mt19937_64 rng(rep.seed);
    std::uniform_real_distribution<double> ph(0.01, 0.99), xs(0.3, 12.0);
    bool ok = true;
    for (long long i = 0; i < cells; ++i) {
        const long long m = static_cast<long long>(rng() % 20), n = static_cast<long long>(rng() % 20);
        const double s = ph(rng), t = ph(rng), x = xs(rng);
        auto r = balanced::verify_k1_pointwise(m, n, s, t, x);
        const double err = std::fabs(r.lhs - r.rhs);
        std::ostringstream label;
        label.precision(17);
        label << "m=" << m << " n=" << n << " sigma=" << s << " theta=" << t << " x=" << x;
        rep.error_trace.push_back({label.str(), r.lhs, r.rhs, err});
        ok = ok && err < cfg.pointwise_tol * std::max(1.0, std::fabs(r.rhs));
    }
    // symbolic against finite-difference mixed partials on moderate cells
    std::mt19937_64 rng_fd(rep.seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> ph_fd(0.1, 0.9), x_fd(0.5, 4.0);
    double worst = 0;
    const Rational half(1, 2);
    for (auto kind : {balanced::BesselKind::J, balanced::BesselKind::Icomb, balanced::BesselKind::T}) {
        for (int i = 0; i < 5; ++i) {
            const long long m = static_cast<long long>(rng_fd() % 5), n = static_cast<long long>(rng_fd() % 5);
            const double s = ph_fd(rng_fd), t = ph_fd(rng_fd), x = x_fd(rng_fd), h = 1e-4;
            auto base = balanced::identity_expansion(kind, half, half, balanced::ShiftSign::plus, balanced::ShiftSign::plus);
            auto e = balanced::expand_mixed_partial(kind, 1, 1, half, half, balanced::ShiftSign::plus, balanced::ShiftSign::plus);
            auto f = [&](double a, double b) { return balanced::evaluate_expansion(base, m, n, a, b, x); };
            const double fd = (f(s + h, t + h) - f(s + h, t - h) - f(s - h, t + h) + f(s - h, t - h)) / (4 * h * h);
            const double sym = balanced::evaluate_expansion(e, m, n, s, t, x);
            worst = std::max(worst, std::fabs(sym - fd) / std::fabs(sym));
        }
    }
    rep.details["fd_max_rel_error"] = worst;
    rep.details["fd_tol"] = cfg.fd_tol;
    rep.details["pointwise_tol"] = cfg.pointwise_tol;
    rep.passed = ok && worst < cfg.fd_tol;
    return rep;
}

inline IdentityReport verify_identity(IdentityId id, const Params& params, SweepSpec sweep = {}, const ExperimentConfig& cfg = {})
{
    const auto t0 = std::chrono::steady_clock::now();
    IdentityReport rep;
    if (id == IdentityId::BALANCED_K1) {
        rep = verify_balanced_k1(params, cfg);
    } else {
        sweep.validate(cfg);
        rep.identity_id = to_string(id);
        rep.seed = cfg.seed;
        rep.params = detail::to_json(params);
        rep.params["sweep"] = std::to_string(sweep.lo) + ":" + std::to_string(sweep.hi);
        const long long big = 1LL << sweep.hi, small = 1LL << sweep.lo;
        const auto sched = series::TruncationSchedule::square(big);
        const double x = detail::need(params, "x");
        if (!(x > 0) || x > cfg.max_x) throw ValidationError("x must lie in (0, max_x]");
        switch (id) {
        case IdentityId::ENTRY1:
        case IdentityId::ENTRY2: {
            const double theta = detail::need(params, "theta");
            detail::phase_param(theta, "theta");
            const bool one = id == IdentityId::ENTRY1;
            const double lhs = arith::trig_sum({one ? arith::TrigKind::ENTRY1_LHS : arith::TrigKind::ENTRY2_LHS, arith::Phase::of(theta), {}, x});
            auto r = one ? series::entry1_rhs(theta, x, sched) : series::entry2_rhs(theta, x, sched);
            detail::sweep_trace(rep, r, lhs, small);
            break;
        }
        case IdentityId::BI_K0:
        case IdentityId::TI_K0:
        case IdentityId::TT_K0: {
            const double s = detail::need(params, "sigma"), t = detail::need(params, "theta");
            detail::phase_param(s, "sigma");
            detail::phase_param(t, "theta");
            const auto lk = id == IdentityId::BI_K0 ? balanced::LhsKind::BI : id == IdentityId::TI_K0 ? balanced::LhsKind::TI : balanced::LhsKind::TT;
            const auto sk = id == IdentityId::BI_K0   ? series::BalancedKind::BI_J
                            : id == IdentityId::TI_K0 ? series::BalancedKind::TI_I
                                                      : series::BalancedKind::TT_T;
            const double lhs = balanced::lhs_mixed_partial(lk, 0, s, t, x);
            detail::sweep_trace(rep, series::balanced_rhs(sk, 0, s, t, x, sched), lhs, small);
            break;
        }
        case IdentityId::RIESZ_K2_RHO0: {
            const long long p = detail::need_int(params, "p"), q = detail::need_int(params, "q");
            const long long a = detail::need_int(params, "a"), b = detail::need_int(params, "b");
            if (!chars::is_prime(p) || !chars::is_prime(q) || p < 3 || q < 3) throw UnsupportedError("p and q must be odd primes");
            if (a <= 0 || a >= p || b <= 0 || b >= q) throw ValidationError("need 0 < a < p and 0 < b < q");
            const double lhs = arith::trig_sum({arith::TrigKind::SS, arith::Phase::fraction(a, p), arith::Phase::fraction(b, q), x});
            detail::sweep_trace(rep, series::riesz_k2_rhs(p, q, a, b, x, sched), lhs, small);
            break;
        }
        case IdentityId::BALANCED_K1: break;
        }
        auto v = trend_verdict(rep.error_trace, cfg.cap);
        rep.passed = v.max_rule;
        rep.details["first_error"] = v.first;
        rep.details["final_error"] = v.final;
        rep.details["cap"] = cfg.cap;
        rep.details["trend_and_cap"] = v.trend_and_cap;
        rep.details["final_below_max_cap_first_over_5"] = v.max_rule;
    }
    rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// ---------------------------------------------------------------- decompositions

enum class DecompositionId { CC, CS, SS, FLOOR_COS, FLOOR_SIN, SINE_CHARS, ODD_ORTHOGONALITY };

inline const char* to_string(DecompositionId id)
{
    switch (id) {
    case DecompositionId::CC: return "CC";
    case DecompositionId::CS: return "CS";
    case DecompositionId::SS: return "SS";
    case DecompositionId::FLOOR_COS: return "FLOOR_COS";
    case DecompositionId::FLOOR_SIN: return "FLOOR_SIN";
    case DecompositionId::SINE_CHARS: return "SINE_CHARS";
    case DecompositionId::ODD_ORTHOGONALITY: return "ODD_ORTHOGONALITY";
    }
    return "?";
}

inline DecompositionId decomposition_from_string(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (auto id : {DecompositionId::CC, DecompositionId::CS, DecompositionId::SS, DecompositionId::FLOOR_COS, DecompositionId::FLOOR_SIN,
                    DecompositionId::SINE_CHARS, DecompositionId::ODD_ORTHOGONALITY})
        if (s == to_string(id)) return id;
    throw ValidationError("unknown decomposition id: " + s);
}

// CC, CS, SS use a/p and b/q; FLOOR_* use a/q; SINE_CHARS and ODD_ORTHOGONALITY sweep all residues mod q.
struct DecompositionParams {
    long long p = 5;
    long long q = 7;
    long long a = 1;
    long long b = 1;
    double x = 50.5;
};

namespace detail {

// sum'_{n <= x} sum_{d | n} chi(d)
inline cplx char_divisor_summatory(const chars::DirichletCharacter& chi, double x)
{
    const long long N = arith::floor_x(x);
    CompensatedSum re, im;
    cplx last{0, 0};
    arith::stream_multiplicative<cplx>(
        N,
        [&](long long p, int e) {
            cplx c = chi(p), s{1, 0}, pw{1, 0};
            for (int j = 1; j <= e; ++j) s += (pw *= c);
            return s;
        },
        [&](long long n, const cplx& v) {
            re.add(v.real());
            im.add(v.imag());
            if (n == N) last = v;
        });
    cplx total{re.value(), im.value()};
    if (N >= 1 && arith::PrimedSumPolicy::is_integer(x)) total -= 0.5 * last;
    return total;
}

inline cplx pair_summatory(const chars::DirichletCharacter& c1, const chars::DirichletCharacter& c2, double x, int weight)
{
    return arith::summatory(arith::SummatorySpec::twisted_by({{c1, c2}, weight}), x);
}

inline double plain_D(double x) { return x < 1 ? 0.0 : arith::summatory(arith::SummatorySpec::plain(), x).real(); }

inline double floor_trig(bool sine, long long a, long long q, double x)
{
    if (x < 1) return 0.0;
    return arith::trig_sum({sine ? arith::TrigKind::FLOOR_SIN : arith::TrigKind::FLOOR_COS, arith::Phase::fraction(a, q), {}, x});
}

inline bool nonprincipal_even(const chars::DirichletCharacter& c) { return !c.is_odd() && !c.is_principal(); }

inline cplx tau_conj(const chars::DirichletCharacter& c) { return chars::gauss_sum_unchecked(c.conj()).value(); }

}  // namespace detail

inline IdentityReport verify_decomposition(DecompositionId id, const DecompositionParams& dp, const ExperimentConfig& cfg = {})
{
    const auto t0 = std::chrono::steady_clock::now();
    IdentityReport rep;
    rep.identity_id = to_string(id);
    rep.seed = cfg.seed;
    rep.params = {{"p", dp.p}, {"q", dp.q}, {"a", dp.a}, {"b", dp.b}, {"x", dp.x}};
    if (!(dp.x > 0) || dp.x > 1e4) throw ValidationError("decomposition checks need 0 < x <= 1e4");
    const bool uses_p = id == DecompositionId::CC || id == DecompositionId::CS || id == DecompositionId::SS;
    const auto Q = chars::enumerate_characters(static_cast<int>(dp.q));  // throws on composite
    const std::vector<chars::DirichletCharacter> P = uses_p ? chars::enumerate_characters(static_cast<int>(dp.p)) : Q;
    if (uses_p && (chars::gcd(dp.a, dp.p) != 1 || chars::gcd(dp.b, dp.q) != 1)) throw DomainError("need gcd(a,p) = gcd(b,q) = 1");
    if (!uses_p && chars::gcd(dp.a, dp.q) != 1) throw DomainError("need gcd(a,q) = 1");
    const double x = dp.x;
    const double p = static_cast<double>(dp.p), q = static_cast<double>(dp.q);
    double max_err = 0, max_imag = 0;
    auto record = [&](const std::string& label, double lhs, cplx rhs) {
        const double err = std::fabs(lhs - rhs.real());
        rep.error_trace.push_back({label, lhs, rhs.real(), err});
        max_err = std::max(max_err, err);
        max_imag = std::max(max_imag, std::fabs(rhs.imag()));
    };
    using arith::Phase;
    using arith::TrigKind;
    switch (id) {
    case DecompositionId::CC: {
        const double lhs = arith::trig_sum({TrigKind::CC, Phase::fraction(dp.a, dp.p), Phase::fraction(dp.b, dp.q), x});
        cplx s{0, 0};
        for (const auto& c1 : P)
            for (const auto& c2 : Q)
                if (detail::nonprincipal_even(c1) && detail::nonprincipal_even(c2))
                    s += c1(dp.a) * c2(dp.b) * detail::tau_conj(c1) * detail::tau_conj(c2) * detail::pair_summatory(c1, c2, x, 0);
        const double phpq = (p - 1) * (q - 1);
        cplx rhs = s / phpq - detail::floor_trig(false, dp.b, dp.q, x) / (p - 1) - detail::floor_trig(false, dp.a, dp.p, x) / (q - 1) +
                   p / (p - 1) * detail::floor_trig(false, dp.b, dp.q, x / p) + q / (q - 1) * detail::floor_trig(false, dp.a, dp.p, x / q) -
                   (detail::plain_D(x) - q * detail::plain_D(x / q) - p * detail::plain_D(x / p) + p * q * detail::plain_D(x / (p * q))) / phpq;
        record("CC", lhs, rhs);
        break;
    }
    case DecompositionId::CS: {
        const double lhs = arith::trig_sum({TrigKind::CS, Phase::fraction(dp.a, dp.p), Phase::fraction(dp.b, dp.q), x});
        cplx s{0, 0};
        for (const auto& c1 : P)
            for (const auto& c2 : Q)
                if (detail::nonprincipal_even(c1) && c2.is_odd())
                    s += c1(dp.a) * c2(dp.b) * detail::tau_conj(c1) * detail::tau_conj(c2) * detail::pair_summatory(c1, c2, x, 0);
        cplx rhs = s / cplx(0, (p - 1) * (q - 1)) - detail::floor_trig(true, dp.b, dp.q, x) / (p - 1) +
                   p / (p - 1) * detail::floor_trig(true, dp.b, dp.q, x / p);
        record("CS", lhs, rhs);
        break;
    }
    case DecompositionId::SS: {
        const double lhs = arith::trig_sum({TrigKind::SS, Phase::fraction(dp.a, dp.p), Phase::fraction(dp.b, dp.q), x});
        cplx s{0, 0};
        for (const auto& c1 : P)
            for (const auto& c2 : Q)
                if (c1.is_odd() && c2.is_odd())
                    s += c1(dp.a) * c2(dp.b) * detail::tau_conj(c1) * detail::tau_conj(c2) * detail::pair_summatory(c1, c2, x, 1);
        record("SS", lhs, -s / ((p - 1) * (q - 1)));
        break;
    }
    case DecompositionId::FLOOR_COS: {
        cplx s{0, 0};
        for (const auto& c : Q)
            if (!c.is_odd()) s += c(dp.a) * detail::tau_conj(c) * detail::char_divisor_summatory(c, x);
        record("FLOOR_COS", detail::floor_trig(false, dp.a, dp.q, x), detail::plain_D(x / q) + s / (q - 1));
        break;
    }
    case DecompositionId::FLOOR_SIN: {
        cplx s{0, 0};
        for (const auto& c : Q)
            if (c.is_odd()) s += c(dp.a) * detail::tau_conj(c) * detail::char_divisor_summatory(c, x);
        record("FLOOR_SIN", detail::floor_trig(true, dp.a, dp.q, x), cplx(0, -1) * s / (q - 1));
        break;
    }
    case DecompositionId::SINE_CHARS: {
        for (long long a = 1; a < dp.q; ++a)
            for (long long n = 0; n <= 3 * dp.q; ++n)
                record("a=" + std::to_string(a) + " n=" + std::to_string(n), std::sin(2 * std::numbers::pi * static_cast<double>(chars::mod(n * a, dp.q)) / q),
                       chars::sin_as_char_sum(a, static_cast<int>(dp.q), n));
        break;
    }
    case DecompositionId::ODD_ORTHOGONALITY: {
        const double half = (q - 1) / 2;
        for (long long a = 0; a < dp.q; ++a)
            for (long long b = 0; b < dp.q; ++b) {
                double expect = 0;
                if (a % dp.q != 0) {
                    if (chars::mod(a - b, dp.q) == 0) expect = half;
                    else if (chars::mod(a + b, dp.q) == 0) expect = -half;
                }
                record("a=" + std::to_string(a) + " b=" + std::to_string(b), expect, chars::odd_char_orthogonality(a, b, static_cast<int>(dp.q)));
            }
        break;
    }
    }
    rep.passed = max_err < cfg.decomposition_tol && max_imag < cfg.imag_tol;
    rep.details["max_abs_error"] = max_err;
    rep.details["max_imag_residue"] = max_imag;
    rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// Riesz k = 2, rho = 0 identity with the error-trend rule.
inline IdentityReport verify_riesz_k2(long long p, long long q, long long a, long long b, double x, SweepSpec sweep = {}, const ExperimentConfig& cfg = {})
{
    return verify_identity(IdentityId::RIESZ_K2_RHO0,
                           {{"p", static_cast<double>(p)}, {"q", static_cast<double>(q)}, {"a", static_cast<double>(a)}, {"b", static_cast<double>(b)}, {"x", x}},
                           sweep, cfg);
}

// ---------------------------------------------------------------- growth probes

enum class GrowthKind { DELTA, P_CIRCLE, D_CHI2, DSTAR_CHI2, SS_QUARTER, DK };

inline const char* to_string(GrowthKind k)
{
    switch (k) {
    case GrowthKind::DELTA: return "DELTA";
    case GrowthKind::P_CIRCLE: return "P_CIRCLE";
    case GrowthKind::D_CHI2: return "D_CHI2";
    case GrowthKind::DSTAR_CHI2: return "DSTAR_CHI2";
    case GrowthKind::SS_QUARTER: return "SS_QUARTER";
    case GrowthKind::DK: return "DK";
    }
    return "?";
}

inline GrowthKind growth_from_string(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (auto k : {GrowthKind::DELTA, GrowthKind::P_CIRCLE, GrowthKind::D_CHI2, GrowthKind::DSTAR_CHI2, GrowthKind::SS_QUARTER, GrowthKind::DK})
        if (s == to_string(k)) return k;
    throw ValidationError("unknown growth kind: " + s);
}

struct GrowthOptions {
    double x_min = 10;
    int k = 3;  // number of odd characters for DK
};

struct GrowthProbeResult {
    GrowthKind kind = GrowthKind::DELTA;
    Rational exponent;
    std::vector<double> grid;
    std::vector<double> values;
    std::vector<double> ratios;
    std::vector<double> running_max;
    std::uint64_t seed = 0;

    [[nodiscard]] std::string to_csv() const
    {
        std::ostringstream os;
        os.precision(17);
        os << "x,ratio,running_max,exponent,kind\n";
        for (std::size_t i = 0; i < grid.size(); ++i)
            os << grid[i] << "," << ratios[i] << "," << running_max[i] << "," << exponent.str() << "," << to_string(kind) << "\n";
        return os.str();
    }

    [[nodiscard]] json to_json() const
    {
        return {{"kind", to_string(kind)}, {"exponent", exponent.str()}, {"grid", grid}, {"values", values}, {"ratios", ratios},
                {"running_max", running_max}, {"seed", seed}, {"versions", {{"trigbessel", kVersion}}}};
    }

    // Number of decades floor(log10 x) in which the running max strictly increased.
    [[nodiscard]] int decades_with_new_max() const
    {
        std::vector<int> seen;
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (running_max[i] > running_max[i - 1]) {
                int d = static_cast<int>(std::floor(std::log10(grid[i])));
                if (std::find(seen.begin(), seen.end(), d) == seen.end()) seen.push_back(d);
            }
        return static_cast<int>(seen.size());
    }

    [[nodiscard]] double max_ratio_over_log() const
    {
        double m = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) m = std::max(m, ratios[i] / std::log(grid[i]));
        return m;
    }
};

// Log-spaced grid with deterministic fractional jitter in [0.1, 0.9], so no point is an integer.
inline std::vector<double> jittered_grid(double x_min, double x_max, long long n_points, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> frac(0.1, 0.9);
    std::vector<double> out;
    const double l0 = std::log(x_min), l1 = std::log(x_max);
    for (long long i = 0; i < n_points; ++i) {
        const double t = n_points == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(n_points - 1);
        const double base = std::floor(std::exp(l0 + (l1 - l0) * t));
        const double x = std::min(base + frac(rng), x_max);
        if (!out.empty() && x <= out.back()) continue;
        if (x == std::floor(x)) continue;
        out.push_back(x);
    }
    return out;
}

namespace detail {

// sum' over N <= x of N d_{chi,chi}(N) with chi the non-principal character mod 4, at each x.
inline std::vector<double> ss_quarter_at(const std::vector<double>& xs)
{
    std::vector<double> out(xs.size());
    if (xs.empty()) return out;
    std::vector<std::size_t> order(xs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
    const long long N = arith::floor_x(xs[order.back()]);
    CompensatedSum s;
    std::size_t next = 0;
    while (next < order.size() && arith::floor_x(xs[order[next]]) == 0) out[order[next++]] = 0;
    arith::stream_multiplicative<double>(
        N,
        [](long long p, int e) {
            if (p == 2) return 0.0;
            const double chi = (p % 4 == 1 || e % 2 == 0) ? 1.0 : -1.0;
            return chi * (e + 1) * std::pow(static_cast<double>(p), e);
        },
        [&](long long n, double v) {
            s.add(v);
            while (next < order.size() && arith::floor_x(xs[order[next]]) == n) {
                const double x = xs[order[next]];
                out[order[next++]] = s.value() - (arith::PrimedSumPolicy::is_integer(x) ? 0.5 * v : 0.0);
            }
        });
    return out;
}

inline std::vector<int> first_odd_primes(int k)
{
    std::vector<int> out;
    for (int p = 3; static_cast<int>(out.size()) < k; p += 2)
        if (chars::is_prime(p)) out.push_back(p);
    return out;
}

}  // namespace detail

// Default character choices: D_CHI2 pairs even non-principal characters mod 5 and 7,
// DSTAR_CHI2 pairs odd ones (weight n), DK uses one odd character for each of the first k odd primes.
inline GrowthProbeResult growth_probe(GrowthKind kind, Rational exponent, double x_max, long long n_points, const ExperimentConfig& cfg = {},
                                      GrowthOptions opt = {})
{
    if (!(x_max > opt.x_min)) throw ValidationError("growth probe: x_max must exceed x_min");
    if (x_max > cfg.max_x) throw ResourceLimitError("growth probe: x_max exceeds the configured ceiling");
    if (n_points < 2 || n_points > cfg.max_points) throw ResourceLimitError("growth probe: n_points outside [2, max_points]");
    if (kind == GrowthKind::DK && (opt.k < 1 || opt.k > 8)) throw ValidationError("growth probe: k must lie in [1, 8]");
    GrowthProbeResult r;
    r.kind = kind;
    r.exponent = exponent;
    r.seed = cfg.seed;
    r.grid = jittered_grid(opt.x_min, x_max, n_points, cfg.seed);
    r.values.resize(r.grid.size());
    auto twisted_abs = [&](const arith::TwistedDivisorSpec& spec) {
        auto v = arith::summatory_at(arith::SummatorySpec::twisted_by(spec), r.grid);
        for (std::size_t i = 0; i < v.size(); ++i) r.values[i] = std::abs(v[i]);
    };
    switch (kind) {
    case GrowthKind::DELTA:
        for (std::size_t i = 0; i < r.grid.size(); ++i) r.values[i] = std::fabs(arith::delta_error(r.grid[i]));
        break;
    case GrowthKind::P_CIRCLE:
        for (std::size_t i = 0; i < r.grid.size(); ++i) r.values[i] = std::fabs(arith::circle_R_and_P(r.grid[i]).P);
        break;
    case GrowthKind::D_CHI2:
        twisted_abs({{chars::enumerate_characters(5)[2], chars::enumerate_characters(7)[2]}, 0});
        break;
    case GrowthKind::DSTAR_CHI2:
        twisted_abs({{chars::enumerate_characters(5)[1], chars::enumerate_characters(7)[1]}, 1});
        break;
    case GrowthKind::DK: {
        arith::TwistedDivisorSpec spec{{}, 1};
        for (int p : detail::first_odd_primes(opt.k)) spec.characters.push_back(chars::enumerate_characters(p)[1]);
        twisted_abs(spec);
        break;
    }
    case GrowthKind::SS_QUARTER: {
        auto v = detail::ss_quarter_at(r.grid);
        for (std::size_t i = 0; i < v.size(); ++i) r.values[i] = std::fabs(v[i]);
        break;
    }
    }
    const double e = exponent.to_double();
    double run = 0;
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
        r.ratios.push_back(r.values[i] / std::pow(r.grid[i], e));
        run = std::max(run, r.ratios.back());
        r.running_max.push_back(run);
    }
    return r;
}

}  // namespace trigbessel::experiments
