#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "trigbessel/arith_sums.hpp"
#include "trigbessel/balanced.hpp"
#include "trigbessel/error.hpp"
#include "trigbessel/specfun.hpp"
#include "trigbessel/summation.hpp"

namespace trigbessel::series {

enum class Grouping { paired_theta, raw };

struct TruncationSchedule {
    long long m_max = 4096;
    long long n_max = 4096;
    Grouping grouping = Grouping::paired_theta;

    static TruncationSchedule square(long long M, Grouping g = Grouping::paired_theta) { return {M, M, g}; }
    void validate() const
    {
        if (m_max < 1 || n_max < 1) throw ValidationError("truncation schedule: m_max, n_max must be >= 1");
    }
};

struct TracePoint {
    long long m_max;
    long long n_max;
    double value;
};

struct SeriesResult {
    double value = 0.0;
    std::vector<TracePoint> partial_trace;
    double est_tail = 0.0;
};

inline constexpr int kDefaultKMax = 2;

namespace detail {

inline unsigned worker_count(long long rows)
{
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<long long>(hw, std::max(1LL, rows / 64)));
}

// Sizes 2^j below the final size, then the final size itself.
inline std::vector<long long> doubling_sizes(long long final_size)
{
    std::vector<long long> out;
    for (long long s = 1; s < final_size; s *= 2) out.push_back(s);
    out.push_back(final_size);
    return out;
}

// Tail estimate assuming the error decays like N^{-1/4}.
inline double tail_estimate(const std::vector<TracePoint>& trace)
{
    if (trace.size() < 2) return std::fabs(trace.empty() ? 0.0 : trace.back().value);
    const auto& last = trace.back();
    const double nl = static_cast<double>(std::max(last.m_max, last.n_max));
    // early checkpoints sit in the pre-asymptotic range; use the last six doublings
    const double floor_n = nl / 64;
    double c = 0;
    for (std::size_t j = 0; j + 1 < trace.size(); ++j) {
        const double nj = static_cast<double>(std::max(trace[j].m_max, trace[j].n_max));
        if (nj < floor_n && trace.size() > 7) continue;
        c = std::max(c, std::fabs(trace[j].value - last.value) * std::pow(nj, 0.25));
    }
    return c * std::pow(nl, -0.25);
}

// Rows m = m0..M, columns n = n0..N, m outer. cell(m, n, out) writes up to 4 terms and
// returns the count. A checkpoint (M_j, N_j) receives rows m <= M_j summed up to n <= N_j.
template <typename Cell>
std::vector<TracePoint> double_sum(const std::vector<std::pair<long long, long long>>& checkpoints, long long m0, long long n0,
                                   Grouping grouping, Cell cell)
{
    const std::size_t J = checkpoints.size();
    const long long M = checkpoints.back().first;
    const long long N = checkpoints.back().second;
    const long long rows = M - m0 + 1;
    std::vector<double> row_part(static_cast<std::size_t>(rows) * J, 0.0);
    auto run_rows = [&](unsigned start, unsigned stride) {
        std::array<double, 4> terms{};
        for (long long m = m0 + start; m <= M; m += stride) {
            CompensatedSum acc;
            std::size_t j = 0;
            for (long long n = n0; n <= N; ++n) {
                int cnt = cell(m, n, terms.data());
                if (grouping == Grouping::paired_theta) {
                    double c = 0;
                    for (int i = 0; i < cnt; ++i) c += terms[i];
                    acc.add(c);
                } else {
                    for (int i = 0; i < cnt; ++i) acc.add(terms[i]);
                }
                while (j < J && checkpoints[j].second == n) row_part[static_cast<std::size_t>(m - m0) * J + j++] = acc.value();
            }
        }
    };
    const unsigned T = worker_count(rows);
    if (T <= 1) {
        run_rows(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < T; ++t) pool.emplace_back(run_rows, t, T);
        for (auto& th : pool) th.join();
    }
    std::vector<TracePoint> trace;
    for (std::size_t j = 0; j < J; ++j) {
        CompensatedSum s;
        for (long long m = m0; m <= checkpoints[j].first; ++m) s.add(row_part[static_cast<std::size_t>(m - m0) * J + j]);
        trace.push_back({checkpoints[j].first, checkpoints[j].second, s.value()});
    }
    return trace;
}

inline std::vector<std::pair<long long, long long>> checkpoints_for(const TruncationSchedule& t)
{
    t.validate();
    std::vector<std::pair<long long, long long>> out;
    const long long big = std::max(t.m_max, t.n_max);
    for (long long s : doubling_sizes(big)) out.emplace_back(std::min(s, t.m_max), std::min(s, t.n_max));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline SeriesResult finish(std::vector<TracePoint> trace, double offset, double scale)
{
    for (auto& p : trace) p.value = offset + scale * p.value;
    SeriesResult r;
    r.value = trace.back().value;
    r.est_tail = tail_estimate(trace);
    r.partial_trace = std::move(trace);
    return r;
}

inline void check_phase(double t, const char* what)
{
    if (!(t > 0 && t < 1)) throw DomainError(std::string(what) + " must lie in (0,1)");
}

inline void check_x(double x)
{
    if (!(x > 0) || !std::isfinite(x)) throw DomainError("x must be finite and > 0");
}

template <typename Term>
SeriesResult single_series(long long n_max, double offset, Term term)
{
    if (n_max < 1) throw ValidationError("n_max must be >= 1");
    std::vector<TracePoint> trace;
    CompensatedSum s;
    auto sizes = doubling_sizes(n_max);
    std::size_t j = 0;
    for (long long n = 1; n <= n_max; ++n) {
        s.add(term(n));
        if (n == sizes[j]) trace.push_back({n, n, offset + s.value()}), ++j;
    }
    SeriesResult r;
    r.value = trace.back().value;
    r.est_tail = tail_estimate(trace);
    r.partial_trace = std::move(trace);
    return r;
}

}  // namespace detail

// 1/4 + sum_{n <= n_max} d(n) (x/n)^{1/2} I1(4 pi sqrt(n x)), to compare with delta_error(x).
inline SeriesResult voronoi_delta_series(double x, long long n_max)
{
    detail::check_x(x);
    auto d = arith::divisor_table(std::max(1LL, n_max));
    const double pi = std::numbers::pi;
    return detail::single_series(n_max, 0.25, [&](long long n) {
        const double nd = static_cast<double>(n);
        return static_cast<double>(d[n]) * std::sqrt(x / nd) * specfun::detail::icomb1_value(4 * pi * std::sqrt(nd * x));
    });
}

// sum_{n <= n_max} r2(n) (x/n)^{1/2} J1(2 pi sqrt(n x)), to compare with P(x).
inline SeriesResult hardy_p_series(double x, long long n_max)
{
    detail::check_x(x);
    auto r = arith::r2_table(std::max(1LL, n_max));
    const double pi = std::numbers::pi;
    return detail::single_series(n_max, 0.0, [&](long long n) {
        if (r[n] == 0) return 0.0;
        const double nd = static_cast<double>(n);
        return static_cast<double>(r[n]) * std::sqrt(x / nd) * specfun::detail::j1_value(2 * pi * std::sqrt(nd * x));
    });
}

enum class SingleSeries { VORONOI, HARDY };

// RMS of (partial sum - reference) over n in [10^j, 10^{j+1}) for j = first..last.
inline std::vector<double> decade_rms_error(SingleSeries kind, double x, int first, int last, double reference)
{
    detail::check_x(x);
    if (first < 0 || last < first || last > 8) throw ValidationError("decade_rms_error: decades must satisfy 0 <= first <= last <= 8");
    long long n_max = 1;
    for (int j = 0; j <= last; ++j) n_max *= 10;
    const double pi = std::numbers::pi;
    std::vector<long long> weights = kind == SingleSeries::VORONOI ? arith::divisor_table(n_max) : arith::r2_table(n_max);
    std::vector<double> sq(static_cast<std::size_t>(last - first + 1), 0.0), cnt(sq.size(), 0.0);
    CompensatedSum s;
    s.add(kind == SingleSeries::VORONOI ? 0.25 : 0.0);
    long long lo = 1;
    for (int j = 0; j < first; ++j) lo *= 10;
    int dec = first;
    long long next = lo * 10;
    for (long long n = 1; n < n_max; ++n) {
        const double nd = static_cast<double>(n);
        if (weights[n] != 0) {
            const double w = static_cast<double>(weights[n]) * std::sqrt(x / nd);
            s.add(kind == SingleSeries::VORONOI ? w * specfun::detail::icomb1_value(4 * pi * std::sqrt(nd * x))
                                                : w * specfun::detail::j1_value(2 * pi * std::sqrt(nd * x)));
        }
        if (n < lo) continue;
        if (n == next) {
            ++dec;
            next *= 10;
        }
        const double e = s.value() - reference;
        sq[dec - first] += e * e;
        cnt[dec - first] += 1;
    }
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = std::sqrt(sq[i] / cnt[i]);
    return sq;
}

// pi x (1/2 - theta) - cot(pi theta)/4 + (sqrt x / 2) sum_{m>=1, n>=0} [J1(4 pi sqrt(m(n+theta)x))/sqrt(m(n+theta)) - (theta -> 1-theta)]
inline SeriesResult entry1_rhs(double theta, double x, const TruncationSchedule& t = {})
{
    detail::check_phase(theta, "theta");
    detail::check_x(x);
    const double pi = std::numbers::pi, c = 4 * pi * std::sqrt(x);
    auto trace = detail::double_sum(detail::checkpoints_for(t), 1, 0, t.grouping, [&](long long m, long long n, double* out) {
        const double a = m * (n + theta), b = m * (n + 1 - theta);
        out[0] = specfun::detail::j1_value(c * std::sqrt(a)) / std::sqrt(a);
        out[1] = -specfun::detail::j1_value(c * std::sqrt(b)) / std::sqrt(b);
        return 2;
    });
    return detail::finish(std::move(trace), pi * x * (0.5 - theta) - 1 / (4 * std::tan(pi * theta)), std::sqrt(x) / 2);
}

// 1/4 - x log(2 sin(pi theta)) + (sqrt x / 2) sum_{m>=1, n>=0} [I1(...(n+theta)...)/... + I1(...(n+1-theta)...)/...]
inline SeriesResult entry2_rhs(double theta, double x, const TruncationSchedule& t = {})
{
    detail::check_phase(theta, "theta");
    detail::check_x(x);
    const double pi = std::numbers::pi, c = 4 * pi * std::sqrt(x);
    auto trace = detail::double_sum(detail::checkpoints_for(t), 1, 0, t.grouping, [&](long long m, long long n, double* out) {
        const double a = m * (n + theta), b = m * (n + 1 - theta);
        out[0] = specfun::detail::icomb1_value(c * std::sqrt(a)) / std::sqrt(a);
        out[1] = specfun::detail::icomb1_value(c * std::sqrt(b)) / std::sqrt(b);
        return 2;
    });
    return detail::finish(std::move(trace), 0.25 - x * std::log(2 * std::sin(pi * theta)), std::sqrt(x) / 2);
}

enum class BalancedKind { BI_J, TI_I, TT_T };

inline const char* to_string(BalancedKind k)
{
    switch (k) {
    case BalancedKind::BI_J: return "BI_J";
    case BalancedKind::TI_I: return "TI_I";
    case BalancedKind::TT_T: return "TT_T";
    }
    return "?";
}

// Cell term order: (m+s, n+t), (m+1-s, n+t), (m+s, n+1-t), (m+1-s, n+1-t).
inline std::array<int, 4> sign_pattern(BalancedKind k)
{
    switch (k) {
    case BalancedKind::BI_J: return {1, 1, -1, -1};
    case BalancedKind::TI_I: return {1, 1, 1, 1};
    case BalancedKind::TT_T: return {1, -1, -1, 1};
    }
    return {0, 0, 0, 0};
}

// Four-term cells over m, n >= 0, scaled by sqrt(x)/4 (x sqrt(x)/4 for TT_T). For k >= 1 each
// cell term is replaced by its symbolic d^{2k}/d sigma^k d theta^k.
inline SeriesResult balanced_rhs(BalancedKind kind, int k, double sigma, double theta, double x, const TruncationSchedule& t = {},
                                 int k_max = kDefaultKMax)
{
    detail::check_phase(sigma, "sigma");
    detail::check_phase(theta, "theta");
    detail::check_x(x);
    if (k < 0) throw DomainError("balanced_rhs: k must be >= 0");
    if (k > k_max) throw UnsupportedError("balanced_rhs: k exceeds k_max");
    const double pi = std::numbers::pi, sx = std::sqrt(x), c = 4 * pi * sx;
    const auto pat = sign_pattern(kind);
    const double scale = kind == BalancedKind::TT_T ? x * sx / 4 : sx / 4;
    const std::array<double, 2> sa{sigma, 1 - sigma}, ta{theta, 1 - theta};
    auto cps = detail::checkpoints_for(t);
    std::vector<TracePoint> trace;
    if (k == 0) {
        trace = detail::double_sum(cps, 0, 0, t.grouping, [&](long long m, long long n, double* out) {
            for (int i = 0; i < 4; ++i) {
                const double A = m + sa[i & 1], B = n + ta[i >> 1];
                const double u = c * std::sqrt(A * B);
                double v = 0;
                switch (kind) {
                case BalancedKind::BI_J: v = specfun::detail::j1_value(u); break;
                case BalancedKind::TI_I: v = specfun::detail::icomb1_value(u); break;
                case BalancedKind::TT_T: v = specfun::detail::t32_value_u(u); break;
                }
                out[i] = pat[i] * v / std::sqrt(A * B);
            }
            return 4;
        });
    } else {
        using balanced::BesselKind;
        using balanced::ShiftSign;
        const BesselKind bk = kind == BalancedKind::BI_J ? BesselKind::J : kind == BalancedKind::TI_I ? BesselKind::Icomb : BesselKind::T;
        std::array<balanced::TermExpansion, 4> ex;
        for (int i = 0; i < 4; ++i)
            ex[i] = balanced::expand_mixed_partial(bk, k, k, Rational(1, 2), Rational(1, 2), (i & 1) ? ShiftSign::minus : ShiftSign::plus,
                                                   (i >> 1) ? ShiftSign::minus : ShiftSign::plus);
        trace = detail::double_sum(cps, 0, 0, t.grouping, [&](long long m, long long n, double* out) {
            for (int i = 0; i < 4; ++i) out[i] = pat[i] * balanced::evaluate_expansion(ex[i], m, n, sigma, theta, x);
            return 4;
        });
    }
    return detail::finish(std::move(trace), 0.0, scale);
}

// (x^{3/2} sqrt(pq)/4) sum over N1 = +-a mod p, N2 = +-b mod q of (-1)^{sgn} T_{3/2}(4 pi^2 N1 N2 x/(pq))/sqrt(N1 N2),
// with N1 <= p(t.m_max + 1) and N2 <= q(t.n_max + 1) in cell steps.
inline SeriesResult riesz_k2_rhs(long long p, long long q, long long a, long long b, double x, const TruncationSchedule& t = {})
{
    detail::check_x(x);
    if (p < 2 || q < 2 || a <= 0 || a >= p || b <= 0 || b >= q) throw ValidationError("riesz_k2_rhs: need 0 < a < p, 0 < b < q");
    const double pi = std::numbers::pi, pq = static_cast<double>(p * q);
    auto trace = detail::double_sum(detail::checkpoints_for(t), 0, 0, t.grouping, [&](long long m, long long n, double* out) {
        const std::array<long long, 2> N1{p * m + a, p * m + p - a}, N2{q * n + b, q * n + q - b};
        for (int i = 0; i < 4; ++i) {
            const double n1 = static_cast<double>(N1[i & 1]), n2 = static_cast<double>(N2[i >> 1]);
            const double sgn = ((i & 1) ^ (i >> 1)) ? -1.0 : 1.0;
            out[i] = sgn * specfun::detail::t32_value_u(4 * pi * std::sqrt(n1 * n2 * x / pq)) / std::sqrt(n1 * n2);
        }
        return 4;
    });
    return detail::finish(std::move(trace), 0.0, x * std::sqrt(x) * std::sqrt(pq) / 4);
}

}  // namespace trigbessel::series
