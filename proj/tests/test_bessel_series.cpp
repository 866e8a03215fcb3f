#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "trigbessel/bessel_series.hpp"

namespace se = trigbessel::series;
namespace ar = trigbessel::arith;
namespace bl = trigbessel::balanced;

namespace {
constexpr double kPi = std::numbers::pi;

double entry1_lhs(double theta, double x) { return ar::trig_sum({ar::TrigKind::ENTRY1_LHS, ar::Phase::of(theta), {}, x}); }
double entry2_lhs(double theta, double x) { return ar::trig_sum({ar::TrigKind::ENTRY2_LHS, ar::Phase::of(theta), {}, x}); }

double tail_rms(const se::SeriesResult& r, double lhs, std::size_t count)
{
    double s = 0;
    const auto& tr = r.partial_trace;
    for (std::size_t i = tr.size() - count; i < tr.size(); ++i) s += (tr[i].value - lhs) * (tr[i].value - lhs);
    return std::sqrt(s / static_cast<double>(count));
}
}  // namespace

TEST(BesselSeries, SingleTermContracts)
{
    for (double x : {0.7, 2.5, 9.1}) {
        auto v = se::voronoi_delta_series(x, 1);
        EXPECT_NEAR(v.value, 0.25 + std::sqrt(x) * trigbessel::specfun::i_comb(1, 4 * kPi * std::sqrt(x)).value, 1e-14);
        auto h = se::hardy_p_series(x, 1);
        EXPECT_NEAR(h.value, 4 * std::sqrt(x) * std::cyl_bessel_j(1.0, 2 * kPi * std::sqrt(x)), 1e-13);
    }
}

TEST(BesselSeries, VoronoiDecadeErrorDecreases)
{
    for (double x : {5.5, 0.5}) {
        auto rms = se::decade_rms_error(se::SingleSeries::VORONOI, x, 2, 4, ar::delta_error(x));
        ASSERT_EQ(rms.size(), 3u);
        EXPECT_GT(rms[0], rms[1]) << x;
        EXPECT_GT(rms[1], rms[2]) << x;
    }
    EXPECT_LT(se::decade_rms_error(se::SingleSeries::VORONOI, 0.5, 4, 4, ar::delta_error(0.5))[0], 0.03);
}

TEST(BesselSeries, HardyDecadeErrorDecreases)
{
    for (double x : {2.5, 3.5}) {
        auto rms = se::decade_rms_error(se::SingleSeries::HARDY, x, 2, 4, ar::circle_R_and_P(x).P);
        EXPECT_GT(rms[0], rms[1]) << x;
        EXPECT_GT(rms[1], rms[2]) << x;
    }
}

TEST(BesselSeries, TraceStructure)
{
    auto r = se::entry1_rhs(0.3, 2.5, {256, 64});
    ASSERT_FALSE(r.partial_trace.empty());
    for (std::size_t i = 1; i < r.partial_trace.size(); ++i) {
        EXPECT_GE(r.partial_trace[i].m_max, r.partial_trace[i - 1].m_max);
        EXPECT_GE(r.partial_trace[i].n_max, r.partial_trace[i - 1].n_max);
        EXPECT_TRUE(r.partial_trace[i].m_max > r.partial_trace[i - 1].m_max || r.partial_trace[i].n_max > r.partial_trace[i - 1].n_max);
    }
    EXPECT_EQ(r.partial_trace.back().m_max, 256);
    EXPECT_EQ(r.partial_trace.back().n_max, 64);
    EXPECT_EQ(r.value, r.partial_trace.back().value);
}

TEST(BesselSeries, EntryOneConverges)
{
    const double lhs = entry1_lhs(0.3, 2.5);
    EXPECT_NEAR(lhs, 1.3143277802978344, 1e-12);
    auto r = se::entry1_rhs(0.3, 2.5, se::TruncationSchedule::square(1024));
    EXPECT_LT(std::fabs(r.value - lhs), 0.02);
    EXPECT_LT(tail_rms(r, lhs, 3), 0.02);
}

TEST(BesselSeries, EntryOneSymmetricTheta)
{
    auto r = se::entry1_rhs(0.5, 37.5, se::TruncationSchedule::square(128));
    EXPECT_NEAR(r.value, 0.0, 1e-12);
    EXPECT_NEAR(entry1_lhs(0.5, 37.5), 0.0, 1e-12);
}

TEST(BesselSeries, EntryOneQuarterIsCircleCount)
{
    for (double x : {2.0, 7.3, 10.0})
        EXPECT_NEAR(entry1_lhs(0.25, x), (ar::circle_R_and_P(x).R - 1) / 4, 1e-12) << x;
    auto r = se::entry1_rhs(0.25, 2.0, se::TruncationSchedule::square(1024));
    EXPECT_LT(std::fabs(r.value - 1.5), 0.03);
}

TEST(BesselSeries, EntryTwoConverges)
{
    const double lhs = entry2_lhs(0.3, 2.5);
    EXPECT_NEAR(lhs, 2 * std::cos(0.6 * kPi) + std::cos(1.2 * kPi), 1e-14);
    auto r = se::entry2_rhs(0.3, 2.5, se::TruncationSchedule::square(1024));
    EXPECT_LT(tail_rms(r, lhs, 3), 0.03);
    EXPECT_DOUBLE_EQ(entry2_lhs(0.5, 1.5), -1.0);
    auto h = se::entry2_rhs(0.5, 1.5, se::TruncationSchedule::square(1024));
    EXPECT_LT(std::fabs(h.value + 1.0), 0.03);
}

TEST(BesselSeries, DomainGuards)
{
    EXPECT_THROW(se::entry1_rhs(0.0, 2.5, {8, 8}), trigbessel::DomainError);
    EXPECT_THROW(se::entry1_rhs(1.0, 2.5, {8, 8}), trigbessel::DomainError);
    EXPECT_THROW(se::entry2_rhs(0.0, 2.5, {8, 8}), trigbessel::DomainError);
    EXPECT_THROW(se::entry2_rhs(0.3, -1.0, {8, 8}), trigbessel::DomainError);
    EXPECT_THROW(se::balanced_rhs(se::BalancedKind::BI_J, 0, 1.2, 0.3, 2.5, {8, 8}), trigbessel::DomainError);
    EXPECT_THROW(se::balanced_rhs(se::BalancedKind::BI_J, 3, 0.2, 0.3, 2.5, {8, 8}), trigbessel::UnsupportedError);
    EXPECT_THROW(se::entry1_rhs(0.3, 2.5, {0, 8}), trigbessel::ValidationError);
}

TEST(BesselSeries, RawGroupingAgreesWithPaired)
{
    for (auto kind : {se::BalancedKind::BI_J, se::BalancedKind::TI_I, se::BalancedKind::TT_T}) {
        auto p = se::balanced_rhs(kind, 0, 0.3, 0.4, 2.5, se::TruncationSchedule::square(256));
        auto r = se::balanced_rhs(kind, 0, 0.3, 0.4, 2.5, se::TruncationSchedule::square(256, se::Grouping::raw));
        ASSERT_EQ(p.partial_trace.size(), r.partial_trace.size());
        for (std::size_t i = 0; i < p.partial_trace.size(); ++i)
            EXPECT_LT(std::fabs(p.partial_trace[i].value - r.partial_trace[i].value), std::max(1e-11, p.est_tail));
    }
}

TEST(BesselSeries, BalancedKZeroAgainstLhs)
{
    const auto sched = se::TruncationSchedule::square(1024);
    struct Case {
        se::BalancedKind kind;
        bl::LhsKind lhs;
        double s, t, x, tol;
    };
    for (auto c : {Case{se::BalancedKind::BI_J, bl::LhsKind::BI, 0.3, 0.4, 2.5, 0.03}, Case{se::BalancedKind::TI_I, bl::LhsKind::TI, 0.3, 0.4, 2.5, 0.03},
                   Case{se::BalancedKind::TT_T, bl::LhsKind::TT, 0.25, 0.25, 6.0, 0.03}}) {
        double lhs = bl::lhs_mixed_partial(c.lhs, 0, c.s, c.t, c.x);
        auto r = se::balanced_rhs(c.kind, 0, c.s, c.t, c.x, sched);
        EXPECT_LT(tail_rms(r, lhs, 3), c.tol) << se::to_string(c.kind);
    }
    EXPECT_NEAR(bl::lhs_mixed_partial(bl::LhsKind::TT, 0, 0.25, 0.25, 6.0), 5.0, 1e-12);
}

TEST(BesselSeries, BalancedSwappedPhases)
{
    const auto sched = se::TruncationSchedule::square(1024);
    auto r = se::balanced_rhs(se::BalancedKind::BI_J, 0, 0.4, 0.3, 2.5, sched);
    double cs = ar::trig_sum({ar::TrigKind::BI_LHS, ar::Phase::of(0.4), ar::Phase::of(0.3), 2.5}) + 1 / (4 * std::tan(0.3 * kPi));
    EXPECT_LT(tail_rms(r, cs, 3), 0.03);
}

TEST(BesselSeries, BalancedKOneApproachesDifferentiatedLhs)
{
    for (auto [kind, lhs_kind] : {std::pair{se::BalancedKind::BI_J, bl::LhsKind::BI}, std::pair{se::BalancedKind::TI_I, bl::LhsKind::TI}}) {
        double lhs = bl::lhs_mixed_partial(lhs_kind, 1, 0.3, 0.4, 2.5);
        auto r = se::balanced_rhs(kind, 1, 0.3, 0.4, 2.5, se::TruncationSchedule::square(256));
        EXPECT_LT(std::fabs(r.value - lhs), 0.1 * std::fabs(lhs)) << se::to_string(kind);
    }
}

TEST(BesselSeries, RieszResidueClassesMatchCells)
{
    auto sched = se::TruncationSchedule::square(128);
    auto riesz = se::riesz_k2_rhs(5, 7, 2, 3, 10.3, sched);
    auto cells = se::balanced_rhs(se::BalancedKind::TT_T, 0, 2.0 / 5, 3.0 / 7, 10.3, sched);
    EXPECT_NEAR(riesz.value, cells.value, 1e-10 * std::max(1.0, std::fabs(cells.value)));
    double ss = ar::trig_sum({ar::TrigKind::SS, ar::Phase::fraction(1, 5), ar::Phase::fraction(1, 7), 6.0});
    auto r = se::riesz_k2_rhs(5, 7, 1, 1, 6.0, se::TruncationSchedule::square(1024));
    EXPECT_LT(tail_rms(r, ss, 3), 0.05);
}

TEST(BesselSeries, TailEstimateOrderOfMagnitude)
{
    for (auto [theta, x] : {std::pair{0.3, 2.5}, std::pair{0.25, 10.3}}) {
        auto sched = se::TruncationSchedule::square(2048);
        auto r1 = se::entry1_rhs(theta, x, sched);
        double rms1 = tail_rms(r1, entry1_lhs(theta, x), 3);
        EXPECT_LT(r1.est_tail, 10 * rms1);
        EXPECT_GT(r1.est_tail, rms1 / 10);
        auto r2 = se::entry2_rhs(theta, x, sched);
        double rms2 = tail_rms(r2, entry2_lhs(theta, x), 3);
        EXPECT_LT(r2.est_tail, 10 * rms2);
        EXPECT_GT(r2.est_tail, rms2 / 10);
    }
}
