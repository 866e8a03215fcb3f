#include <gtest/gtest.h>

#include <cmath>

#include "trigbessel/experiments.hpp"

namespace ex = trigbessel::experiments;
namespace ar = trigbessel::arith;
using trigbessel::Rational;

TEST(Experiments, EntryReportShapeAndVerdict)
{
    auto rep = ex::verify_identity(ex::IdentityId::ENTRY1, {{"theta", 0.3}, {"x", 2.5}}, {6, 9});
    ASSERT_EQ(rep.error_trace.size(), 4u);  // 64, 128, 256, 512
    EXPECT_EQ(rep.error_trace.front().label, "64x64");
    EXPECT_EQ(rep.error_trace.back().label, "512x512");
    auto j = rep.to_json();
    for (const char* k : {"id", "params", "error_trace", "passed", "seed", "versions"}) EXPECT_TRUE(j.contains(k)) << k;
    EXPECT_EQ(j["id"], "ENTRY1");
    auto v = ex::trend_verdict(rep.error_trace, 1e-2);
    EXPECT_EQ(rep.passed, v.max_rule);
    EXPECT_NEAR(rep.error_trace.front().lhs, 1.3143277802978344, 1e-12);
}

TEST(Experiments, TrendRule)
{
    std::vector<ex::TracePoint> t{{"a", 0, 0, 0.1}, {"b", 0, 0, 0.005}};
    auto v = ex::trend_verdict(t, 1e-2);
    EXPECT_TRUE(v.trend_and_cap);
    EXPECT_TRUE(v.max_rule);
    t.back().abs_error = 0.015;
    v = ex::trend_verdict(t, 1e-2);
    EXPECT_FALSE(v.trend_and_cap);
    EXPECT_TRUE(v.max_rule);
    t.front().abs_error = 0.004;
    t.back().abs_error = 0.003;
    v = ex::trend_verdict(t, 1e-2);
    EXPECT_FALSE(v.trend_and_cap);
    EXPECT_TRUE(v.max_rule);
}

TEST(Experiments, TTIdentityPasses)
{
    auto rep = ex::verify_identity(ex::IdentityId::TT_K0, {{"sigma", 0.25}, {"theta", 0.25}, {"x", 6.0}}, {6, 10});
    EXPECT_TRUE(rep.passed) << rep.to_json().dump(1);
}

TEST(Experiments, BalancedKOne)
{
    auto rep = ex::verify_identity(ex::IdentityId::BALANCED_K1, {{"cells", 10}});
    EXPECT_EQ(rep.error_trace.size(), 10u);
    EXPECT_TRUE(rep.passed) << rep.to_json().dump(1);
    EXPECT_LT(rep.details["fd_max_rel_error"].get<double>(), 1e-5);
}

TEST(Experiments, IdentityValidation)
{
    EXPECT_THROW(ex::verify_identity(ex::IdentityId::ENTRY1, {{"x", 2.5}}, {6, 7}), trigbessel::ValidationError);
    EXPECT_THROW(ex::verify_identity(ex::IdentityId::ENTRY1, {{"theta", 1.5}, {"x", 2.5}}, {6, 7}), trigbessel::ValidationError);
    EXPECT_THROW(ex::verify_identity(ex::IdentityId::ENTRY1, {{"theta", 0.3}, {"x", 2.5}}, {6, 20}), trigbessel::ResourceLimitError);
    EXPECT_THROW(ex::verify_identity(ex::IdentityId::RIESZ_K2_RHO0, {{"p", 6}, {"q", 7}, {"a", 1}, {"b", 1}, {"x", 6}}, {6, 7}),
                 trigbessel::UnsupportedError);
    EXPECT_THROW(ex::identity_from_string("nope"), trigbessel::ValidationError);
    EXPECT_EQ(ex::identity_from_string("entry2"), ex::IdentityId::ENTRY2);
}

TEST(Experiments, RieszBelowOne)
{
    auto rep = ex::verify_riesz_k2(5, 7, 1, 1, 0.8, {6, 9});
    EXPECT_EQ(rep.error_trace.front().lhs, 0.0);
    EXPECT_LT(rep.error_trace.back().abs_error, rep.error_trace.front().abs_error + 1e-3);
}

TEST(Experiments, DecompositionsAcrossModuli)
{
    for (auto [p, q] : {std::pair{5LL, 7LL}, std::pair{5LL, 11LL}, std::pair{7LL, 11LL}})
        for (double x : {20.5, 50.5, 100.5, 50.0})
            for (auto id : {ex::DecompositionId::CC, ex::DecompositionId::CS, ex::DecompositionId::SS}) {
                for (long long a = 1; a < p; a += 2)
                    for (long long b = 1; b < q; b += 3) {
                        auto rep = ex::verify_decomposition(id, {p, q, a, b, x});
                        EXPECT_TRUE(rep.passed) << rep.to_json().dump(1);
                    }
            }
}

TEST(Experiments, FloorDecompositions)
{
    for (long long q : {3LL, 5LL, 7LL, 11LL})
        for (long long a = 1; a < q; ++a)
            for (double x : {30.5, 20.0, 100.5}) {
                EXPECT_TRUE(ex::verify_decomposition(ex::DecompositionId::FLOOR_COS, {5, q, a, 1, x}).passed) << q << " " << a << " " << x;
                EXPECT_TRUE(ex::verify_decomposition(ex::DecompositionId::FLOOR_SIN, {5, q, a, 1, x}).passed) << q << " " << a << " " << x;
            }
}

TEST(Experiments, CharacterSumChecks)
{
    for (long long q : {3LL, 5LL, 7LL, 11LL}) {
        EXPECT_TRUE(ex::verify_decomposition(ex::DecompositionId::SINE_CHARS, {5, q, 1, 1, 10}).passed);
        auto rep = ex::verify_decomposition(ex::DecompositionId::ODD_ORTHOGONALITY, {5, q, 1, 1, 10});
        EXPECT_TRUE(rep.passed);
        EXPECT_EQ(rep.error_trace.size(), static_cast<std::size_t>(q * q));
    }
}

TEST(Experiments, DecompositionGuards)
{
    EXPECT_THROW(ex::verify_decomposition(ex::DecompositionId::CC, {9, 7, 1, 1, 20.5}), trigbessel::UnsupportedError);
    EXPECT_THROW(ex::verify_decomposition(ex::DecompositionId::CC, {5, 7, 5, 1, 20.5}), trigbessel::DomainError);
    EXPECT_THROW(ex::verify_decomposition(ex::DecompositionId::CC, {5, 7, 1, 1, 2e4}), trigbessel::ValidationError);
    EXPECT_EQ(ex::decomposition_from_string("floor_sin"), ex::DecompositionId::FLOOR_SIN);
}

TEST(Experiments, ReportsAreDeterministic)
{
    auto strip = [](nlohmann::json j) {
        j.erase("elapsed_seconds");
        return j.dump();
    };
    auto a = ex::verify_identity(ex::IdentityId::ENTRY2, {{"theta", 0.3}, {"x", 2.5}}, {6, 8});
    auto b = ex::verify_identity(ex::IdentityId::ENTRY2, {{"theta", 0.3}, {"x", 2.5}}, {6, 8});
    EXPECT_EQ(strip(a.to_json()), strip(b.to_json()));
    auto c = ex::verify_identity(ex::IdentityId::BALANCED_K1, {{"cells", 4}});
    auto d = ex::verify_identity(ex::IdentityId::BALANCED_K1, {{"cells", 4}});
    EXPECT_EQ(strip(c.to_json()), strip(d.to_json()));
    auto g1 = ex::growth_probe(ex::GrowthKind::DELTA, Rational(1, 3), 1e4, 50);
    auto g2 = ex::growth_probe(ex::GrowthKind::DELTA, Rational(1, 3), 1e4, 50);
    EXPECT_EQ(g1.to_csv(), g2.to_csv());
}

TEST(Experiments, GrowthGridInvariants)
{
    for (auto kind : {ex::GrowthKind::DELTA, ex::GrowthKind::P_CIRCLE, ex::GrowthKind::D_CHI2, ex::GrowthKind::DSTAR_CHI2, ex::GrowthKind::SS_QUARTER,
                      ex::GrowthKind::DK}) {
        auto g = ex::growth_probe(kind, Rational(1, 4), 2e4, 60);
        ASSERT_GT(g.grid.size(), 30u);
        for (std::size_t i = 0; i < g.grid.size(); ++i) {
            EXPECT_NE(g.grid[i], std::floor(g.grid[i]));
            if (i) {
                EXPECT_GT(g.grid[i], g.grid[i - 1]);
                EXPECT_GE(g.running_max[i], g.running_max[i - 1]);
            }
        }
        auto csv = g.to_csv();
        EXPECT_EQ(csv.substr(0, csv.find('\n')), "x,ratio,running_max,exponent,kind");
    }
}

TEST(Experiments, GrowthValuesMatchDirectSums)
{
    auto g = ex::growth_probe(ex::GrowthKind::SS_QUARTER, Rational(4, 3), 3000, 20);
    for (std::size_t i = 0; i < g.grid.size(); ++i) {
        double direct = ar::trig_sum({ar::TrigKind::LATTICE_QQ, {}, {}, g.grid[i]});
        EXPECT_NEAR(g.values[i], std::fabs(direct), 1e-7 * std::max(1.0, std::fabs(direct)));
    }
    auto d = ex::growth_probe(ex::GrowthKind::DELTA, Rational(1, 4), 1000, 10);
    for (std::size_t i = 0; i < d.grid.size(); ++i) EXPECT_DOUBLE_EQ(d.values[i], std::fabs(ar::delta_error(d.grid[i])));
    auto dk = ex::growth_probe(ex::GrowthKind::DK, Rational(1), 300, 5, {}, {10, 2});
    namespace ch = trigbessel::chars;
    ar::TwistedDivisorSpec spec{{ch::enumerate_characters(3)[1], ch::enumerate_characters(5)[1]}, 1};
    for (std::size_t i = 0; i < dk.grid.size(); ++i) {
        std::complex<double> s = 0;
        for (long long n = 1; n <= static_cast<long long>(dk.grid[i]); ++n) s += ar::twisted_divisor(spec, n);
        EXPECT_NEAR(dk.values[i], std::abs(s), 1e-8 * std::max(1.0, std::abs(s)));
    }
}

TEST(Experiments, GrowthEvidenceShape)
{
    auto omega = ex::growth_probe(ex::GrowthKind::DELTA, Rational(1, 4), 1e6, 200);
    EXPECT_GE(omega.decades_with_new_max(), 3);
    auto big = ex::growth_probe(ex::GrowthKind::DELTA, Rational(1, 3), 1e6, 200);
    EXPECT_LT(big.max_ratio_over_log(), 1.0);
    auto ss = ex::growth_probe(ex::GrowthKind::SS_QUARTER, Rational(4, 3), 1e5, 100);
    EXPECT_LT(ss.running_max.back(), 10.0);
}

TEST(Experiments, GrowthCeilings)
{
    ex::ExperimentConfig cfg;
    cfg.max_x = 1e5;
    EXPECT_THROW(ex::growth_probe(ex::GrowthKind::DELTA, Rational(1, 4), 1e6, 10, cfg), trigbessel::ResourceLimitError);
    EXPECT_THROW(ex::growth_probe(ex::GrowthKind::DELTA, Rational(1, 4), 1e4, 1'000'000, cfg), trigbessel::ResourceLimitError);
    EXPECT_THROW(ex::growth_probe(ex::GrowthKind::DELTA, Rational(1, 4), 5, 10, cfg), trigbessel::ValidationError);
    EXPECT_THROW(ex::growth_from_string("nope"), trigbessel::ValidationError);
}
