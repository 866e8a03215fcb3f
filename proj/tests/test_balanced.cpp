#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "trigbessel/balanced.hpp"

namespace bl = trigbessel::balanced;
namespace ar = trigbessel::arith;
using bl::BesselKind;
using bl::ShiftSign;
using trigbessel::Rational;

namespace {
constexpr double kPi = std::numbers::pi;
const Rational kHalf(1, 2);

bool same_terms(const std::vector<bl::CellTerm>& a, const std::vector<bl::CellTerm>& b)
{
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].key() != b[i].key() || a[i].coeff != b[i].coeff) return false;
    return true;
}

double fd_mixed(BesselKind kind, ShiftSign ss, ShiftSign ts, long long m, long long n, double s, double t, double x, double h)
{
    auto e = bl::identity_expansion(kind, kHalf, kHalf, ss, ts);
    auto f = [&](double a, double b) { return bl::evaluate_expansion(e, m, n, a, b, x); };
    return (f(s + h, t + h) - f(s + h, t - h) - f(s - h, t + h) + f(s - h, t - h)) / (4 * h * h);
}
}  // namespace

TEST(Balanced, FirstSigmaDerivativeOfJ)
{
    auto e = bl::expand_mixed_partial(BesselKind::J, 1, 0, kHalf, kHalf, ShiftSign::plus, ShiftSign::plus);
    EXPECT_EQ(e.main_gamma, Rational(1));
    EXPECT_EQ(e.main_delta, Rational(0));
    ASSERT_EQ(e.terms.size(), 3u);
    // pi sqrt(x) J0 /(A^1 B^0), -pi sqrt(x) J2/(A^1 B^0), -1/2 J1/(A^{3/2} B^{1/2})
    int seen = 0;
    for (const auto& t : e.terms) {
        if (t.order == 0) {
            EXPECT_EQ(t.coeff, Rational(1));
            EXPECT_EQ(t.pi_power, 1);
            EXPECT_EQ(t.x_power, 1);
            EXPECT_EQ(t.gamma, Rational(1));
            EXPECT_EQ(t.delta, Rational(0));
            ++seen;
        } else if (t.order == 2) {
            EXPECT_EQ(t.coeff, Rational(-1));
            EXPECT_EQ(t.gamma, Rational(1));
            EXPECT_EQ(t.delta, Rational(0));
            ++seen;
        } else {
            EXPECT_EQ(t.order, 1);
            EXPECT_EQ(t.coeff, Rational(-1, 2));
            EXPECT_EQ(t.pi_power, 0);
            EXPECT_EQ(t.gamma, Rational(3, 2));
            EXPECT_EQ(t.delta, Rational(1, 2));
            ++seen;
        }
    }
    EXPECT_EQ(seen, 3);
}

TEST(Balanced, IdentityAndBalancedMainExponents)
{
    auto e0 = bl::expand_mixed_partial(BesselKind::J, 0, 0, Rational(1, 3), Rational(2, 3), ShiftSign::plus, ShiftSign::minus);
    ASSERT_EQ(e0.terms.size(), 1u);
    EXPECT_EQ(e0.terms[0].coeff, Rational(1));
    auto e11 = bl::expand_mixed_partial(BesselKind::J, 1, 1, kHalf, kHalf, ShiftSign::plus, ShiftSign::plus);
    EXPECT_EQ(e11.main_gamma, kHalf);
    EXPECT_EQ(e11.main_delta, kHalf);
}

TEST(Balanced, ExponentBookkeeping)
{
    for (auto kind : {BesselKind::J, BesselKind::Icomb, BesselKind::T})
        for (int a = 0; a <= 3; ++a)
            for (int b = 0; b + a <= 4; ++b)
                for (auto ss : {ShiftSign::plus, ShiftSign::minus}) {
                    auto e = bl::expand_mixed_partial(kind, a, b, kHalf, kHalf, ss, ShiftSign::minus);
                    EXPECT_EQ(e.main_gamma + e.main_delta, Rational(1));
                    bool has_main = false;
                    for (const auto& t : e.terms) {
                        EXPECT_GE(t.gamma, e.main_gamma);
                        EXPECT_GE(t.delta, e.main_delta);
                        if (t.gamma == e.main_gamma && t.delta == e.main_delta) has_main = true;
                        else EXPECT_GT(t.gamma + t.delta, Rational(1));
                    }
                    EXPECT_TRUE(has_main) << bl::to_string(kind) << " " << a << " " << b;
                }
}

TEST(Balanced, BalancedClosure)
{
    for (auto kind : {BesselKind::J, BesselKind::Icomb, BesselKind::T})
        for (int k : {1, 2}) {
            auto e = bl::expand_mixed_partial(kind, k, k, kHalf, kHalf, ShiftSign::minus, ShiftSign::plus);
            EXPECT_EQ(e.main_gamma, kHalf);
            EXPECT_EQ(e.main_delta, kHalf);
        }
}

TEST(Balanced, DerivativeLinearity)
{
    for (auto kind : {BesselKind::J, BesselKind::Icomb, BesselKind::T})
        for (int a = 0; a <= 2; ++a)
            for (int b = 0; b <= 2; ++b) {
                auto base = bl::expand_mixed_partial(kind, a, b, kHalf, kHalf, ShiftSign::plus, ShiftSign::minus);
                auto next = bl::expand_mixed_partial(kind, a + 1, b, kHalf, kHalf, ShiftSign::plus, ShiftSign::minus);
                auto stepped = bl::derive(base, true);
                EXPECT_TRUE(same_terms(next.terms, stepped.terms)) << bl::to_string(kind) << " " << a << " " << b;
                EXPECT_EQ(next.main_gamma, stepped.main_gamma);
                EXPECT_EQ(next.main_delta, stepped.main_delta);
            }
}

TEST(Balanced, MixedPartialChecker)
{
    for (int k = 0; k <= 3; ++k) {
        EXPECT_TRUE(bl::mixed_partial_admissible(k, k, kHalf, kHalf, false));
        EXPECT_TRUE(bl::mixed_partial_admissible(k, k, kHalf, kHalf, true));
    }
    EXPECT_FALSE(bl::mixed_partial_admissible(1, 0, kHalf, kHalf, false));
    EXPECT_FALSE(bl::mixed_partial_admissible(1, 0, kHalf, kHalf, true));
    const Rational s(9, 20);  // s + w = 0.9
    EXPECT_TRUE(bl::mixed_partial_admissible(1, 1, s, s, false));
    EXPECT_FALSE(bl::mixed_partial_admissible(1, 1, s, s, true));
}

TEST(Balanced, IdentityEvaluation)
{
    auto e = bl::identity_expansion(BesselKind::J, kHalf, kHalf, ShiftSign::plus, ShiftSign::plus);
    double expect = std::cyl_bessel_j(1.0, 4 * kPi * std::sqrt(0.12 * 2.5)) / std::sqrt(0.12);
    EXPECT_NEAR(bl::evaluate_expansion(e, 0, 0, 0.3, 0.4, 2.5), expect, 1e-13);
    auto em = bl::identity_expansion(BesselKind::J, kHalf, kHalf, ShiftSign::minus, ShiftSign::minus);
    double expect_m = std::cyl_bessel_j(1.0, 4 * kPi * std::sqrt(2.7 * 3.6 * 2.5)) / std::sqrt(2.7 * 3.6);
    EXPECT_NEAR(bl::evaluate_expansion(em, 2, 3, 0.3, 0.4, 2.5), expect_m, 1e-13);
}

TEST(Balanced, SymbolicMatchesFiniteDifferences)
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ph(0.1, 0.9), xs(0.5, 4.0);
    for (auto kind : {BesselKind::J, BesselKind::Icomb, BesselKind::T})
        for (int trial = 0; trial < 5; ++trial) {
            long long m = static_cast<long long>(rng() % 5), n = static_cast<long long>(rng() % 5);
            double s = ph(rng), t = ph(rng), x = xs(rng);
            for (auto ss : {ShiftSign::plus, ShiftSign::minus})
                for (auto ts : {ShiftSign::plus, ShiftSign::minus}) {
                    auto e = bl::expand_mixed_partial(kind, 1, 1, kHalf, kHalf, ss, ts);
                    double sym = bl::evaluate_expansion(e, m, n, s, t, x);
                    double fd = fd_mixed(kind, ss, ts, m, n, s, t, x, 1e-4);
                    EXPECT_LT(std::fabs(sym - fd), 1e-5 * std::fabs(sym))
                        << bl::to_string(kind) << " m=" << m << " n=" << n << " s=" << s << " t=" << t << " x=" << x;
                }
        }
}

TEST(Balanced, SingleSigmaDerivativeMatchesFiniteDifference)
{
    for (auto kind : {BesselKind::J, BesselKind::Icomb, BesselKind::T}) {
        auto e0 = bl::identity_expansion(kind, kHalf, kHalf, ShiftSign::minus, ShiftSign::plus);
        auto e1 = bl::expand_mixed_partial(kind, 1, 0, kHalf, kHalf, ShiftSign::minus, ShiftSign::plus);
        const double h = 1e-5, s = 0.37, t = 0.61, x = 1.7;
        double fd = (bl::evaluate_expansion(e0, 1, 2, s + h, t, x) - bl::evaluate_expansion(e0, 1, 2, s - h, t, x)) / (2 * h);
        double sym = bl::evaluate_expansion(e1, 1, 2, s, t, x);
        EXPECT_LT(std::fabs(sym - fd), 1e-6 * std::fabs(sym)) << bl::to_string(kind);
    }
}

TEST(Balanced, FirstBalancedDerivativeIdentity)
{
    for (auto [m, n, s, t, x] : {std::tuple{0LL, 0LL, 0.3, 0.4, 2.5}, std::tuple{2LL, 5LL, 0.25, 0.7, 1.2}}) {
        auto r = bl::verify_k1_pointwise(m, n, s, t, x);
        EXPECT_LT(std::fabs(r.lhs - r.rhs), 1e-8 * std::max(1.0, std::fabs(r.rhs)));
    }
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ph(0.01, 0.99), xs(0.3, 12.0);
    for (int i = 0; i < 10; ++i) {
        auto r = bl::verify_k1_pointwise(static_cast<long long>(rng() % 20), static_cast<long long>(rng() % 20), ph(rng), ph(rng), xs(rng));
        EXPECT_LT(std::fabs(r.lhs - r.rhs), 1e-8 * std::max(1.0, std::fabs(r.rhs)));
    }
    EXPECT_THROW(bl::verify_k1_pointwise(0, 0, 0.0, 0.4, 2.5), trigbessel::DomainError);
    EXPECT_THROW(bl::verify_k1_pointwise(0, 0, 0.3, 1.0, 2.5), trigbessel::DomainError);
}

TEST(Balanced, LhsMixedPartial)
{
    using K = ar::TrigKind;
    for (double x : {2.5, 6.0, 17.3}) {
        double tt = ar::trig_sum({K::TT_LHS, ar::Phase::of(0.3), ar::Phase::of(0.4), x});
        EXPECT_NEAR(bl::lhs_mixed_partial(bl::LhsKind::TI, 1, 0.3, 0.4, x), 4 * kPi * kPi * tt, 1e-9 * std::max(1.0, x * x));
        double bi = ar::trig_sum({K::BI_LHS, ar::Phase::of(0.3), ar::Phase::of(0.4), x});
        EXPECT_NEAR(bl::lhs_mixed_partial(bl::LhsKind::BI, 0, 0.3, 0.4, x), bi + 1 / (4 * std::tan(0.4 * kPi)), 1e-12);
    }
    EXPECT_DOUBLE_EQ(bl::lhs_mixed_partial(bl::LhsKind::TI, 0, 0.3, 0.4, 0.5), -0.25);
    EXPECT_DOUBLE_EQ(bl::lhs_mixed_partial(bl::LhsKind::BI, 0, 0.3, 0.4, 0.5), 1 / (4 * std::tan(0.4 * kPi)));
    EXPECT_DOUBLE_EQ(bl::lhs_mixed_partial(bl::LhsKind::TT, 1, 0.3, 0.4, 0.5), 0);
}

TEST(Balanced, LhsMixedPartialMatchesFiniteDifference)
{
    const double h = 1e-4, x = 7.5;
    for (auto kind : {bl::LhsKind::BI, bl::LhsKind::TI, bl::LhsKind::TT}) {
        auto f = [&](double s, double t) { return bl::lhs_mixed_partial(kind, 0, s, t, x); };
        double s = 0.3, t = 0.4;
        double fd = (f(s + h, t + h) - f(s + h, t - h) - f(s - h, t + h) + f(s - h, t - h)) / (4 * h * h);
        double sym = bl::lhs_mixed_partial(kind, 1, s, t, x);
        EXPECT_LT(std::fabs(fd - sym), 1e-5 * std::fabs(sym)) << bl::to_string(kind);
    }
}

TEST(Balanced, GuardsAndPrinter)
{
    EXPECT_THROW(bl::expand_mixed_partial(BesselKind::J, 4, 3, kHalf, kHalf, ShiftSign::plus, ShiftSign::plus), trigbessel::UnsupportedError);
    EXPECT_THROW(bl::expand_mixed_partial(BesselKind::Y, 1, 1, kHalf, kHalf, ShiftSign::plus, ShiftSign::plus), trigbessel::UnsupportedError);
    auto e = bl::expand_mixed_partial(BesselKind::J, 1, 0, kHalf, kHalf, ShiftSign::plus, ShiftSign::plus);
    EXPECT_EQ(bl::pretty(e), "main 1 0\n1 pi^1 sqrtx^1 J 0 1 0 + +\n-1/2 pi^0 sqrtx^0 J 1 3/2 1/2 + +\n-1 pi^1 sqrtx^1 J 2 1 0 + +\n");
}
