#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "geo/error.hpp"
#include "geo/expr.hpp"
#include "geo/jet.hpp"
#include "geo/validation.hpp"
#include "oracle.hpp"

using namespace geo;

namespace {

void expect_coeffs(const Jet& j, const std::array<double, Jet::kSize>& want, double tol = 1e-15) {
    for (std::size_t k = 0; k < Jet::kSize; ++k) EXPECT_NEAR(j[k], want[k], tol) << "coefficient " << k;
}

}  // namespace

TEST(Jet, IndexOrderByTotalDegree) {
    EXPECT_EQ(Jet::index(0, 0), 0u);
    EXPECT_EQ(Jet::index(1, 0), 1u);
    EXPECT_EQ(Jet::index(0, 1), 2u);
    EXPECT_EQ(Jet::index(2, 0), 3u);
    EXPECT_EQ(Jet::index(1, 1), 4u);
    EXPECT_EQ(Jet::index(0, 2), 5u);
    EXPECT_EQ(Jet::index(3, 0), 6u);
    EXPECT_EQ(Jet::index(0, 3), 9u);
}

TEST(Jet, CoordinateJets) {
    expect_coeffs(Jet::variable(Var::u, 0.5), {0.5, 1, 0, 0, 0, 0, 0, 0, 0, 0});
    expect_coeffs(Jet::variable(Var::v, -0.25), {-0.25, 0, 1, 0, 0, 0, 0, 0, 0, 0});
}

TEST(Jet, SquareOfCoordinate) {
    const Jet u = Jet::variable(Var::u, 0.0);
    expect_coeffs(u * u, {0, 0, 0, 2, 0, 0, 0, 0, 0, 0});
}

TEST(Jet, ProductRule) {
    const Jet p = Jet::variable(Var::u, 1.0) * Jet::variable(Var::v, 2.0);
    expect_coeffs(p, {2, 2, 1, 0, 1, 0, 0, 0, 0, 0});
}

TEST(Jet, ReciprocalOfCoordinate) {
    const Jet q = Jet::constant(1.0) / Jet::variable(Var::u, 2.0);
    EXPECT_DOUBLE_EQ(q.value(), 0.5);
    EXPECT_DOUBLE_EQ(q.du(), -0.25);
    EXPECT_DOUBLE_EQ(q.duu(), 0.25);
    EXPECT_DOUBLE_EQ(q.coeff(3, 0), -0.375);
    const auto f = [](double u, double) { return 1.0 / u; };
    EXPECT_NEAR(q.coeff(3, 0), oracle::partial(f, 2.0, 0.0, 3, 0), 1e-6);
}

TEST(Jet, AdditiveInverse) {
    const Jet j = sin(Jet::variable(Var::u, 0.3)) * exp(Jet::variable(Var::v, -0.2));
    expect_coeffs(j + (-j), {});
}

TEST(Jet, SinAtZero) { expect_coeffs(sin(Jet::variable(Var::u, 0.0)), {0, 1, 0, 0, 0, 0, -1, 0, 0, 0}); }

TEST(Jet, ExpOfZeroConstant) { expect_coeffs(exp(Jet::constant(0.0)), {1, 0, 0, 0, 0, 0, 0, 0, 0, 0}); }

TEST(Jet, SqrtAtFourMatchesClosedFormAndDifferences) {
    // d/du u^(1/2) = 1/(2 sqrt u), then -1/(4 u^(3/2)), then 3/(8 u^(5/2)).
    const Jet s = sqrt(Jet::variable(Var::u, 4.0));
    EXPECT_DOUBLE_EQ(s.value(), 2.0);
    EXPECT_DOUBLE_EQ(s.du(), 0.25);
    EXPECT_DOUBLE_EQ(s.duu(), -1.0 / 32.0);
    EXPECT_DOUBLE_EQ(s.coeff(3, 0), 3.0 / 256.0);
    const auto f = [](double u, double) { return std::sqrt(u); };
    for (int a = 1; a <= 3; ++a) EXPECT_NEAR(s.coeff(a, 0), oracle::partial(f, 4.0, 0.0, a, 0), 1e-6);
}

TEST(Jet, DomainErrors) {
    EXPECT_THROW(log(Jet::constant(0.0)), DomainError);
    EXPECT_THROW(log(Jet::constant(-1.0)), DomainError);
    EXPECT_THROW(sqrt(Jet::constant(-1.0)), DomainError);
    EXPECT_THROW(sqrt(Jet::constant(0.0)), DomainError);
    EXPECT_THROW(Jet::constant(1.0) / Jet::constant(0.0), DomainError);
    EXPECT_THROW(pow(Jet::constant(-2.0), 0.5), DomainError);
}

TEST(Jet, IntegerPowersAreExact) {
    const Jet u = Jet::variable(Var::u, 3.0);
    expect_coeffs(pow(u, 3), {27, 27, 0, 18, 0, 0, 6, 0, 0, 0}, 0.0);
    expect_coeffs(pow(u, 2.0), {9, 6, 0, 2, 0, 0, 0, 0, 0, 0}, 0.0);
    expect_coeffs(pow(u, 0), {1, 0, 0, 0, 0, 0, 0, 0, 0, 0}, 0.0);
    const Jet inv = pow(u, -1);
    EXPECT_NEAR(inv.du(), -1.0 / 9.0, 1e-16);
}

TEST(Jet, PartialLowersOrder) {
    const Jet f = pow(Jet::variable(Var::u, 1.0), 3) * Jet::variable(Var::v, 2.0);
    const Jet fu = f.partial(Var::u);
    EXPECT_EQ(fu.order(), 2);
    EXPECT_DOUBLE_EQ(fu.value(), 6.0);   // 3u^2 v
    EXPECT_DOUBLE_EQ(fu.du(), 12.0);     // 6uv
    EXPECT_DOUBLE_EQ(fu.dv(), 3.0);      // 3u^2
    EXPECT_DOUBLE_EQ(fu.duu(), 12.0);    // 6v
    EXPECT_DOUBLE_EQ(fu.coeff(3, 0), 0.0);
    // Mixing orders keeps the lower one.
    const Jet mixed = fu * f;
    EXPECT_EQ(mixed.order(), 2);
    for (std::size_t k = 6; k < Jet::kSize; ++k) EXPECT_EQ(mixed[k], 0.0);
}

TEST(Jet, ComposeMatchesFaaDiBruno) {
    // exp(u v) at (0.3, 0.7); check every coefficient against differences.
    const Jet j = exp(Jet::variable(Var::u, 0.3) * Jet::variable(Var::v, 0.7));
    const auto f = [](double u, double v) { return std::exp(u * v); };
    for (int order = 0; order <= 3; ++order) {
        for (int b = 0; b <= order; ++b) {
            EXPECT_NEAR(j.coeff(order - b, b), oracle::partial(f, 0.3, 0.7, order - b, b), 1e-6);
        }
    }
}

TEST(JetProperty, ChainAndProductRuleAgainstDifferences) {
    std::mt19937_64 rng(99);
    const std::vector<std::string> vars{"u", "v"};
    std::uniform_real_distribution<double> pick(-0.5, 0.5);
    int compared = 0;
    for (int k = 0; k < 25; ++k) {
        const std::string src = random_composite_expression(rng);
        const Expr e = parse_expression(src, vars);
        const double u = pick(rng), v = pick(rng);
        const std::array<Jet, 2> slots{Jet::variable(Var::u, u), Jet::variable(Var::v, v)};
        const Jet j = evaluate_on_jets(e, slots);
        const auto f = [&](double x, double y) {
            const std::array<double, 2> p{x, y};
            return evaluate(e, p);
        };
        for (int order = 0; order <= 3; ++order) {
            for (int b = 0; b <= order; ++b) {
                const double exact = j.coeff(order - b, b);
                if (std::abs(exact) < 1e-6) continue;
                const double fd = oracle::partial(f, u, v, order - b, b);
                EXPECT_LE(std::abs(exact - fd) / std::max(1.0, std::abs(exact)), 1e-5) << src << " (" << order - b
                                                                                       << "," << b << ")";
                ++compared;
            }
        }
    }
    EXPECT_GT(compared, 100);
}

TEST(JetProperty, AlgebraLaws) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    auto random_jet = [&] {
        std::array<double, Jet::kSize> c{};
        for (double& x : c) x = d(rng);
        return Jet::from_coeffs(c);
    };
    for (int k = 0; k < 500; ++k) {
        const Jet a = random_jet(), b = random_jet(), c = random_jet();
        EXPECT_EQ(max_abs_diff(a + b, b + a), 0.0);
        EXPECT_LE(max_abs_diff(a * b, b * a), 1e-14 * 64);
        EXPECT_LE(max_abs_diff((a + b) + c, a + (b + c)), 1e-14 * 8);
        EXPECT_LE(max_abs_diff((a * b) * c, a * (b * c)), 1e-14 * 1000);
    }
}

TEST(JetProperty, ReciprocalIdentity) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> d(-1.0, 1.0), mag(0.05, 3.0);
    for (int k = 0; k < 500; ++k) {
        std::array<double, Jet::kSize> c{};
        for (double& x : c) x = d(rng);
        c[0] = (k % 2 ? 1 : -1) * mag(rng);
        const Jet a = Jet::from_coeffs(c);
        const Jet p = a * (1.0 / a);
        EXPECT_LE(max_abs_diff(p, Jet::constant(1.0)), 1e-12 * std::pow(1.0 / std::abs(c[0]), 3)) << k;
    }
}
