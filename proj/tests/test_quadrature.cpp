#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fock_zeros/quadrature.hpp"

using namespace fock_zeros;

namespace
{

// composite Simpson on [a, b], independent of the Gauss rules
template <typename F>
double simpson(F f, double a, double b, int n = 2000)
{
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    }
    return s * h / 3.0;
}

}

TEST(Quadrature, GaussLegendreExactForPolynomials)
{
    for (int order : {1, 2, 5, 12, 24}) {
        const gauss_legendre gl(order);
        ASSERT_EQ(gl.nodes.size(), static_cast<std::size_t>(order));
        for (int d = 0; d < 2 * order; ++d) {
            double s = 0.0;
            for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
                s += gl.weights[i] * std::pow(gl.nodes[i], d);
            }
            EXPECT_NEAR(s, 1.0 / (d + 1), 1e-14) << "order " << order << " degree " << d;
        }
        for (double x : gl.nodes) {
            EXPECT_GT(x, 0.0);
            EXPECT_LT(x, 1.0);
        }
    }
    EXPECT_THROW(gauss_legendre(0), invalid_params);
}

TEST(Quadrature, CellRuleArea)
{
    const cell_rule rule(8);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        s += rule.weights[i];
        EXPECT_LE(std::abs(rule.offsets[i].real()), 1.0);
        EXPECT_LE(std::abs(rule.offsets[i].imag()), 1.0);
    }
    EXPECT_NEAR(s, 4.0, 1e-14);
}

TEST(Quadrature, GaussianMatchesErf)
{
    const cell_rule rule(16);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        s += rule.weights[i] * std::exp(-std::norm(rule.offsets[i]));
    }
    const double one_d = simpson([](double x) { return std::exp(-x * x); }, -1.0, 1.0);
    EXPECT_NEAR(one_d, std::sqrt(std::numbers::pi) * std::erf(1.0), 1e-12);
    EXPECT_NEAR(s, one_d * one_d, 1e-12);
}

// |z|^p has a kink at the cell centre; the Duffy rule still converges fast
TEST(Quadrature, CentredPowerSingularity)
{
    for (double p : {1.0, 2.5, 3.0}) {
        const cell_rule rule(20);
        double s = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            s += rule.weights[i] * std::pow(std::abs(rule.offsets[i]), p);
        }
        // 8 * int_0^{pi/4} int_0^{1/cos t} r^{p+1} dr dt
        const double oracle
            = 8.0 * simpson([p](double t) { return std::pow(1.0 / std::cos(t), p + 2) / (p + 2); }, 0.0,
                            std::numbers::pi / 4);
        EXPECT_NEAR(s, oracle, 1e-11 * oracle) << "p = " << p;
    }
}
