#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fock_zeros/sigma.hpp"

using namespace fock_zeros;

namespace
{

double rel_diff(const log_complex &a, const log_complex &b)
{
    return std::abs(std::exp(complex{a.log_mag - b.log_mag, a.arg - b.arg}) - 1.0);
}

constexpr double pi = std::numbers::pi;

}

// brute-force lattice sum of w^-4 over the unit square lattice
TEST(Sigma, G4ClosedFormMatchesLatticeSum)
{
    double s = 0.0;
    const int r = 400;
    for (int m = -r; m <= r; ++m) {
        for (int n = -r; n <= r; ++n) {
            if (m != 0 || n != 0) {
                s += std::real(1.0 / std::pow(complex(m, n), 4));
            }
        }
    }
    EXPECT_NEAR(s, detail::unit_g4(), 1e-5);
    EXPECT_NEAR(detail::unit_g8(), 3.0 * detail::unit_g4() * detail::unit_g4() / 7.0, 1e-14);
}

TEST(Sigma, RoutesAgreeInFundamentalCell)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (double alpha : {pi / 2, pi, 2 * pi}) {
        const sigma_evaluator s(alpha);
        const double o = s.lattice().omega1();
        for (int i = 0; i < 100; ++i) {
            const complex z{u(rng) * o, u(rng) * o};
            if (std::abs(z) < 1e-3) {
                continue;
            }
            const auto a = s.eval_product(z), b = s.eval_reduced(z), c = s.eval_theta(z);
            EXPECT_LT(rel_diff(a, b), 1e-8);
            EXPECT_LT(rel_diff(a, c), 1e-8);
            EXPECT_LT(rel_diff(b, c), 1e-8);
        }
    }
}

TEST(Sigma, RoutesAgreeFarOut)
{
    sigma_options opts;
    opts.truncation_ring = 80;
    const sigma_evaluator wide(pi, opts);
    const sigma_evaluator s(pi);
    for (const complex z : {complex{3.2, 2.7}, complex{-4.1, 0.3}, complex{0.2, -5.5}}) {
        EXPECT_LT(rel_diff(wide.eval_product(z), s.eval_reduced(z)), 1e-8);
        EXPECT_LT(rel_diff(s.eval_theta(z), s.eval_reduced(z)), 1e-8);
    }
}

TEST(Sigma, NormalizedAtOrigin)
{
    const sigma_evaluator s(pi);
    EXPECT_TRUE(s.eval_product(0.0).is_zero());
    EXPECT_TRUE(s.eval_reduced(0.0).is_zero());
    EXPECT_TRUE(s.eval_theta(0.0).is_zero());
    for (const complex z : {complex{1e-3, 0.0}, complex{0.0, 1e-3}, complex{7e-4, -7e-4}}) {
        for (const auto &v : {s.eval_product(z), s.eval_reduced(z), s.eval_theta(z)}) {
            EXPECT_LT(std::abs(v.value() / z - 1.0), 1e-6);
        }
    }
}

TEST(Sigma, ZerosExactlyOnLattice)
{
    const sigma_evaluator s(2.0);
    const auto &lat = s.lattice();
    for (const auto &[idx, w] : lat.enumerate_rings(4)) {
        const auto v = s.eval_reduced(w);
        EXPECT_TRUE(v.is_zero() || weighted_mag(v, w, 2.0) < -30.0);
        EXPECT_LT(weighted_mag(s.eval_theta(w), w, 2.0), -25.0);
    }
    // off the lattice the weighted modulus is bounded below away from the zeros
    EXPECT_GT(weighted_mag(s.eval_reduced({0.5 * lat.omega1(), 0.5 * lat.omega1()}), {}, 2.0), -5.0);
}

TEST(Sigma, OddAndSquareSymmetric)
{
    const sigma_evaluator s(pi);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 50; ++i) {
        const complex z{u(rng), u(rng)};
        const complex v = s.eval_reduced(z).scaled_value(0.0);
        EXPECT_LT(std::abs(s.eval_reduced(-z).value() + v), 1e-9 * std::abs(v));
        EXPECT_LT(std::abs(s.eval_reduced(complex{0, 1} * z).value() - complex{0, 1} * v), 1e-9 * std::abs(v));
        EXPECT_LT(std::abs(s.eval_reduced(std::conj(z)).value() - std::conj(v)), 1e-9 * std::abs(v));
    }
}

// sigma of the lattice t Lambda at t z equals t sigma(z)
TEST(Sigma, ScalingCovariance)
{
    const double alpha = pi, t = 1.7;
    const sigma_evaluator s(alpha), st(alpha / (t * t));
    for (const complex z : {complex{0.3, 0.1}, complex{1.4, -2.2}, complex{-3.0, 0.7}}) {
        const auto a = st.eval_reduced(t * z);
        auto b = s.eval_reduced(z);
        b.log_mag += std::log(t);
        EXPECT_LT(rel_diff(a, b), 1e-9);
    }
}

TEST(Sigma, QuasiPeriodicity)
{
    const sigma_evaluator s(pi);
    const double o = s.lattice().omega1();
    for (const lattice_index idx : {lattice_index{1, 0}, lattice_index{0, 1}, lattice_index{1, 1}, lattice_index{-2, 1}}) {
        const complex w = s.lattice().point(idx);
        const complex z{0.2 * o, -0.3 * o};
        const auto lhs = s.eval_theta(z + w);
        const auto rhs = s.eval_theta(z) * log_complex::from_log(s.quasi_log(idx, z));
        EXPECT_LT(rel_diff(lhs, rhs), 1e-9);
    }
}

TEST(Sigma, WeightedModulusIsPeriodic)
{
    for (double alpha : {pi / 2, pi, 2 * pi}) {
        const sigma_evaluator s(alpha);
        const double o = s.lattice().omega1();
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-4.0 * o, 4.0 * o);
        for (int i = 0; i < 100; ++i) {
            const complex z{u(rng), u(rng)};
            const double w0 = weighted_mag(s.eval_reduced(z), z, alpha);
            for (const complex per : {complex{o, 0}, complex{0, o}}) {
                EXPECT_NEAR(weighted_mag(s.eval_reduced(z + per), z + per, alpha), w0, 1e-8);
            }
        }
    }
}

TEST(Sigma, TailBoundShrinksWithRing)
{
    const sigma_evaluator s(pi);
    double prev = s.tail_bound(1.0, 4);
    for (std::int64_t m = 5; m < 40; ++m) {
        const double b = s.tail_bound(1.0, m);
        EXPECT_LT(b, prev);
        prev = b;
    }
    EXPECT_TRUE(std::isinf(s.tail_bound(100.0, 4)));
    EXPECT_LE(s.tail_bound(s.lattice().omega1(), s.truncation_ring()), 1e-10);
}

// the correction must actually be what the bound claims: compare against a much larger window
TEST(Sigma, TailBoundIsHonest)
{
    const sigma_evaluator s(pi);
    for (std::int64_t m : {4, 6, 8, 12}) {
        for (const complex z : {complex{0.8, 0.3}, complex{-0.2, 1.1}}) {
            const complex small = s.log_sigma_over_z_with_ring(z, m);
            const complex large = s.log_sigma_over_z_with_ring(z, 200);
            EXPECT_LE(std::abs(small - large), s.tail_bound(std::abs(z), m) + 1e-13);
        }
    }
}

TEST(Sigma, ProductRefusesOutsideWindow)
{
    sigma_options opts;
    opts.truncation_ring = 6;
    const sigma_evaluator s(pi, opts);
    EXPECT_THROW(s.eval_product({20.0, 0.0}), truncation_too_small);
    EXPECT_NO_THROW(s.eval_reduced({20.0, 0.0}));
}

TEST(Sigma, SelfTestCatchesCorruptEta)
{
    sigma_options opts;
    opts.eta_scale = 1.01;
    EXPECT_THROW(sigma_evaluator(pi, opts), error);
    opts.self_test = false;
    EXPECT_NO_THROW(sigma_evaluator(pi, opts));
}

TEST(Sigma, InvalidOptions)
{
    sigma_options opts;
    opts.tolerance = 0.0;
    EXPECT_THROW(sigma_evaluator(pi, opts), invalid_params);
    opts = {};
    opts.truncation_ring = -1;
    EXPECT_THROW(sigma_evaluator(pi, opts), invalid_params);
}
