#include <gtest/gtest.h>

#include <numbers>
#include <vector>

#include "fock_zeros/zero_sequence.hpp"

using namespace fock_zeros;

namespace
{

constexpr double pi = std::numbers::pi;

std::vector<lattice_index> first_removals(std::size_t r)
{
    const std::vector<lattice_index> pool{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {-1, 0}};
    return {pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(r)};
}

}

TEST(ZeroSequence, SmallestN)
{
    EXPECT_EQ(smallest_n(1.0), 3);
    EXPECT_EQ(smallest_n(2.0), 2);
    EXPECT_EQ(smallest_n(2.5), 1);
    EXPECT_EQ(smallest_n(3.0), 1);
    EXPECT_EQ(smallest_n(0.5), 5);
    // property: N p > 2 >= (N - 1) p
    for (double p = 0.3; p < 6.0; p += 0.17) {
        const int n = smallest_n(p);
        EXPECT_GT(n * p, 2.0);
        EXPECT_LE((n - 1) * p, 2.0);
    }
}

TEST(ZeroSequence, DimensionTable)
{
    const fock_params inf(pi, fock_params::infinity), two(pi, 2.0);
    const std::size_t expect_two[] = {0, 0, 1, 2};
    for (std::size_t r = 0; r <= 3; ++r) {
        const zero_sequence z(pi, first_removals(r));
        const auto a = dim_iz(z, inf);
        EXPECT_EQ(a.k, r + 1);
        EXPECT_FALSE(a.n.has_value());
        EXPECT_EQ(a.basis.size(), a.k);
        const auto b = dim_iz(z, two);
        EXPECT_EQ(b.k, expect_two[r]);
        EXPECT_EQ(b.n, 2);
        EXPECT_EQ(b.classification, b.k ? sequence_class::zero_sequence : sequence_class::uniqueness_set);
    }
}

// each added point lowers the dimension by one until zero
TEST(ZeroSequence, AddingPointsLowersDimension)
{
    const fock_params two(pi, 2.0);
    const zero_sequence z(pi, first_removals(5));
    const auto k0 = dim_iz(z, two).k;
    EXPECT_EQ(k0, 4u);
    zero_sequence cur = z;
    for (std::size_t j = 1; j <= 6; ++j) {
        cur = cur.add_points(std::vector<complex>{{0.3 * static_cast<double>(j), 0.11}});
        EXPECT_EQ(dim_iz(cur, two).k, j < k0 ? k0 - j : 0);
        EXPECT_EQ(uniqueness_after_adding(z, two, j),
                  j < k0 ? sequence_class::zero_sequence : sequence_class::uniqueness_set);
    }
}

TEST(ZeroSequence, AddingARemovedPointCancels)
{
    const zero_sequence z(pi, {{0, 0}, {1, 0}});
    const auto w = z.add_points(std::vector<complex>{{0.0, 0.0}});
    EXPECT_EQ(w.removed().size(), 1u);
    EXPECT_EQ(w.total_added(), 0u);
    const auto stacked = z.add_points(std::vector<zero_sequence::added_point>{{{0.0, 1.0}, 2}});
    EXPECT_EQ(stacked.total_added(), 2u);
    EXPECT_EQ(stacked.stacked_on_lattice().size(), 1u);
    EXPECT_THROW(zero_sequence(pi, {{0, 0}, {0, 0}}), invalid_params);
}

TEST(ZeroSequence, BasisVanishesOnSequence)
{
    const zero_sequence z = zero_sequence(pi, first_removals(3)).add_points(std::vector<complex>{{0.25, 0.4}});
    const auto rep = dim_iz(z, fock_params(pi, fock_params::infinity));
    ASSERT_EQ(rep.k, 3u);
    const auto &lat = z.lattice();
    for (const auto &g : rep.basis) {
        EXPECT_LT(weighted_mag(g({0.25, 0.4}), {0.25, 0.4}, pi), -25.0);
        for (const auto &[idx, w] : lat.enumerate_rings(3)) {
            const double v = weighted_mag(g(w), w, pi);
            if (z.removed().contains(idx)) {
                // g z^j with j > 0 still vanishes at the origin
                if (&g == &rep.basis.front() || idx != lattice_index{0, 0}) {
                    EXPECT_GT(v, -10.0);
                }
            } else {
                EXPECT_LT(v, -25.0);
            }
        }
    }
}

TEST(ZeroSequence, MismatchedAlpha)
{
    EXPECT_THROW(dim_iz(zero_sequence(pi), fock_params(2 * pi, 2.0)), mismatched_alpha);
}

TEST(ZeroSequence, VerifyBasisMaximalCase)
{
    const fock_params two(pi, 2.0);
    const auto rep = dim_iz(zero_sequence(pi, {{0, 0}, {1, 0}}), two);
    const auto rec = verify_basis(rep, two);
    EXPECT_TRUE(rec.passed);
    EXPECT_EQ(rec.lattice_samples.size(), 20u);
    EXPECT_LT(rec.max_lattice_weighted_mag, -20.0);
    EXPECT_EQ(rec.next_power.result, verdict::divergent);
}

TEST(ZeroSequence, VerifyBasisSup)
{
    const fock_params inf(pi, fock_params::infinity);
    const auto rep = dim_iz(zero_sequence(pi, {{0, 0}}), inf);
    ASSERT_EQ(rep.k, 2u);
    const auto rec = verify_basis(rep, inf);
    EXPECT_TRUE(rec.passed);
}

TEST(ZeroSequence, CertifyMaximal)
{
    const auto cert = certify_maximal(zero_sequence(pi), fock_params(pi, fock_params::infinity));
    EXPECT_TRUE(cert.maximal);
    EXPECT_TRUE(cert.generator().is_sigma_multiple());
    EXPECT_EQ(cert.probes.size(), 5u);
    try {
        certify_maximal(zero_sequence(pi, first_removals(3)), fock_params(pi, 2.0));
        FAIL() << "expected not_maximal";
    } catch (const not_maximal &e) {
        EXPECT_EQ(e.k(), 2u);
    }
}

TEST(ZeroSequence, SeededSamplerIsReproducible)
{
    sample_rng a(42), b(42), c(43);
    for (int i = 0; i < 10; ++i) {
        const double x = a.uniform();
        EXPECT_EQ(x, b.uniform());
        EXPECT_GE(x, 0.0);
        EXPECT_LT(x, 1.0);
    }
    EXPECT_NE(a.next(), c.next());
}
