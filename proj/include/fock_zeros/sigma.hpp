#ifndef FOCK_ZEROS_SIGMA_HPP
#define FOCK_ZEROS_SIGMA_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"
#include "lattice.hpp"
#include "log_complex.hpp"

namespace fock_zeros
{

namespace detail
{

// Lattice sums G_k = sum' (m + i n)^-k of the unit square lattice. Only k = 0 mod 4
// survive the four-fold symmetry. G4 = Gamma(1/4)^8 / (960 pi^2) (lemniscatic case,
// g3 = 0), and the Laurent recursion for wp then gives G8 = 3 G4^2 / 7.
inline double unit_g4()
{
    const double g = std::tgamma(0.25);
    const double g2 = g * g, g4 = g2 * g2;
    return g4 * g4 / (960.0 * std::numbers::pi * std::numbers::pi);
}

inline double unit_g8()
{
    const double g4 = unit_g4();
    return 3.0 * g4 * g4 / 7.0;
}

// log(1 - u) + u + u^2/2 with u = z / w, given inv_w = 1 / w.
inline complex weierstrass_factor_log(const complex &z, const complex &w, const complex &inv_w)
{
    const complex u = z * inv_w;
    if (std::norm(u) < 0.09) {
        complex uk = u * u * u;
        complex s{};
        for (int k = 3; k < 200; ++k) {
            s -= uk / static_cast<double>(k);
            if (std::norm(uk) < 1e-38) {
                break;
            }
            uk *= u;
        }
        return s;
    }
    // (w - z) / w instead of 1 - u keeps the relative accuracy near a zero
    return std::log((w - z) * inv_w) + u + 0.5 * u * u;
}

// log sin(w) for complex w, stable for large |Im w| and small |w|.
inline complex log_sin(const complex &w)
{
    if (w == complex{}) {
        return {-std::numeric_limits<double>::infinity(), 0.0};
    }
    if (w.imag() < 0.0) {
        return log_sin(-w) + complex{0.0, std::numbers::pi};
    }
    // sin w = e^{-iw} (e^{2iw} - 1) / (2i), and |e^{2iw}| <= 1 here
    const double a = -2.0 * w.imag(), b = 2.0 * w.real();
    const double sb2 = std::sin(0.5 * b);
    const complex em1{std::expm1(a) * std::cos(b) - 2.0 * sb2 * sb2, std::exp(a) * std::sin(b)};
    return complex{0.0, -1.0} * w + std::log(em1) - complex{std::numbers::ln2, 0.5 * std::numbers::pi};
}

}

/// Construction options for sigma_evaluator.
struct sigma_options
{
    /// Product window max(|m|,|n|) <= truncation_ring; 0 selects it from `tolerance`.
    std::int64_t truncation_ring = 0;
    /// Relative accuracy target of the product route.
    double tolerance = 1e-10;
    /// Test hook: multiplies the quasi-period constant. Anything but 1 is wrong.
    double eta_scale = 1.0;
    /// Validate the quasi-period constant against the direct product at construction.
    bool self_test = true;
};

/// Weierstrass sigma function of the square lattice Lambda_alpha.
/**
 * Three evaluation routes are provided:
 *
 * - eval_product(): the canonical product over the window max(|m|,|n|) <= M. The
 *   omitted tail is expanded as -sum_k z^k T_k / k with T_k the lattice sum outside the
 *   window; T_4 and T_8 are subtracted exactly (from the closed-form G_4 and G_8), and
 *   the remainder k >= 12 is bounded by 8 M^2 x^12 / (120 (1 - x^4)), x = |z| / (M omega1).
 * - eval_reduced(): reduction to the fundamental cell by the quasi-periodicity
 *   sigma(z + w) = eps(w) sigma(z) exp(eta(w) (z + w/2)), with eta(w) = alpha conj(w)
 *   and eps(w_mn) = (-1)^(m+n+mn).
 * - eval_theta(): the Jacobi theta_1 series with nome exp(-pi), used as an oracle.
 *
 * All results are log-scale. The evaluator is immutable after construction.
 */
class sigma_evaluator
{
    public:
        explicit sigma_evaluator(const square_lattice &lattice, const sigma_options &opts = {})
            : lattice_(lattice), tolerance_(opts.tolerance), eta_scale_(opts.eta_scale)
        {
            if (!(opts.tolerance > 0.0)) {
                throw invalid_params("sigma tolerance must be positive");
            }
            if (opts.truncation_ring < 0) {
                throw invalid_params("truncation ring must be nonnegative");
            }
            ring_ = opts.truncation_ring > 0 ? opts.truncation_ring
                                             : required_ring(lattice_.omega1(), tolerance_);
            window_ = make_window(ring_);
            if (opts.self_test) {
                self_test();
            }
        }

        explicit sigma_evaluator(double alpha, const sigma_options &opts = {})
            : sigma_evaluator(square_lattice(alpha), opts)
        {}

        const square_lattice &lattice() const noexcept { return lattice_; }
        double alpha() const noexcept { return lattice_.alpha(); }
        std::int64_t truncation_ring() const noexcept { return ring_; }
        double tolerance() const noexcept { return tolerance_; }

        /// Quasi-period constant eta(w) = alpha conj(w) for a lattice vector w.
        complex eta(const complex &w) const { return eta_scale_ * alpha() * std::conj(w); }

        /// Bound on |log sigma_true - log sigma_product| at modulus r for window `ring`.
        double tail_bound(double r, std::int64_t ring) const
        {
            const double x = r / (static_cast<double>(ring) * lattice_.omega1());
            if (x >= 0.9) {
                return std::numeric_limits<double>::infinity();
            }
            const double x4 = x * x * x * x;
            const double m = static_cast<double>(ring);
            return 8.0 * m * m * x4 * x4 * x4 / (120.0 * (1.0 - x4));
        }

        /// Smallest window ring meeting `tol` for all |z| <= r.
        std::int64_t required_ring(double r, double tol) const
        {
            std::int64_t m = 4;
            while (tail_bound(r, m) > tol) {
                if (m >= 4096) {
                    throw truncation_too_small("no product window up to ring 4096 reaches the requested tolerance");
                }
                m = m < 64 ? m + 1 : m + m / 8;
            }
            return m;
        }

        log_complex eval_product(const complex &z) const
        {
            if (z == complex{}) {
                return log_complex::zero();
            }
            if (is_window_point(z)) {
                return log_complex::zero();
            }
            const double bound = tail_bound(std::abs(z), ring_);
            if (bound > tolerance_) {
                throw truncation_too_small("product window ring " + std::to_string(ring_)
                                           + " gives tail bound " + std::to_string(bound) + " at |z| = "
                                           + std::to_string(std::abs(z)));
            }
            return log_complex::from_log(std::log(z) + log_sigma_over_z(z, window_));
        }

        log_complex eval_reduced(const complex &z) const
        {
            const auto [z0, idx] = lattice_.reduce(z);
            if (z0 == complex{}) {
                return log_complex::zero();
            }
            return log_complex::from_log(std::log(z0) + log_sigma_over_z(z0) + quasi_log(idx, z0));
        }

        log_complex eval_theta(const complex &z) const
        {
            if (z == complex{}) {
                return log_complex::zero();
            }
            const double big_l = lattice_.omega1();
            const complex v = std::numbers::pi * z / big_l;
            // eta(omega1) z^2 / (2 omega1) with eta(omega1) = pi / omega1 (Legendre relation)
            const complex pre = std::numbers::pi * z * z / (2.0 * big_l * big_l);
            const complex log_theta = theta1_log(v);
            return log_complex::from_log(std::log(big_l / std::numbers::pi) + pre + log_theta
                                         - std::log(theta1_prime_zero()));
        }

        /// log(sigma(z) / z) from the window product; analytic at z = 0.
        complex log_sigma_over_z(const complex &z) const { return log_sigma_over_z(z, window_); }

        /// log of eps(w) exp(eta(w) (z0 + w/2)), the factor with sigma(z0 + w) = factor * sigma(z0).
        complex quasi_log(const lattice_index &idx, const complex &z0) const
        {
            if (idx.m == 0 && idx.n == 0) {
                return {};
            }
            const complex w = lattice_.point(idx);
            const bool odd = ((idx.m + idx.n + idx.m * idx.n) & 1) != 0;
            const complex e = eta(w) * (z0 + 0.5 * w);
            // Im(eta(w) w / 2) vanishes exactly for the correct constant; keep the
            // phase small by reducing it here
            return {e.real(), normalize_arg(e.imag() + (odd ? std::numbers::pi : 0.0))};
        }

        /// log(sigma(z)/z) by the product over an explicitly chosen window ring.
        complex log_sigma_over_z_with_ring(const complex &z, std::int64_t ring) const
        {
            if (ring == ring_) {
                return log_sigma_over_z(z, window_);
            }
            return log_sigma_over_z(z, make_window(ring));
        }

    private:
        struct window
        {
            std::int64_t ring = 0;
            std::vector<complex> points;
            std::vector<complex> inverses;
            complex tail4{};
            complex tail8{};
        };

        window make_window(std::int64_t ring) const
        {
            window w;
            w.ring = ring;
            complex s4{}, s8{};
            for (std::int64_t r = ring; r >= 1; --r) {
                // outer rings first so the small terms are summed before the large ones
                for (const auto &idx : square_lattice::ring_indices(r)) {
                    const complex pt = lattice_.point(idx);
                    const complex inv = 1.0 / pt;
                    w.points.push_back(pt);
                    w.inverses.push_back(inv);
                    const complex i2 = inv * inv, i4 = i2 * i2;
                    s4 += i4;
                    s8 += i4 * i4;
                }
            }
            const double o = lattice_.omega1();
            const double o4 = o * o * o * o;
            w.tail4 = detail::unit_g4() / o4 - s4;
            w.tail8 = detail::unit_g8() / (o4 * o4) - s8;
            return w;
        }

        complex log_sigma_over_z(const complex &z, const window &w) const
        {
            complex acc{};
            for (std::size_t i = 0; i < w.points.size(); ++i) {
                acc += detail::weierstrass_factor_log(z, w.points[i], w.inverses[i]);
            }
            const complex z2 = z * z, z4 = z2 * z2;
            acc -= z4 * w.tail4 / 4.0 + z4 * z4 * w.tail8 / 8.0;
            return acc;
        }

        bool is_window_point(const complex &z) const
        {
            const auto [z0, idx] = lattice_.reduce(z);
            return z0 == complex{} && idx.ring() <= ring_;
        }

        complex theta1_log(const complex &v) const
        {
            // theta_1(v) = 2 sum_n (-1)^n q^{(n+1/2)^2} sin((2n+1) v), q = e^{-pi}
            log_accumulator acc;
            double largest = -std::numeric_limits<double>::infinity();
            const double peak = std::abs(v.imag()) / std::numbers::pi;
            for (int n = 0; n < 10000; ++n) {
                const double h = n + 0.5;
                const complex lt = complex{std::numbers::ln2 - std::numbers::pi * h * h, (n & 1) ? std::numbers::pi : 0.0}
                                   + detail::log_sin(static_cast<double>(2 * n + 1) * v);
                const log_complex term = log_complex::from_log(lt);
                acc.add(term);
                const log_complex partial = acc.result();
                largest = std::max(largest, partial.log_mag);
                if (static_cast<double>(n) > peak && !term.is_zero()
                    && term.log_mag < largest + std::log(1e-16)) {
                    break;
                }
            }
            const log_complex r = acc.result();
            if (r.is_zero()) {
                return {-std::numeric_limits<double>::infinity(), 0.0};
            }
            return {r.log_mag, r.arg};
        }

        static double theta1_prime_zero()
        {
            double s = 0.0;
            for (int n = 0; n < 20; ++n) {
                const double h = n + 0.5;
                s += ((n & 1) ? -1.0 : 1.0) * (2.0 * n + 1.0) * std::exp(-std::numbers::pi * h * h);
            }
            return 2.0 * s;
        }

        void self_test() const
        {
            // Fixed points of R_00 translated by both generators: the reduced route
            // (which uses eta) must agree in weighted modulus with a direct product.
            constexpr std::array<std::pair<double, double>, 10> pts{{{0.11, 0.37},
                                                                     {-0.42, 0.05},
                                                                     {0.31, -0.29},
                                                                     {-0.17, -0.44},
                                                                     {0.45, 0.41},
                                                                     {0.02, -0.08},
                                                                     {-0.36, 0.22},
                                                                     {0.27, 0.13},
                                                                     {-0.05, 0.48},
                                                                     {0.39, -0.47}}};
            const double o = lattice_.omega1();
            const std::int64_t ring = required_ring(2.0 * o, 1e-12);
            const window w = make_window(ring);
            const std::array<complex, 2> periods{complex{o, 0.0}, complex{0.0, o}};
            for (const auto &[x, y] : pts) {
                const complex z0{x * o, y * o};
                for (const auto &per : periods) {
                    const complex z = z0 + per;
                    const double direct = weighted_mag(log_complex::from_log(std::log(z) + log_sigma_over_z(z, w)), z, alpha());
                    const double reduced = weighted_mag(eval_reduced(z), z, alpha());
                    if (!(std::abs(direct - reduced) < 1e-8)) {
                        throw error("sigma self-test failed: quasi-period constant inconsistent with the product (deviation "
                                    + std::to_string(std::abs(direct - reduced)) + ")");
                    }
                }
            }
        }

        square_lattice lattice_;
        double tolerance_;
        double eta_scale_;
        std::int64_t ring_ = 0;
        window window_;
};

}

#endif
