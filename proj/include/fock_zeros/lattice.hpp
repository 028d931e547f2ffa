#ifndef FOCK_ZEROS_LATTICE_HPP
#define FOCK_ZEROS_LATTICE_HPP

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "log_complex.hpp"

namespace fock_zeros
{

/// The pair (alpha, p) with p in (0, inf]; p == inf selects the sup norm.
class fock_params
{
    public:
        static constexpr double infinity = std::numeric_limits<double>::infinity();

        fock_params(double alpha, double p) : alpha_(alpha), p_(p)
        {
            if (!(alpha > 0.0) || !std::isfinite(alpha)) {
                throw invalid_params("alpha must be a positive finite real, got " + std::to_string(alpha));
            }
            if (!(p > 0.0)) {
                throw invalid_params("p must be positive or infinite, got " + std::to_string(p));
            }
        }

        double alpha() const noexcept { return alpha_; }
        double p() const noexcept { return p_; }
        bool is_sup() const noexcept { return std::isinf(p_); }

    private:
        double alpha_;
        double p_;
};

struct lattice_index
{
    std::int64_t m = 0;
    std::int64_t n = 0;

    friend auto operator<=>(const lattice_index &, const lattice_index &) = default;

    lattice_index operator+(const lattice_index &o) const { return {m + o.m, n + o.n}; }

    /// Chebyshev norm, i.e. the ring this index belongs to.
    std::int64_t ring() const { return std::max(std::abs(m), std::abs(n)); }
};

/// Indices are limited to |m|, |n| <= 2^20.
inline constexpr std::int64_t max_lattice_index = std::int64_t{1} << 20;

/// Closed-form square cell R_mn: centre and half side length.
struct cell
{
    complex center;
    double half_width;

    double area() const { return 4.0 * half_width * half_width; }

    /// Half-open membership [c - h, c + h) in both coordinates.
    bool contains(const complex &z) const
    {
        const complex d = z - center;
        return d.real() >= -half_width && d.real() < half_width && d.imag() >= -half_width
               && d.imag() < half_width;
    }
};

/// The square lattice sqrt(pi/alpha) (m + i n).
class square_lattice
{
    public:
        explicit square_lattice(double alpha) : alpha_(alpha)
        {
            if (!(alpha > 0.0) || !std::isfinite(alpha)) {
                throw invalid_params("lattice parameter alpha must be positive, got " + std::to_string(alpha));
            }
            omega1_ = std::sqrt(std::numbers::pi / alpha);
        }

        double alpha() const noexcept { return alpha_; }
        /// Horizontal generator; the vertical one is i * omega1().
        double omega1() const noexcept { return omega1_; }

        complex point(const lattice_index &idx) const
        {
            check_index(idx);
            return {omega1_ * static_cast<double>(idx.m), omega1_ * static_cast<double>(idx.n)};
        }

        cell cell_at(const lattice_index &idx) const { return {point(idx), 0.5 * omega1_}; }

        /// Split z = z0 + point(idx) with z0 in the half-open fundamental cell R_00.
        std::pair<complex, lattice_index> reduce(const complex &z) const
        {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                throw invalid_params("cannot reduce a non-finite argument");
            }
            const double h = 0.5 * omega1_;
            auto split = [&](double x) {
                double k = std::floor(x / omega1_ + 0.5);
                if (std::abs(k) > static_cast<double>(max_lattice_index)) {
                    throw invalid_params("argument lies outside the supported index range");
                }
                double r = x - omega1_ * k;
                // rounding in x / omega1 can land one cell off near the boundary
                if (r >= h) {
                    k += 1.0;
                    r = x - omega1_ * k;
                } else if (r < -h) {
                    k -= 1.0;
                    r = x - omega1_ * k;
                }
                return std::pair{r, static_cast<std::int64_t>(k)};
            };
            const auto [x0, m] = split(z.real());
            const auto [y0, n] = split(z.imag());
            return {complex{x0, y0}, lattice_index{m, n}};
        }

        /// All indices with ring <= max_ring, ring by ring.
        /**
         * Ring 0 is the origin. Ring r >= 1 starts at (r, -r), runs up the right edge to
         * (r, r), left along the top to (-r, r), down the left edge to (-r, -r) and right
         * along the bottom, ending at (r - 1, -r): 8 r indices in counter-clockwise order.
         */
        std::vector<std::pair<lattice_index, complex>> enumerate_rings(std::int64_t max_ring) const
        {
            if (max_ring < 0 || max_ring > max_lattice_index) {
                throw invalid_params("max_ring out of range");
            }
            std::vector<std::pair<lattice_index, complex>> out;
            out.reserve(static_cast<std::size_t>((2 * max_ring + 1) * (2 * max_ring + 1)));
            for (std::int64_t r = 0; r <= max_ring; ++r) {
                for (const auto &idx : ring_indices(r)) {
                    out.emplace_back(idx, point(idx));
                }
            }
            return out;
        }

        static std::vector<lattice_index> ring_indices(std::int64_t r)
        {
            if (r == 0) {
                return {{0, 0}};
            }
            std::vector<lattice_index> v;
            v.reserve(static_cast<std::size_t>(8 * r));
            for (std::int64_t n = -r; n <= r; ++n) {
                v.push_back({r, n});
            }
            for (std::int64_t m = r - 1; m >= -r; --m) {
                v.push_back({m, r});
            }
            for (std::int64_t n = r - 1; n >= -r; --n) {
                v.push_back({-r, n});
            }
            for (std::int64_t m = -r + 1; m <= r - 1; ++m) {
                v.push_back({m, -r});
            }
            return v;
        }

    private:
        static void check_index(const lattice_index &idx)
        {
            if (std::abs(idx.m) > max_lattice_index || std::abs(idx.n) > max_lattice_index) {
                throw invalid_params("lattice index beyond 2^20");
            }
        }

        double alpha_;
        double omega1_;
};

}

#endif
