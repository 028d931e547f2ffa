#ifndef FOCK_ZEROS_QUADRATURE_HPP
#define FOCK_ZEROS_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "log_complex.hpp"

namespace fock_zeros
{

/// Gauss-Legendre nodes and weights on [0, 1].
struct gauss_legendre
{
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit gauss_legendre(int order)
    {
        if (order < 1) {
            throw invalid_params("Gauss-Legendre order must be positive");
        }
        const auto n = static_cast<std::size_t>(order);
        nodes.resize(n);
        weights.resize(n);
        for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
            // Newton on P_n from the Chebyshev-like initial guess
            double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (std::size_t k = 2; k <= n; ++k) {
                    const double kk = static_cast<double>(k);
                    const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
                    p0 = p1;
                    p1 = p2;
                }
                dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) {
                    break;
                }
            }
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = 0.5 * (1.0 - x);
            nodes[n - 1 - i] = 0.5 * (1.0 + x);
            weights[i] = weights[n - 1 - i] = 0.5 * w;
        }
    }
};

/// Quadrature rule for the square [-1, 1]^2, relative to its centre.
/**
 * The square is split into four triangles with apex at the centre and each triangle
 * is mapped from [0,1]^2 by the Duffy transform, with `order` Gauss-Legendre points
 * per direction. The integrand |f|^p of an entire f with a zero at the centre behaves
 * like r^p there; the Jacobian of the transform turns this into u^(p+1) times a smooth
 * function, so the rule keeps spectral accuracy for lattice-centred zeros.
 */
struct cell_rule
{
    std::vector<complex> offsets;
    std::vector<double> weights;

    explicit cell_rule(int order)
    {
        const gauss_legendre gl(order);
        const std::array<complex, 4> corners{complex{1.0, -1.0}, complex{1.0, 1.0}, complex{-1.0, 1.0},
                                             complex{-1.0, -1.0}};
        for (std::size_t t = 0; t < 4; ++t) {
            const complex a = corners[t], b = corners[(t + 1) % 4];
            // |det(a, b)| = 2 for adjacent corners of [-1,1]^2
            const double jac = std::abs(a.real() * b.imag() - a.imag() * b.real());
            for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
                const double u = gl.nodes[i];
                for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
                    const double v = gl.nodes[j];
                    offsets.push_back(u * ((1.0 - v) * a + v * b));
                    weights.push_back(gl.weights[i] * gl.weights[j] * u * jac);
                }
            }
        }
    }

    std::size_t size() const noexcept { return offsets.size(); }
};

}

#endif
