#ifndef FOCK_ZEROS_WITNESS_HPP
#define FOCK_ZEROS_WITNESS_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "canonical_function.hpp"
#include "errors.hpp"
#include "log_complex.hpp"
#include "parallel.hpp"

namespace fock_zeros
{

/// A point condition: vanish to order `multiplicity` at `point`.
struct constraint_point
{
    complex point;
    std::size_t multiplicity = 1;
};

/// f = sum_i c_i f_i, evaluated in log space.
class linear_combination
{
    public:
        linear_combination(std::vector<canonical_function> fns, std::vector<complex> coeffs)
            : fns_(std::move(fns)), coeffs_(std::move(coeffs))
        {
            if (fns_.size() != coeffs_.size()) {
                throw invalid_params("linear combination needs one coefficient per function");
            }
        }

        log_complex operator()(const complex &z) const
        {
            log_accumulator acc;
            for (std::size_t i = 0; i < fns_.size(); ++i) {
                if (coeffs_[i] != complex{}) {
                    acc.add(coeffs_[i], fns_[i](z));
                }
            }
            return acc.result();
        }

    private:
        std::vector<canonical_function> fns_;
        std::vector<complex> coeffs_;
};

/// Default central-difference step for the derivative of order `order`.
/**
 * Order 1 uses 1e-5 omega1 (truncation ~h^2, rounding ~eps/h). Higher orders
 * use omega1 * eps^(1/(order+2)), the balance point of the same two errors.
 */
inline double derivative_step(double omega1, std::size_t order)
{
    if (order <= 1) {
        return 1e-5 * omega1;
    }
    return omega1 * std::pow(10.0, -16.0 / static_cast<double>(order + 2));
}

/// order-th derivatives of each function at b by central differences, times exp(-shift).
/**
 * f^(d)(b) ~ h^-d sum_j (-1)^j C(d, j) f(b + (d/2 - j) h), second-order accurate.
 * The values are taken from log scale with the common shift removed, so rows
 * never overflow.
 */
inline std::vector<complex> derivative_row(const std::vector<canonical_function> &fns, const complex &b,
                                           std::size_t order, double step, double shift)
{
    std::vector<complex> row(fns.size());
    const double d = static_cast<double>(order);
    for (std::size_t i = 0; i < fns.size(); ++i) {
        complex acc{};
        double binom = 1.0;
        for (std::size_t j = 0; j <= order; ++j) {
            const complex z = b + (0.5 * d - static_cast<double>(j)) * step;
            acc += ((j & 1) ? -binom : binom) * fns[i](z).scaled_value(shift);
            binom = binom * static_cast<double>(order - j) / static_cast<double>(j + 1);
        }
        row[i] = acc / std::pow(step, d);
    }
    return row;
}

struct witness_result
{
    /// Unit null vector, first nonzero coordinate real positive.
    std::vector<complex> coefficients;
    /// Row-scaled evaluation matrix (rows: conditions, columns: basis functions).
    Eigen::MatrixXcd matrix;
    std::vector<double> row_shifts;
    std::vector<double> singular_values;
    /// ||A c||_2 and ||A||_2.
    double residual = 0.0;
    double matrix_norm = 0.0;
};

/// Nonzero c with sum_i c_i f_i vanishing at every point to its multiplicity.
/**
 * Needs k + 1 functions for conditions of total multiplicity k. Row b^(d) holds the
 * d-th derivatives at b scaled by exp(-gamma |b|^2 / 2). The null vector comes
 * from a full SVD; a rank below k throws degenerate_basis.
 */
inline witness_result vanishing_combination(const std::vector<canonical_function> &basis,
                                     const std::vector<constraint_point> &points)
{
    std::size_t rows = 0;
    for (const auto &pt : points) {
        if (pt.multiplicity == 0) {
            throw invalid_params("constraint multiplicity must be positive");
        }
        rows += pt.multiplicity;
    }
    if (basis.size() != rows + 1) {
        throw invalid_params("witness needs exactly one more basis function than conditions (got "
                             + std::to_string(basis.size()) + " functions, " + std::to_string(rows) + " conditions)");
    }
    witness_result res;
    const std::size_t cols = basis.size();
    if (rows == 0) {
        res.coefficients = {complex{1.0, 0.0}};
        res.matrix = Eigen::MatrixXcd(0, 1);
        return res;
    }

    struct row_spec
    {
        complex point;
        std::size_t order;
    };
    std::vector<row_spec> specs;
    for (const auto &pt : points) {
        for (std::size_t d = 0; d < pt.multiplicity; ++d) {
            specs.push_back({pt.point, d});
        }
    }
    const double gamma = basis.front().gamma();
    const double omega1 = basis.front().sigma().lattice().omega1();
    res.matrix = Eigen::MatrixXcd(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    res.row_shifts.resize(rows);
    std::vector<std::vector<complex>> row_values(rows);
    parallel_for(rows, [&](std::size_t r) {
        const auto &s = specs[r];
        const double shift = 0.5 * gamma * std::norm(s.point);
        res.row_shifts[r] = shift;
        row_values[r] = derivative_row(basis, s.point, s.order, derivative_step(omega1, s.order), shift);
    });
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            res.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row_values[r][c];
        }
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(res.matrix, Eigen::ComputeFullV);
    const auto &sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        res.singular_values.push_back(sv(i));
    }
    res.matrix_norm = sv(0);
    if (!(sv(0) > 0.0) || sv(sv.size() - 1) < 1e-12 * sv(0)) {
        throw degenerate_basis("evaluation matrix has rank below the number of conditions");
    }
    Eigen::VectorXcd c = svd.matrixV().col(static_cast<Eigen::Index>(cols) - 1);
    c.normalize();
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        if (std::abs(c(i)) > 1e-14) {
            c *= std::conj(c(i)) / std::abs(c(i));
            c(i) = std::abs(c(i));
            break;
        }
    }
    res.residual = (res.matrix * c).norm();
    res.coefficients.assign(c.data(), c.data() + c.size());
    return res;
}

}

#endif
