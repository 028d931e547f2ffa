#ifndef FOCK_ZEROS_CANONICAL_FUNCTION_HPP
#define FOCK_ZEROS_CANONICAL_FUNCTION_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "lattice.hpp"
#include "log_complex.hpp"
#include "sigma.hpp"

namespace fock_zeros
{

/// Dense complex polynomial, coefficients in increasing degree.
class polynomial
{
    public:
        polynomial() : coeffs_{complex{1.0, 0.0}} {}
        explicit polynomial(std::vector<complex> coeffs) : coeffs_(std::move(coeffs))
        {
            while (coeffs_.size() > 1 && coeffs_.back() == complex{}) {
                coeffs_.pop_back();
            }
            if (coeffs_.empty()) {
                coeffs_.push_back({});
            }
        }

        static polynomial monomial(std::size_t degree)
        {
            std::vector<complex> c(degree + 1);
            c.back() = 1.0;
            return polynomial(std::move(c));
        }

        /// prod (z - r_i).
        static polynomial from_roots(const std::vector<complex> &roots)
        {
            polynomial p;
            for (const auto &r : roots) {
                p = p * polynomial({-r, complex{1.0, 0.0}});
            }
            return p;
        }

        const std::vector<complex> &coeffs() const noexcept { return coeffs_; }
        std::size_t degree() const noexcept { return coeffs_.size() - 1; }
        bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == complex{}; }
        bool is_one() const { return coeffs_.size() == 1 && coeffs_[0] == complex{1.0, 0.0}; }

        complex operator()(const complex &z) const
        {
            complex acc{};
            for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
                acc = acc * z + *it;
            }
            return acc;
        }

        friend polynomial operator*(const polynomial &a, const polynomial &b)
        {
            std::vector<complex> c(a.coeffs_.size() + b.coeffs_.size() - 1);
            for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
                for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
                    c[i + j] += a.coeffs_[i] * b.coeffs_[j];
                }
            }
            return polynomial(std::move(c));
        }

    private:
        std::vector<complex> coeffs_;
};

/// f(z) = sigma_gamma(z) P(z) / prod_j (z - a_j) with distinct lattice points a_j.
/**
 * Evaluation reduces z to the fundamental cell first. When z lies in the cell of a
 * divisor a_j, the factor sigma(z) / (z - a_j) is formed from the window product
 * without its leading factor, so the value at a_j is the analytic limit rather
 * than 0/0.
 */
class canonical_function
{
    public:
        canonical_function(std::shared_ptr<const sigma_evaluator> sigma, std::vector<lattice_index> divisors = {},
                           polynomial poly = {})
            : sigma_(std::move(sigma)), divisors_(std::move(divisors)), poly_(std::move(poly))
        {
            if (!sigma_) {
                throw invalid_params("canonical function needs a sigma evaluator");
            }
            auto sorted = divisors_;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
                throw invalid_params("divisor lattice points must be distinct");
            }
            for (const auto &d : divisors_) {
                divisor_points_.push_back(sigma_->lattice().point(d));
            }
        }

        const sigma_evaluator &sigma() const noexcept { return *sigma_; }
        const std::shared_ptr<const sigma_evaluator> &sigma_ptr() const noexcept { return sigma_; }
        const std::vector<lattice_index> &divisors() const noexcept { return divisors_; }
        const std::vector<complex> &divisor_points() const noexcept { return divisor_points_; }
        const polynomial &poly() const noexcept { return poly_; }
        double gamma() const noexcept { return sigma_->alpha(); }

        /// True for c * sigma_gamma (no divisors, constant numerator).
        bool is_sigma_multiple() const { return divisors_.empty() && poly_.degree() == 0 && !poly_.is_zero(); }

        log_complex operator()(const complex &z) const
        {
            if (poly_.is_zero()) {
                return log_complex::zero();
            }
            const auto [z0, idx] = sigma_->lattice().reduce(z);
            const bool at_divisor = std::find(divisors_.begin(), divisors_.end(), idx) != divisors_.end();
            if (!at_divisor && z0 == complex{}) {
                return log_complex::zero();
            }
            complex l = sigma_->log_sigma_over_z(z0) + sigma_->quasi_log(idx, z0);
            if (!at_divisor) {
                l += std::log(z0);
            }
            for (std::size_t j = 0; j < divisors_.size(); ++j) {
                if (divisors_[j] != idx) {
                    l -= std::log(z - divisor_points_[j]);
                }
            }
            const complex pv = poly_(z);
            if (pv == complex{}) {
                return log_complex::zero();
            }
            l += std::log(pv);
            return log_complex::from_log(l);
        }

        /// log|P(z)| - sum_j log|z - a_j|; the part of log|f| not carried by sigma.
        double log_abs_cofactor(const complex &z) const
        {
            const double pa = std::abs(poly_(z));
            if (pa == 0.0) {
                return -std::numeric_limits<double>::infinity();
            }
            double l = std::log(pa);
            for (const auto &a : divisor_points_) {
                l -= std::log(std::abs(z - a));
            }
            return l;
        }

        /// Same divisors, numerator multiplied by q.
        canonical_function times(const polynomial &q) const { return {sigma_, divisors_, poly_ * q}; }

        canonical_function times_z_power(std::size_t j) const { return times(polynomial::monomial(j)); }

        /// Description in the CLI function grammar.
        std::string describe() const
        {
            std::ostringstream os;
            os.precision(17);
            os << "sigma";
            for (const auto &d : divisors_) {
                os << " / (z - w(" << d.m << "," << d.n << "))";
            }
            if (!poly_.is_one()) {
                os << " * poly(";
                for (std::size_t i = 0; i < poly_.coeffs().size(); ++i) {
                    const complex c = poly_.coeffs()[i];
                    os << (i ? ", " : "") << c.real();
                    if (c.imag() != 0.0) {
                        os << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i";
                    }
                }
                os << ")";
            }
            return os.str();
        }

    private:
        std::shared_ptr<const sigma_evaluator> sigma_;
        std::vector<lattice_index> divisors_;
        std::vector<complex> divisor_points_;
        polynomial poly_;
};

}

#endif
