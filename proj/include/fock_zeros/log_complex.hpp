#ifndef FOCK_ZEROS_LOG_COMPLEX_HPP
#define FOCK_ZEROS_LOG_COMPLEX_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace fock_zeros
{

using complex = std::complex<double>;

/// Normalise an angle to (-pi, pi].
inline double normalize_arg(double a)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (!std::isfinite(a)) {
        return a;
    }
    if (a > -std::numbers::pi && a <= std::numbers::pi) {
        return a;
    }
    a = std::remainder(a, two_pi);
    if (a <= -std::numbers::pi) {
        a += two_pi;
    }
    return a;
}

/// A complex number stored as (log |v|, arg v).
/**
 * Values of sigma grow like exp(alpha |z|^2 / 2), so they are kept in this form
 * throughout and only converted to linear scale at the interface. The value zero
 * is encoded as log_mag = -inf (its argument is then irrelevant and kept at 0).
 */
struct log_complex
{
    double log_mag = -std::numeric_limits<double>::infinity();
    double arg = 0.0;

    static log_complex zero() noexcept { return {}; }
    static log_complex one() noexcept { return {0.0, 0.0}; }

    /// From a complex logarithm L, i.e. the value exp(L).
    static log_complex from_log(const complex &l)
    {
        if (l.real() == -std::numeric_limits<double>::infinity()) {
            return zero();
        }
        return {l.real(), normalize_arg(l.imag())};
    }

    static log_complex from_value(const complex &v)
    {
        if (v == complex{}) {
            return zero();
        }
        return {std::log(std::abs(v)), std::arg(v)};
    }

    bool is_zero() const noexcept
    {
        return log_mag == -std::numeric_limits<double>::infinity();
    }

    /// Linear-scale value; overflow saturates to +-inf in each component.
    complex value() const
    {
        if (is_zero()) {
            return {};
        }
        const double m = std::exp(log_mag);
        if (std::isinf(m)) {
            const double inf = std::numeric_limits<double>::infinity();
            const double c = std::cos(arg), s = std::sin(arg);
            return {c == 0.0 ? 0.0 : std::copysign(inf, c), s == 0.0 ? 0.0 : std::copysign(inf, s)};
        }
        return std::polar(m, arg);
    }

    /// Value multiplied by exp(-shift), for summing terms of disparate scale.
    complex scaled_value(double shift) const
    {
        if (is_zero()) {
            return {};
        }
        return std::polar(std::exp(log_mag - shift), arg);
    }

    log_complex &operator*=(const log_complex &o)
    {
        if (is_zero() || o.is_zero()) {
            *this = zero();
            return *this;
        }
        log_mag += o.log_mag;
        arg = normalize_arg(arg + o.arg);
        return *this;
    }

    log_complex &operator/=(const log_complex &o)
    {
        if (is_zero()) {
            return *this;
        }
        if (o.is_zero()) {
            log_mag = std::numeric_limits<double>::infinity();
            return *this;
        }
        log_mag -= o.log_mag;
        arg = normalize_arg(arg - o.arg);
        return *this;
    }

    friend log_complex operator*(log_complex a, const log_complex &b) { return a *= b; }
    friend log_complex operator/(log_complex a, const log_complex &b) { return a /= b; }

    friend log_complex operator-(const log_complex &a)
    {
        if (a.is_zero()) {
            return a;
        }
        return {a.log_mag, normalize_arg(a.arg + std::numbers::pi)};
    }
};

/// Sum of log-scale terms without forming the linear values.
class log_accumulator
{
    public:
        void add(const log_complex &t)
        {
            if (t.is_zero()) {
                return;
            }
            if (ref_ == -std::numeric_limits<double>::infinity()) {
                ref_ = t.log_mag;
            } else if (t.log_mag > ref_ + 32.0) {
                sum_ *= std::exp(ref_ - t.log_mag);
                ref_ = t.log_mag;
            }
            sum_ += t.scaled_value(ref_);
        }

        void add(const complex &coeff, const log_complex &t)
        {
            add(log_complex::from_value(coeff) * t);
        }

        log_complex result() const
        {
            if (ref_ == -std::numeric_limits<double>::infinity() || sum_ == complex{}) {
                return log_complex::zero();
            }
            return {ref_ + std::log(std::abs(sum_)), std::arg(sum_)};
        }

    private:
        double ref_ = -std::numeric_limits<double>::infinity();
        complex sum_{};
};

/// log(exp(a) + exp(b)) for real log-scale magnitudes.
inline double log_add(double a, double b)
{
    if (a == -std::numeric_limits<double>::infinity()) {
        return b;
    }
    if (b == -std::numeric_limits<double>::infinity()) {
        return a;
    }
    if (a < b) {
        std::swap(a, b);
    }
    if (a == std::numeric_limits<double>::infinity()) {
        return a;
    }
    return a + std::log1p(std::exp(b - a));
}

/// The log-scale weighted modulus log|v| - alpha |z|^2 / 2.
inline double weighted_mag(const log_complex &v, const complex &z, double alpha)
{
    if (v.is_zero()) {
        return -std::numeric_limits<double>::infinity();
    }
    return v.log_mag - 0.5 * alpha * std::norm(z);
}

}

#endif
