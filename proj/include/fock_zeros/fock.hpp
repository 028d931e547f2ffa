#ifndef FOCK_ZEROS_FOCK_HPP
#define FOCK_ZEROS_FOCK_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "canonical_function.hpp"
#include "errors.hpp"
#include "lattice.hpp"
#include "log_complex.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "sigma.hpp"

namespace fock_zeros
{

/// Anything that maps a complex argument to a log-scale value.
template <typename F>
concept evaluable_function = requires(const F &f, const complex &z) {
    { f(z) } -> std::convertible_to<log_complex>;
};

/// Functions of the form sigma_gamma(z) * (cofactor), whose weighted modulus is
/// periodic over the lattice of gamma apart from the cofactor.
template <typename F>
concept lattice_periodic_function = evaluable_function<F> && requires(const F &f, const complex &z) {
    { f.sigma() } -> std::convertible_to<const sigma_evaluator &>;
    { f.log_abs_cofactor(z) } -> std::convertible_to<double>;
};

struct quadrature_spec
{
    /// Gauss-Legendre points per direction and triangle of each cell.
    int order = 24;
    /// Cells are summed out to this ring.
    int max_ring = 24;
    /// Outer rings used for the decay-exponent fit.
    int annulus_fit_window = 8;

    void validate() const
    {
        if (order < 4) {
            throw invalid_params("quadrature order must be at least 4");
        }
        if (annulus_fit_window < 2) {
            throw invalid_params("annulus fit window must be at least 2");
        }
        if (max_ring < annulus_fit_window + 2) {
            throw invalid_params("max_ring must be at least annulus_fit_window + 2");
        }
    }
};

enum class verdict
{
    convergent,
    divergent,
    inconclusive
};

inline std::string to_string(verdict v)
{
    switch (v) {
        case verdict::convergent:
            return "CONVERGENT";
        case verdict::divergent:
            return "DIVERGENT";
        case verdict::inconclusive:
            return "INCONCLUSIVE";
    }
    return "?";
}

/// Thresholds on the fitted ring exponent s (ring contribution ~ r^s).
/**
 * The series over rings converges iff s < -1. CONVERGENT needs s < -1 - margin.
 * DIVERGENT needs s >= -1 - critical_band: the band absorbs the fit error at the
 * log-divergent exponent s = -1 exactly. Anything in between is INCONCLUSIVE.
 */
struct classification_margins
{
    double margin = 0.3;
    double critical_band = 0.15;
};

struct norm_estimate
{
    verdict result = verdict::inconclusive;
    /// (alpha/pi) * sum of the computed cell integrals of |f e^{-alpha|z|^2/2}|^p.
    double partial_norm_p = 0.0;
    double log_partial_norm_p = -std::numeric_limits<double>::infinity();
    /// Extrapolated power-law tail beyond max_ring (CONVERGENT only, else 0).
    double tail_estimate = 0.0;
    std::vector<double> ring_contribs;
    std::vector<double> log_ring_contribs;
    double fitted_exponent = 0.0;
    double fit_intercept = 0.0;
    double p = 0.0;

    /// Estimated ||f||^p including the tail.
    double norm_p() const { return partial_norm_p + tail_estimate; }
    double norm() const { return std::pow(norm_p(), 1.0 / p); }
};

struct sup_estimate
{
    /// Largest log-scale weighted modulus found.
    double log_sup = -std::numeric_limits<double>::infinity();
    complex argmax{};
    /// Per-ring maxima kept growing to the last searched ring.
    bool unbounded = false;
    std::vector<double> ring_max;
    /// Slope of ring maxima against log(ring) over the outer rings.
    double growth_slope = 0.0;
};

namespace detail
{

inline double log_sum_exp(std::span<const double> v)
{
    double mx = -std::numeric_limits<double>::infinity();
    for (double x : v) {
        mx = std::max(mx, x);
    }
    if (!std::isfinite(mx)) {
        return mx;
    }
    double s = 0.0;
    for (double x : v) {
        s += std::exp(x - mx);
    }
    return mx + std::log(s);
}

struct line_fit
{
    double slope;
    double intercept;
};

inline line_fit least_squares(std::span<const double> x, std::span<const double> y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

template <evaluable_function F>
const square_lattice &cell_lattice(const F &f, const square_lattice &fallback)
{
    if constexpr (lattice_periodic_function<F>) {
        return f.sigma().lattice();
    } else {
        return fallback;
    }
}

// Weighted modulus of sigma_gamma at centre + h * offset, which by periodicity is
// the same for every cell of the lattice of gamma.
inline std::vector<double> periodic_sigma_table(const sigma_evaluator &sigma, std::span<const complex> offsets)
{
    const double h = 0.5 * sigma.lattice().omega1();
    std::vector<double> t(offsets.size());
    parallel_for(offsets.size(), [&](std::size_t k) {
        const complex z = h * offsets[k];
        t[k] = weighted_mag(sigma.eval_reduced(z), z, sigma.alpha());
    });
    return t;
}

template <evaluable_function F>
double node_weighted_mag(const F &f, const complex &z, double alpha, const double *table_value)
{
    if constexpr (lattice_periodic_function<F>) {
        if (table_value) {
            const double c = f.log_abs_cofactor(z);
            if (*table_value == -std::numeric_limits<double>::infinity()
                || c == std::numeric_limits<double>::infinity()) {
                // zero of sigma against a divisor: use the analytic limit
                return weighted_mag(f(z), z, alpha);
            }
            return *table_value + 0.5 * (f.sigma().alpha() - alpha) * std::norm(z) + c;
        }
    }
    return weighted_mag(f(z), z, alpha);
}

template <evaluable_function F>
double log_cell_integral_impl(const F &f, double alpha, double p, const cell &c, const cell_rule &rule,
                              const std::vector<double> *table)
{
    std::vector<double> terms(rule.size());
    const double h2 = c.half_width * c.half_width;
    for (std::size_t k = 0; k < rule.size(); ++k) {
        const complex z = c.center + c.half_width * rule.offsets[k];
        const double wm = node_weighted_mag(f, z, alpha, table ? &(*table)[k] : nullptr);
        terms[k] = wm == -std::numeric_limits<double>::infinity()
                       ? wm
                       : p * wm + std::log(rule.weights[k] * h2);
    }
    return log_sum_exp(terms);
}

}

/// log of the cell integral of |f(z) e^{-alpha|z|^2/2}|^p over `c`, without the alpha/pi factor.
template <evaluable_function F>
double log_cell_integral(const F &f, const fock_params &params, const cell &c, const quadrature_spec &quad = {})
{
    if (params.is_sup()) {
        throw not_applicable("cell integrals are defined for finite p only");
    }
    if (quad.order < 4) {
        throw invalid_params("quadrature order must be at least 4");
    }
    const cell_rule rule(quad.order);
    return detail::log_cell_integral_impl(f, params.alpha(), params.p(), c, rule, nullptr);
}

/// Cell integral of |f(z) e^{-alpha|z|^2/2}|^p over `c` (no alpha/pi factor).
template <evaluable_function F>
double cell_integral(const F &f, const fock_params &params, const cell &c, const quadrature_spec &quad = {})
{
    return std::exp(log_cell_integral(f, params, c, quad));
}

/// Ring-by-ring estimate of ||f||_{p,alpha}^p with a convergence verdict.
/**
 * Cells of the square lattice (the lattice of f's sigma factor when f has one, else
 * Lambda_alpha) are integrated out to quad.max_ring. The log ring contributions are
 * fitted against log(ring) over the outer quad.annulus_fit_window rings.
 */
template <evaluable_function F>
norm_estimate estimate_norm(const F &f, const fock_params &params, const quadrature_spec &quad = {},
                            const classification_margins &margins = {})
{
    if (params.is_sup()) {
        throw not_applicable("norm estimation by quadrature needs finite p; use sup_norm");
    }
    quad.validate();
    const square_lattice fallback(params.alpha());
    const square_lattice &lat = detail::cell_lattice(f, fallback);
    const cell_rule rule(quad.order);

    std::vector<double> table;
    if constexpr (lattice_periodic_function<F>) {
        table = detail::periodic_sigma_table(f.sigma(), rule.offsets);
    }
    const std::vector<double> *table_ptr = table.empty() ? nullptr : &table;

    const auto cells = lat.enumerate_rings(quad.max_ring);
    std::vector<double> log_cells(cells.size());
    parallel_for(cells.size(), [&](std::size_t i) {
        log_cells[i] = detail::log_cell_integral_impl(f, params.alpha(), params.p(), lat.cell_at(cells[i].first), rule,
                                                      table_ptr);
    });

    norm_estimate est;
    est.p = params.p();
    const double log_norm = std::log(params.alpha() / std::numbers::pi);
    std::size_t pos = 0;
    for (int r = 0; r <= quad.max_ring; ++r) {
        const std::size_t count = r == 0 ? 1 : static_cast<std::size_t>(8 * r);
        const double lr = detail::log_sum_exp(std::span<const double>(log_cells).subspan(pos, count)) + log_norm;
        pos += count;
        est.log_ring_contribs.push_back(lr);
        est.ring_contribs.push_back(std::exp(lr));
    }
    est.log_partial_norm_p = detail::log_sum_exp(est.log_ring_contribs);
    est.partial_norm_p = std::exp(est.log_partial_norm_p);

    std::vector<double> xs, ys;
    bool vanishing = false;
    for (int r = quad.max_ring - quad.annulus_fit_window + 1; r <= quad.max_ring; ++r) {
        const double y = est.log_ring_contribs[static_cast<std::size_t>(r)];
        if (y == -std::numeric_limits<double>::infinity()) {
            vanishing = true;
            break;
        }
        xs.push_back(std::log(static_cast<double>(r)));
        ys.push_back(y);
    }
    if (vanishing) {
        est.fitted_exponent = -std::numeric_limits<double>::infinity();
        est.fit_intercept = -std::numeric_limits<double>::infinity();
        est.result = verdict::convergent;
        return est;
    }
    const auto fit = detail::least_squares(xs, ys);
    est.fitted_exponent = fit.slope;
    est.fit_intercept = fit.intercept;
    if (fit.slope < -1.0 - margins.margin) {
        est.result = verdict::convergent;
        // sum_{r > R} A r^s ~ A (R + 1/2)^{s+1} / (-s - 1)
        const double s = fit.slope;
        const double edge = static_cast<double>(quad.max_ring) + 0.5;
        est.tail_estimate = std::exp(fit.intercept + (s + 1.0) * std::log(edge)) / (-s - 1.0);
    } else if (fit.slope >= -1.0 - margins.critical_band) {
        est.result = verdict::divergent;
    } else {
        est.result = verdict::inconclusive;
    }
    return est;
}

namespace detail
{

template <evaluable_function F>
void refine_max(const F &f, double alpha, double step, double min_step, complex &at, double &best)
{
    const std::array<complex, 8> dirs{complex{1, 0},  complex{-1, 0}, complex{0, 1},  complex{0, -1},
                                      complex{1, 1},  complex{1, -1}, complex{-1, 1}, complex{-1, -1}};
    for (int it = 0; it < 2000 && step > min_step; ++it) {
        bool moved = false;
        for (const auto &d : dirs) {
            const complex z = at + step * d;
            const double v = weighted_mag(f(z), z, alpha);
            if (v > best) {
                best = v;
                at = z;
                moved = true;
                break;
            }
        }
        if (!moved) {
            step *= 0.5;
        }
    }
}

}

/// Log-scale sup of |f(z)| e^{-alpha|z|^2/2} by grid search plus local refinement.
/**
 * For c * sigma_alpha the weighted modulus is doubly periodic, so the fundamental cell
 * is searched alone. Otherwise every cell up to `search_rings` is sampled on a
 * `grid` x `grid` lattice including its edges; if the per-ring maxima still grow at
 * the last ring (strictly increasing over the last four rings, with slope >= 0.5
 * against log ring), the function is flagged unbounded.
 */
template <evaluable_function F>
sup_estimate sup_norm(const F &f, const fock_params &params, std::int64_t search_rings = 12, int grid = 13)
{
    if (!params.is_sup()) {
        throw not_applicable("sup_norm is the p = inf norm");
    }
    if (search_rings < 1 || grid < 3) {
        throw invalid_params("sup_norm needs search_rings >= 1 and grid >= 3");
    }
    const double alpha = params.alpha();
    const square_lattice fallback(alpha);
    const square_lattice &lat = detail::cell_lattice(f, fallback);
    const double h = 0.5 * lat.omega1();

    bool single_cell = false;
    if constexpr (std::same_as<F, canonical_function>) {
        single_cell = f.is_sigma_multiple() && f.gamma() == alpha;
    }
    const std::int64_t rings = single_cell ? 0 : search_rings;

    std::vector<complex> offsets;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            offsets.push_back({-1.0 + 2.0 * i / (grid - 1), -1.0 + 2.0 * j / (grid - 1)});
        }
    }
    std::vector<double> table;
    if constexpr (lattice_periodic_function<F>) {
        table = detail::periodic_sigma_table(f.sigma(), offsets);
    }

    const auto cells = lat.enumerate_rings(rings);
    std::vector<double> cell_best(cells.size());
    std::vector<complex> cell_arg(cells.size());
    parallel_for(cells.size(), [&](std::size_t i) {
        const complex c = cells[i].second;
        double best = -std::numeric_limits<double>::infinity();
        complex at = c;
        for (std::size_t k = 0; k < offsets.size(); ++k) {
            const complex z = c + h * offsets[k];
            const double v = detail::node_weighted_mag(f, z, alpha, table.empty() ? nullptr : &table[k]);
            if (v > best) {
                best = v;
                at = z;
            }
        }
        cell_best[i] = best;
        cell_arg[i] = at;
    });

    sup_estimate est;
    std::size_t pos = 0;
    std::size_t best_cell = 0;
    for (std::int64_t r = 0; r <= rings; ++r) {
        const std::size_t count = r == 0 ? 1 : static_cast<std::size_t>(8 * r);
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t i = pos; i < pos + count; ++i) {
            m = std::max(m, cell_best[i]);
            if (cell_best[i] > cell_best[best_cell]) {
                best_cell = i;
            }
        }
        est.ring_max.push_back(m);
        pos += count;
    }
    est.argmax = cell_arg[best_cell];
    est.log_sup = cell_best[best_cell];
    if (std::isfinite(est.log_sup)) {
        detail::refine_max(f, alpha, 2.0 * h / (grid - 1), 1e-12 * lat.omega1(), est.argmax, est.log_sup);
    }

    if (rings >= 4) {
        const std::size_t n = est.ring_max.size();
        bool increasing = true;
        for (std::size_t i = n - 4; i + 1 < n; ++i) {
            if (!(est.ring_max[i + 1] > est.ring_max[i])) {
                increasing = false;
            }
        }
        std::vector<double> xs, ys;
        const std::int64_t window = std::max<std::int64_t>(3, rings / 2);
        for (std::int64_t r = rings - window + 1; r <= rings; ++r) {
            xs.push_back(std::log(static_cast<double>(r)));
            ys.push_back(est.ring_max[static_cast<std::size_t>(r)]);
        }
        if (std::isfinite(ys.front()) && std::isfinite(ys.back())) {
            est.growth_slope = detail::least_squares(xs, ys).slope;
        }
        est.unbounded = increasing && est.growth_slope >= 0.5;
    }
    return est;
}

/// max over samples of log(|f(z)| e^{-alpha|z|^2/2}) - log(norm); nonpositive for members.
/**
 * `norm` is ||f||_{p,alpha} itself (not its p-th power).
 */
template <evaluable_function F>
double pointwise_estimate_check(const F &f, double norm, const fock_params &params, std::span<const complex> samples)
{
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw invalid_params("pointwise estimate needs a finite positive norm");
    }
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto &z : samples) {
        worst = std::max(worst, weighted_mag(f(z), z, params.alpha()) - std::log(norm));
    }
    return worst;
}

/// Membership evidence for one (alpha, p) pair.
struct membership
{
    double alpha = 0.0;
    double p = 0.0;
    /// CONVERGENT/DIVERGENT from the quadrature, or bounded/unbounded for p = inf.
    verdict result = verdict::inconclusive;
    std::optional<norm_estimate> norm;
    std::optional<sup_estimate> sup;
};

struct embedding_report
{
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    membership at_alpha;
    membership at_beta;
    /// sigma_gamma is outside F^p_alpha and inside F^q_beta.
    bool demonstrated = false;
};

template <evaluable_function F>
membership assess_membership(const F &f, const fock_params &params, const quadrature_spec &quad = {},
                             std::int64_t search_rings = 12)
{
    membership m;
    m.alpha = params.alpha();
    m.p = params.p();
    if (params.is_sup()) {
        m.sup = sup_norm(f, params, search_rings);
        m.result = m.sup->unbounded ? verdict::divergent : verdict::convergent;
    } else {
        m.norm = estimate_norm(f, params, quad);
        m.result = m.norm->result;
    }
    return m;
}

/// sigma_gamma with gamma = (alpha + beta)/2 separates the zero sequences of F^p_alpha and F^q_beta.
inline embedding_report embedding_demo(double alpha, double beta, double p, double q, const quadrature_spec &quad = {})
{
    if (!(alpha > 0.0) || !(alpha < beta)) {
        throw invalid_params("embedding demo needs 0 < alpha < beta");
    }
    const fock_params at_alpha(alpha, p), at_beta(beta, q);
    embedding_report rep;
    rep.alpha = alpha;
    rep.beta = beta;
    rep.gamma = 0.5 * (alpha + beta);
    const canonical_function sigma_gamma(std::make_shared<const sigma_evaluator>(rep.gamma));
    rep.at_alpha = assess_membership(sigma_gamma, at_alpha, quad);
    rep.at_beta = assess_membership(sigma_gamma, at_beta, quad);
    rep.demonstrated = rep.at_alpha.result == verdict::divergent && rep.at_beta.result == verdict::convergent;
    return rep;
}

}

#endif
