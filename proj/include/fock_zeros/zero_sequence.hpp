#ifndef FOCK_ZEROS_ZERO_SEQUENCE_HPP
#define FOCK_ZEROS_ZERO_SEQUENCE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "canonical_function.hpp"
#include "errors.hpp"
#include "fock.hpp"
#include "lattice.hpp"
#include "sigma.hpp"

namespace fock_zeros
{

/// Seeded source of uniform doubles with a fixed, library-independent mapping.
class sample_rng
{
    public:
        explicit sample_rng(std::uint64_t seed) : eng_(seed) {}

        /// Uniform in [0, 1).
        double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
        double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
        std::uint64_t next() { return eng_(); }

    private:
        std::mt19937_64 eng_;
};

enum class sequence_class
{
    zero_sequence,
    uniqueness_set
};

inline std::string to_string(sequence_class c)
{
    return c == sequence_class::zero_sequence ? "ZERO_SEQUENCE" : "UNIQUENESS_SET";
}

/// Lambda_gamma with finitely many lattice points removed and points (with multiplicity) added.
class zero_sequence
{
    public:
        struct added_point
        {
            complex point;
            std::size_t multiplicity;
        };

        explicit zero_sequence(double gamma, std::vector<lattice_index> removed = {}) : lattice_(gamma)
        {
            for (const auto &idx : removed) {
                lattice_.point(idx);
                if (!removed_.insert(idx).second) {
                    throw invalid_params("removed lattice indices must be distinct");
                }
            }
        }

        const square_lattice &lattice() const noexcept { return lattice_; }
        double gamma() const noexcept { return lattice_.alpha(); }
        const std::set<lattice_index> &removed() const noexcept { return removed_; }
        std::vector<added_point> added() const
        {
            std::vector<added_point> out;
            for (const auto &[k, m] : added_) {
                out.push_back({complex{k.first, k.second}, m});
            }
            return out;
        }

        std::size_t total_added() const
        {
            std::size_t a = 0;
            for (const auto &[k, m] : added_) {
                a += m;
            }
            return a;
        }

        /// Lattice index of z when z is (to 1e-12 omega1) a lattice point.
        std::optional<lattice_index> lattice_point_at(const complex &z) const
        {
            const auto [z0, idx] = lattice_.reduce(z);
            if (std::abs(z0) <= 1e-12 * lattice_.omega1()) {
                return idx;
            }
            return std::nullopt;
        }

        /// Merge points into the sequence. Adding a removed lattice point cancels its removal.
        zero_sequence add_points(const std::vector<added_point> &points) const
        {
            zero_sequence out = *this;
            for (const auto &[pt, mult] : points) {
                complex z = pt;
                std::size_t m = mult;
                if (const auto idx = lattice_point_at(z)) {
                    z = lattice_.point(*idx);
                    if (m > 0 && out.removed_.erase(*idx) > 0) {
                        --m;
                    }
                }
                if (m > 0) {
                    out.added_[{z.real(), z.imag()}] += m;
                }
            }
            return out;
        }

        zero_sequence add_points(const std::vector<complex> &points) const
        {
            std::vector<added_point> v;
            for (const auto &z : points) {
                v.push_back({z, 1});
            }
            return add_points(v);
        }

        /// Added points that sit on surviving lattice points (multiplicity increases).
        std::vector<complex> stacked_on_lattice() const
        {
            std::vector<complex> out;
            for (const auto &[k, m] : added_) {
                const complex z{k.first, k.second};
                if (const auto idx = lattice_point_at(z); idx && !removed_.contains(*idx)) {
                    out.push_back(z);
                }
            }
            return out;
        }

        /// prod over added points (z - b)^multiplicity.
        polynomial added_polynomial() const
        {
            std::vector<complex> roots;
            for (const auto &[k, m] : added_) {
                for (std::size_t i = 0; i < m; ++i) {
                    roots.emplace_back(k.first, k.second);
                }
            }
            return polynomial::from_roots(roots);
        }

    private:
        square_lattice lattice_;
        std::set<lattice_index> removed_;
        std::map<std::pair<double, double>, std::size_t> added_;
};

/// min{N >= 1 : N p > 2}.
inline int smallest_n(double p)
{
    if (std::isinf(p)) {
        throw not_applicable("smallest N is defined for finite p only");
    }
    if (!(p > 0.0)) {
        throw invalid_params("p must be positive");
    }
    const double guess = std::floor(2.0 / p) + 1.0;
    if (guess > 1e9) {
        throw invalid_params("p too small for an integer N");
    }
    int n = static_cast<int>(guess);
    while (n > 1 && (n - 1) * p > 2.0) {
        --n;
    }
    while (!(n * p > 2.0)) {
        ++n;
    }
    return n;
}

struct dimension_report
{
    /// dim(I_Z).
    std::size_t k = 0;
    /// Minimal N with N p > 2; empty for p = inf.
    std::optional<int> n;
    sequence_class classification = sequence_class::uniqueness_set;
    /// g z^j for j = 0..k-1, g vanishing exactly on Z.
    std::vector<canonical_function> basis;
    std::size_t removed_count = 0;
    std::size_t added_count = 0;
    double alpha = 0.0;
    double p = 0.0;
    std::vector<std::string> notes;
};

/// dim(I_Z) for Lambda_gamma with finite modifications, by the closed-form count.
/**
 * With r removed points and a added points (with multiplicity): k = r - a + 1 for
 * p = inf and k = r - a - N + 1 for finite p, clamped at zero.
 */
inline dimension_report dim_iz(const zero_sequence &z, const fock_params &params, const sigma_options &sigma_opts = {})
{
    if (std::abs(params.alpha() - z.gamma()) > 1e-12 * z.gamma()) {
        throw mismatched_alpha("dimension theory needs alpha equal to the lattice parameter (alpha = "
                               + std::to_string(params.alpha()) + ", gamma = " + std::to_string(z.gamma()) + ")");
    }
    dimension_report rep;
    rep.alpha = params.alpha();
    rep.p = params.p();
    rep.removed_count = z.removed().size();
    rep.added_count = z.total_added();
    const auto r = static_cast<std::int64_t>(rep.removed_count);
    const auto a = static_cast<std::int64_t>(rep.added_count);
    std::int64_t k = 0;
    if (params.is_sup()) {
        k = r - a + 1;
    } else {
        rep.n = smallest_n(params.p());
        k = r - a - *rep.n + 1;
    }
    rep.k = static_cast<std::size_t>(std::max<std::int64_t>(0, k));
    rep.classification = rep.k == 0 ? sequence_class::uniqueness_set : sequence_class::zero_sequence;
    if (!z.stacked_on_lattice().empty()) {
        rep.notes.push_back("added points on surviving lattice points are counted one per multiplicity unit");
    }
    if (rep.k > 0) {
        const auto sigma = std::make_shared<const sigma_evaluator>(z.lattice(), sigma_opts);
        const std::vector<lattice_index> removed(z.removed().begin(), z.removed().end());
        const canonical_function g(sigma, removed, z.added_polynomial());
        for (std::size_t j = 0; j < rep.k; ++j) {
            rep.basis.push_back(g.times_z_power(j));
        }
    }
    return rep;
}

/// Classification of Z plus j further points, from dim(I_Z) alone.
inline sequence_class uniqueness_after_adding(const zero_sequence &z, const fock_params &params, std::size_t j)
{
    const auto rep = dim_iz(z, params);
    return j < rep.k ? sequence_class::zero_sequence : sequence_class::uniqueness_set;
}

struct function_check
{
    std::string function;
    verdict result = verdict::inconclusive;
    /// Fitted ring exponent (finite p) or growth slope of ring maxima (p = inf).
    double exponent = 0.0;
    /// log ||f||^p (finite p) or log sup (p = inf).
    double log_measure = 0.0;
};

struct verification_record
{
    std::vector<function_check> basis;
    function_check next_power;
    std::vector<complex> lattice_samples;
    /// Largest weighted modulus of any basis element at the sampled lattice points.
    double max_lattice_weighted_mag = -std::numeric_limits<double>::infinity();
    bool basis_members = false;
    bool next_power_excluded = false;
    bool vanishes_on_lattice = false;
    bool passed = false;
    std::string failed_clause;
};

class verification_failed : public error
{
    public:
        verification_failed(verification_record record, const std::string &what)
            : error(what), record_(std::move(record))
        {}
        const verification_record &record() const noexcept { return record_; }

    private:
        verification_record record_;
};

namespace detail
{

inline function_check check_function(const canonical_function &f, const fock_params &params,
                                     const quadrature_spec &quad, std::int64_t search_rings)
{
    function_check c;
    c.function = f.describe();
    const auto m = assess_membership(f, params, quad, search_rings);
    c.result = m.result;
    if (m.norm) {
        c.exponent = m.norm->fitted_exponent;
        c.log_measure = std::log(m.norm->norm_p());
    } else {
        c.exponent = m.sup->growth_slope;
        c.log_measure = m.sup->log_sup;
    }
    return c;
}

}

/// Numerical evidence that the basis of I_Z is in the space and cannot be extended.
/**
 * (a) every basis element is CONVERGENT (bounded for p = inf); (b) g z^k is DIVERGENT
 * (unbounded); (c) every basis element has weighted log-modulus below -20 at 20
 * sampled surviving lattice points. Throws verification_failed naming the clause.
 */
inline verification_record verify_basis(const dimension_report &report, const fock_params &params,
                                        const quadrature_spec &quad = {}, std::uint64_t seed = 1,
                                        std::int64_t search_rings = 12)
{
    if (report.k == 0 || report.basis.size() != report.k) {
        throw invalid_params("verify_basis needs a report with finite k >= 1 and its basis");
    }
    verification_record rec;
    rec.basis_members = true;
    for (const auto &b : report.basis) {
        rec.basis.push_back(detail::check_function(b, params, quad, search_rings));
        rec.basis_members = rec.basis_members && rec.basis.back().result == verdict::convergent;
    }
    rec.next_power = detail::check_function(report.basis.front().times_z_power(report.k), params, quad, search_rings);
    rec.next_power_excluded = rec.next_power.result == verdict::divergent;

    const auto &g = report.basis.front();
    const auto &lat = g.sigma().lattice();
    std::vector<lattice_index> candidates;
    for (const auto &[idx, pt] : lat.enumerate_rings(5)) {
        if (std::find(g.divisors().begin(), g.divisors().end(), idx) == g.divisors().end()) {
            candidates.push_back(idx);
        }
    }
    sample_rng rng(seed);
    for (std::size_t i = 0; i < candidates.size() && i < 20; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.next() % (candidates.size() - i));
        std::swap(candidates[i], candidates[j]);
        const complex z = lat.point(candidates[i]);
        rec.lattice_samples.push_back(z);
        for (const auto &b : report.basis) {
            rec.max_lattice_weighted_mag = std::max(rec.max_lattice_weighted_mag, weighted_mag(b(z), z, params.alpha()));
        }
    }
    rec.vanishes_on_lattice = rec.max_lattice_weighted_mag < -20.0;

    if (!rec.basis_members) {
        rec.failed_clause = "basis element not in the space";
    } else if (!rec.next_power_excluded) {
        rec.failed_clause = "next power g z^k not excluded";
    } else if (!rec.vanishes_on_lattice) {
        rec.failed_clause = "basis does not vanish on sampled lattice points";
    }
    rec.passed = rec.failed_clause.empty();
    if (!rec.passed) {
        throw verification_failed(rec, "basis verification failed: " + rec.failed_clause);
    }
    return rec;
}

struct probe_result
{
    complex point;
    /// Classification of Z with the probe point added (by dim_iz of the enlarged sequence).
    sequence_class enlarged = sequence_class::zero_sequence;
    /// Classification predicted from dim(I_Z) alone for one added point.
    sequence_class predicted = sequence_class::zero_sequence;
};

struct maximality_certificate
{
    dimension_report report;
    verification_record evidence;
    std::vector<probe_result> probes;
    bool maximal = false;

    const canonical_function &generator() const { return report.basis.front(); }
};

/// Certificate that Z is a maximal zero sequence (dim I_Z = 1); throws not_maximal otherwise.
inline maximality_certificate certify_maximal(const zero_sequence &z, const fock_params &params,
                                              const quadrature_spec &quad = {}, std::uint64_t seed = 1,
                                              std::int64_t search_rings = 12)
{
    maximality_certificate cert;
    cert.report = dim_iz(z, params);
    if (cert.report.k != 1) {
        throw not_maximal(cert.report.k, "not a maximal zero sequence: dim(I_Z) = " + std::to_string(cert.report.k));
    }
    cert.evidence = verify_basis(cert.report, params, quad, seed, search_rings);
    sample_rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const double reach = 3.0 * z.lattice().omega1();
    bool all_unique = true;
    for (int i = 0; i < 5; ++i) {
        const complex a{rng.uniform(-reach, reach), rng.uniform(-reach, reach)};
        probe_result pr;
        pr.point = a;
        pr.enlarged = dim_iz(z.add_points(std::vector<complex>{a}), params).classification;
        pr.predicted = uniqueness_after_adding(z, params, 1);
        all_unique = all_unique && pr.enlarged == sequence_class::uniqueness_set
                     && pr.predicted == sequence_class::uniqueness_set;
        cert.probes.push_back(pr);
    }
    cert.maximal = all_unique;
    return cert;
}

}

#endif
