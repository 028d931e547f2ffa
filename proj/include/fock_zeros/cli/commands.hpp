#ifndef FOCK_ZEROS_CLI_COMMANDS_HPP
#define FOCK_ZEROS_CLI_COMMANDS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "../canonical_function.hpp"
#include "../errors.hpp"
#include "../fock.hpp"
#include "../lattice.hpp"
#include "../sigma.hpp"
#include "../zero_sequence.hpp"
#include "function_spec.hpp"

namespace fock_zeros::cli
{

using json = nlohmann::ordered_json;

enum exit_code : int
{
    exit_ok = 0,
    exit_failure = 1,
    exit_usage = 2,
    exit_internal = 3
};

/// Named tolerances and their defaults.
inline const std::map<std::string, double> &default_tolerances()
{
    static const std::map<std::string, double> t{{"critical_band", 0.15},
                                                 {"exponent_margin", 0.3},
                                                 {"oracle", 1e-8},
                                                 {"periodicity", 1e-8},
                                                 {"residual", 1e-10},
                                                 {"sigma", 1e-10}};
    return t;
}

/// Fully resolved run configuration; every report carries a copy.
struct run_config
{
    double alpha = std::numbers::pi;
    double p = 2.0;
    /// 0 selects the product window from the sigma tolerance.
    std::int64_t trunc_ring = 0;
    int quad_order = 24;
    int max_ring = 24;
    std::map<std::string, double> tolerances = default_tolerances();
    std::string out;
    std::uint64_t seed = 1;

    double tol(const std::string &name) const { return tolerances.at(name); }

    void validate() const
    {
        if (!(alpha > 0.0) || !std::isfinite(alpha)) {
            throw parse_error("--alpha must be a positive real");
        }
        if (!(p > 0.0)) {
            throw parse_error("--p must be positive or inf");
        }
        if (trunc_ring < 0 || quad_order <= 0 || max_ring <= 0) {
            throw parse_error("--trunc-ring, --quad-order and --max-ring must be positive");
        }
        for (const auto &[k, v] : tolerances) {
            if (!default_tolerances().contains(k)) {
                throw parse_error("unknown tolerance '" + k + "'");
            }
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw parse_error("tolerance '" + k + "' must be a positive real");
            }
        }
    }

    /// Apply a `name=value` override.
    void set_tolerance(const std::string &assignment)
    {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos) {
            throw parse_error("--tol expects name=value, got '" + assignment + "'");
        }
        const std::string name = assignment.substr(0, eq);
        if (!default_tolerances().contains(name)) {
            throw parse_error("unknown tolerance '" + name + "'");
        }
        tolerances[name] = detail::parse_real(assignment.substr(eq + 1));
    }

    fock_params params() const { return {alpha, p}; }

    quadrature_spec quadrature() const
    {
        quadrature_spec q;
        q.order = quad_order;
        q.max_ring = max_ring;
        q.annulus_fit_window = std::min(8, std::max(2, max_ring - 2));
        return q;
    }

    classification_margins margins() const { return {tol("exponent_margin"), tol("critical_band")}; }

    sigma_options sigma() const
    {
        sigma_options o;
        o.truncation_ring = trunc_ring;
        o.tolerance = tol("sigma");
        return o;
    }
};

/// A finished command: the report document and the process exit code.
struct command_result
{
    json report;
    int exit = exit_ok;

    std::string text() const { return report.dump(2) + "\n"; }
};

/// Finite numbers as JSON numbers; +-inf and nan as strings.
inline json number(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return v;
}

inline json complex_json(const complex &z)
{
    return json::array({number(z.real()), number(z.imag())});
}

inline json numbers(const std::vector<double> &v)
{
    json a = json::array();
    for (double x : v) {
        a.push_back(number(x));
    }
    return a;
}

inline json config_json(const run_config &c)
{
    json j;
    j["alpha"] = number(c.alpha);
    j["p"] = number(c.p);
    j["trunc_ring"] = c.trunc_ring;
    j["quad_order"] = c.quad_order;
    j["max_ring"] = c.max_ring;
    json t;
    for (const auto &[k, v] : c.tolerances) {
        t[k] = number(v);
    }
    j["tolerances"] = t;
    j["seed"] = c.seed;
    j["out"] = c.out;
    return j;
}

inline json header(const std::string &command, const run_config &c)
{
    json j;
    j["command"] = command;
    j["config"] = config_json(c);
    return j;
}

inline json log_value_json(const log_complex &v, const complex &z, double alpha)
{
    json j;
    j["log_mag"] = number(v.log_mag);
    j["arg"] = v.is_zero() ? json(0.0) : number(v.arg);
    j["weighted_mag"] = number(weighted_mag(v, z, alpha));
    j["is_zero"] = v.is_zero();
    return j;
}

/// |a/b - 1| from log-scale values; 0 when both vanish.
inline double relative_difference(const log_complex &a, const log_complex &b)
{
    if (a.is_zero() && b.is_zero()) {
        return 0.0;
    }
    if (a.is_zero() || b.is_zero()) {
        return std::numeric_limits<double>::infinity();
    }
    const complex ratio = std::exp(complex{a.log_mag - b.log_mag, a.arg - b.arg});
    return std::abs(ratio - 1.0);
}

inline json norm_json(const norm_estimate &e)
{
    json j;
    j["verdict"] = to_string(e.result);
    j["p"] = number(e.p);
    j["partial_norm_p"] = number(e.partial_norm_p);
    j["log_partial_norm_p"] = number(e.log_partial_norm_p);
    j["tail_estimate"] = number(e.tail_estimate);
    j["norm_p"] = number(e.norm_p());
    j["fitted_exponent"] = number(e.fitted_exponent);
    j["log_ring_contribs"] = numbers(e.log_ring_contribs);
    j["ring_contribs"] = numbers(e.ring_contribs);
    return j;
}

inline json sup_json(const sup_estimate &e)
{
    json j;
    j["log_sup"] = number(e.log_sup);
    j["argmax"] = complex_json(e.argmax);
    j["unbounded"] = e.unbounded;
    j["growth_slope"] = number(e.growth_slope);
    j["ring_max"] = numbers(e.ring_max);
    return j;
}

inline json check_json(const function_check &c)
{
    json j;
    j["function"] = c.function;
    j["verdict"] = to_string(c.result);
    j["exponent"] = number(c.exponent);
    j["log_measure"] = number(c.log_measure);
    return j;
}

inline json verification_json(const verification_record &r)
{
    json j;
    json basis = json::array();
    for (const auto &b : r.basis) {
        basis.push_back(check_json(b));
    }
    j["basis"] = basis;
    j["next_power"] = check_json(r.next_power);
    json pts = json::array();
    for (const auto &z : r.lattice_samples) {
        pts.push_back(complex_json(z));
    }
    j["lattice_samples"] = pts;
    j["max_lattice_weighted_mag"] = number(r.max_lattice_weighted_mag);
    j["basis_members"] = r.basis_members;
    j["next_power_excluded"] = r.next_power_excluded;
    j["vanishes_on_lattice"] = r.vanishes_on_lattice;
    j["passed"] = r.passed;
    j["failed_clause"] = r.failed_clause;
    return j;
}

inline json dimension_json(const dimension_report &r)
{
    json j;
    j["k"] = r.k;
    j["N"] = r.n ? json(*r.n) : json("N/A");
    j["classification"] = to_string(r.classification);
    j["removed_count"] = r.removed_count;
    j["added_count"] = r.added_count;
    json basis = json::array();
    for (const auto &b : r.basis) {
        basis.push_back(b.describe());
    }
    j["basis"] = basis;
    j["notes"] = r.notes;
    return j;
}

inline json certificate_json(const maximality_certificate &c)
{
    json j;
    j["maximal"] = c.maximal;
    j["generator"] = c.generator().describe();
    j["dimension"] = dimension_json(c.report);
    j["evidence"] = verification_json(c.evidence);
    json probes = json::array();
    for (const auto &p : c.probes) {
        json q;
        q["point"] = complex_json(p.point);
        q["enlarged_classification"] = to_string(p.enlarged);
        q["predicted_classification"] = to_string(p.predicted);
        probes.push_back(q);
    }
    j["probes"] = probes;
    return j;
}

/// Sequence Lambda_alpha minus `removals`, plus `additions`.
inline zero_sequence build_sequence(const run_config &c, const std::vector<lattice_index> &removals,
                                    const std::vector<zero_sequence::added_point> &additions)
{
    try {
        return zero_sequence(c.alpha, removals).add_points(additions);
    } catch (const invalid_params &e) {
        throw parse_error(e.what());
    }
}

inline json sequence_json(const zero_sequence &z)
{
    json j;
    j["gamma"] = number(z.gamma());
    json rem = json::array();
    for (const auto &idx : z.removed()) {
        rem.push_back(json::array({idx.m, idx.n}));
    }
    j["removed"] = rem;
    json add = json::array();
    for (const auto &a : z.added()) {
        json q;
        q["point"] = complex_json(a.point);
        q["multiplicity"] = a.multiplicity;
        add.push_back(q);
    }
    j["added"] = add;
    return j;
}

/// sigma at z by all three routes, with pairwise relative differences.
inline command_result run_sigma(const run_config &c, const complex &z)
{
    c.validate();
    command_result res;
    res.report = header("sigma", c);
    res.report["z"] = complex_json(z);
    const square_lattice lat(c.alpha);
    auto opts = c.sigma();
    const sigma_evaluator base(lat, opts);
    // the product route needs a window that covers |z|
    opts.truncation_ring = std::max(base.truncation_ring(), base.required_ring(std::abs(z), opts.tolerance));
    const sigma_evaluator wide(lat, opts);
    const log_complex product = wide.eval_product(z);
    const log_complex reduced = base.eval_reduced(z);
    const log_complex theta = base.eval_theta(z);
    json routes;
    routes["product"] = log_value_json(product, z, c.alpha);
    routes["product"]["truncation_ring"] = wide.truncation_ring();
    routes["reduced"] = log_value_json(reduced, z, c.alpha);
    routes["theta"] = log_value_json(theta, z, c.alpha);
    res.report["routes"] = routes;
    const double pr = relative_difference(product, reduced);
    const double pt = relative_difference(product, theta);
    const double rt = relative_difference(reduced, theta);
    json diffs;
    diffs["product_reduced"] = number(pr);
    diffs["product_theta"] = number(pt);
    diffs["reduced_theta"] = number(rt);
    res.report["relative_differences"] = diffs;
    const double worst = std::max({pr, pt, rt});
    res.report["max_relative_difference"] = number(worst);
    res.report["pass"] = worst < c.tol("oracle");
    res.exit = worst < c.tol("oracle") ? exit_ok : exit_failure;
    return res;
}

/// Double periodicity of the weighted modulus of sigma at seeded random points.
/**
 * `eta_scale` != 1 corrupts the quasi-period constant (negative control) and
 * disables the construction self-test so the check itself has to catch it.
 */
inline command_result run_periodicity(const run_config &c, std::int64_t samples, double eta_scale = 1.0)
{
    c.validate();
    if (samples < 0) {
        throw parse_error("--samples must be nonnegative");
    }
    command_result res;
    res.report = header("periodicity", c);
    res.report["samples"] = samples;
    auto opts = c.sigma();
    opts.eta_scale = eta_scale;
    opts.self_test = eta_scale == 1.0;
    const sigma_evaluator sigma(c.alpha, opts);
    if (eta_scale != 1.0) {
        res.report["eta_scale"] = number(eta_scale);
    }
    const double o = sigma.lattice().omega1();
    sample_rng rng(c.seed);
    double dev_real = 0.0, dev_imag = 0.0;
    for (std::int64_t i = 0; i < samples; ++i) {
        // uniform in the disk |z| <= 6 omega1
        const double rad = 6.0 * o * std::sqrt(rng.uniform());
        const double ang = 2.0 * std::numbers::pi * rng.uniform();
        const complex z = std::polar(rad, ang);
        const double w0 = weighted_mag(sigma.eval_reduced(z), z, c.alpha);
        const complex z1 = z + complex{o, 0.0}, z2 = z + complex{0.0, o};
        dev_real = std::max(dev_real, std::abs(weighted_mag(sigma.eval_reduced(z1), z1, c.alpha) - w0));
        dev_imag = std::max(dev_imag, std::abs(weighted_mag(sigma.eval_reduced(z2), z2, c.alpha) - w0));
    }
    const double tol = c.tol("periodicity");
    const bool pass = dev_real < tol && dev_imag < tol;
    res.report["max_deviation_omega1"] = number(dev_real);
    res.report["max_deviation_i_omega1"] = number(dev_imag);
    res.report["tolerance"] = number(tol);
    res.report["pass"] = pass;
    if (samples == 0) {
        res.report["warning"] = "no samples drawn; the check is vacuous";
    }
    res.exit = pass ? exit_ok : exit_failure;
    return res;
}

/// Norm (or sup) estimate of a function descriptor.
inline command_result run_norm(const run_config &c, const std::string &spec)
{
    c.validate();
    const auto sigma = std::make_shared<const sigma_evaluator>(c.alpha, c.sigma());
    const spec_function f = parse_function_spec(spec, sigma);
    command_result res;
    res.report = header("norm", c);
    res.report["function"] = spec;
    const auto params = c.params();
    std::visit(
        [&](const auto &fn) {
            if (params.is_sup()) {
                res.report["sup"] = sup_json(sup_norm(fn, params, c.max_ring));
            } else {
                res.report["estimate"] = norm_json(estimate_norm(fn, params, c.quadrature(), c.margins()));
            }
        },
        f);
    return res;
}

/// dim(I_Z) with basis evidence, and the maximality certificate when k = 1.
inline command_result run_dim(const run_config &c, const std::vector<lattice_index> &removals,
                              const std::vector<zero_sequence::added_point> &additions)
{
    c.validate();
    const zero_sequence z = build_sequence(c, removals, additions);
    const auto params = c.params();
    command_result res;
    res.report = header("dim", c);
    res.report["sequence"] = sequence_json(z);
    const auto rep = dim_iz(z, params, c.sigma());
    res.report["dimension"] = dimension_json(rep);
    if (rep.k == 0) {
        return res;
    }
    try {
        res.report["verification"] = verification_json(verify_basis(rep, params, c.quadrature(), c.seed, c.max_ring));
    } catch (const verification_failed &e) {
        res.report["verification"] = verification_json(e.record());
        res.exit = exit_failure;
        return res;
    }
    if (rep.k == 1) {
        res.report["certificate"] = certificate_json(certify_maximal(z, params, c.quadrature(), c.seed, c.max_ring));
    }
    return res;
}

/// Maximality certificate; written to c.out when set.
inline command_result run_certify(const run_config &c, const std::vector<lattice_index> &removals,
                                  const std::vector<zero_sequence::added_point> &additions)
{
    c.validate();
    const zero_sequence z = build_sequence(c, removals, additions);
    command_result res;
    res.report = header("certify", c);
    res.report["sequence"] = sequence_json(z);
    try {
        const auto cert = certify_maximal(z, c.params(), c.quadrature(), c.seed, c.max_ring);
        res.report["certificate"] = certificate_json(cert);
        res.report["maximal"] = cert.maximal;
        res.exit = cert.maximal ? exit_ok : exit_failure;
    } catch (const not_maximal &e) {
        res.report["maximal"] = false;
        res.report["error"] = "NotMaximal";
        res.report["k"] = e.k();
        res.exit = exit_failure;
    } catch (const verification_failed &e) {
        res.report["maximal"] = false;
        res.report["error"] = "VerificationFailed";
        res.report["verification"] = verification_json(e.record());
        res.exit = exit_internal;
    }
    if (!c.out.empty()) {
        std::ofstream os(c.out, std::ios::binary);
        if (!os) {
            throw parse_error("cannot write certificate to '" + c.out + "'");
        }
        os << res.text();
    }
    return res;
}

/// Grid of weighted log-moduli over the rectangle spanned by two corners.
struct heatmap_grid
{
    complex lower;
    complex upper;
    std::size_t resolution = 0;
    /// Row-major; row 0 is the top edge (largest imaginary part), column 0 the left edge.
    std::vector<double> values;

    double at(std::size_t row, std::size_t col) const { return values[row * resolution + col]; }
    complex node(std::size_t row, std::size_t col) const
    {
        const double d = resolution > 1 ? static_cast<double>(resolution - 1) : 1.0;
        return {lower.real() + (upper.real() - lower.real()) * static_cast<double>(col) / d,
                upper.imag() - (upper.imag() - lower.imag()) * static_cast<double>(row) / d};
    }
};

template <evaluable_function F>
heatmap_grid sample_heatmap(const F &f, double alpha, const complex &a, const complex &b, std::size_t resolution)
{
    heatmap_grid g;
    g.lower = {std::min(a.real(), b.real()), std::min(a.imag(), b.imag())};
    g.upper = {std::max(a.real(), b.real()), std::max(a.imag(), b.imag())};
    g.resolution = resolution;
    g.values.resize(resolution * resolution);
    parallel_for(resolution, [&](std::size_t row) {
        for (std::size_t col = 0; col < resolution; ++col) {
            const complex z = g.node(row, col);
            g.values[row * resolution + col] = weighted_mag(f(z), z, alpha);
        }
    });
    return g;
}

/// Strict local minima below `threshold` (4-neighbourhood, edges use available neighbours).
inline std::size_t count_wells(const heatmap_grid &g, double threshold)
{
    std::size_t wells = 0;
    const auto n = static_cast<std::ptrdiff_t>(g.resolution);
    for (std::ptrdiff_t r = 0; r < n; ++r) {
        for (std::ptrdiff_t c = 0; c < n; ++c) {
            const double v = g.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
            if (!(v < threshold)) {
                continue;
            }
            bool is_min = true;
            for (const auto &[dr, dc] : {std::pair{-1, 0}, std::pair{1, 0}, std::pair{0, -1}, std::pair{0, 1}}) {
                const auto rr = r + dr, cc = c + dc;
                if (rr >= 0 && rr < n && cc >= 0 && cc < n
                    && !(g.at(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc)) > v)) {
                    is_min = false;
                }
            }
            wells += is_min ? 1 : 0;
        }
    }
    return wells;
}

inline std::string format_value(double v)
{
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (std::isnan(v)) {
        return "nan";
    }
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

/// Heatmap CSV (metadata header, then one line per row) and optional 8-bit PGM.
inline command_result run_heatmap(const run_config &c, const std::string &spec, const complex &from, const complex &to,
                                  std::int64_t resolution, const std::string &pgm_path = {})
{
    c.validate();
    if (resolution <= 0 || resolution > 8192) {
        throw parse_error("--resolution must be in 1..8192");
    }
    if (c.out.empty()) {
        throw parse_error("heatmap needs --out for the CSV file");
    }
    const auto sigma = std::make_shared<const sigma_evaluator>(c.alpha, c.sigma());
    const spec_function f = parse_function_spec(spec, sigma);
    const auto res_n = static_cast<std::size_t>(resolution);
    const heatmap_grid g = std::visit([&](const auto &fn) { return sample_heatmap(fn, c.alpha, from, to, res_n); }, f);

    double lo = std::numeric_limits<double>::infinity(), hi = -std::numeric_limits<double>::infinity();
    for (double v : g.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    std::ofstream csv(c.out, std::ios::binary);
    if (!csv) {
        throw parse_error("cannot write heatmap to '" + c.out + "'");
    }
    csv << "# fock-zeros heatmap; function=" << spec << "; alpha=" << format_value(c.alpha)
        << "; real=[" << format_value(g.lower.real()) << "," << format_value(g.upper.real()) << "]; imag=["
        << format_value(g.lower.imag()) << "," << format_value(g.upper.imag()) << "]; resolution=" << res_n
        << "; rows=imag descending; columns=real ascending; value=log(|f(z)|) - alpha|z|^2/2\n";
    for (std::size_t r = 0; r < res_n; ++r) {
        for (std::size_t col = 0; col < res_n; ++col) {
            csv << (col ? "," : "") << format_value(g.at(r, col));
        }
        csv << "\n";
    }
    if (!csv) {
        throw parse_error("write to '" + c.out + "' failed");
    }

    if (!pgm_path.empty()) {
        std::ofstream pgm(pgm_path, std::ios::binary);
        if (!pgm) {
            throw parse_error("cannot write PGM to '" + pgm_path + "'");
        }
        pgm << "P5\n" << res_n << " " << res_n << "\n255\n";
        const double floor_v = -20.0;
        const double span = hi > floor_v ? hi - floor_v : 1.0;
        for (double v : g.values) {
            const double t = std::clamp((std::max(v, floor_v) - floor_v) / span, 0.0, 1.0);
            pgm.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * t))));
        }
    }

    command_result res;
    res.report = header("heatmap", c);
    res.report["function"] = spec;
    res.report["lower"] = complex_json(g.lower);
    res.report["upper"] = complex_json(g.upper);
    res.report["resolution"] = res_n;
    res.report["csv"] = c.out;
    res.report["pgm"] = pgm_path;
    res.report["min_weighted_mag"] = number(lo);
    res.report["max_weighted_mag"] = number(hi);
    res.report["wells_below_minus_10"] = count_wells(g, -10.0);
    return res;
}

}

#endif
