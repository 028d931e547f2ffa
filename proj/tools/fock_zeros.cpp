// fock-zeros: command-line front end.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fock_zeros/cli/commands.hpp"

namespace fz = fock_zeros;
namespace fc = fock_zeros::cli;

namespace
{

double parse_p(const std::string &s)
{
    if (s == "inf" || s == "infinity" || s == "Inf") {
        return fz::fock_params::infinity;
    }
    return fc::detail::parse_real(s);
}

fz::lattice_index parse_index(const std::string &s)
{
    const auto comma = s.find(',');
    if (comma == std::string::npos) {
        throw fc::parse_error("lattice index must be m,n: '" + s + "'");
    }
    auto to_int = [&](const std::string &t) {
        std::size_t used = 0;
        std::int64_t v = 0;
        try {
            v = std::stoll(t, &used);
        } catch (const std::exception &) {
            throw fc::parse_error("malformed lattice index '" + s + "'");
        }
        if (used != t.size()) {
            throw fc::parse_error("malformed lattice index '" + s + "'");
        }
        return v;
    };
    return {to_int(s.substr(0, comma)), to_int(s.substr(comma + 1))};
}

// "z" or "z:multiplicity"
fz::zero_sequence::added_point parse_addition(const std::string &s)
{
    const auto colon = s.rfind(':');
    fz::zero_sequence::added_point a;
    if (colon == std::string::npos) {
        a.point = fc::parse_complex(s);
        a.multiplicity = 1;
        return a;
    }
    a.point = fc::parse_complex(s.substr(0, colon));
    const std::string m = s.substr(colon + 1);
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(m, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used != m.size() || v <= 0) {
        throw fc::parse_error("multiplicity must be a positive integer: '" + s + "'");
    }
    a.multiplicity = static_cast<std::size_t>(v);
    return a;
}

void write_report(const fc::command_result &r, const std::string &path)
{
    std::cout << r.text();
    if (path.empty()) {
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os || !(os << r.text())) {
        throw fc::parse_error("cannot write report to '" + path + "'");
    }
}

}

int main(int argc, char **argv)
{
    CLI::App app{"Weierstrass sigma, Fock space norms and maximal zero sequences on square lattices", "fock-zeros"};
    app.require_subcommand(1);

    fc::run_config cfg;
    std::string p_text = "2";
    std::vector<std::string> tol_overrides;
    app.add_option("--alpha", cfg.alpha, "weight parameter alpha > 0 (default pi)");
    app.add_option("--p", p_text, "exponent p > 0 or inf (default 2)");
    app.add_option("--trunc-ring", cfg.trunc_ring, "product window ring (0 = from tolerance)");
    app.add_option("--quad-order", cfg.quad_order, "Gauss-Legendre order per cell triangle");
    app.add_option("--max-ring", cfg.max_ring, "outermost ring for norm and sup estimates");
    app.add_option("--seed", cfg.seed, "seed for random sample points");
    app.add_option("--out", cfg.out, "output file (report, certificate or heatmap CSV)");
    app.add_option("--tol", tol_overrides, "tolerance override name=value (repeatable)");

    std::string z_text;
    auto *sigma_cmd = app.add_subcommand("sigma", "evaluate sigma by product, reduction and theta routes");
    sigma_cmd->add_option("--z,z", z_text, "point, e.g. 0.5+0.25i")->required();

    std::int64_t samples = 100;
    double eta_scale = 1.0;
    auto *per_cmd = app.add_subcommand("periodicity", "check double periodicity of the weighted modulus");
    per_cmd->add_option("--samples", samples, "number of random points");
    per_cmd->add_option("--corrupt-eta", eta_scale, "scale the quasi-period constant (negative control)")
        ->group("");

    std::string spec;
    auto *norm_cmd = app.add_subcommand("norm", "estimate the weighted p-norm of a canonical function");
    norm_cmd->add_option("--function,function", spec, "descriptor, e.g. \"sigma / (z - w(0,0))\"")->required();

    std::vector<std::string> removals, additions;
    auto add_sequence_flags = [&](CLI::App *cmd) {
        cmd->add_option("--remove", removals, "removed lattice index m,n (repeatable)");
        cmd->add_option("--add", additions, "added point z or z:multiplicity (repeatable)");
    };
    auto *dim_cmd = app.add_subcommand("dim", "dimension of I_Z with basis evidence");
    add_sequence_flags(dim_cmd);
    auto *cert_cmd = app.add_subcommand("certify", "maximality certificate for Z");
    add_sequence_flags(cert_cmd);

    std::string from_text, to_text, pgm;
    std::int64_t resolution = 256;
    auto *heat_cmd = app.add_subcommand("heatmap", "grid of the weighted log-modulus");
    heat_cmd->add_option("--function,function", spec, "descriptor")->required();
    heat_cmd->add_option("--from", from_text, "first corner")->required();
    heat_cmd->add_option("--to", to_text, "opposite corner")->required();
    heat_cmd->add_option("--resolution", resolution, "samples per side (1..8192)");
    heat_cmd->add_option("--pgm", pgm, "also write an 8-bit PGM image");

    for (auto *cmd : {sigma_cmd, per_cmd, norm_cmd, dim_cmd, cert_cmd, heat_cmd}) {
        cmd->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? fc::exit_ok : fc::exit_usage;
    }

    try {
        cfg.p = parse_p(p_text);
        for (const auto &t : tol_overrides) {
            cfg.set_tolerance(t);
        }
        std::vector<fz::lattice_index> rem;
        for (const auto &r : removals) {
            rem.push_back(parse_index(r));
        }
        std::vector<fz::zero_sequence::added_point> add;
        for (const auto &a : additions) {
            add.push_back(parse_addition(a));
        }

        fc::command_result result;
        if (*sigma_cmd) {
            result = fc::run_sigma(cfg, fc::parse_complex(z_text));
            write_report(result, cfg.out);
        } else if (*per_cmd) {
            result = fc::run_periodicity(cfg, samples, eta_scale);
            write_report(result, cfg.out);
        } else if (*norm_cmd) {
            result = fc::run_norm(cfg, spec);
            write_report(result, cfg.out);
        } else if (*dim_cmd) {
            result = fc::run_dim(cfg, rem, add);
            write_report(result, cfg.out);
        } else if (*cert_cmd) {
            result = fc::run_certify(cfg, rem, add);
            std::cout << result.text();
        } else {
            result = fc::run_heatmap(cfg, spec, fc::parse_complex(from_text), fc::parse_complex(to_text), resolution,
                                     pgm);
            std::cout << result.text();
        }
        return result.exit;
    } catch (const fc::parse_error &e) {
        std::cerr << "fock-zeros: " << e.what() << "\n";
        return fc::exit_usage;
    } catch (const fz::invalid_params &e) {
        std::cerr << "fock-zeros: " << e.what() << "\n";
        return fc::exit_usage;
    } catch (const fz::truncation_too_small &e) {
        std::cerr << "fock-zeros: " << e.what() << "\n";
        return fc::exit_failure;
    } catch (const std::exception &e) {
        std::cerr << "fock-zeros: internal error: " << e.what() << "\n";
        return fc::exit_internal;
    }
}
