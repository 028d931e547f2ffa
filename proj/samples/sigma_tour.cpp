// Walk through the main objects: sigma on a lattice, a few norms, and the
// dimension of I_Z for lattices with points removed.

#include <cstdio>
#include <memory>
#include <numbers>

#include "fock_zeros/fock.hpp"
#include "fock_zeros/zero_sequence.hpp"

using namespace fock_zeros;

int main()
{
    const double alpha = std::numbers::pi;
    const auto sigma = std::make_shared<const sigma_evaluator>(alpha);
    std::printf("omega1 = %.12f, product window ring = %lld\n", sigma->lattice().omega1(),
                static_cast<long long>(sigma->truncation_ring()));

    const complex z{0.5, 0.25};
    const auto a = sigma->eval_product(z), b = sigma->eval_reduced(z), c = sigma->eval_theta(z);
    std::printf("log|sigma(%.2f%+.2fi)|: product %.15f  reduced %.15f  theta %.15f\n", z.real(), z.imag(), a.log_mag,
                b.log_mag, c.log_mag);

    const fock_params p2(alpha, 2.0);
    const canonical_function f0(sigma);
    const canonical_function f2(sigma, {{0, 0}, {1, 0}});
    for (const auto *f : {&f0, &f2}) {
        const auto est = estimate_norm(*f, p2);
        std::printf("%-40s p=2: %-12s exponent %+.3f\n", f->describe().c_str(), to_string(est.result).c_str(),
                    est.fitted_exponent);
    }

    for (std::int64_t r = 0; r <= 3; ++r) {
        std::vector<lattice_index> removed;
        for (std::int64_t i = 0; i < r; ++i) {
            removed.push_back({i, 0});
        }
        const zero_sequence zs(alpha, removed);
        const auto d2 = dim_iz(zs, p2);
        const auto dinf = dim_iz(zs, fock_params(alpha, fock_params::infinity));
        std::printf("%lld removed: dim I_Z = %zu (p=2), %zu (p=inf)\n", static_cast<long long>(r), d2.k, dinf.k);
    }
    return 0;
}
