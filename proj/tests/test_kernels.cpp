#include <doctest.h>

#include "qss/kernels.hpp"
#include "qss/oracle.hpp"
#include "qss/verify.hpp"

#include <random>

using namespace qss;
using kernels::Amplitude;

namespace {
std::vector<Amplitude> random_vector(std::size_t n, std::mt19937_64& gen) {
    std::normal_distribution<double> normal;
    std::vector<Amplitude> v(n);
    for (auto& a : v) a = {normal(gen), normal(gen)};
    return v;
}
}

TEST_CASE("parallel kernels are bitwise equal to the serial reference") {
    std::mt19937_64 gen(9);
    for (std::uint32_t d : {3u, 5u}) {
        const std::size_t sites = d == 3 ? 9 : 6;  // above the threading threshold
        const kernels::Layout layout(d, sites);
        const auto omega = kernels::omega_table(d);
        const auto psi = random_vector(layout.dim, gen);
        std::vector<Amplitude> a(layout.dim), b(layout.dim);

        const auto mat = random_vector(static_cast<std::size_t>(d) * d, gen);
        kernels::serial::apply_site_matrix(psi, a, layout, 3, mat);
        kernels::parallel::apply_site_matrix(psi, b, layout, 3, mat);
        CHECK(a == b);

        kernels::serial::apply_controlled_shift(psi, a, layout, 1, 4, 2);
        kernels::parallel::apply_controlled_shift(psi, b, layout, 1, 4, 2);
        CHECK(a == b);

        std::vector<std::uint32_t> x(sites), z(sites);
        for (std::size_t i = 0; i < sites; ++i) {
            x[i] = static_cast<std::uint32_t>(gen() % d);
            z[i] = static_cast<std::uint32_t>(gen() % d);
        }
        kernels::serial::apply_weyl(psi, a, layout, x, z, 2, omega);
        kernels::parallel::apply_weyl(psi, b, layout, x, z, 2, omega);
        CHECK(a == b);

        a = psi;
        b = psi;
        kernels::serial::apply_pair_phase(a, layout, 0, 5, 1, omega);
        kernels::parallel::apply_pair_phase(b, layout, 0, 5, 1, omega);
        CHECK(a == b);
        kernels::serial::apply_site_diagonal(a, layout, 2, omega);
        kernels::parallel::apply_site_diagonal(b, layout, 2, omega);
        CHECK(a == b);

        kernels::GraphData g;
        g.adjacency.assign(sites * sites, 0);
        for (std::size_t i = 0; i + 1 < sites; ++i) g.adjacency[i * sites + i + 1] = g.adjacency[(i + 1) * sites + i] = 1;
        g.z = x;
        g.x = z;
        g.m = x;
        kernels::serial::graph_state(a, layout, g, omega);
        kernels::parallel::graph_state(b, layout, g, omega);
        CHECK(a == b);

        const std::vector<std::size_t> keep{4, 0};
        std::vector<Amplitude> ra(static_cast<std::size_t>(d) * d * d * d), rb(ra.size());
        kernels::serial::partial_trace(psi, layout, keep, ra);
        kernels::parallel::partial_trace(psi, layout, keep, rb);
        CHECK(ra == rb);
    }
}

TEST_CASE("closed-form graph state equals the gate construction") {
    // |0bar> on every site, C^w on the edges, then Z^z, X^x, S^m
    std::mt19937_64 gen(4);
    Rng rng(4);
    for (std::uint32_t d : {3u, 5u}) {
        const auto g = random_labelled_graph(4, d, rng);
        std::vector<int> ids{1, 2, 3, 4};
        DenseState s = DenseState::basis(d, ids, {0, 0, 0, 0});
        for (std::size_t i = 0; i < 4; ++i) s = apply_local(s, LocalGate::Uinv, i);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i + 1; j < 4; ++j) s = apply_controlled_z(s, i, j, g.weight(i, j));
        for (std::size_t i = 0; i < 4; ++i) {
            const auto& l = g.label(i);
            s = apply_local(s, LocalGate::Z, i, l.z.value());
            s = apply_local(s, LocalGate::X, i, l.x.value());
            s = apply_local(s, LocalGate::S, i, l.m.value());
        }
        CHECK(max_phase_aligned_difference(s, build_graph_state(g)) < 1e-12);
        CHECK(std::abs(inner_product(s, build_graph_state(g)) - Amplitude(1, 0)) < 1e-12);
    }
}

TEST_CASE("backend switch") {
    Rng rng(8);
    const auto r = check_kernel_backends({3, 5, 7}, rng);
    INFO(r.detail);
    CHECK(r.pass);
}
