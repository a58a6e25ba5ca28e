// Serial vs OpenMP kernels on one large state, plus parallel CQ rounds.
//
//   bench_kernels [d] [sites] [repeats]
//
// Each row checks that both variants produce bitwise-identical output.

#include "qss/kernels.hpp"
#include "qss/protocols.hpp"
#include "qss/schemes.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>

using namespace qss;
using kernels::Amplitude;

namespace {

double seconds(const std::function<void()>& f, int repeats) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

void row(const char* name, double serial, double parallel, bool same) {
    std::printf("%-22s %10.4f %10.4f %8.2fx  %s\n", name, serial * 1e3, parallel * 1e3, serial / parallel,
                same ? "identical" : "DIFFER");
}

} // namespace

int main(int argc, char** argv) {
    const std::uint32_t d = argc > 1 ? static_cast<std::uint32_t>(std::atoi(argv[1])) : 7;
    const std::size_t sites = argc > 2 ? static_cast<std::size_t>(std::atoi(argv[2])) : 7;
    const int repeats = argc > 3 ? std::atoi(argv[3]) : 5;

    const kernels::Layout layout(d, sites);
    const auto omega = kernels::omega_table(d);
    std::mt19937_64 gen(1);
    std::normal_distribution<double> normal;

    std::vector<Amplitude> psi(layout.dim);
    for (auto& a : psi) a = {normal(gen), normal(gen)};

    kernels::GraphData graph;
    graph.adjacency.assign(sites * sites, 0);
    for (std::size_t i = 0; i < sites; ++i)
        for (std::size_t j = i + 1; j < sites; ++j)
            graph.adjacency[i * sites + j] = graph.adjacency[j * sites + i] = static_cast<std::uint32_t>(gen() % d);
    graph.z.resize(sites);
    graph.x.resize(sites);
    graph.m.resize(sites);
    for (std::size_t i = 0; i < sites; ++i) {
        graph.z[i] = static_cast<std::uint32_t>(gen() % d);
        graph.x[i] = static_cast<std::uint32_t>(gen() % d);
        graph.m[i] = static_cast<std::uint32_t>(gen() % d);
    }
    std::vector<std::uint32_t> px(sites), pz(sites);
    for (std::size_t i = 0; i < sites; ++i) {
        px[i] = static_cast<std::uint32_t>(gen() % d);
        pz[i] = static_cast<std::uint32_t>(gen() % d);
    }
    std::vector<Amplitude> mat(static_cast<std::size_t>(d) * d);
    for (auto& a : mat) a = {normal(gen), normal(gen)};
    std::vector<Amplitude> diag(omega.begin(), omega.end());

    std::printf("d=%u sites=%zu dim=%zu threads=%d (best of %d)\n", d, sites, layout.dim, omp_get_max_threads(), repeats);
    std::printf("%-22s %10s %10s %9s\n", "kernel", "serial ms", "omp ms", "speedup");

    std::vector<Amplitude> a(layout.dim), b(layout.dim);
    {
        const double ts = seconds([&] { kernels::serial::graph_state(a, layout, graph, omega); }, repeats);
        const double tp = seconds([&] { kernels::parallel::graph_state(b, layout, graph, omega); }, repeats);
        row("graph_state", ts, tp, a == b);
    }
    {
        const double ts = seconds([&] { kernels::serial::apply_site_matrix(psi, a, layout, sites / 2, mat); }, repeats);
        const double tp = seconds([&] { kernels::parallel::apply_site_matrix(psi, b, layout, sites / 2, mat); }, repeats);
        row("apply_site_matrix", ts, tp, a == b);
    }
    {
        const double ts = seconds([&] { kernels::serial::apply_weyl(psi, a, layout, px, pz, 1, omega); }, repeats);
        const double tp = seconds([&] { kernels::parallel::apply_weyl(psi, b, layout, px, pz, 1, omega); }, repeats);
        row("apply_weyl", ts, tp, a == b);
    }
    {
        const double ts = seconds([&] { kernels::serial::apply_controlled_shift(psi, a, layout, 0, sites - 1, 1); }, repeats);
        const double tp = seconds([&] { kernels::parallel::apply_controlled_shift(psi, b, layout, 0, sites - 1, 1); }, repeats);
        row("apply_controlled_shift", ts, tp, a == b);
    }
    {
        a = psi;
        b = psi;
        const double ts = seconds([&] { kernels::serial::apply_pair_phase(a, layout, 0, 1, 2, omega); }, repeats);
        const double tp = seconds([&] { kernels::parallel::apply_pair_phase(b, layout, 0, 1, 2, omega); }, repeats);
        row("apply_pair_phase", ts, tp, a == b);
    }
    {
        a = psi;
        b = psi;
        const double ts = seconds([&] { kernels::serial::apply_site_diagonal(a, layout, 2, diag); }, repeats);
        const double tp = seconds([&] { kernels::parallel::apply_site_diagonal(b, layout, 2, diag); }, repeats);
        row("apply_site_diagonal", ts, tp, a == b);
    }
    {
        const std::vector<std::size_t> keep{0, sites - 1};
        std::vector<Amplitude> ra(static_cast<std::size_t>(d) * d * d * d), rb(ra.size());
        const double ts = seconds([&] { kernels::serial::partial_trace(psi, layout, keep, ra); }, repeats);
        const double tp = seconds([&] { kernels::parallel::partial_trace(psi, layout, keep, rb); }, repeats);
        row("partial_trace", ts, tp, ra == rb);
    }

    // Whole protocol: CQ rounds are independent, so they parallelise across rounds.
    {
        const auto scheme = make_scheme("ring35", 3);
        CqConfig cfg;
        cfg.rounds = 2000;
        cfg.seed = 5;
        const int threads = omp_get_max_threads();
        std::string ta, tb;
        omp_set_num_threads(1);
        const double ts = seconds([&] { ta = cq_run(scheme, cfg).transcript.render(); }, 1);
        omp_set_num_threads(threads);
        const double tp = seconds([&] { tb = cq_run(scheme, cfg).transcript.render(); }, 1);
        row("cq_run ring35 x2000", ts, tp, ta == tb);
    }
    return 0;
}
