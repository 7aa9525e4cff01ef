// Compares the OpenMP kernels against their serial reference paths:
// residual assembly on the solver grid and the grid Legendre transform.

#include <chrono>
#include <cstdio>

#include "asl/solver.hpp"
#include "asl/transforms.hpp"

using namespace asl;
using clk = std::chrono::steady_clock;

namespace {

double ms_since(clk::time_point t0) {
    return std::chrono::duration<double, std::milli>(clk::now() - t0).count();
}

template <class F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = clk::now();
        f();
        best = std::min(best, ms_since(t0));
    }
    return best;
}

} // namespace

int main() {
    std::printf("threads available: %d\n\n", par::threads());

    {
        const Grid g(Domain::omega(2), 192);
        SolverConfig cfg;
        cfg.grid_n = 192;
        const SolveReport rep = solve_psi(Domain::omega(2), cfg);
        std::vector<double> out(rep.value.size());
        const double ts = time_best_of(5, [&] {
            assemble_residual_serial(g, rep.value, out);
        });
        const double tp = time_best_of(5, [&] {
            assemble_residual(g, rep.value, out, par::Exec::parallel);
        });
        std::printf("residual assembly, %zu nodes:\n", g.nodes().size());
        std::printf("  serial   %8.3f ms\n", ts);
        std::printf("  parallel %8.3f ms   speedup %.2fx\n\n", tp, ts / tp);
    }

    {
        const LatticeField L = sample_on_polytope(H_poly(2), Polytope::square(2), 512);
        const double ts = time_best_of(5, [&] { (void)legendre_dual(L, par::Exec::serial); });
        const double tp = time_best_of(5, [&] { (void)legendre_dual(L, par::Exec::parallel); });
        std::printf("legendre dual, %d x %d lattice:\n", L.nx, L.ny);
        std::printf("  serial   %8.3f ms\n", ts);
        std::printf("  parallel %8.3f ms   speedup %.2fx\n", tp, ts / tp);
    }
    return 0;
}
