// Timing comparison of the serial reference implementations against the
// scan kernels (single-threaded and OpenMP).

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "okcf/kernels.hpp"

using namespace okcf;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double time_ms(F&& f) {
    auto t0 = Clock::now();
    f();
    auto t1 = Clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (no OpenMP)\n");
#endif
    const RingSpec& ring = RingSpec::get(1);
    PComplex z = ComplexSpec::parse("sqrt(2)").eval(192);

    std::printf("\ndirichlet_search, z = sqrt(2), d = 1\n");
    std::printf("%8s %16s %16s %16s\n", "Q", "serial-ball", "kernel-1t",
                "kernel-omp");
    for (double Q : {64.0, 128.0, 256.0, 512.0}) {
        DirichletHit a, b, c;
        double t_ref = time_ms([&] { a = dirichlet_search_serial(z, Q, ring); });
        DirichletOptions one;
        one.parallel = false;
        double t_one = time_ms([&] { b = dirichlet_search(z, Q, ring, one); });
        double t_omp = time_ms([&] { c = dirichlet_search(z, Q, ring); });
        if (std::abs(a.err_mid - b.err_mid) > 1e-9 ||
            std::abs(a.err_mid - c.err_mid) > 1e-9) {
            std::printf("MISMATCH at Q = %g\n", Q);
            return 1;
        }
        std::printf("%8g %13.2f ms %13.2f ms %13.2f ms\n", Q, t_ref, t_one,
                    t_omp);
    }

    std::printf("\nsl2 ball enumeration + min residual, d = 1\n");
    std::printf("%8s %16s %16s %16s\n", "H", "naive", "structured",
                "min-err-omp");
    Vec2 zv{z, PComplex::from_long(1, 192)};
    Vec2 y{PComplex(192), PComplex::from_long(1, 192)};
    for (long H : {2L, 3L, 4L}) {
        std::size_t n_naive = 0, n_struct = 0;
        double t_naive = time_ms([&] { n_naive = sl2_ball_naive(ring, H).size(); });
        double t_struct =
            time_ms([&] { n_struct = sl2_ball_structured(ring, H).size(); });
        Sl2BallStats st;
        double t_min = time_ms([&] { st = sl2_ball_min_error(ring, H, zv, y); });
        if (n_naive != n_struct || st.count != n_naive) {
            std::printf("COUNT MISMATCH at H = %ld\n", H);
            return 1;
        }
        std::printf("%8ld %13.2f ms %13.2f ms %13.2f ms   (%zu matrices)\n",
                    H, t_naive, t_struct, t_min, n_naive);
    }
    return 0;
}
