// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are pinned in code, next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

#include "okcf/embed.hpp"
#include "okcf/runner.hpp"

using namespace okcf;
using Clock = std::chrono::steady_clock;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;
    void fail(const std::string& why) {
        pass = false;
        notes.push_back(why);
    }
    void note(const std::string& what) { notes.push_back(what); }
    void expect(bool ok, const std::string& why) {
        if (!ok) fail(why);
    }
};

// Seeded random dyadic complex numbers with 160 fractional bits, in the
// box [-2, 2] x [-2, 2]i. Deep expansions of these do not terminate at the
// depths used here.
ComplexSpec random_dyadic(std::mt19937_64& rng) {
    auto digits = [&] {
        mpz_class m;
        for (int i = 0; i < 3; ++i) m = (m << 54) + (long)(rng() >> 10);
        bool neg = (rng() & 1) != 0;
        mpz_class den = mpz_class(1) << 161;
        std::string s = "(" + m.get_str() + "/" + den.get_str() + ")";
        return neg ? "(0-" + s + ")" : s;
    };
    std::string re = digits(), im = digits();
    return ComplexSpec::parse(re + "+" + im + "*i");
}

double elapsed_s(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// ---------------------------------------------------------------------
// corpus shared by criteria 1-3

struct Corpus {
    std::vector<CFExpansion> d1, d3;
};

const Corpus& corpus() {
    static Corpus c = [] {
        Corpus out;
        std::mt19937_64 rng(0x5eed0001);
        for (int i = 0; i < 100; ++i)
            out.d1.push_back(
                expand(random_dyadic(rng), RingSpec::get(1), {.max_terms = 50}));
        for (int i = 0; i < 100; ++i)
            out.d3.push_back(
                expand(random_dyadic(rng), RingSpec::get(3), {.max_terms = 50}));
        return out;
    }();
    return c;
}

void criterion1(Outcome& out) {
    auto t0 = Clock::now();
    for (const auto* set : {&corpus().d1, &corpus().d3}) {
        for (const auto& e : *set) {
            const RingSpec& ring = e.ring();
            out.expect(e.size() == 50, "expansion shallower than 50 terms");
            for (int n = 0; n < e.size(); ++n) {
                OKInt det = e.q(n) * e.p(n - 1) - e.p(n) * e.q(n - 1);
                OKInt want =
                    (n % 2 == 0) ? OKInt::one(ring) : -OKInt::one(ring);
                if (det != want) {
                    out.fail("determinant identity failed at n=" +
                             std::to_string(n));
                    return;
                }
                if (!convergent_matrix(e, n).is_unimodular()) {
                    out.fail("convergent matrix with det != 1");
                    return;
                }
                auto [num, den] = reconstruct_fraction(e, n);
                if (!(num == e.p(n)) || !(den == e.q(n)) ||
                    !(num * e.q(n) == den * e.p(n))) {
                    out.fail("reconstruction mismatch at n=" +
                             std::to_string(n));
                    return;
                }
            }
        }
    }
    double t = elapsed_s(t0);
    out.note("200 expansions, depth 50, all identities exact in " + fmt(t) +
             "s");
    out.expect(t < 120.0, "runtime budget of 2 minutes exceeded");
}

void criterion2(Outcome& out) {
    int idx = 0;
    for (const auto* set : {&corpus().d1, &corpus().d3}) {
        const RingSpec& ring = (idx++ == 0) ? RingSpec::get(1)
                                            : RingSpec::get(3);
        for (const auto& e : *set) {
            for (int n = 1; n < e.size(); ++n) {
                if (!(e.q(n).norm() > e.q(n - 1).norm())) {
                    out.fail("monotonicity violated (d=" +
                             std::to_string(ring.d) + ", n=" +
                             std::to_string(n) + ")");
                    return;
                }
            }
            for (int n = 2; n < e.size(); ++n) {
                // norm(q_n) >= theta^2 norm(q_{n-2}), exact comparison
                QuadVal lhs{mpq_class(e.q(n).norm())};
                QuadVal rhs =
                    ring.theta_sq * QuadVal(mpq_class(e.q(n - 2).norm()));
                if (!(lhs >= rhs)) {
                    out.fail("theta growth violated (d=" +
                             std::to_string(ring.d) + ", n=" +
                             std::to_string(n) + ")");
                    return;
                }
            }
        }
    }
    out.note("zero violations across the corpus (exact comparisons)");
}

void criterion3(Outcome& out) {
    mpq_class omega(11, 10);
    int total = 0, sandwich_pass = 0;
    for (const auto* set : {&corpus().d1, &corpus().d3}) {
        for (const auto& e : *set) {
            CFConstants cs = constants(e.ring());
            PReal c1 = PReal::from_quad(cs.c1, e.prec());
            for (int n = 5; n + 1 < e.size(); ++n) {
                if (!e.eps(n).abs().le_certified(c1 / e.q_abs(n + 1))) {
                    out.fail("upper error bound failed at n=" +
                             std::to_string(n));
                    return;
                }
            }
            ++total;
            auto rep = error_sandwich_check(e, omega, 5);
            if (rep.status == SandwichReport::kOk && rep.all_pass())
                ++sandwich_pass;
            else
                out.note("sandwich exclusion: expansion #" +
                         std::to_string(total));
        }
    }
    double frac = (double)sandwich_pass / total;
    out.note("sandwich pass fraction " + fmt(frac) + " (" +
             std::to_string(sandwich_pass) + "/" + std::to_string(total) +
             ")");
    out.expect(frac >= 0.95, "sandwich pass fraction below 95%");
}

// ---------------------------------------------------------------------

std::vector<std::string> origin_slopes() {
    // 20 seeded slope expressions: quadratic surds, surd combinations and
    // high-precision decimal (pi/e-derived) inputs
    return {
        "sqrt(2)",
        "sqrt(3)",
        "sqrt(5)",
        "sqrt(6)",
        "sqrt(7)",
        "sqrt(10)",
        "sqrt(13)",
        "1+sqrt(2)",
        "(1+sqrt(5))/2",
        "sqrt(2)+sqrt(3)",
        "(sqrt(3)+sqrt(2)*i)/3",
        "sqrt(5)+sqrt(2)*i",
        "(sqrt(7)+sqrt(3)*i)/2",
        "sqrt(2)/2+sqrt(11)*i",
        "3.141592653589793238462643383279",
        "2.718281828459045235360287471352",
        "1.414213562373095048801688724209+0.5772156649015328606065120900824*i",
        "0.6931471805599453094172321214581+1.202056903159594285399738161511*i",
        "3.359885666243177553172011302918", // pi + e - 2.5
        "0.915965594177219015054603514932+0.0409999999999*i",
    };
}

void criterion4(Outcome& out) {
    auto t0 = Clock::now();
    auto slopes = origin_slopes();
    int i = 0;
    for (const auto& s : slopes) {
        ++i;
        auto cfg = ExperimentConfig::from_string(
            "d = 1\nz = " + s + "\ntarget = origin\nmax_terms = 43\n"
            "k_min = 1\nk_max = 40\nseed = 77\n");
        auto recs = run_sweep(cfg, nullptr);
        if (recs.size() < 20) {
            out.fail("slope #" + std::to_string(i) + ": too few records");
            continue;
        }
        auto mu = estimate_mu(recs);
        if (!(mu.mu_fit >= 0.90 && mu.mu_fit <= 1.10))
            out.fail("slope #" + std::to_string(i) + ": fitted mu " +
                     fmt(mu.mu_fit) + " outside [0.90, 1.10]");
        auto muh = estimate_mu_hat(recs);
        if (!(muh.mu_hat >= 0.85))
            out.fail("slope #" + std::to_string(i) + ": mu_hat tail min " +
                     fmt(muh.mu_hat) + " below 0.85");
    }
    double t = elapsed_s(t0);
    out.note(std::to_string(slopes.size()) + " slopes in " + fmt(t) + "s");
    out.expect(t < 60.0, "runtime budget of 1 minute exceeded");
}

void criterion5(Outcome& out) {
    // 5 rational-slope targets as (a, b) coefficient pairs
    const std::vector<std::pair<std::string, std::string>> targets = {
        {"0,0", "1,0"},  // slope 0
        {"1,0", "1,1"},  // 1/(1+i)
        {"1,0", "2,0"},  // 1/2
        {"0,1", "2,0"},  // i/2
        {"1,0", "1,2"},  // 1/(1+2i)
    };
    std::mt19937_64 rng(0x5eed0005);
    std::vector<std::string> zs = {"sqrt(2)", "sqrt(3)", "sqrt(5)",
                                   "sqrt(6)", "sqrt(7)"};
    for (int i = 0; i < 5; ++i) zs.push_back(random_dyadic(rng).text());

    double worst_lo = 1, worst_hi = 0, worst_stab = 1;
    for (const auto& [ta, tb] : targets) {
        for (const auto& z : zs) {
            auto cfg = ExperimentConfig::from_string(
                "d = 1\nz = " + z + "\ntarget = rational\ntarget_a = " + ta +
                "\ntarget_b = " + tb +
                "\nmax_terms = 40\nk_min = 5\nk_max = 34\nseed = 5\n");
            auto recs = run_sweep(cfg, nullptr);
            if (recs.size() < 16) {
                out.fail("rational sweep too short for z=" + z);
                continue;
            }
            auto mu = estimate_mu(recs);
            worst_lo = std::min(worst_lo, mu.mu_fit);
            worst_hi = std::max(worst_hi, mu.mu_fit);
            if (!(mu.mu_fit >= 0.40 && mu.mu_fit <= 0.60))
                out.fail("fitted exponent " + fmt(mu.mu_fit) +
                         " outside [0.40, 0.60] (target " + ta + ";" + tb +
                         ", z=" + z.substr(0, 12) + ")");
            // Stability of the measured bound constant across the tail:
            // the constant of an upper bound over a window is the max of
            // the per-record values, so compare the two halves of the last
            // 16 records.
            size_t n = recs.size();
            double m1 = 0, m2 = 0;
            for (size_t r = n - 16; r < n - 8; ++r)
                m1 = std::max(m1, recs[r].measured_const);
            for (size_t r = n - 8; r < n; ++r)
                m2 = std::max(m2, recs[r].measured_const);
            double stab = std::max(m1, m2) / std::min(m1, m2);
            worst_stab = std::max(worst_stab, stab);
            if (!(stab <= 4.0))
                out.fail("measured constant spread " + fmt(stab) +
                         " > 4 (target " + ta + ";" + tb + ", z=" +
                         z.substr(0, 12) + ")");
        }
    }
    out.note("fitted exponents in [" + fmt(worst_lo) + ", " + fmt(worst_hi) +
             "], worst constant spread " + fmt(worst_stab));
}

void criterion6(Outcome& out) {
    std::mt19937_64 rng(0x5eed0006);
    const std::vector<std::pair<std::string, std::string>> pairs = {
        {"sqrt(2)", "sqrt(3)"},
        {"sqrt(3)", "sqrt(5)"},
        {"sqrt(5)", "sqrt(2)"},
        {"sqrt(6)", "sqrt(7)"},
        {"sqrt(7)", "sqrt(10)"},
        {"sqrt(2)+sqrt(3)*i", "sqrt(5)"},
        {random_dyadic(rng).text(), random_dyadic(rng).text()},
        {random_dyadic(rng).text(), random_dyadic(rng).text()},
        {random_dyadic(rng).text(), random_dyadic(rng).text()},
        {random_dyadic(rng).text(), random_dyadic(rng).text()},
    };
    int idx = 0;
    for (const auto& [zs, ys] : pairs) {
        ++idx;
        auto cfg = ExperimentConfig::from_string(
            "d = 1\nz = " + zs + "\ntarget = irrational\ny1 = " + ys +
            "\nmax_terms = 46\nk_min = 1\nk_max = 44\nseed = 6\n");
        auto recs = run_sweep(cfg, nullptr);
        if (recs.size() < 10) {
            out.fail("pair #" + std::to_string(idx) +
                     ": too few admissible records (" +
                     std::to_string(recs.size()) + ")");
            continue;
        }
        auto mu = estimate_mu(recs);
        if (!(mu.mu_fit >= 0.30 && mu.mu_fit <= 0.60))
            out.fail("pair #" + std::to_string(idx) + ": fitted mu " +
                     fmt(mu.mu_fit) + " outside [0.30, 0.60]");

        // select_indices against a brute-force scan, exact agreement
        const RingSpec& g = RingSpec::get(1);
        auto ez = expand(ComplexSpec::parse("(" + zs + ")/(1)"), g,
                         {.max_terms = 30});
        auto ey = expand(ComplexSpec::parse("(" + ys + ")/(1)"), g,
                         {.max_terms = 30});
        auto sel = select_indices(ez, ey);
        std::vector<std::pair<int, int>> brute;
        for (int j = 1; j + 1 < ey.size(); ++j)
            for (int k = 1; k < ez.size(); ++k) {
                mpz_class s3 = ey.q(j).norm();
                s3 = s3 * s3 * s3;
                mpz_class s13 = ey.q(j + 1).norm();
                s13 = s13 * s13 * s13;
                if (ez.q(k - 1).norm() < s3 && s3 <= ez.q(k).norm() &&
                    ez.q(k).norm() < s13)
                    brute.emplace_back(j, k);
            }
        if (!(sel == brute))
            out.fail("pair #" + std::to_string(idx) +
                     ": select_indices disagrees with the brute-force scan");
    }
}

void criterion7(Outcome& out) {
    const RingSpec& g = RingSpec::get(1);
    std::mt19937_64 rng(0x5eed0007);
    std::vector<std::string> zs = {"sqrt(2)"};
    for (int i = 0; i < 5; ++i) zs.push_back(random_dyadic(rng).text());

    int zi = 0;
    for (const auto& zs_txt : zs) {
        ++zi;
        PComplex z = ComplexSpec::parse(zs_txt).eval(256);
        std::vector<double> logQ, logE;
        for (long Q = 16; Q <= 1024; Q *= 2) {
            auto hit = dirichlet_search(z, (double)Q, g);
            DirichletOptions vo;
            vo.shuffle_seed = 0xabcdef + (std::uint64_t)Q + (unsigned)zi;
            auto again = dirichlet_search(z, (double)Q, g, vo);
            if (!(hit.q == again.q) || !(hit.p == again.p)) {
                out.fail("shuffled re-scan disagreement at Q=" +
                         std::to_string(Q));
                return;
            }
            logQ.push_back(std::log((double)Q));
            logE.push_back(std::log(hit.err.mid_d()));
        }
        // least-squares slope of log err against log Q
        double n = (double)logQ.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t i = 0; i < logQ.size(); ++i) {
            sx += logQ[i];
            sy += logE[i];
            sxx += logQ[i] * logQ[i];
            sxy += logQ[i] * logE[i];
        }
        double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        if (!(slope <= -0.9))
            out.fail("z #" + std::to_string(zi) + ": best-error slope " +
                     fmt(slope) + " above -0.9");
        else
            out.note("z #" + std::to_string(zi) + ": slope " + fmt(slope));
    }
}

void criterion8(Outcome& out) {
    auto t0 = Clock::now();
    const RingSpec& g = RingSpec::get(1);
    auto e = expand(ComplexSpec::parse("sqrt(2)"), g, {.max_terms = 25});
    Vec2 z{e.value(), PComplex::from_long(1, e.prec())};

    const std::vector<std::pair<OKInt, OKInt>> targets = {
        {OKInt::zero(g), OKInt::one(g)},   // slope 0
        {OKInt::one(g), OKInt(1, 1, g)},   // slope 1/(1+i)
    };
    for (const auto& [a, b] : targets) {
        auto rep = residual_floor_check(e, z, a, b, 3);
        bool any_applicable = false;
        for (const auto& row : rep.rows) any_applicable |= row.applicable;
        out.expect(any_applicable, "no applicable k at H=3");
        out.expect(rep.pass, "floor violated by an enumerated gamma");
        out.note("target (" + a.a().get_str() + "+" + a.b().get_str() +
                 "w)/(" + b.a().get_str() + "+" + b.b().get_str() +
                 "w): margin " + fmt(rep.tightest_margin) + ", " +
                 std::to_string(rep.enumerated) + " matrices");

        // negative control: plant a minimum below the tightest floor
        double planted = 0;
        for (const auto& row : rep.rows)
            if (row.applicable) planted = std::max(planted, row.floor_val);
        auto bad = residual_floor_check(e, z, a, b, 3, {}, planted / 2);
        out.expect(!bad.pass, "planted violation was not detected");
    }
    double t = elapsed_s(t0);
    out.note("runtime " + fmt(t) + "s");
    out.expect(t < 300.0, "runtime budget of 5 minutes exceeded");
}

void criterion9(Outcome& out) {
    const RingSpec& g = RingSpec::get(1);
    mpfr_prec_t prec = 192;
    std::mt19937_64 rng(0x5eed0009);
    std::uniform_real_distribution<double> ud(-2, 2);
    auto word = [&](int len) {
        Mat2 m = Mat2::identity(g);
        for (int i = 0; i < len; ++i) {
            switch (rng() % 5) {
            case 0: m = m * Mat2::U(OKInt(1, 0, g)); break;
            case 1: m = m * Mat2::U(OKInt(0, 1, g)); break;
            case 2: m = m * Mat2::J(g); break;
            case 3: m = m * Mat2::U(OKInt(-1, 0, g)); break;
            default: m = m * Mat2::U(OKInt(0, -1, g)); break;
            }
        }
        return m;
    };
    int hom = 0, det = 0, hri = 0, compat = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        Mat2 x = word(7), y = word(7);
        if (embed_matrix(x) * embed_matrix(y) == embed_matrix(x * y)) ++hom;
        if (embed_matrix(x * y).det() == 1) ++det;
        if (height_ratio_certified(x * y)) ++hri;
        Vec2 z{PComplex(PReal::from_double(ud(rng), prec),
                        PReal::from_double(ud(rng), prec)),
               PComplex(PReal::from_double(ud(rng), prec),
                        PReal::from_double(ud(rng), prec))};
        if (compatibility_check(x, z)) ++compat;
    }
    out.expect(hom == trials, "homomorphism failures");
    out.expect(det == trials, "determinant failures");
    out.expect(hri == trials, "height-ratio failures");
    out.expect(compat == trials, "action-compatibility failures");
    out.note("1000/1000 on all four checks");
}

void criterion10(Outcome& out) {
    CFConstants cs = constants(RingSpec::get(1));
    auto b = predicted_bounds(1, 1, cs);
    out.expect(b.origin_mu == 1, "origin mu != 1");
    out.expect(b.origin_mu_hat_lo == 1 && b.origin_mu_hat_hi == 1,
               "origin mu_hat bounds != [1, 1]");
    out.expect(b.irr_mu_lo == mpq_class(1, 3), "irrational lower != 1/3");
    out.expect(b.irr_mu_hat_lo == mpq_class(1, 3),
               "irrational uniform lower != 1/3");
    out.expect(b.irr_mu_hi == mpq_class(1, 2), "irrational upper != 1/2");
    out.expect(b.rat_mu_lo == mpq_class(1, 2) &&
                   b.rat_mu_hat_lo == mpq_class(1, 2) &&
                   b.rat_mu_hi == mpq_class(1, 2),
               "rational bounds != 1/2");
    // the same exact outputs for the d=3 constants (r1 differs)
    auto b3 = predicted_bounds(1, 1, constants(RingSpec::get(3)));
    out.expect(b3.irr_mu_lo == mpq_class(1, 3) &&
                   b3.rat_mu_lo == mpq_class(1, 2),
               "d=3 instantiation differs at omega = 1");
    out.note("exact rational arithmetic, zero tolerance");
}

void criterion11(Outcome& out) {
    fs::path dir = fs::temp_directory_path() / "okcf_acceptance";
    fs::create_directories(dir);
    std::string cfgp = (dir / "repro.cfg").string();
    {
        std::ofstream f(cfgp);
        f << "d = 1\nz = sqrt(2)\ntarget = rational\ntarget_a = 1,0\n"
             "target_b = 1,1\nmax_terms = 35\nk_min = 2\nk_max = 30\n"
             "seed = 11\n";
    }
    std::string o1 = (dir / "a.csv").string(), o2 = (dir / "b.csv").string();
    out.expect(run_cli({"orbit", "--config", cfgp, "--out", o1}) == 0,
               "first run failed");
    out.expect(run_cli({"orbit", "--config", cfgp, "--out", o2}) == 0,
               "second run failed");
    auto slurp = [](const std::string& p) {
        std::ifstream f(p, std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    std::string s1 = slurp(o1), s2 = slurp(o2);
    out.expect(!s1.empty() && s1 == s2, "outputs differ between reruns");
    out.note("byte-identical CSV across two runs");
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<void(Outcome&)> fn;
    };
    const std::vector<Criterion> criteria = {
        {1, "exact identities (det, Mat2, reconstruction)", criterion1},
        {2, "certified growth constants", criterion2},
        {3, "error bounds and sandwich", criterion3},
        {4, "origin exponent fits", criterion4},
        {5, "rational-slope class", criterion5},
        {6, "irrational-slope class", criterion6},
        {7, "dirichlet oracle slope and re-scan", criterion7},
        {8, "residual floor over the height ball", criterion8},
        {9, "SL4(Z) embedding checks", criterion9},
        {10, "predicted bounds at (1, 1), exact", criterion10},
        {11, "byte-identical reruns", criterion11},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        Outcome out;
        auto t0 = Clock::now();
        try {
            c.fn(out);
        } catch (const std::exception& e) {
            out.fail(std::string("exception: ") + e.what());
        }
        double t = elapsed_s(t0);
        std::printf("[%s] criterion %2d: %s (%.1fs)\n",
                    out.pass ? "PASS" : "FAIL", c.id, c.name, t);
        for (const auto& n : out.notes)
            std::printf("         - %s\n", n.c_str());
        if (!out.pass) ++failures;
        std::fflush(stdout);
    }
    if (failures) {
        std::printf("%d criterion(s) FAILED\n", failures);
        return 1;
    }
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
}
