#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "wavereg/error.hpp"
#include "wavereg/geometry.hpp"
#include "wavereg/kernel.hpp"
#include "wavereg/transform.hpp"

using namespace wavereg;

namespace {

double tip_value(const KernelParams& p) { return 1.0 / (4.0 * std::sqrt(std::numbers::pi * p.h * p.c)); }

}  // namespace

TEST_CASE("H function reference values") {
    CHECK(h_function(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    // 30-digit quadrature references.
    CHECK(h_function(1.0) == doctest::Approx(0.98815453184494961217).epsilon(1e-13));
    CHECK(h_function(-1.0) == doctest::Approx(0.27791134590705872343).epsilon(1e-13));
    CHECK(h_function(2.5) == doctest::Approx(3.1505254188937144399).epsilon(1e-13));
    CHECK(h_function(-7.0) == doctest::Approx(0.046644081628513687953).epsilon(1e-12));
    CHECK(h_function(20.0) == doctest::Approx(43558282.543597289995).epsilon(1e-12));
    CHECK(h_function(1.0) + h_function(-1.0) == doctest::Approx(1.2660658778).epsilon(1e-10));
}

TEST_CASE("H function is increasing and guarded") {
    CHECK(h_function(3.0) > h_function(2.0));
    CHECK(h_function(2.0) > h_function(1.0));
    double prev = h_function(-50.0);
    for (double z = -49.5; z <= 50.0; z += 0.5) {
        const double cur = h_function(z);
        CHECK(std::isfinite(cur));
        CHECK(cur > prev);
        if (z >= 0.0) CHECK(cur >= 0.5);
        prev = cur;
    }
    CHECK_THROWS_AS(h_function(701.0), OverflowError);
    CHECK_NOTHROW(h_function(-700.0));
    CHECK(std::isfinite(log_h_function(5000.0)));
    CHECK(log_h_function(3.0) == doctest::Approx(std::log(h_function(3.0))).epsilon(1e-13));
}

TEST_CASE("Bessel identity against the I0 series") {
    for (double z : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        CHECK(std::abs(h_function(z) + h_function(-z) - bessel_i0_series(z)) <= 1e-10);
    }
}

TEST_CASE("re_f special cases") {
    const KernelParams p{1.0, 1.3, 0.07};
    for (double z : {0.0, 0.4, 1.0}) {
        for (double s : {0.0, 0.5, 1.0}) {
            CHECK(re_f(0.0, z, s, p) == doctest::Approx(z * z * s * s / (4.0 * p.h * p.c)));
        }
    }
    for (double x : {-2.0, -0.3, 0.8}) {
        const double r = re_f(x, 0.7, 0.0, p);
        CHECK(r == doctest::Approx(-p.c * x * x / (4.0 * p.h * (p.c * p.c + x * x))));
        CHECK(r <= 0.0);
    }
}

TEST_CASE("re_f is convex in sigma") {
    const KernelParams p{1.0, 1.0, 0.05};
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> xd(-3.0, 3.0), zd(0.0, 1.0), sd(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double x = xd(rng), z = zd(rng), s1 = sd(rng), s2 = sd(rng);
        const double mid = re_f(x, z, 0.5 * (s1 + s2), p);
        CHECK(mid <= 0.5 * (re_f(x, z, s1, p) + re_f(x, z, s2, p)) + 1e-12);
    }
}

TEST_CASE("closed form matches high-precision references") {
    struct Ref {
        double x, t, c, h, value;
    };
    const std::vector<Ref> refs = {
        {0.0, 0.0, 1.0, 0.1, 2.2269555035888706044},
        {0.7, 0.3, 1.0, 0.1, -0.022174313409814161616},
        {1.5, -0.6, 1.0, 0.03, 0.00003362277542119576476},
        {0.2, 0.9, 2.0, 0.05, 0.46466442424154599478},
        {2.0, 0.0, 1.0, 0.01, 8.0672379811199188769e-12},
    };
    for (const auto& r : refs) {
        const KernelParams p{1.0, r.c, r.h};
        CHECK(kernel_closed_form(r.x, r.t, p) == doctest::Approx(r.value).epsilon(1e-9));
    }
}

TEST_CASE("closed form value at the cone tip") {
    for (double h : {0.2, 0.05, 0.01}) {
        for (double c : {0.5, 1.0, 4.0}) {
            const KernelParams p{1.0, c, h};
            CHECK(kernel_closed_form(0.0, 1.0, p) == doctest::Approx(tip_value(p)).epsilon(1e-13));
            CHECK(kernel_closed_form(0.0, -1.0, p) == doctest::Approx(tip_value(p)).epsilon(1e-13));
        }
    }
}

TEST_CASE("closed form is even in x and t") {
    const KernelParams p{1.0, 1.0, 0.03};
    for (double x : {0.1, 0.6, 1.4}) {
        for (double t : {0.0, 0.35, 0.8}) {
            const double k = kernel_closed_form(x, t, p);
            CHECK(std::abs(k - kernel_closed_form(-x, t, p)) <= 1e-10 * (1.0 + std::abs(k)));
            CHECK(std::abs(k - kernel_closed_form(x, -t, p)) <= 1e-10 * (1.0 + std::abs(k)));
        }
    }
}

TEST_CASE("principal branch of sqrt(c + ix) has positive real part") {
    for (double c : {1e-3, 1.0, 50.0}) {
        for (double x : {-1e6, -3.0, 0.0, 2.0, 1e6}) {
            CHECK(std::sqrt(std::complex<double>(c, x)).real() > 0.0);
        }
    }
}

TEST_CASE("closed form diagnostics and errors") {
    const KernelParams p{1.0, 1.0, 0.05};
    const auto e = kernel_closed_form_detail(0.3, 0.2, p);
    CHECK(e.converged);
    CHECK(e.max_exponent == doctest::Approx(std::max(re_f(0.3, std::sqrt(0.96), 0.0, p),
                                                     re_f(0.3, std::sqrt(0.96), 1.0, p))));
    CHECK_THROWS_AS(kernel_closed_form(0.0, 1.01, p), DomainError);
    CHECK_THROWS_AS(kernel_closed_form(0.0, 0.0, KernelParams{1.0, 1.0, 3e-4}), OverflowError);
    try {
        kernel_closed_form(0.0, 0.0, KernelParams{1.0, 1.0, 3e-4});
    } catch (const OverflowError& err) {
        CHECK(err.exponent() == doctest::Approx(1.0 / (4.0 * 3e-4)));
    }
    CHECK_THROWS_AS(kernel_closed_form(0.0, 0.0, KernelParams{1.0, 1.0, 0.0}), DomainError);
}

TEST_CASE("coarse s-rule without refinement is flagged") {
    QuadratureSpec q;
    q.nodes_s = 4;
    q.refinement = 0;
    const auto e = kernel_closed_form_detail(0.5, 0.0, KernelParams{1.0, 1.0, 0.01}, q);
    CHECK_FALSE(e.converged);
}

TEST_CASE("Fourier oracle special value and evenness") {
    const KernelParams p{1.0, 1.0, 0.1};
    const double kc = default_k_cutoff(p);
    CHECK(kernel_fourier_oracle(0.0, 1.0, p, kc) == doctest::Approx(tip_value(p)).epsilon(1e-12));
    const double a = kernel_fourier_oracle(0.7, 0.3, p, kc);
    CHECK(a == doctest::Approx(kernel_fourier_oracle(-0.7, 0.3, p, kc)).epsilon(1e-10));
    CHECK(a == doctest::Approx(kernel_fourier_oracle(0.7, -0.3, p, kc)).epsilon(1e-10));
    CHECK(a == doctest::Approx(-0.022174313409814161616).epsilon(1e-9));
}

TEST_CASE("Fourier oracle agrees with the closed form on a small grid") {
    for (double h : {0.1, 0.03}) {
        const KernelParams p{1.0, 1.0, h};
        const double kc = default_k_cutoff(p);
        const std::vector<double> xs = {-1.8, -0.4, 0.0, 0.9, 2.0};
        for (double t : {-0.95, 0.1, 0.6}) {
            const auto row = kernel_fourier_oracle_row(xs, t, p, kc);
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double k = kernel_closed_form(xs[i], t, p);
                CHECK(std::abs(k - row[i].value) <= 1e-6 * std::abs(k));
            }
        }
    }
}

TEST_CASE("Fourier oracle rejects a short cutoff and bad times") {
    const KernelParams p{1.0, 1.0, 0.1};
    CHECK_THROWS_AS(kernel_fourier_oracle(0.0, 0.0, p, 3.0), TailTruncationError);
    CHECK_THROWS_AS(kernel_fourier_oracle(0.0, 1.5, p, default_k_cutoff(p)), DomainError);
}

TEST_CASE("decay constant and diagnostics") {
    CHECK(decay_constant_a(1.0, 2.0) == doctest::Approx(0.05));
    const double eps = 0.3, d = 2.0;
    for (double h : {0.2, 0.05}) {
        const KernelParams p{1.0, 1.0, h};
        for (double t : {-0.9, 0.0, 0.5}) {
            const double inner = aperture_d(cone_height(1.0, t), 1.0) + eps;
            for (double x : {inner, 0.5 * (inner + d), d}) {
                for (double s : {-1.0, 1.0}) {
                    const auto diag = decay_diagnostics(s * x, t, p, eps, d);
                    CHECK(diag.re_f_max_over_sigma ==
                          std::max(diag.re_f_at_sigma0, diag.re_f_at_sigma1));
                    CHECK(diag.re_f_max_over_sigma <= diag.bound_rhs + 1e-12);
                    CHECK(diag.re_f_at_sigma0 <= -p.c * eps * eps / (4.0 * h * (1.0 + d * d)));
                    CHECK(diag.bound_rhs == doctest::Approx(-0.05 * eps * eps / h));
                }
            }
        }
    }
    const KernelParams p{1.0, 1.0, 0.1};
    CHECK_THROWS_AS(decay_diagnostics(0.1, 0.0, p, eps, d), PreconditionError);
    CHECK_THROWS_AS(decay_diagnostics(2.5, 0.0, p, eps, d), PreconditionError);
    CHECK_THROWS_AS(decay_diagnostics(1.5, 1.2, p, eps, d), PreconditionError);
}

TEST_CASE("decay band envelope stays bounded along the sweep") {
    std::vector<double> env;
    for (double h : {0.2, 0.1, 0.05, 0.025}) {
        const auto band = sample_decay_band(KernelParams{1.0, 1.0, h}, 0.3, 2.0, 11, 8);
        CHECK(!band.empty());
        env.push_back(decay_envelope(band));
    }
    for (std::size_t i = 1; i < env.size(); ++i) {
        CHECK(env[i] <= 1.2 * env[i - 1]);
    }
    CHECK(sample_decay_band(KernelParams{}, 3.0, 2.0, 5, 5).empty());
    CHECK(decay_envelope({}) == 0.0);
}
