#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "wavereg/error.hpp"
#include "wavereg/synthetic.hpp"
#include "wavereg/transform.hpp"

using namespace wavereg;

namespace {

std::vector<Mode> family() {
    std::vector<Mode> out;
    for (double l : {0.5, 1.0, 2.0}) {
        for (double k : {0.0, 0.5, 1.0}) {
            for (Phase xp : {Phase::Cos, Phase::Sin}) {
                for (Phase tp : {Phase::Cos, Phase::Sin}) {
                    out.push_back(Mode{1.3, k, l, xp, tp});
                }
            }
        }
    }
    return out;
}

}  // namespace

TEST_CASE("mode interior values") {
    CHECK(mode_interior_value(Mode{1.0, 0.0, 1.0}, 0.0, 1.0, 0.0) == doctest::Approx(std::sin(1.0)));
    for (const Mode& m : family()) {
        CHECK(m.omega() * m.omega() == doctest::Approx(m.k * m.k + m.l * m.l).epsilon(1e-15));
        for (double x : {-1.0, 0.3}) {
            for (double t : {-0.4, 0.0, 2.0}) {
                CHECK(mode_interior_value(m, x, 0.0, t) == 0.0);
            }
        }
    }
}

TEST_CASE("modes satisfy the wave equation under a finite-difference check") {
    const double d = 1e-3;
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> xd(-2.0, 2.0), yd(0.1, 2.0), td(-1.5, 1.5);
    for (const Mode& m : family()) {
        for (int i = 0; i < 5; ++i) {
            const double x = xd(rng), y = yd(rng), t = td(rng);
            auto u = [&](double a, double b, double c) { return mode_interior_value(m, a, b, c); };
            const double c0 = u(x, y, t);
            const double utt = (u(x, y, t + d) - 2.0 * c0 + u(x, y, t - d)) / (d * d);
            const double uxx = (u(x + d, y, t) - 2.0 * c0 + u(x - d, y, t)) / (d * d);
            const double uyy = (u(x, y + d, t) - 2.0 * c0 + u(x, y - d, t)) / (d * d);
            CHECK(std::abs(utt - uxx - uyy) <= 1e-5);
        }
    }
}

TEST_CASE("boundary trace is the exact normal derivative") {
    const Mode m0{1.0, 0.0, 1.0};
    CHECK(mode_boundary_trace(m0)(0.0, 0.0) == 1.0);
    const double d = 1e-4;
    for (const Mode& m : family()) {
        const auto v = mode_boundary_trace(m);
        for (double x : {-0.7, 0.0, 1.1}) {
            for (double t : {-0.5, 0.0, 0.8}) {
                const double fd =
                    (mode_interior_value(m, x, d, t) - mode_interior_value(m, x, -d, t)) / (2.0 * d);
                CHECK(std::abs(v(x, t) - fd) <= 1e-7);
            }
        }
        if (m.t_phase == Phase::Sin) {
            for (double x : {-3.0, 0.2, 5.0}) CHECK(v(x, 0.0) == 0.0);
        }
    }
}

TEST_CASE("mode validation") {
    CHECK_THROWS_AS((Mode{1.0, 0.0, 0.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((Mode{1.0, NAN, 1.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(mode_boundary_trace(Mode{1.0, 0.0, -1.0}), std::invalid_argument);
}

TEST_CASE("superpose") {
    const auto a = mode_boundary_trace(Mode{1.0, 0.5, 1.0});
    const auto single = superpose({{1.0, a}});
    const auto cancel = superpose({{1.0, a}, {-1.0, a}});
    const auto empty = superpose({});
    for (double x : {-1.0, 0.0, 0.6}) {
        for (double t : {-0.3, 0.9}) {
            CHECK(single(x, t) == a(x, t));
            CHECK(cancel(x, t) == 0.0);
            CHECK(empty(x, t) == 0.0);
        }
    }
    auto g = sample_trace(a, -1.0, 1.0, -1.0, 1.0, 5, 5);
    CHECK_THROWS_AS(superpose({{1.0, BoundaryTrace::sampled(g)}}), std::invalid_argument);
}

TEST_CASE("random superposition: interior target is the weighted sum of mode values") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> wd(-2.0, 2.0), kd(0.0, 1.0), ld(0.5, 2.0);
    std::uniform_int_distribution<int> pd(0, 1);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<ModeTerm> terms;
        std::vector<WeightedTrace> parts;
        double expected = 0.0;
        for (int i = 0; i < 3; ++i) {
            const Mode m{wd(rng), kd(rng), ld(rng), pd(rng) ? Phase::Cos : Phase::Sin,
                         pd(rng) ? Phase::Cos : Phase::Sin};
            const double w = wd(rng);
            terms.push_back({w, m});
            parts.push_back({w, mode_boundary_trace(m)});
            expected += w * mode_spectral_value(m, 1.0);
        }
        CHECK(superposition_interior_value(terms, 0.0, 1.0, 0.0) == doctest::Approx(expected));
        const auto v = superpose(parts);
        double direct = 0.0;
        for (const auto& t : terms) direct += t.weight * mode_boundary_trace(t.mode)(0.4, -0.2);
        CHECK(v(0.4, -0.2) == doctest::Approx(direct));
    }
}

TEST_CASE("sample_trace layout and node round trip") {
    const auto v = mode_boundary_trace(Mode{1.0, 0.5, 1.0, Phase::Sin, Phase::Cos});
    const auto g = sample_trace(v, -2.0, 3.0, -1.0, 1.0, 11, 9);
    CHECK(g.values.size() == 99);
    CHECK(g.dx() == doctest::Approx(0.5));
    CHECK(g.dt() == doctest::Approx(0.25));
    CHECK(g.x(10) == doctest::Approx(3.0));
    for (int j = 0; j < g.nt; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            CHECK(g.at(i, j) == v(g.x(i), g.t(j)));
            CHECK(g.interpolate(g.x(i), g.t(j), Interpolation::Bilinear) ==
                  doctest::Approx(g.at(i, j)).epsilon(1e-14));
            CHECK(g.interpolate(g.x(i), g.t(j), Interpolation::Lagrange6) ==
                  doctest::Approx(g.at(i, j)).epsilon(1e-12));
        }
    }
    const auto z = sample_trace(BoundaryTrace::zero(), 0.0, 1.0, 0.0, 1.0, 3, 3);
    for (double val : z.values) CHECK(val == 0.0);
    CHECK_THROWS_AS(sample_trace(v, 0.0, 0.0, 0.0, 1.0, 3, 3), std::invalid_argument);
    CHECK_THROWS_AS(sample_trace(v, 0.0, 1.0, 0.0, 1.0, 1, 3), std::invalid_argument);
    CHECK_THROWS_AS(g.interpolate(3.5, 0.0, Interpolation::Bilinear), CoverageError);
}

TEST_CASE("interpolation converges at the expected orders") {
    const auto v = mode_boundary_trace(Mode{1.0, 1.0, 2.0});
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> pd(-0.9, 0.9);
    std::vector<std::pair<double, double>> probes;
    for (int i = 0; i < 200; ++i) probes.emplace_back(pd(rng), pd(rng));
    auto max_err = [&](int n, Interpolation m) {
        const auto g = sample_trace(v, -1.0, 1.0, -1.0, 1.0, n, n);
        double e = 0.0;
        for (auto [x, t] : probes) e = std::max(e, std::abs(g.interpolate(x, t, m) - v(x, t)));
        return e;
    };
    const double b1 = max_err(21, Interpolation::Bilinear);
    const double b2 = max_err(41, Interpolation::Bilinear);
    CHECK(std::log2(b1 / b2) >= 1.9);
    const double l1 = max_err(21, Interpolation::Lagrange6);
    const double l2 = max_err(41, Interpolation::Lagrange6);
    CHECK(std::log2(l1 / l2) >= 5.5);
    CHECK(l2 < 3e-8);
}

TEST_CASE("sampled trace validation and coverage") {
    SampledTrace g;
    g.nx = 2;
    g.nt = 2;
    g.x_max = 1.0;
    g.t_max = 1.0;
    g.values = {0, 0, 0};
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g.values.push_back(0.0);
    CHECK_NOTHROW(g.validate());
    CHECK(g.covers(0.0, 1.0, 0.0, 1.0));
    CHECK_FALSE(g.covers(-0.1, 1.0, 0.0, 1.0));
    const auto tr = BoundaryTrace::sampled(g);
    CHECK(tr.is_sampled());
    CHECK(tr.with_interpolation(Interpolation::Bilinear).interpolation() == Interpolation::Bilinear);
    CHECK_THROWS_AS(BoundaryTrace::zero().grid(), std::logic_error);
}
