#include <cmath>
#include <vector>

#include "doctest.h"
#include "wavereg/error.hpp"
#include "wavereg/forward_solver.hpp"
#include "wavereg/parallel.hpp"

using namespace wavereg;

namespace {

FdtdConfig small_bump(double dx = 0.04) {
    FdtdConfig c;
    c.X = 4.0;
    c.Y = 4.0;
    c.dx = dx;
    c.dt = dx / 2.0;
    c.T = 1.0;
    c.initial = bump_initial_data(0.0, 1.2, 0.8);
    return c;
}

// Max probe error at (0, 1) over t <= 1.5 against the unwindowed mode.
double windowed_mode_error(double dx) {
    const Mode m{1.0, 0.5, 1.0};
    FdtdConfig c;
    c.X = 6.0;
    c.Y = 6.0;
    c.dx = dx;
    c.dt = dx / 2.0;
    c.T = 1.5;
    c.initial = windowed_mode_initial_data(m, 2.0, 4.0, 3.0, 4.5);
    const Probe p{0.0, 1.0, 1.5};
    const auto r = fdtd_run(c, std::span<const Probe>(&p, 1), {});
    double err = 0.0;
    const auto& s = r.probes.front();
    for (std::size_t n = 0; n < s.times.size(); ++n) {
        err = std::max(err, std::abs(s.values[n] - mode_interior_value(m, 0.0, 1.0, s.times[n])));
    }
    return err;
}

}  // namespace

TEST_CASE("bump profile and windows") {
    CHECK(bump_profile(0.0) == 1.0);
    CHECK(bump_profile(1.0) == 0.0);
    CHECK(bump_profile(-1.5) == 0.0);
    CHECK(bump_profile(0.5) == doctest::Approx(std::exp(1.0 - 1.0 / 0.75)));
    CHECK(plateau_window(0.3, 1.0, 2.0) == 1.0);
    CHECK(plateau_window(-1.0, 1.0, 2.0) == 1.0);
    CHECK(plateau_window(2.0, 1.0, 2.0) == 0.0);
    const double mid = plateau_window(1.5, 1.0, 2.0);
    CHECK(mid == doctest::Approx(0.5));
    CHECK(plateau_window(1.2, 1.0, 2.0) > plateau_window(1.7, 1.0, 2.0));
    const auto f = bump_initial_data(0.0, 1.2, 0.8);
    CHECK(f(0.0, 1.2) == doctest::Approx(1.2 * std::exp(-1.2)));
    CHECK(f(0.0, 0.0) == 0.0);
    CHECK(f(0.9, 1.2) == 0.0);
}

TEST_CASE("configuration checks happen before stepping") {
    FdtdConfig c = small_bump();
    c.dt = c.dx * 0.75;
    CHECK_THROWS_AS(c.validate(), SolverConstraintError);
    CHECK_THROWS_AS(fdtd_run(c, {}, {}), SolverConstraintError);
    c = small_bump();
    c.X = 4.03;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = small_bump();
    c.initial = nullptr;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);

    // Lateral edge at 4 with support reaching 0.8: an observer at x = 4 sees
    // the reflection after 3.2, so a trace out to |t| = 3.5 is rejected.
    c = small_bump();
    c.T = 3.5;
    const TraceRequest far{-3.9, 3.9, -3.5, 3.5, 1, 1};
    CHECK(support_margin(c, {}, std::span<const TraceRequest>(&far, 1)) < 0.0);
    CHECK_THROWS_AS(fdtd_run(c, {}, std::span<const TraceRequest>(&far, 1)), SolverConstraintError);

    c = small_bump();
    c.initial = [](double, double) { return 1.0; };
    CHECK_THROWS_AS(fdtd_run(c, {}, {}), SolverConstraintError);
}

TEST_CASE("zero initial data gives zero outputs") {
    FdtdConfig c = small_bump();
    c.initial = [](double, double) { return 0.0; };
    const Probe p{0.0, 1.0, -1.0};
    const TraceRequest tr{-2.0, 2.0, -1.0, 1.0, 1, 1};
    const auto r = fdtd_run(c, std::span<const Probe>(&p, 1), std::span<const TraceRequest>(&tr, 1));
    for (double v : r.traces.front().values) CHECK(v == 0.0);
    for (double v : r.probes.front().values) CHECK(v == 0.0);
    CHECK(std::isinf(r.support_margin));
}

TEST_CASE("trace layout, evenness in t and metadata") {
    const FdtdConfig c = small_bump();
    const Probe p{0.0, 1.0};
    const TraceRequest tr{-2.0, 2.0, -1.0, 1.0, 2, 1};
    const auto r = fdtd_run(c, std::span<const Probe>(&p, 1), std::span<const TraceRequest>(&tr, 1));
    const auto& g = r.traces.front();
    CHECK(g.nx == 51);
    CHECK(g.nt == 101);
    CHECK(g.x_min == doctest::Approx(-2.0));
    CHECK(g.t_max == doctest::Approx(1.0));
    for (int j = 0; j < g.nt; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            CHECK(g.at(i, j) == g.at(i, g.nt - 1 - j));
        }
    }
    CHECK(std::stod(g.metadata.at("probe_u")) ==
          doctest::Approx(std::exp(-1.0) * bump_profile(0.2 / 0.8)));
    CHECK(g.metadata.at("courant") == "0.5");
    CHECK(r.probes.front().times.size() == 1);
    CHECK(r.courant == 0.5);
}

TEST_CASE("discrete energy is conserved") {
    FdtdConfig c = small_bump();
    c.record_energy = true;
    c.T = 2.0;
    const auto r = fdtd_run(c, {}, {});
    REQUIRE(r.energy.size() == 100);
    const double e0 = r.energy.front();
    CHECK(e0 > 0.0);
    for (double e : r.energy) CHECK(std::abs(e - e0) <= 1e-6 * e0);
}

TEST_CASE("even initial data gives an even trace") {
    FdtdConfig c = small_bump();
    c.initial = [](double x, double y) {
        return bump_profile(std::hypot(x - 0.7, y - 1.0) / 0.6) +
               bump_profile(std::hypot(x + 0.7, y - 1.0) / 0.6);
    };
    const TraceRequest tr{-2.0, 2.0, 0.0, 1.0, 1, 1};
    const auto r = fdtd_run(c, {}, std::span<const TraceRequest>(&tr, 1));
    const auto& g = r.traces.front();
    double vmax = 0.0;
    for (double v : g.values) vmax = std::max(vmax, std::abs(v));
    CHECK(vmax > 0.0);
    for (int j = 0; j < g.nt; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            CHECK(std::abs(g.at(i, j) - g.at(g.nx - 1 - i, j)) <= 1e-13 * vmax);
        }
    }
}

TEST_CASE("full-plane run with odd data matches the half-plane run") {
    const auto half = bump_initial_data(0.0, 1.2, 0.8);
    FdtdConfig hp = small_bump();
    FdtdConfig fp = small_bump();
    fp.full_plane = true;
    fp.initial = [half](double x, double y) { return y >= 0.0 ? half(x, y) : -half(x, -y); };
    const Probe p{0.3, 0.8, -1.0};
    const TraceRequest tr{-2.0, 2.0, -1.0, 1.0, 1, 1};
    const auto a = fdtd_run(hp, std::span<const Probe>(&p, 1), std::span<const TraceRequest>(&tr, 1));
    const auto b = fdtd_run(fp, std::span<const Probe>(&p, 1), std::span<const TraceRequest>(&tr, 1));
    const auto& ga = a.traces.front();
    const auto& gb = b.traces.front();
    double vmax = 0.0;
    for (double v : ga.values) vmax = std::max(vmax, std::abs(v));
    for (std::size_t i = 0; i < ga.values.size(); ++i) {
        CHECK(std::abs(ga.values[i] - gb.values[i]) <= 1e-12 * vmax);
    }
    for (std::size_t n = 0; n < a.probes[0].values.size(); ++n) {
        CHECK(a.probes[0].values[n] == doctest::Approx(b.probes[0].values[n]).epsilon(1e-12));
    }
}

TEST_CASE("results do not depend on the thread count") {
    const FdtdConfig c = small_bump();
    const Probe p{0.1, 1.1, -1.0};
    const TraceRequest tr{-2.0, 2.0, -1.0, 1.0, 1, 1};
    const int saved = parallel::thread_count();
    parallel::set_thread_count(1);
    const auto a = fdtd_run(c, std::span<const Probe>(&p, 1), std::span<const TraceRequest>(&tr, 1));
    parallel::set_thread_count(3);
    const auto b = fdtd_run(c, std::span<const Probe>(&p, 1), std::span<const TraceRequest>(&tr, 1));
    parallel::set_thread_count(saved);
    CHECK(a.traces.front().values == b.traces.front().values);
    CHECK(a.probes.front().values == b.probes.front().values);
}

TEST_CASE("windowed mode: probe converges at second order") {
    const double e1 = windowed_mode_error(0.1);
    const double e2 = windowed_mode_error(0.05);
    const double e3 = windowed_mode_error(0.025);
    CHECK(e3 < 1e-4);
    CHECK(std::log2(e1 / e2) >= 1.8);
    CHECK(std::log2(e2 / e3) >= 1.8);
}

TEST_CASE("default bump configuration keeps the observed region clean") {
    const FdtdConfig c = default_bump_config();
    CHECK_NOTHROW(c.validate());
    const Probe p{0.0, 1.0};
    const TraceRequest local{};
    const TraceRequest wide{-c.X, c.X, -c.T, c.T, 1, 1};
    const TraceRequest both[2] = {local, wide};
    CHECK(support_margin(c, std::span<const Probe>(&p, 1), both) >= 2.0 * c.dx);
}
