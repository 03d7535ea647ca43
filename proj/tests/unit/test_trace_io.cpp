#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "wavereg/synthetic.hpp"
#include "wavereg/trace_io.hpp"

using namespace wavereg;

TEST_CASE("format_double round-trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(NAN) == "nan");
    CHECK(format_double(-INFINITY) == "-inf");
}

TEST_CASE("trace csv round trip keeps values and metadata") {
    const auto v = mode_boundary_trace(Mode{0.7, 0.5, 1.0, Phase::Sin, Phase::Sin});
    SampledTrace g = sample_trace(v, -1.5, 1.5, -1.0, 1.0, 7, 5);
    g.metadata["probe_u"] = format_double(0.25);
    g.metadata["note"] = "a b";
    const std::string text = trace_csv(g);
    CHECK(text.rfind("# nx=7\n# nt=5\n", 0) == 0);
    CHECK(text.find("x,t,v\n") != std::string::npos);

    std::istringstream in(text);
    const SampledTrace r = read_trace_csv(in);
    CHECK(r.nx == 7);
    CHECK(r.nt == 5);
    CHECK(r.x_min == g.x_min);
    CHECK(r.t_max == g.t_max);
    REQUIRE(r.values.size() == g.values.size());
    for (std::size_t i = 0; i < r.values.size(); ++i) CHECK(r.values[i] == g.values[i]);
    CHECK(r.metadata.at("probe_u") == "0.25");
    CHECK(r.metadata.at("note") == "a b");
    CHECK(trace_csv(r) == text);
}

TEST_CASE("trace csv rejects malformed input") {
    auto parse = [](const std::string& s) {
        std::istringstream in(s);
        return read_trace_csv(in);
    };
    const std::string head = "# nx=2\n# nt=2\n# x_min=0\n# x_max=1\n# t_min=0\n# t_max=1\n";
    CHECK_NOTHROW(parse(head + "x,t,v\n0,0,1\n1,0,2\n0,1,3\n1,1,4\n"));
    CHECK_THROWS_AS(parse(head + "x,t,v\n0,0,1\n1,0,2\n0,1,3\n"), std::runtime_error);
    CHECK_THROWS_AS(parse(head + "x,t,v\n0,0,1\n1,0,2\n0,1,3\n1,1,4\n1,1,5\n"), std::runtime_error);
    CHECK_THROWS_AS(parse(head + "x,t,v\n0,0,1\n1,0,two\n0,1,3\n1,1,4\n"), std::runtime_error);
    CHECK_THROWS_AS(parse(head + "x,t,u\n"), std::runtime_error);
    CHECK_THROWS_AS(parse("# nx=2\nx,t,v\n"), std::runtime_error);
    CHECK_THROWS_AS(parse(head), std::runtime_error);
    CHECK_THROWS_AS(parse(head + "x,t,v\n0,0,1\n0.5,0,2\n0,1,3\n1,1,4\n"), std::runtime_error);
    CHECK_THROWS_AS(parse(head + "x,t,v\n0,0,1\n1,0,1e999\n0,1,3\n1,1,4\n"), std::runtime_error);
    CHECK_THROWS_AS(read_trace_file("/nonexistent/trace.csv"), std::runtime_error);
}

TEST_CASE("subnormal values survive a round trip") {
    SampledTrace g = sample_trace(BoundaryTrace::zero(), 0.0, 1.0, 0.0, 1.0, 2, 2);
    g.values = {4.7293357314511954e-309, -5e-324, 0.0, 1.0};
    std::istringstream in(trace_csv(g));
    const SampledTrace r = read_trace_csv(in);
    CHECK(r.values == g.values);
}
