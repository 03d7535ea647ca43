#pragma once

#include <iosfwd>
#include <string>

#include "wavereg/synthetic.hpp"

namespace wavereg {

/// Formats a double with 17 significant digits (round-trip safe).
std::string format_double(double v);

/// Trace grid CSV:
///   # key=value header comments (nx, nt, x_min, x_max, t_min, t_max, then
///     any metadata entries in key order)
///   x,t,v
///   one row per node, t-major (x varies fastest)
void write_trace_csv(std::ostream& out, const SampledTrace& trace);
std::string trace_csv(const SampledTrace& trace);

/// Parses the format above. Throws std::runtime_error on malformed input.
SampledTrace read_trace_csv(std::istream& in);
SampledTrace read_trace_file(const std::string& path);

}  // namespace wavereg
