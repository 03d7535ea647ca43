#include "wavereg/trace_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wavereg {

namespace {

constexpr const char* kGridKeys[] = {"nx", "nt", "x_min", "x_max", "t_min", "t_max"};

bool is_grid_key(const std::string& key) {
    for (const char* k : kGridKeys) {
        if (key == k) {
            return true;
        }
    }
    return false;
}

double parse_double(const std::string& s, const std::string& what) {
    // strtod instead of stod: subnormal values set ERANGE but are valid data.
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    const bool overflow = errno == ERANGE && std::isinf(v);
    if (s.empty() || end != s.c_str() + s.size() || overflow) {
        throw std::runtime_error("trace csv: cannot parse " + what + " from '" + s + "'");
    }
    return v;
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trace_csv(std::ostream& out, const SampledTrace& trace) {
    trace.validate();
    out << "# nx=" << trace.nx << '\n';
    out << "# nt=" << trace.nt << '\n';
    out << "# x_min=" << format_double(trace.x_min) << '\n';
    out << "# x_max=" << format_double(trace.x_max) << '\n';
    out << "# t_min=" << format_double(trace.t_min) << '\n';
    out << "# t_max=" << format_double(trace.t_max) << '\n';
    for (const auto& [key, value] : trace.metadata) {
        if (!is_grid_key(key)) {
            out << "# " << key << '=' << value << '\n';
        }
    }
    out << "x,t,v\n";
    for (int j = 0; j < trace.nt; ++j) {
        const std::string ts = format_double(trace.t(j));
        for (int i = 0; i < trace.nx; ++i) {
            out << format_double(trace.x(i)) << ',' << ts << ',' << format_double(trace.at(i, j))
                << '\n';
        }
    }
}

std::string trace_csv(const SampledTrace& trace) {
    std::ostringstream os;
    write_trace_csv(os, trace);
    return os.str();
}

SampledTrace read_trace_csv(std::istream& in) {
    SampledTrace trace;
    std::map<std::string, std::string> header;
    std::string line;
    bool seen_columns = false;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            const std::string body = trim(line.substr(1));
            const auto eq = body.find('=');
            if (eq != std::string::npos) {
                header[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
            }
            continue;
        }
        if (!seen_columns) {
            if (line != "x,t,v") {
                throw std::runtime_error("trace csv: expected column header 'x,t,v', got '" +
                                         line + "'");
            }
            for (const char* k : kGridKeys) {
                if (!header.count(k)) {
                    throw std::runtime_error(std::string("trace csv: missing header '") + k +
                                             "'");
                }
            }
            trace.nx = static_cast<int>(parse_double(header["nx"], "nx"));
            trace.nt = static_cast<int>(parse_double(header["nt"], "nt"));
            trace.x_min = parse_double(header["x_min"], "x_min");
            trace.x_max = parse_double(header["x_max"], "x_max");
            trace.t_min = parse_double(header["t_min"], "t_min");
            trace.t_max = parse_double(header["t_max"], "t_max");
            if (trace.nx < 2 || trace.nt < 2) {
                throw std::runtime_error("trace csv: nx and nt must be >= 2");
            }
            trace.values.assign(static_cast<std::size_t>(trace.nx) * trace.nt, 0.0);
            seen_columns = true;
            continue;
        }
        if (row >= trace.values.size()) {
            throw std::runtime_error("trace csv: more rows than nx*nt");
        }
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) {
            throw std::runtime_error("trace csv: malformed row " + std::to_string(row + 1));
        }
        const double x = parse_double(line.substr(0, c1), "x");
        const double t = parse_double(line.substr(c1 + 1, c2 - c1 - 1), "t");
        const int i = static_cast<int>(row % trace.nx);
        const int j = static_cast<int>(row / trace.nx);
        const double tol_x = 1e-9 * std::max(1.0, std::abs(trace.x_max - trace.x_min));
        const double tol_t = 1e-9 * std::max(1.0, std::abs(trace.t_max - trace.t_min));
        if (std::abs(x - trace.x(i)) > tol_x || std::abs(t - trace.t(j)) > tol_t) {
            throw std::runtime_error("trace csv: row " + std::to_string(row + 1) +
                                     " is off the declared grid");
        }
        trace.values[row] = parse_double(line.substr(c2 + 1), "v");
        ++row;
    }
    if (!seen_columns) {
        throw std::runtime_error("trace csv: no column header");
    }
    if (row != trace.values.size()) {
        throw std::runtime_error("trace csv: expected " + std::to_string(trace.values.size()) +
                                 " rows, got " + std::to_string(row));
    }
    for (auto& [key, value] : header) {
        if (!is_grid_key(key)) {
            trace.metadata[key] = value;
        }
    }
    return trace;
}

SampledTrace read_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open trace file '" + path + "'");
    }
    return read_trace_csv(in);
}

}  // namespace wavereg
