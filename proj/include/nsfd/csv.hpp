#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "nsfd/benchmark.hpp"
#include "nsfd/conservation.hpp"
#include "nsfd/equilibria.hpp"
#include "nsfd/errors.hpp"
#include "nsfd/integrators.hpp"
#include "nsfd/model.hpp"

namespace nsfd {

// Scientific notation with 15 significant digits, which is what the error
// tables are printed with and enough for lossless-in-practice round trips.
inline std::string format_sci(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0.0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.14e", x);
    return buf;
}

inline std::string format_complex(Complex z) {
    std::string s = format_sci(z.real());
    s += z.imag() < 0.0 ? '-' : '+';
    s += format_sci(std::abs(z.imag()));
    s += 'i';
    return s;
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot open output file '" + path + "'");
    return out;
}

// Trajectory CSV: '#' metadata lines, a header row, then one row per grid
// point. Conservation-declared models get a trailing P_T column with the
// tracked population sum.
inline void write_trajectory(std::ostream& out, const Trajectory& traj,
                             const ConservationDecl& decl) {
    out << "# model: " << traj.model_name() << "\n";
    out << "# scheme: " << traj.scheme().label() << "\n";
    if (traj.scheme().kind == SchemeSpec::Kind::nsfd) {
        out << "# m: " << format_sci(traj.scheme().m) << "\n";
    }
    if (traj.scheme().kind == SchemeSpec::Kind::nsfd ||
        traj.scheme().kind == SchemeSpec::Kind::nonstd_euler) {
        out << "# phi: " << traj.scheme().phi.label() << "\n";
    }
    out << "# dt: " << format_sci(traj.dt()) << "\n";
    if (traj.divergence()) {
        out << "# divergence: step " << traj.divergence()->step_index << ": "
            << traj.divergence()->message << "\n";
    }

    const bool with_total = decl.kind != ConservationDecl::Kind::none;
    out << "step,t";
    for (std::size_t i = 0; i < traj.dim(); ++i) out << ",y" << (i + 1);
    if (with_total) out << ",P_T";
    out << "\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out << k << "," << format_sci(traj.time(k));
        const auto y = traj.state(k);
        for (double v : y) out << "," << format_sci(v);
        if (with_total) out << "," << format_sci(total_population(y, decl));
        out << "\n";
    }
}

inline void write_error_table(std::ostream& out, const std::vector<ErrorRow>& rows) {
    out << "dt,scheme,error,error_T,diverged\n";
    for (const ErrorRow& row : rows) {
        out << format_sci(row.dt) << "," << row.scheme << "," << format_sci(row.error) << ","
            << format_sci(row.error_T) << "," << (row.diverged ? 1 : 0) << "\n";
    }
}

inline void write_thresholds(std::ostream& out, const ThresholdReport& report) {
    const auto opt = [](const std::optional<double>& v) { return v ? format_sci(*v) : std::string(); };
    out << "quantity,value\n";
    out << "m_P," << format_sci(report.m_P) << "\n";
    out << "m_S," << format_sci(report.m_S) << "\n";
    out << "m_GCL," << opt(report.m_GCL) << "\n";
    out << "m_required," << format_sci(report.m_required) << "\n";
    out << "phi_P," << format_sci(report.phi_P) << "\n";
    out << "phi_S," << format_sci(report.phi_S) << "\n";
    out << "phi_GCL," << opt(report.phi_GCL) << "\n";
    out << "phi_required," << format_sci(report.phi_required) << "\n";
}

inline void write_equilibria(std::ostream& out, const std::vector<EquilibriumReport>& reports) {
    const std::size_t dim = reports.empty() ? 0 : reports.front().point.size();
    for (std::size_t i = 0; i < dim; ++i) out << "y" << (i + 1) << ",";
    out << "eigenvalues,classification,hyperbolic\n";
    for (const EquilibriumReport& report : reports) {
        for (std::size_t i = 0; i < report.point.size(); ++i) out << format_sci(report.point[i]) << ",";
        for (std::size_t i = 0; i < report.eigenvalues.size(); ++i) {
            if (i) out << ";";
            out << format_complex(report.eigenvalues[i]);
        }
        out << "," << to_string(report.classification) << "," << (report.hyperbolic ? 1 : 0) << "\n";
    }
}

inline void write_conservation(std::ostream& out, const ConservationReport& report) {
    const char* law = report.law == ConservationDecl::Kind::dcl ? "dcl" : "gcl";
    out << "quantity,value\n";
    out << "law," << law << "\n";
    out << "max_deviation," << format_sci(report.max_deviation) << "\n";
    out << "monotone," << (report.monotone ? (*report.monotone ? "1" : "0") : "") << "\n";
    out << "limit_error," << (report.limit_error ? format_sci(*report.limit_error) : "") << "\n";
    out << "exact_scheme," << (report.exact_scheme ? 1 : 0) << "\n";
}

// Minimal reader for the files this module writes: '#' lines collected as
// comments, first non-comment line is the header, no quoting or escaping.
struct CsvFile {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current += ch;
        }
    }
    fields.push_back(current);
    return fields;
}

} // namespace detail

inline CsvFile read_csv(std::istream& in) {
    CsvFile file;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            file.comments.push_back(line);
            continue;
        }
        if (!header_seen) {
            file.header = detail::split_csv_line(line);
            header_seen = true;
        } else {
            file.rows.push_back(detail::split_csv_line(line));
        }
    }
    return file;
}

} // namespace nsfd
