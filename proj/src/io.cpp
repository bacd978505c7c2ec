#include "nlds/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "nlds/errors.hpp"

namespace nlds {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string nodes_label(const Grid& grid) {
    std::string s;
    for (int a = 0; a < grid.dim(); ++a) {
        if (a) s += 'x';
        s += std::to_string(grid.nodes_per_axis()[a]);
    }
    return s;
}

const char* const kSpectrumCsvHeader = "bc,nu,delta,a_name,n,route,lambda_tilde,h_max,gap,verdict";

void write_spectrum_csv_header(std::ostream& os) { os << kSpectrumCsvHeader << '\n'; }

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

void write_spectrum_csv_row(std::ostream& os, const SpectrumRowContext& ctx, const SpectralReport& r) {
    os << to_string(ctx.bc) << ',' << format_number(ctx.nu) << ',' << format_number(ctx.delta) << ','
       << csv_field(ctx.a_name) << ',' << ctx.n << ',' << to_string(r.route) << ',' << format_number(r.lambda_tilde)
       << ',' << format_number(r.h_max) << ',' << format_number(r.gap) << ',' << to_string(r.verdict) << '\n';
}

void write_spectral_record(std::ostream& os, const SpectrumRowContext& ctx, const SpectralReport& r) {
    os << "route = " << to_string(r.route) << '\n'
       << "bc = " << to_string(ctx.bc) << '\n'
       << "nu = " << format_number(ctx.nu) << '\n'
       << "delta = " << format_number(ctx.delta) << '\n'
       << "a_name = " << ctx.a_name << '\n'
       << "n = " << ctx.n << '\n'
       << "lambda_tilde = " << format_number(r.lambda_tilde) << '\n'
       << "h_max = " << format_number(r.h_max) << '\n'
       << "gap = " << format_number(r.gap) << '\n'
       << "verdict = " << to_string(r.verdict) << '\n';
    if (r.eigenfunction) os << "eigenfunction_min_max_ratio = " << format_number(r.min_max_ratio()) << '\n';
    for (const auto& [n, lam] : r.refinement_trace)
        os << "refinement[" << n << "] = " << format_number(lam) << '\n';
    if (!r.note.empty()) os << "note = " << r.note << '\n';
}

TrajectoryFormat trajectory_format_from_string(const std::string& s) {
    if (s == "long") return TrajectoryFormat::Long;
    if (s == "wide") return TrajectoryFormat::Wide;
    throw ConfigError("trajectory format must be 'long' or 'wide', got '" + s + "'");
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr, TrajectoryFormat format) {
    if (format == TrajectoryFormat::Long) {
        os << "t,node_index,value\n";
        for (std::size_t i = 0; i < tr.times.size(); ++i)
            for (Eigen::Index j = 0; j < tr.states[i].size(); ++j)
                os << format_number(tr.times[i]) << ',' << j << ',' << format_number(tr.states[i][j]) << '\n';
        return;
    }
    const Eigen::Index m = tr.states.empty() ? 0 : tr.states.front().size();
    os << 't';
    for (Eigen::Index j = 0; j < m; ++j) os << ",v_" << j;
    os << '\n';
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        os << format_number(tr.times[i]);
        for (Eigen::Index j = 0; j < m; ++j) os << ',' << format_number(tr.states[i][j]);
        os << '\n';
    }
}

void write_competition_csv(std::ostream& os, const CompetitionTrajectory& tr, TrajectoryFormat format) {
    const Eigen::Index m = tr.u_states.empty() ? 0 : tr.u_states.front().size();
    if (format == TrajectoryFormat::Long) {
        os << "t,node_index,u,v\n";
        for (std::size_t i = 0; i < tr.times.size(); ++i)
            for (Eigen::Index j = 0; j < m; ++j)
                os << format_number(tr.times[i]) << ',' << j << ',' << format_number(tr.u_states[i][j]) << ','
                   << format_number(tr.v_states[i][j]) << '\n';
        return;
    }
    os << 't';
    for (Eigen::Index j = 0; j < m; ++j) os << ",u_" << j;
    for (Eigen::Index j = 0; j < m; ++j) os << ",v_" << j;
    os << '\n';
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        os << format_number(tr.times[i]);
        for (Eigen::Index j = 0; j < m; ++j) os << ',' << format_number(tr.u_states[i][j]);
        for (Eigen::Index j = 0; j < m; ++j) os << ',' << format_number(tr.v_states[i][j]);
        os << '\n';
    }
}

void write_competition_diagnostics_csv(std::ostream& os, const CompetitionTrajectory& tr) {
    os << "t,u_sup,v_sup,u_min,v_min,v_residual\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const auto& d = tr.diagnostics[i];
        os << format_number(tr.times[i]) << ',' << format_number(d.u_sup) << ',' << format_number(d.v_sup) << ','
           << format_number(d.u_min) << ',' << format_number(d.v_min) << ',' << format_number(d.v_residual) << '\n';
    }
}

Eigen::VectorXd load_node_values(const std::string& path, std::size_t expected) {
    std::ifstream in(path);
    if (!in) throw ConfigError("coefficient.file: cannot open '" + path + "'");
    std::vector<double> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        for (char& c : line)
            if (c == ',' || c == ';' || c == '\t') c = ' ';
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size() || !std::isfinite(v))
                throw ConfigError("coefficient.file: line " + std::to_string(line_no) + ": bad value '" + tok + "'");
            values.push_back(v);
        }
    }
    if (values.size() != expected)
        throw ConfigError("coefficient.file: expected " + std::to_string(expected) + " node values, found " +
                          std::to_string(values.size()));
    return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace nlds
