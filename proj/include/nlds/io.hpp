#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "nlds/competition.hpp"
#include "nlds/evolution.hpp"
#include "nlds/grid.hpp"
#include "nlds/spectral.hpp"

namespace nlds {

/// Shortest round-trip text for a double ("%.17g"); nan/inf spelled out.
std::string format_number(double x);

/// Context for a spectral CSV row that the report itself does not carry.
struct SpectrumRowContext {
    Boundary bc = Boundary::Neumann;
    double nu = 0.0;
    double delta = 0.0;
    std::string a_name;
    std::string n;  // nodes per axis, "64" or "24x24"
};

std::string nodes_label(const Grid& grid);

extern const char* const kSpectrumCsvHeader;

void write_spectrum_csv_header(std::ostream& os);
void write_spectrum_csv_row(std::ostream& os, const SpectrumRowContext& ctx, const SpectralReport& r);

/// key = value lines.
void write_spectral_record(std::ostream& os, const SpectrumRowContext& ctx, const SpectralReport& r);

enum class TrajectoryFormat { Long, Wide };
TrajectoryFormat trajectory_format_from_string(const std::string& s);

/// Long: t,node_index,value. Wide: t,v_0,...,v_{M-1}.
void write_trajectory_csv(std::ostream& os, const Trajectory& tr, TrajectoryFormat format);
/// Long: t,node_index,u,v. Wide: t,u_0,...,u_{M-1},v_0,...,v_{M-1}.
void write_competition_csv(std::ostream& os, const CompetitionTrajectory& tr, TrajectoryFormat format);
/// t,u_sup,v_sup,u_min,v_min,v_residual
void write_competition_diagnostics_csv(std::ostream& os, const CompetitionTrajectory& tr);

/// Node values from a delimited text file (commas, whitespace or semicolons;
/// '#' starts a comment), row-major over axes.
Eigen::VectorXd load_node_values(const std::string& path, std::size_t expected);

/// Writes `content` to `path`, creating parent directories.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace nlds
