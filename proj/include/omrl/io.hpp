#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "omrl/dynamics.hpp"

namespace omrl {

// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double value);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// CSV with the given header row; cells are formatted with format_double.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Schedule round-trip: columns step, t, omega_1 .. omega_L plus detunings and
// the total time recorded in comment lines, so a schedule file is replayable
// on its own.
void write_schedule_csv(const std::string& path, const PulseSchedule& schedule);
PulseSchedule read_schedule_csv(const std::string& path);

}  // namespace omrl
