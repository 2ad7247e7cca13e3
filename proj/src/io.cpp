#include "omrl/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "omrl/errors.hpp"

namespace omrl {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << content;
  if (!os) throw IoError("failed writing: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i)
    os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << format_double(row[i]);
    os << "\n";
  }
  write_text_file(path, os.str());
}

void write_schedule_csv(const std::string& path, const PulseSchedule& schedule) {
  std::ostringstream os;
  os << "# total_time=" << format_double(schedule.total_time) << "\n";
  os << "# detunings=";
  for (int l = 0; l < schedule.detunings.size(); ++l)
    os << (l ? ";" : "") << format_double(schedule.detunings.deltas[l]);
  os << "\n";
  os << "step,t";
  for (int l = 0; l < schedule.pulses(); ++l) os << ",omega_" << l + 1;
  os << "\n";
  const double dt = schedule.dt();
  for (int s = 0; s < schedule.steps(); ++s) {
    os << s << "," << format_double(s * dt);
    for (int l = 0; l < schedule.pulses(); ++l)
      os << "," << format_double(schedule.amplitudes(s, l));
    os << "\n";
  }
  write_text_file(path, os.str());
}

PulseSchedule read_schedule_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open schedule: " + path);
  PulseSchedule sched;
  std::vector<std::vector<double>> amp_rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("# total_time=", 0) == 0) {
      sched.total_time = std::stod(line.substr(13));
      continue;
    }
    if (line.rfind("# detunings=", 0) == 0) {
      std::istringstream ss(line.substr(12));
      std::string tok;
      while (std::getline(ss, tok, ';')) sched.detunings.deltas.push_back(std::stod(tok));
      continue;
    }
    if (line[0] == '#') continue;
    if (!header_seen) {  // column header
      header_seen = true;
      continue;
    }
    std::istringstream ss(line);
    std::string tok;
    std::vector<double> cells;
    while (std::getline(ss, tok, ',')) cells.push_back(std::stod(tok));
    if (cells.size() < 3) throw IoError("schedule row with too few columns in " + path);
    amp_rows.emplace_back(cells.begin() + 2, cells.end());
  }
  if (amp_rows.empty()) throw IoError("schedule file has no amplitude rows: " + path);
  if (sched.detunings.size() == 0) throw IoError("schedule file lacks a detunings line: " + path);
  if (sched.total_time <= 0) throw IoError("schedule file lacks a total_time line: " + path);
  const int pulses = static_cast<int>(amp_rows.front().size());
  if (pulses != sched.detunings.size())
    throw IoError("schedule columns do not match detunings in " + path);
  sched.amplitudes.resize(static_cast<int>(amp_rows.size()), pulses);
  for (std::size_t s = 0; s < amp_rows.size(); ++s) {
    if (static_cast<int>(amp_rows[s].size()) != pulses)
      throw IoError("ragged schedule rows in " + path);
    for (int l = 0; l < pulses; ++l) sched.amplitudes(static_cast<int>(s), l) = amp_rows[s][l];
  }
  return sched;
}

}  // namespace omrl
