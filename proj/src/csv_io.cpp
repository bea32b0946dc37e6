#include "lcc/csv_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "lcc/errors.hpp"

namespace lcc::io {

namespace fs = std::filesystem;

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  std::error_code ec;
  const fs::path parent = path.parent_path();
  if (!parent.empty()) {
    fs::create_directories(parent, ec);
    if (ec) throw IoError("cannot create directory " + parent.string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp, ec);
      throw IoError("write to " + tmp.string() + " failed");
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string energy_csv(const std::vector<EnergyRow>& rows) {
  std::string out = "n,t,lambda_min,trace_inv\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + ',' + format_number(r.t) + ',' + format_number(r.lambda_min) + ',';
    if (r.trace_inv) out += format_number(*r.trace_inv);
    out += '\n';
  }
  return out;
}

std::string magnitude_csv(const std::vector<std::pair<double, double>>& curve) {
  std::string out = "omega,mag\n";
  for (const auto& [w, mag] : curve) out += format_number(w) + ',' + format_number(mag) + '\n';
  return out;
}

std::string region_csv(const RegionMap& map) {
  std::ostringstream out;
  map.write_csv(out);
  return out.str();
}

std::string trace_csv(const SimulationTrace& trace) {
  std::ostringstream out;
  trace.write_csv(out);
  return out.str();
}

std::string events_csv(const SimulationTrace& trace) {
  std::ostringstream out;
  trace.write_events_csv(out);
  return out.str();
}

}  // namespace lcc::io
