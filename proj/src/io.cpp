#include "ddc/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ddc {

const char* kVersion = "ddchain 0.1.0";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string timeseries_csv(const TimeSeries& ts) {
  std::ostringstream out;
  out << "t,sx_avg,dx_avg,sz_avg,dz_avg,energy,discarded_weight\n";
  for (std::size_t i = 0; i < ts.times.size(); ++i) {
    out << fmt(ts.times[i]) << ',' << fmt(ts.sx[i]) << ',' << fmt(ts.dx[i])
        << ',' << fmt(ts.sz[i]) << ',' << fmt(ts.dz[i]) << ','
        << fmt(ts.energy[i]) << ',' << fmt(ts.discarded[i]) << '\n';
  }
  return out.str();
}

std::string profile_csv(const std::vector<double>& times,
                        const std::vector<std::vector<double>>& profiles,
                        const std::string& prefix) {
  std::ostringstream out;
  const std::size_t L = profiles.empty() ? 0 : profiles[0].size();
  out << "t";
  for (std::size_t i = 1; i <= L; ++i) out << ',' << prefix << '_' << i;
  out << '\n';
  for (std::size_t k = 0; k < times.size(); ++k) {
    out << fmt(times[k]);
    for (std::size_t i = 0; i < L; ++i) out << ',' << fmt(profiles[k][i]);
    out << '\n';
  }
  return out.str();
}

void parse_series_csv(const std::string& text, std::vector<double>& times,
                      std::vector<std::string>& names,
                      std::vector<std::vector<double>>& columns) {
  times.clear();
  names.clear();
  columns.clear();
  std::istringstream in(text);
  std::string line;
  // skip leading comment lines (embedded version/params metadata)
  do {
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
  } while (!line.empty() && line[0] == '#');
  {
    std::istringstream hdr(line);
    std::string cell;
    bool first = true;
    while (std::getline(hdr, cell, ',')) {
      if (first) {
        if (cell != "t") throw std::runtime_error("first CSV column must be t");
        first = false;
      } else {
        names.push_back(cell);
      }
    }
  }
  columns.resize(names.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(row, cell, ',')) {
      const double v = std::stod(cell);
      if (col == 0)
        times.push_back(v);
      else if (col - 1 < columns.size())
        columns[col - 1].push_back(v);
      ++col;
    }
    if (col != names.size() + 1)
      throw std::runtime_error("ragged CSV row: " + line);
  }
}

std::string fit_result_json(const FitResult& fit, const std::string& params_json,
                            std::uint64_t seed) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["seed"] = seed;
  j["params"] = nlohmann::json::parse(params_json);
  j["status"] = fit.status;
  j["converged"] = fit.converged;
  j["unidentifiable"] = fit.unidentifiable;
  j["window"] = {fit.t_min, fit.t_max};
  j["c"] = fit.c;
  j["A"] = fit.A;
  j["tau"] = fit.tau;
  j["omega"] = fit.omega;
  j["se"] = {{"c", fit.se_c}, {"A", fit.se_A}, {"tau", fit.se_tau},
             {"omega", fit.se_omega}};
  j["residual_rms"] = fit.residual_rms;
  j["c_tail_residual"] = fit.c_tail_residual;
  j["A_initial_residual"] = fit.A_initial_residual;
  return j.dump(2);
}

std::string velocity_json(const VelocityEstimate& v, const std::string& params_json,
                          std::uint64_t seed) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["seed"] = seed;
  j["params"] = nlohmann::json::parse(params_json);
  j["status"] = v.status;
  j["velocity"] = v.velocity;
  j["std_error"] = v.std_error;
  nlohmann::json pts = nlohmann::json::array();
  for (std::size_t i = 0; i < v.sites.size(); ++i)
    pts.push_back({{"site", v.sites[i] + 1}, {"t", v.peak_times[i]}});
  j["points"] = pts;
  return j.dump(2);
}

}  // namespace ddc
