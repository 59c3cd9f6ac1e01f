// ddchain: double-chain simulation driver.
//
// Subcommands: ground-state, global-quench, local-quench, sweep,
// fit (re-fit an existing series CSV), velocity (re-track a profile CSV).
// Exit codes: 0 success, 2 configuration error, 3 convergence failure,
// 4 truncation overflow.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "ddc/dense.hpp"
#include "ddc/dmrg.hpp"
#include "ddc/ed.hpp"
#include "ddc/fit.hpp"
#include "ddc/io.hpp"
#include "ddc/peaks.hpp"
#include "ddc/sweep.hpp"
#include "ddc/tebd.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNoConverge = 3;
constexpr int kExitOverflow = 4;

// largest chain the dense oracle handles comfortably in memory here
constexpr int kOracleMaxL = 6;

struct CommonOpts {
  std::string params_file;
  std::string out_dir;
  std::uint64_t seed = 1;
  int chi = 128;
  double cutoff = 1e-10;
  double dt = 2e-3;
  double t_end = 0.5;
  std::string window;  // "A,B"
  int workers = 1;
  bool resume = false;
};

void add_engine_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--params", o.params_file, "parameter file (JSON)")
      ->required();
  cmd->add_option("--out", o.out_dir, "output directory")->required();
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--chi", o.chi, "maximum bond dimension");
  cmd->add_option("--cutoff", o.cutoff, "truncation cutoff");
}

ddc::DmrgConfig dmrg_config(const CommonOpts& o) {
  ddc::DmrgConfig cfg;
  cfg.chi_max = o.chi;
  cfg.cutoff = o.cutoff;
  cfg.seed = o.seed;
  return cfg;
}

struct ParamFile {
  ddc::SystemParams system;
  json extra;  // sections consumed by the CLI, not the engine
};

ParamFile load_params(const std::string& path,
                      const std::vector<std::string>& sections) {
  json j;
  try {
    j = json::parse(ddc::read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ddc::ParamError(std::string("parameter file is not valid JSON: ") +
                          e.what());
  }
  ParamFile pf;
  for (const auto& s : sections) {
    if (j.contains(s)) {
      pf.extra[s] = j[s];
      j.erase(s);
    }
  }
  pf.system = ddc::SystemParams::from_json(j.dump());
  return pf;
}

void prepare_out_dir(const std::string& dir, bool require_empty) {
  fs::create_directories(dir);
  if (require_empty && !fs::is_empty(dir))
    throw ddc::ParamError("output directory is not empty: " + dir +
                          " (pass --resume to continue)");
}

std::string csv_header(const std::string& params_json, std::uint64_t seed) {
  json p = json::parse(params_json);
  return "# " + std::string(ddc::kVersion) + "\n# seed=" +
         std::to_string(seed) + " params=" + p.dump() + "\n";
}

std::pair<double, double> parse_window(const std::string& s, double lo,
                                       double hi) {
  if (s.empty()) return {lo, hi};
  const auto comma = s.find(',');
  if (comma == std::string::npos)
    throw ddc::ParamError("--window expects A,B");
  try {
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw ddc::ParamError("--window expects numeric A,B");
  }
}

void write_series_outputs(const std::string& dir, const ddc::TimeSeries& ts,
                          const std::string& params_json, std::uint64_t seed) {
  const std::string head = csv_header(params_json, seed);
  ddc::write_text_file(dir + "/series.csv", head + ddc::timeseries_csv(ts));
  ddc::write_text_file(dir + "/sx_profile.csv",
                       head + ddc::profile_csv(ts.times, ts.sx_profile, "sx"));
  ddc::write_text_file(dir + "/dx_profile.csv",
                       head + ddc::profile_csv(ts.times, ts.dx_profile, "dx"));
}

int cmd_ground_state(const CommonOpts& o) {
  ParamFile pf = load_params(o.params_file, {});
  prepare_out_dir(o.out_dir, false);
  auto res = ddc::find_ground_state(pf.system, dmrg_config(o));

  json j;
  j["version"] = ddc::kVersion;
  j["seed"] = o.seed;
  j["params"] = json::parse(pf.system.to_json());
  j["energy"] = res.energy;
  j["converged"] = res.converged;
  j["sweep_energies"] = res.sweep_energies;
  j["obs"] = {{"sx", res.obs.sx}, {"sz", res.obs.sz},
              {"dx", res.obs.dx}, {"dz", res.obs.dz}};
  ddc::write_text_file(o.out_dir + "/ground_state.json", j.dump(2));

  std::string csv = csv_header(pf.system.to_json(), o.seed);
  csv += "site,sx,sz,dx,dz\n";
  for (int i = 0; i < pf.system.L; ++i)
    csv += std::to_string(i + 1) + "," + ddc::fmt(res.obs.sx_profile[i]) + "," +
           ddc::fmt(res.obs.sz_profile[i]) + "," +
           ddc::fmt(res.obs.dx_profile[i]) + "," +
           ddc::fmt(res.obs.dz_profile[i]) + "\n";
  ddc::write_text_file(o.out_dir + "/profiles.csv", csv);

  return res.converged ? kExitOk : kExitNoConverge;
}

void write_spectral_report(const std::string& dir,
                           const ddc::SystemParams& pre,
                           const ddc::SystemParams& post, std::uint64_t seed) {
  ddc::SpectralDecomposition dpre = ddc::diagonalize(pre);
  ddc::SpectralDecomposition dpost = ddc::diagonalize(post);
  ddc::Vecc psi0 = dpre.eigenvectors.col(0);
  auto lines = ddc::spectral_report(dpost, psi0, 64, post.h_d);
  json j;
  j["version"] = ddc::kVersion;
  j["seed"] = seed;
  j["params"] = json::parse(post.to_json());
  j["gap_two_adjacent_flips"] = ddc::gap_two_adjacent_flips(post);
  json arr = json::array();
  for (const auto& l : lines)
    arr.push_back({{"weight", l.weight},
                   {"energy", l.energy},
                   {"flip_character", l.flip_character}});
  j["lines"] = arr;
  ddc::write_text_file(dir + "/spectral.json", j.dump(2));
}

void write_ed_deviation(const std::string& dir, const ddc::SystemParams& pre,
                        const ddc::SystemParams& post,
                        const ddc::TimeSeries& ts, std::uint64_t seed) {
  ddc::SpectralDecomposition dpre = ddc::diagonalize(pre);
  ddc::SpectralDecomposition dpost = ddc::diagonalize(post);
  ddc::Vecc psi0 = dpre.eigenvectors.col(0);
  auto exact = ddc::evolve_exact(
      dpost, psi0, ts.times,
      {{"dx", ddc::dense_chain_average(post.L, ddc::op_dx())},
       {"sx", ddc::dense_chain_average(post.L, ddc::op_sx())}});
  double max_dx = 0, max_sx = 0;
  for (std::size_t k = 0; k < ts.times.size(); ++k) {
    max_dx = std::max(max_dx, std::abs(ts.dx[k] - exact.of("dx")[k]));
    max_sx = std::max(max_sx, std::abs(ts.sx[k] - exact.of("sx")[k]));
  }
  json j;
  j["version"] = ddc::kVersion;
  j["seed"] = seed;
  j["params"] = json::parse(post.to_json());
  j["max_abs_deviation"] = {{"dx", max_dx}, {"sx", max_sx}};
  ddc::write_text_file(dir + "/ed_deviation.json", j.dump(2));
}

int cmd_global_quench(const CommonOpts& o) {
  ParamFile pf = load_params(o.params_file, {"quench"});
  prepare_out_dir(o.out_dir, false);

  ddc::QuenchSpec spec;
  spec.pre = pf.system;
  spec.post = pf.system;
  spec.post.h_d = -pf.system.h_d;  // default protocol: flip the field sign
  spec.dt = o.dt;
  spec.t_end = o.t_end;
  if (pf.extra.contains("quench")) {
    const json& q = pf.extra["quench"];
    if (q.contains("h_d_to")) spec.post.h_d = q["h_d_to"].get<double>();
    if (q.contains("stride")) spec.stride = q["stride"].get<int>();
    for (const auto& it : q.items())
      if (it.key() != "h_d_to" && it.key() != "stride")
        throw ddc::ParamError("unknown key in quench section: " + it.key());
  }

  ddc::TimeSeries ts = ddc::run_global_quench(spec, dmrg_config(o));
  write_series_outputs(o.out_dir, ts, spec.post.to_json(), o.seed);

  auto [wa, wb] = parse_window(o.window, ts.times.front(), ts.times.back());
  ddc::FitResult fit = ddc::fit_damped_cosine(ts.times, ts.dx, wa, wb);
  ddc::write_text_file(o.out_dir + "/fit.json",
                       ddc::fit_result_json(fit, spec.post.to_json(), o.seed));

  if (pf.system.L <= kOracleMaxL) {
    write_spectral_report(o.out_dir, spec.pre, spec.post, o.seed);
    write_ed_deviation(o.out_dir, spec.pre, spec.post, ts, o.seed);
  }
  if (!ts.ok()) return kExitOverflow;
  return ts.prep_converged ? kExitOk : kExitNoConverge;
}

int cmd_local_quench(const CommonOpts& o) {
  ParamFile pf = load_params(o.params_file, {"local"});
  prepare_out_dir(o.out_dir, false);
  if (!pf.extra.contains("local"))
    throw ddc::ParamError("missing section: local");
  const json& l = pf.extra["local"];
  if (!l.contains("flip_site") || !l["flip_site"].is_number_integer())
    throw ddc::ParamError("local section needs integer key: flip_site");
  const int flip_site_1b = l["flip_site"].get<int>();
  ddc::FieldPair prep{pf.system.h_s, pf.system.h_d};
  if (l.contains("prep_h_s")) prep.h_s = l["prep_h_s"].get<double>();
  if (l.contains("prep_h_d")) prep.h_d = l["prep_h_d"].get<double>();
  int stride = 10;
  if (l.contains("stride")) stride = l["stride"].get<int>();
  for (const auto& it : l.items())
    if (it.key() != "flip_site" && it.key() != "prep_h_s" &&
        it.key() != "prep_h_d" && it.key() != "stride")
      throw ddc::ParamError("unknown key in local section: " + it.key());

  ddc::TimeSeries ts =
      ddc::run_local_quench(pf.system, flip_site_1b - 1, prep, dmrg_config(o),
                            o.dt, o.t_end, stride);
  write_series_outputs(o.out_dir, ts, pf.system.to_json(), o.seed);

  const int origin = flip_site_1b - 1;
  const struct {
    const char* name;
    const std::vector<std::vector<double>>* profiles;
  } chans[] = {{"sx", &ts.sx_profile}, {"dx", &ts.dx_profile}};
  for (const auto& ch : chans)
    for (auto side : {ddc::ConeSide::Left, ddc::ConeSide::Right}) {
      auto v = ddc::track_light_cone(ts.times, *ch.profiles, origin, side);
      const std::string tag = side == ddc::ConeSide::Left ? "left" : "right";
      ddc::write_text_file(
          o.out_dir + "/velocity_" + ch.name + "_" + tag + ".json",
          ddc::velocity_json(v, pf.system.to_json(), o.seed));
    }
  if (!ts.ok()) return kExitOverflow;
  return ts.prep_converged ? kExitOk : kExitNoConverge;
}

int cmd_sweep(const CommonOpts& o) {
  ParamFile pf = load_params(o.params_file, {"sweep", "quench", "local"});
  prepare_out_dir(o.out_dir, !o.resume);
  if (!pf.extra.contains("sweep"))
    throw ddc::ParamError("missing section: sweep");
  const json& s = pf.extra["sweep"];

  ddc::SweepGrid grid;
  grid.base = pf.system;
  grid.dmrg = dmrg_config(o);
  grid.dt = o.dt;
  grid.t_end = o.t_end;

  const std::string kind = s.value("kind", "ground-state");
  if (kind == "ground-state") grid.kind = ddc::TaskKind::GroundState;
  else if (kind == "global-quench") grid.kind = ddc::TaskKind::GlobalQuench;
  else if (kind == "local-quench") grid.kind = ddc::TaskKind::LocalQuench;
  else throw ddc::ParamError("unknown sweep kind: " + kind);

  if (!s.contains("axes") || !s["axes"].is_object() || s["axes"].empty())
    throw ddc::ParamError("sweep section needs a non-empty axes object");
  for (const auto& it : s["axes"].items()) {
    if (!it.value().is_array())
      throw ddc::ParamError("axis values must be a list: " + it.key());
    std::vector<double> vals = it.value().get<std::vector<double>>();
    if (vals.empty())
      throw ddc::ParamError("axis has no values: " + it.key());
    grid.axes.emplace_back(it.key(), std::move(vals));
  }
  if (s.contains("h_pin")) grid.dmrg.h_pin = s["h_pin"].get<double>();
  if (s.contains("stride")) grid.stride = s["stride"].get<int>();
  for (const auto& it : s.items())
    if (it.key() != "kind" && it.key() != "axes" && it.key() != "h_pin" &&
        it.key() != "stride")
      throw ddc::ParamError("unknown key in sweep section: " + it.key());

  if (pf.extra.contains("quench")) {
    const json& q = pf.extra["quench"];
    if (q.contains("h_d_to")) grid.quench_h_d_to = q["h_d_to"].get<double>();
  }
  if (pf.extra.contains("local")) {
    const json& l = pf.extra["local"];
    if (l.contains("flip_site")) grid.flip_site = l["flip_site"].get<int>() - 1;
    grid.prep_fields = {pf.system.h_s, pf.system.h_d};
    if (l.contains("prep_h_s")) grid.prep_fields.h_s = l["prep_h_s"].get<double>();
    if (l.contains("prep_h_d")) grid.prep_fields.h_d = l["prep_h_d"].get<double>();
  }

  ddc::SweepResultStore store(o.out_dir);
  json manifest;
  manifest["version"] = ddc::kVersion;
  manifest["seed"] = o.seed;
  manifest["params"] = json::parse(pf.system.to_json());
  manifest["kind"] = kind;
  manifest["axes"] = s["axes"];
  manifest["workers"] = o.workers;
  store.write_manifest(manifest.dump(2));

  auto tasks = ddc::plan(grid, store);
  ddc::execute(grid, tasks, store, o.workers);

  if (grid.kind == ddc::TaskKind::GroundState)
    ddc::write_text_file(o.out_dir + "/phase_table.csv",
                         csv_header(pf.system.to_json(), o.seed) +
                             ddc::aggregate_phase_table(store));

  int failed = 0;
  for (const auto& r : store.records())
    if (r.status == "failed") ++failed;
  if (failed > 0) {
    std::cerr << failed << " task(s) failed; see the result store\n";
    return kExitNoConverge;
  }
  return kExitOk;
}

int cmd_fit(const std::string& series_file, const std::string& column,
            const CommonOpts& o) {
  prepare_out_dir(o.out_dir, false);
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;
  ddc::parse_series_csv(ddc::read_text_file(series_file), times, names, cols);
  std::size_t idx = names.size();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == column) idx = i;
  if (idx == names.size())
    throw ddc::ParamError("column not found in series CSV: " + column);
  if (times.empty()) throw ddc::ParamError("series CSV has no rows");

  auto [wa, wb] = parse_window(o.window, times.front(), times.back());
  ddc::FitResult fit = ddc::fit_damped_cosine(times, cols[idx], wa, wb);
  json src = {{"source", series_file}, {"column", column}};
  ddc::write_text_file(o.out_dir + "/fit.json",
                       ddc::fit_result_json(fit, src.dump(), o.seed));
  std::cout << "status=" << fit.status << " omega=" << fit.omega
            << " tau=" << fit.tau << "\n";
  return kExitOk;
}

int cmd_velocity(const std::string& profile_file, int origin_1b,
                 const std::string& side, const CommonOpts& o) {
  prepare_out_dir(o.out_dir, false);
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;
  ddc::parse_series_csv(ddc::read_text_file(profile_file), times, names, cols);
  std::vector<std::vector<double>> profiles(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    profiles[k].resize(names.size());
    for (std::size_t i = 0; i < names.size(); ++i)
      profiles[k][i] = cols[i][k];
  }
  if (origin_1b < 1 || origin_1b > static_cast<int>(names.size()))
    throw ddc::ParamError("--origin outside the profile columns");

  json src = {{"source", profile_file}};
  auto run_side = [&](ddc::ConeSide cs, const std::string& tag) {
    auto v = ddc::track_light_cone(times, profiles, origin_1b - 1, cs);
    ddc::write_text_file(o.out_dir + "/velocity_" + tag + ".json",
                         ddc::velocity_json(v, src.dump(), o.seed));
    std::cout << tag << ": status=" << v.status << " v=" << v.velocity << "\n";
  };
  if (side == "left" || side == "both") run_side(ddc::ConeSide::Left, "left");
  if (side == "right" || side == "both") run_side(ddc::ConeSide::Right, "right");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coupled double-chain spin simulator"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string fit_series, fit_column = "dx_avg";
  std::string vel_profile, vel_side = "both";
  int vel_origin = 0;

  auto* gs = app.add_subcommand("ground-state", "variational ground state");
  add_engine_flags(gs, o);

  auto* gq = app.add_subcommand("global-quench", "uniform field quench");
  add_engine_flags(gq, o);
  gq->add_option("--dt", o.dt, "Trotter step");
  gq->add_option("--t-end", o.t_end, "evolution time");
  gq->add_option("--window", o.window, "fit window A,B");

  auto* lq = app.add_subcommand("local-quench", "single-site field quench");
  add_engine_flags(lq, o);
  lq->add_option("--dt", o.dt, "Trotter step");
  lq->add_option("--t-end", o.t_end, "evolution time");

  auto* sw = app.add_subcommand("sweep", "parameter grid");
  add_engine_flags(sw, o);
  sw->add_option("--dt", o.dt, "Trotter step");
  sw->add_option("--t-end", o.t_end, "evolution time");
  sw->add_option("--workers", o.workers, "parallel tasks");
  sw->add_flag("--resume", o.resume, "continue an existing result store");

  auto* ft = app.add_subcommand("fit", "re-fit an existing series CSV");
  ft->add_option("series", fit_series, "series CSV")->required();
  ft->add_option("--column", fit_column, "column to fit");
  ft->add_option("--out", o.out_dir, "output directory")->required();
  ft->add_option("--window", o.window, "fit window A,B");
  ft->add_option("--seed", o.seed, "seed recorded in the output");

  auto* vl = app.add_subcommand("velocity", "re-track an existing profile CSV");
  vl->add_option("profile", vel_profile, "per-site profile CSV")->required();
  vl->add_option("--origin", vel_origin, "origin site (1-based)")->required();
  vl->add_option("--side", vel_side, "left | right | both")
      ->check(CLI::IsMember({"left", "right", "both"}));
  vl->add_option("--out", o.out_dir, "output directory")->required();
  vl->add_option("--seed", o.seed, "seed recorded in the output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (gs->parsed()) return cmd_ground_state(o);
    if (gq->parsed()) return cmd_global_quench(o);
    if (lq->parsed()) return cmd_local_quench(o);
    if (sw->parsed()) return cmd_sweep(o);
    if (ft->parsed()) return cmd_fit(fit_series, fit_column, o);
    if (vl->parsed()) return cmd_velocity(vel_profile, vel_origin, vel_side, o);
  } catch (const ddc::ParamError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ddc::CapacityError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
