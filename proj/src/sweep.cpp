#include "ddc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <mutex>
#include <thread>

#include "ddc/io.hpp"
#include "ddc/tebd.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace ddc {

std::size_t SweepGrid::size() const {
  std::size_t n = 1;
  for (const auto& [name, vals] : axes) {
    (void)name;
    n *= vals.size();
  }
  return n;
}

void apply_axis(SystemParams& p, const std::string& name, double value) {
  if (name == "h_s") p.h_s = value;
  else if (name == "h_d") p.h_d = value;
  else if (name == "C") p.C = value;
  else if (name == "J_s") p.J_s = value;
  else if (name == "J_d") p.J_d = value;
  else if (name == "L") p.L = static_cast<int>(std::llround(value));
  else throw ParamError("unknown sweep axis: " + name);
}

std::string task_id_for(const std::map<std::string, double>& coords) {
  std::string id;
  for (const auto& [name, value] : coords) {
    if (!id.empty()) id += "_";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%s=%.6g", name.c_str(), value);
    id += buf;
  }
  return id;
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

nlohmann::json obs_to_json(const ObservablesRecord& o) {
  return {{"sx", o.sx},
          {"sz", o.sz},
          {"dx", o.dx},
          {"dz", o.dz},
          {"sx_profile", o.sx_profile},
          {"sz_profile", o.sz_profile},
          {"dx_profile", o.dx_profile},
          {"dz_profile", o.dz_profile}};
}

ObservablesRecord obs_from_json(const nlohmann::json& j) {
  ObservablesRecord o;
  o.sx = j.value("sx", 0.0);
  o.sz = j.value("sz", 0.0);
  o.dx = j.value("dx", 0.0);
  o.dz = j.value("dz", 0.0);
  if (j.contains("sx_profile")) o.sx_profile = j["sx_profile"].get<std::vector<double>>();
  if (j.contains("sz_profile")) o.sz_profile = j["sz_profile"].get<std::vector<double>>();
  if (j.contains("dx_profile")) o.dx_profile = j["dx_profile"].get<std::vector<double>>();
  if (j.contains("dz_profile")) o.dz_profile = j["dz_profile"].get<std::vector<double>>();
  return o;
}

}  // namespace

SweepResultStore::SweepResultStore(const std::string& dir) : dir_(dir) {
  fs::create_directories(dir_);
  for (const auto& entry : fs::directory_iterator(dir_)) {
    if (entry.path().extension() != ".json") continue;
    if (entry.path().filename() == "manifest.json") continue;
    nlohmann::json j = nlohmann::json::parse(read_text_file(entry.path().string()));
    TaskRecord rec;
    rec.id = j.at("id").get<std::string>();
    rec.status = j.value("status", "failed");
    rec.energy = j.value("energy", 0.0);
    rec.converged = j.value("converged", false);
    rec.wall_seconds = j.value("wall_seconds", 0.0);
    rec.error = j.value("error", "");
    rec.series_path = j.value("series_path", "");
    if (j.contains("coords"))
      for (const auto& it : j["coords"].items())
        rec.coords[it.key()] = it.value().get<double>();
    if (j.contains("obs")) rec.obs = obs_from_json(j["obs"]);
    records_[rec.id] = std::move(rec);
  }
}

void SweepResultStore::write_manifest(const std::string& manifest_json) {
  write_text_file((fs::path(dir_) / "manifest.json").string(), manifest_json);
}

void SweepResultStore::append(const TaskRecord& rec) {
  nlohmann::json j;
  j["id"] = rec.id;
  j["status"] = rec.status;
  j["energy"] = rec.energy;
  j["converged"] = rec.converged;
  j["wall_seconds"] = rec.wall_seconds;
  if (!rec.error.empty()) j["error"] = rec.error;
  if (!rec.series_path.empty()) j["series_path"] = rec.series_path;
  j["coords"] = rec.coords;
  j["obs"] = obs_to_json(rec.obs);
  j["version"] = kVersion;
  // sanitize id for a filename
  std::string name = rec.id;
  for (char& c : name)
    if (c == '/' || c == '\\' || c == ' ') c = '_';
  write_text_file((fs::path(dir_) / (name + ".json")).string(), j.dump(2));
  records_[rec.id] = rec;
}

bool SweepResultStore::completed(const std::string& id) const {
  auto it = records_.find(id);
  return it != records_.end() && it->second.status == "done";
}

std::vector<TaskRecord> SweepResultStore::records() const {
  std::vector<TaskRecord> out;
  out.reserve(records_.size());
  for (const auto& [id, rec] : records_) {
    (void)id;
    out.push_back(rec);
  }
  return out;
}

std::vector<SweepTask> plan(const SweepGrid& grid, const SweepResultStore& store) {
  std::vector<SweepTask> tasks;
  const std::size_t total = grid.size();
  std::vector<std::size_t> radix(grid.axes.size());
  for (std::size_t i = 0; i < grid.axes.size(); ++i)
    radix[i] = grid.axes[i].second.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    SweepTask task;
    task.params = grid.base;
    for (std::size_t i = grid.axes.size(); i-- > 0;) {
      const std::size_t idx = rem % radix[i];
      rem /= radix[i];
      const auto& [name, vals] = grid.axes[i];
      task.coords[name] = vals[idx];
      apply_axis(task.params, name, vals[idx]);
    }
    task.id = task_id_for(task.coords);
    if (!store.completed(task.id)) tasks.push_back(std::move(task));
  }
  std::sort(tasks.begin(), tasks.end(),
            [](const SweepTask& a, const SweepTask& b) { return a.id < b.id; });
  return tasks;
}

namespace {

TaskRecord run_task(const SweepGrid& grid, const SweepTask& task,
                    const std::string& store_dir) {
  TaskRecord rec;
  rec.id = task.id;
  rec.coords = task.coords;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    DmrgConfig cfg = grid.dmrg;
    cfg.seed = grid.dmrg.seed ^ fnv1a(task.id);  // deterministic per task
    if (grid.kind == TaskKind::GroundState) {
      GroundStateResult gs = find_ground_state(task.params, cfg);
      rec.energy = gs.energy;
      rec.converged = gs.converged;
      rec.obs = gs.obs;
      rec.status = "done";
    } else {
      TimeSeries ts;
      if (grid.kind == TaskKind::GlobalQuench) {
        QuenchSpec spec;
        spec.pre = task.params;
        spec.post = task.params;
        spec.post.h_d = grid.quench_h_d_to;
        spec.dt = grid.dt;
        spec.t_end = grid.t_end;
        spec.stride = grid.stride;
        ts = run_global_quench(spec, cfg);
      } else {
        ts = run_local_quench(task.params, grid.flip_site, grid.prep_fields,
                              cfg, grid.dt, grid.t_end, grid.stride);
      }
      std::string name = task.id;
      for (char& c : name)
        if (c == '/' || c == '\\' || c == ' ') c = '_';
      rec.series_path = name + "_series.csv";
      write_text_file((fs::path(store_dir) / rec.series_path).string(),
                      timeseries_csv(ts));
      write_text_file((fs::path(store_dir) / (name + "_dx_profile.csv")).string(),
                      profile_csv(ts.times, ts.dx_profile, "dx"));
      write_text_file((fs::path(store_dir) / (name + "_sx_profile.csv")).string(),
                      profile_csv(ts.times, ts.sx_profile, "sx"));
      rec.status = ts.ok() ? "done" : "failed";
      if (!ts.ok()) rec.error = ts.status;
    }
  } catch (const std::exception& e) {
    rec.status = "failed";
    rec.error = e.what();
  }
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rec;
}

}  // namespace

void execute(const SweepGrid& grid, const std::vector<SweepTask>& tasks,
             SweepResultStore& store, int workers) {
  workers = std::max(1, workers);
  std::atomic<std::size_t> next{0};
  std::mutex store_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      TaskRecord rec = run_task(grid, tasks[i], store.dir());
      std::lock_guard<std::mutex> lock(store_mutex);
      store.append(rec);
    }
  };
  if (workers == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

std::string aggregate_phase_table(const SweepResultStore& store,
                                  double threshold_s, double threshold_d) {
  auto recs = store.records();
  std::vector<const TaskRecord*> done;
  for (const auto& r : recs)
    if (r.status == "done") done.push_back(&r);
  auto coord = [](const TaskRecord& r, const std::string& k) {
    auto it = r.coords.find(k);
    return it == r.coords.end() ? 0.0 : it->second;
  };
  std::sort(done.begin(), done.end(),
            [&](const TaskRecord* a, const TaskRecord* b) {
              const auto ka = std::make_tuple(coord(*a, "C"), coord(*a, "h_s"),
                                              coord(*a, "h_d"), a->id);
              const auto kb = std::make_tuple(coord(*b, "C"), coord(*b, "h_s"),
                                              coord(*b, "h_d"), b->id);
              return ka < kb;
            });
  std::string out = "C,h_s,h_d,sx,dx,abs_sz,abs_dz,phase_s,phase_d\n";
  for (const TaskRecord* r : done) {
    const char ps = std::abs(r->obs.sz) > threshold_s ? 'F' : 'P';
    const char pd = std::abs(r->obs.dz) > threshold_d ? 'F' : 'P';
    out += fmt(coord(*r, "C")) + "," + fmt(coord(*r, "h_s")) + "," +
           fmt(coord(*r, "h_d")) + "," + fmt(r->obs.sx) + "," + fmt(r->obs.dx) +
           "," + fmt(std::abs(r->obs.sz)) + "," + fmt(std::abs(r->obs.dz)) +
           "," + ps + "," + pd + "\n";
  }
  return out;
}

}  // namespace ddc
