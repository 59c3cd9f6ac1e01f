#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ddc/dmrg.hpp"
#include "ddc/params.hpp"

namespace ddc {

enum class TaskKind { GroundState, GlobalQuench, LocalQuench };

struct SweepGrid {
  std::vector<std::pair<std::string, std::vector<double>>> axes;
  SystemParams base;
  TaskKind kind = TaskKind::GroundState;
  DmrgConfig dmrg;
  // Quench knobs, used by the quench task kinds.
  double quench_h_d_to = 0;
  double dt = 2e-3;
  double t_end = 0.5;
  int stride = 10;
  int flip_site = 0;            // 0-based
  FieldPair prep_fields{};

  std::size_t size() const;
};

struct SweepTask {
  std::string id;                         // deterministic from coordinates
  std::map<std::string, double> coords;   // axis name -> value
  SystemParams params;                    // base with coords applied
};

struct TaskRecord {
  std::string id;
  std::map<std::string, double> coords;
  std::string status;  // done | failed
  double energy = 0;
  ObservablesRecord obs;
  bool converged = false;
  double wall_seconds = 0;
  std::string error;
  std::string series_path;  // quench tasks: CSV next to the store
};

/// One JSON record file per task under dir/, append-only, plus a manifest.
class SweepResultStore {
 public:
  explicit SweepResultStore(const std::string& dir);

  void write_manifest(const std::string& manifest_json);
  void append(const TaskRecord& rec);
  bool completed(const std::string& id) const;
  std::vector<TaskRecord> records() const;
  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
  std::map<std::string, TaskRecord> records_;
};

std::vector<SweepTask> plan(const SweepGrid& grid, const SweepResultStore& store);

/// Run the planned tasks with at most `workers` in flight. Per-task
/// results are independent of the worker count; failures are recorded
/// with status=failed.
void execute(const SweepGrid& grid, const std::vector<SweepTask>& tasks,
             SweepResultStore& store, int workers);

/// One CSV row per completed grid point:
/// C,h_s,h_d,sx,dx,abs_sz,abs_dz,phase_s,phase_d.
std::string aggregate_phase_table(const SweepResultStore& store,
                                  double threshold_s = 0.05,
                                  double threshold_d = 0.05);

/// Apply one axis assignment to params; unknown names raise ParamError.
void apply_axis(SystemParams& p, const std::string& name, double value);

std::string task_id_for(const std::map<std::string, double>& coords);

}  // namespace ddc
