#pragma once

#include <string>
#include <vector>

#include "aqt/backend.hpp"
#include "aqt/engine.hpp"
#include "aqt/linalg.hpp"
#include "aqt/sgqt.hpp"

namespace aqt {

enum class Method { adaptive, static_pauli, sgqt };
enum class Ensemble { pure, mixed, fixed };

const char* method_name(Method m);
const char* ensemble_name(Ensemble e);

struct BackendConfig {
  Backend::Kind kind = Backend::Kind::ideal;
  double lambda = 0.02;
  std::string counts_path;  // replay input
};

struct ExperimentSpec {
  Method method = Method::adaptive;
  Ensemble ensemble = Ensemble::pure;
  Vec3 fixed_state{};
  long trials = 1;
  RunConfig run;  // run.seed is the master seed for the whole experiment
  SpsaGains gains;
  BackendConfig backend;
  std::string out_path;    // aggregate CSV
  std::string trials_out;  // per-trial CSV
  std::string counts_out;  // record file of trial 0's measurements
  bool gnuplot = false;    // also emit <out>.gp
};

struct AggregateRow {
  long shots = 0;
  double median_infidelity = 0.0;
  double q16 = 0.0;
  double q84 = 0.0;
  double median_volume = 0.0;
};

struct TrialOutcome {
  long trial = 0;
  bool ok = false;
  std::string error;
  std::vector<IterationRecord> records;  // partial when !ok
  std::vector<OutcomeCounts> counts_log;
  Vec3 true_state{};
  bool truth_known = false;
};

struct ExperimentResult {
  std::vector<AggregateRow> table;
  std::vector<TrialOutcome> trials;
  long failed = 0;
};

// Nearest-rank quantile: element of rank ceil(q*n) (1-based) of the sorted
// values; NaN entries are ignored, NaN when nothing remains.
double nearest_rank_quantile(std::vector<double> values, double q);

// Per-shot-grid medians and 16/84% quantiles over runs. Rejects an input
// with no records at all.
std::vector<AggregateRow> summarize(
    const std::vector<std::vector<IterationRecord>>& runs);

// Runs `trials` independent seeded trials in a worker pool (AQT_WORKERS
// env var caps the pool; defaults to the hardware thread count), aggregates
// the successful ones, and writes whichever output files the spec names.
// Failed trials are recorded and excluded.
ExperimentResult run_experiment(const ExperimentSpec& spec);

struct AggregateTable {
  std::vector<AggregateRow> rows;
  std::string method;
  std::string ensemble;
};

void write_aggregate_csv(const std::string& path,
                         const std::vector<AggregateRow>& table,
                         const std::string& method,
                         const std::string& ensemble);
AggregateTable read_aggregate_csv(const std::string& path);

void write_trials_csv(const std::string& path,
                      const std::vector<TrialOutcome>& trials);
std::vector<std::vector<IterationRecord>> read_trials_csv(
    const std::string& path);

// Inner join of aggregate tables on the cumulative-shot grid, one labeled
// column pair (infidelity, volume) per input. Disjoint grids are an error.
struct CompareTable {
  std::vector<long> shots;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> infidelity;  // [input][row]
  std::vector<std::vector<double>> volume;      // [input][row]
};
CompareTable compare(const std::vector<AggregateTable>& tables);
void write_compare_csv(const std::string& path, const CompareTable& table);

// Flat key=value config file ('#' comments); keys mirror the CLI flags.
// `state=x,y,z` also switches the ensemble to fixed.
void apply_config_file(const std::string& path, ExperimentSpec& spec);

void write_gnuplot_script(const std::string& script_path,
                          const std::string& csv_path);

int worker_count();

}  // namespace aqt
