#include "aqt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "aqt/bloch.hpp"
#include "aqt/errors.hpp"

namespace aqt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

long parse_long_strict(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  long value = 0;
  try {
    value = std::stol(text, &used);
  } catch (const std::exception&) {
    throw ParseError(where + ": not an integer: `" + text + "`");
  }
  if (used != text.size())
    throw ParseError(where + ": not an integer: `" + text + "`");
  return value;
}

double parse_double_strict(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ParseError(where + ": not a number: `" + text + "`");
  }
  if (used != text.size())
    throw ParseError(where + ": not a number: `" + text + "`");
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim(const std::string& s) {
  const std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

TrialOutcome run_trial(const ExperimentSpec& spec, long index) {
  TrialOutcome out;
  out.trial = index;

  const Rng trial_base = Rng(spec.run.seed).substream(
      static_cast<std::uint64_t>(index));
  Rng state_rng = trial_base.substream(0);
  const std::uint64_t backend_seed = trial_base.substream_seed(1);
  const std::uint64_t engine_seed = trial_base.substream_seed(2);

  try {
    switch (spec.ensemble) {
      case Ensemble::pure:
        out.true_state = random_state(StateKind::pure, state_rng);
        break;
      case Ensemble::mixed:
        out.true_state = random_state(StateKind::mixed, state_rng);
        break;
      case Ensemble::fixed:
        out.true_state = spec.fixed_state;
        break;
    }

    Backend backend = [&] {
      switch (spec.backend.kind) {
        case Backend::Kind::ideal:
          return Backend::ideal(out.true_state, Rng(backend_seed));
        case Backend::Kind::depolarizing:
          return Backend::depolarizing(out.true_state, spec.backend.lambda,
                                       Rng(backend_seed));
        case Backend::Kind::replay:
          return load_record(spec.backend.counts_path);
      }
      throw std::logic_error("unreachable backend kind");
    }();
    // replayed counts carry no truth unless the user pinned the state
    out.truth_known = spec.backend.kind != Backend::Kind::replay ||
                      spec.ensemble == Ensemble::fixed;
    const bool log_counts = !spec.counts_out.empty() && index == 0;
    if (log_counts) backend.enable_log(true);

    RunConfig cfg = spec.run;
    cfg.seed = engine_seed;
    const Vec3* truth = out.truth_known ? &out.true_state : nullptr;

    RunResult run;
    switch (spec.method) {
      case Method::adaptive:
        run = run_adaptive(cfg, backend, truth);
        break;
      case Method::static_pauli:
        run = run_static(cfg, backend, truth);
        break;
      case Method::sgqt: {
        SgqtConfig sg;
        sg.iterations = spec.run.iterations;
        sg.shots_per_step = spec.run.shots_per_axis;
        sg.gains = spec.gains;
        sg.seed = engine_seed;
        run = run_sgqt(sg, backend, truth);
        break;
      }
    }
    out.records = std::move(run.records);
    out.ok = run.completed;
    out.error = run.error;
    if (log_counts) out.counts_log = backend.log();
  } catch (const std::exception& err) {
    out.ok = false;
    out.error = err.what();
  }
  return out;
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::adaptive: return "adaptive";
    case Method::static_pauli: return "static";
    case Method::sgqt: return "sgqt";
  }
  return "?";
}

const char* ensemble_name(Ensemble e) {
  switch (e) {
    case Ensemble::pure: return "pure";
    case Ensemble::mixed: return "mixed";
    case Ensemble::fixed: return "fixed";
  }
  return "?";
}

double nearest_rank_quantile(std::vector<double> values, double q) {
  values.erase(std::remove_if(values.begin(), values.end(),
                              [](double v) { return std::isnan(v); }),
               values.end());
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  long rank = static_cast<long>(std::ceil(q * n - 1e-9));
  rank = std::clamp(rank, 1L, static_cast<long>(values.size()));
  return values[static_cast<std::size_t>(rank - 1)];
}

std::vector<AggregateRow> summarize(
    const std::vector<std::vector<IterationRecord>>& runs) {
  std::map<long, std::pair<std::vector<double>, std::vector<double>>> grid;
  for (const auto& run : runs)
    for (const IterationRecord& rec : run) {
      auto& cell = grid[rec.cumulative_shots];
      cell.first.push_back(rec.infidelity);
      cell.second.push_back(rec.volume);
    }
  if (grid.empty())
    throw std::invalid_argument("no records to summarize");

  std::vector<AggregateRow> table;
  table.reserve(grid.size());
  for (auto& [shots, cell] : grid) {
    AggregateRow row;
    row.shots = shots;
    row.median_infidelity = nearest_rank_quantile(cell.first, 0.5);
    row.q16 = nearest_rank_quantile(cell.first, 0.16);
    row.q84 = nearest_rank_quantile(cell.first, 0.84);
    row.median_volume = nearest_rank_quantile(cell.second, 0.5);
    table.push_back(row);
  }
  return table;
}

int worker_count() {
  if (const char* env = std::getenv("AQT_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1)
      return static_cast<int>(std::min(v, 256L));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (spec.backend.kind == Backend::Kind::replay &&
      spec.backend.counts_path.empty())
    throw std::invalid_argument("replay backend needs a counts file");

  ExperimentResult result;
  result.trials.resize(static_cast<std::size_t>(spec.trials));

  const long workers = std::min<long>(worker_count(), spec.trials);
  if (workers <= 1) {
    for (long i = 0; i < spec.trials; ++i)
      result.trials[static_cast<std::size_t>(i)] = run_trial(spec, i);
  } else {
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (long w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (long i = next.fetch_add(1); i < spec.trials;
             i = next.fetch_add(1))
          result.trials[static_cast<std::size_t>(i)] = run_trial(spec, i);
      });
    for (std::thread& t : pool) t.join();
  }

  std::vector<std::vector<IterationRecord>> ok_runs;
  for (const TrialOutcome& t : result.trials) {
    if (t.ok)
      ok_runs.push_back(t.records);
    else
      ++result.failed;
  }
  if (ok_runs.empty())
    throw std::runtime_error("every trial failed; first error: " +
                             result.trials.front().error);
  result.table = summarize(ok_runs);

  if (!spec.out_path.empty()) {
    write_aggregate_csv(spec.out_path, result.table, method_name(spec.method),
                        ensemble_name(spec.ensemble));
    if (spec.gnuplot)
      write_gnuplot_script(spec.out_path + ".gp", spec.out_path);
  }
  if (!spec.trials_out.empty()) write_trials_csv(spec.trials_out, result.trials);
  if (!spec.counts_out.empty() && result.trials.front().ok)
    save_record(result.trials.front().counts_log, spec.counts_out);
  return result;
}

void write_aggregate_csv(const std::string& path,
                         const std::vector<AggregateRow>& table,
                         const std::string& method,
                         const std::string& ensemble) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "shots,median_infidelity,q16,q84,median_volume,method,ensemble\n";
  for (const AggregateRow& row : table)
    out << row.shots << ',' << format_double(row.median_infidelity) << ','
        << format_double(row.q16) << ',' << format_double(row.q84) << ','
        << format_double(row.median_volume) << ',' << method << ','
        << ensemble << '\n';
  if (!out) throw std::runtime_error(path + ": write failed");
}

AggregateTable read_aggregate_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open CSV");
  std::string line;
  if (!std::getline(in, line))
    throw ParseError(path + ":1: empty CSV");
  if (trim(line) != "shots,median_infidelity,q16,q84,median_volume,method,ensemble")
    throw ParseError(path + ":1: unexpected CSV header");

  AggregateTable table;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    const std::vector<std::string> f = split_csv_line(trim(line));
    if (f.size() != 7) throw ParseError(where + ": expected 7 fields");
    AggregateRow row;
    row.shots = parse_long_strict(f[0], where);
    row.median_infidelity = parse_double_strict(f[1], where);
    row.q16 = parse_double_strict(f[2], where);
    row.q84 = parse_double_strict(f[3], where);
    row.median_volume = parse_double_strict(f[4], where);
    if (table.rows.empty()) {
      table.method = f[5];
      table.ensemble = f[6];
    } else if (table.method != f[5] || table.ensemble != f[6]) {
      throw ParseError(where + ": mixed method/ensemble labels in one CSV");
    }
    table.rows.push_back(row);
  }
  if (table.rows.empty()) throw ParseError(path + ": CSV has no data rows");
  return table;
}

void write_trials_csv(const std::string& path,
                      const std::vector<TrialOutcome>& trials) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "trial,iteration,shots,infidelity,volume,ess,resampled\n";
  for (const TrialOutcome& t : trials)
    for (const IterationRecord& rec : t.records)
      out << t.trial << ',' << rec.iteration << ',' << rec.cumulative_shots
          << ',' << format_double(rec.infidelity) << ','
          << format_double(rec.volume) << ',' << format_double(rec.ess) << ','
          << (rec.resampled ? 1 : 0) << '\n';
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::vector<std::vector<IterationRecord>> read_trials_csv(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open CSV");
  std::string line;
  if (!std::getline(in, line))
    throw ParseError(path + ":1: empty CSV");
  if (trim(line) != "trial,iteration,shots,infidelity,volume,ess,resampled")
    throw ParseError(path + ":1: unexpected CSV header");

  std::map<long, std::vector<IterationRecord>> by_trial;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    const std::vector<std::string> f = split_csv_line(trim(line));
    if (f.size() != 7) throw ParseError(where + ": expected 7 fields");
    IterationRecord rec;
    const long trial = parse_long_strict(f[0], where);
    rec.iteration = parse_long_strict(f[1], where);
    rec.cumulative_shots = parse_long_strict(f[2], where);
    rec.infidelity = parse_double_strict(f[3], where);
    rec.volume = parse_double_strict(f[4], where);
    rec.ess = parse_double_strict(f[5], where);
    rec.resampled = parse_long_strict(f[6], where) != 0;
    by_trial[trial].push_back(rec);
  }
  if (by_trial.empty()) throw ParseError(path + ": CSV has no data rows");

  std::vector<std::vector<IterationRecord>> runs;
  runs.reserve(by_trial.size());
  for (auto& [trial, records] : by_trial) runs.push_back(std::move(records));
  return runs;
}

CompareTable compare(const std::vector<AggregateTable>& tables) {
  if (tables.empty()) throw std::invalid_argument("nothing to compare");

  std::set<long> common;
  for (const AggregateRow& row : tables.front().rows) common.insert(row.shots);
  for (std::size_t i = 1; i < tables.size(); ++i) {
    std::set<long> here;
    for (const AggregateRow& row : tables[i].rows) here.insert(row.shots);
    std::set<long> kept;
    std::set_intersection(common.begin(), common.end(), here.begin(),
                          here.end(), std::inserter(kept, kept.begin()));
    common.swap(kept);
  }
  if (common.empty())
    throw std::invalid_argument("compare: shot grids are disjoint");

  CompareTable out;
  out.shots.assign(common.begin(), common.end());
  for (const AggregateTable& table : tables) {
    std::string base = table.method.empty() ? "run" : table.method;
    if (!table.ensemble.empty()) base += "_" + table.ensemble;
    std::string label = base;
    int suffix = 2;
    while (std::find(out.labels.begin(), out.labels.end(), label) !=
           out.labels.end())
      label = base + "_" + std::to_string(suffix++);
    out.labels.push_back(label);

    std::map<long, const AggregateRow*> rows;
    for (const AggregateRow& row : table.rows) rows[row.shots] = &row;
    std::vector<double> infid, vol;
    infid.reserve(out.shots.size());
    vol.reserve(out.shots.size());
    for (long shots : out.shots) {
      infid.push_back(rows.at(shots)->median_infidelity);
      vol.push_back(rows.at(shots)->median_volume);
    }
    out.infidelity.push_back(std::move(infid));
    out.volume.push_back(std::move(vol));
  }
  return out;
}

void write_compare_csv(const std::string& path, const CompareTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "shots";
  for (const std::string& label : table.labels)
    out << ',' << label << "_median_infidelity," << label << "_median_volume";
  out << '\n';
  for (std::size_t r = 0; r < table.shots.size(); ++r) {
    out << table.shots[r];
    for (std::size_t i = 0; i < table.labels.size(); ++i)
      out << ',' << format_double(table.infidelity[i][r]) << ','
          << format_double(table.volume[i][r]);
    out << '\n';
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

namespace {

void apply_key(ExperimentSpec& spec, const std::string& key,
               const std::string& value, const std::string& where) {
  if (key == "method") {
    if (value == "adaptive") spec.method = Method::adaptive;
    else if (value == "static") spec.method = Method::static_pauli;
    else if (value == "sgqt") spec.method = Method::sgqt;
    else throw ParseError(where + ": unknown method `" + value + "`");
  } else if (key == "ensemble") {
    if (value == "pure") spec.ensemble = Ensemble::pure;
    else if (value == "mixed") spec.ensemble = Ensemble::mixed;
    else if (value == "fixed") spec.ensemble = Ensemble::fixed;
    else throw ParseError(where + ": unknown ensemble `" + value + "`");
  } else if (key == "state") {
    std::vector<std::string> parts = split_csv_line(value);
    if (parts.size() != 3)
      throw ParseError(where + ": state needs three comma-separated numbers");
    spec.fixed_state = {parse_double_strict(trim(parts[0]), where),
                        parse_double_strict(trim(parts[1]), where),
                        parse_double_strict(trim(parts[2]), where)};
    spec.ensemble = Ensemble::fixed;
  } else if (key == "trials") {
    spec.trials = parse_long_strict(value, where);
  } else if (key == "seed") {
    spec.run.seed = static_cast<std::uint64_t>(parse_long_strict(value, where));
  } else if (key == "particles") {
    spec.run.particles = parse_long_strict(value, where);
  } else if (key == "shots-per-axis") {
    spec.run.shots_per_axis = parse_long_strict(value, where);
  } else if (key == "iterations") {
    spec.run.iterations = parse_long_strict(value, where);
  } else if (key == "resample-a") {
    spec.run.resample_a = parse_double_strict(value, where);
  } else if (key == "ess-fraction") {
    spec.run.ess_fraction = parse_double_strict(value, where);
  } else if (key == "schedule") {
    if (value == "all-three") spec.run.schedule = Schedule::all_three_axes;
    else if (value == "diagonal") spec.run.schedule = Schedule::diagonal_only;
    else throw ParseError(where + ": unknown schedule `" + value + "`");
  } else if (key == "epsilon") {
    spec.run.epsilon = parse_double_strict(value, where);
  } else if (key == "chi2-s") {
    spec.run.chi2_s = parse_double_strict(value, where);
  } else if (key == "backend") {
    if (value == "ideal") spec.backend.kind = Backend::Kind::ideal;
    else if (value == "depolarizing")
      spec.backend.kind = Backend::Kind::depolarizing;
    else if (value == "replay") spec.backend.kind = Backend::Kind::replay;
    else throw ParseError(where + ": unknown backend `" + value + "`");
  } else if (key == "noise") {
    spec.backend.lambda = parse_double_strict(value, where);
  } else if (key == "counts") {
    spec.backend.counts_path = value;
  } else if (key == "out") {
    spec.out_path = value;
  } else if (key == "trials-out") {
    spec.trials_out = value;
  } else if (key == "counts-out") {
    spec.counts_out = value;
  } else if (key == "gnuplot") {
    if (value == "1" || value == "true") spec.gnuplot = true;
    else if (value == "0" || value == "false") spec.gnuplot = false;
    else throw ParseError(where + ": gnuplot must be 0/1/true/false");
  } else if (key == "spsa-a0") {
    spec.gains.a0 = parse_double_strict(value, where);
  } else if (key == "spsa-bigA") {
    spec.gains.A = parse_double_strict(value, where);
  } else if (key == "spsa-alpha") {
    spec.gains.alpha = parse_double_strict(value, where);
  } else if (key == "spsa-c0") {
    spec.gains.c0 = parse_double_strict(value, where);
  } else if (key == "spsa-gamma") {
    spec.gains.gamma = parse_double_strict(value, where);
  } else {
    throw ParseError(where + ": unknown config key `" + key + "`");
  }
}

}  // namespace

void apply_config_file(const std::string& path, ExperimentSpec& spec) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open config file");
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    const std::string where = path + ":" + std::to_string(line_no);
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos)
      throw ParseError(where + ": expected key=value");
    apply_key(spec, trim(body.substr(0, eq)), trim(body.substr(eq + 1)), where);
  }
}

void write_gnuplot_script(const std::string& script_path,
                          const std::string& csv_path) {
  std::ofstream out(script_path);
  if (!out) throw std::runtime_error(script_path + ": cannot open for writing");
  out << "set datafile separator ','\n"
         "set logscale xy\n"
         "set xlabel 'cumulative shots'\n"
         "set ylabel 'median infidelity'\n"
         "set key top right\n"
         "plot '" << csv_path
      << "' skip 1 using 1:2:3:4 with yerrorlines title 'median (16/84%)'\n";
  if (!out) throw std::runtime_error(script_path + ": write failed");
}

}  // namespace aqt
