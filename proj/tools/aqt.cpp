// Command-line front end: `run` executes a batch of seeded tomography
// trials and writes aggregate CSV; `replay` re-runs the estimator on
// recorded counts; `compare` joins aggregate CSVs on the shot grid;
// `summarize` rebuilds aggregates from a per-trial CSV.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aqt/errors.hpp"
#include "aqt/harness.hpp"

namespace {

struct RunFlags {
  std::string config;
  std::string method;
  std::string ensemble;
  std::string state;
  std::string schedule;
  std::string backend;
  std::string counts;
  std::string out;
  std::string trials_out;
  std::string counts_out;
  long seed = -1;
  long trials = -1;
  long shots_per_axis = -1;
  long iterations = -1;
  long particles = -1;
  double resample_a = -1.0;
  double ess_fraction = -1.0;
  double noise = -1.0;
  double epsilon = -1.0;
  double chi2_s = -1.0;
  bool gnuplot = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config, "flat key=value config file");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--method", f.method, "adaptive | static | sgqt");
  cmd->add_option("--ensemble", f.ensemble, "pure | mixed | fixed");
  cmd->add_option("--state", f.state, "fixed true state as x,y,z");
  cmd->add_option("--trials", f.trials, "independent trials");
  cmd->add_option("--shots-per-axis", f.shots_per_axis,
                  "shots per measured axis (and per SGQT step)");
  cmd->add_option("--iterations", f.iterations, "iterations including prior");
  cmd->add_option("--particles", f.particles, "particle count K");
  cmd->add_option("--resample-a", f.resample_a, "Liu-West shrinkage a");
  cmd->add_option("--ess-fraction", f.ess_fraction,
                  "resample when ESS < fraction * K");
  cmd->add_option("--schedule", f.schedule, "all-three | diagonal");
  cmd->add_option("--backend", f.backend, "ideal | depolarizing | replay");
  cmd->add_option("--noise", f.noise, "depolarizing strength lambda");
  cmd->add_option("--counts", f.counts, "counts record file for replay");
  cmd->add_option("--epsilon", f.epsilon, "prior variance floor");
  cmd->add_option("--chi2-s", f.chi2_s, "credible-region chi-square quantile");
  cmd->add_option("--out", f.out, "aggregate CSV path");
  cmd->add_option("--trials-out", f.trials_out, "per-trial CSV path");
  cmd->add_option("--save-counts", f.counts_out,
                  "record trial 0's measurements to this file");
  cmd->add_flag("--gnuplot", f.gnuplot, "also emit <out>.gp plot script");
}

// CLI flags override whatever the config file set.
void overlay(aqt::ExperimentSpec& spec, const CLI::App* cmd, const RunFlags& f) {
  using aqt::ParseError;
  auto given = [cmd](const std::string& name) {
    return cmd->count(name) > 0;
  };

  if (given("--method")) {
    if (f.method == "adaptive") spec.method = aqt::Method::adaptive;
    else if (f.method == "static") spec.method = aqt::Method::static_pauli;
    else if (f.method == "sgqt") spec.method = aqt::Method::sgqt;
    else throw ParseError("--method: unknown method `" + f.method + "`");
  }
  if (given("--ensemble")) {
    if (f.ensemble == "pure") spec.ensemble = aqt::Ensemble::pure;
    else if (f.ensemble == "mixed") spec.ensemble = aqt::Ensemble::mixed;
    else if (f.ensemble == "fixed") spec.ensemble = aqt::Ensemble::fixed;
    else throw ParseError("--ensemble: unknown ensemble `" + f.ensemble + "`");
  }
  if (given("--state")) {
    double x = 0, y = 0, z = 0;
    char tail = 0;
    if (std::sscanf(f.state.c_str(), "%lf,%lf,%lf%c", &x, &y, &z, &tail) != 3)
      throw ParseError("--state: expected x,y,z");
    spec.fixed_state = {x, y, z};
    spec.ensemble = aqt::Ensemble::fixed;
  }
  if (given("--schedule")) {
    if (f.schedule == "all-three")
      spec.run.schedule = aqt::Schedule::all_three_axes;
    else if (f.schedule == "diagonal")
      spec.run.schedule = aqt::Schedule::diagonal_only;
    else throw ParseError("--schedule: unknown schedule `" + f.schedule + "`");
  }
  if (given("--backend")) {
    if (f.backend == "ideal") spec.backend.kind = aqt::Backend::Kind::ideal;
    else if (f.backend == "depolarizing")
      spec.backend.kind = aqt::Backend::Kind::depolarizing;
    else if (f.backend == "replay")
      spec.backend.kind = aqt::Backend::Kind::replay;
    else throw ParseError("--backend: unknown backend `" + f.backend + "`");
  }
  if (given("--seed")) spec.run.seed = static_cast<std::uint64_t>(f.seed);
  if (given("--trials")) spec.trials = f.trials;
  if (given("--shots-per-axis")) spec.run.shots_per_axis = f.shots_per_axis;
  if (given("--iterations")) spec.run.iterations = f.iterations;
  if (given("--particles")) spec.run.particles = f.particles;
  if (given("--resample-a")) spec.run.resample_a = f.resample_a;
  if (given("--ess-fraction")) spec.run.ess_fraction = f.ess_fraction;
  if (given("--noise")) spec.backend.lambda = f.noise;
  if (given("--counts")) spec.backend.counts_path = f.counts;
  if (given("--epsilon")) spec.run.epsilon = f.epsilon;
  if (given("--chi2-s")) spec.run.chi2_s = f.chi2_s;
  if (given("--out")) spec.out_path = f.out;
  if (given("--trials-out")) spec.trials_out = f.trials_out;
  if (given("--save-counts")) spec.counts_out = f.counts_out;
  if (f.gnuplot) spec.gnuplot = true;
}

int execute(const aqt::ExperimentSpec& spec) {
  const aqt::ExperimentResult result = aqt::run_experiment(spec);
  for (const aqt::TrialOutcome& t : result.trials)
    if (!t.ok)
      std::fprintf(stderr, "warning: trial %ld failed: %s\n", t.trial,
                   t.error.c_str());
  std::printf("%zu/%ld trials ok over %zu grid points",
              result.trials.size() - static_cast<std::size_t>(result.failed),
              spec.trials, result.table.size());
  if (!result.table.empty())
    std::printf("; final median infidelity %.6g at %ld shots",
                result.table.back().median_infidelity,
                result.table.back().shots);
  std::printf("\n");
  if (10 * result.failed > spec.trials) {
    std::fprintf(stderr, "error: %ld of %ld trials failed (over 10%%)\n",
                 result.failed, spec.trials);
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive Bayesian qubit tomography"};
  app.require_subcommand(1);

  RunFlags run_flags;
  CLI::App* run_cmd =
      app.add_subcommand("run", "run a batch of seeded tomography trials");
  add_run_flags(run_cmd, run_flags);

  RunFlags replay_flags;
  CLI::App* replay_cmd = app.add_subcommand(
      "replay", "re-run the estimator on a recorded counts file");
  add_run_flags(replay_cmd, replay_flags);

  std::vector<std::string> compare_in;
  std::string compare_out;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "join aggregate CSVs on the shot grid");
  compare_cmd->add_option("--in", compare_in, "aggregate CSV inputs")
      ->required()
      ->expected(-1);
  compare_cmd->add_option("--out", compare_out, "joined CSV path");

  std::string summarize_in, summarize_out;
  CLI::App* summarize_cmd = app.add_subcommand(
      "summarize", "aggregate a per-trial CSV into medians and quantiles");
  summarize_cmd->add_option("--in", summarize_in, "per-trial CSV")->required();
  summarize_cmd->add_option("--out", summarize_out, "aggregate CSV path");
  std::string summarize_method = "adaptive", summarize_ensemble = "fixed";
  summarize_cmd->add_option("--method", summarize_method,
                            "method label for the output rows");
  summarize_cmd->add_option("--ensemble", summarize_ensemble,
                            "ensemble label for the output rows");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed() || replay_cmd->parsed()) {
      const bool is_replay = replay_cmd->parsed();
      const RunFlags& flags = is_replay ? replay_flags : run_flags;
      const CLI::App* cmd = is_replay ? replay_cmd : run_cmd;

      aqt::ExperimentSpec spec;
      if (is_replay) {
        spec.backend.kind = aqt::Backend::Kind::replay;
        spec.trials = 1;
      }
      if (!flags.config.empty()) aqt::apply_config_file(flags.config, spec);
      overlay(spec, cmd, flags);
      if (is_replay && spec.backend.kind != aqt::Backend::Kind::replay)
        throw aqt::ParseError("replay subcommand requires the replay backend");
      return execute(spec);
    }
    if (compare_cmd->parsed()) {
      std::vector<aqt::AggregateTable> tables;
      tables.reserve(compare_in.size());
      for (const std::string& path : compare_in)
        tables.push_back(aqt::read_aggregate_csv(path));
      const aqt::CompareTable joined = aqt::compare(tables);
      if (!compare_out.empty()) aqt::write_compare_csv(compare_out, joined);
      std::printf("joined %zu tables on %zu common grid points\n",
                  tables.size(), joined.shots.size());
      return 0;
    }
    if (summarize_cmd->parsed()) {
      const auto runs = aqt::read_trials_csv(summarize_in);
      const auto table = aqt::summarize(runs);
      if (!summarize_out.empty())
        aqt::write_aggregate_csv(summarize_out, table, summarize_method,
                                 summarize_ensemble);
      std::printf("aggregated %zu runs over %zu grid points\n", runs.size(),
                  table.size());
      return 0;
    }
  } catch (const aqt::ParseError& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 2;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}
