#include <filesystem>
#include <fstream>
#include <ostream>

#include "artifacts.hpp"
#include "ploco/belief/training.hpp"
#include "ploco/cli/cli.hpp"
#include "ploco/error.hpp"
#include "subcommands.hpp"

namespace ploco::cli {
namespace {

namespace fs = std::filesystem;
using namespace ploco::belief;

constexpr double kDenoiseRatio = 0.5;
constexpr double kDenoiseTimesteps = 2e5;
constexpr double kImitationRatio = 0.1;
constexpr int kMaxDistillEpochs = 100;

struct Run {
  fs::path dir;
  std::vector<EpochMetrics> history;
  nlohmann::json summary;
};

Run load_run(const std::string& arg) {
  fs::path p(arg);
  Run run;
  run.dir = fs::is_directory(p) ? p : p.parent_path();
  const fs::path csv = fs::is_directory(p) ? p / "metrics.csv" : p;
  std::ifstream in(csv);
  if (!in) throw FormatError("cannot read metrics " + csv.string());
  run.history = read_metrics_csv(in);
  if (run.history.empty()) throw FormatError(csv.string() + ": no epochs recorded");
  run.summary = read_json_file(run.dir / "run.json");
  for (const char* key : {"kind", "initial", "best", "gate_by_noise", "train_timesteps", "epochs"}) {
    if (!run.summary.contains(key)) throw FormatError((run.dir / "run.json").string() + ": missing '" + key + "'");
  }
  return run;
}

nlohmann::json criterion(int id, const std::string& name) {
  return {{"id", id}, {"name", name}, {"status", "not_evaluated"},
          {"note", "checked by the ploco_acceptance test binary"}};
}

void plot_run(const Run& run, const fs::path& out_dir, const std::string& prefix, std::vector<fs::path>& files) {
  Series train{"train loss", {}, {}}, held{"held-out loss", {}, {}};
  Series rec{"reconstruction MSE", {}, {}}, base{"noisy input MSE", {}, {}}, imit{"imitation MSE", {}, {}};
  Series gate{"mean gate", {}, {}};
  for (const EpochMetrics& m : run.history) {
    const double e = m.epoch;
    train.x.push_back(e), train.y.push_back(m.train_loss);
    held.x.push_back(e), held.y.push_back(m.heldout.loss);
    rec.x.push_back(e), rec.y.push_back(m.heldout.reconstruction_mse);
    base.x.push_back(e), base.y.push_back(m.heldout.noisy_baseline_mse);
    imit.x.push_back(e), imit.y.push_back(m.heldout.imitation_mse);
    gate.x.push_back(e), gate.y.push_back(m.heldout.mean_gate);
  }
  auto emit = [&](const std::string& name, const std::string& svg) {
    const fs::path p = out_dir / (prefix + name);
    write_text(p, svg);
    files.push_back(p);
  };
  emit("loss.svg", svg_line_chart(prefix + "loss", "epoch", "loss", {train, held}, true));
  emit("errors.svg", svg_line_chart(prefix + "held-out errors", "epoch", "MSE", {rec, base, imit}, true));
  emit("gate.svg", svg_line_chart(prefix + "mean gate activation", "epoch", "alpha", {gate}, false));
  std::vector<std::string> labels;
  std::vector<double> values;
  for (const auto& [mode, entry] : run.summary["gate_by_noise"].items()) {
    labels.push_back(mode);
    values.push_back(entry.at("mean_gate").get<double>());
  }
  emit("gate_by_noise.svg", svg_bar_chart(prefix + "mean gate by noise profile", labels, values));
}

}  // namespace

int run_report(const ReportOptions& o, std::ostream& out) {
  std::vector<Run> runs;
  for (const std::string& m : o.metrics) runs.push_back(load_run(m));

  std::vector<nlohmann::json> criteria{
      criterion(1, "terrain contract suite"),        criterion(2, "gait clock suite"),
      criterion(3, "reward suite"),                  criterion(4, "gradient verification"),
      criterion(5, "denoising experiment"),          criterion(6, "gate behavior"),
      criterion(7, "distillation plumbing"),         criterion(8, "command sampler"),
      criterion(9, "determinism")};
  auto set = [&](int id, bool pass, nlohmann::json detail) {
    auto& c = criteria[static_cast<std::size_t>(id - 1)];
    c["status"] = pass ? "pass" : "fail";
    c.erase("note");
    c["detail"] = std::move(detail);
  };

  const fs::path out_dir(o.out);
  fs::create_directories(out_dir);
  std::vector<fs::path> files;
  for (const Run& run : runs) {
    const std::string kind = run.summary["kind"].get<std::string>();
    const EvalMetrics best = run.summary["best"].get<EvalMetrics>();
    const EvalMetrics initial = run.summary["initial"].get<EvalMetrics>();
    plot_run(run, out_dir, kind + "_", files);
    if (kind == "train-denoiser") {
      const double steps = run.summary["train_timesteps"].get<double>();
      const double ratio = best.reconstruction_mse / best.noisy_baseline_mse;
      set(5, ratio <= kDenoiseRatio && steps >= kDenoiseTimesteps,
          {{"reconstruction_mse", best.reconstruction_mse},
           {"noisy_baseline_mse", best.noisy_baseline_mse},
           {"ratio", ratio},
           {"threshold", kDenoiseRatio},
           {"train_timesteps", steps}});
      const double noisy = run.summary["gate_by_noise"].at("noisy").at("mean_gate").get<double>();
      const double nominal = run.summary["gate_by_noise"].at("nominal").at("mean_gate").get<double>();
      set(6, noisy < nominal, {{"mean_gate_noisy", noisy}, {"mean_gate_nominal", nominal}});
    } else if (kind == "distill") {
      const double ratio = best.imitation_mse / initial.imitation_mse;
      const int epochs = run.summary["epochs"].get<int>();
      set(7, ratio <= kImitationRatio && epochs <= kMaxDistillEpochs,
          {{"imitation_mse", best.imitation_mse},
           {"initial_imitation_mse", initial.imitation_mse},
           {"ratio", ratio},
           {"threshold", kImitationRatio},
           {"epochs", epochs}});
    } else {
      throw FormatError("unknown run kind '" + kind + "'");
    }
  }

  bool failed = false;
  for (const auto& c : criteria) {
    const std::string status = c["status"].get<std::string>();
    failed = failed || status == "fail";
    out << "criterion " << c["id"].get<int>() << " (" << c["name"].get<std::string>() << "): " << status << "\n";
  }
  const fs::path summary = out_dir / "summary.json";
  write_json(summary, {{"criteria", criteria}, {"passed", !failed}});
  files.push_back(summary);
  write_manifest(out_dir / "manifest.json", "report", {{"metrics", o.metrics}}, 0, files);
  return failed ? kExitAcceptanceFailure : kExitOk;
}

}  // namespace ploco::cli
