// Command-line front end: matrix generation, coherence certification,
// one-step thresholding, orthogonality-condition estimation, Monte Carlo
// sweeps, and the exhaustive baseline. All randomness flows from --seed;
// no entropy is ever taken from the environment.

#include <CLI11.hpp>
#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "ostsel/coherence.hpp"
#include "ostsel/design.hpp"
#include "ostsel/experiment.hpp"
#include "ostsel/matrix_io.hpp"
#include "ostsel/ost.hpp"
#include "ostsel/rng.hpp"
#include "ostsel/signal.hpp"
#include "ostsel/stoc.hpp"
#include "ostsel/version.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

// Seed streams shared with library conventions: a command's --seed S derives
// signal randomness from mix_seed(S, 1) and noise from mix_seed(S, 2).
constexpr std::uint64_t kSignalStream = 1;
constexpr std::uint64_t kNoiseStream = 2;

struct SignalFlags {
  int k = 0;
  std::string value_model = "equal";
  std::string values;   // comma-separated, complex tokens allowed
  std::string support;  // comma-separated 0-based indices
};

void add_signal_flags(CLI::App* cmd, SignalFlags* flags) {
  cmd->add_option("--k", flags->k, "Sparsity for a random-support signal");
  cmd->add_option("--value-model", flags->value_model,
                  "equal | equal-random-sign")
      ->check(CLI::IsMember({"equal", "equal-random-sign"}));
  cmd->add_option("--values", flags->values,
                  "Comma-separated values (a+bi tokens allowed); renormalized");
  cmd->add_option("--support", flags->support,
                  "Comma-separated 0-based support indices, paired with --values");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string::size_type pos = 0;
  while (true) {
    const auto next = text.find(',', pos);
    items.push_back(text.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return items;
}

int parse_index(const std::string& text) {
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno != 0 ||
      v < 0 || v > INT32_MAX) {
    throw std::invalid_argument("cannot parse support index '" + text + "'");
  }
  return static_cast<int>(v);
}

ostsel::SparseSignal build_signal(const SignalFlags& flags, int cols,
                                  std::uint64_t seed) {
  if (!flags.support.empty() || !flags.values.empty()) {
    if (flags.support.empty() || flags.values.empty()) {
      throw std::invalid_argument("--support and --values must be given together");
    }
    std::vector<int> support;
    for (const auto& item : split_list(flags.support)) {
      support.push_back(parse_index(item));
    }
    const auto value_items = split_list(flags.values);
    Eigen::VectorXcd values(static_cast<Eigen::Index>(value_items.size()));
    for (std::size_t i = 0; i < value_items.size(); ++i) {
      values[static_cast<Eigen::Index>(i)] =
          ostsel::parse_complex_token(value_items[i]);
    }
    return ostsel::SparseSignal(cols, std::move(support), std::move(values));
  }
  if (flags.k < 1) {
    throw std::invalid_argument("either --k or --support/--values is required");
  }
  const ostsel::ValueModel model = flags.value_model == "equal"
                                       ? ostsel::ValueModel::kEqual
                                       : ostsel::ValueModel::kEqualRandomSign;
  return ostsel::gen_signal(cols, flags.k, model,
                            ostsel::mix_seed(seed, kSignalStream));
}

ordered_json coherence_json(const ostsel::CoherenceReport& report) {
  ordered_json j;
  j["mu"] = report.mu;
  j["nu"] = report.nu;
  j["cp1_bound"] = report.cp1_bound;
  j["cp2_bound"] = report.cp2_bound;
  j["cp1_pass"] = report.cp1_pass;
  j["cp2_pass"] = report.cp2_pass;
  j["overall_pass"] = report.overall_pass;
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{
      "Coherence certification and one-step thresholding for sparse model "
      "selection"};
  app.set_version_flag("--version", std::string(ostsel::kBuildIdentifier));
  app.require_subcommand(1);

  std::function<void()> action;

  // gen-matrix
  {
    auto* cmd = app.add_subcommand(
        "gen-matrix", "Generate a seeded random design matrix file");
    auto family = std::make_shared<std::string>("gaussian");
    auto n = std::make_shared<int>(0);
    auto c = std::make_shared<int>(0);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto out_path = std::make_shared<std::string>();
    cmd->add_option("--family", *family, "gaussian | rademacher")
        ->check(CLI::IsMember({"gaussian", "rademacher"}));
    cmd->add_option("--n", *n, "Rows (measurements)")->required();
    cmd->add_option("--c", *c, "Columns (ambient dimension)")->required();
    cmd->add_option("--seed", *seed, "Generator seed")->required();
    cmd->add_option("--out", *out_path, "Output matrix file")->required();
    cmd->callback([=, &action] {
      action = [=] {
        const ostsel::DesignMatrix phi =
            *family == "gaussian" ? ostsel::gen_gaussian(*n, *c, *seed)
                                  : ostsel::gen_rademacher(*n, *c, *seed);
        ostsel::write_matrix_file(*out_path, phi);
        ordered_json j;
        j["path"] = *out_path;
        j["n"] = *n;
        j["c"] = *c;
        j["family"] = *family;
        j["seed"] = *seed;
        std::cout << j.dump() << '\n';
      };
    });
  }

  // check-coherence
  {
    auto* cmd = app.add_subcommand(
        "check-coherence",
        "Compute coherence measures and the coherence-property verdict");
    auto matrix_file = std::make_shared<std::string>();
    cmd->add_option("--matrix-file", *matrix_file, "Design matrix file")
        ->required();
    cmd->callback([=, &action] {
      action = [=] {
        const ostsel::DesignMatrix phi = ostsel::read_matrix_file(*matrix_file);
        std::cout << coherence_json(ostsel::check_coherence_property(phi)).dump()
                  << '\n';
      };
    });
  }

  // run-ost
  {
    auto* cmd = app.add_subcommand(
        "run-ost", "Measure a sparse signal and recover its support by "
                   "one-step thresholding");
    auto matrix_file = std::make_shared<std::string>();
    auto sigma2 = std::make_shared<double>(0.0);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto lambda = std::make_shared<double>(0.0);
    auto rule_text = std::make_shared<std::string>();
    auto flags = std::make_shared<SignalFlags>();
    cmd->add_option("--matrix-file", *matrix_file, "Design matrix file")
        ->required();
    cmd->add_option("--sigma2", *sigma2, "Noise variance per entry");
    cmd->add_option("--seed", *seed, "Seed for signal and noise")->required();
    auto* lam = cmd->add_option("--lambda", *lambda, "Fixed threshold (> 0)");
    auto* rul = cmd->add_option("--lambda-rule", *rule_text,
                                "theorem | lemma:<eps> | fixed:<lambda>");
    lam->excludes(rul);
    add_signal_flags(cmd, flags.get());
    cmd->callback([=, &action] {
      action = [=] {
        const ostsel::DesignMatrix phi = ostsel::read_matrix_file(*matrix_file);
        const int cols = static_cast<int>(phi.cols());
        const ostsel::SparseSignal s = build_signal(*flags, cols, *seed);
        double threshold = 0.0;
        std::string rule_used;
        if (*lam) {
          threshold = *lambda;
          rule_used = "fixed";
        } else if (*rul) {
          const ostsel::LambdaRule rule = ostsel::LambdaRule::parse(*rule_text);
          switch (rule.kind) {
            case ostsel::LambdaRule::Kind::kTheorem:
              threshold = ostsel::threshold_from_coherence(
                  ostsel::worst_case_coherence(phi), *sigma2, cols);
              break;
            case ostsel::LambdaRule::Kind::kLemma:
              threshold =
                  ostsel::threshold_from_epsilon(rule.value, *sigma2, cols);
              break;
            case ostsel::LambdaRule::Kind::kFixed:
              threshold = rule.value;
              break;
          }
          rule_used = rule.to_string();
        } else {
          throw std::invalid_argument("one of --lambda or --lambda-rule is required");
        }
        const ostsel::Measurement m = ostsel::measure(
            phi, s, *sigma2, ostsel::mix_seed(*seed, kNoiseStream));
        const ostsel::ModelEstimate est =
            ostsel::one_step_threshold(phi, m, threshold);
        ordered_json j;
        j["n"] = static_cast<int>(phi.rows());
        j["c"] = cols;
        j["k"] = s.sparsity();
        j["sigma2"] = *sigma2;
        j["lambda_rule"] = rule_used;
        j["lambda"] = threshold;
        j["selected"] = est.selected;
        j["support"] = s.sorted_support();
        j["exact_recovery"] = est.selected == s.sorted_support();
        std::cout << j.dump() << '\n';
      };
    });
  }

  // stoc-estimate
  {
    auto* cmd = app.add_subcommand(
        "stoc-estimate",
        "Monte Carlo failure rate of the statistical orthogonality condition");
    auto matrix_file = std::make_shared<std::string>();
    auto k = std::make_shared<int>(0);
    auto epsilon = std::make_shared<double>(0.0);
    auto trials = std::make_shared<int>(0);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto value_model = std::make_shared<std::string>("equal");
    cmd->add_option("--matrix-file", *matrix_file, "Design matrix file")
        ->required();
    cmd->add_option("--k", *k, "Support size")->required();
    cmd->add_option("--epsilon", *epsilon, "Orthogonality tolerance (>= 0)")
        ->required();
    cmd->add_option("--trials", *trials, "Support draws")->required();
    cmd->add_option("--seed", *seed, "Seed")->required();
    cmd->add_option("--value-model", *value_model,
                    "Shape of the fixed coefficient vector z")
        ->check(CLI::IsMember({"equal", "equal-random-sign"}));
    cmd->callback([=, &action] {
      action = [=] {
        const ostsel::DesignMatrix phi = ostsel::read_matrix_file(*matrix_file);
        Eigen::VectorXcd z(*k);
        const double mag = 1.0 / std::sqrt(static_cast<double>(*k));
        ostsel::Rng sign_rng(ostsel::mix_seed(*seed, kSignalStream));
        for (int i = 0; i < *k; ++i) {
          const double v =
              *value_model == "equal-random-sign" ? sign_rng.sign() * mag : mag;
          z[i] = std::complex<double>(v, 0.0);
        }
        const ostsel::StocDeltaEstimate est =
            ostsel::stoc_delta_estimate(phi, *k, z, *epsilon, *trials, *seed);
        const ostsel::CoherenceReport report =
            ostsel::check_coherence_property(phi);
        ordered_json j;
        j["n"] = static_cast<int>(phi.rows());
        j["c"] = static_cast<int>(phi.cols());
        j["k"] = *k;
        j["epsilon"] = *epsilon;
        j["trials"] = est.trials;
        j["delta1_hat"] = est.delta1_hat;
        j["delta2_hat"] = est.delta2_hat;
        j["delta_hat"] = est.delta_hat;
        j["mu"] = report.mu;
        j["nu"] = report.nu;
        if (report.mu > 0.0) {
          j["lemma2_bound"] = ostsel::stoc1_failure_bound(*k, *epsilon, report.mu);
          j["lemma3_bound"] = ostsel::stoc2_failure_bound(
              static_cast<int>(phi.cols()), *epsilon, report.mu);
        } else {
          j["lemma2_bound"] = nullptr;
          j["lemma3_bound"] = nullptr;
        }
        j["hypothesis_holds"] = ostsel::stoc_hypothesis_holds(
            *k, *epsilon, report.nu, static_cast<int>(phi.cols()));
        std::cout << j.dump() << '\n';
      };
    });
  }

  // sweep
  {
    auto* cmd = app.add_subcommand(
        "sweep", "Monte Carlo success-rate sweep over an (N, k, sigma2) grid");
    auto config_path = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>();
    auto threads = std::make_shared<int>(0);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto trials = std::make_shared<int>(0);
    auto per_trial = std::make_shared<bool>(false);
    cmd->add_option("--config", *config_path, "key=value sweep configuration")
        ->required();
    cmd->add_option("--out", *out_dir, "Output directory")->required();
    auto* thr = cmd->add_option("--threads", *threads, "Worker threads");
    auto* sd = cmd->add_option("--seed", *seed, "Override the config seed");
    auto* tr = cmd->add_option("--trials", *trials, "Override trials per cell");
    cmd->add_flag("--per-trial", *per_trial, "Also write per-trial records");
    cmd->callback([=, &action] {
      action = [=] {
        std::ifstream in(*config_path);
        if (!in) {
          throw std::invalid_argument("cannot open config '" + *config_path + "'");
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        ostsel::SweepConfig cfg = ostsel::parse_sweep_config(buffer.str());
        if (*thr) cfg.threads = *threads;
        if (*sd) cfg.master_seed = *seed;
        if (*tr) cfg.trials_per_cell = *trials;
        const ostsel::SweepResult result = ostsel::run_sweep(cfg);
        std::filesystem::create_directories(*out_dir);
        const std::string summary_path =
            (std::filesystem::path(*out_dir) / "summary.csv").string();
        write_text_file(summary_path, ostsel::cells_to_csv(result.cells));
        ordered_json j;
        j["cells"] = result.cells.size();
        j["trials"] = result.trials.size();
        j["summary_csv"] = summary_path;
        if (*per_trial) {
          const std::string trials_path =
              (std::filesystem::path(*out_dir) / "trials.csv").string();
          write_text_file(trials_path, ostsel::trials_to_csv(result.trials));
          j["trials_csv"] = trials_path;
        } else {
          j["trials_csv"] = nullptr;
        }
        std::cout << j.dump() << '\n';
      };
    });
  }

  // oracle
  {
    auto* cmd = app.add_subcommand(
        "oracle", "Exhaustive least-squares baseline on a tiny instance");
    auto matrix_file = std::make_shared<std::string>();
    auto sigma2 = std::make_shared<double>(0.0);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto oracle_k = std::make_shared<int>(0);
    auto flags = std::make_shared<SignalFlags>();
    cmd->add_option("--matrix-file", *matrix_file, "Design matrix file")
        ->required();
    cmd->add_option("--sigma2", *sigma2, "Noise variance per entry");
    cmd->add_option("--seed", *seed, "Seed for signal and noise")->required();
    cmd->add_option("--oracle-k", *oracle_k,
                    "Subset size searched (defaults to the signal sparsity)");
    add_signal_flags(cmd, flags.get());
    cmd->callback([=, &action] {
      action = [=] {
        const ostsel::DesignMatrix phi = ostsel::read_matrix_file(*matrix_file);
        const int cols = static_cast<int>(phi.cols());
        const ostsel::SparseSignal s = build_signal(*flags, cols, *seed);
        const ostsel::Measurement m = ostsel::measure(
            phi, s, *sigma2, ostsel::mix_seed(*seed, kNoiseStream));
        const int k = *oracle_k > 0 ? *oracle_k : s.sparsity();
        const std::vector<int> found = ostsel::oracle_exhaustive(phi, m, k);
        ordered_json j;
        j["n"] = static_cast<int>(phi.rows());
        j["c"] = cols;
        j["k"] = k;
        j["sigma2"] = *sigma2;
        j["oracle_support"] = found;
        j["support"] = s.sorted_support();
        j["oracle_exact"] = found == s.sorted_support();
        std::cout << j.dump() << '\n';
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    action();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

int main(int argc, char** argv) { return run_cli(argc, argv); }
