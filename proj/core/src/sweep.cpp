#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ostsel/experiment.hpp"
#include "ostsel/matrix_io.hpp"
#include "ostsel/rng.hpp"

namespace ostsel {

namespace {

constexpr std::uint64_t kMatrixStream = 0x6d61747269780000ULL;
constexpr std::uint64_t kTrialStream = 0x747269616c000000ULL;

void parallel_for(long count, int threads, const std::function<void(long)>& fn) {
  const int workers =
      static_cast<int>(std::max<long>(1, std::min<long>(threads, count)));
  if (workers <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const long begin = count * w / workers;
    const long end = count * (w + 1) / workers;
    pool.emplace_back([&, begin, end] {
      try {
        for (long i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string::size_type pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    parts.push_back(s.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return parts;
}

long parse_long(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno != 0) {
    throw std::invalid_argument("cannot parse integer for " + what + ": '" + s + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno != 0) {
    throw std::invalid_argument("cannot parse seed for " + what + ": '" + s + "'");
  }
  return static_cast<std::uint64_t>(v);
}

double parse_double(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) {
    throw std::invalid_argument("cannot parse number for " + what + ": '" + s + "'");
  }
  return v;
}

bool parse_bool(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  throw std::invalid_argument("cannot parse flag for " + what + ": '" + s + "'");
}

std::string fmt_g10(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

constexpr const char* kCellHeader =
    "N,C,k,sigma2,mu,nu,lambda,trials,successes,success_rate,stderr,"
    "theorem2_pass,cp_pass";

constexpr const char* kTrialHeader =
    "N,C,k,sigma2,mu,nu,lambda,alpha_min,snr_min,mar,success,noise_event,"
    "stoc_event,seed";

}  // namespace

LambdaRule LambdaRule::parse(const std::string& text) {
  const std::string t = trim(text);
  LambdaRule rule;
  if (t == "theorem") {
    rule.kind = Kind::kTheorem;
    return rule;
  }
  if (t.rfind("lemma:", 0) == 0) {
    rule.kind = Kind::kLemma;
    rule.value = parse_double(t.substr(6), "lambda_rule epsilon");
    if (rule.value < 0.0) throw std::invalid_argument("lemma epsilon must be >= 0");
    return rule;
  }
  if (t.rfind("fixed:", 0) == 0) {
    rule.kind = Kind::kFixed;
    rule.value = parse_double(t.substr(6), "lambda_rule lambda");
    if (!(rule.value > 0.0)) throw std::invalid_argument("fixed lambda must be > 0");
    return rule;
  }
  throw std::invalid_argument(
      "lambda_rule must be 'theorem', 'lemma:<epsilon>', or 'fixed:<lambda>'");
}

std::string LambdaRule::to_string() const {
  switch (kind) {
    case Kind::kTheorem:
      return "theorem";
    case Kind::kLemma:
      return "lemma:" + fmt_g10(value);
    case Kind::kFixed:
      return "fixed:" + fmt_g10(value);
  }
  return "";
}

SweepConfig parse_sweep_config(const std::string& text) {
  SweepConfig cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line is not key=value: '" + t + "'");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key == "family") {
      if (value == "gaussian") {
        cfg.family = MatrixFamily::kGaussian;
      } else if (value == "rademacher") {
        cfg.family = MatrixFamily::kRademacher;
      } else if (value == "file") {
        cfg.family = MatrixFamily::kFile;
      } else {
        throw std::invalid_argument("unknown matrix family '" + value + "'");
      }
    } else if (key == "matrix_file") {
      cfg.matrix_file = value;
    } else if (key == "C") {
      cfg.cols = static_cast<int>(parse_long(value, "C"));
    } else if (key == "N") {
      cfg.n_list.clear();
      for (const auto& item : split(value, ','))
        cfg.n_list.push_back(static_cast<int>(parse_long(item, "N")));
    } else if (key == "k") {
      cfg.k_list.clear();
      for (const auto& item : split(value, ','))
        cfg.k_list.push_back(static_cast<int>(parse_long(item, "k")));
    } else if (key == "sigma2") {
      cfg.sigma2_list.clear();
      for (const auto& item : split(value, ','))
        cfg.sigma2_list.push_back(parse_double(item, "sigma2"));
    } else if (key == "value_model") {
      if (value == "equal") {
        cfg.value_model = ValueModel::kEqual;
      } else if (value == "equal-random-sign") {
        cfg.value_model = ValueModel::kEqualRandomSign;
      } else {
        throw std::invalid_argument("unknown value_model '" + value + "'");
      }
    } else if (key == "trials") {
      cfg.trials_per_cell = static_cast<int>(parse_long(value, "trials"));
    } else if (key == "seed") {
      cfg.master_seed = parse_u64(value, "seed");
    } else if (key == "lambda_rule") {
      cfg.lambda_rule = LambdaRule::parse(value);
    } else if (key == "record_stoc") {
      cfg.record_stoc = parse_bool(value, "record_stoc");
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(parse_long(value, "threads"));
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  return cfg;
}

namespace {

struct Cell {
  int n = 0;
  int k = 0;
  double sigma2 = 0.0;
  std::shared_ptr<const DesignMatrix> matrix;
  CoherenceReport report;
  double lambda = 0.0;
};

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
  if (cfg.n_list.empty() || cfg.k_list.empty() || cfg.sigma2_list.empty()) {
    throw std::invalid_argument("sweep grid must be non-empty");
  }
  if (cfg.trials_per_cell < 1) {
    throw std::invalid_argument("trials_per_cell must be >= 1");
  }
  if (cfg.threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (cfg.record_stoc && cfg.lambda_rule.kind != LambdaRule::Kind::kLemma) {
    throw std::invalid_argument(
        "record_stoc needs lambda_rule = lemma:<epsilon> to define the tolerance");
  }

  std::shared_ptr<const DesignMatrix> file_matrix;
  CoherenceReport file_report;
  int cols = cfg.cols;
  if (cfg.family == MatrixFamily::kFile) {
    if (cfg.matrix_file.empty()) {
      throw std::invalid_argument("family = file requires matrix_file");
    }
    file_matrix = std::make_shared<DesignMatrix>(read_matrix_file(cfg.matrix_file));
    file_report = check_coherence_property(*file_matrix);
    cols = static_cast<int>(file_matrix->cols());
    for (int n : cfg.n_list) {
      if (n != file_matrix->rows()) {
        throw std::invalid_argument(
            "grid N = " + std::to_string(n) + " does not match matrix rows " +
            std::to_string(file_matrix->rows()));
      }
    }
  }
  if (cols < 2) throw std::invalid_argument("C must be >= 2");

  std::vector<Cell> cells;
  for (int n : cfg.n_list) {
    for (int k : cfg.k_list) {
      for (double sigma2 : cfg.sigma2_list) {
        if (k < 1 || k > cols) throw std::invalid_argument("grid k out of [1, C]");
        if (sigma2 < 0.0) throw std::invalid_argument("grid sigma2 must be >= 0");
        Cell cell;
        cell.n = n;
        cell.k = k;
        cell.sigma2 = sigma2;
        cells.push_back(cell);
      }
    }
  }

  // Phase 1: per-cell matrix and coherence certificate.
  parallel_for(static_cast<long>(cells.size()), cfg.threads, [&](long ci) {
    Cell& cell = cells[ci];
    const std::uint64_t matrix_seed =
        mix_seed(mix_seed(cfg.master_seed, kMatrixStream),
                 static_cast<std::uint64_t>(ci));
    switch (cfg.family) {
      case MatrixFamily::kGaussian:
        cell.matrix = std::make_shared<DesignMatrix>(
            gen_gaussian(cell.n, cols, matrix_seed));
        break;
      case MatrixFamily::kRademacher:
        cell.matrix = std::make_shared<DesignMatrix>(
            gen_rademacher(cell.n, cols, matrix_seed));
        break;
      case MatrixFamily::kFile:
        cell.matrix = file_matrix;
        break;
    }
    cell.report = cfg.family == MatrixFamily::kFile
                      ? file_report
                      : check_coherence_property(*cell.matrix);
    switch (cfg.lambda_rule.kind) {
      case LambdaRule::Kind::kTheorem:
        cell.lambda = threshold_from_coherence(cell.report.mu, cell.sigma2, cols);
        break;
      case LambdaRule::Kind::kLemma:
        cell.lambda = threshold_from_epsilon(cfg.lambda_rule.value, cell.sigma2, cols);
        break;
      case LambdaRule::Kind::kFixed:
        cell.lambda = cfg.lambda_rule.value;
        break;
    }
  });

  // Phase 2: all trials across all cells, statically partitioned.
  const long trials_per_cell = cfg.trials_per_cell;
  const long total = static_cast<long>(cells.size()) * trials_per_cell;
  SweepResult result;
  result.trials.resize(total);
  const std::uint64_t trial_root = mix_seed(cfg.master_seed, kTrialStream);
  parallel_for(total, cfg.threads, [&](long slot) {
    const long ci = slot / trials_per_cell;
    const long t = slot % trials_per_cell;
    const Cell& cell = cells[ci];
    const std::uint64_t trial_seed =
        mix_seed(trial_root, (static_cast<std::uint64_t>(ci) << 32) ^
                                 static_cast<std::uint64_t>(t));
    const SparseSignal s =
        gen_signal(cols, cell.k, cfg.value_model, mix_seed(trial_seed, 1));
    TrialContext ctx;
    ctx.mu = cell.report.mu;
    ctx.nu = cell.report.nu;
    if (cfg.record_stoc) ctx.stoc_epsilon = cfg.lambda_rule.value;
    TrialRecord rec = run_trial(*cell.matrix, s, cell.sigma2, cell.lambda,
                                mix_seed(trial_seed, 2), ctx);
    rec.seed = trial_seed;
    result.trials[slot] = std::move(rec);
  });

  // Phase 3: ordered aggregation.
  result.cells.reserve(cells.size());
  for (long ci = 0; ci < static_cast<long>(cells.size()); ++ci) {
    const Cell& cell = cells[ci];
    CellSummary summary;
    summary.n = cell.n;
    summary.cols = cols;
    summary.k = cell.k;
    summary.sigma2 = cell.sigma2;
    summary.mu = cell.report.mu;
    summary.nu = cell.report.nu;
    summary.lambda = cell.lambda;
    summary.trials = trials_per_cell;
    for (long t = 0; t < trials_per_cell; ++t) {
      summary.successes += result.trials[ci * trials_per_cell + t].success;
    }
    summary.success_rate =
        static_cast<double>(summary.successes) / static_cast<double>(summary.trials);
    summary.std_error = std::sqrt(summary.success_rate *
                                  (1.0 - summary.success_rate) /
                                  static_cast<double>(summary.trials));
    const double amin = result.trials[ci * trials_per_cell].alpha_min;
    summary.theorem2_pass =
        recovery_predicate(cell.k, cell.n, cols, amin, cell.sigma2, cell.report.mu)
            .pass;
    summary.cp_pass = cell.report.overall_pass;
    result.cells.push_back(summary);
  }
  return result;
}

std::string cells_to_csv(const std::vector<CellSummary>& cells) {
  std::string out = kCellHeader;
  out += '\n';
  for (const auto& c : cells) {
    out += std::to_string(c.n) + ',' + std::to_string(c.cols) + ',' +
           std::to_string(c.k) + ',' + fmt_g10(c.sigma2) + ',' + fmt_g10(c.mu) +
           ',' + fmt_g10(c.nu) + ',' + fmt_g10(c.lambda) + ',' +
           std::to_string(c.trials) + ',' + std::to_string(c.successes) + ',' +
           fmt_g10(c.success_rate) + ',' + fmt_g10(c.std_error) + ',' +
           (c.theorem2_pass ? "1" : "0") + ',' + (c.cp_pass ? "1" : "0") + '\n';
  }
  return out;
}

std::vector<CellSummary> cells_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kCellHeader) {
    throw std::invalid_argument("missing or unexpected CSV header");
  }
  std::vector<CellSummary> cells;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto fields = split(trim(line), ',');
    if (fields.size() != 13) {
      throw std::invalid_argument("expected 13 CSV fields, got " +
                                  std::to_string(fields.size()));
    }
    CellSummary c;
    c.n = static_cast<int>(parse_long(fields[0], "N"));
    c.cols = static_cast<int>(parse_long(fields[1], "C"));
    c.k = static_cast<int>(parse_long(fields[2], "k"));
    c.sigma2 = parse_double(fields[3], "sigma2");
    c.mu = parse_double(fields[4], "mu");
    c.nu = parse_double(fields[5], "nu");
    c.lambda = parse_double(fields[6], "lambda");
    c.trials = parse_long(fields[7], "trials");
    c.successes = parse_long(fields[8], "successes");
    c.success_rate = parse_double(fields[9], "success_rate");
    c.std_error = parse_double(fields[10], "stderr");
    c.theorem2_pass = parse_bool(fields[11], "theorem2_pass");
    c.cp_pass = parse_bool(fields[12], "cp_pass");
    cells.push_back(c);
  }
  return cells;
}

std::string trials_to_csv(const std::vector<TrialRecord>& trials) {
  std::string out = kTrialHeader;
  out += '\n';
  for (const auto& t : trials) {
    out += std::to_string(t.n) + ',' + std::to_string(t.cols) + ',' +
           std::to_string(t.k) + ',' + fmt_g10(t.sigma2) + ',' + fmt_g10(t.mu) +
           ',' + fmt_g10(t.nu) + ',' + fmt_g10(t.lambda) + ',' +
           fmt_g10(t.alpha_min) + ',' + fmt_g10(t.snr_min) + ',' +
           fmt_g10(t.mar) + ',' + (t.success ? "1" : "0") + ',' +
           (t.noise_event ? "1" : "0") + ',' +
           (t.stoc_event ? (*t.stoc_event ? "1" : "0") : "") + ',' +
           std::to_string(t.seed) + '\n';
  }
  return out;
}

}  // namespace ostsel
