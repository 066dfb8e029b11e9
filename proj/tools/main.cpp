// Command-line front end: run a single simulation, sweep a scenario grid, or
// poke the assignment solvers with ad-hoc matrices.

#include <atomic>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pullsched/config.hpp"
#include "pullsched/hungarian.hpp"
#include "pullsched/knapsack.hpp"
#include "pullsched/matrix.hpp"
#include "pullsched/metrics.hpp"
#include "pullsched/sim.hpp"

namespace {

using namespace pullsched;

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("bad JSON in " + path + ": " + e.what());
  }
}

std::vector<std::vector<std::string>> load_csv_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open matrix: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    rows.push_back(fields);
  }
  if (rows.empty()) throw std::invalid_argument("empty matrix file: " + path);
  return rows;
}

double parse_cell(const std::string& token, const std::string& path) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad matrix cell \"" + token + "\" in " + path);
  }
}

int cmd_run(const std::string& config_path, const std::string& strategy,
            std::uint64_t seed, const std::string& out_dir,
            const std::string& format) {
  SimConfig cfg = parse_config(load_json(config_path));
  cfg.strategy = parse_strategy(strategy);
  cfg.seed = seed;
  cfg.validate();
  const MetricsReport report = run_simulation(cfg);
  if (format.empty() || format == "csv")
    std::cout << emit_report(report, ReportFormat::kCsv, out_dir).string() << '\n';
  if (format.empty() || format == "json")
    std::cout << emit_report(report, ReportFormat::kJson, out_dir).string() << '\n';
  std::cout << "aggregate_delivery=" << format_double(report.aggregate) << '\n';
  return 0;
}

int cmd_sweep(const std::string& config_path,
              const std::vector<std::string>& strategies,
              const std::vector<int>& rates, const std::vector<int>& windows,
              int seeds, int jobs, const std::string& out_dir) {
  const SimConfig base = parse_config(load_json(config_path));
  if (strategies.empty()) throw std::invalid_argument("sweep: no strategies given");
  if (seeds < 1) throw std::invalid_argument("sweep: --seeds must be >= 1");
  if (jobs < 1) throw std::invalid_argument("sweep: --jobs must be >= 1");
  if (!rates.empty() && base.stream.layers != 1)
    throw std::invalid_argument("sweep: --rates requires a single-layer stream");

  const std::vector<int> rate_axis = rates.empty()
                                         ? std::vector<int>{base.stream.total_rate_kbps()}
                                         : rates;
  const std::vector<int> window_axis =
      windows.empty() ? std::vector<int>{base.window_seconds} : windows;

  std::vector<SimConfig> cells;
  for (const std::string& s : strategies)
    for (int rate : rate_axis)
      for (int window : window_axis)
        for (int seed = 1; seed <= seeds; ++seed) {
          SimConfig cfg = base;
          cfg.strategy = parse_strategy(s);
          if (!rates.empty()) cfg.stream.layer_rate_kbps = {rate};
          cfg.window_seconds = window;
          cfg.seed = static_cast<std::uint64_t>(seed);
          cfg.validate();
          cells.push_back(cfg);
        }

  std::vector<std::vector<CsvRow>> results(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        results[i] = report_rows(run_simulation(cells[i]));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < jobs; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  std::vector<CsvRow> all;
  for (const auto& rows : results) all.insert(all.end(), rows.begin(), rows.end());
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path path = std::filesystem::path(out_dir) / "sweep.csv";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << rows_to_csv(all);
  if (!out) throw std::runtime_error("write failed: " + path.string());
  std::cout << path.string() << '\n';
  return 0;
}

int cmd_solve(const std::string& matrix_path, bool knapsack, int capacity) {
  const auto tokens = load_csv_tokens(matrix_path);
  if (knapsack) {
    if (tokens.size() != 2)
      throw std::invalid_argument(
          "knapsack input needs two rows: values then integer weights");
    std::vector<double> values;
    std::vector<int> weights;
    for (const std::string& t : tokens[0]) values.push_back(parse_cell(t, matrix_path));
    for (const std::string& t : tokens[1])
      weights.push_back(static_cast<int>(parse_cell(t, matrix_path)));
    const KnapsackResult r = knapsack_max(values, weights, capacity);
    std::cout << "selected:";
    for (std::size_t i : r.selected) std::cout << ' ' << i;
    std::cout << "\nvalue: " << format_double(r.value) << '\n';
    return 0;
  }
  const std::size_t real_rows = tokens.size();
  const std::size_t real_cols = tokens[0].size();
  // Rectangular instances are padded to square with forbidden cells; the
  // extra rows or columns simply go unmatched.
  WeightMatrix m(std::max(real_rows, real_cols), std::max(real_rows, real_cols));
  for (std::size_t r = 0; r < real_rows; ++r) {
    if (tokens[r].size() != real_cols)
      throw std::invalid_argument("ragged matrix in " + matrix_path);
    for (std::size_t c = 0; c < real_cols; ++c)
      if (tokens[r][c] != "x" && tokens[r][c] != "X")
        m.set(r, c, parse_cell(tokens[r][c], matrix_path));
  }
  const Matching match = hungarian_max(m);
  double objective = 0.0;
  for (std::size_t r = 0; r < real_rows; ++r) {
    const int c = match.row_to_col[r];
    std::cout << "row " << r << " -> ";
    if (c < 0 || m.is_forbidden(r, static_cast<std::size_t>(c))) {
      std::cout << "none\n";
    } else {
      objective += m.at(r, static_cast<std::size_t>(c));
      std::cout << "col " << c << " ("
                << format_double(m.at(r, static_cast<std::size_t>(c))) << ")\n";
    }
  }
  std::cout << "objective: " << format_double(objective) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chunk-scheduling simulator for pull-based P2P streaming"};
  app.require_subcommand(1);

  std::string config_path;
  std::string strategy;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  std::string format;
  CLI::App* run = app.add_subcommand("run", "run one simulation");
  run->add_option("--config", config_path, "scenario JSON")->required();
  run->add_option("--strategy", strategy, "assched|nassched|rnd|lrf|rr")->required();
  run->add_option("--seed", seed, "run seed")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--format", format, "csv or json (default: both)")
      ->check(CLI::IsMember({"csv", "json"}));

  std::vector<std::string> strategies;
  std::vector<int> rates;
  std::vector<int> windows;
  int seeds = 5;
  int jobs = 1;
  CLI::App* sweep = app.add_subcommand("sweep", "run a scenario grid");
  sweep->add_option("--config", config_path, "base scenario JSON")->required();
  sweep->add_option("--strategies", strategies, "strategy list")
      ->required()
      ->delimiter(',');
  sweep->add_option("--rates", rates, "stream rates in Kbps (single-layer only)")
      ->delimiter(',');
  sweep->add_option("--windows", windows, "window sizes in seconds")->delimiter(',');
  sweep->add_option("--seeds", seeds, "number of seeds (1..n)");
  sweep->add_option("--jobs", jobs, "parallel runs");
  sweep->add_option("--out", out_dir, "output directory")->required();

  std::string matrix_path;
  bool knapsack = false;
  int capacity = 0;
  CLI::App* solve = app.add_subcommand("solve", "solve an ad-hoc instance");
  solve->add_option("--matrix", matrix_path, "CSV matrix; `x` marks a forbidden cell")
      ->required();
  solve->add_flag("--knapsack", knapsack, "treat input as values/weights rows");
  solve->add_option("--capacity", capacity, "knapsack capacity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, strategy, seed, out_dir, format);
    if (sweep->parsed())
      return cmd_sweep(config_path, strategies, rates, windows, seeds, jobs, out_dir);
    return cmd_solve(matrix_path, knapsack, capacity);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
