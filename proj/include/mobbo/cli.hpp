#pragma once

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mobbo/engine.hpp"
#include "mobbo/error.hpp"
#include "mobbo/graph.hpp"
#include "mobbo/objectives.hpp"
#include "mobbo/overlap.hpp"
#include "mobbo/report.hpp"

namespace mobbo::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 2,
  kInputError = 3,
  kRuntimeError = 4,
};

struct NetworkArgs {
  std::string edges;
  std::string attributes;
  bool drop_isolated = false;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--edges", edges, "Edge list: one 'u v' pair per line")->required();
    cmd.add_option("--attributes", attributes, "Node attribute CSV with header row")->required();
    cmd.add_flag("--drop-isolated", drop_isolated, "Drop nodes without edges instead of failing");
  }

  AttributedNetwork load() const { return load_network_files(edges, attributes, drop_isolated); }
};

inline std::vector<double> parse_alphas(const std::string& csv) {
  std::vector<double> out;
  for (const auto& cell : detail::split_csv(csv)) {
    try {
      std::size_t used = 0;
      double a = std::stod(cell, &used);
      if (used != cell.size()) throw std::invalid_argument(cell);
      out.push_back(a);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--alphas", "not a number: '" + cell + "'");
    }
  }
  if (out.empty()) throw CLI::ValidationError("--alphas", "no values");
  return out;
}

// Output paths derived from --out: "<stem>.json" -> "<stem>.report.tsv" and
// "<stem>.trace.tsv".
inline std::string sibling_path(const std::string& out, const std::string& suffix) {
  std::string stem = out;
  if (stem.size() > 5 && stem.compare(stem.size() - 5, 5, ".json") == 0) stem.resize(stem.size() - 5);
  return stem + suffix;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  f << content;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

struct DetectArgs {
  NetworkArgs network;
  std::string mode = "mobbo-ocd";
  std::uint64_t seed = 0;
  std::size_t habitats = 100;
  std::size_t generations = 100;
  std::string alphas = "0.5,1,1.5";
  std::size_t runs = 1;
  double threshold = 0.1;
  bool parallel = false;
  std::string out;
  bool trace = false;
};

inline int cmd_detect(const DetectArgs& args, std::ostream& out, std::ostream& err) {
  const AttributedNetwork net = args.network.load();

  RunConfig config;
  config.mode = *parse_mode(args.mode);
  config.seed = args.seed;
  config.habitats = args.habitats;
  config.generations = args.generations;
  config.alphas = parse_alphas(args.alphas);
  config.lc_threshold = args.threshold;
  config.parallel = args.parallel;
  config.validate();

  std::vector<RunResult> results;
  std::vector<RunSummary> summaries;
  double wall = 0.0;
  for (std::size_t r = 0; r < args.runs; ++r) {
    RunConfig rc = config;
    rc.seed = config.seed + r;
    results.push_back(run(net, rc));
    summaries.push_back(summarize_run(results.back()));
    wall += results.back().wall_seconds;
  }

  Json runtime = {{"started_at", utc_timestamp()},
                  {"wall_seconds", wall},
                  {"parallel", args.parallel}};
  const std::string document = result_document(net, results, config, runtime).dump(2) + "\n";
  std::ostringstream report;
  write_report_tsv(report, summaries, config);
  std::ostringstream trace;
  if (args.trace) write_trace_tsv(trace, results);

  std::ostream& summary_out = args.out.empty() ? err : out;
  if (args.out.empty()) {
    out << document;
    if (args.trace) out << trace.str();
  } else {
    write_file(args.out, document);
    write_file(sibling_path(args.out, ".report.tsv"), report.str());
    if (args.trace) write_file(sibling_path(args.out, ".trace.tsv"), trace.str());
  }

  auto means = mean_best_alpha_saem(summaries);
  for (std::size_t a = 0; a < config.alphas.size(); ++a) {
    summary_out << "mean best-of-run alpha_SAEM (alpha=" << format_number(config.alphas[a])
                << ", runs=" << args.runs << "): " << format_cell(means[a]) << '\n';
  }
  return kSuccess;
}

struct EvaluateArgs {
  NetworkArgs network;
  std::string partition;
  std::string alphas = "0.5,1,1.5";
};

inline int cmd_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err) {
  const AttributedNetwork net = args.network.load();
  const std::vector<double> alphas = parse_alphas(args.alphas);

  std::ifstream in(args.partition);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + args.partition + "'");
  const OverlappingPartition given = read_partition(in, net);

  const OverlappingPartition counted = drop_singletons(given);
  const std::size_t dropped = given.community_count() - counted.community_count();
  if (dropped > 0) err << "warning: ignoring " << dropped << " single-node communities\n";
  if (counted.communities.empty()) {
    throw Error(ErrorCode::kEmptyAfterSingletonDrop, "no community with two or more nodes");
  }
  std::size_t uncovered = 0;
  for (const auto& m : counted.memberships) uncovered += m.empty() ? 1 : 0;
  if (uncovered > 0) err << "warning: " << uncovered << " nodes are in no counted community\n";

  const ObjectiveVector hsi{extended_modularity(net, counted), sim_att(net, counted)};
  out << std::setprecision(17);
  out << "EQ\t" << hsi.eq << '\n';
  out << "SimAtt\t" << hsi.simatt << '\n';
  for (double a : alphas) {
    out << "alpha_SAEM(" << format_number(a) << ")\t"
        << format_cell(alpha_saem(hsi.simatt, hsi.eq, a)) << '\n';
  }
  return kSuccess;
}

struct OvsetArgs {
  NetworkArgs network;
  double threshold = 0.1;
  std::uint64_t seed = 0;
};

inline int cmd_ovset(const OvsetArgs& args, std::ostream& out, std::ostream&) {
  const AttributedNetwork net = args.network.load();
  for (NodeId v : find_ovset(net, args.threshold, args.seed).members) {
    out << net.external_id(v) << '\n';
  }
  return kSuccess;
}

// Entry point for the `mobbo` tool. Diagnostics go to `err` as one line.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"Overlapping community detection in attributed networks"};
  app.require_subcommand(1);

  DetectArgs detect;
  auto* detect_cmd = app.add_subcommand("detect", "Search for Pareto-optimal overlapping partitions");
  detect.network.add_to(*detect_cmd);
  detect_cmd->add_option("--mode", detect.mode, "mobbo-ocd | em-bbo | ov-simatt-bbo")
      ->check(CLI::IsMember({"mobbo-ocd", "em-bbo", "ov-simatt-bbo"}));
  detect_cmd->add_option("--seed", detect.seed, "Seed of the first run; run r uses seed + r");
  detect_cmd->add_option("--habitats", detect.habitats, "Population size")->check(CLI::Range(2, 1 << 20));
  detect_cmd->add_option("--generations", detect.generations, "Generations per run")
      ->check(CLI::Range(1, 1 << 24));
  detect_cmd->add_option("--alphas", detect.alphas, "Comma-separated alpha values for reporting");
  detect_cmd->add_option("--runs", detect.runs, "Independent runs")->check(CLI::Range(1, 1 << 20));
  detect_cmd->add_option("--threshold", detect.threshold, "Link-closeness threshold")
      ->check(CLI::NonNegativeNumber);
  detect_cmd->add_flag("--parallel", detect.parallel, "Evolve habitats on worker threads");
  detect_cmd->add_option("--out", detect.out, "Result JSON path (report and trace TSV go alongside)");
  detect_cmd->add_flag("--trace", detect.trace, "Also write per-generation best objective values");

  EvaluateArgs evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a given (possibly overlapping) partition");
  evaluate.network.add_to(*evaluate_cmd);
  evaluate_cmd->add_option("--partition", evaluate.partition, "One community per line")->required();
  evaluate_cmd->add_option("--alphas", evaluate.alphas, "Comma-separated alpha values");

  OvsetArgs ovset;
  auto* ovset_cmd = app.add_subcommand("ovset", "List candidate overlapping nodes");
  ovset.network.add_to(*ovset_cmd);
  ovset_cmd->add_option("--threshold", ovset.threshold, "Link-closeness threshold")
      ->check(CLI::NonNegativeNumber);
  ovset_cmd->add_option("--seed", ovset.seed, "Seed for key-neighbor tie-breaking");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*detect_cmd) return cmd_detect(detect, out, err);
    if (*evaluate_cmd) return cmd_evaluate(evaluate, out, err);
    return cmd_ovset(ovset, out, err);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_input_error(e.code()) ? kInputError : kRuntimeError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace mobbo::cli
