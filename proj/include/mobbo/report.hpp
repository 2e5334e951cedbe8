#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mobbo/engine.hpp"
#include "mobbo/error.hpp"
#include "mobbo/graph.hpp"
#include "mobbo/objectives.hpp"

namespace mobbo {

using Json = nlohmann::ordered_json;

// Shortest round-trip decimal form, e.g. "0.5", "1", "1.5".
inline std::string format_number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc{} ? std::string(buf, end) : std::to_string(x);
}

// One community per line, whitespace-separated external ids; a node listed on
// several lines belongs to several communities. Blank and '#' lines are
// skipped.
inline OverlappingPartition read_partition(std::istream& in, const AttributedNetwork& net) {
  std::vector<std::vector<NodeId>> communities;
  std::string line;
  std::size_t line_no = 0;
  while (detail::next_content_line(in, line, line_no)) {
    std::vector<NodeId> members;
    for (const auto& id : detail::split_whitespace(line)) {
      const NodeId v = net.find(id);
      if (v >= net.node_count()) {
        throw Error(ErrorCode::kPartitionNodeMismatch,
                    "partition line " + std::to_string(line_no) + ": unknown node '" + id + "'");
      }
      members.push_back(v);
    }
    communities.push_back(std::move(members));
  }
  return OverlappingPartition::from_communities(net.node_count(), std::move(communities));
}

inline void write_partition(std::ostream& out, const AttributedNetwork& net,
                            const OverlappingPartition& p) {
  for (const auto& c : p.communities) {
    for (std::size_t i = 0; i < c.size(); ++i) out << (i ? " " : "") << net.external_id(c[i]);
    out << '\n';
  }
}

struct RunSummary {
  std::uint64_t seed = 0;
  std::vector<std::optional<double>> best_alpha_saem;  // aligned with config alphas
  double best_eq = 0.0;
  double best_simatt = 0.0;
  std::size_t front_size = 0;
  double wall_seconds = 0.0;
};

// Best-of-run values over the rank-1 habitats.
inline RunSummary summarize_run(const RunResult& result) {
  RunSummary s;
  s.seed = result.config.seed;
  s.wall_seconds = result.wall_seconds;
  auto front = result.front();
  s.front_size = front.size();
  s.best_alpha_saem.assign(result.config.alphas.size(), std::nullopt);
  bool first = true;
  for (std::size_t i : front) {
    const auto& hsi = *result.population[i].hsi;
    s.best_eq = first ? hsi.eq : std::max(s.best_eq, hsi.eq);
    s.best_simatt = first ? hsi.simatt : std::max(s.best_simatt, hsi.simatt);
    first = false;
    for (std::size_t a = 0; a < result.config.alphas.size(); ++a) {
      auto score = alpha_saem(hsi.simatt, hsi.eq, result.config.alphas[a]);
      auto& best = s.best_alpha_saem[a];
      if (score && (!best || *score > *best)) best = score;
    }
  }
  return s;
}

// Arithmetic mean of the best-of-run values per alpha; runs where a value
// was unscorable are left out of that alpha's mean.
inline std::vector<std::optional<double>> mean_best_alpha_saem(const std::vector<RunSummary>& runs) {
  if (runs.empty()) return {};
  std::vector<std::optional<double>> out(runs.front().best_alpha_saem.size());
  for (std::size_t a = 0; a < out.size(); ++a) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& r : runs) {
      if (r.best_alpha_saem[a]) {
        sum += *r.best_alpha_saem[a];
        ++count;
      }
    }
    if (count > 0) out[a] = sum / static_cast<double>(count);
  }
  return out;
}

inline Json optional_number(const std::optional<double>& x) {
  return x ? Json(*x) : Json(nullptr);
}

inline Json solution_json(const AttributedNetwork& net, const Habitat& h,
                          const std::vector<double>& alphas) {
  Json communities = Json::array();
  for (const auto& c : partition_of(h).communities) {
    Json members = Json::array();
    for (NodeId v : c) members.push_back(net.external_id(v));
    communities.push_back(std::move(members));
  }
  Json overlapping = Json::array();
  for (NodeId v = 0; v < h.size(); ++v) {
    if (h.final_community[v].size() > 1) overlapping.push_back(net.external_id(v));
  }
  Json scores = Json::object();
  for (double a : alphas) scores[format_number(a)] = optional_number(alpha_saem(h.hsi->simatt, h.hsi->eq, a));

  Json out;
  out["rank"] = h.rank;
  out["eq"] = h.hsi->eq;
  out["simatt"] = h.hsi->simatt;
  out["alpha_saem"] = std::move(scores);
  out["overlapping_nodes"] = std::move(overlapping);
  out["communities"] = std::move(communities);
  return out;
}

// Rank-1 solutions of a run; habitats that decode to the same partition are
// listed once.
inline Json run_json(const AttributedNetwork& net, const RunResult& result, std::size_t run_index) {
  const auto& alphas = result.config.alphas;
  const RunSummary summary = summarize_run(result);

  Json ovset = Json::array();
  for (NodeId v : result.ovset.members) ovset.push_back(net.external_id(v));

  Json best_scores = Json::object();
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    best_scores[format_number(alphas[a])] = optional_number(summary.best_alpha_saem[a]);
  }

  Json solutions = Json::array();
  std::vector<std::vector<std::vector<CommunityId>>> seen;
  for (std::size_t i : result.front()) {
    const Habitat& h = result.population[i];
    if (std::find(seen.begin(), seen.end(), h.final_community) != seen.end()) continue;
    seen.push_back(h.final_community);
    solutions.push_back(solution_json(net, h, alphas));
  }

  Json out;
  out["run"] = run_index;
  out["seed"] = result.config.seed;
  out["ovset"] = std::move(ovset);
  out["best_of_run"] = {{"alpha_saem", std::move(best_scores)},
                        {"eq", summary.best_eq},
                        {"simatt", summary.best_simatt}};
  out["solutions"] = std::move(solutions);
  return out;
}

// Result document for a batch of runs sharing one configuration. Everything
// except metadata.runtime is a pure function of the inputs and the seed.
inline Json result_document(const AttributedNetwork& net, const std::vector<RunResult>& runs,
                            const RunConfig& config, const Json& runtime) {
  Json alphas = Json::array();
  for (double a : config.alphas) alphas.push_back(a);
  Json attributes = Json::array();
  for (std::size_t h = 0; h < net.attribute_count(); ++h) attributes.push_back(net.attribute_name(h));

  Json metadata;
  metadata["mode"] = std::string(to_string(config.mode));
  metadata["seed"] = config.seed;
  metadata["runs"] = runs.size();
  metadata["habitats"] = config.habitats;
  metadata["generations"] = config.generations;
  metadata["lc_threshold"] = config.lc_threshold;
  metadata["mutation_constant"] = config.mutation_constant;
  metadata["alphas"] = std::move(alphas);
  metadata["network"] = {{"nodes", net.node_count()},
                         {"edges", net.edge_count()},
                         {"attributes", std::move(attributes)}};
  std::vector<RunSummary> summaries;
  for (const auto& r : runs) summaries.push_back(summarize_run(r));
  Json means = Json::object();
  auto mean = mean_best_alpha_saem(summaries);
  for (std::size_t a = 0; a < config.alphas.size(); ++a) {
    means[format_number(config.alphas[a])] = optional_number(mean.empty() ? std::nullopt : mean[a]);
  }
  metadata["mean_best_alpha_saem"] = std::move(means);
  metadata["runtime"] = runtime;

  Json run_list = Json::array();
  for (std::size_t r = 0; r < runs.size(); ++r) run_list.push_back(run_json(net, runs[r], r));

  Json doc;
  doc["metadata"] = std::move(metadata);
  doc["runs"] = std::move(run_list);
  return doc;
}

inline std::string format_cell(const std::optional<double>& x) {
  return x ? format_number(*x) : "NA";
}

// One row per run plus a final "mean" row.
inline void write_report_tsv(std::ostream& out, const std::vector<RunSummary>& runs,
                             const RunConfig& config) {
  out << "run\tseed\tmode";
  for (double a : config.alphas) out << "\talpha_saem_" << format_number(a);
  out << "\tbest_eq\tbest_simatt\tfront_size\twall_seconds\n";
  double eq_sum = 0.0;
  double simatt_sum = 0.0;
  double front_sum = 0.0;
  double wall_sum = 0.0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& s = runs[r];
    out << r << '\t' << s.seed << '\t' << to_string(config.mode);
    for (const auto& v : s.best_alpha_saem) out << '\t' << format_cell(v);
    out << '\t' << format_number(s.best_eq) << '\t' << format_number(s.best_simatt) << '\t'
        << s.front_size << '\t' << format_number(s.wall_seconds) << '\n';
    eq_sum += s.best_eq;
    simatt_sum += s.best_simatt;
    front_sum += static_cast<double>(s.front_size);
    wall_sum += s.wall_seconds;
  }
  const double n = static_cast<double>(runs.size());
  out << "mean\t\t" << to_string(config.mode);
  for (const auto& v : mean_best_alpha_saem(runs)) out << '\t' << format_cell(v);
  out << '\t' << format_number(eq_sum / n) << '\t' << format_number(simatt_sum / n) << '\t'
      << format_number(front_sum / n) << '\t' << format_number(wall_sum / n) << '\n';
}

inline void write_trace_tsv(std::ostream& out, const std::vector<RunResult>& runs) {
  out << "run\tgeneration\tbest_eq\tbest_simatt\tfront_size\n";
  for (std::size_t r = 0; r < runs.size(); ++r) {
    for (const auto& g : runs[r].trace) {
      out << r << '\t' << g.generation << '\t' << format_number(g.best_eq) << '\t'
          << format_number(g.best_simatt) << '\t' << g.front_size << '\n';
    }
  }
}

}  // namespace mobbo
