#pragma once

#include <filesystem>
#include <string>

#include "disco/metrics.hpp"
#include "disco/orchestrator.hpp"

namespace disco {

/// Header "stage,<task names>", one line per stage; cells of unseen tasks are blank.
std::string formatResultsMatrixCsv(const ResultsMatrix& m);
ResultsMatrix parseResultsMatrixCsv(const std::string& text);

/// {"last", "avg", "forgetting": {task: drop}} serialized with two-space indent.
std::string formatMetricsJson(const ResultsMatrix& m);

std::string formatRoundsCsv(const std::vector<RoundRecord>& rounds);
std::string formatActivationsCsv(const std::vector<ActivationRecord>& activations);

/// Writes results_matrix.csv, metrics.json, rounds.csv, cache.json,
/// benchmark.json, config.json and (when logged) activations.csv into `dir`.
void writeRunArtifacts(const RunResult& result, const RunConfig& config,
                       const std::filesystem::path& dir);

ResultsMatrix readResultsMatrix(const std::filesystem::path& runDir);

}  // namespace disco
