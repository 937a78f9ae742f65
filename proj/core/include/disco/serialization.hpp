#pragma once

#include <filesystem>

#include <json.hpp>

#include "disco/dko_server.hpp"
#include "disco/matrix.hpp"
#include "disco/orchestrator.hpp"
#include "disco/synth_bench.hpp"

namespace disco {

using Json = nlohmann::json;

/// Nested row-major arrays: [[row0...], [row1...], ...].
Json toJson(const Matrix& m);
Matrix matrixFromJson(const Json& j);

/// Cache snapshot: {tau, entries: [{B, A, token, count, createdAtStage}]}.
Json toJson(const DynamicCache& cache);
/// Restores a snapshot; optimizer state restarts at zero.
DynamicCache cacheFromJson(const Json& j);

/// {tasks: [{id, vocab, W_star, noise, train, test}], shards: [{stage, client, task, indices}]}.
Json benchmarkToJson(const TaskFamily& family, const ScenarioSchedule& schedule);

Json toJson(const RunConfig& config);
/// Missing keys keep their defaults; unknown enum names throw ConfigError.
RunConfig runConfigFromJson(const Json& j);
RunConfig loadRunConfig(const std::filesystem::path& path);

}  // namespace disco
