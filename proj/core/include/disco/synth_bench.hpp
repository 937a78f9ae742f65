#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "disco/dko_server.hpp"
#include "disco/identity.hpp"
#include "disco/matrix.hpp"

namespace disco {

/// One labelled input with the instruction text that accompanies it.
struct Example {
    Vector x;
    std::size_t label = 0;
    std::string instruction;

    friend bool operator==(const Example&, const Example&) = default;
};

/// A linear multi-class surrogate for one instruction-tuning dataset.
struct SyntheticTask {
    std::size_t id = 0;
    /// Task-owned words: the core words followed by the template words.
    std::vector<std::string> vocabulary;
    /// Instruction templates; every instruction is a template plus one shared-pool word.
    std::vector<std::string> templates;
    /// Ground truth W* (classes x inputDim); label = argmax(W* x_clean).
    Matrix groundTruth;
    double noise = 0.0;
    std::vector<Example> train;
    std::vector<Example> test;

    std::string name() const;

    friend bool operator==(const SyntheticTask&, const SyntheticTask&) = default;
};

struct TaskFamilyOptions {
    std::size_t taskCount = 4;
    std::size_t inputDim = 16;
    std::size_t classes = 8;
    std::size_t coreWords = 10;
    std::size_t templateCount = 4;
    std::size_t sharedPoolSize = 4;
    std::size_t trainSize = 400;
    std::size_t testSize = 200;
    /// Standard deviation of the Gaussian noise added to x after labelling.
    double noise = 0.05;
    EncoderSpec encoder;

    void validate() const;

    friend bool operator==(const TaskFamilyOptions&, const TaskFamilyOptions&) = default;
};

struct TaskFamily {
    TaskFamilyOptions options;
    std::vector<std::string> sharedPool;
    std::vector<SyntheticTask> tasks;

    friend bool operator==(const TaskFamily&, const TaskFamily&) = default;
};

/// Generates `options.taskCount` tasks with pairwise-disjoint task vocabularies.
///
/// Words are chosen so that, while the encoder has free buckets, no two tasks
/// (and no task and the shared pool) hash into the same bucket. Each task
/// draws from its own child seed.
TaskFamily makeTaskFamily(const TaskFamilyOptions& options, std::uint64_t seed);

/// Sample counts per client drawn from Dirichlet(beta * 1).
///
/// Counts are floor(p_i * n) with the remainder handed to the largest
/// fractional parts (ties to the lower index), so they always sum to n.
std::vector<std::size_t> dirichletPartition(std::size_t samples, std::size_t clients, double beta,
                                            std::uint64_t seed);

enum class ScenarioMode { HomFCIT, HetFCIT };

std::string_view toString(ScenarioMode mode) noexcept;
ScenarioMode parseScenarioMode(std::string_view name);

/// Training examples of one task visible to one client during one stage.
struct Shard {
    std::size_t stage = 0;
    ClientId client = 0;
    std::size_t task = 0;
    /// Indices into the task's train set.
    std::vector<std::size_t> indices;

    friend bool operator==(const Shard&, const Shard&) = default;
};

struct Stage {
    std::vector<std::size_t> tasks;
    /// Non-empty shards only, ordered by client id.
    std::vector<Shard> shards;

    friend bool operator==(const Stage&, const Stage&) = default;
};

struct ScenarioOptions {
    ScenarioMode mode = ScenarioMode::HomFCIT;
    /// Tasks trained at each stage. Empty means one task per stage in id order.
    std::vector<std::vector<std::size_t>> stagePlan;
    std::size_t clientPool = 50;
    std::size_t clientsPerRound = 5;
    std::size_t roundsPerStage = 10;
    double beta = 1.0;

    void validate(std::size_t taskCount) const;
};

struct ScenarioSchedule {
    ScenarioMode mode = ScenarioMode::HomFCIT;
    std::vector<Stage> stages;
    std::size_t clientPool = 50;
    std::size_t clientsPerRound = 5;
    std::size_t roundsPerStage = 10;
    double beta = 1.0;

    friend bool operator==(const ScenarioSchedule&, const ScenarioSchedule&) = default;
};

/// Materializes per-stage client shards.
///
/// HomFCIT requires exactly one task per stage and partitions it over the
/// whole pool. HetFCIT assigns client c to stage task c mod (task count) and
/// partitions each task over its clients. Throws ConfigError otherwise.
ScenarioSchedule composeScenario(const TaskFamily& family, const ScenarioOptions& options,
                                 std::uint64_t seed);

/// Examples referenced by a shard.
std::vector<Example> shardExamples(const TaskFamily& family, const Shard& shard);

}  // namespace disco
