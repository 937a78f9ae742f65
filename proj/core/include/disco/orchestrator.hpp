#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "disco/aggregators.hpp"
#include "disco/dko_server.hpp"
#include "disco/metrics.hpp"
#include "disco/ssa.hpp"
#include "disco/synth_bench.hpp"

namespace disco {

enum class Method { Disco, FinetuneBaseline };

std::string_view toString(Method method) noexcept;
Method parseMethod(std::string_view name);

/// Everything needed to reproduce one run.
struct RunConfig {
    Method method = Method::Disco;
    TaskFamilyOptions family;
    ScenarioOptions scenario;
    AggregatorSpec aggregator;
    ActivationPolicy activation;
    double threshold = 0.9;
    std::size_t rank = 8;
    double learningRate = 0.05;
    std::size_t epochs = 1;
    /// Standard deviation of the frozen base weights.
    double baseScale = 0.1;
    /// Half-width of the uniform initialization of a fresh adapter's A.
    double initScale = 0.01;
    std::uint64_t seed = 0;
    bool logActivations = false;
    std::string outputDir;

    void validate() const;
};

/// Per-round trace written to rounds.csv.
struct RoundRecord {
    std::size_t stage = 0;
    std::size_t round = 0;
    std::vector<ClientId> clients;
    /// Entry each client's update was aggregated into.
    std::vector<std::size_t> matchedEntry;
    /// Entry each client trained from, if it did not start fresh.
    std::vector<std::optional<std::size_t>> trainedFrom;
    std::size_t cacheSize = 0;
};

struct ActivationRecord {
    std::size_t task = 0;
    std::size_t testIndex = 0;
    std::size_t entry = 0;
    double alpha = 0.0;
};

struct RunResult {
    ResultsMatrix matrix;
    /// Final cache (a single entry holding the shared adapter for the baseline).
    DynamicCache cache;
    std::vector<RoundRecord> rounds;
    /// Activations of the final-stage evaluation, when logging is enabled.
    std::vector<ActivationRecord> activations;
    TaskFamily family;
    ScenarioSchedule schedule;
};

/// Called after every server round with the round trace and the updated cache.
using RoundObserver = std::function<void(const RoundRecord&, const DynamicCache&)>;

/// Runs every stage and round of the scenario and evaluates after each stage.
RunResult runScenario(const RunConfig& config, const RoundObserver& observer = {});

/// Accuracy of every example under SSA over `cache`, in percent.
double evaluateWithActivation(const Matrix& base, const DynamicCache& cache,
                              std::span<const Example> examples, const ActivationPolicy& policy,
                              const EncoderSpec& encoder);

}  // namespace disco
