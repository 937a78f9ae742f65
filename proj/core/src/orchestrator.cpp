#include "disco/orchestrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "disco/client_trainer.hpp"
#include "disco/errors.hpp"
#include "disco/rng.hpp"

namespace disco {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 2> kMethodNames{{
    {Method::Disco, "DISCO"},
    {Method::FinetuneBaseline, "FinetuneBaseline"},
}};

Matrix makeBase(const RunConfig& config) {
    Rng rng(deriveSeed(config.seed, "base-weights"));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix base(config.family.classes, config.family.inputDim);
    for (double& v : base.data()) v = config.baseScale * gauss(rng);
    return base;
}

LowRankAdapter freshAdapter(const RunConfig& config, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> uniform(-config.initScale, config.initScale);
    Matrix a(config.rank, config.family.inputDim);
    if (config.initScale > 0.0)
        for (double& v : a.data()) v = uniform(rng);
    return LowRankAdapter(Matrix(config.family.classes, config.rank), std::move(a));
}

// Uniform sample without replacement, returned in client-id order.
std::vector<ClientId> sampleClients(std::vector<ClientId> eligible, std::size_t count, Rng& rng) {
    count = std::min(count, eligible.size());
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, eligible.size() - 1);
        std::swap(eligible[i], eligible[pick(rng)]);
    }
    eligible.resize(count);
    std::sort(eligible.begin(), eligible.end());
    return eligible;
}

std::vector<std::string> instructionsOf(std::span<const Example> examples) {
    std::vector<std::string> out;
    out.reserve(examples.size());
    for (const auto& e : examples) out.push_back(e.instruction);
    return out;
}

// Column order of the results matrix: tasks by first appearance.
std::vector<std::size_t> taskColumns(const ScenarioSchedule& schedule) {
    std::vector<std::size_t> columns;
    for (const auto& stage : schedule.stages)
        for (std::size_t t : stage.tasks)
            if (std::find(columns.begin(), columns.end(), t) == columns.end()) columns.push_back(t);
    return columns;
}

class ScenarioRunner {
public:
    ScenarioRunner(const RunConfig& config, const RoundObserver& observer)
        : config_(config), observer_(observer) {
        result_.family = makeTaskFamily(config.family, deriveSeed(config.seed, "family"));
        result_.schedule =
            composeScenario(result_.family, config.scenario, deriveSeed(config.seed, "scenario"));
        base_ = makeBase(config);
        columns_ = taskColumns(result_.schedule);
        for (std::size_t t : columns_) result_.matrix.taskNames.push_back(result_.family.tasks[t].name());
        cache_.threshold = config.threshold;
        if (config.method == Method::FinetuneBaseline) {
            shared_ = freshAdapter(config, deriveSeed(config.seed, "finetune-init"));
            sharedState_ = AggregatorState::zerosLike(*shared_);
        }
    }

    RunResult run() {
        const auto& stages = result_.schedule.stages;
        std::size_t seenTasks = 0;
        for (std::size_t s = 0; s < stages.size(); ++s) {
            Rng sampling(deriveSeed(config_.seed, "client-sampling", {s}));
            for (std::size_t r = 0; r < result_.schedule.roundsPerStage; ++r) runRound(s, r, sampling);
            for (std::size_t t : stages[s].tasks) {
                const auto pos = std::find(columns_.begin(), columns_.end(), t) - columns_.begin();
                seenTasks = std::max(seenTasks, static_cast<std::size_t>(pos) + 1);
            }
            evaluateStage(seenTasks, s + 1 == stages.size());
        }
        result_.matrix.validate();
        if (shared_) {
            SubspaceEntry entry;
            entry.adapter = *shared_;
            entry.globalToken = sharedToken_;
            entry.optimizerState = sharedState_;
            cache_.entries = {std::move(entry)};
        }
        result_.cache = cache_;
        return std::move(result_);
    }

private:
    void runRound(std::size_t s, std::size_t r, Rng& sampling) {
        const Stage& stage = result_.schedule.stages[s];
        std::vector<ClientId> eligible;
        for (const auto& shard : stage.shards) eligible.push_back(shard.client);
        const auto selected = sampleClients(eligible, result_.schedule.clientsPerRound, sampling);
        const LowRankAdapter fresh =
            freshAdapter(config_, deriveSeed(config_.seed, "fresh-adapter", {s, r}));

        RoundRecord record;
        record.stage = s;
        record.round = r;
        record.clients = selected;

        std::vector<ClientUpdate> updates;
        for (ClientId c : selected) {
            const auto shard = std::find_if(stage.shards.begin(), stage.shards.end(),
                                            [c](const Shard& sh) { return sh.client == c; });
            const auto examples = shardExamples(result_.family, *shard);

            ClientModel model{base_, fresh, config_.learningRate, config_.epochs};
            std::optional<std::size_t> slot;
            if (shared_) {
                model.adapter = *shared_;
                slot = 0;
            } else {
                const auto provisional =
                    localToken(instructionsOf(examples), config_.family.encoder);
                const auto choice = selectClientSubspace(cache_, provisional);
                if (const auto* index = std::get_if<std::size_t>(&choice)) {
                    slot = *index;
                    model.adapter = cache_.entries[*index].adapter;
                }
            }
            ClientUpdate update = localTrain(model, examples, config_.family.encoder, c);
            update.trainedSlot = slot;
            record.trainedFrom.push_back(slot);
            updates.push_back(std::move(update));
        }

        if (shared_) {
            std::vector<LowRankAdapter> adapters;
            std::vector<double> weights;
            for (const auto& u : updates) {
                adapters.push_back(u.adapter);
                weights.push_back(static_cast<double>(u.sampleCount));
            }
            if (!updates.empty()) {
                auto step = fedOpt(*shared_, adapters, weights, config_.aggregator, sharedState_);
                shared_ = std::move(step.adapter);
                sharedState_ = std::move(step.state);
                SubspaceEntry previous{*shared_, sharedToken_, 0, {}};
                sharedToken_ = mergeGlobalToken(sharedToken_.supportCount > 0 ? &previous : nullptr,
                                                updates);
            }
            record.matchedEntry.assign(updates.size(), 0);
            record.cacheSize = 1;
            SubspaceEntry entry{*shared_, sharedToken_, 0, sharedState_};
            DynamicCache view{{entry}, config_.threshold};
            result_.rounds.push_back(record);
            if (observer_) observer_(record, view);
            return;
        }

        auto outcome = aggregateRound(updates, cache_, config_.aggregator, s);
        cache_ = std::move(outcome.cache);
        record.matchedEntry = std::move(outcome.assignment);
        record.cacheSize = cache_.size();
        result_.rounds.push_back(record);
        if (observer_) observer_(record, cache_);
    }

    void evaluateStage(std::size_t seenTasks, bool finalStage) {
        std::vector<double> row;
        for (std::size_t col = 0; col < seenTasks; ++col) {
            const auto& task = result_.family.tasks[columns_[col]];
            if (shared_) {
                row.push_back(accuracyPercent(base_, adapterProduct(*shared_), task.test));
            } else if (cache_.empty()) {
                row.push_back(accuracyPercent(base_, Matrix(base_.rows(), base_.cols()), task.test));
            } else {
                row.push_back(evaluateTask(task, finalStage && config_.logActivations));
            }
        }
        result_.matrix.rows.push_back(std::move(row));
    }

    double evaluateTask(const SyntheticTask& task, bool log) {
        const SubspaceAssembler assembler(cache_);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < task.test.size(); ++i) {
            const auto& e = task.test[i];
            const auto s = scoresForEncoding(cache_, encode(e.instruction, config_.family.encoder));
            const auto alpha = activations(s, config_.activation);
            if (argmax(predict(base_, assembler.assemble(alpha), e.x)) == e.label) ++correct;
            if (log)
                for (std::size_t k = 0; k < alpha.size(); ++k)
                    result_.activations.push_back({task.id, i, k, alpha[k]});
        }
        return 100.0 * static_cast<double>(correct) / static_cast<double>(task.test.size());
    }

    const RunConfig& config_;
    const RoundObserver& observer_;
    RunResult result_;
    Matrix base_;
    std::vector<std::size_t> columns_;
    DynamicCache cache_;
    std::optional<LowRankAdapter> shared_;
    AggregatorState sharedState_;
    IdentityToken sharedToken_;
};

}  // namespace

std::string_view toString(Method method) noexcept {
    for (const auto& [m, name] : kMethodNames)
        if (m == method) return name;
    return "unknown";
}

Method parseMethod(std::string_view name) {
    for (const auto& [m, n] : kMethodNames)
        if (n == name) return m;
    throw ConfigError(fmt::format("unknown method '{}'", name));
}

void RunConfig::validate() const {
    family.validate();
    scenario.validate(family.taskCount);
    aggregator.validate();
    activation.validate();
    if (!(threshold > 0.0 && threshold <= 1.0)) throw ConfigError("threshold must lie in (0, 1]");
    if (rank < 1 || rank > std::min(family.classes, family.inputDim))
        throw ConfigError(fmt::format("rank {} outside [1, min(classes, inputDim)]", rank));
    if (!(learningRate >= 0.0) || !std::isfinite(learningRate))
        throw ConfigError("learning rate must be finite and >= 0");
    if (!(baseScale >= 0.0) || !std::isfinite(baseScale))
        throw ConfigError("base scale must be finite and >= 0");
    if (!(initScale >= 0.0) || !std::isfinite(initScale))
        throw ConfigError("init scale must be finite and >= 0");
}

RunResult runScenario(const RunConfig& config, const RoundObserver& observer) {
    config.validate();
    return ScenarioRunner(config, observer).run();
}

double evaluateWithActivation(const Matrix& base, const DynamicCache& cache,
                              std::span<const Example> examples, const ActivationPolicy& policy,
                              const EncoderSpec& encoder) {
    if (examples.empty()) throw Error("evaluation over an empty example set");
    const SubspaceAssembler assembler(cache);
    std::size_t correct = 0;
    for (const auto& e : examples) {
        const auto alpha = activations(scoresForEncoding(cache, encode(e.instruction, encoder)), policy);
        if (argmax(predict(base, assembler.assemble(alpha), e.x)) == e.label) ++correct;
    }
    return 100.0 * static_cast<double>(correct) / static_cast<double>(examples.size());
}

}  // namespace disco
