#include "disco/serialization.hpp"

#include <fstream>

#include <fmt/format.h>

#include "disco/errors.hpp"

namespace disco {

Json toJson(const Matrix& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row(r);
        rows.push_back(Json(std::vector<double>(row.begin(), row.end())));
    }
    return rows;
}

Matrix matrixFromJson(const Json& j) {
    if (!j.is_array()) throw ConfigError("matrix must be an array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = rows == 0 ? 0 : j.front().size();
    std::vector<double> data;
    data.reserve(rows * cols);
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != cols) throw ConfigError("ragged matrix in JSON");
        for (const auto& v : row) data.push_back(v.get<double>());
    }
    return Matrix(rows, cols, std::move(data));
}

Json toJson(const DynamicCache& cache) {
    Json entries = Json::array();
    for (const auto& e : cache.entries) {
        entries.push_back({
            {"B", toJson(e.adapter.B)},
            {"A", toJson(e.adapter.A)},
            {"token", e.globalToken.vector},
            {"count", e.globalToken.supportCount},
            {"createdAtStage", e.createdAtStage},
        });
    }
    return {{"tau", cache.threshold}, {"entries", std::move(entries)}};
}

DynamicCache cacheFromJson(const Json& j) {
    DynamicCache cache;
    cache.threshold = j.at("tau").get<double>();
    for (const auto& e : j.at("entries")) {
        SubspaceEntry entry;
        entry.adapter = LowRankAdapter(matrixFromJson(e.at("B")), matrixFromJson(e.at("A")));
        entry.globalToken.vector = e.at("token").get<Vector>();
        entry.globalToken.supportCount = e.at("count").get<std::size_t>();
        entry.createdAtStage = e.at("createdAtStage").get<std::size_t>();
        entry.optimizerState = AggregatorState::zerosLike(entry.adapter);
        cache.entries.push_back(std::move(entry));
    }
    return cache;
}

namespace {

Json examplesToJson(const std::vector<Example>& examples) {
    Json out = Json::array();
    for (const auto& e : examples)
        out.push_back({{"x", e.x}, {"label", e.label}, {"instruction", e.instruction}});
    return out;
}

template <typename T>
void readIfPresent(const Json& j, const char* key, T& into) {
    if (auto it = j.find(key); it != j.end()) into = it->get<T>();
}

}  // namespace

Json benchmarkToJson(const TaskFamily& family, const ScenarioSchedule& schedule) {
    Json tasks = Json::array();
    for (const auto& t : family.tasks) {
        tasks.push_back({
            {"id", t.id},
            {"vocab", t.vocabulary},
            {"templates", t.templates},
            {"W_star", toJson(t.groundTruth)},
            {"noise", t.noise},
            {"train", examplesToJson(t.train)},
            {"test", examplesToJson(t.test)},
        });
    }
    Json shards = Json::array();
    for (const auto& stage : schedule.stages)
        for (const auto& s : stage.shards)
            shards.push_back(
                {{"stage", s.stage}, {"client", s.client}, {"task", s.task}, {"indices", s.indices}});
    return {{"sharedPool", family.sharedPool}, {"tasks", std::move(tasks)}, {"shards", std::move(shards)}};
}

Json toJson(const RunConfig& c) {
    return {
        {"method", toString(c.method)},
        {"seed", c.seed},
        {"threshold", c.threshold},
        {"rank", c.rank},
        {"learningRate", c.learningRate},
        {"epochs", c.epochs},
        {"baseScale", c.baseScale},
        {"initScale", c.initScale},
        {"logActivations", c.logActivations},
        {"family",
         {
             {"taskCount", c.family.taskCount},
             {"inputDim", c.family.inputDim},
             {"classes", c.family.classes},
             {"coreWords", c.family.coreWords},
             {"templateCount", c.family.templateCount},
             {"sharedPoolSize", c.family.sharedPoolSize},
             {"trainSize", c.family.trainSize},
             {"testSize", c.family.testSize},
             {"noise", c.family.noise},
             {"encoderDimension", c.family.encoder.dimension},
         }},
        {"scenario",
         {
             {"mode", toString(c.scenario.mode)},
             {"stagePlan", c.scenario.stagePlan},
             {"clientPool", c.scenario.clientPool},
             {"clientsPerRound", c.scenario.clientsPerRound},
             {"roundsPerStage", c.scenario.roundsPerStage},
             {"beta", c.scenario.beta},
         }},
        {"aggregator",
         {
             {"kind", toString(c.aggregator.kind)},
             {"serverLearningRate", c.aggregator.serverLearningRate},
             {"beta1", c.aggregator.beta1},
             {"beta2", c.aggregator.beta2},
             {"adaptivity", c.aggregator.adaptivity},
         }},
        {"activation",
         {
             {"kind", toString(c.activation.kind)},
             {"temperature", c.activation.temperature},
         }},
    };
}

RunConfig runConfigFromJson(const Json& j) {
    if (!j.is_object()) throw ConfigError("run config must be a JSON object");
    RunConfig c;
    try {
        if (auto it = j.find("method"); it != j.end()) c.method = parseMethod(it->get<std::string>());
        readIfPresent(j, "seed", c.seed);
        readIfPresent(j, "threshold", c.threshold);
        readIfPresent(j, "rank", c.rank);
        readIfPresent(j, "learningRate", c.learningRate);
        readIfPresent(j, "epochs", c.epochs);
        readIfPresent(j, "baseScale", c.baseScale);
        readIfPresent(j, "initScale", c.initScale);
        readIfPresent(j, "logActivations", c.logActivations);
        readIfPresent(j, "outputDir", c.outputDir);
        if (auto f = j.find("family"); f != j.end()) {
            readIfPresent(*f, "taskCount", c.family.taskCount);
            readIfPresent(*f, "inputDim", c.family.inputDim);
            readIfPresent(*f, "classes", c.family.classes);
            readIfPresent(*f, "coreWords", c.family.coreWords);
            readIfPresent(*f, "templateCount", c.family.templateCount);
            readIfPresent(*f, "sharedPoolSize", c.family.sharedPoolSize);
            readIfPresent(*f, "trainSize", c.family.trainSize);
            readIfPresent(*f, "testSize", c.family.testSize);
            readIfPresent(*f, "noise", c.family.noise);
            readIfPresent(*f, "encoderDimension", c.family.encoder.dimension);
        }
        if (auto s = j.find("scenario"); s != j.end()) {
            if (auto m = s->find("mode"); m != s->end())
                c.scenario.mode = parseScenarioMode(m->get<std::string>());
            readIfPresent(*s, "stagePlan", c.scenario.stagePlan);
            readIfPresent(*s, "clientPool", c.scenario.clientPool);
            readIfPresent(*s, "clientsPerRound", c.scenario.clientsPerRound);
            readIfPresent(*s, "roundsPerStage", c.scenario.roundsPerStage);
            readIfPresent(*s, "beta", c.scenario.beta);
        }
        if (auto a = j.find("aggregator"); a != j.end()) {
            if (auto k = a->find("kind"); k != a->end())
                c.aggregator.kind = parseAggregatorKind(k->get<std::string>());
            readIfPresent(*a, "serverLearningRate", c.aggregator.serverLearningRate);
            readIfPresent(*a, "beta1", c.aggregator.beta1);
            readIfPresent(*a, "beta2", c.aggregator.beta2);
            readIfPresent(*a, "adaptivity", c.aggregator.adaptivity);
        }
        if (auto a = j.find("activation"); a != j.end()) {
            if (auto k = a->find("kind"); k != a->end())
                c.activation.kind = parseActivationKind(k->get<std::string>());
            readIfPresent(*a, "temperature", c.activation.temperature);
        }
    } catch (const Json::exception& e) {
        throw ConfigError(fmt::format("malformed run config: {}", e.what()));
    }
    return c;
}

RunConfig loadRunConfig(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw ConfigError(fmt::format("config '{}' is not valid JSON: {}", path.string(), e.what()));
    }
    return runConfigFromJson(j);
}

}  // namespace disco
