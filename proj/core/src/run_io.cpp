#include "disco/run_io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "disco/errors.hpp"
#include "disco/serialization.hpp"

namespace disco {

namespace {

std::vector<std::string> splitCsvLine(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

template <typename T, typename F>
std::string joinWith(const std::vector<T>& items, char sep, F&& format) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += sep;
        out += format(items[i]);
    }
    return out;
}

void writeFile(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
    out << text;
}

std::string readFile(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(fmt::format("cannot read '{}'", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::string formatResultsMatrixCsv(const ResultsMatrix& m) {
    std::string out = "stage";
    for (const auto& name : m.taskNames) out += ',' + name;
    out += '\n';
    for (std::size_t s = 0; s < m.rows.size(); ++s) {
        out += fmt::format("{}", s + 1);
        for (std::size_t t = 0; t < m.taskNames.size(); ++t) {
            out += ',';
            if (t < m.rows[s].size()) out += fmt::format("{:.4f}", m.rows[s][t]);
        }
        out += '\n';
    }
    return out;
}

ResultsMatrix parseResultsMatrixCsv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw Error("results matrix CSV is empty");
    auto header = splitCsvLine(line);
    if (header.empty() || header.front() != "stage") throw Error("results matrix CSV lacks a stage column");
    ResultsMatrix m;
    m.taskNames.assign(header.begin() + 1, header.end());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = splitCsvLine(line);
        std::vector<double> row;
        bool ended = false;
        for (std::size_t i = 1; i < cells.size(); ++i) {
            if (cells[i].empty()) {
                ended = true;
                continue;
            }
            if (ended) throw Error("results matrix row has a gap before a filled cell");
            try {
                row.push_back(std::stod(cells[i]));
            } catch (const std::exception&) {
                throw Error(fmt::format("bad accuracy cell '{}'", cells[i]));
            }
        }
        m.rows.push_back(std::move(row));
    }
    m.validate();
    return m;
}

std::string formatMetricsJson(const ResultsMatrix& m) {
    Json forgetting = Json::object();
    const auto drops = forgettingMatrix(m);
    for (std::size_t t = 0; t < drops.size(); ++t) {
        const std::string name = t < m.taskNames.size() ? m.taskNames[t] : fmt::format("task{}", t);
        forgetting[name] = drops[t];
    }
    Json j = {
        {"last", lastMetric(m)},
        {"avg", avgMetric(m)},
        {"forgetting", std::move(forgetting)},
        {"meanForgetting", meanForgetting(m)},
    };
    return j.dump(2) + '\n';
}

std::string formatRoundsCsv(const std::vector<RoundRecord>& rounds) {
    std::string out = "stage,round,clientIds,matchedEntry,cacheSize,trainedFrom\n";
    for (const auto& r : rounds) {
        out += fmt::format(
            "{},{},{},{},{},{}\n", r.stage + 1, r.round + 1,
            joinWith(r.clients, ';', [](ClientId c) { return fmt::format("{}", c); }),
            joinWith(r.matchedEntry, ';', [](std::size_t e) { return fmt::format("{}", e); }),
            r.cacheSize,
            joinWith(r.trainedFrom, ';', [](const std::optional<std::size_t>& e) {
                return e ? fmt::format("{}", *e) : std::string("fresh");
            }));
    }
    return out;
}

std::string formatActivationsCsv(const std::vector<ActivationRecord>& activations) {
    std::string out = "testId,entry,alpha\n";
    for (const auto& a : activations)
        out += fmt::format("task{}:{},{},{:.17g}\n", a.task, a.testIndex, a.entry, a.alpha);
    return out;
}

void writeRunArtifacts(const RunResult& result, const RunConfig& config,
                       const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    writeFile(dir / "results_matrix.csv", formatResultsMatrixCsv(result.matrix));
    writeFile(dir / "metrics.json", formatMetricsJson(result.matrix));
    writeFile(dir / "rounds.csv", formatRoundsCsv(result.rounds));
    writeFile(dir / "cache.json", toJson(result.cache).dump() + '\n');
    writeFile(dir / "benchmark.json", benchmarkToJson(result.family, result.schedule).dump() + '\n');
    writeFile(dir / "config.json", toJson(config).dump(2) + '\n');
    if (config.logActivations)
        writeFile(dir / "activations.csv", formatActivationsCsv(result.activations));
}

ResultsMatrix readResultsMatrix(const std::filesystem::path& runDir) {
    return parseResultsMatrixCsv(readFile(runDir / "results_matrix.csv"));
}

}  // namespace disco
