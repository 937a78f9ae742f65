// disco: run, report and sweep federated continual instruction tuning simulations.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "disco/errors.hpp"
#include "disco/metrics.hpp"
#include "disco/orchestrator.hpp"
#include "disco/run_io.hpp"
#include "disco/serialization.hpp"

namespace {

void printMetrics(const disco::ResultsMatrix& m) {
    fmt::print("Last   {:.2f}\n", disco::lastMetric(m));
    fmt::print("Avg    {:.2f}\n", disco::avgMetric(m));
    const auto drops = disco::forgettingMatrix(m);
    fmt::print("Forgetting (best - final):\n");
    for (std::size_t t = 0; t < drops.size(); ++t)
        fmt::print("  {:<10} {:.2f}\n", m.taskNames.at(t), drops[t]);
    fmt::print("Mean forgetting {:.2f}\n", disco::meanForgetting(m));
}

int runCommand(const std::string& configPath, std::optional<std::uint64_t> seed,
               std::optional<std::string> method, const std::string& outDir) {
    auto config = disco::loadRunConfig(configPath);
    if (seed) config.seed = *seed;
    if (method) config.method = disco::parseMethod(*method);
    config.outputDir = outDir;
    const auto result = disco::runScenario(config);
    disco::writeRunArtifacts(result, config, outDir);
    fmt::print("{} run, seed {}, {} stages, {} subspaces\n", disco::toString(config.method),
               config.seed, result.matrix.stages(), result.cache.size());
    printMetrics(result.matrix);
    return 0;
}

int reportCommand(const std::string& runDir) {
    printMetrics(disco::readResultsMatrix(runDir));
    return 0;
}

int sweepCommand(const std::string& configPath, const std::vector<double>& betas,
                 std::size_t seeds, std::optional<std::string> method,
                 const std::string& outDir) {
    const auto base = disco::loadRunConfig(configPath);
    std::string csv = "beta,seed,last,avg,meanForgetting,subspaces\n";
    fmt::print("{:>6} {:>10} {:>10} {:>12}\n", "beta", "Last", "Avg", "Forgetting");
    for (double beta : betas) {
        double last = 0.0, avg = 0.0, forgetting = 0.0;
        for (std::size_t i = 0; i < seeds; ++i) {
            auto config = base;
            config.scenario.beta = beta;
            config.seed = base.seed + i;
            if (method) config.method = disco::parseMethod(*method);
            const auto result = disco::runScenario(config);
            const double l = disco::lastMetric(result.matrix);
            const double a = disco::avgMetric(result.matrix);
            const double f = disco::meanForgetting(result.matrix);
            last += l;
            avg += a;
            forgetting += f;
            csv += fmt::format("{},{},{:.4f},{:.4f},{:.4f},{}\n", beta, config.seed, l, a, f,
                               result.cache.size());
        }
        const double n = static_cast<double>(seeds);
        fmt::print("{:>6.2f} {:>10.2f} {:>10.2f} {:>12.2f}\n", beta, last / n, avg / n,
                   forgetting / n);
    }
    if (!outDir.empty()) {
        std::filesystem::create_directories(outDir);
        std::ofstream(std::filesystem::path(outDir) / "sweep.csv") << csv;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Federated continual instruction tuning simulator"};
    app.require_subcommand(1);

    std::string configPath;
    std::string outDir;
    std::string runDir;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> method;
    std::vector<double> betas{0.5, 1.0, 5.0};
    std::size_t seeds = 5;

    auto* run = app.add_subcommand("run", "Run one scenario and write its artifacts");
    run->add_option("--config", configPath, "Run config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "Override the config seed");
    run->add_option("--method", method, "Override the method: DISCO or FinetuneBaseline");
    run->add_option("--out", outDir, "Output directory")->required();

    auto* report = app.add_subcommand("report", "Print Last/Avg/forgetting of a finished run");
    report->add_option("--run", runDir, "Run directory")->required()->check(CLI::ExistingDirectory);

    auto* sweep = app.add_subcommand("sweep", "Run a config across Dirichlet betas and seeds");
    sweep->add_option("--config", configPath, "Run config (JSON)")->required()->check(CLI::ExistingFile);
    sweep->add_option("--betas", betas, "Comma-separated Dirichlet concentrations")->delimiter(',');
    sweep->add_option("--seeds", seeds, "Seeds per beta, counting up from the config seed")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--method", method, "Override the method: DISCO or FinetuneBaseline");
    sweep->add_option("--out", outDir, "Optional directory for sweep.csv");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return runCommand(configPath, seed, method, outDir);
        if (*report) return reportCommand(runDir);
        if (*sweep) return sweepCommand(configPath, betas, seeds, method, outDir);
    } catch (const disco::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
