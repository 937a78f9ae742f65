#include "disco/metrics.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "disco/errors.hpp"

namespace disco {

namespace {

double mean(const std::vector<double>& v) {
    if (v.empty()) throw Error("mean of an empty row");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

void requireRows(const ResultsMatrix& m) {
    if (m.rows.empty()) throw Error("results matrix has no stages");
}

}  // namespace

void ResultsMatrix::validate() const {
    std::size_t width = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].empty()) throw Error(fmt::format("stage {} evaluates no task", i));
        if (rows[i].size() < width)
            throw Error(fmt::format("stage {} is narrower than the previous stage", i));
        width = rows[i].size();
        for (double v : rows[i])
            if (!(v >= 0.0 && v <= 100.0))
                throw Error(fmt::format("accuracy {} at stage {} outside [0, 100]", v, i));
    }
    if (!taskNames.empty() && width > taskNames.size())
        throw Error("results matrix has more columns than task names");
}

double lastMetric(const ResultsMatrix& m) {
    requireRows(m);
    return mean(m.rows.back());
}

double avgMetric(const ResultsMatrix& m) {
    requireRows(m);
    double s = 0.0;
    for (const auto& row : m.rows) s += mean(row);
    return s / static_cast<double>(m.rows.size());
}

std::vector<double> forgettingMatrix(const ResultsMatrix& m) {
    requireRows(m);
    const auto& last = m.rows.back();
    std::vector<double> drops(last.size(), 0.0);
    for (std::size_t task = 0; task < last.size(); ++task) {
        double best = last[task];
        for (const auto& row : m.rows)
            if (task < row.size()) best = std::max(best, row[task]);
        drops[task] = best - last[task];
    }
    return drops;
}

double meanForgetting(const ResultsMatrix& m) {
    requireRows(m);
    if (m.rows.size() < 2) return 0.0;
    const auto drops = forgettingMatrix(m);
    const std::size_t earlier = m.rows[m.rows.size() - 2].size();
    if (earlier == 0) return 0.0;
    double s = 0.0;
    for (std::size_t t = 0; t < earlier; ++t) s += drops[t];
    return s / static_cast<double>(earlier);
}

}  // namespace disco
