#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace disco {

/// Accuracy (percent) of every task seen so far, one row per completed stage.
///
/// Columns are tasks in order of first appearance, so row i holds exactly the
/// tasks seen through stage i and later rows are never narrower.
struct ResultsMatrix {
    std::vector<std::string> taskNames;
    std::vector<std::vector<double>> rows;

    std::size_t stages() const noexcept { return rows.size(); }
    bool empty() const noexcept { return rows.empty(); }

    /// Checks the lower-triangular shape and the [0, 100] range.
    void validate() const;

    friend bool operator==(const ResultsMatrix&, const ResultsMatrix&) = default;
};

/// Mean of the final row.
double lastMetric(const ResultsMatrix& m);

/// Mean over stages of each row's mean.
double avgMetric(const ResultsMatrix& m);

/// Per task: best accuracy at any stage minus final accuracy.
std::vector<double> forgettingMatrix(const ResultsMatrix& m);

/// Mean forgetting over tasks first seen before the final stage; 0 if none.
double meanForgetting(const ResultsMatrix& m);

}  // namespace disco
