#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "walshprep/circuit.hpp"
#include "walshprep/train.hpp"

namespace walshprep {

/// One published target marked against its acceptance threshold.
struct Check {
    std::string name;
    double value = 0.0;
    /// "<=", ">=", "<" or "==".
    std::string comparison;
    double threshold = 0.0;
    bool passed = false;

    static Check make(std::string name, double value, std::string comparison,
                      double threshold);
};

void to_json(nlohmann::json &j, const Check &c);

struct Table1Result {
    GateCounts two_local;
    GateCounts hardware_efficient;
    std::vector<Check> checks;
};

/// Gate counts of one evolution layer for two-local and ladder terms.
Table1Result reproduce_table1(int n_qubits = 8);

struct Table2Options {
    int n_qubits = 8;
    int epochs = 20000;
    double learning_rate = 0.01;
    int restarts = 8;
    std::uint64_t seed = 2024;
    LossKind loss = LossKind::complex();
};

struct Table2Entry {
    std::string dataset;
    std::string terms;
    double infidelity = 0.0;
    double final_loss = 0.0;
    int epochs_run = 0;
    double wall_clock_seconds = 0.0;
    TrainReport report;
};

struct Table2Result {
    std::vector<Table2Entry> entries;
    std::vector<Check> checks;
};

/// Walsh-method training on the linear and sine states for both term sets.
Table2Result reproduce_table2(const Table2Options &options = {});

struct LayerComparisonOptions {
    int n_qubits = 8;
    int epochs = 2000;
    int trials = 3;
    double learning_rate = 0.05;
    std::uint64_t seed = 7;
};

struct LayerRun {
    int layers = 0;
    int trial = 0;
    TrainReport report;
};

struct LayerComparisonResult {
    std::vector<LayerRun> runs;
    std::vector<Check> checks;
};

/**
 * Full-method training with one and with two evolution layers on
 * uniform-random targets, amplitude loss. Checks that two layers reach 1e-10
 * while one layer stays above 1e-6.
 */
LayerComparisonResult reproduce_layer_comparison(const LayerComparisonOptions &options = {});

struct DatasetSizeOptions {
    std::vector<int> sizes{6, 8, 10};
    int trials = 10;
    int epochs = 500;
    double learning_rate = 0.05;
    std::uint64_t seed = 11;
    int threads = 1;
};

struct DatasetSizeResult {
    SweepResult sweep;
    std::vector<Check> checks;
};

/// Final loss against register size for uniform and normal data.
DatasetSizeResult reproduce_dataset_sizes(const DatasetSizeOptions &options = {});

} // namespace walshprep
