#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "walshprep/datasets.hpp"
#include "walshprep/pipeline.hpp"
#include "walshprep/statevec.hpp"

namespace walshprep {

enum class LossType {
    /// sum_j (|psi_j| - x_j)^2
    amplitude_sse,
    /// amplitude_sse + w * sum_j theta_j^2
    amplitude_sse_plus_phase,
    /// sum_j |psi_j - x_j|^2
    complex_sse,
};

struct LossKind {
    LossType type = LossType::complex_sse;
    double phase_weight = 1.0;

    static LossKind amplitude() { return {LossType::amplitude_sse, 1.0}; }
    static LossKind amplitude_plus_phase(double w = 1.0) {
        return {LossType::amplitude_sse_plus_phase, w};
    }
    static LossKind complex() { return {LossType::complex_sse, 1.0}; }

    friend bool operator==(const LossKind &, const LossKind &) = default;
};

/// CLI spellings: "sse", "sse+phase", "complex".
const char *loss_name(LossType t) noexcept;
LossKind parse_loss(std::string_view name, double phase_weight = 1.0);

enum class OptimizerType { adam, gradient_descent };

struct OptimizerConfig {
    OptimizerType type = OptimizerType::adam;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    friend bool operator==(const OptimizerConfig &, const OptimizerConfig &) = default;
};

struct TrainConfig {
    int epochs = 500;
    double learning_rate = 0.05;
    OptimizerConfig optimizer;
    std::uint64_t seed = 0;
    LossKind loss;
    int log_every = 1;
    /// Stop as soon as the loss reaches this value.
    std::optional<double> target_loss = 1e-14;
    /// Standard deviation of the Gaussian parameter initialization.
    double init_stddev = 0.1;
    /// Independent seeded initializations; the lowest final loss wins.
    int restarts = 1;
    double phase_eps = kDefaultPhaseEps;

    void validate() const;

    friend bool operator==(const TrainConfig &, const TrainConfig &) = default;
};

struct TraceEntry {
    int epoch;
    /// Lowest loss seen up to and including this epoch.
    double loss;
};

struct TrainReport {
    std::vector<TraceEntry> loss_trace;
    ParameterVector final_params;
    double final_loss = 0.0;
    double final_infidelity = 0.0;
    double wall_clock_seconds = 0.0;
    std::uint64_t seed = 0;
    /// Epochs taken by the winning restart.
    int epochs_run = 0;
    int best_restart = 0;
    std::vector<double> restart_losses;
};

/// Throws ValidationError unless @p target is unit norm (and, for the
/// amplitude losses, real and nonnegative).
void validate_target(const StateVector &target, const LossKind &kind);

/**
 * Loss of the circuit output against @p target, together with its exact
 * gradient. The gradient comes from one forward pass and one adjoint pass that
 * retraces the circuit backwards, so the cost is that of a few forward runs
 * and memory stays O(N).
 */
class LossEvaluator {
  public:
    LossEvaluator(PipelineConfig config, StateVector target, LossKind kind,
                  double phase_eps = kDefaultPhaseEps);

    const PipelineConfig &config() const noexcept { return config_; }
    const ParameterLayout &layout() const noexcept { return layout_; }

    double value(const ParameterVector &params);

    /// Loss; writes d loss / d params into @p grad (length layout().size()).
    double value_and_gradient(const ParameterVector &params, std::span<double> grad);

  private:
    double run_forward(const ParameterVector &params, bool want_adjoint);

    PipelineConfig config_;
    ParameterLayout layout_;
    StateVector target_;
    LossKind kind_;
    double phase_eps_;
    std::vector<std::vector<double>> diagonals_;
    std::vector<std::vector<Complex>> phase_factors_;
    std::vector<Complex> psi_;
    std::vector<Complex> adjoint_;
    std::vector<double> diag_grad_;
};

/// Loss value and per-amplitude adjoint d loss / d conj(psi) * 2 (written
/// into @p adjoint when nonempty).
double amplitude_loss(std::span<const Complex> psi, std::span<const Complex> target,
                      const LossKind &kind, double phase_eps,
                      std::span<Complex> adjoint = {});

double loss(const ParameterVector &params, const StateVector &target,
            const PipelineConfig &config, const LossKind &kind,
            double phase_eps = kDefaultPhaseEps);

std::vector<double> gradient(const ParameterVector &params, const StateVector &target,
                             const PipelineConfig &config, const LossKind &kind,
                             double phase_eps = kDefaultPhaseEps);

/// First-order update rule applied in place.
class Optimizer {
  public:
    Optimizer(const OptimizerConfig &config, double learning_rate, std::size_t size);

    void step(std::span<double> params, std::span<const double> grad);

  private:
    OptimizerConfig config_;
    double learning_rate_;
    std::vector<double> m_;
    std::vector<double> v_;
    double beta1_power_ = 1.0;
    double beta2_power_ = 1.0;
};

/**
 * Train the circuit towards @p target. The reported infidelity is measured on
 * the finally prepared state: after analytic phase correction for the full
 * method, the raw output for the Walsh method.
 * Throws DivergenceError on a non-finite loss.
 */
TrainReport fit(const StateVector &target, const PipelineConfig &pconfig,
                const TrainConfig &tconfig);

void write_loss_csv(const TrainReport &report, const std::filesystem::path &path);

void to_json(nlohmann::json &j, const TrainConfig &c);
TrainConfig train_config_from_json(const nlohmann::json &j);

/// Scalar results and the winning parameters; the loss trace lives in CSV.
void to_json(nlohmann::json &j, const TrainReport &r);

struct SweepRow {
    int n_qubits = 0;
    Distribution distribution = Distribution::uniform;
    int trial = 0;
    double final_loss = 0.0;
    double wall_clock_seconds = 0.0;
    /// Empty unless the trial failed.
    std::string error;
};

struct SweepSummary {
    int n_qubits = 0;
    Distribution distribution = Distribution::uniform;
    double mean_loss = 0.0;
    double stddev_loss = 0.0;
    int failed_trials = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<SweepSummary> summaries;
};

struct SweepOptions {
    std::vector<int> sizes;
    std::vector<Distribution> distributions{Distribution::uniform, Distribution::normal};
    int trials = 10;
    Method method = Method::full_oracle;
    int layers = 2;
    TrainConfig train;
    /// Worker threads for independent trials; results do not depend on it.
    int threads = 1;
};

/**
 * Final loss over a grid of (size, distribution) for independent seeded
 * datasets. Failed trials are recorded in their row and left out of the
 * summary statistics.
 */
SweepResult sweep_dataset_sizes(const SweepOptions &options);

/// Header: n_qubits,N,distribution,trial,final_loss,wall_clock_s
void write_sweep_csv(const SweepResult &result, const std::filesystem::path &path);

} // namespace walshprep
