#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "walshprep/statevec.hpp"
#include "walshprep/walsh.hpp"

namespace walshprep {

/**
 * full_oracle: every diagonal entry of each evolution is trainable and the
 * residual phases are removed analytically afterwards.
 * walsh_truncated: each evolution is restricted to a Walsh support and the
 * final phase-removing evolution is trained as well.
 */
enum class Method { full_oracle, walsh_truncated };

const char *method_name(Method m) noexcept;
Method parse_method(std::string_view name);

/// Shape of the state-preparation circuit.
struct PipelineConfig {
    int n_qubits = 0;
    Method method = Method::full_oracle;
    /// Number of (diagonal evolution, Hadamard layer) blocks: 1 or 2.
    int layers = 2;
    std::optional<TermSet> term_set;

    /// Throws ValidationError when the combination is inconsistent.
    void validate() const;

    friend bool operator==(const PipelineConfig &, const PipelineConfig &) = default;
};

/**
 * Maps (block, slot) to a flat offset. A block is one diagonal evolution;
 * slots are basis indices j for full_oracle and positions in the TermSet for
 * walsh_truncated. walsh_truncated carries one extra block for the trained
 * final evolution.
 */
class ParameterLayout {
  public:
    explicit ParameterLayout(const PipelineConfig &config);

    std::size_t blocks() const noexcept { return blocks_; }
    std::size_t block_size() const noexcept { return block_size_; }
    std::size_t size() const noexcept { return blocks_ * block_size_; }

    std::size_t offset(std::size_t block, std::size_t slot) const;

    /// Offset of Walsh index @p r in @p block; walsh_truncated only.
    std::size_t walsh_offset(std::size_t block, WalshIndex r) const;

  private:
    std::size_t blocks_;
    std::size_t block_size_;
    std::optional<TermSet> terms_;
};

struct ParameterVector {
    std::vector<double> values;

    std::span<const double> block(const ParameterLayout &layout,
                                  std::size_t k) const {
        return std::span<const double>(values).subspan(
            layout.offset(k, 0), layout.block_size());
    }
    std::span<double> block(const ParameterLayout &layout, std::size_t k) {
        return std::span<double>(values).subspan(layout.offset(k, 0),
                                                 layout.block_size());
    }

    friend bool operator==(const ParameterVector &, const ParameterVector &) = default;
};

/// i.i.d. N(0, stddev^2) parameters; stddev 0 gives all zeros.
ParameterVector initial_parameters(const PipelineConfig &config,
                                   std::uint64_t seed, double stddev = 0.1);

/**
 * Diagonal (length N) of evolution block @p k. For walsh_truncated this is the
 * Walsh expansion of the block's coefficients over the TermSet.
 */
void block_diagonal(const ParameterVector &params, const PipelineConfig &config,
                    std::size_t k, std::span<double> out);

/// Every block's diagonal, block-major.
std::vector<std::vector<double>> block_diagonals(const ParameterVector &params,
                                                 const PipelineConfig &config);

/**
 * Circuit output. Starting from F|0...0>, each block applies its diagonal
 * evolution followed by a Hadamard layer F. walsh_truncated then applies its
 * final trained evolution with no Hadamard after it.
 */
StateVector forward(const ParameterVector &params, const PipelineConfig &config);

/// h_j = -theta_j so that evolving @p state by it removes the residual phases.
DiagonalHamiltonian phase_correction(const StateVector &state,
                                     double eps = kDefaultPhaseEps);

/// forward() followed by its own phase correction. full_oracle only.
StateVector prepared_state_method1(const ParameterVector &params,
                                   const PipelineConfig &config,
                                   double eps = kDefaultPhaseEps);

/// The state the circuit finally prepares under either method.
StateVector prepared_state(const ParameterVector &params,
                           const PipelineConfig &config,
                           double eps = kDefaultPhaseEps);

void to_json(nlohmann::json &j, const PipelineConfig &c);
PipelineConfig pipeline_config_from_json(const nlohmann::json &j);

} // namespace walshprep
