#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "walshprep/statevec.hpp"

namespace walshprep {

/// Random target distributions.
enum class Distribution { uniform, normal };

const char *distribution_name(Distribution d) noexcept;
Distribution parse_distribution(std::string_view name);

/// splitmix64 finalizer of base ^ index; used to derive per-trial seeds.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) noexcept;

/// amps_j = j * sqrt(6 / (N (N-1) (2N-1))).
StateVector linear_state(int n_qubits);

/// amps_j = sqrt(2/N) sin(pi (j + 1/2) / N).
StateVector sine_state(int n_qubits);

/**
 * i.i.d. samples, L2-normalized. uniform draws from U[0, 1]. normal draws from
 * N(0, 1) and keeps the modulus unless @p keep_sign is set, in which case
 * negative samples stay negative (a pi phase on that amplitude).
 */
StateVector random_state(Distribution kind, int n_qubits, std::uint64_t seed,
                         bool keep_sign = false);

/**
 * Read one nonnegative decimal value per line ('#' starts a comment, blank
 * lines skipped) and L2-normalize. The count must be a power of two.
 */
StateVector load_amplitudes(const std::filesystem::path &path);

/// Write the real parts one per line at 17 significant digits.
void save_amplitudes(const StateVector &state, const std::filesystem::path &path);

/// Target description as accepted on the command line.
struct TargetSpec {
    enum class Kind { uniform_random, normal_random, linear, sine, file };

    Kind kind = Kind::uniform_random;
    int n_qubits = 0;
    std::uint64_t seed = 0;
    std::filesystem::path path;

    /// "uniform", "normal", "linear", "sine" or "file:<path>".
    static TargetSpec parse(std::string_view text, int n_qubits, std::uint64_t seed);

    std::string to_string() const;

    StateVector build() const;

    friend bool operator==(const TargetSpec &, const TargetSpec &) = default;
};

} // namespace walshprep
