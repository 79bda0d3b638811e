#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace walshprep {

using Complex = std::complex<double>;

/// Default upper bound on register size for desk-scale runs.
inline constexpr int kDefaultMaxQubits = 26;

/// Amplitudes with modulus below this are treated as having no phase.
inline constexpr double kDefaultPhaseEps = 1e-10;

/// True when @p n is a power of two and at least 2.
bool is_register_size(std::size_t n) noexcept;

/// log2 of a register size; throws SizeError when not a power of two >= 2.
int qubits_for_size(std::size_t n);

/**
 * Dense amplitude vector of an n-qubit register.
 *
 * Index bit q corresponds to qubit q, so amplitude j belongs to the basis
 * state |j> with qubit 0 as the least significant bit.
 */
class StateVector {
  public:
    /// Takes ownership of @p amps; the length must be a power of two >= 2.
    explicit StateVector(std::vector<Complex> amps);

    /// |0...0> on @p n_qubits qubits.
    static StateVector basis(int n_qubits, std::uint64_t index = 0);

    int n_qubits() const noexcept { return n_qubits_; }
    std::size_t size() const noexcept { return amps_.size(); }

    std::span<Complex> amps() noexcept { return amps_; }
    std::span<const Complex> amps() const noexcept { return amps_; }

    Complex &operator[](std::size_t i) noexcept { return amps_[i]; }
    const Complex &operator[](std::size_t i) const noexcept { return amps_[i]; }

    /// Sum of squared moduli.
    double norm_squared() const noexcept;

    /// Moduli |amps_j|.
    std::vector<double> moduli() const;

    friend bool operator==(const StateVector &, const StateVector &) = default;

  private:
    std::vector<Complex> amps_;
    int n_qubits_;
};

/**
 * Real diagonal of a Hamiltonian, one phase coefficient per basis state, in
 * radians. Coefficients are stored as given; evolution only depends on them
 * modulo 2*pi and canonicalized() maps them into [0, 2*pi).
 */
class DiagonalHamiltonian {
  public:
    explicit DiagonalHamiltonian(std::vector<double> coeffs);

    static DiagonalHamiltonian zeros(int n_qubits);

    int n_qubits() const noexcept { return n_qubits_; }
    std::size_t size() const noexcept { return coeffs_.size(); }

    std::span<const double> coeffs() const noexcept { return coeffs_; }
    std::span<double> coeffs() noexcept { return coeffs_; }
    double operator[](std::size_t i) const noexcept { return coeffs_[i]; }

    /// Copy with every coefficient reduced into [0, 2*pi).
    DiagonalHamiltonian canonicalized() const;

    friend bool operator==(const DiagonalHamiltonian &,
                           const DiagonalHamiltonian &) = default;

  private:
    std::vector<double> coeffs_;
    int n_qubits_;
};

/// Reduce an angle into [0, 2*pi).
double wrap_two_pi(double angle) noexcept;

/// Equal superposition 1/sqrt(N) sum_j |j>.
StateVector uniform_state(int n_qubits, int max_qubits = kDefaultMaxQubits);

/**
 * In-place normalized Walsh-Hadamard transform, i.e. the Hadamard gate on
 * every qubit. Every butterfly stage carries its own 1/sqrt(2), so the buffer
 * is a unit vector between stages whenever it starts as one.
 */
void fwht(std::span<Complex> amps) noexcept;
void fwht(StateVector &state) noexcept;

/// In-place Walsh-Hadamard transform without normalization.
void fwht_unnormalized(std::span<double> values) noexcept;

/// Multiply amplitude j by exp(-i h_j). Throws ShapeError on length mismatch.
void evolve_diagonal(StateVector &state, const DiagonalHamiltonian &h);
void evolve_diagonal(std::span<Complex> amps, std::span<const double> h);

/// |<a|b>|^2.
double fidelity(const StateVector &a, const StateVector &b);

/// 1 - fidelity(a, b), clamped at zero.
double infidelity(const StateVector &a, const StateVector &b);

/**
 * Residual phase theta_j of each amplitude, with amps_j = |amps_j| e^{-i theta_j}
 * and theta_j in (-pi, pi]. Entries with modulus below @p eps report 0.
 */
std::vector<double> phases(const StateVector &state,
                           double eps = kDefaultPhaseEps);

/// Phase of a single amplitude under the same convention as phases().
double residual_phase(Complex amp, double eps = kDefaultPhaseEps) noexcept;

// Binary layout: u64 little-endian N, then N (re, im) little-endian doubles.
void save_state_binary(const StateVector &state,
                       const std::filesystem::path &path);
StateVector load_state_binary(const std::filesystem::path &path);

/// CSV with header "index,re,im,modulus,phase".
void save_state_csv(const StateVector &state,
                    const std::filesystem::path &path);

} // namespace walshprep
