#include "walshprep/statevec.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>

#include <fmt/format.h>

#include "walshprep/error.hpp"

namespace walshprep {

bool is_register_size(std::size_t n) noexcept {
    return n >= 2 && std::has_single_bit(n);
}

int qubits_for_size(std::size_t n) {
    if (!is_register_size(n)) {
        throw SizeError(fmt::format(
            "register length {} is not a power of two >= 2", n));
    }
    return std::countr_zero(n);
}

StateVector::StateVector(std::vector<Complex> amps)
    : amps_(std::move(amps)), n_qubits_(qubits_for_size(amps_.size())) {}

StateVector StateVector::basis(int n_qubits, std::uint64_t index) {
    if (n_qubits < 1 || n_qubits > 62) {
        throw SizeError(fmt::format("n_qubits {} out of range", n_qubits));
    }
    const std::size_t n = std::size_t{1} << n_qubits;
    if (index >= n) {
        throw SizeError(fmt::format("basis index {} out of range for {} qubits",
                                    index, n_qubits));
    }
    std::vector<Complex> amps(n);
    amps[index] = 1.0;
    return StateVector(std::move(amps));
}

double StateVector::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto &a : amps_) s += std::norm(a);
    return s;
}

std::vector<double> StateVector::moduli() const {
    std::vector<double> out(amps_.size());
    for (std::size_t j = 0; j < amps_.size(); ++j) out[j] = std::abs(amps_[j]);
    return out;
}

DiagonalHamiltonian::DiagonalHamiltonian(std::vector<double> coeffs)
    : coeffs_(std::move(coeffs)), n_qubits_(qubits_for_size(coeffs_.size())) {}

DiagonalHamiltonian DiagonalHamiltonian::zeros(int n_qubits) {
    if (n_qubits < 1 || n_qubits > 62) {
        throw SizeError(fmt::format("n_qubits {} out of range", n_qubits));
    }
    return DiagonalHamiltonian(std::vector<double>(std::size_t{1} << n_qubits));
}

double wrap_two_pi(double angle) noexcept {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(angle, two_pi);
    if (r < 0.0) r += two_pi;
    // fmod of a tiny negative value can round up to exactly 2*pi
    if (r >= two_pi) r = 0.0;
    return r;
}

DiagonalHamiltonian DiagonalHamiltonian::canonicalized() const {
    std::vector<double> out(coeffs_.size());
    for (std::size_t j = 0; j < coeffs_.size(); ++j) out[j] = wrap_two_pi(coeffs_[j]);
    return DiagonalHamiltonian(std::move(out));
}

StateVector uniform_state(int n_qubits, int max_qubits) {
    if (n_qubits < 1 || n_qubits > max_qubits) {
        throw SizeError(fmt::format("n_qubits {} outside [1, {}]", n_qubits,
                                    max_qubits));
    }
    const std::size_t n = std::size_t{1} << n_qubits;
    return StateVector(
        std::vector<Complex>(n, Complex(1.0 / std::sqrt(double(n)), 0.0)));
}

void fwht(std::span<Complex> amps) noexcept {
    const std::size_t n = amps.size();
    const double s = std::numbers::sqrt2 / 2.0;
    for (std::size_t half = 1; half < n; half <<= 1) {
        for (std::size_t block = 0; block < n; block += 2 * half) {
            for (std::size_t k = block; k < block + half; ++k) {
                const Complex a = amps[k];
                const Complex b = amps[k + half];
                amps[k] = (a + b) * s;
                amps[k + half] = (a - b) * s;
            }
        }
    }
}

void fwht(StateVector &state) noexcept { fwht(state.amps()); }

void fwht_unnormalized(std::span<double> values) noexcept {
    const std::size_t n = values.size();
    for (std::size_t half = 1; half < n; half <<= 1) {
        for (std::size_t block = 0; block < n; block += 2 * half) {
            for (std::size_t k = block; k < block + half; ++k) {
                const double a = values[k];
                const double b = values[k + half];
                values[k] = a + b;
                values[k + half] = a - b;
            }
        }
    }
}

void evolve_diagonal(std::span<Complex> amps, std::span<const double> h) {
    if (amps.size() != h.size()) {
        throw ShapeError(fmt::format("state length {} != hamiltonian length {}",
                                     amps.size(), h.size()));
    }
    for (std::size_t j = 0; j < amps.size(); ++j) {
        amps[j] *= Complex(std::cos(h[j]), -std::sin(h[j]));
    }
}

void evolve_diagonal(StateVector &state, const DiagonalHamiltonian &h) {
    evolve_diagonal(state.amps(), h.coeffs());
}

double fidelity(const StateVector &a, const StateVector &b) {
    if (a.size() != b.size()) {
        throw ShapeError(fmt::format("fidelity of states with lengths {} and {}",
                                     a.size(), b.size()));
    }
    Complex overlap = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) overlap += std::conj(a[j]) * b[j];
    return std::min(1.0, std::norm(overlap));
}

double infidelity(const StateVector &a, const StateVector &b) {
    return std::max(0.0, 1.0 - fidelity(a, b));
}

double residual_phase(Complex amp, double eps) noexcept {
    if (std::abs(amp) < eps) return 0.0;
    double theta = -std::arg(amp);
    if (theta <= -std::numbers::pi) theta = std::numbers::pi;
    return theta;
}

std::vector<double> phases(const StateVector &state, double eps) {
    if (!(eps > 0.0)) throw ValidationError("phase threshold must be positive");
    std::vector<double> out(state.size());
    for (std::size_t j = 0; j < state.size(); ++j) {
        out[j] = residual_phase(state[j], eps);
    }
    return out;
}

namespace {

// Serialized form is little-endian; hosts we build on are too.
static_assert(std::endian::native == std::endian::little,
              "binary state format assumes a little-endian host");

template <typename T> void write_raw(std::ofstream &out, T value) {
    out.write(reinterpret_cast<const char *>(&value), sizeof(T));
}

template <typename T> T read_raw(std::ifstream &in) {
    T value{};
    in.read(reinterpret_cast<char *>(&value), sizeof(T));
    return value;
}

} // namespace

void save_state_binary(const StateVector &state,
                       const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_raw<std::uint64_t>(out, state.size());
    for (const auto &a : state.amps()) {
        write_raw(out, a.real());
        write_raw(out, a.imag());
    }
    if (!out) throw IoError("write failed for " + path.string());
}

StateVector load_state_binary(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    const auto n = read_raw<std::uint64_t>(in);
    if (!in) throw ParseError(path.string() + ": truncated header");
    if (!is_register_size(n) || n > (std::uint64_t{1} << 40)) {
        throw ParseError(fmt::format("{}: invalid length {}", path.string(), n));
    }
    std::vector<Complex> amps(n);
    for (auto &a : amps) {
        const double re = read_raw<double>(in);
        const double im = read_raw<double>(in);
        a = Complex(re, im);
    }
    if (!in) throw ParseError(path.string() + ": truncated amplitude data");
    return StateVector(std::move(amps));
}

void save_state_csv(const StateVector &state,
                    const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "index,re,im,modulus,phase\n";
    for (std::size_t j = 0; j < state.size(); ++j) {
        const Complex a = state[j];
        out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g}\n", j, a.real(),
                           a.imag(), std::abs(a), residual_phase(a));
    }
}

} // namespace walshprep
