#include "walshprep/datasets.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "walshprep/error.hpp"

namespace walshprep {

const char *distribution_name(Distribution d) noexcept {
    return d == Distribution::uniform ? "uniform" : "normal";
}

Distribution parse_distribution(std::string_view name) {
    if (name == "uniform") return Distribution::uniform;
    if (name == "normal") return Distribution::normal;
    throw ValidationError(fmt::format("unknown distribution '{}'", name));
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) noexcept {
    std::uint64_t z = (base ^ index) + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

void check_qubits(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kDefaultMaxQubits) {
        throw SizeError(fmt::format("n_qubits {} outside [1, {}]", n_qubits,
                                    kDefaultMaxQubits));
    }
}

StateVector normalized(std::vector<double> values) {
    double s = 0.0;
    for (double v : values) s += v * v;
    if (!(s > 0.0)) throw ValidationError("amplitude vector is all zero");
    const double inv = 1.0 / std::sqrt(s);
    std::vector<Complex> amps(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) amps[j] = values[j] * inv;
    return StateVector(std::move(amps));
}

} // namespace

StateVector linear_state(int n_qubits) {
    check_qubits(n_qubits);
    const double n = std::ldexp(1.0, n_qubits);
    const double scale = std::sqrt(6.0 / (n * (n - 1.0) * (2.0 * n - 1.0)));
    std::vector<Complex> amps(static_cast<std::size_t>(n));
    for (std::size_t j = 0; j < amps.size(); ++j) amps[j] = double(j) * scale;
    return StateVector(std::move(amps));
}

StateVector sine_state(int n_qubits) {
    check_qubits(n_qubits);
    const double n = std::ldexp(1.0, n_qubits);
    const double scale = std::sqrt(2.0 / n);
    std::vector<Complex> amps(static_cast<std::size_t>(n));
    for (std::size_t j = 0; j < amps.size(); ++j) {
        amps[j] = scale * std::sin(std::numbers::pi * (double(j) + 0.5) / n);
    }
    // Pin the mirror symmetry exactly; sin(pi - x) can differ in the last ulp.
    for (std::size_t j = 0; j < amps.size() / 2; ++j) amps[amps.size() - 1 - j] = amps[j];
    return StateVector(std::move(amps));
}

StateVector random_state(Distribution kind, int n_qubits, std::uint64_t seed,
                         bool keep_sign) {
    check_qubits(n_qubits);
    std::mt19937_64 rng(seed);
    std::vector<double> values(std::size_t{1} << n_qubits);
    if (kind == Distribution::uniform) {
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        for (auto &v : values) v = dist(rng);
    } else {
        std::normal_distribution<double> dist(0.0, 1.0);
        for (auto &v : values) v = keep_sign ? dist(rng) : std::abs(dist(rng));
    }
    return normalized(std::move(values));
}

StateVector load_amplitudes(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<double> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        const std::string field = line.substr(first, last - first + 1);
        std::size_t consumed = 0;
        double v = 0.0;
        try {
            v = std::stod(field, &consumed);
        } catch (const std::exception &) {
            consumed = 0;
        }
        if (consumed != field.size() || !std::isfinite(v)) {
            throw ParseError(fmt::format("{}:{}: cannot parse '{}'", path.string(),
                                         line_no, field));
        }
        if (v < 0.0) {
            throw ValidationError(fmt::format(
                "{}:{}: negative value {}; targets are amplitude moduli and must be "
                "nonnegative",
                path.string(), line_no, field));
        }
        values.push_back(v);
    }
    if (!is_register_size(values.size())) {
        throw SizeError(fmt::format("{}: {} values is not a power of two >= 2",
                                    path.string(), values.size()));
    }
    return normalized(std::move(values));
}

void save_amplitudes(const StateVector &state, const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    for (const auto &a : state.amps()) out << fmt::format("{:.17g}\n", a.real());
    if (!out) throw IoError("write failed for " + path.string());
}

TargetSpec TargetSpec::parse(std::string_view text, int n_qubits, std::uint64_t seed) {
    TargetSpec spec;
    spec.n_qubits = n_qubits;
    spec.seed = seed;
    if (text == "uniform") {
        spec.kind = Kind::uniform_random;
    } else if (text == "normal") {
        spec.kind = Kind::normal_random;
    } else if (text == "linear") {
        spec.kind = Kind::linear;
    } else if (text == "sine") {
        spec.kind = Kind::sine;
    } else if (text.starts_with("file:") && text.size() > 5) {
        spec.kind = Kind::file;
        spec.path = std::string(text.substr(5));
    } else {
        throw ValidationError(fmt::format(
            "unknown target '{}' (expected uniform, normal, linear, sine, file:<path>)",
            text));
    }
    return spec;
}

std::string TargetSpec::to_string() const {
    switch (kind) {
    case Kind::uniform_random: return "uniform";
    case Kind::normal_random: return "normal";
    case Kind::linear: return "linear";
    case Kind::sine: return "sine";
    case Kind::file: return "file:" + path.string();
    }
    return "?";
}

StateVector TargetSpec::build() const {
    switch (kind) {
    case Kind::uniform_random: return random_state(Distribution::uniform, n_qubits, seed);
    case Kind::normal_random: return random_state(Distribution::normal, n_qubits, seed);
    case Kind::linear: return linear_state(n_qubits);
    case Kind::sine: return sine_state(n_qubits);
    case Kind::file: {
        auto s = load_amplitudes(path);
        if (n_qubits != 0 && s.n_qubits() != n_qubits) {
            throw ValidationError(fmt::format("{} holds {} qubits of data, expected {}",
                                              path.string(), s.n_qubits(), n_qubits));
        }
        return s;
    }
    }
    throw ValidationError("unknown target kind");
}

} // namespace walshprep
