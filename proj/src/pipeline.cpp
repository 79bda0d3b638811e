#include "walshprep/pipeline.hpp"

#include <random>

#include <fmt/format.h>

#include "walshprep/error.hpp"

namespace walshprep {

const char *method_name(Method m) noexcept {
    return m == Method::full_oracle ? "full" : "walsh";
}

Method parse_method(std::string_view name) {
    if (name == "full" || name == "full_oracle") return Method::full_oracle;
    if (name == "walsh" || name == "walsh_truncated") return Method::walsh_truncated;
    throw ValidationError(fmt::format("unknown method '{}'", name));
}

void PipelineConfig::validate() const {
    if (n_qubits < 1 || n_qubits > kDefaultMaxQubits) {
        throw ValidationError(fmt::format("n_qubits {} outside [1, {}]", n_qubits,
                                          kDefaultMaxQubits));
    }
    if (layers != 1 && layers != 2) {
        throw ValidationError(fmt::format("layers must be 1 or 2, got {}", layers));
    }
    if (method == Method::walsh_truncated) {
        if (!term_set || term_set->empty()) {
            throw ValidationError("walsh method requires a nonempty term set");
        }
        if (term_set->n_qubits() != n_qubits) {
            throw ValidationError(fmt::format("term set built for {} qubits, config has {}",
                                              term_set->n_qubits(), n_qubits));
        }
    }
}

ParameterLayout::ParameterLayout(const PipelineConfig &config) {
    config.validate();
    if (config.method == Method::full_oracle) {
        blocks_ = std::size_t(config.layers);
        block_size_ = std::size_t{1} << config.n_qubits;
    } else {
        blocks_ = std::size_t(config.layers) + 1;
        block_size_ = config.term_set->size();
        terms_ = config.term_set;
    }
}

std::size_t ParameterLayout::offset(std::size_t block, std::size_t slot) const {
    if (block >= blocks_ || slot >= block_size_) {
        throw ShapeError(fmt::format("parameter ({}, {}) outside layout {}x{}", block,
                                     slot, blocks_, block_size_));
    }
    return block * block_size_ + slot;
}

std::size_t ParameterLayout::walsh_offset(std::size_t block, WalshIndex r) const {
    if (!terms_) throw ShapeError("layout has no Walsh terms");
    const auto pos = terms_->position(r);
    if (!pos) throw ShapeError(fmt::format("Walsh index {} not in term set", r));
    return offset(block, *pos);
}

ParameterVector initial_parameters(const PipelineConfig &config,
                                   std::uint64_t seed, double stddev) {
    const ParameterLayout layout(config);
    ParameterVector p{std::vector<double>(layout.size(), 0.0)};
    if (stddev > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> dist(0.0, stddev);
        for (auto &v : p.values) v = dist(rng);
    } else if (stddev < 0.0) {
        throw ValidationError("initialization stddev must be nonnegative");
    }
    return p;
}

namespace {

void check_layout(const ParameterVector &params, const ParameterLayout &layout) {
    if (params.values.size() != layout.size()) {
        throw ShapeError(fmt::format("parameter vector has {} entries, layout needs {}",
                                     params.values.size(), layout.size()));
    }
}

void fill_block(const ParameterVector &params, const PipelineConfig &config,
                const ParameterLayout &layout, std::size_t k, std::span<double> out) {
    const auto block = params.block(layout, k);
    if (config.method == Method::full_oracle) {
        std::copy(block.begin(), block.end(), out.begin());
    } else {
        expand_diagonal(config.term_set->indices(), block, out);
    }
}

} // namespace

void block_diagonal(const ParameterVector &params, const PipelineConfig &config,
                    std::size_t k, std::span<double> out) {
    const ParameterLayout layout(config);
    check_layout(params, layout);
    if (out.size() != (std::size_t{1} << config.n_qubits)) {
        throw ShapeError("diagonal buffer has the wrong length");
    }
    fill_block(params, config, layout, k, out);
}

std::vector<std::vector<double>> block_diagonals(const ParameterVector &params,
                                                 const PipelineConfig &config) {
    const ParameterLayout layout(config);
    check_layout(params, layout);
    const std::size_t n = std::size_t{1} << config.n_qubits;
    std::vector<std::vector<double>> out(layout.blocks(), std::vector<double>(n));
    for (std::size_t k = 0; k < layout.blocks(); ++k) {
        fill_block(params, config, layout, k, out[k]);
    }
    return out;
}

StateVector forward(const ParameterVector &params, const PipelineConfig &config) {
    const auto diagonals = block_diagonals(params, config);
    StateVector psi = uniform_state(config.n_qubits);
    for (int k = 0; k < config.layers; ++k) {
        evolve_diagonal(psi.amps(), diagonals[std::size_t(k)]);
        fwht(psi);
    }
    if (config.method == Method::walsh_truncated) {
        evolve_diagonal(psi.amps(), diagonals.back());
    }
    return psi;
}

DiagonalHamiltonian phase_correction(const StateVector &state, double eps) {
    auto theta = phases(state, eps);
    for (auto &t : theta) t = -t;
    return DiagonalHamiltonian(std::move(theta));
}

StateVector prepared_state_method1(const ParameterVector &params,
                                   const PipelineConfig &config, double eps) {
    if (config.method != Method::full_oracle) {
        throw UnsupportedError("analytic phase correction applies to the full method only");
    }
    StateVector psi = forward(params, config);
    evolve_diagonal(psi, phase_correction(psi, eps));
    return psi;
}

StateVector prepared_state(const ParameterVector &params,
                           const PipelineConfig &config, double eps) {
    if (config.method == Method::full_oracle) {
        return prepared_state_method1(params, config, eps);
    }
    return forward(params, config);
}

void to_json(nlohmann::json &j, const PipelineConfig &c) {
    j = {{"n_qubits", c.n_qubits}, {"method", method_name(c.method)}, {"layers", c.layers}};
    j["term_set"] = c.term_set ? nlohmann::json(*c.term_set) : nlohmann::json(nullptr);
}

PipelineConfig pipeline_config_from_json(const nlohmann::json &j) {
    try {
        PipelineConfig c;
        c.n_qubits = j.at("n_qubits").get<int>();
        c.method = parse_method(j.at("method").get<std::string>());
        c.layers = j.at("layers").get<int>();
        if (j.contains("term_set") && !j.at("term_set").is_null()) {
            c.term_set = term_set_from_json(j.at("term_set"));
        }
        return c;
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("malformed pipeline config: ") + e.what());
    }
}

} // namespace walshprep
