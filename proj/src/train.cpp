#include "walshprep/train.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "walshprep/error.hpp"

namespace walshprep {

const char *loss_name(LossType t) noexcept {
    switch (t) {
    case LossType::amplitude_sse: return "sse";
    case LossType::amplitude_sse_plus_phase: return "sse+phase";
    case LossType::complex_sse: return "complex";
    }
    return "?";
}

LossKind parse_loss(std::string_view name, double phase_weight) {
    if (name == "sse" || name == "amplitude_sse") return LossKind::amplitude();
    if (name == "sse+phase" || name == "amplitude_sse_plus_phase") {
        if (!(phase_weight > 0.0)) throw ValidationError("phase weight must be positive");
        return LossKind::amplitude_plus_phase(phase_weight);
    }
    if (name == "complex" || name == "complex_sse") return LossKind::complex();
    throw ValidationError(fmt::format("unknown loss '{}'", name));
}

void TrainConfig::validate() const {
    if (epochs < 1) throw ValidationError("epochs must be at least 1");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ValidationError("learning rate must be positive");
    }
    if (log_every < 1) throw ValidationError("log_every must be at least 1");
    if (restarts < 1) throw ValidationError("restarts must be at least 1");
    if (!(init_stddev >= 0.0)) throw ValidationError("init stddev must be nonnegative");
    if (!(phase_eps > 0.0)) throw ValidationError("phase threshold must be positive");
    if (loss.type == LossType::amplitude_sse_plus_phase && !(loss.phase_weight > 0.0)) {
        throw ValidationError("phase weight must be positive");
    }
    if (optimizer.type == OptimizerType::adam &&
        (!(optimizer.beta1 >= 0.0 && optimizer.beta1 < 1.0) ||
         !(optimizer.beta2 >= 0.0 && optimizer.beta2 < 1.0) || !(optimizer.epsilon > 0.0))) {
        throw ValidationError("invalid Adam hyperparameters");
    }
}

void validate_target(const StateVector &target, const LossKind &kind) {
    const double norm = target.norm_squared();
    if (std::abs(norm - 1.0) > 1e-10) {
        throw ValidationError(fmt::format("target is not normalized (|x|^2 = {:.17g})", norm));
    }
    if (kind.type == LossType::complex_sse) return;
    for (std::size_t j = 0; j < target.size(); ++j) {
        if (target[j].imag() != 0.0 || target[j].real() < 0.0) {
            throw ValidationError(fmt::format(
                "amplitude losses need a real nonnegative target; entry {} is ({}, {})", j,
                target[j].real(), target[j].imag()));
        }
    }
}

double amplitude_loss(std::span<const Complex> psi, std::span<const Complex> target,
                      const LossKind &kind, double phase_eps, std::span<Complex> adjoint) {
    const bool want_adjoint = !adjoint.empty();
    double total = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
        const Complex a = psi[j];
        if (kind.type == LossType::complex_sse) {
            const Complex d = a - target[j];
            total += std::norm(d);
            if (want_adjoint) adjoint[j] = 2.0 * d;
            continue;
        }
        const double modulus = std::abs(a);
        const double diff = modulus - target[j].real();
        total += diff * diff;
        Complex g = modulus > 0.0 ? (2.0 * diff / modulus) * a : Complex(0.0);
        if (kind.type == LossType::amplitude_sse_plus_phase) {
            const double theta = residual_phase(a, phase_eps);
            total += kind.phase_weight * theta * theta;
            if (modulus >= phase_eps) {
                g += (2.0 * kind.phase_weight * theta / (modulus * modulus)) *
                     Complex(a.imag(), -a.real());
            }
        }
        if (want_adjoint) adjoint[j] = g;
    }
    return total;
}

LossEvaluator::LossEvaluator(PipelineConfig config, StateVector target, LossKind kind,
                             double phase_eps)
    : config_(std::move(config)), layout_(config_), target_(std::move(target)),
      kind_(kind), phase_eps_(phase_eps) {
    if (target_.n_qubits() != config_.n_qubits) {
        throw ShapeError(fmt::format("target has {} qubits, circuit has {}",
                                     target_.n_qubits(), config_.n_qubits));
    }
    validate_target(target_, kind_);
    const std::size_t n = target_.size();
    diagonals_.assign(layout_.blocks(), std::vector<double>(n));
    phase_factors_.assign(layout_.blocks(), std::vector<Complex>(n));
    psi_.resize(n);
    adjoint_.resize(n);
    diag_grad_.resize(n);
}

double LossEvaluator::run_forward(const ParameterVector &params, bool want_adjoint) {
    if (params.values.size() != layout_.size()) {
        throw ShapeError(fmt::format("parameter vector has {} entries, layout needs {}",
                                     params.values.size(), layout_.size()));
    }
    for (std::size_t k = 0; k < layout_.blocks(); ++k) {
        const auto block = params.block(layout_, k);
        if (config_.method == Method::full_oracle) {
            std::copy(block.begin(), block.end(), diagonals_[k].begin());
        } else {
            expand_diagonal(config_.term_set->indices(), block, diagonals_[k]);
        }
    }
    for (std::size_t k = 0; k < layout_.blocks(); ++k) {
        const auto &h = diagonals_[k];
        auto &u = phase_factors_[k];
        for (std::size_t j = 0; j < h.size(); ++j) u[j] = Complex(std::cos(h[j]), -std::sin(h[j]));
    }
    auto apply = [&](const std::vector<Complex> &u) {
        for (std::size_t j = 0; j < psi_.size(); ++j) psi_[j] *= u[j];
    };
    std::fill(psi_.begin(), psi_.end(), Complex(1.0 / std::sqrt(double(psi_.size()))));
    for (int k = 0; k < config_.layers; ++k) {
        apply(phase_factors_[std::size_t(k)]);
        fwht(psi_);
    }
    if (config_.method == Method::walsh_truncated) apply(phase_factors_.back());
    return amplitude_loss(psi_, target_.amps(), kind_, phase_eps_,
                          want_adjoint ? std::span<Complex>(adjoint_) : std::span<Complex>());
}

double LossEvaluator::value(const ParameterVector &params) {
    return run_forward(params, false);
}

double LossEvaluator::value_and_gradient(const ParameterVector &params,
                                         std::span<double> grad) {
    if (grad.size() != layout_.size()) {
        throw ShapeError("gradient buffer does not match the parameter layout");
    }
    const double value = run_forward(params, true);

    // Walk the circuit backwards. psi_ is un-computed alongside the adjoint,
    // which works because every layer is unitary and cheap to invert.
    auto retreat_diagonal = [&](std::size_t k) {
        const auto &u = phase_factors_[k];
        for (std::size_t j = 0; j < psi_.size(); ++j) {
            // d loss / d h_j = Re(conj(adj_j) * (-i psi_j))
            diag_grad_[j] = (std::conj(adjoint_[j]) * psi_[j]).imag();
            const Complex undo = std::conj(u[j]);
            adjoint_[j] *= undo;
            psi_[j] *= undo;
        }
        auto out = grad.subspan(layout_.offset(k, 0), layout_.block_size());
        if (config_.method == Method::full_oracle) {
            std::copy(diag_grad_.begin(), diag_grad_.end(), out.begin());
        } else {
            // dh_j / dc_r = (-1)^{r.j}
            fwht_unnormalized(diag_grad_);
            const auto &indices = config_.term_set->indices();
            for (std::size_t t = 0; t < indices.size(); ++t) out[t] = diag_grad_[indices[t]];
        }
    };

    if (config_.method == Method::walsh_truncated) {
        retreat_diagonal(std::size_t(config_.layers));
    }
    for (int k = config_.layers - 1; k >= 0; --k) {
        fwht(adjoint_);
        fwht(psi_);
        retreat_diagonal(std::size_t(k));
    }
    return value;
}

double loss(const ParameterVector &params, const StateVector &target,
            const PipelineConfig &config, const LossKind &kind, double phase_eps) {
    LossEvaluator eval(config, target, kind, phase_eps);
    return eval.value(params);
}

std::vector<double> gradient(const ParameterVector &params, const StateVector &target,
                             const PipelineConfig &config, const LossKind &kind,
                             double phase_eps) {
    LossEvaluator eval(config, target, kind, phase_eps);
    std::vector<double> grad(eval.layout().size());
    eval.value_and_gradient(params, grad);
    return grad;
}

Optimizer::Optimizer(const OptimizerConfig &config, double learning_rate,
                     std::size_t size)
    : config_(config), learning_rate_(learning_rate) {
    if (config_.type == OptimizerType::adam) {
        m_.assign(size, 0.0);
        v_.assign(size, 0.0);
    }
}

void Optimizer::step(std::span<double> params, std::span<const double> grad) {
    if (config_.type == OptimizerType::gradient_descent) {
        for (std::size_t i = 0; i < params.size(); ++i) params[i] -= learning_rate_ * grad[i];
        return;
    }
    beta1_power_ *= config_.beta1;
    beta2_power_ *= config_.beta2;
    const double m_scale = 1.0 / (1.0 - beta1_power_);
    const double v_scale = 1.0 / (1.0 - beta2_power_);
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * grad[i];
        v_[i] = config_.beta2 * v_[i] + (1.0 - config_.beta2) * grad[i] * grad[i];
        params[i] -= learning_rate_ * (m_[i] * m_scale) /
                     (std::sqrt(v_[i] * v_scale) + config_.epsilon);
    }
}

namespace {

struct RunResult {
    std::vector<TraceEntry> trace;
    ParameterVector best_params;
    double best_loss = std::numeric_limits<double>::infinity();
    int epochs_run = 0;
};

RunResult run_once(LossEvaluator &eval, const TrainConfig &tc, std::uint64_t seed) {
    RunResult out;
    ParameterVector params = initial_parameters(eval.config(), seed, tc.init_stddev);
    std::vector<double> grad(params.values.size());
    Optimizer opt(tc.optimizer, tc.learning_rate, params.values.size());
    double last_finite = std::numeric_limits<double>::quiet_NaN();
    for (int epoch = 0;; ++epoch) {
        const double value = eval.value_and_gradient(params, grad);
        const bool finite = std::isfinite(value) &&
                            std::all_of(grad.begin(), grad.end(),
                                        [](double g) { return std::isfinite(g); });
        if (!finite) throw DivergenceError(epoch, last_finite);
        last_finite = value;
        if (value < out.best_loss) {
            out.best_loss = value;
            out.best_params = params;
        }
        const bool stop = epoch == tc.epochs || (tc.target_loss && value <= *tc.target_loss);
        if (epoch % tc.log_every == 0 || stop) out.trace.push_back({epoch, out.best_loss});
        if (stop) {
            out.epochs_run = epoch;
            break;
        }
        opt.step(params.values, grad);
    }
    return out;
}

} // namespace

TrainReport fit(const StateVector &target, const PipelineConfig &pconfig,
                const TrainConfig &tconfig) {
    tconfig.validate();
    const auto start = std::chrono::steady_clock::now();
    LossEvaluator eval(pconfig, target, tconfig.loss, tconfig.phase_eps);

    TrainReport report;
    report.seed = tconfig.seed;
    RunResult best;
    for (int r = 0; r < tconfig.restarts; ++r) {
        const std::uint64_t seed =
            r == 0 ? tconfig.seed : mix_seed(tconfig.seed, std::uint64_t(r));
        RunResult run = run_once(eval, tconfig, seed);
        report.restart_losses.push_back(run.best_loss);
        if (r == 0 || run.best_loss < best.best_loss) {
            best = std::move(run);
            report.best_restart = r;
        }
    }
    report.loss_trace = std::move(best.trace);
    report.final_params = std::move(best.best_params);
    report.final_loss = best.best_loss;
    report.epochs_run = best.epochs_run;
    report.final_infidelity =
        infidelity(target, prepared_state(report.final_params, pconfig, tconfig.phase_eps));
    report.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

void write_loss_csv(const TrainReport &report, const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "epoch,loss\n";
    for (const auto &e : report.loss_trace) out << fmt::format("{},{:.17g}\n", e.epoch, e.loss);
    if (!out) throw IoError("write failed for " + path.string());
}

void to_json(nlohmann::json &j, const TrainConfig &c) {
    j = {{"epochs", c.epochs},
         {"learning_rate", c.learning_rate},
         {"optimizer",
          {{"type", c.optimizer.type == OptimizerType::adam ? "adam" : "gradient_descent"},
           {"beta1", c.optimizer.beta1},
           {"beta2", c.optimizer.beta2},
           {"epsilon", c.optimizer.epsilon}}},
         {"seed", c.seed},
         {"loss", {{"type", loss_name(c.loss.type)}, {"phase_weight", c.loss.phase_weight}}},
         {"log_every", c.log_every},
         {"target_loss", c.target_loss ? nlohmann::json(*c.target_loss) : nlohmann::json(nullptr)},
         {"init_stddev", c.init_stddev},
         {"restarts", c.restarts},
         {"phase_eps", c.phase_eps}};
}

TrainConfig train_config_from_json(const nlohmann::json &j) {
    try {
        TrainConfig c;
        c.epochs = j.at("epochs").get<int>();
        c.learning_rate = j.at("learning_rate").get<double>();
        const auto &opt = j.at("optimizer");
        const auto type = opt.at("type").get<std::string>();
        if (type == "adam") {
            c.optimizer.type = OptimizerType::adam;
        } else if (type == "gradient_descent") {
            c.optimizer.type = OptimizerType::gradient_descent;
        } else {
            throw ParseError("unknown optimizer '" + type + "'");
        }
        c.optimizer.beta1 = opt.at("beta1").get<double>();
        c.optimizer.beta2 = opt.at("beta2").get<double>();
        c.optimizer.epsilon = opt.at("epsilon").get<double>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.loss = parse_loss(j.at("loss").at("type").get<std::string>(),
                            j.at("loss").at("phase_weight").get<double>());
        c.log_every = j.at("log_every").get<int>();
        if (j.at("target_loss").is_null()) {
            c.target_loss.reset();
        } else {
            c.target_loss = j.at("target_loss").get<double>();
        }
        c.init_stddev = j.at("init_stddev").get<double>();
        c.restarts = j.at("restarts").get<int>();
        c.phase_eps = j.at("phase_eps").get<double>();
        return c;
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("malformed train config: ") + e.what());
    }
}

void to_json(nlohmann::json &j, const TrainReport &r) {
    j = {{"final_loss", r.final_loss},
         {"final_infidelity", r.final_infidelity},
         {"wall_clock_seconds", r.wall_clock_seconds},
         {"seed", r.seed},
         {"epochs_run", r.epochs_run},
         {"best_restart", r.best_restart},
         {"restart_losses", r.restart_losses},
         {"trace_entries", r.loss_trace.size()},
         {"final_params", r.final_params.values}};
}

namespace {

double stddev_of(const std::vector<double> &xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double s = 0.0;
    for (double x : xs) s += (x - mean) * (x - mean);
    return std::sqrt(s / double(xs.size() - 1));
}

} // namespace

SweepResult sweep_dataset_sizes(const SweepOptions &options) {
    if (options.trials < 1) throw ValidationError("trials must be at least 1");
    if (options.sizes.empty() || options.distributions.empty()) {
        throw ValidationError("sweep needs at least one size and one distribution");
    }
    options.train.validate();

    SweepResult result;
    for (int n : options.sizes) {
        for (Distribution d : options.distributions) {
            for (int t = 0; t < options.trials; ++t) {
                result.rows.push_back({n, d, t, std::numeric_limits<double>::quiet_NaN(), 0.0, {}});
            }
        }
    }

    auto run_row = [&](SweepRow &row) {
        const auto start = std::chrono::steady_clock::now();
        try {
            const std::uint64_t cell = mix_seed(options.train.seed, std::uint64_t(row.trial));
            const StateVector target = random_state(row.distribution, row.n_qubits, cell);
            PipelineConfig pc;
            pc.n_qubits = row.n_qubits;
            pc.method = options.method;
            pc.layers = options.layers;
            if (pc.method == Method::walsh_truncated) {
                pc.term_set = select_terms(row.n_qubits, TermSelection::k_local(2));
            }
            TrainConfig tc = options.train;
            tc.seed = mix_seed(cell, 1);
            row.final_loss = fit(target, pc, tc).final_loss;
        } catch (const std::exception &e) {
            row.error = e.what();
        }
        row.wall_clock_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    const int threads = std::max(1, std::min<int>(options.threads, int(result.rows.size())));
    if (threads == 1) {
        for (auto &row : result.rows) run_row(row);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < result.rows.size(); i = next++) {
                    run_row(result.rows[i]);
                }
            });
        }
    }

    for (int n : options.sizes) {
        for (Distribution d : options.distributions) {
            std::vector<double> losses;
            SweepSummary s{n, d, 0.0, 0.0, 0};
            for (const auto &row : result.rows) {
                if (row.n_qubits != n || row.distribution != d) continue;
                if (row.error.empty()) {
                    losses.push_back(row.final_loss);
                } else {
                    ++s.failed_trials;
                }
            }
            if (losses.empty()) {
                s.mean_loss = s.stddev_loss = std::numeric_limits<double>::quiet_NaN();
            } else {
                double sum = 0.0;
                for (double l : losses) sum += l;
                s.mean_loss = sum / double(losses.size());
                s.stddev_loss = stddev_of(losses, s.mean_loss);
            }
            result.summaries.push_back(s);
        }
    }
    return result;
}

void write_sweep_csv(const SweepResult &result, const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "n_qubits,N,distribution,trial,final_loss,wall_clock_s\n";
    for (const auto &row : result.rows) {
        out << fmt::format("{},{},{},{},{:.17g},{:.6f}\n", row.n_qubits,
                           std::uint64_t{1} << row.n_qubits,
                           distribution_name(row.distribution), row.trial, row.final_loss,
                           row.wall_clock_seconds);
    }
    if (!out) throw IoError("write failed for " + path.string());
}

} // namespace walshprep
