#include "qozcp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace qozcp {
namespace {

constexpr int kMaxBisections = 200;
constexpr double kBisectionTolerance = 1e-12;
constexpr int kMaxBacktracks = 30;

double norm2(std::span<const Complex> v) {
    double s = 0.0;
    for (const auto& c : v) s += std::norm(c);
    return s;
}

double checked(double f) {
    if (!std::isfinite(f)) throw std::runtime_error("sdamm: objective became non-finite");
    return f;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_digest(const SolverConfig& c) {
    std::ostringstream os;
    os.precision(17);
    os << c.length << ':' << c.zone << ':' << c.alpha << ':' << to_string(c.mode) << ':' << c.energy_budget()
       << ':' << c.papr_cap << ':' << c.max_iterations << ':' << c.tolerance;
    const auto w = c.effective_weights();
    for (double v : w.auto_weights()) os << ',' << v;
    for (double v : w.cross_weights()) os << ';' << v;
    std::ostringstream hex;
    hex << std::hex << fnv1a(os.str());
    return hex.str();
}

// Working context of one solve: everything constant across iterations.
struct Problem {
    WeightProfile weights;
    double lambda_j;
    ConstraintMode mode;
    double energy;
    double peak;
    std::size_t length;

    explicit Problem(const SolverConfig& c)
        : weights(c.effective_weights()),
          lambda_j(qozcp::lambda_j(weights)),
          mode(c.mode),
          energy(c.energy_budget()),
          peak(c.peak_limit()),
          length(c.length) {}

    IterateAnalysis analyze(std::span<const Complex> z) const {
        return analyze_iterate(z.first(length), z.subspan(length));
    }

    double objective(std::span<const Complex> z) const { return checked(weighted_objective(analyze(z), weights)); }

    ComplexVector project(std::span<const Complex> p) const {
        ComplexVector out(p.size());
        for (std::size_t half = 0; half < 2; ++half) {
            const auto block = p.subspan(half * length, length);
            const auto proj = mode == ConstraintMode::Unimodular ? proj_unimodular(block)
                                                                 : proj_papr(block, energy, peak);
            std::copy(proj.begin(), proj.end(), out.begin() + static_cast<std::ptrdiff_t>(half * length));
        }
        return out;
    }

    // One plain MM update z -> Proj(P(z)).
    ComplexVector mm_map(std::span<const Complex> z, const IterateAnalysis& a) const {
        const MajorizationConstants k{lambda_j, lambda_u(a, weights)};
        return project(descent_vector(z, a, weights, k));
    }
    ComplexVector mm_map(std::span<const Complex> z) const { return mm_map(z, analyze(z)); }
};

// Advances `state` in place by one accelerated step.
void advance(SolverState& state, const Problem& problem) {
    const std::span<const Complex> zt(state.z);
    if (state.objective_history.empty()) state.objective_history.push_back(problem.objective(zt));
    const double f_t = state.objective_history.back();

    const ComplexVector z1 = problem.mm_map(zt);
    const ComplexVector z2 = problem.mm_map(z1);
    const std::size_t n = zt.size();
    ComplexVector v1(n), v2(n);
    for (std::size_t i = 0; i < n; ++i) {
        v1[i] = z1[i] - zt[i];
        v2[i] = z2[i] - z1[i] - v1[i];
    }
    const double n1 = std::sqrt(norm2(v1));
    const double n2 = std::sqrt(norm2(v2));

    StepDiagnostics diag;
    std::optional<ComplexVector> accepted;
    double f_new = f_t;

    if (n1 > 0.0 && n2 > 0.0) {
        double step = std::min(-n1 / n2, -1.0);
        ComplexVector extrapolated(n);
        for (;;) {
            for (std::size_t i = 0; i < n; ++i) {
                extrapolated[i] = zt[i] - 2.0 * step * v1[i] + step * step * v2[i];
            }
            ComplexVector candidate = problem.mm_map(extrapolated);
            const double f_c = problem.objective(candidate);
            if (f_c <= f_t) {
                accepted = std::move(candidate);
                f_new = f_c;
                diag.accelerated = true;
                break;
            }
            if (step == -1.0) break;
            ++diag.backtracks;
            step = (step - 1.0) / 2.0;
            if (diag.backtracks >= kMaxBacktracks || step > -1.0) step = -1.0;
        }
        diag.step_length = step;
    }

    if (!accepted) {
        // Plain MM step; falls back to standing still if roundoff made it worse.
        const double f1 = problem.objective(z1);
        diag.accelerated = false;
        diag.step_length = 0.0;
        if (f1 <= f_t) {
            accepted = z1;
            f_new = f1;
        }
    }

    if (accepted) state.z = std::move(*accepted);
    state.objective_history.push_back(f_new);
    ++state.iteration;
    state.last_step = diag;
}

}  // namespace

std::string to_string(ConstraintMode mode) {
    return mode == ConstraintMode::Unimodular ? "unimodular" : "papr";
}

ConstraintMode parse_constraint_mode(const std::string& text) {
    if (text == "papr") return ConstraintMode::PaprConstrained;
    if (text == "unimodular") return ConstraintMode::Unimodular;
    throw std::invalid_argument("unknown constraint mode '" + text + "' (expected papr or unimodular)");
}

void SolverConfig::validate() const {
    if (length < 2) throw std::invalid_argument("length must be at least 2");
    if (zone <= 1 || zone > length) throw std::invalid_argument("zone must satisfy 1 < Z <= L");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    const double pe = energy_budget();
    if (!(pe > 0.0) || pe > static_cast<double>(length)) {
        throw std::invalid_argument("energy budget must satisfy 0 < p_e <= L");
    }
    if (mode == ConstraintMode::PaprConstrained) {
        if (!(papr_cap >= 1.0) || papr_cap > static_cast<double>(length)) {
            throw std::invalid_argument("PAPR cap must satisfy 1 <= p_r <= L");
        }
    } else if (pe != static_cast<double>(length)) {
        throw std::invalid_argument("unimodular mode fixes the energy budget at L");
    }
    if (!(tolerance >= 0.0)) throw std::invalid_argument("tolerance must be nonnegative");
    if (weights) {
        if (weights->length() != length) throw std::invalid_argument("weight profile length differs from L");
        if (weights->alpha() != alpha) throw std::invalid_argument("weight profile alpha differs from config alpha");
        if (!weights->any_positive()) throw std::invalid_argument("at least one weight must be positive");
    }
}

double SolverConfig::peak_limit() const {
    if (mode == ConstraintMode::Unimodular) return 1.0;
    return std::sqrt(papr_cap * energy_budget() / static_cast<double>(length));
}

WeightProfile SolverConfig::effective_weights() const {
    return weights ? *weights : WeightProfile::indicator(length, zone, alpha);
}

double lambda_j(const WeightProfile& weights) {
    const auto L = static_cast<double>(weights.length());
    const double a = weights.alpha();
    double best = 0.0;
    for (std::size_t k = 0; k < weights.length(); ++k) {
        const double kk = static_cast<double>(k);
        best = std::max(best, weights.auto_weights()[k] * a * (2.0 * L - 2.0 * kk));
        best = std::max(best, weights.cross_weights()[k] * (1.0 - a) * (L - kk));
    }
    return best;
}

double lambda_u(const IterateAnalysis& analysis, const WeightProfile& weights) {
    const std::size_t L = analysis.length;
    const std::size_t n = 2 * L;
    const auto Ls = static_cast<std::ptrdiff_t>(L);
    double diag_block = 0.0;
    double cross_block = 0.0;
    for (std::ptrdiff_t k = -(Ls - 1); k < Ls; ++k) {
        const auto s = static_cast<std::size_t>(k < 0 ? k + static_cast<std::ptrdiff_t>(n) : k);
        diag_block = std::max(diag_block, weights.auto_weight(k) * std::abs(analysis.complementary_lags[s]));
        cross_block = std::max(cross_block, weights.cross_weight(k) * std::abs(analysis.cross_lags[s]));
    }
    const double a = weights.alpha();
    return 4.0 * static_cast<double>(L) * std::max(a * diag_block, (1.0 - a) * cross_block);
}

ComplexVector descent_vector(std::span<const Complex> z, const IterateAnalysis& analysis,
                             const WeightProfile& weights, const MajorizationConstants& constants) {
    if (z.size() != 2 * analysis.length) throw std::invalid_argument("descent_vector: size mismatch");
    const auto ws = weighted_spectra(analysis, weights);
    auto out = gram_product(ws, analysis.fx, analysis.fy, weights.alpha());
    const double scale = 2.0 * constants.lambda_j * norm2(z) + constants.lambda_u;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = scale * z[i] - out[i];
    return out;
}

ComplexVector descent_vector(std::span<const Complex> z, const WeightProfile& weights, double lambda_j_value) {
    const std::size_t L = z.size() / 2;
    const auto a = analyze_iterate(z.first(L), z.subspan(L));
    return descent_vector(z, a, weights, {lambda_j_value, lambda_u(a, weights)});
}

ComplexVector proj_unimodular(std::span<const Complex> v) {
    ComplexVector out(v.size());
    for (std::size_t l = 0; l < v.size(); ++l) {
        const double m = std::abs(v[l]);
        out[l] = m > 0.0 ? v[l] / m : Complex{1.0, 0.0};
    }
    return out;
}

ComplexVector proj_papr(std::span<const Complex> v, double energy, double peak) {
    const std::size_t L = v.size();
    if (L == 0) throw std::invalid_argument("proj_papr: empty input");
    if (!(energy > 0.0) || !(peak > 0.0)) throw std::invalid_argument("proj_papr: energy and peak must be positive");
    if (peak * peak * static_cast<double>(L) < energy * (1.0 - 1e-12)) {
        throw std::invalid_argument("proj_papr: infeasible, L * p_c^2 < p_e");
    }

    std::vector<double> mag(L);
    std::size_t nonzero = 0;
    double min_nonzero = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < L; ++l) {
        mag[l] = std::abs(v[l]);
        if (mag[l] > 0.0) {
            ++nonzero;
            min_nonzero = std::min(min_nonzero, mag[l]);
        }
    }
    const double peak2 = peak * peak;
    ComplexVector out(L);

    if (static_cast<double>(nonzero) * peak2 <= energy) {
        // Every nonzero entry saturates; leftover energy spreads over the zeros.
        const std::size_t zeros = L - nonzero;
        const double rest = zeros > 0 ? std::sqrt(std::max(0.0, energy - static_cast<double>(nonzero) * peak2) /
                                                  static_cast<double>(zeros))
                                      : 0.0;
        for (std::size_t l = 0; l < L; ++l) out[l] = mag[l] > 0.0 ? peak * (v[l] / mag[l]) : Complex{rest, 0.0};
        return out;
    }

    auto energy_at = [&](double scale) {
        double s = 0.0;
        for (double m : mag) s += std::min(scale * scale * m * m, peak2);
        return s;
    };
    double lo = 0.0;
    double hi = peak / min_nonzero;
    double scale = hi;
    bool converged = false;
    for (int it = 0; it < kMaxBisections; ++it) {
        scale = 0.5 * (lo + hi);
        const double e = energy_at(scale);
        if (std::abs(e - energy) <= kBisectionTolerance * energy) {
            converged = true;
            break;
        }
        (e < energy ? lo : hi) = scale;
    }
    if (!converged) throw std::runtime_error("proj_papr: bisection did not converge");

    // Solve exactly for the scale on the active set the bisection identified.
    double free_mass = 0.0;
    std::size_t saturated = 0;
    for (double m : mag) {
        if (scale * m >= peak) {
            ++saturated;
        } else {
            free_mass += m * m;
        }
    }
    const double residual = energy - static_cast<double>(saturated) * peak2;
    if (free_mass > 0.0 && residual > 0.0) {
        const double exact = std::sqrt(residual / free_mass);
        bool consistent = true;
        for (double m : mag) {
            if (scale * m < peak && exact * m > peak * (1.0 + 1e-12)) consistent = false;
        }
        if (consistent) scale = exact;
    }
    for (std::size_t l = 0; l < L; ++l) {
        out[l] = mag[l] > 0.0 ? std::min(scale * mag[l], peak) * (v[l] / mag[l]) : Complex{};
    }
    return out;
}

SolverState initial_state(const SolverConfig& config) {
    config.validate();
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const double mag = std::sqrt(config.energy_budget() / static_cast<double>(config.length));
    SolverState s;
    s.z.resize(2 * config.length);
    for (auto& v : s.z) v = std::polar(mag, phase(rng));
    const Problem problem(config);
    s.objective_history.push_back(problem.objective(s.z));
    return s;
}

SolverState sdamm_step(const SolverState& state, const SolverConfig& config) {
    config.validate();
    if (state.z.size() != 2 * config.length) throw std::invalid_argument("sdamm_step: state size mismatch");
    SolverState next = state;
    advance(next, Problem(config));
    return next;
}

SolveResult solve(const SolverConfig& config) {
    SolverState state = initial_state(config);
    const Problem problem(config);
    while (state.iteration < config.max_iterations) {
        const double f_prev = state.objective_history.back();
        advance(state, problem);
        const double f_new = state.objective_history.back();
        if (f_new == 0.0 || f_prev - f_new < config.tolerance * f_prev) break;
    }
    const std::size_t L = config.length;
    ComplexVector x(state.z.begin(), state.z.begin() + static_cast<std::ptrdiff_t>(L));
    ComplexVector y(state.z.begin() + static_cast<std::ptrdiff_t>(L), state.z.end());
    std::ostringstream obj;
    obj.precision(17);
    obj << state.objective_history.back();
    std::map<std::string, std::string> meta{
        {"seed", std::to_string(config.seed)},
        {"config_digest", config_digest(config)},
        {"final_objective", obj.str()},
        {"iterations", std::to_string(state.iteration)},
    };
    return SolveResult{SequencePair(ComplexSequence(std::move(x)), ComplexSequence(std::move(y)), std::move(meta)),
                       std::move(state)};
}

SolveResult solve_best_of(const SolverConfig& config, std::size_t restarts, std::size_t workers) {
    config.validate();
    if (restarts == 0) throw std::invalid_argument("restarts must be at least 1");
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, restarts);

    std::vector<std::optional<SolveResult>> results(restarts);
    std::vector<std::exception_ptr> errors(restarts);
    auto run = [&](std::size_t i) {
        try {
            SolverConfig c = config;
            c.seed = config.seed + i;
            results[i] = solve(c);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    if (workers == 1) {
        for (std::size_t i = 0; i < restarts; ++i) run(i);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < restarts; i += workers) run(i);
            });
        }
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < restarts; ++i) {
        if (results[i]->state.objective_history.back() < results[best]->state.objective_history.back()) best = i;
    }
    return std::move(*results[best]);
}

}  // namespace qozcp
