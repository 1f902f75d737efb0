#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qozcp/sequences.hpp"
#include "qozcp/spectral.hpp"

namespace qozcp {

enum class ConstraintMode {
    PaprConstrained,  // ||x||^2 = ||y||^2 = p_e, |entries| <= p_c
    Unimodular,       // |entries| == 1
};

std::string to_string(ConstraintMode mode);
ConstraintMode parse_constraint_mode(const std::string& text);

struct SolverConfig {
    std::size_t length = 64;
    std::size_t zone = 30;
    double alpha = 0.5;
    ConstraintMode mode = ConstraintMode::PaprConstrained;
    std::optional<double> energy;  // p_e, defaults to L
    double papr_cap = 5.0;         // p_r, papr mode only
    std::size_t max_iterations = 200000;
    double tolerance = 1e-14;      // relative objective decrease
    std::uint64_t seed = 0;
    std::optional<WeightProfile> weights;  // indicator weights on the zone when unset

    /// Throws std::invalid_argument on inconsistent settings.
    void validate() const;

    double energy_budget() const { return energy.value_or(static_cast<double>(length)); }
    /// p_c = sqrt(p_r p_e / L); 1 in unimodular mode.
    double peak_limit() const;
    WeightProfile effective_weights() const;
};

struct MajorizationConstants {
    double lambda_j = 0.0;
    double lambda_u = 0.0;
};

struct StepDiagnostics {
    double step_length = 0.0;  // SQUAREM alpha_sl actually used
    int backtracks = 0;
    bool accelerated = false;  // false when the plain MM step was taken
};

struct SolverState {
    ComplexVector z;  // stacked [x; y], length 2L
    std::size_t iteration = 0;
    std::vector<double> objective_history;
    StepDiagnostics last_step;

    std::size_t length() const noexcept { return z.size() / 2; }
    std::span<const Complex> x() const noexcept { return std::span<const Complex>(z).first(length()); }
    std::span<const Complex> y() const noexcept { return std::span<const Complex>(z).subspan(length()); }
};

/// Largest eigenvalue of the lifted quartic form:
/// max_k max(w_|k| alpha (2L - 2|k|), w~_|k| (1-alpha)(L - |k|)).
double lambda_j(const WeightProfile& weights);

/// 4L * max|Q_ij| at the analysed iterate. Every entry of Q is a single
/// weighted lag value, so no matrix is formed.
double lambda_u(const IterateAnalysis& analysis, const WeightProfile& weights);

/// P(z) = (2 lambda_J ||z||^2 + lambda_u) z - (Q + Q^H) z.
ComplexVector descent_vector(std::span<const Complex> z, const IterateAnalysis& analysis,
                             const WeightProfile& weights, const MajorizationConstants& constants);

/// Convenience overload: analyses z and recomputes lambda_u.
ComplexVector descent_vector(std::span<const Complex> z, const WeightProfile& weights, double lambda_j_value);

/// Entry-wise unit modulus with phase arg(v_l); zero entries map to 1.
ComplexVector proj_unimodular(std::span<const Complex> v);

/// argmax Re{x^H v} s.t. ||x||^2 = energy, |x_l| <= peak.
ComplexVector proj_papr(std::span<const Complex> v, double energy, double peak);

/// One SQUAREM-accelerated MM update with objective backtracking.
SolverState sdamm_step(const SolverState& state, const SolverConfig& config);

/// Seeded feasible starting point: uniform random phases, flat magnitudes.
SolverState initial_state(const SolverConfig& config);

struct SolveResult {
    SequencePair pair;
    SolverState state;
};

/// Iterates sdamm_step until the relative objective decrease drops below
/// tol or max_iter is reached. Deterministic for a fixed seed.
SolveResult solve(const SolverConfig& config);

/// Runs seeds seed, seed+1, ... seed+restarts-1 (in parallel when workers
/// > 1) and returns the run with the smallest final objective.
SolveResult solve_best_of(const SolverConfig& config, std::size_t restarts, std::size_t workers = 0);

}  // namespace qozcp
