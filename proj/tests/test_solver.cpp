#include <doctest.h>

#include <cmath>
#include <random>

#include "dense_oracle.hpp"
#include "qozcp/solver.hpp"
#include "qozcp/waveform.hpp"

using namespace qozcp;
using namespace std::complex_literals;

namespace {

ComplexVector stack(const SequencePair& p) {
    ComplexVector z(p.x().begin(), p.x().end());
    z.insert(z.end(), p.y().begin(), p.y().end());
    return z;
}

IterateAnalysis analyze(const ComplexVector& z) {
    const std::span<const Complex> s(z);
    return analyze_iterate(s.first(z.size() / 2), s.subspan(z.size() / 2));
}

double max_entry(const oracle::DenseMatrix& m) {
    double best = 0.0;
    for (const auto& v : m.a) best = std::max(best, std::abs(v));
    return best;
}

SolverConfig small_config(ConstraintMode mode, std::uint64_t seed) {
    SolverConfig c;
    c.length = 16;
    c.zone = 6;
    c.mode = mode;
    c.papr_cap = 3.0;
    c.seed = seed;
    c.max_iterations = 1000;
    return c;
}

void check_feasible(const SolverState& s, const SolverConfig& c) {
    const std::size_t L = c.length;
    for (std::size_t half = 0; half < 2; ++half) {
        const auto block = std::span<const Complex>(s.z).subspan(half * L, L);
        double e = 0.0, peak = 0.0;
        for (const auto& v : block) {
            e += std::norm(v);
            peak = std::max(peak, std::abs(v));
            if (c.mode == ConstraintMode::Unimodular) CHECK(std::abs(std::abs(v) - 1.0) <= 1e-12);
        }
        if (c.mode == ConstraintMode::PaprConstrained) {
            CHECK(std::abs(e - c.energy_budget()) <= 1e-9 * c.energy_budget());
            CHECK(peak <= c.peak_limit() + 1e-9);
        }
    }
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("config validation") {
    SolverConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.peak_limit() == doctest::Approx(std::sqrt(5.0)));
    auto bad = [](auto mutate) {
        SolverConfig k;
        mutate(k);
        return k;
    };
    CHECK_THROWS_AS(bad([](SolverConfig& k) { k.zone = 1; }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad([](SolverConfig& k) { k.zone = 65; }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad([](SolverConfig& k) { k.alpha = 1.0; }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad([](SolverConfig& k) { k.energy = 65.0; }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad([](SolverConfig& k) { k.papr_cap = 0.5; }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad([](SolverConfig& k) { k.papr_cap = 65.0; }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad([](SolverConfig& k) {
                        k.mode = ConstraintMode::Unimodular;
                        k.energy = 32.0;
                    }).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(bad([](SolverConfig& k) {
                        k.weights = WeightProfile(64, std::vector<double>(64, 0.0), std::vector<double>(64, 0.0));
                    }).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(bad([](SolverConfig& k) { k.weights = WeightProfile::indicator(32, 8); }).validate(),
                    std::invalid_argument);
    CHECK(parse_constraint_mode("unimodular") == ConstraintMode::Unimodular);
    CHECK(to_string(ConstraintMode::PaprConstrained) == "papr");
    CHECK_THROWS_AS(parse_constraint_mode("binary"), std::invalid_argument);
}

TEST_CASE("lambda_j closed form") {
    CHECK(lambda_j(WeightProfile::indicator(64, 30)) == doctest::Approx(63.0));
    std::vector<double> w(64, 0.0), wt(64, 0.0);
    wt[0] = 1.0;
    CHECK(lambda_j(WeightProfile(30, w, wt)) == doctest::Approx(32.0));
}

TEST_CASE("lambda_j equals the top eigenvalue of the dense lifted matrix") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (std::size_t L : {2u, 3u, 4u}) {
        for (int t = 0; t < 3; ++t) {
            std::vector<double> w(L), wt(L);
            for (std::size_t k = 0; k < L; ++k) {
                w[k] = k == 0 ? 0.0 : u(rng);
                wt[k] = u(rng);
            }
            const WeightProfile wp(L, w, wt, 0.2 + 0.2 * t);
            const auto j = oracle::dense_j(wp);
            const double lj = lambda_j(wp);
            CHECK(oracle::power_iteration(j) == doctest::Approx(lj).epsilon(1e-8));
            for (std::uint64_t s = 0; s < 100; ++s) {
                CHECK(oracle::rayleigh(j, oracle::vec_outer(oracle::random_vector(2 * L, s))) <= lj * (1 + 1e-12));
            }
            // vec(Z)^H J vec(Z) is the objective at Z = z z^H.
            const auto z = oracle::random_vector(2 * L, 77);
            CHECK(oracle::quadratic(j, oracle::vec_outer(z)).real() ==
                  doctest::Approx(oracle::dense_objective(z, wp)).epsilon(1e-10));
        }
    }
}

TEST_CASE("lambda_u") {
    SUBCASE("zero weights") {
        const WeightProfile zero(4, std::vector<double>(4, 0.0), std::vector<double>(4, 0.0));
        CHECK(lambda_u(analyze(oracle::random_vector(8, 1)), zero) == 0.0);
    }
    SUBCASE("dense Q at L = 4") {
        for (std::uint64_t s = 0; s < 10; ++s) {
            const auto z = oracle::random_vector(8, 10 + s);
            const WeightProfile wp(4, {0.0, 1.0, 0.5, 2.0}, {1.5, 0.0, 1.0, 0.3}, 0.4);
            CHECK(lambda_u(analyze(z), wp) == doctest::Approx(16.0 * max_entry(oracle::dense_q(z, wp))).epsilon(1e-12));
        }
    }
    SUBCASE("cross weights only on a Golay pair") {
        const auto g = golay_pair(16);
        std::vector<double> wt(16, 0.0);
        for (std::size_t k = 0; k < 6; ++k) wt[k] = 1.0;
        const WeightProfile wp(6, std::vector<double>(16, 0.0), wt, 0.5);
        const auto c = cross_correlation(g.x(), g.y());
        double m = 0.0;
        for (std::ptrdiff_t k = -15; k <= 15; ++k) m = std::max(m, wp.cross_weight(k) * std::abs(c.at(-k)));
        CHECK(lambda_u(analyze(stack(g)), wp) == doctest::Approx(4.0 * 16.0 * 0.5 * m));
    }
}

TEST_CASE("descent vector") {
    SUBCASE("zero weights give a multiple of z") {
        const WeightProfile zero(4, std::vector<double>(4, 0.0), std::vector<double>(4, 0.0));
        const auto z = proj_unimodular(oracle::random_vector(8, 3));
        const auto p = descent_vector(z, zero, 2.5);
        for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(p[i] - 2.0 * 2.5 * 8.0 * z[i]) <= 1e-12);
        // A unimodular z is its own projection.
        CHECK(oracle::max_abs_diff(proj_unimodular(std::span<const Complex>(p).first(4)),
                                   ComplexVector(z.begin(), z.begin() + 4)) <= 1e-12);
    }
    SUBCASE("dense oracle at L = 4") {
        for (std::uint64_t s = 0; s < 5; ++s) {
            const auto z = oracle::random_vector(8, 20 + s);
            const auto wp = WeightProfile::indicator(4, 3, 0.45);
            const double lj = lambda_j(wp);
            const double lu = 16.0 * max_entry(oracle::dense_q(z, wp));
            const auto qz = oracle::q_plus_qh_times(z, wp);
            const double scale = 2.0 * lj * oracle::norm2(z) + lu;
            ComplexVector expect(8);
            for (std::size_t i = 0; i < 8; ++i) expect[i] = scale * z[i] - qz[i];
            CHECK(oracle::max_abs_diff(descent_vector(z, wp, lj), expect) <= 1e-9);
        }
    }
}

TEST_CASE("unimodular projection") {
    CHECK(oracle::max_abs_diff(proj_unimodular(ComplexVector{2.0, -3i}), {1.0, -1i}) <= 1e-15);
    CHECK(oracle::max_abs_diff(proj_unimodular(ComplexVector{0.0, 1i}), {1.0, 1i}) == 0.0);
    const auto u = proj_unimodular(oracle::random_vector(16, 1));
    CHECK(oracle::max_abs_diff(proj_unimodular(u), u) <= 1e-15);
}

TEST_CASE("papr projection examples") {
    CHECK(oracle::max_abs_diff(proj_papr(ComplexVector{1.0, 1.0}, 2.0, 1.0), {1.0, 1.0}) <= 1e-12);
    const auto p = proj_papr(ComplexVector{3.0, 1.0}, 2.0, 1.2);
    CHECK(p[0].real() == doctest::Approx(1.2));
    CHECK(p[1].real() == doctest::Approx(std::sqrt(0.56)).epsilon(1e-12));
    CHECK_THROWS_AS(proj_papr(ComplexVector{1.0, 1.0}, 4.0, 1.0), std::invalid_argument);
}

TEST_CASE("papr projection spreads leftover energy over zero entries") {
    const auto p = proj_papr(ComplexVector{2i, 0.0, 0.0, 0.0}, 4.0, 1.5);
    CHECK(std::abs(p[0] - 1.5i) <= 1e-12);
    for (std::size_t l = 1; l < 4; ++l) CHECK(std::abs(p[l] - std::sqrt(1.75 / 3.0)) <= 1e-12);
    CHECK(oracle::norm2(p) == doctest::Approx(4.0));
}

TEST_CASE("papr projection feasibility and phase alignment") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto v = oracle::random_vector(64, 1000 + s, 0.1 + static_cast<double>(s));
        const double pc = std::sqrt(5.0);
        const auto x = proj_papr(v, 64.0, pc);
        CHECK(oracle::norm2(x) == doctest::Approx(64.0).epsilon(1e-9));
        CHECK(papr(ComplexSequence(x)) <= 5.0 + 1e-9);
        for (std::size_t l = 0; l < 64; ++l) {
            CHECK(std::abs(x[l]) <= pc + 1e-12);
            CHECK(std::abs(std::arg(x[l] * std::conj(v[l]))) <= 1e-12);
        }
    }
}

TEST_CASE("MM step never increases the objective and stays feasible") {
    for (auto mode : {ConstraintMode::PaprConstrained, ConstraintMode::Unimodular}) {
        const auto c = small_config(mode, 3);
        auto s = initial_state(c);
        check_feasible(s, c);
        int backtracked = 0;
        for (int it = 0; it < 1000; ++it) {
            const double before = s.objective_history.back();
            s = sdamm_step(s, c);
            CHECK(s.objective_history.back() <= before + 1e-9 * before);
            check_feasible(s, c);
            backtracked += s.last_step.backtracks > 0;
        }
        CHECK(s.iteration == 1000);
        CHECK(s.objective_history.size() == 1001);
        CHECK(backtracked > 0);
    }
}

TEST_CASE("step at a fixed point stands still") {
    // The length-2 Golay pair with only complementary weights is optimal; P is a multiple of z.
    SolverConfig c;
    c.length = 2;
    c.zone = 2;
    c.mode = ConstraintMode::Unimodular;
    c.weights = WeightProfile(2, {0.0, 1.0}, {0.0, 0.0});
    const auto g = golay_pair(2);
    SolverState s;
    s.z = stack(g);
    const auto next = sdamm_step(s, c);
    CHECK(oracle::max_abs_diff(next.z, s.z) <= 1e-15);
    CHECK(next.objective_history.back() == 0.0);
    CHECK_FALSE(next.last_step.accelerated);
}

TEST_CASE("solve is deterministic and honours the stopping rule") {
    auto c = small_config(ConstraintMode::PaprConstrained, 11);
    c.max_iterations = 20000;
    c.tolerance = 1e-10;
    const auto a = solve(c);
    const auto b = solve(c);
    CHECK(a.state.objective_history == b.state.objective_history);
    CHECK(a.pair.x() == b.pair.x());
    const auto& h = a.state.objective_history;
    REQUIRE(h.size() >= 2);
    const double prev = h[h.size() - 2], last = h.back();
    CHECK((a.state.iteration == c.max_iterations || last == 0.0 || prev - last < c.tolerance * prev));
    CHECK(a.pair.meta().at("seed") == "11");
    CHECK(a.pair.meta().count("config_digest") == 1);
    CHECK(std::stod(a.pair.meta().at("final_objective")) == doctest::Approx(last));
}

TEST_CASE("solve_best_of keeps the smallest final objective") {
    auto c = small_config(ConstraintMode::Unimodular, 40);
    c.max_iterations = 300;
    const auto best = solve_best_of(c, 3, 2);
    double smallest = INFINITY;
    for (std::uint64_t i = 0; i < 3; ++i) {
        auto ci = c;
        ci.seed = 40 + i;
        smallest = std::min(smallest, solve(ci).state.objective_history.back());
    }
    CHECK(best.state.objective_history.back() == smallest);
    CHECK_THROWS_AS(solve_best_of(c, 0), std::invalid_argument);
}

TEST_CASE("solver reaches a near-perfect zone at small size") {
    SolverConfig c;
    c.length = 32;
    c.zone = 8;
    c.seed = 0;
    const auto r = solve_best_of(c, 3);
    CHECK(max_modulus(complementary_sum(r.pair), 1, 7) <= 1e-6);
    CHECK(max_modulus(cross_correlation(r.pair.x(), r.pair.y()), 0, 7) <= 1e-6);
}

}
