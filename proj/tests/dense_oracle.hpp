#pragma once

// Test-only dense constructions of the lifted quadratic forms. Sizes grow as
// (2L)^2 x (2L)^2, so keep L tiny.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "qozcp/sequences.hpp"

namespace oracle {

using qozcp::Complex;
using qozcp::ComplexVector;

struct DenseMatrix {
    std::size_t n = 0;
    ComplexVector a;  // row-major

    explicit DenseMatrix(std::size_t size) : n(size), a(size * size) {}
    Complex& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    Complex operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }

    ComplexVector apply(const ComplexVector& v) const {
        ComplexVector out(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }
    DenseMatrix adjoint() const {
        DenseMatrix m(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }
};

// L x L shift with ones where row - col == k, so x^H U_k x == C_x(k).
inline DenseMatrix shift(std::size_t L, std::ptrdiff_t k) {
    DenseMatrix u(L);
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < L; ++j)
            if (static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(j) == k) u(i, j) = 1.0;
    return u;
}

inline Complex quadratic(const DenseMatrix& m, const ComplexVector& z) {
    const auto mz = m.apply(z);
    Complex s{};
    for (std::size_t i = 0; i < z.size(); ++i) s += std::conj(z[i]) * mz[i];
    return s;
}

// 2L x 2L lifted matrices: A_k = diag(U_k, U_k), B_k = [[0, U_k], [0, 0]].
inline DenseMatrix lifted_a(std::size_t L, std::ptrdiff_t k) {
    const auto u = shift(L, k);
    DenseMatrix m(2 * L);
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < L; ++j) {
            m(i, j) = u(i, j);
            m(L + i, L + j) = u(i, j);
        }
    return m;
}

inline DenseMatrix lifted_b(std::size_t L, std::ptrdiff_t k) {
    const auto u = shift(L, k);
    DenseMatrix m(2 * L);
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < L; ++j) m(i, L + j) = u(i, j);
    return m;
}

// Q built lag by lag from quadratic forms of z, independent of the
// library's correlation routines. z^H A_{-k} z = r(-k) and
// conj(z^H B_k z) = conj(C_yx(k)) = c(-k).
inline DenseMatrix dense_q(const ComplexVector& z, const qozcp::WeightProfile& wp) {
    const std::size_t L = z.size() / 2;
    const double alpha = wp.alpha();
    DenseMatrix q(2 * L);
    for (std::ptrdiff_t k = -static_cast<std::ptrdiff_t>(L) + 1; k < static_cast<std::ptrdiff_t>(L); ++k) {
        const Complex r_neg = quadratic(lifted_a(L, -k), z);
        const Complex c_neg = std::conj(quadratic(lifted_b(L, k), z));
        const auto u = shift(L, k);
        for (std::size_t i = 0; i < L; ++i)
            for (std::size_t j = 0; j < L; ++j) {
                if (u(i, j) == 0.0) continue;
                q(i, j) += alpha * wp.auto_weight(k) * r_neg;
                q(L + i, L + j) += alpha * wp.auto_weight(k) * r_neg;
                q(i, L + j) += (1.0 - alpha) * wp.cross_weight(k) * c_neg;
            }
    }
    return q;
}

inline ComplexVector q_plus_qh_times(const ComplexVector& z, const qozcp::WeightProfile& wp) {
    const auto q = dense_q(z, wp);
    const auto a = q.apply(z);
    const auto b = q.adjoint().apply(z);
    ComplexVector out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

// Objective as sum of squared quadratic forms of z.
inline double dense_objective(const ComplexVector& z, const qozcp::WeightProfile& wp) {
    const std::size_t L = z.size() / 2;
    double f = 0.0;
    for (std::ptrdiff_t k = -static_cast<std::ptrdiff_t>(L) + 1; k < static_cast<std::ptrdiff_t>(L); ++k) {
        f += wp.alpha() * wp.auto_weight(k) * std::norm(quadratic(lifted_a(L, k), z));
        f += (1.0 - wp.alpha()) * wp.cross_weight(k) * std::norm(quadratic(lifted_b(L, k), z));
    }
    return f;
}

// J = alpha sum w_k a_k a_k^H + (1 - alpha) sum w~_k b_k b_k^H with
// a_k = vec(A_k^H), so vec(Z)^H J vec(Z) equals the objective at Z = z z^H.
inline DenseMatrix dense_j(const qozcp::WeightProfile& wp) {
    const std::size_t L = wp.length();
    const std::size_t n = 2 * L;
    DenseMatrix j(n * n);
    auto add = [&](const DenseMatrix& m, double scale) {
        if (scale == 0.0) return;
        ComplexVector v(n * n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) v[c * n + r] = std::conj(m(c, r));  // vec of m^H, column-major
        for (std::size_t a = 0; a < v.size(); ++a) {
            if (v[a] == 0.0) continue;
            for (std::size_t b = 0; b < v.size(); ++b) j(a, b) += scale * v[a] * std::conj(v[b]);
        }
    };
    for (std::ptrdiff_t k = -static_cast<std::ptrdiff_t>(L) + 1; k < static_cast<std::ptrdiff_t>(L); ++k) {
        add(lifted_a(L, k), wp.alpha() * wp.auto_weight(k));
        add(lifted_b(L, k), (1.0 - wp.alpha()) * wp.cross_weight(k));
    }
    return j;
}

// vec(z z^H) in column-major order.
inline ComplexVector vec_outer(const ComplexVector& z) {
    const std::size_t n = z.size();
    ComplexVector v(n * n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r) v[c * n + r] = z[r] * std::conj(z[c]);
    return v;
}

inline double norm2(const ComplexVector& v) {
    double s = 0.0;
    for (const auto& e : v) s += std::norm(e);
    return s;
}

inline double rayleigh(const DenseMatrix& m, const ComplexVector& v) { return quadratic(m, v).real() / norm2(v); }

// Largest eigenvalue of a Hermitian PSD matrix by power iteration.
inline double power_iteration(const DenseMatrix& m, std::uint64_t seed = 7, int iterations = 5000) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    ComplexVector v(m.n);
    for (auto& e : v) e = {g(rng), g(rng)};
    double lambda = 0.0;
    for (int it = 0; it < iterations; ++it) {
        auto w = m.apply(v);
        const double nw = std::sqrt(norm2(w));
        if (nw == 0.0) return 0.0;
        for (auto& e : w) e /= nw;
        const double next = rayleigh(m, w);
        v = std::move(w);
        if (it > 50 && std::abs(next - lambda) <= 1e-14 * std::max(1.0, next)) return next;
        lambda = next;
    }
    return lambda;
}

inline ComplexVector random_vector(std::size_t n, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, scale);
    ComplexVector v(n);
    for (auto& e : v) e = {g(rng), g(rng)};
    return v;
}

inline qozcp::ComplexSequence random_sequence(std::size_t n, std::uint64_t seed) {
    return qozcp::ComplexSequence(random_vector(n, seed));
}

inline double max_abs_diff(const ComplexVector& a, const ComplexVector& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return a.size() == b.size() ? m : INFINITY;
}

}  // namespace oracle
