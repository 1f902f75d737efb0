#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace qozcp {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// A finite complex sequence of length L >= 2.
class ComplexSequence {
public:
    explicit ComplexSequence(ComplexVector entries);

    std::size_t length() const noexcept { return entries_.size(); }
    std::span<const Complex> entries() const noexcept { return entries_; }
    const Complex& operator[](std::size_t l) const { return entries_[l]; }
    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }

    /// Squared l2 norm.
    double energy() const noexcept;

    friend bool operator==(const ComplexSequence&, const ComplexSequence&) = default;

private:
    ComplexVector entries_;
};

/// Aperiodic correlation values for lags k = -(L-1) ... L-1.
class CorrelationVector {
public:
    /// `lags` is ordered from lag -(L-1) up to lag L-1.
    CorrelationVector(std::size_t sequence_length, ComplexVector lags);

    std::size_t sequence_length() const noexcept { return length_; }
    std::ptrdiff_t max_lag() const noexcept { return static_cast<std::ptrdiff_t>(length_) - 1; }
    std::size_t size() const noexcept { return lags_.size(); }

    /// Value at lag k; throws std::out_of_range when |k| > L-1.
    Complex at(std::ptrdiff_t k) const;
    std::span<const Complex> values() const noexcept { return lags_; }

private:
    std::size_t length_;
    ComplexVector lags_;
};

/// Candidate or final (x, y) pair. `meta` carries free-form provenance
/// (seed, config digest, final objective, ...).
class SequencePair {
public:
    SequencePair(ComplexSequence x, ComplexSequence y, std::map<std::string, std::string> meta = {});

    const ComplexSequence& x() const noexcept { return x_; }
    const ComplexSequence& y() const noexcept { return y_; }
    std::size_t length() const noexcept { return x_.length(); }

    const std::map<std::string, std::string>& meta() const noexcept { return meta_; }
    std::map<std::string, std::string>& meta() noexcept { return meta_; }

private:
    ComplexSequence x_;
    ComplexSequence y_;
    std::map<std::string, std::string> meta_;
};

/// Lag weights for the complementary (w) and cross (w~) terms of the design
/// objective, the zone width Z and the mixing scalar alpha. Both weight lists
/// are indexed by |k| and extended symmetrically to negative lags.
class WeightProfile {
public:
    WeightProfile(std::size_t zone, std::vector<double> auto_weights, std::vector<double> cross_weights,
                  double alpha = 0.5);

    /// w_k = 1 for 1 <= k < Z, w~_k = 1 for 0 <= k < Z, zero elsewhere.
    static WeightProfile indicator(std::size_t length, std::size_t zone, double alpha = 0.5);

    std::size_t length() const noexcept { return auto_.size(); }
    std::size_t zone() const noexcept { return zone_; }
    double alpha() const noexcept { return alpha_; }

    double auto_weight(std::ptrdiff_t k) const noexcept;
    double cross_weight(std::ptrdiff_t k) const noexcept;
    std::span<const double> auto_weights() const noexcept { return auto_; }
    std::span<const double> cross_weights() const noexcept { return cross_; }

    bool any_positive() const noexcept;

private:
    std::size_t zone_;
    std::vector<double> auto_;
    std::vector<double> cross_;
    double alpha_;
};

/// Direct O(L^2) aperiodic cross-correlation C_xy(k) = sum_l x[l] conj(y[l+k]).
CorrelationVector cross_correlation(const ComplexSequence& x, const ComplexSequence& y);
CorrelationVector auto_correlation(const ComplexSequence& x);

/// Lag-wise C_x(k) + C_y(k).
CorrelationVector complementary_sum(const SequencePair& pair);

/// out[l] = conj(x[L-1-l]).
ComplexSequence reverse_conjugate(const ComplexSequence& x);

/// L * max|x_l|^2 / ||x||^2, in [1, L].
double papr(const ComplexSequence& x);

/// Weighted complementary sidelobe plus weighted cross-correlation level,
/// summed over both signs of the lag, evaluated from direct correlations.
double objective(const SequencePair& pair, const WeightProfile& weights);

/// Largest |value| over lags with min_abs <= |k| <= max_abs.
double max_modulus(const CorrelationVector& c, std::ptrdiff_t min_abs, std::ptrdiff_t max_abs);

}  // namespace qozcp
