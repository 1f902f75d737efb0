#include "qozcp/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qozcp {

ComplexSequence::ComplexSequence(ComplexVector entries) : entries_(std::move(entries)) {
    if (entries_.size() < 2) {
        throw std::invalid_argument("sequence length must be at least 2");
    }
    for (const auto& v : entries_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw std::invalid_argument("sequence entries must be finite");
        }
    }
}

double ComplexSequence::energy() const noexcept {
    double e = 0.0;
    for (const auto& v : entries_) e += std::norm(v);
    return e;
}

CorrelationVector::CorrelationVector(std::size_t sequence_length, ComplexVector lags)
    : length_(sequence_length), lags_(std::move(lags)) {
    if (length_ == 0 || lags_.size() != 2 * length_ - 1) {
        throw std::invalid_argument("correlation vector must hold 2L-1 lags");
    }
}

Complex CorrelationVector::at(std::ptrdiff_t k) const {
    if (k < -max_lag() || k > max_lag()) {
        throw std::out_of_range("lag outside [-(L-1), L-1]");
    }
    return lags_[static_cast<std::size_t>(k + max_lag())];
}

SequencePair::SequencePair(ComplexSequence x, ComplexSequence y, std::map<std::string, std::string> meta)
    : x_(std::move(x)), y_(std::move(y)), meta_(std::move(meta)) {
    if (x_.length() != y_.length()) {
        throw std::invalid_argument("pair sequences must have equal length");
    }
}

WeightProfile::WeightProfile(std::size_t zone, std::vector<double> auto_weights,
                             std::vector<double> cross_weights, double alpha)
    : zone_(zone), auto_(std::move(auto_weights)), cross_(std::move(cross_weights)), alpha_(alpha) {
    if (auto_.size() < 2 || auto_.size() != cross_.size()) {
        throw std::invalid_argument("weight lists must both have length L >= 2");
    }
    if (zone_ < 1 || zone_ > auto_.size()) {
        throw std::invalid_argument("zone width must lie in [1, L]");
    }
    if (!(alpha_ > 0.0 && alpha_ < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0, 1)");
    }
    if (auto_[0] != 0.0) {
        throw std::invalid_argument("auto weight at lag 0 must be zero");
    }
    auto bad = [](double w) { return !(w >= 0.0) || !std::isfinite(w); };
    if (std::any_of(auto_.begin(), auto_.end(), bad) || std::any_of(cross_.begin(), cross_.end(), bad)) {
        throw std::invalid_argument("weights must be finite and nonnegative");
    }
}

WeightProfile WeightProfile::indicator(std::size_t length, std::size_t zone, double alpha) {
    if (length < 2) throw std::invalid_argument("sequence length must be at least 2");
    std::vector<double> w(length, 0.0);
    std::vector<double> wt(length, 0.0);
    for (std::size_t k = 0; k < std::min(zone, length); ++k) {
        wt[k] = 1.0;
        if (k > 0) w[k] = 1.0;
    }
    return WeightProfile(zone, std::move(w), std::move(wt), alpha);
}

double WeightProfile::auto_weight(std::ptrdiff_t k) const noexcept {
    const auto a = static_cast<std::size_t>(k < 0 ? -k : k);
    return a < auto_.size() ? auto_[a] : 0.0;
}

double WeightProfile::cross_weight(std::ptrdiff_t k) const noexcept {
    const auto a = static_cast<std::size_t>(k < 0 ? -k : k);
    return a < cross_.size() ? cross_[a] : 0.0;
}

bool WeightProfile::any_positive() const noexcept {
    auto pos = [](double w) { return w > 0.0; };
    return std::any_of(auto_.begin(), auto_.end(), pos) || std::any_of(cross_.begin(), cross_.end(), pos);
}

CorrelationVector cross_correlation(const ComplexSequence& x, const ComplexSequence& y) {
    if (x.length() != y.length()) {
        throw std::invalid_argument("cross_correlation: length mismatch");
    }
    const auto L = static_cast<std::ptrdiff_t>(x.length());
    ComplexVector lags(static_cast<std::size_t>(2 * L - 1));
    for (std::ptrdiff_t k = -(L - 1); k < L; ++k) {
        Complex acc{0.0, 0.0};
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, -k);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(L, L - k);
        for (std::ptrdiff_t l = lo; l < hi; ++l) {
            acc += x[static_cast<std::size_t>(l)] * std::conj(y[static_cast<std::size_t>(l + k)]);
        }
        lags[static_cast<std::size_t>(k + L - 1)] = acc;
    }
    return CorrelationVector(x.length(), std::move(lags));
}

CorrelationVector auto_correlation(const ComplexSequence& x) { return cross_correlation(x, x); }

CorrelationVector complementary_sum(const SequencePair& pair) {
    const auto cx = auto_correlation(pair.x());
    const auto cy = auto_correlation(pair.y());
    ComplexVector sum(cx.size());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = cx.values()[i] + cy.values()[i];
    return CorrelationVector(pair.length(), std::move(sum));
}

ComplexSequence reverse_conjugate(const ComplexSequence& x) {
    ComplexVector out(x.length());
    for (std::size_t l = 0; l < out.size(); ++l) out[l] = std::conj(x[x.length() - 1 - l]);
    return ComplexSequence(std::move(out));
}

double papr(const ComplexSequence& x) {
    const double e = x.energy();
    if (!(e > 0.0)) throw std::invalid_argument("papr: zero-energy sequence");
    double peak = 0.0;
    for (const auto& v : x) peak = std::max(peak, std::norm(v));
    return static_cast<double>(x.length()) * peak / e;
}

double objective(const SequencePair& pair, const WeightProfile& weights) {
    if (weights.length() != pair.length()) {
        throw std::invalid_argument("objective: weight profile length differs from pair length");
    }
    const auto r = complementary_sum(pair);
    const auto c = cross_correlation(pair.x(), pair.y());
    const auto L = static_cast<std::ptrdiff_t>(pair.length());
    double sidelobe = 0.0;
    double cross = 0.0;
    for (std::ptrdiff_t k = -(L - 1); k < L; ++k) {
        if (k != 0) sidelobe += weights.auto_weight(k) * std::norm(r.at(k));
        cross += weights.cross_weight(k) * std::norm(c.at(k));
    }
    return weights.alpha() * sidelobe + (1.0 - weights.alpha()) * cross;
}

double max_modulus(const CorrelationVector& c, std::ptrdiff_t min_abs, std::ptrdiff_t max_abs) {
    max_abs = std::min(max_abs, c.max_lag());
    double m = 0.0;
    for (std::ptrdiff_t k = -max_abs; k <= max_abs; ++k) {
        if (std::abs(k) < min_abs) continue;
        m = std::max(m, std::abs(c.at(k)));
    }
    return m;
}

}  // namespace qozcp
