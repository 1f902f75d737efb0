#include "qozcp/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace qozcp {
namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(const Complex* p) {
    return reinterpret_cast<fftw_complex*>(const_cast<Complex*>(p));
}

// Transform slot holding lag k (|k| < L) of a 2L-point buffer.
std::size_t slot(std::ptrdiff_t k, std::size_t n) {
    return static_cast<std::size_t>(k < 0 ? k + static_cast<std::ptrdiff_t>(n) : k);
}

ComplexVector padded(std::span<const Complex> x) {
    ComplexVector buf(2 * x.size(), Complex{});
    std::copy(x.begin(), x.end(), buf.begin());
    return buf;
}

// Reads a transform-order buffer (slot k = lag -k) back into lag order.
CorrelationVector from_reversed_slots(const ComplexVector& buf, std::size_t length) {
    const auto L = static_cast<std::ptrdiff_t>(length);
    ComplexVector lags(2 * length - 1);
    for (std::ptrdiff_t k = -(L - 1); k < L; ++k) {
        lags[static_cast<std::size_t>(k + L - 1)] = buf[slot(-k, buf.size())];
    }
    return CorrelationVector(length, std::move(lags));
}

}  // namespace

Dft::Dft(std::size_t n) : n_(n) {
    ComplexVector a(n), b(n);
    const int size = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_plan_ = fftw_plan_dft_1d(size, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
    inverse_plan_ = fftw_plan_dft_1d(size, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
    if (forward_plan_ == nullptr || inverse_plan_ == nullptr) {
        throw std::runtime_error("FFTW failed to create a plan");
    }
}

Dft::~Dft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

const Dft& Dft::of_size(std::size_t n) {
    static std::map<std::size_t, std::unique_ptr<Dft>> cache;
    std::lock_guard lock(planner_mutex());
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, std::unique_ptr<Dft>(new Dft(n))).first;
    }
    return *it->second;
}

void Dft::forward(std::span<const Complex> in, std::span<Complex> out) const {
    if (in.size() != n_ || out.size() != n_) throw std::invalid_argument("Dft: size mismatch");
    if (in.data() == out.data()) {
        ComplexVector tmp(in.begin(), in.end());
        fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(tmp.data()), as_fftw(out.data()));
        return;
    }
    fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(in.data()), as_fftw(out.data()));
}

void Dft::inverse(std::span<const Complex> in, std::span<Complex> out) const {
    if (in.size() != n_ || out.size() != n_) throw std::invalid_argument("Dft: size mismatch");
    if (in.data() == out.data()) {
        ComplexVector tmp(in.begin(), in.end());
        fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_), as_fftw(tmp.data()), as_fftw(out.data()));
    } else {
        fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_), as_fftw(in.data()), as_fftw(out.data()));
    }
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& v : out) v *= scale;
}

SpectrumVector forward_spectrum(std::span<const Complex> x) {
    auto buf = padded(x);
    SpectrumVector s{ComplexVector(buf.size())};
    Dft::of_size(buf.size()).forward(buf, s.bins);
    return s;
}

SpectrumVector forward_spectrum(const ComplexSequence& x) { return forward_spectrum(x.entries()); }

IterateAnalysis analyze_iterate(std::span<const Complex> x, std::span<const Complex> y) {
    if (x.size() != y.size()) throw std::invalid_argument("analyze_iterate: length mismatch");
    IterateAnalysis a;
    a.length = x.size();
    a.fx = forward_spectrum(x);
    a.fy = forward_spectrum(y);
    const std::size_t n = 2 * x.size();
    ComplexVector power(n), cross(n);
    for (std::size_t i = 0; i < n; ++i) {
        power[i] = std::norm(a.fx.bins[i]) + std::norm(a.fy.bins[i]);
        cross[i] = a.fx.bins[i] * std::conj(a.fy.bins[i]);
    }
    const auto& dft = Dft::of_size(n);
    a.complementary_lags.resize(n);
    a.cross_lags.resize(n);
    dft.inverse(power, a.complementary_lags);
    dft.inverse(cross, a.cross_lags);
    return a;
}

std::pair<CorrelationVector, CorrelationVector> correlations_via_fft(const SequencePair& pair) {
    const auto a = analyze_iterate(pair.x().entries(), pair.y().entries());
    return {from_reversed_slots(a.complementary_lags, a.length), from_reversed_slots(a.cross_lags, a.length)};
}

CorrelationVector fft_cross_correlation(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) throw std::invalid_argument("fft_cross_correlation: length mismatch");
    const auto fa = forward_spectrum(a);
    const auto fb = forward_spectrum(b);
    ComplexVector prod(fa.bins.size());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = fa.bins[i] * std::conj(fb.bins[i]);
    ComplexVector buf(prod.size());
    Dft::of_size(prod.size()).inverse(prod, buf);
    return from_reversed_slots(buf, a.size());
}

WeightedSpectra weighted_spectra(const CorrelationVector& r, const CorrelationVector& c,
                                 const WeightProfile& weights) {
    const std::size_t L = r.sequence_length();
    if (c.sequence_length() != L || weights.length() != L) {
        throw std::invalid_argument("weighted_spectra: inconsistent lengths");
    }
    const std::size_t n = 2 * L;
    const auto Ls = static_cast<std::ptrdiff_t>(L);
    ComplexVector tr(n, Complex{}), tc(n, Complex{});
    for (std::ptrdiff_t k = -(Ls - 1); k < Ls; ++k) {
        if (k != 0) tr[slot(k, n)] = weights.auto_weight(k) * r.at(-k);
        tc[slot(k, n)] = weights.cross_weight(k) * c.at(-k);
    }
    WeightedSpectra ws{ComplexVector(n), ComplexVector(n)};
    const auto& dft = Dft::of_size(n);
    dft.forward(tr, ws.mu_r);
    dft.forward(tc, ws.mu_c);
    return ws;
}

WeightedSpectra weighted_spectra(const IterateAnalysis& analysis, const WeightProfile& weights) {
    const std::size_t L = analysis.length;
    if (weights.length() != L) throw std::invalid_argument("weighted_spectra: inconsistent lengths");
    const std::size_t n = 2 * L;
    const auto Ls = static_cast<std::ptrdiff_t>(L);
    ComplexVector tr(n, Complex{}), tc(n, Complex{});
    for (std::ptrdiff_t k = -(Ls - 1); k < Ls; ++k) {
        const std::size_t s = slot(k, n);
        if (k != 0) tr[s] = weights.auto_weight(k) * analysis.complementary_lags[s];
        tc[s] = weights.cross_weight(k) * analysis.cross_lags[s];
    }
    WeightedSpectra ws{ComplexVector(n), ComplexVector(n)};
    const auto& dft = Dft::of_size(n);
    dft.forward(tr, ws.mu_r);
    dft.forward(tc, ws.mu_c);
    return ws;
}

ComplexVector gram_product(const WeightedSpectra& spectra, const SpectrumVector& fx, const SpectrumVector& fy,
                           double alpha) {
    const std::size_t n = fx.bins.size();
    if (fy.bins.size() != n || spectra.mu_r.size() != n || spectra.mu_c.size() != n || n % 2 != 0) {
        throw std::invalid_argument("gram_product: inconsistent spectrum sizes");
    }
    const std::size_t L = n / 2;
    ComplexVector top(n), bottom(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double mr = 2.0 * spectra.mu_r[i].real();  // mu_r + conj(mu_r)
        top[i] = alpha * mr * fx.bins[i] + (1.0 - alpha) * spectra.mu_c[i] * fy.bins[i];
        bottom[i] = alpha * mr * fy.bins[i] + (1.0 - alpha) * std::conj(spectra.mu_c[i]) * fx.bins[i];
    }
    const auto& dft = Dft::of_size(n);
    dft.inverse(top, top);
    dft.inverse(bottom, bottom);
    ComplexVector out(2 * L);
    std::copy_n(top.begin(), L, out.begin());
    std::copy_n(bottom.begin(), L, out.begin() + static_cast<std::ptrdiff_t>(L));
    return out;
}

double weighted_objective(const IterateAnalysis& analysis, const WeightProfile& weights) {
    const std::size_t L = analysis.length;
    if (weights.length() != L) throw std::invalid_argument("weighted_objective: inconsistent lengths");
    const std::size_t n = 2 * L;
    const auto Ls = static_cast<std::ptrdiff_t>(L);
    double sidelobe = 0.0;
    double cross = 0.0;
    for (std::ptrdiff_t k = -(Ls - 1); k < Ls; ++k) {
        const std::size_t s = slot(k, n);
        if (k != 0) sidelobe += weights.auto_weight(k) * std::norm(analysis.complementary_lags[s]);
        cross += weights.cross_weight(k) * std::norm(analysis.cross_lags[s]);
    }
    return weights.alpha() * sidelobe + (1.0 - weights.alpha()) * cross;
}

}  // namespace qozcp
