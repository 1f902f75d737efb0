#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "qozcp/sequences.hpp"

namespace qozcp {

/// Unnormalized forward DFT and 1/n-normalized inverse DFT of a fixed size,
/// backed by FFTW. Instances are cached per size and are safe to use from
/// several threads at once.
class Dft {
public:
    static const Dft& of_size(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    void forward(std::span<const Complex> in, std::span<Complex> out) const;
    void inverse(std::span<const Complex> in, std::span<Complex> out) const;

    ~Dft();
    Dft(const Dft&) = delete;
    Dft& operator=(const Dft&) = delete;

private:
    explicit Dft(std::size_t n);
    std::size_t n_;
    void* forward_plan_;
    void* inverse_plan_;
};

/// 2L-point DFT of a zero-padded length-L sequence.
struct SpectrumVector {
    ComplexVector bins;
};

/// DFTs of the weighted lag vectors t_r (complementary) and t_c (cross).
struct WeightedSpectra {
    ComplexVector mu_r;
    ComplexVector mu_c;
};

SpectrumVector forward_spectrum(std::span<const Complex> x);
SpectrumVector forward_spectrum(const ComplexSequence& x);

/// Lag vectors of C_x + C_y and C_xy obtained from 2L-point transforms.
/// Results use the same lag convention as cross_correlation().
std::pair<CorrelationVector, CorrelationVector> correlations_via_fft(const SequencePair& pair);

/// C_ab(k) via the 2L-point transform path.
CorrelationVector fft_cross_correlation(std::span<const Complex> a, std::span<const Complex> b);

/// Builds t_r and t_c in transform index order and returns their DFTs.
///
/// Slot k of t_r holds w_|k| * r(-k) and slot k of t_c holds w~_|k| * c(-k)
/// (slot L is the zero padding slot, slot 0 of t_r is zero). The lag
/// reversal makes the gram product below equal to the Wirtinger gradient
/// of the objective.
WeightedSpectra weighted_spectra(const CorrelationVector& r, const CorrelationVector& c,
                                 const WeightProfile& weights);

/// (Q + Q^H) z for the stacked iterate z = [x; y] in O(L log L):
///   top    = alpha/2L F^H((mu_r + conj mu_r) o f_x) + (1-alpha)/2L F^H(mu_c o f_y)
///   bottom = alpha/2L F^H((mu_r + conj mu_r) o f_y) + (1-alpha)/2L F^H(conj(mu_c) o f_x)
/// keeping the first L outputs of each inverse transform.
ComplexVector gram_product(const WeightedSpectra& spectra, const SpectrumVector& fx, const SpectrumVector& fy,
                           double alpha);

/// Everything the solver needs about one iterate, computed with four
/// transforms of size 2L. Lag buffers are in transform order and use the
/// convention buf[k] = sum_l a[l+k] conj(b[l]), i.e. slot k holds lag -k of
/// cross_correlation().
struct IterateAnalysis {
    SpectrumVector fx;
    SpectrumVector fy;
    ComplexVector complementary_lags;  // C_x(-k) + C_y(-k) at slot k
    ComplexVector cross_lags;          // C_xy(-k) at slot k
    std::size_t length = 0;
};

IterateAnalysis analyze_iterate(std::span<const Complex> x, std::span<const Complex> y);

/// Objective value from transform-order lag buffers.
double weighted_objective(const IterateAnalysis& analysis, const WeightProfile& weights);

/// weighted_spectra() on transform-order lag buffers.
WeightedSpectra weighted_spectra(const IterateAnalysis& analysis, const WeightProfile& weights);

}  // namespace qozcp
