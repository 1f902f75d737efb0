#include "qozcp/ambiguity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qozcp/spectral.hpp"

namespace qozcp {
namespace {

std::vector<CorrelationVector> per_pri_correlations(const TransmitSchedule& s, std::size_t row_a,
                                                    std::size_t row_b) {
    if (row_a >= s.rows() || row_b >= s.rows()) throw std::invalid_argument("schedule row out of range");
    std::vector<CorrelationVector> out;
    out.reserve(s.pri_count());
    for (std::size_t n = 0; n < s.pri_count(); ++n) {
        const auto a = s.materialize(row_a, n);
        const auto b = s.materialize(row_b, n);
        out.push_back(fft_cross_correlation(a.entries(), b.entries()));
    }
    return out;
}

}  // namespace

DelayDopplerGrid DelayDopplerGrid::uniform(std::ptrdiff_t max_delay, double theta_max, std::size_t samples) {
    if (samples == 0) throw std::invalid_argument("Doppler grid needs at least one sample");
    DelayDopplerGrid g;
    g.max_delay = max_delay;
    g.dopplers.resize(samples);
    for (std::size_t j = 0; j < samples; ++j) {
        g.dopplers[j] = samples == 1 ? 0.0 : theta_max * static_cast<double>(j) / static_cast<double>(samples - 1);
    }
    return g;
}

void DelayDopplerGrid::validate(std::size_t sequence_length) const {
    if (max_delay < 0 || max_delay > static_cast<std::ptrdiff_t>(sequence_length) - 1) {
        throw std::invalid_argument("grid delay range exceeds L-1");
    }
    if (dopplers.empty()) throw std::invalid_argument("grid needs at least one Doppler value");
    if (!std::is_sorted(dopplers.begin(), dopplers.end())) throw std::invalid_argument("Doppler values must be sorted");
}

AmbiguitySurface::AmbiguitySurface(DelayDopplerGrid grid, ComplexVector values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.delay_count() * grid_.dopplers.size()) {
        throw std::invalid_argument("surface values do not match grid dimensions");
    }
}

Complex AmbiguitySurface::at(std::ptrdiff_t k, std::size_t j) const {
    if (k < -grid_.max_delay || k > grid_.max_delay || j >= grid_.dopplers.size()) {
        throw std::out_of_range("surface index out of range");
    }
    return values_[static_cast<std::size_t>(k + grid_.max_delay) * grid_.dopplers.size() + j];
}

double AmbiguitySurface::max_modulus(bool exclude_zero_delay) const {
    double m = 0.0;
    for (std::ptrdiff_t k = -grid_.max_delay; k <= grid_.max_delay; ++k) {
        if (exclude_zero_delay && k == 0) continue;
        for (std::size_t j = 0; j < grid_.dopplers.size(); ++j) m = std::max(m, std::abs(at(k, j)));
    }
    return m;
}

AmbiguitySurface ambiguity_surface(const TransmitSchedule& schedule, std::size_t row_a, std::size_t row_b,
                                   const DelayDopplerGrid& grid) {
    const std::size_t L = schedule.pair().length();
    grid.validate(L);
    const auto corr = per_pri_correlations(schedule, row_a, row_b);
    const std::size_t nd = grid.dopplers.size();
    ComplexVector values(grid.delay_count() * nd);
    for (std::size_t j = 0; j < nd; ++j) {
        ComplexVector phase(corr.size());
        for (std::size_t n = 0; n < corr.size(); ++n) {
            phase[n] = std::polar(1.0, static_cast<double>(n) * grid.dopplers[j]);
        }
        for (std::ptrdiff_t k = -grid.max_delay; k <= grid.max_delay; ++k) {
            Complex g{};
            for (std::size_t n = 0; n < corr.size(); ++n) g += phase[n] * corr[n].at(k);
            values[static_cast<std::size_t>(k + grid.max_delay) * nd + j] = g;
        }
    }
    return AmbiguitySurface(grid, std::move(values));
}

std::vector<TaylorReport> taylor_coefficients(const TransmitSchedule& schedule, std::size_t row_a,
                                              std::size_t row_b, int max_order, std::size_t zone) {
    if (max_order < 0) throw std::invalid_argument("taylor_coefficients: max order must be nonnegative");
    const std::size_t L = schedule.pair().length();
    const auto corr = per_pri_correlations(schedule, row_a, row_b);
    const auto bits = ptm(schedule.pri_count());
    const auto Z = static_cast<std::ptrdiff_t>(zone);
    const std::ptrdiff_t first_in_zone = row_a == row_b ? 1 : 0;

    std::vector<TaylorReport> out;
    for (int m = 0; m <= max_order; ++m) {
        ComplexVector lags(2 * L - 1, Complex{});
        for (std::size_t n = 0; n < corr.size(); ++n) {
            const double weight = std::pow(static_cast<double>(n), m);
            for (std::size_t i = 0; i < lags.size(); ++i) lags[i] += weight * corr[n].values()[i];
        }
        CorrelationVector lv(L, std::move(lags));
        TaylorReport r{m, lv, prouhet_partition_sums(bits, m).ones, 0.0, 0.0};
        r.in_zone_max = Z > first_in_zone ? max_modulus(lv, first_in_zone, Z - 1) : 0.0;
        r.out_zone_max = Z <= lv.max_lag() ? max_modulus(lv, Z, lv.max_lag()) : 0.0;
        out.push_back(std::move(r));
    }
    return out;
}

MetricsReport zone_metrics(const SequencePair& pair, std::size_t zone, const TransmitSchedule& schedule,
                           const DelayDopplerGrid& omega1, const DelayDopplerGrid& omega2) {
    if (zone < 1 || zone > pair.length()) throw std::invalid_argument("zone_metrics: zone must lie in [1, L]");
    const auto Z = static_cast<std::ptrdiff_t>(zone);
    MetricsReport m;
    m.max_complementary_sidelobe_in_zone = max_modulus(complementary_sum(pair), 1, Z - 1);
    m.max_cross_correlation_in_zone = max_modulus(cross_correlation(pair.x(), pair.y()), 0, Z - 1);

    const auto aaf = ambiguity_surface(schedule, 0, 0, omega1);
    m.max_aaf_sidelobe_omega1 = aaf.max_modulus(true);
    const auto peak = ambiguity_surface(schedule, 0, 0, DelayDopplerGrid{0, {0.0}});
    m.peak_value = std::abs(peak.at(0, 0));
    if (schedule.rows() > 1) m.max_caf_omega2 = ambiguity_surface(schedule, 0, 1, omega2).max_modulus(false);
    return m;
}

MetricsReport zone_metrics(const SequencePair& pair, std::size_t zone, const MetricsOptions& options) {
    const auto K = static_cast<std::ptrdiff_t>(zone) - 1;
    return zone_metrics(pair, zone, ptm_a_schedule(pair, options.pri_count),
                        DelayDopplerGrid::uniform(K, options.omega1_theta_max, options.omega1_samples),
                        DelayDopplerGrid::uniform(K, options.omega2_theta_max, options.omega2_samples));
}

}  // namespace qozcp
