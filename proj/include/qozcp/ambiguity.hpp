#pragma once

#include <cstddef>
#include <vector>

#include "qozcp/sequences.hpp"
#include "qozcp/waveform.hpp"

namespace qozcp {

/// Integer delays k in [-K, K] crossed with a sorted list of inter-PRI
/// Doppler phases theta (radians per PRI).
struct DelayDopplerGrid {
    std::ptrdiff_t max_delay = 0;
    std::vector<double> dopplers;

    /// `samples` points evenly spaced over [0, theta_max]; one sample gives {0}.
    static DelayDopplerGrid uniform(std::ptrdiff_t max_delay, double theta_max, std::size_t samples);

    std::size_t delay_count() const noexcept { return static_cast<std::size_t>(2 * max_delay + 1); }
    void validate(std::size_t sequence_length) const;
};

class AmbiguitySurface {
public:
    AmbiguitySurface(DelayDopplerGrid grid, ComplexVector values);

    const DelayDopplerGrid& grid() const noexcept { return grid_; }
    /// g(k, dopplers[j]).
    Complex at(std::ptrdiff_t k, std::size_t j) const;
    std::span<const Complex> values() const noexcept { return values_; }

    /// Largest |g| over the grid, optionally skipping k = 0.
    double max_modulus(bool exclude_zero_delay = false) const;

private:
    DelayDopplerGrid grid_;
    ComplexVector values_;  // row-major, delay-major
};

/// g(k, theta) = sum_n e^{j n theta} C_{a_n b_n}(k) over the PRIs of a
/// schedule, with a_n from row_a and b_n from row_b. row_a == row_b gives
/// the auto-ambiguity function.
AmbiguitySurface ambiguity_surface(const TransmitSchedule& schedule, std::size_t row_a, std::size_t row_b,
                                   const DelayDopplerGrid& grid);

struct TaylorReport {
    int order = 0;
    CorrelationVector lag_vector;
    double beta = 0.0;         // sum_{a_n = 1} n^m of the schedule's PTM bits
    double in_zone_max = 0.0;  // 0 < |k| < Z for auto rows, |k| < Z for cross rows
    double out_zone_max = 0.0; // |k| >= Z
};

/// Lag-domain Taylor coefficients sum_n n^m C_{a_n b_n}(k), m = 0 .. max_order.
std::vector<TaylorReport> taylor_coefficients(const TransmitSchedule& schedule, std::size_t row_a,
                                              std::size_t row_b, int max_order, std::size_t zone);

struct MetricsReport {
    double max_complementary_sidelobe_in_zone = 0.0;
    double max_cross_correlation_in_zone = 0.0;
    double max_aaf_sidelobe_omega1 = 0.0;
    double max_caf_omega2 = 0.0;
    double peak_value = 0.0;  // |g_VV(0, 0)|

    double max_aaf_sidelobe_omega1_normalized() const {
        return peak_value > 0.0 ? max_aaf_sidelobe_omega1 / peak_value : 0.0;
    }
};

struct MetricsOptions {
    std::size_t pri_count = 8;
    double omega1_theta_max = 0.1;
    std::size_t omega1_samples = 256;
    double omega2_theta_max = 3.0;
    std::size_t omega2_samples = 512;
};

/// In-zone correlation maxima plus AAF/CAF maxima over the two delay-Doppler
/// windows, using the schedule's first row for the AAF and rows 0/1 for
/// the CAF (zero when the schedule has a single row).
MetricsReport zone_metrics(const SequencePair& pair, std::size_t zone, const TransmitSchedule& schedule,
                           const DelayDopplerGrid& omega1, const DelayDopplerGrid& omega2);

/// Same, with an N-PRI PTM-A schedule and uniform grids from `options`.
MetricsReport zone_metrics(const SequencePair& pair, std::size_t zone, const MetricsOptions& options = {});

}  // namespace qozcp
