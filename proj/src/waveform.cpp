#include "qozcp/waveform.hpp"

#include <cmath>
#include <stdexcept>

namespace qozcp {

PtmSequence ptm(std::size_t n) {
    if (n == 0) throw std::invalid_argument("ptm: N must be at least 1");
    PtmSequence s;
    s.bits.resize(n);
    s.bits[0] = 0;
    for (std::size_t i = 1; i < n; ++i) {
        s.bits[i] = (i % 2 == 0) ? s.bits[i / 2] : static_cast<std::uint8_t>(1 - s.bits[i / 2]);
    }
    return s;
}

PartitionSums prouhet_partition_sums(const PtmSequence& bits, int order) {
    if (order < 0) throw std::invalid_argument("prouhet_partition_sums: order must be nonnegative");
    PartitionSums sums;
    for (std::size_t n = 0; n < bits.size(); ++n) {
        const double term = std::pow(static_cast<double>(n), order);  // pow(0, 0) == 1
        (bits.bits[n] == 0 ? sums.zeros : sums.ones) += term;
    }
    return sums;
}

SequencePair golay_pair(std::size_t length) {
    if (length < 2 || length > 1024 || (length & (length - 1)) != 0) {
        throw std::invalid_argument("golay_pair: length must be a power of two in [2, 1024]");
    }
    ComplexVector x{1.0}, y{1.0};
    while (x.size() < length) {
        ComplexVector nx(x), ny(x);
        nx.insert(nx.end(), y.begin(), y.end());
        for (const auto& v : y) ny.push_back(-v);
        x = std::move(nx);
        y = std::move(ny);
    }
    return SequencePair(ComplexSequence(std::move(x)), ComplexSequence(std::move(y)),
                        {{"source", "golay:" + std::to_string(length)}});
}

std::string to_string(const SequenceVariant& v) {
    std::string s = v.negated ? "-" : "";
    s += v.base == BaseSequence::X ? "x" : "y";
    if (v.reversed_conjugated) s += "~";
    return s;
}

TransmitSchedule::TransmitSchedule(SequencePair pair, std::vector<std::vector<SequenceVariant>> assignments)
    : pair_(std::move(pair)), assignments_(std::move(assignments)) {
    if (assignments_.empty() || assignments_.front().empty()) {
        throw std::invalid_argument("schedule needs at least one row and one PRI");
    }
    for (const auto& row : assignments_) {
        if (row.size() != assignments_.front().size()) throw std::invalid_argument("schedule rows differ in length");
    }
}

const SequenceVariant& TransmitSchedule::variant(std::size_t row, std::size_t n) const {
    if (row >= rows() || n >= pri_count()) throw std::invalid_argument("schedule cell out of range");
    return assignments_[row][n];
}

ComplexSequence TransmitSchedule::materialize(std::size_t row, std::size_t n) const {
    return qozcp::materialize(variant(row, n), pair_);
}

ComplexSequence materialize(const SequenceVariant& variant, const SequencePair& pair) {
    ComplexSequence s = variant.base == BaseSequence::X ? pair.x() : pair.y();
    if (variant.reversed_conjugated) s = reverse_conjugate(s);
    if (!variant.negated) return s;
    ComplexVector v(s.begin(), s.end());
    for (auto& c : v) c = -c;
    return ComplexSequence(std::move(v));
}

ComplexSequence materialize(const TransmitSchedule& schedule, std::size_t row, std::size_t n) {
    return schedule.materialize(row, n);
}

TransmitSchedule siso_schedule(const SequencePair& pair, std::size_t n) {
    const auto a = ptm(n);
    std::vector<SequenceVariant> row(n);
    for (std::size_t i = 0; i < n; ++i) row[i].base = a.bits[i] == 0 ? BaseSequence::X : BaseSequence::Y;
    return TransmitSchedule(pair, {std::move(row)});
}

TransmitSchedule ptm_a_schedule(const SequencePair& pair, std::size_t n) {
    if (n == 0 || n % 2 != 0) throw std::invalid_argument("ptm_a_schedule: N must be a positive even number");
    const auto a = ptm(n);
    constexpr SequenceVariant x{BaseSequence::X, false, false};
    constexpr SequenceVariant y{BaseSequence::Y, false, false};
    constexpr SequenceVariant neg_x{BaseSequence::X, true, false};
    constexpr SequenceVariant neg_y{BaseSequence::Y, true, false};
    constexpr SequenceVariant x_rc{BaseSequence::X, false, true};
    constexpr SequenceVariant neg_y_rc{BaseSequence::Y, true, true};

    std::vector<SequenceVariant> v(n), h(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool even = i % 2 == 0;
        if (a.bits[i] == 1) {
            v[i] = neg_y_rc;
            h[i] = x_rc;
        } else {
            v[i] = even ? x : neg_x;
            h[i] = even ? y : neg_y;
        }
    }
    return TransmitSchedule(pair, {std::move(v), std::move(h)});
}

}  // namespace qozcp
