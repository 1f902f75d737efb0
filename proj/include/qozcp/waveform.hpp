#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qozcp/sequences.hpp"

namespace qozcp {

/// First N terms of the Prouhet-Thue-Morse sequence:
/// a_0 = 0, a_2k = a_k, a_2k+1 = 1 - a_k.
struct PtmSequence {
    std::vector<std::uint8_t> bits;

    std::size_t size() const noexcept { return bits.size(); }
};

PtmSequence ptm(std::size_t n);

/// Power sums of the PTM index partition: zeros = sum_{a_n=0} n^m,
/// ones = sum_{a_n=1} n^m. `ones` is the scalar beta_m of the SISO schedule.
struct PartitionSums {
    double zeros = 0.0;
    double ones = 0.0;
};

PartitionSums prouhet_partition_sums(const PtmSequence& bits, int order);

/// Binary Golay pair from the doubling recursion x' = [x, y], y' = [x, -y]
/// seeded with ([1], [1]). `length` must be a power of two in [2, 1024].
SequencePair golay_pair(std::size_t length);

enum class BaseSequence { X, Y };

struct SequenceVariant {
    BaseSequence base = BaseSequence::X;
    bool negated = false;
    bool reversed_conjugated = false;

    friend bool operator==(const SequenceVariant&, const SequenceVariant&) = default;
};

/// Short label such as "x", "-y~".
std::string to_string(const SequenceVariant& v);

/// rows x N grid of symbolic variants of a pair. Cells are materialized on
/// demand.
class TransmitSchedule {
public:
    TransmitSchedule(SequencePair pair, std::vector<std::vector<SequenceVariant>> assignments);

    std::size_t rows() const noexcept { return assignments_.size(); }
    std::size_t pri_count() const noexcept { return assignments_.front().size(); }
    const SequencePair& pair() const noexcept { return pair_; }
    const SequenceVariant& variant(std::size_t row, std::size_t n) const;

    ComplexSequence materialize(std::size_t row, std::size_t n) const;

private:
    SequencePair pair_;
    std::vector<std::vector<SequenceVariant>> assignments_;
};

ComplexSequence materialize(const SequenceVariant& variant, const SequencePair& pair);
ComplexSequence materialize(const TransmitSchedule& schedule, std::size_t row, std::size_t n);

/// One-row schedule: PRI n carries x when a_n = 0 and y otherwise.
TransmitSchedule siso_schedule(const SequencePair& pair, std::size_t n);

/// Two-row (V over H) PTM-driven Alamouti schedule; N must be even.
TransmitSchedule ptm_a_schedule(const SequencePair& pair, std::size_t n);

}  // namespace qozcp
