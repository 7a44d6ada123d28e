#pragma once

// Exact binary digits of uniform [0,1] samples.
//
// A uniform sample is never held as a float: it is a lazily materialized
// stream of iid fair bits, so digit k is available for any k the caller can
// afford to store. Explicit values (shattering witnesses, test fixtures) are
// dyadic rationals with an arbitrary-precision numerator.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ulln::dyadic {

using BigInt = boost::multiprecision::cpp_int;

/// Identity string recorded in experiment reports.
inline constexpr const char* kGeneratorName = "splitmix64-counter/1";

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// Child seed for the `index`-th independent stream under `parent`.
/// Rule: mix64(mix64(parent) ^ mix64(index + 0x632BE59BD9B4E019)).
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept;

/// Counter-based SplitMix64: the j-th draw is mix64(seed + (j+1) * golden).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : seed_(seed) {}
    std::uint64_t next_u64() noexcept;
    /// Uniform on [0,1) with 53 random bits.
    double next_unit() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1p-53; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

/// Lazily materialized binary expansion 0.b1 b2 b3 ... of a uniform sample.
///
/// Bits are produced in 64-bit blocks; block j (0-based) of a random stream is
/// the j-th SplitMix64 output for state `seed`, and bit 64j+1 is its most
/// significant bit. Materialized blocks are cached, so a bit never changes
/// once read.
class BitStream {
public:
    enum class Tail { Random, Zeros, Ones };

    explicit BitStream(std::uint64_t seed);

    /// Stream whose first bits are `prefix` (each 0 or 1), continued by `tail`.
    static BitStream from_prefix(std::vector<int> prefix, Tail tail = Tail::Zeros,
                                 std::uint64_t seed = 0);

    std::uint64_t seed() const noexcept { return seed_; }

    /// Digit k (1-based). Throws DomainError for k = 0.
    int bit(std::uint64_t k);

    /// Bits 64j+1 .. 64j+64, most significant first.
    std::uint64_t block(std::size_t j);

    std::uint64_t materialized_bits() const noexcept { return 64 * blocks_.size(); }

private:
    BitStream(std::uint64_t seed, Tail tail, std::vector<int> prefix);
    std::uint64_t generate(std::size_t j) const;

    std::uint64_t seed_;
    Tail tail_;
    std::vector<int> prefix_;
    std::vector<std::uint64_t> blocks_;
};

/// numerator / 2^exponent in [0,1), kept with an odd numerator (or 0/2^0).
class DyadicRational {
public:
    DyadicRational() = default;
    DyadicRational(BigInt numerator, std::uint64_t exponent);

    const BigInt& numerator() const noexcept { return num_; }
    std::uint64_t exponent() const noexcept { return exp_; }

    double to_double() const;
    /// "0" or "num/2^exp".
    std::string to_string() const;

    friend bool operator==(const DyadicRational&, const DyadicRational&) = default;
    friend std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b);

private:
    BigInt num_ = 0;
    std::uint64_t exp_ = 0;
};

/// k-th binary digit under the terminating-zeros convention.
int bit(const DyadicRational& x, std::uint64_t k);
int bit(BitStream& x, std::uint64_t k);

/// sum_{k <= K} 2^{-k} bit_k(x); satisfies v <= x < v + 2^{-K}.
DyadicRational expansion_partial_sum(BitStream& x, std::uint64_t K);

/// ceil(2^{nu+1} ln(nu+1)), with the ceiling certified by directed-rounding
/// enclosures of the logarithm. Throws CapacityError if it exceeds 64 bits.
std::uint64_t k_bound(std::uint64_t nu);

/// Limits on experiment sizes. Exceeding one is an error, never a truncation.
struct Capacity {
    std::uint64_t max_nu = 24;
    /// Upper bound on nu * k_bound(nu) bits a single trial may touch.
    std::uint64_t bit_budget = std::uint64_t{1} << 32;
    std::uint64_t max_shatter_n = 16;

    void check_nu(std::uint64_t nu) const;
    void check_shatter(std::uint64_t n) const;
};

/// Smallest k <= K with bit_k = 1 in every sample, if any.
std::optional<std::uint64_t> find_joint_one_bit(std::span<BitStream> samples, std::uint64_t K);

/// n witnesses xi^i = sum_{k <= 2^n} 2^{-k} b^k_i, where b^k is the binary
/// representation of k-1 with b^k_1 its most significant digit, so b^1..b^{2^n}
/// list {0,1}^n in lexicographic order.
std::vector<DyadicRational> shatter_witness(std::uint64_t n, const Capacity& cap = {});

/// Smallest k in 1..limit with bit_k(points[i]) = pattern[i] for every i.
std::optional<std::uint64_t> realizing_index(std::span<const DyadicRational> points,
                                             std::span<const int> pattern, std::uint64_t limit);

}  // namespace ulln::dyadic
