#include "ulln/dyadic.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include <mpfr.h>

#include "ulln/errors.hpp"

namespace ulln::dyadic {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

class MpfrValue {
public:
    explicit MpfrValue(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
    ~MpfrValue() { mpfr_clear(v_); }
    MpfrValue(const MpfrValue&) = delete;
    MpfrValue& operator=(const MpfrValue&) = delete;
    mpfr_ptr get() { return v_; }

private:
    mpfr_t v_;
};

// ceil(x) as uint64, or nullopt when it does not fit.
std::optional<std::uint64_t> ceil_u64(mpfr_ptr x) {
    mpfr_ceil(x, x);
    if (!mpfr_fits_uintmax_p(x, MPFR_RNDN)) {
        return std::nullopt;
    }
    const auto v = mpfr_get_uj(x, MPFR_RNDN);
    if (v > std::numeric_limits<std::uint64_t>::max()) {
        return std::nullopt;
    }
    return static_cast<std::uint64_t>(v);
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept {
    return mix64(mix64(parent) ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

std::uint64_t SplitMix64::next_u64() noexcept { return mix64(seed_ + (++counter_) * kGolden); }

BitStream::BitStream(std::uint64_t seed) : BitStream(seed, Tail::Random, {}) {}

BitStream::BitStream(std::uint64_t seed, Tail tail, std::vector<int> prefix)
    : seed_(seed), tail_(tail), prefix_(std::move(prefix)) {
    for (int b : prefix_) {
        if (b != 0 && b != 1) {
            throw DomainError("BitStream prefix entries must be 0 or 1");
        }
    }
}

BitStream BitStream::from_prefix(std::vector<int> prefix, Tail tail, std::uint64_t seed) {
    return BitStream(seed, tail, std::move(prefix));
}

std::uint64_t BitStream::generate(std::size_t j) const {
    std::uint64_t word = 0;
    switch (tail_) {
        case Tail::Random:
            word = mix64(seed_ + (static_cast<std::uint64_t>(j) + 1) * kGolden);
            break;
        case Tail::Zeros:
            word = 0;
            break;
        case Tail::Ones:
            word = ~std::uint64_t{0};
            break;
    }
    const std::size_t first = 64 * j;
    for (std::size_t i = first; i < prefix_.size() && i < first + 64; ++i) {
        const std::uint64_t mask = std::uint64_t{1} << (63 - (i - first));
        word = prefix_[i] ? (word | mask) : (word & ~mask);
    }
    return word;
}

std::uint64_t BitStream::block(std::size_t j) {
    while (blocks_.size() <= j) {
        blocks_.push_back(generate(blocks_.size()));
    }
    return blocks_[j];
}

int BitStream::bit(std::uint64_t k) {
    if (k == 0) {
        throw DomainError("bit index must be >= 1");
    }
    const std::uint64_t i = k - 1;
    return static_cast<int>((block(i / 64) >> (63 - i % 64)) & 1U);
}

DyadicRational::DyadicRational(BigInt numerator, std::uint64_t exponent)
    : num_(std::move(numerator)), exp_(exponent) {
    if (num_ < 0) {
        throw DomainError("dyadic numerator must be nonnegative");
    }
    if (num_ >= (BigInt(1) << exp_)) {
        throw DomainError("dyadic value must lie in [0,1)");
    }
    if (num_ == 0) {
        exp_ = 0;
        return;
    }
    const auto tz = boost::multiprecision::lsb(num_);
    num_ >>= tz;
    exp_ -= tz;
}

double DyadicRational::to_double() const {
    return std::ldexp(num_.convert_to<double>(), -static_cast<int>(exp_));
}

std::string DyadicRational::to_string() const {
    if (num_ == 0) {
        return "0";
    }
    std::ostringstream os;
    os << num_ << "/2^" << exp_;
    return os.str();
}

std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b) {
    const std::uint64_t e = std::max(a.exp_, b.exp_);
    const BigInt lhs = a.num_ << (e - a.exp_);
    const BigInt rhs = b.num_ << (e - b.exp_);
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

int bit(const DyadicRational& x, std::uint64_t k) {
    if (k == 0) {
        throw DomainError("bit index must be >= 1");
    }
    if (k > x.exponent()) {
        return 0;
    }
    return bit_test(x.numerator(), static_cast<unsigned>(x.exponent() - k)) ? 1 : 0;
}

int bit(BitStream& x, std::uint64_t k) { return x.bit(k); }

DyadicRational expansion_partial_sum(BitStream& x, std::uint64_t K) {
    if (K == 0) {
        throw DomainError("partial sum length must be >= 1");
    }
    BigInt num = 0;
    for (std::uint64_t k = 1; k <= K; ++k) {
        if (x.bit(k)) {
            bit_set(num, static_cast<unsigned>(K - k));
        }
    }
    return DyadicRational(std::move(num), K);
}

std::uint64_t k_bound(std::uint64_t nu) {
    if (nu == 0) {
        throw DomainError("k_bound requires nu >= 1");
    }
    for (mpfr_prec_t prec = 128; prec <= 4096; prec *= 2) {
        MpfrValue lo(prec), hi(prec);
        mpfr_set_uj(lo.get(), nu + 1, MPFR_RNDN);
        mpfr_set(hi.get(), lo.get(), MPFR_RNDN);
        mpfr_log(lo.get(), lo.get(), MPFR_RNDD);
        mpfr_log(hi.get(), hi.get(), MPFR_RNDU);
        // Multiplication by a power of two is exact.
        mpfr_mul_2ui(lo.get(), lo.get(), nu + 1, MPFR_RNDD);
        mpfr_mul_2ui(hi.get(), hi.get(), nu + 1, MPFR_RNDU);
        const auto c_lo = ceil_u64(lo.get());
        const auto c_hi = ceil_u64(hi.get());
        if (!c_hi) {
            throw CapacityError("k_bound(" + std::to_string(nu) + ") exceeds 64 bits");
        }
        if (c_lo && *c_lo == *c_hi) {
            return *c_hi;
        }
    }
    throw CapacityError("k_bound: ceiling not certified at 4096 bits of precision");
}

void Capacity::check_nu(std::uint64_t nu) const {
    if (nu == 0) {
        throw DomainError("nu must be >= 1");
    }
    if (nu > max_nu) {
        throw CapacityError("nu = " + std::to_string(nu) + " exceeds the cap " +
                            std::to_string(max_nu) + " (k_bound grows like 2^(nu+1) ln(nu+1))");
    }
    const std::uint64_t K = k_bound(nu);
    if (K > bit_budget / nu) {
        throw CapacityError("nu * k_bound(nu) = " + std::to_string(nu) + " * " + std::to_string(K) +
                            " bits exceeds the budget of " + std::to_string(bit_budget));
    }
}

void Capacity::check_shatter(std::uint64_t n) const {
    if (n == 0) {
        throw DomainError("shatter size must be >= 1");
    }
    if (n > max_shatter_n) {
        throw CapacityError("shatter size " + std::to_string(n) + " exceeds the cap " +
                            std::to_string(max_shatter_n));
    }
}

std::optional<std::uint64_t> find_joint_one_bit(std::span<BitStream> samples, std::uint64_t K) {
    if (samples.empty() || K == 0) {
        throw DomainError("find_joint_one_bit requires nu >= 1 and K >= 1");
    }
    const std::size_t blocks = (K + 63) / 64;
    for (std::size_t j = 0; j < blocks; ++j) {
        std::uint64_t joint = ~std::uint64_t{0};
        for (auto& s : samples) {
            joint &= s.block(j);
            if (joint == 0) {
                break;
            }
        }
        const std::uint64_t valid = K - 64 * j;
        if (valid < 64) {
            joint &= ~std::uint64_t{0} << (64 - valid);
        }
        if (joint != 0) {
            return 64 * j + static_cast<std::uint64_t>(std::countl_zero(joint)) + 1;
        }
    }
    return std::nullopt;
}

std::vector<DyadicRational> shatter_witness(std::uint64_t n, const Capacity& cap) {
    cap.check_shatter(n);
    const std::uint64_t patterns = std::uint64_t{1} << n;
    std::vector<DyadicRational> out;
    out.reserve(n);
    for (std::uint64_t i = 1; i <= n; ++i) {
        BigInt num = 0;
        for (std::uint64_t k = 1; k <= patterns; ++k) {
            if (((k - 1) >> (n - i)) & 1U) {
                bit_set(num, static_cast<unsigned>(patterns - k));
            }
        }
        out.emplace_back(std::move(num), patterns);
    }
    return out;
}

std::optional<std::uint64_t> realizing_index(std::span<const DyadicRational> points,
                                             std::span<const int> pattern, std::uint64_t limit) {
    if (points.size() != pattern.size()) {
        throw DomainError("pattern length must match the number of points");
    }
    for (std::uint64_t k = 1; k <= limit; ++k) {
        bool all = true;
        for (std::size_t i = 0; i < points.size() && all; ++i) {
            all = bit(points[i], k) == pattern[i];
        }
        if (all) {
            return k;
        }
    }
    return std::nullopt;
}

}  // namespace ulln::dyadic
