#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace fss {

// Neumaier-compensated accumulator. Sums of up to ~10^4 percentile-scale
// values come out correctly rounded, which the ranking identities rely on.
class KahanSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double compensated_mean(std::span<const double> values);

// Shortest decimal that round-trips to the exact double (std::to_chars).
std::string format_double(double v);

// Fixed decimals for the human-readable table renderings.
std::string format_fixed(double v, int decimals);

std::optional<double> parse_double(const std::string& s);
std::optional<long long> parse_int(const std::string& s);

// FNV-1a, used for corpus fingerprints and config hashes.
class Fnv1a {
public:
    void update(const void* data, std::size_t len);
    void update(const std::string& s) { update(s.data(), s.size()); }
    std::uint64_t digest() const { return state_; }
    std::string hex() const;

private:
    std::uint64_t state_ = 1469598103934665603ull;
};

} // namespace fss
