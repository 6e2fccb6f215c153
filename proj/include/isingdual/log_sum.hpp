#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

namespace isingdual {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

/// ln(e^a + e^b) without overflow. Either argument may be -inf.
inline double log_add(double a, double b) noexcept
{
    if (a < b)
        std::swap(a, b);
    if (b == neg_inf)
        return a;
    return a + std::log1p(std::exp(b - a));
}

/// Streaming log-sum-exp. Keeps the running maximum as a reference point and
/// a linear-domain sum scaled relative to it, so each add costs one exp.
class LogSumExp
{
public:
    void add(double log_value) noexcept
    {
        ++count_;
        if (log_value == neg_inf)
            return;
        if (log_value <= ref_) {
            scaled_ += std::exp(log_value - ref_);
        } else {
            scaled_ = scaled_ * std::exp(ref_ - log_value) + 1.0;
            ref_ = log_value;
        }
    }

    void merge(const LogSumExp& other) noexcept
    {
        count_ += other.count_;
        if (other.ref_ == neg_inf)
            return;
        if (ref_ == neg_inf) {
            ref_ = other.ref_;
            scaled_ = other.scaled_;
        } else if (other.ref_ <= ref_) {
            scaled_ += other.scaled_ * std::exp(other.ref_ - ref_);
        } else {
            scaled_ = scaled_ * std::exp(ref_ - other.ref_) + other.scaled_;
            ref_ = other.ref_;
        }
    }

    [[nodiscard]] double log_sum() const noexcept
    {
        return ref_ == neg_inf ? neg_inf : ref_ + std::log(scaled_);
    }

    [[nodiscard]] std::uint64_t count() const noexcept { return count_; }

private:
    double ref_ = neg_inf;
    double scaled_ = 0.0;
    std::uint64_t count_ = 0;
};

/// Log-domain mean of a stream of log-values: ln((1/K) sum e^{v_k}).
class RunningLogMean
{
public:
    void add(double log_value) noexcept { sum_.add(log_value); }
    void merge(const RunningLogMean& other) noexcept { sum_.merge(other.sum_); }

    [[nodiscard]] std::uint64_t count() const noexcept { return sum_.count(); }
    [[nodiscard]] double log_sum() const noexcept { return sum_.log_sum(); }

    [[nodiscard]] double log_mean() const noexcept
    {
        if (count() == 0)
            return neg_inf;
        return sum_.log_sum() - std::log(static_cast<double>(count()));
    }

private:
    LogSumExp sum_;
};

/// Sign and log-magnitude of a real number; zero is {0, -inf}.
struct SignedLog
{
    int sign = 0;
    double log_abs = neg_inf;
};

/// Log-domain accumulation of terms with arbitrary sign, kept as separate
/// positive and negative log-sums.
class SignedLogSum
{
public:
    void add(SignedLog term) noexcept
    {
        if (term.sign > 0)
            pos_.add(term.log_abs);
        else if (term.sign < 0)
            neg_.add(term.log_abs);
    }

    [[nodiscard]] SignedLog value() const noexcept
    {
        const double p = pos_.log_sum();
        const double n = neg_.log_sum();
        if (p == n)
            return {};
        if (p > n)
            return {1, n == neg_inf ? p : p + std::log1p(-std::exp(n - p))};
        return {-1, p == neg_inf ? n : n + std::log1p(-std::exp(p - n))};
    }

private:
    LogSumExp pos_;
    LogSumExp neg_;
};

} // namespace isingdual
