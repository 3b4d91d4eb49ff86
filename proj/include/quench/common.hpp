#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace quench {

using complexd = std::complex<double>;

// Probability mass lost to basis truncation, clamped at zero so roundoff on
// unit-norm states does not report a negative tail.
inline double tail_mass(std::span<const complexd> coeffs) {
    double norm2 = 0.0;
    for (const complexd& c : coeffs) norm2 += std::norm(c);
    return norm2 < 1.0 ? 1.0 - norm2 : 0.0;
}

// A chained computation lost more probability mass to truncation than the
// caller allowed.
class LeakyTruncation : public std::runtime_error {
public:
    LeakyTruncation(double tail, double threshold)
        : std::runtime_error("truncation tail mass " + std::to_string(tail) +
                             " exceeds threshold " + std::to_string(threshold) +
                             " (increase the basis size or allow leaky runs)"),
          tail_(tail),
          threshold_(threshold) {}
    double tail() const noexcept { return tail_; }
    double threshold() const noexcept { return threshold_; }

private:
    double tail_;
    double threshold_;
};

// Two successive quadrature orders disagreed beyond the advertised accuracy.
class ConvergenceWarning : public std::runtime_error {
public:
    explicit ConvergenceWarning(double discrepancy)
        : std::runtime_error("quadrature did not settle: successive orders differ by " +
                             std::to_string(discrepancy)),
          discrepancy_(discrepancy) {}
    double discrepancy() const noexcept { return discrepancy_; }

private:
    double discrepancy_;
};

enum class ValidationIssue {
    NonMonotonicTimes,
    NonFiniteField,
    TooFewSegments,
    UnsupportedAcceleration,
};

inline const char* to_string(ValidationIssue issue) {
    switch (issue) {
        case ValidationIssue::NonMonotonicTimes: return "NonMonotonicTimes";
        case ValidationIssue::NonFiniteField: return "NonFiniteField";
        case ValidationIssue::TooFewSegments: return "TooFewSegments";
        case ValidationIssue::UnsupportedAcceleration: return "UnsupportedAcceleration";
    }
    return "unknown";
}

// Protocol invariant violation; segment_index() is -1 when the problem is not
// tied to a particular segment.
class ValidationError : public std::runtime_error {
public:
    ValidationError(ValidationIssue issue, int segment_index, const std::string& detail)
        : std::runtime_error(std::string(to_string(issue)) + ": " + detail),
          issue_(issue),
          segment_index_(segment_index) {}
    ValidationIssue issue() const noexcept { return issue_; }
    int segment_index() const noexcept { return segment_index_; }

private:
    ValidationIssue issue_;
    int segment_index_;
};

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(std::size_t line, std::size_t column, const std::string& detail)
        : std::runtime_error("syntax error at line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + detail),
          line_(line),
          column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& key, const std::string& detail)
        : std::runtime_error("schema error for key \"" + key + "\": " + detail), key_(key) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& path, const std::string& detail)
        : std::runtime_error("i/o error on \"" + path + "\": " + detail), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

// Dense square complex matrix, row-major.  Big enough for truncated quench
// matrices (N up to a few hundred); nothing fancier is needed.
class CMatrix {
public:
    explicit CMatrix(std::size_t n) : n_(n), a_(n * n) {}

    std::size_t size() const noexcept { return n_; }

    complexd& operator()(std::size_t row, std::size_t col) { return a_[row * n_ + col]; }
    const complexd& operator()(std::size_t row, std::size_t col) const { return a_[row * n_ + col]; }

    std::vector<complexd> apply(std::span<const complexd> x) const {
        std::vector<complexd> y(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            complexd acc = 0.0;
            const complexd* row = &a_[i * n_];
            for (std::size_t j = 0; j < n_; ++j) acc += row[j] * x[j];
            y[i] = acc;
        }
        return y;
    }

    double row_abs2_sum(std::size_t row) const {
        double s = 0.0;
        for (std::size_t j = 0; j < n_; ++j) s += std::norm(a_[row * n_ + j]);
        return s;
    }

private:
    std::size_t n_;
    std::vector<complexd> a_;
};

// i^p for integer p, exact.
inline complexd unit_imag_pow(long p) {
    switch (((p % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

// z^n by repeated multiplication; z^0 == 1 even for z == 0.
inline complexd int_pow(complexd z, int n) {
    complexd r{1.0, 0.0};
    for (int i = 0; i < n; ++i) r *= z;
    return r;
}

}  // namespace quench
