#ifndef TWONN_ERROR_HPP
#define TWONN_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

/**
 * @file error.hpp
 *
 * @brief Exception types thrown by the library.
 *
 * Every error derives from `twonn::Error`, so callers that only need a
 * diagnostic can catch the base class. Input-validation failures carry the
 * offending position so that command-line tools can report it.
 */

namespace twonn {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class NonFiniteError : public Error {
public:
    NonFiniteError(std::size_t row, std::size_t col)
        : Error("non-finite value at row " + std::to_string(row) + ", column " + std::to_string(col)),
          row_(row), col_(col) {}
    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }

private:
    std::size_t row_, col_;
};

class TooFewPointsError : public Error {
public:
    explicit TooFewPointsError(std::size_t n)
        : Error("need at least 3 points, got " + std::to_string(n)), n_(n) {}
    std::size_t count() const noexcept { return n_; }

private:
    std::size_t n_;
};

class RaggedRowsError : public Error {
public:
    RaggedRowsError(std::size_t row, std::size_t expected, std::size_t got)
        : Error("row " + std::to_string(row) + " has " + std::to_string(got) + " columns, expected " +
                std::to_string(expected)),
          row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class DimensionMismatchError : public Error {
public:
    DimensionMismatchError(std::size_t a, std::size_t b)
        : Error("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

class InvalidMetricError : public Error {
public:
    using Error::Error;
};

/// A coordinate lies outside [0, L) for a periodic metric.
class PointOutsideBoxError : public Error {
public:
    PointOutsideBoxError(std::size_t row, std::size_t col)
        : Error("point " + std::to_string(row) + " lies outside the periodic box along coordinate " +
                std::to_string(col)),
          row_(row), col_(col) {}
    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }

private:
    std::size_t row_, col_;
};

class DuplicatePointsError : public Error {
public:
    using IndexPair = std::pair<std::size_t, std::size_t>;

    explicit DuplicatePointsError(std::vector<IndexPair> pairs)
        : Error(describe(pairs)), pairs_(std::move(pairs)) {}

    /// Coincident pairs (i, j) with i < j.
    const std::vector<IndexPair>& pairs() const noexcept { return pairs_; }

private:
    static std::string describe(const std::vector<IndexPair>& pairs) {
        std::string msg = "duplicate points (r1 = 0):";
        const std::size_t shown = pairs.size() < 5 ? pairs.size() : 5;
        for (std::size_t k = 0; k < shown; ++k) {
            msg += " (" + std::to_string(pairs[k].first) + "," + std::to_string(pairs[k].second) + ")";
        }
        if (pairs.size() > shown) {
            msg += " and " + std::to_string(pairs.size() - shown) + " more";
        }
        return msg;
    }

    std::vector<IndexPair> pairs_;
};

class NotSquareError : public Error {
public:
    using Error::Error;
};

class AsymmetricMatrixError : public Error {
public:
    AsymmetricMatrixError(std::size_t i, std::size_t j)
        : Error("distance matrix is not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")"),
          i_(i), j_(j) {}
    std::size_t row() const noexcept { return i_; }
    std::size_t col() const noexcept { return j_; }

private:
    std::size_t i_, j_;
};

class NegativeDistanceError : public Error {
public:
    NegativeDistanceError(std::size_t i, std::size_t j)
        : Error("negative distance at (" + std::to_string(i) + "," + std::to_string(j) + ")") {}
};

class InvalidDiagonalError : public Error {
public:
    explicit InvalidDiagonalError(std::size_t i)
        : Error("distance matrix diagonal entry " + std::to_string(i) + " is not zero") {}
};

/// All log(mu) are zero, so no slope can be fitted.
class NoSpreadError : public Error {
public:
    NoSpreadError() : Error("no spread in mu: every ratio r2/r1 equals 1") {}
};

class TooFewAfterDiscardError : public Error {
public:
    TooFewAfterDiscardError(std::size_t n_total, std::size_t n_used)
        : Error("only " + std::to_string(n_used) + " of " + std::to_string(n_total) +
                " points remain after discarding; need at least 2") {}
};

class BlockSizeError : public Error {
public:
    using Error::Error;
};

class BlockTooSmallError : public BlockSizeError {
public:
    explicit BlockTooSmallError(std::size_t block_size)
        : BlockSizeError("block size " + std::to_string(block_size) + " is below the minimum of 3") {}
};

class BlockTooLargeError : public BlockSizeError {
public:
    BlockTooLargeError(std::size_t block_size, std::size_t n_total)
        : BlockSizeError("block size " + std::to_string(block_size) + " exceeds the " + std::to_string(n_total) +
                         " available points") {}
};

class UnsupportedCombinationError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : Error("parse error at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_, column_;
};

/// An estimator failure inside one block of a scale scan.
class BlockEstimateError : public Error {
public:
    BlockEstimateError(std::size_t block_size, std::size_t block_index, const std::string& cause)
        : Error("block size " + std::to_string(block_size) + ", block " + std::to_string(block_index) + ": " +
                cause),
          block_size_(block_size), block_index_(block_index) {}
    std::size_t block_size() const noexcept { return block_size_; }
    std::size_t block_index() const noexcept { return block_index_; }

private:
    std::size_t block_size_, block_index_;
};

} // namespace twonn

#endif
