#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace igp {

// Base for all recoverable conditions raised by the library. The CLI maps
// ArgumentError -> exit 2, DataError -> exit 3, BudgetExceeded -> exit 4.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ArgumentError : Error {
    using Error::Error;
};

struct DataError : Error {
    using Error::Error;
};

struct ZeroColumn : DataError {
    int index;
    explicit ZeroColumn(int idx)
        : DataError("column " + std::to_string(idx) + " has zero norm"), index(idx) {}
};

struct RankDeficientError : DataError {
    int index;
    explicit RankDeficientError(int idx)
        : DataError("column " + std::to_string(idx) +
                    " is numerically dependent on the current support"),
          index(idx) {}
};

struct BadDims : ArgumentError {
    using ArgumentError::ArgumentError;
};

struct ZeroVector : ArgumentError {
    using ArgumentError::ArgumentError;
};

struct ZeroSignal : ArgumentError {
    using ArgumentError::ArgumentError;
};

struct EmptyTrace : ArgumentError {
    using ArgumentError::ArgumentError;
};

struct K0ExceedsTrace : ArgumentError {
    int k0;
    int k_reached;
    K0ExceedsTrace(int k0_, int reached)
        : ArgumentError("k0 = " + std::to_string(k0_) + " exceeds trace depth " +
                        std::to_string(reached)),
          k0(k0_), k_reached(reached) {}
};

struct BudgetExceeded : Error {
    std::uint64_t required;
    std::uint64_t budget;
    BudgetExceeded(std::uint64_t req, std::uint64_t bud)
        : Error("subset enumeration needs " + std::to_string(req) +
                " subsets, budget is " + std::to_string(bud)),
          required(req), budget(bud) {}
};

struct ParseError : DataError {
    using DataError::DataError;
};

struct ConvergenceError : Error {
    using Error::Error;
};

}  // namespace igp
