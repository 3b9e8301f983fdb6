#pragma once

#include <stdexcept>
#include <string>

namespace uniforce {

// Error taxonomy maps onto CLI exit codes: usage -> 2, data -> 3, internal -> 4.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : DataError {
    using DataError::DataError;
};
struct IoError : DataError {
    using DataError::DataError;
};
struct EmptyDataset : DataError {
    using DataError::DataError;
};
struct InvalidSpec : UsageError {
    using UsageError::UsageError;
};
struct TooFewPoints : DataError {
    using DataError::DataError;
};
struct NonFiniteValue : DataError {
    using DataError::DataError;
};
struct InvalidReps : UsageError {
    using UsageError::UsageError;
};
struct InvalidGrid : UsageError {
    using UsageError::UsageError;
};
struct EmptyTable : DataError {
    using DataError::DataError;
};
struct KTooLarge : UsageError {
    using UsageError::UsageError;
};
struct CoincidentCenters : DataError {
    using DataError::DataError;
};
struct EmptySubcluster : DataError {
    using DataError::DataError;
};
struct LengthMismatch : DataError {
    using DataError::DataError;
};
struct NotTwoDimensional : UsageError {
    using UsageError::UsageError;
};

}  // namespace uniforce
