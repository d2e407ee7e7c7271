#pragma once

#include <stdexcept>
#include <string>

namespace docparse {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateRegion : Error {
    explicit DegenerateRegion(const std::string& msg) : Error(msg) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

struct ExtremeAspect : Error {
    explicit ExtremeAspect(const std::string& msg) : Error(msg) {}
};

struct MissingAnnotations : Error {
    explicit MissingAnnotations(const std::string& msg) : Error(msg) {}
};

struct MatrixShapeMismatch : Error {
    explicit MatrixShapeMismatch(const std::string& msg) : Error(msg) {}
};

struct DetectorUnavailable : Error {
    explicit DetectorUnavailable(const std::string& msg) : Error(msg) {}
};

struct MissingGroundTruth : Error {
    explicit MissingGroundTruth(const std::string& msg) : Error(msg) {}
};

struct UnroutableCategory : Error {
    explicit UnroutableCategory(const std::string& msg) : Error(msg) {}
};

struct BackendTimeout : Error {
    explicit BackendTimeout(const std::string& msg) : Error(msg) {}
};

struct InvalidOtsl : Error {
    explicit InvalidOtsl(const std::string& msg) : Error(msg) {}
};

struct UnsupportedMarkup : Error {
    explicit UnsupportedMarkup(const std::string& msg) : Error(msg) {}
};

struct ParseFailure : Error {
    explicit ParseFailure(const std::string& msg) : Error(msg) {}
};

struct CoverageMismatch : Error {
    explicit CoverageMismatch(const std::string& msg) : Error(msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

struct DatasetError : Error {
    explicit DatasetError(const std::string& msg) : Error(msg) {}
};

}  // namespace docparse
