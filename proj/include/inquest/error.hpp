#pragma once

#include <stdexcept>
#include <string>

namespace inquest {

/// Base for every failure raised by the library. The CLI maps these to exit status 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A required input file is missing or unreadable.
class IngestionError : public Error {
public:
    using Error::Error;
};

/// Malformed text input (CSV rows, JSON documents, source files).
class ParseError : public Error {
public:
    using Error::Error;
};

class MetricError : public Error {
public:
    using Error::Error;
};

/// Density requested for a unit with zero lines of code.
class UndefinedMetricError : public MetricError {
public:
    using MetricError::MetricError;
};

/// The selector needs a value the unit's records do not carry.
class MissingMetricError : public MetricError {
public:
    using MetricError::MetricError;
};

class RuleError : public Error {
public:
    using Error::Error;
};

class EvaluationError : public Error {
public:
    using Error::Error;
};

class StoreError : public Error {
public:
    using Error::Error;
};

}  // namespace inquest
