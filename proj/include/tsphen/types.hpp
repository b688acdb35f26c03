#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsphen {

/// Per-cell status of an extracted feature value. A cell is OK exactly when
/// the stored value is a finite real; every other code marks a "special"
/// value that downstream filtration removes.
enum class QualityCode : std::uint8_t {
    OK = 0,
    NOT_FINITE,
    DEGENERATE_INPUT,
    TOO_SHORT,
    NO_CONVERGENCE,
};

const char* to_string(QualityCode code);
std::optional<QualityCode> quality_code_from_string(const std::string& name);

/// One univariate, uniformly sampled recording. After ingestion `values`
/// contains no missing markers; operations state their own minimum-length
/// preconditions.
struct TimeSeries {
    std::string id;
    std::vector<double> values;
    std::optional<double> sampling_rate_hz;
    std::optional<std::string> label;
};

/// An ordered collection of series plus the derived class structure.
/// `classes` is the canonical class order used everywhere a class index or
/// tie-break rule is named: distinct labels sorted lexicographically.
struct Dataset {
    std::vector<TimeSeries> series;
    std::vector<std::string> classes;
    std::vector<std::size_t> class_counts;

    std::size_t size() const { return series.size(); }
};

/// Builds a Dataset from series, inferring classes and counts from the
/// labeled subset. Series order is preserved as given.
Dataset build_dataset(std::vector<TimeSeries> series);

/// Sorted distinct class names of a label sequence.
std::vector<std::string> class_list(std::span<const std::string> labels);

// Error hierarchy. Data-dependent extractor failures are reported as
// QualityCode cells, never as exceptions; these types cover API misuse and
// pipeline-level failures.

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Input shorter than the operation's stated minimum length.
class TooShortError : public Error {
  public:
    using Error::Error;
};

/// Operation requires variability the input does not have (zero variance,
/// constant column, tied ranks, ...).
class DegenerateInputError : public Error {
  public:
    using Error::Error;
};

/// A named class has fewer members than the operation requires.
class ClassTooSmallError : public Error {
  public:
    using Error::Error;
};

/// Some class has no examples in the `actual` label sequence.
class MissingClassError : public Error {
  public:
    using Error::Error;
};

/// Filtration removed every column.
class EmptyResultError : public Error {
  public:
    using Error::Error;
};

/// Matrix rank is below the requested number of components.
class RankDeficientError : public Error {
  public:
    using Error::Error;
};

/// Bad configuration, malformed catalog, or unusable command invocation.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Unreadable or unwritable file.
class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace tsphen
