#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mdcs/problems.hpp"

namespace mdcs {

/// Shortest round-trip decimal representation; deterministic given the value.
std::string format_double(double v);

/// FNV-1a 32-bit hash, rendered as 8 hex digits for content checksums.
std::uint32_t fnv1a32(std::string_view s);
std::string hex32(std::uint32_t v);

enum class IoErrorKind {
  MissingFile,
  EmptyDataset,
  Parse,
  OutOfBounds,
  ChecksumMismatch,
  BadFormat,
};

class IoError : public std::runtime_error {
 public:
  IoError(IoErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  IoErrorKind kind() const { return kind_; }

 private:
  IoErrorKind kind_;
};

/// Dataset CSV: comma-separated feature columns followed by one integer
/// label column; an optional header row is auto-detected. Values are
/// validated against [value_lo, value_hi]; malformed rows are reported with
/// their line number.
Dataset load_csv(const std::string& path, double value_lo = 0.0,
                 double value_hi = 1.0);
void save_csv(const Dataset& data, const std::string& path);

/// Versioned structured-text model format: field names, shapes and row-major
/// weights, terminated by an 8-hex-digit content checksum.
void save_model(const ToyClassifier& model, const std::string& path);
ToyClassifier load_model(const std::string& path);

}  // namespace mdcs
