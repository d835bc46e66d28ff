#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nftsquat {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration, missing file, or malformed input record. CLI exit 1.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Input that parses but contradicts itself (undecodable logs, negative
/// supply). CLI exit 2.
class DataIntegrityError : public Error {
public:
  using Error::Error;
};

class DecodeError : public DataIntegrityError {
public:
  DecodeError(const std::string& tx_hash, std::uint64_t log_index, const std::string& what)
      : DataIntegrityError("decode error in tx " + tx_hash + " log " + std::to_string(log_index) +
                           ": " + what),
        tx_hash_(tx_hash),
        log_index_(log_index) {}

  const std::string& tx_hash() const noexcept { return tx_hash_; }
  std::uint64_t log_index() const noexcept { return log_index_; }

private:
  std::string tx_hash_;
  std::uint64_t log_index_;
};

/// Collects non-fatal warnings (skipped seeds, duplicate records) so callers
/// can decide whether to print them.
struct Diagnostics {
  std::vector<std::string> warnings;

  void warn(std::string msg) { warnings.push_back(std::move(msg)); }
};

inline void warn(Diagnostics* diag, std::string msg) {
  if (diag != nullptr) diag->warn(std::move(msg));
}

}  // namespace nftsquat
