#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hyparr {

/// Error raised by operations whose mathematical preconditions fail
/// (invalid sheaf, non-polarization, shape mismatch, ...). The CLI maps
/// these to exit code 1.
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Error raised by file / JSON parsing problems. CLI exit code 2.
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// A selection complex that should be exact away from one degree is not;
/// downstream constructions depend on the concentration, so this aborts.
struct AcyclicityError : DomainError {
  explicit AcyclicityError(const std::string& what) : DomainError(what) {}
};

/// The kernel -> cokernel change of model came out singular.
struct TransportError : DomainError {
  explicit TransportError(const std::string& what) : DomainError(what) {}
};

/// Number of worker threads used by bulk loops. 1 = sequential.
int worker_threads();
void set_worker_threads(int n);

/// Runs fn(i) for i in [0, n). Results must be written into caller-owned
/// slots indexed by i so the merge order is deterministic regardless of
/// scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// FNV-1a hash of a byte string, printed as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace hyparr
