#ifndef UED_COMMON_HPP
#define UED_COMMON_HPP

#include <compare>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ued {

enum class ErrorCode {
  kInvalidLevel,
  kEpisodeDone,
  kGenerationFailed,
  kInvalidEdit,
  kDimensionMismatch,
  kNonFiniteLoss,
  kMissingDistributions,
  kMissingMaxReturn,
  kEmptyBuffer,
  kDoubleCount,
  kStateSyncFailure,
  kNoEquilibriumFound,
  kBoundViolated,
  kInvalidEpsilon,
  kEmptySequence,
  kConfigInvalid,
  kIoError,
  kUsage,
};

std::string_view error_code_name(ErrorCode code);

// Single exception type for the library; the code distinguishes failure kinds.
class UedError : public std::runtime_error {
 public:
  UedError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

using Rng = std::mt19937_64;

// Derives an independent 64-bit seed from a master seed and a stream label,
// so each component (env, policy-init, replay-decision, edits, ...) owns a
// reproducible stream regardless of how many draws other components make.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::uint64_t index = 0);
Rng make_rng(std::uint64_t master, std::string_view label,
             std::uint64_t index = 0);

// Platform-stable primitives (std:: distributions other than the engine are
// implementation-defined, so the simple ones are written out here).
double uniform01(Rng& rng);
std::size_t uniform_index(Rng& rng, std::size_t n);
int uniform_int(Rng& rng, int lo, int hi);  // inclusive bounds
bool bernoulli(Rng& rng, double p);
double sample_gamma(Rng& rng, double shape);
double sample_beta(Rng& rng, double alpha, double beta);
double sample_normal(Rng& rng);
std::size_t sample_categorical(Rng& rng, const double* probs, std::size_t n);

struct Pos {
  int x = 0;
  int y = 0;
  auto operator<=>(const Pos&) const = default;
};

}  // namespace ued

#endif  // UED_COMMON_HPP
