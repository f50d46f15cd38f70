// SPDX-License-Identifier: Apache-2.0
//
// onebit: capacity of one-bit transceiver arrays in Rayleigh fading
// ------------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "onebit/math_kernel.hpp"

namespace onebit {

/// Largest receiver count for which the full output table is built.
inline constexpr std::size_t kMaxTableReceivers = 24;
/// Largest m + n for exhaustive enumeration (2^(m+n) work per channel).
inline constexpr std::size_t kMaxEnumerationSize = 34;
/// Largest transmitter count for the output-sampling path (2^m work per sample).
inline constexpr std::size_t kMaxSampledTransmitters = 20;

/// Raised when a requested size is outside every available evaluation path.
class FeasibilityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// m transmitters, n receivers, linear SNR rho.
class FiniteSystem {
 public:
  FiniteSystem(std::size_t m, std::size_t n, double rho);

  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  double rho() const { return rho_; }

  /// True if the output table can be enumerated exhaustively.
  bool enumerable() const { return n_ <= kMaxTableReceivers && m_ + n_ <= kMaxEnumerationSize; }

 private:
  std::size_t m_, n_;
  double rho_;
};

/// Dense n x m matrix, row-major. Row k holds the gains into receiver k.
class ChannelMatrix {
 public:
  ChannelMatrix() = default;
  ChannelMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  ChannelMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

/// Seeded generator for channel draws. Stream i of seed s is independent of
/// every other (s, i) pair and reproducible across platforms: the engine is
/// std::mt19937_64 keyed by std::seed_seq and normals come from a fixed
/// Box-Muller transform rather than std::normal_distribution.
class ChannelRng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64/seed_seq(seed,stream)/box-muller-v1";

  explicit ChannelRng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Uniform in the open interval (0, 1).
  double uniform();
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// n x m matrix of i.i.d. N(0, 1) entries.
ChannelMatrix sample_channel(std::size_t m, std::size_t n, ChannelRng& rng);

/// n (1 - c(rho)): entropy of the outputs given input and channel, averaged over the channel law.
double cond_entropy_given_input(double rho, std::size_t n,
                                const NormalIntegrator& integ = default_integrator());

/// p(y | H) for all y in {+1, -1}^n under uniform inputs. Index bit k set means y_k = -1.
/// Throws FeasibilityError for n > kMaxTableReceivers or m + n > kMaxEnumerationSize.
std::vector<double> output_distribution(const ChannelMatrix& channel, double rho);

/// H(y | H) in bits by enumeration.
double output_entropy(const ChannelMatrix& channel, double rho);

/// H(y | H) in bits estimated from `samples` output draws. Returns the standard error too.
struct SampledEntropy {
  double value;
  double std_err;
};
SampledEntropy sampled_output_entropy(const ChannelMatrix& channel, double rho,
                                      std::size_t samples, ChannelRng& rng);

/// H(y | x, H) for one fixed channel, averaged over uniform inputs.
double channel_cond_entropy(const ChannelMatrix& channel, double rho);

enum class EntropyMethod { EnumerateOutputs, SampleOutputs };
enum class ConditionalEntropy {
  ClosedForm,  ///< n (1 - c(rho)), exact in expectation over H
  PerChannel   ///< H(y | x, H) summed per channel draw
};

std::string_view to_string(EntropyMethod m);
std::string_view to_string(ConditionalEntropy c);

struct ExactOptions {
  ConditionalEntropy conditional = ConditionalEntropy::ClosedForm;
  std::size_t output_samples = 4000;  ///< used only when enumeration is infeasible
  unsigned threads = 0;               ///< 0 = hardware concurrency
};

struct ExactCapacityEstimate {
  double mean = 0.0;  ///< bits per transmitter
  double std_err = 0.0;
  std::size_t num_channels = 0;
  std::uint64_t seed = 0;
  EntropyMethod method = EntropyMethod::EnumerateOutputs;
  ConditionalEntropy conditional = ConditionalEntropy::ClosedForm;
  std::string_view rng_algorithm = ChannelRng::kAlgorithm;

  // One entry per channel draw, in draw order.
  std::vector<double> per_channel;         ///< capacity contribution (bits per transmitter)
  std::vector<double> output_entropies;    ///< H(y | H)
  std::vector<double> cond_entropies;      ///< H(y | x, H) as used
};

/// Channel i is drawn from ChannelRng(seed, i); results do not depend on the thread count.
ExactCapacityEstimate exact_capacity(const FiniteSystem& system, std::size_t num_channels,
                                     std::uint64_t seed, const ExactOptions& opts = {},
                                     const NormalIntegrator& integ = default_integrator());

}  // namespace onebit
