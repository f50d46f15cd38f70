// SPDX-License-Identifier: Apache-2.0
//
// onebit: capacity of one-bit transceiver arrays in Rayleigh fading
// ------------------------------------------------------------------------

#include "onebit/exact_finite.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <utility>

#include "onebit/replica.hpp"
#include "parallel.hpp"

namespace onebit {

namespace {

// Above this the per-x sums 2^(m-1) n get impractical even without the output table.
constexpr std::size_t kMaxInputBits = 30;
// Recompute the receiver projections from scratch this often during the Gray walk.
constexpr std::size_t kResyncPeriod = 256;

std::string dims(std::size_t m, std::size_t n) {
  return "m = " + std::to_string(m) + ", n = " + std::to_string(n);
}

void require_rho(double rho) {
  if (!std::isfinite(rho) || rho < 0.0) throw std::domain_error("rho must be finite and >= 0");
}

// Walks the 2^(m-1) inputs with x_0 = +1 in Gray-code order, keeping
// s_k = sqrt(rho/m) h_k . x current. visit(s) sees each input exactly once.
// Inputs with x_0 = -1 are the negations of those visited.
template <class Visit>
void walk_half_inputs(const ChannelMatrix& h, double rho, Visit&& visit) {
  const std::size_t n = h.rows();
  const std::size_t m = h.cols();
  const double scale = std::sqrt(rho / static_cast<double>(m));
  std::vector<double> x(m, 1.0);
  std::vector<double> s(n);
  auto resync = [&] {
    for (std::size_t k = 0; k < n; ++k) {
      double acc = 0.0;
      for (std::size_t j = 0; j < m; ++j) acc += h(k, j) * x[j];
      s[k] = scale * acc;
    }
  };
  resync();
  visit(std::as_const(s));
  const std::size_t count = std::size_t{1} << (m - 1);
  for (std::size_t t = 1; t < count; ++t) {
    const std::size_t j = static_cast<std::size_t>(std::countr_zero(t)) + 1;
    x[j] = -x[j];
    if (t % kResyncPeriod == 0) {
      resync();
    } else {
      const double delta = 2.0 * scale * x[j];
      for (std::size_t k = 0; k < n; ++k) s[k] += delta * h(k, j);
    }
    visit(std::as_const(s));
  }
}

void check_channel(const ChannelMatrix& h) {
  if (h.rows() == 0 || h.cols() == 0) throw std::invalid_argument("channel matrix must be non-empty");
  if (h.cols() > kMaxInputBits)
    throw FeasibilityError("input enumeration infeasible for " + dims(h.cols(), h.rows()));
}

}  // namespace

FiniteSystem::FiniteSystem(std::size_t m, std::size_t n, double rho) : m_(m), n_(n), rho_(rho) {
  if (m == 0 || n == 0) throw std::domain_error("FiniteSystem: m and n must be >= 1");
  require_rho(rho);
}

ChannelMatrix::ChannelMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw std::invalid_argument("ChannelMatrix: data size mismatch");
}

ChannelRng::ChannelRng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double ChannelRng::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double ChannelRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double theta = 2.0 * kPi * uniform();
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

ChannelMatrix sample_channel(std::size_t m, std::size_t n, ChannelRng& rng) {
  if (m == 0 || n == 0) throw std::domain_error("sample_channel: m and n must be >= 1");
  ChannelMatrix h(n, m);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < m; ++j) h(k, j) = rng.normal();
  return h;
}

double cond_entropy_given_input(double rho, std::size_t n, const NormalIntegrator& integ) {
  require_rho(rho);
  return static_cast<double>(n) * (1.0 - single_transceiver_capacity(rho, integ));
}

std::vector<double> output_distribution(const ChannelMatrix& channel, double rho) {
  require_rho(rho);
  check_channel(channel);
  const std::size_t n = channel.rows();
  const std::size_t m = channel.cols();
  if (n > kMaxTableReceivers || m + n > kMaxEnumerationSize)
    throw FeasibilityError("output table infeasible for " + dims(m, n) +
                           "; use the output-sampling path");
  const std::size_t size = std::size_t{1} << n;
  if (rho == 0.0) return std::vector<double>(size, 1.0 / static_cast<double>(size));

  std::vector<double> acc(size, 0.0);
  std::vector<double> prod(size);
  std::vector<double> minus(n), plus(n);
  walk_half_inputs(channel, rho, [&](const std::vector<double>& s) {
    for (std::size_t k = 0; k < n; ++k) {
      minus[k] = q_function(s[k]);
      plus[k] = q_function(-s[k]);
    }
    // doubling: after step k, prod holds p(y_0..y_k | x) for every prefix
    prod[0] = 1.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const std::size_t half = std::size_t{1} << k;
      for (std::size_t i = 0; i < half; ++i) {
        prod[i | half] = prod[i] * minus[k];
        prod[i] *= plus[k];
      }
    }
    const std::size_t half = size >> 1;
    for (std::size_t i = 0; i < half; ++i) {
      acc[i] += prod[i] * plus[n - 1];
      acc[i | half] += prod[i] * minus[n - 1];
    }
  });

  // p(y | -x) = p(-y | x), so the x_0 = -1 half is the mirrored table.
  const double norm = std::ldexp(1.0, -static_cast<int>(m));
  const std::size_t mask = size - 1;
  std::vector<double> p(size);
  for (std::size_t y = 0; y < size; ++y) p[y] = norm * (acc[y] + acc[~y & mask]);
  return p;
}

double output_entropy(const ChannelMatrix& channel, double rho) {
  const auto p = output_distribution(channel, rho);
  CompensatedSum h;
  for (double v : p)
    if (v > 0.0) h.add(-v * std::log2(v));
  return h.value();
}

SampledEntropy sampled_output_entropy(const ChannelMatrix& channel, double rho,
                                      std::size_t samples, ChannelRng& rng) {
  require_rho(rho);
  check_channel(channel);
  const std::size_t n = channel.rows();
  const std::size_t m = channel.cols();
  if (m > kMaxSampledTransmitters)
    throw FeasibilityError("output sampling infeasible for " + dims(m, n));
  if (samples < 2) throw std::invalid_argument("sampled_output_entropy: need >= 2 samples");
  if (rho == 0.0) return {static_cast<double>(n), 0.0};

  const double scale = std::sqrt(rho / static_cast<double>(m));
  std::vector<double> x(m), y(n);
  std::vector<double> terms;  // ln p(y | x) over the half walk, both signs of x
  terms.reserve(std::size_t{1} << m);
  std::vector<double> values(samples);
  for (std::size_t t = 0; t < samples; ++t) {
    for (auto& xi : x) xi = rng.uniform() < 0.5 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      double acc = 0.0;
      for (std::size_t j = 0; j < m; ++j) acc += channel(k, j) * x[j];
      y[k] = scale * acc + rng.normal() >= 0.0 ? 1.0 : -1.0;
    }
    terms.clear();
    walk_half_inputs(channel, rho, [&](const std::vector<double>& s) {
      double pos = 0.0;
      double neg = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        pos += log_q_function(-y[k] * s[k]);
        neg += log_q_function(y[k] * s[k]);
      }
      terms.push_back(pos);
      terms.push_back(neg);
    });
    const double peak = *std::max_element(terms.begin(), terms.end());
    CompensatedSum sum;
    for (double v : terms) sum.add(std::exp(v - peak));
    const double ln_p = peak + std::log(sum.value()) - static_cast<double>(m) * kLn2;
    values[t] = -ln_p / kLn2;
  }
  CompensatedSum total;
  for (double v : values) total.add(v);
  const double mean = total.value() / static_cast<double>(samples);
  CompensatedSum sq;
  for (double v : values) sq.add((v - mean) * (v - mean));
  const double var = sq.value() / static_cast<double>(samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(samples))};
}

double channel_cond_entropy(const ChannelMatrix& channel, double rho) {
  require_rho(rho);
  check_channel(channel);
  const std::size_t n = channel.rows();
  const std::size_t m = channel.cols();
  if (rho == 0.0) return static_cast<double>(n);
  // H2(Q(s)) is even in s, so the x_0 = -1 half contributes identically.
  CompensatedSum sum;
  walk_half_inputs(channel, rho, [&](const std::vector<double>& s) {
    for (std::size_t k = 0; k < n; ++k) sum.add(binary_entropy_of_q(s[k]));
  });
  return std::ldexp(sum.value(), -static_cast<int>(m - 1));
}

std::string_view to_string(EntropyMethod m) {
  return m == EntropyMethod::EnumerateOutputs ? "enumerate-outputs" : "sample-outputs";
}

std::string_view to_string(ConditionalEntropy c) {
  return c == ConditionalEntropy::ClosedForm ? "closed-form" : "per-channel";
}

ExactCapacityEstimate exact_capacity(const FiniteSystem& system, std::size_t num_channels,
                                     std::uint64_t seed, const ExactOptions& opts,
                                     const NormalIntegrator& integ) {
  if (num_channels < 2) throw std::invalid_argument("exact_capacity: num_channels must be >= 2");
  const std::size_t m = system.m();
  const std::size_t n = system.n();
  const double rho = system.rho();

  ExactCapacityEstimate est;
  est.num_channels = num_channels;
  est.seed = seed;
  est.conditional = opts.conditional;
  if (system.enumerable()) {
    est.method = EntropyMethod::EnumerateOutputs;
  } else if (m <= kMaxSampledTransmitters) {
    est.method = EntropyMethod::SampleOutputs;
  } else {
    throw FeasibilityError("exact_capacity: no evaluation path for " + dims(m, n));
  }

  const double closed_form = cond_entropy_given_input(rho, n, integ);
  est.per_channel.resize(num_channels);
  est.output_entropies.resize(num_channels);
  est.cond_entropies.resize(num_channels);

  // Output tables cost 16 bytes per entry per worker; keep the total near 2 GiB.
  unsigned threads = opts.threads;
  if (est.method == EntropyMethod::EnumerateOutputs) {
    const std::size_t bytes = (std::size_t{16}) << n;
    const auto cap = static_cast<unsigned>(std::max<std::size_t>(1, (std::size_t{1} << 31) / bytes));
    threads = std::min(detail::resolve_threads(threads, num_channels), cap);
  }

  detail::parallel_for(num_channels, threads, [&](std::size_t i) {
    ChannelRng rng(seed, i);
    const ChannelMatrix h = sample_channel(m, n, rng);
    const double hy = est.method == EntropyMethod::EnumerateOutputs
                          ? output_entropy(h, rho)
                          : sampled_output_entropy(h, rho, opts.output_samples, rng).value;
    const double hc = opts.conditional == ConditionalEntropy::ClosedForm
                          ? closed_form
                          : channel_cond_entropy(h, rho);
    est.output_entropies[i] = hy;
    est.cond_entropies[i] = hc;
    est.per_channel[i] = (hy - hc) / static_cast<double>(m);
  });

  CompensatedSum total;
  for (double v : est.per_channel) total.add(v);
  est.mean = total.value() / static_cast<double>(num_channels);
  CompensatedSum sq;
  for (double v : est.per_channel) sq.add((v - est.mean) * (v - est.mean));
  est.std_err = std::sqrt(sq.value() / static_cast<double>(num_channels - 1) /
                          static_cast<double>(num_channels));
  return est;
}

}  // namespace onebit
