#include "suppest/distributions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "suppest/errors.hpp"

namespace suppest {

namespace {

constexpr std::uint64_t kMaxSupport = std::uint64_t{1} << 32;

double raw_weight(const DistributionSpec& d, std::uint64_t i) {
  const auto x = static_cast<double>(i);
  switch (d.kind) {
    case DistKind::Uniform: return 1.0;
    case DistKind::Zipf: return std::pow(x, -d.alpha);
    case DistKind::Benford: return std::log1p(1.0 / x);
  }
  return 1.0;
}

std::mt19937_64 make_engine(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

std::vector<double> DistributionSpec::probabilities() const {
  std::vector<double> p(support);
  for (std::uint64_t i = 0; i < support; ++i) p[i] = raw_weight(*this, i + 1);
  // Smallest terms first keeps the normalizer accurate.
  double total = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) total += *it;
  for (double& v : p) v /= total;
  return p;
}

double DistributionSpec::min_mass() const {
  if (kind == DistKind::Uniform) return 1.0 / static_cast<double>(support);
  return probabilities().back();
}

std::uint64_t DistributionSpec::k() const {
  const double inv = 1.0 / min_mass();
  return static_cast<std::uint64_t>(std::ceil(inv * (1.0 - 1e-12)));
}

std::string DistributionSpec::name() const {
  switch (kind) {
    case DistKind::Uniform: return "uniform";
    case DistKind::Zipf: return fmt::format("zipf({:g})", alpha);
    case DistKind::Benford: return "benford";
  }
  return "unknown";
}

DistributionSpec make_distribution(DistKind kind, double target, double alpha) {
  if (!(target > 0.0) || !(target < 1.0))
    throw DomainError("min mass must lie in (0, 1), got " + fmt::format("{}", target));
  DistributionSpec d;
  d.kind = kind;
  d.alpha = alpha;
  if (kind == DistKind::Uniform) {
    const double s = std::round(1.0 / target);
    if (s >= static_cast<double>(kMaxSupport)) throw DomainError("min mass too small");
    d.support = static_cast<std::uint64_t>(s);
    return d;
  }
  if (kind == DistKind::Zipf && !(alpha > 0.0 && std::isfinite(alpha)))
    throw DomainError("zipf exponent must be positive");

  // p_S = w_S / sum_{i<=S} w_i decreases in S; scan for the first S at or
  // below the target.
  double total = 0.0;
  for (std::uint64_t s = 1; s < kMaxSupport; ++s) {
    d.support = s;
    const double w = raw_weight(d, s);
    total += w;
    if (w / total <= target) return d;
  }
  throw DomainError("min mass target needs more than 2^32 symbols");
}

DistributionSpec make_distribution(std::string_view name, double target) {
  if (name == "uniform") return make_distribution(DistKind::Uniform, target);
  if (name == "benford") return make_distribution(DistKind::Benford, target);
  if (name.substr(0, 5) == "zipf:") {
    const auto text = name.substr(5);
    double alpha = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), alpha);
    if (ec != std::errc() || ptr != text.data() + text.size())
      throw InputError("bad zipf exponent in '" + std::string(name) + "'");
    return make_distribution(DistKind::Zipf, target, alpha);
  }
  throw InputError("unknown distribution '" + std::string(name) +
                   "' (expected uniform, benford or zipf:<alpha>)");
}

std::vector<DistributionSpec> standard_suite(double target) {
  return {make_distribution(DistKind::Uniform, target),
          make_distribution(DistKind::Zipf, target, 1.5),
          make_distribution(DistKind::Zipf, target, 1.0),
          make_distribution(DistKind::Zipf, target, 0.5),
          make_distribution(DistKind::Zipf, target, 0.25),
          make_distribution(DistKind::Benford, target)};
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(master),
                                   static_cast<std::uint32_t>(master >> 32)};
  for (std::uint64_t p : path) {
    words.push_back(static_cast<std::uint32_t>(p));
    words.push_back(static_cast<std::uint32_t>(p >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

Sampler::Sampler(const DistributionSpec& dist) {
  if (dist.support == 0) throw DomainError("distribution has empty support");
  const std::vector<double> p = dist.probabilities();
  cdf_.resize(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    cdf_[i] = acc;
  }
  cdf_.back() = 1.0;
}

std::vector<std::uint64_t> Sampler::counts(std::uint64_t n, std::uint64_t seed) const {
  std::vector<std::uint64_t> out(cdf_.size(), 0);
  auto engine = make_engine(seed);
  for (std::uint64_t draw = 0; draw < n; ++draw) {
    // 53 random bits -> uniform double in [0, 1).
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()),
                                           cdf_.size() - 1);
    ++out[idx];
  }
  return out;
}

Histogram sample(const DistributionSpec& dist, std::uint64_t n, std::uint64_t seed) {
  Histogram hist;
  if (n == 0) return hist;
  const auto c = Sampler(dist).counts(n, seed);
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] > 0) hist.add(std::to_string(i + 1), c[i]);
  return hist;
}

}  // namespace suppest
