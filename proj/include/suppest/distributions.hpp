#pragma once

// Synthetic ground-truth distributions and a reproducible multinomial
// sampler.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "suppest/histogram.hpp"

namespace suppest {

// Pinned in every report; changing the generator or the seeding scheme must
// bump it.
inline constexpr std::string_view kPrngName = "mt19937_64/seed_seq/v1";

enum class DistKind { Uniform, Zipf, Benford };

struct DistributionSpec {
  DistKind kind = DistKind::Uniform;
  double alpha = 1.0;  // Zipf exponent
  std::uint64_t support = 1;

  // p_1..p_S, normalized. Zipf: p_i ~ i^-alpha; Benford: p_i ~ ln(1 + 1/i).
  std::vector<double> probabilities() const;
  double min_mass() const;
  // ceil(1 / min_mass), the smallest k whose class contains this distribution.
  std::uint64_t k() const;
  // "uniform", "zipf(1.5)", "benford"
  std::string name() const;
};

// Uniform: S = round(1 / target). Zipf and Benford: the smallest S whose
// minimum mass p_S is <= target. Throws DomainError unless 0 < target < 1,
// alpha > 0, and the search stays below 2^32 symbols.
DistributionSpec make_distribution(DistKind kind, double target_min_mass, double alpha = 1.0);

// Parses "uniform", "benford" or "zipf:<alpha>". Throws InputError.
DistributionSpec make_distribution(std::string_view name, double target_min_mass);

// Uniform, Zipf with alpha 1.5, 1, 0.5, 0.25, and Benford.
std::vector<DistributionSpec> standard_suite(double target_min_mass);

// Child seed for a path of indices below a master seed. Distinct paths give
// unrelated streams, independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

// Inverse-CDF sampling over precomputed cumulative weights; reusable across
// many draws from the same distribution.
class Sampler {
 public:
  explicit Sampler(const DistributionSpec& dist);

  // Per-symbol counts (length S) of n draws.
  std::vector<std::uint64_t> counts(std::uint64_t n, std::uint64_t seed) const;
  std::uint64_t support() const noexcept { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

// n i.i.d. draws; symbols are named by their 1-based index. Identical
// (dist, n, seed) give identical histograms.
Histogram sample(const DistributionSpec& dist, std::uint64_t n, std::uint64_t seed);

}  // namespace suppest
