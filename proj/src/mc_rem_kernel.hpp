#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mcrem/estimator.hpp"

namespace mcrem::detail {

/// Shared read-only state for assembling one bundle.
struct McRemContext {
  const Domain& dom;
  const ConductivityTensor& k;
  const MeasurementSet& meas;
  const WeightFamily& fam1;
  const WeightFamily* fam0;
  WalkConfig cfg;
  std::uint64_t n;
  std::size_t m1;
  std::size_t m0;

  /// Units row width: M_1 then M_0 columns.
  std::size_t width() const noexcept { return m1 + m0; }
};

/// Integer tallies for a set of poles, indexed [pole * width + cell].
struct Tally {
  std::vector<std::uint64_t> units;
  std::vector<std::uint64_t> steps_total;
  std::vector<std::uint64_t> steps_max;
  std::uint64_t fallbacks = 0;

  Tally(std::size_t poles, std::size_t width)
      : units(poles * width, 0), steps_total(poles, 0), steps_max(poles, 0) {}

  void merge(const Tally& other);
};

McRemContext make_context(const Domain& dom, const ConductivityTensor& k,
                          const MeasurementSet& meas, const WeightFamily& fam1,
                          const WeightFamily* fam0,
                          std::span<const double> sigma1, const WalkConfig& cfg,
                          std::uint64_t n);

/// Runs replicates [begin, end) from one pole into the tally.
void walk_block(const McRemContext& ctx, std::size_t pole, std::uint64_t begin,
                std::uint64_t end, Tally& tally);

EstimatorBundle finalize(const McRemContext& ctx, const Tally& tally,
                         std::span<const double> sigma1);

}  // namespace mcrem::detail
