#include "mc_rem_kernel.hpp"

namespace mcrem {

EstimatorBundle mc_rem_serial(const Domain& dom, const ConductivityTensor& k,
                              const MeasurementSet& meas,
                              const WeightFamily& fam1, const WeightFamily* fam0,
                              std::span<const double> sigma1,
                              const WalkConfig& cfg, std::uint64_t n) {
  detail::McRemContext const ctx =
      detail::make_context(dom, k, meas, fam1, fam0, sigma1, cfg, n);
  detail::Tally tally(meas.num_interior(), ctx.width());
  for (std::size_t pole = 0; pole < meas.num_interior(); ++pole) {
    detail::walk_block(ctx, pole, 0, n, tally);
  }
  return detail::finalize(ctx, tally, sigma1);
}

}  // namespace mcrem
