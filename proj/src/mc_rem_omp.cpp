#include <algorithm>
#include <exception>
#include <limits>
#include <utility>

#include "mc_rem_kernel.hpp"
#include "mcrem/error.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mcrem {

EstimatorBundle mc_rem(const Domain& dom, const ConductivityTensor& k,
                       const MeasurementSet& meas, const WeightFamily& fam1,
                       const WeightFamily* fam0, std::span<const double> sigma1,
                       const WalkConfig& cfg, std::uint64_t n,
                       McRemOptions opts) {
  detail::McRemContext const ctx =
      detail::make_context(dom, k, meas, fam1, fam0, sigma1, cfg, n);
  std::size_t const poles = meas.num_interior();
  std::uint64_t const block = opts.block ? opts.block : 4096;
  std::uint64_t const blocks_per_pole = (n + block - 1) / block;
  auto const tasks = static_cast<long long>(poles * blocks_per_pole);

  detail::Tally total(poles, ctx.width());
  // Failure with the smallest (pole, replicate) wins so the reported error
  // does not depend on scheduling.
  std::pair<std::size_t, std::uint64_t> fail_at{
      std::numeric_limits<std::size_t>::max(), 0};
  std::exception_ptr failure;

#ifdef _OPENMP
  int const threads = opts.threads > 0 ? opts.threads : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
#endif
  {
    detail::Tally local(poles, ctx.width());
#ifdef _OPENMP
#pragma omp for schedule(dynamic, 1)
#endif
    for (long long t = 0; t < tasks; ++t) {
      auto const pole = static_cast<std::size_t>(t) / blocks_per_pole;
      std::uint64_t const begin = (static_cast<std::uint64_t>(t) % blocks_per_pole) * block;
      std::uint64_t const end = std::min(n, begin + block);
      try {
        detail::walk_block(ctx, pole, begin, end, local);
      } catch (const WalkBudgetError& e) {
#ifdef _OPENMP
#pragma omp critical(mcrem_failure)
#endif
        {
          std::pair<std::size_t, std::uint64_t> const at{e.pole(), e.replicate()};
          if (at < fail_at) {
            fail_at = at;
            failure = std::current_exception();
          }
        }
      } catch (...) {
#ifdef _OPENMP
#pragma omp critical(mcrem_failure)
#endif
        {
          std::pair<std::size_t, std::uint64_t> const at{pole, begin};
          if (at < fail_at) {
            fail_at = at;
            failure = std::current_exception();
          }
        }
      }
    }
#ifdef _OPENMP
#pragma omp critical(mcrem_merge)
#endif
    total.merge(local);
  }
  if (failure) std::rethrow_exception(failure);
  return detail::finalize(ctx, total, sigma1);
}

}  // namespace mcrem
