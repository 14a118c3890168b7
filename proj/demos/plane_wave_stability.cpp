// Plane waves on the circle: verdict map over (λ, α), the unstable band, and one
// perturbed run on each side of the threshold.

#include <cmath>
#include <cstdio>
#include <numbers>

#include "emstab/harness/experiment.hpp"
#include "emstab/torus/model.hpp"

using namespace emstab;

int main() {
  const double L = 2.0 * std::numbers::pi;
  const PeriodicGrid grid(128, L);

  std::printf("verdicts for beta = 1, L = 2pi (s = stable, u = unstable, m = marginal)\n       ");
  for (double alpha = 0.2; alpha <= 1.41; alpha += 0.2) std::printf("%5.1f", alpha);
  std::printf("\n");
  for (double lambda : {-1.0, -0.5, 0.5, 1.0, 2.0}) {
    std::printf("%6.2f ", lambda);
    const torus::TorusNlsModel m(1.0, lambda, grid);
    for (double alpha = 0.2; alpha <= 1.41; alpha += 0.2) {
      const auto v = torus::stability_verdict(m, alpha);
      std::printf("%5c", v == torus::Verdict::stable ? 's' : v == torus::Verdict::unstable ? 'u' : 'm');
    }
    std::printf("\n");
  }

  const torus::TorusNlsModel focusing(1.0, 1.0, grid);
  std::printf("\ngrowth rates, lambda = 1, alpha = 1.2\n");
  for (const auto& e : torus::linearization_growth_rates(focusing, 1.2, 4).modes)
    std::printf("  n = %d  rate = %.6f\n", e.n, e.lin_plus.real());

  for (double alpha : {0.6, 1.2}) {
    harness::StabilityExperiment e;
    e.system = harness::TorusSystem{focusing, alpha, 0.0, 1, 1};
    e.deltas = {1e-5};
    e.T = 15.0;
    e.seed = 1;
    const auto r = harness::run_stability_experiment(e).results.front();
    std::printf("\nalpha = %.1f (%s): sup d / delta = %.3g", alpha,
                torus::to_string(torus::stability_verdict(focusing, alpha)).c_str(), r.ratio);
    if (std::isfinite(r.exceed_time)) std::printf(", left 100*delta at t = %.2f", r.exceed_time);
    std::printf("\n");
  }
}
