#include "bvi/diagnostics.hpp"
#include "bvi/errors.hpp"
#include "bvi/solvers.hpp"

namespace bvi {

SaddleResult solve_saddle(const SaddleProblem& sp, const BregmanDivergence& div,
                          const std::variant<MirrorDescentConfig, RestartConfig>& method,
                          OperatorConstants constants, std::size_t gap_samples, std::uint64_t seed) {
  auto [g, q] = saddle_operator(sp, constants);
  if (div.dimension() != q.dimension()) {
    throw InvalidArgument("solve_saddle: divergence must live on the product space");
  }

  SaddleResult out;
  if (const auto* md = std::get_if<MirrorDescentConfig>(&method)) {
    out.report = mirror_descent_vi(g, div, q, *md);
    const std::optional<double> M = md->M ? md->M : (constants.M ? constants.M : out.report.max_dual_norm);
    if (M) out.gap_bound = 2.0 * *M * *M / (md->mu * static_cast<double>(md->iterations + 1));
  } else {
    out.report = restarted_apm(g, div, q, std::get<RestartConfig>(method)).second;
  }
  auto [u, v] = split_saddle_point(sp, out.report.output);
  out.u_hat = std::move(u);
  out.v_hat = std::move(v);
  if (sp.value && gap_samples > 0) out.gap_estimate = saddle_gap(sp, out.u_hat, out.v_hat, gap_samples, seed).value;
  return out;
}

}  // namespace bvi
