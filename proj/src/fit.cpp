#include "rydqsl/observables.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace rydqsl {

double CorrelationFit::operator()(double r_over_a) const {
  return A * std::exp(-r_over_a / xi_over_a) * std::cos(kappa_a * r_over_a + phi) + B;
}

namespace {

struct LinearPart {
  double c = 0.0, d = 0.0, b = 0.0;
  double rms = std::numeric_limits<double>::infinity();
};

// For fixed (ξ, κ) the model e^{−r/ξ}(c cos κr + d sin κr) + b is linear in (c, d, b).
class VarProFit {
 public:
  VarProFit(Eigen::VectorXd r, Eigen::VectorXd y) : r_(std::move(r)), y_(std::move(y)), design_(r_.size(), 3) {}

  LinearPart solve(double log_xi, double kappa) {
    LinearPart out;
    if (!std::isfinite(log_xi) || !std::isfinite(kappa) || std::abs(log_xi) > 30.0) return out;
    const double xi = std::exp(log_xi);
    for (Eigen::Index k = 0; k < r_.size(); ++k) {
      const double env = std::exp(-r_[k] / xi);
      design_(k, 0) = env * std::cos(kappa * r_[k]);
      design_(k, 1) = env * std::sin(kappa * r_[k]);
      design_(k, 2) = 1.0;
    }
    const Eigen::Vector3d coef = design_.completeOrthogonalDecomposition().solve(y_);
    out.c = coef[0];
    out.d = coef[1];
    out.b = coef[2];
    out.rms = std::sqrt((design_ * coef - y_).squaredNorm() / static_cast<double>(r_.size()));
    return out;
  }

 private:
  Eigen::VectorXd r_, y_;
  Eigen::MatrixXd design_;
};

// Nelder–Mead on two parameters; returns the best vertex.
template <class F>
std::pair<Eigen::Vector2d, double> nelder_mead(F&& f, Eigen::Vector2d x0, Eigen::Vector2d step, double rel_tol,
                                               int max_iter) {
  std::array<Eigen::Vector2d, 3> x{x0, x0 + Eigen::Vector2d(step[0], 0.0), x0 + Eigen::Vector2d(0.0, step[1])};
  std::array<double, 3> fx{f(x[0]), f(x[1]), f(x[2])};
  for (int it = 0; it < max_iter; ++it) {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int l, int r) { return fx[l] < fx[r]; });
    const int best = order[0], mid = order[1], worst = order[2];
    const double spread = std::abs(fx[worst] - fx[best]);
    const double size = std::max((x[worst] - x[best]).norm(), (x[mid] - x[best]).norm());
    if (spread <= rel_tol * (std::abs(fx[best]) + 1e-300) && size <= 1e-12 * (1.0 + x[best].norm())) break;
    if (spread == 0.0 && size < 1e-14) break;
    const Eigen::Vector2d centroid = 0.5 * (x[best] + x[mid]);
    const Eigen::Vector2d xr = centroid + (centroid - x[worst]);
    const double fr = f(xr);
    if (fr < fx[best]) {
      const Eigen::Vector2d xe = centroid + 2.0 * (centroid - x[worst]);
      const double fe = f(xe);
      if (fe < fr) {
        x[worst] = xe, fx[worst] = fe;
      } else {
        x[worst] = xr, fx[worst] = fr;
      }
    } else if (fr < fx[mid]) {
      x[worst] = xr, fx[worst] = fr;
    } else {
      const bool outside = fr < fx[worst];
      const Eigen::Vector2d xc = outside ? Eigen::Vector2d(centroid + 0.5 * (xr - centroid))
                                         : Eigen::Vector2d(centroid + 0.5 * (x[worst] - centroid));
      const double fc = f(xc);
      if (fc < std::min(fr, fx[worst])) {
        x[worst] = xc, fx[worst] = fc;
      } else {
        for (int v : {mid, worst}) {
          x[v] = x[best] + 0.5 * (x[v] - x[best]);
          fx[v] = f(x[v]);
        }
      }
    }
  }
  const auto k = static_cast<std::size_t>(std::min_element(fx.begin(), fx.end()) - fx.begin());
  return {x[k], fx[k]};
}

double wrap_phase(double phi) {
  const double two_pi = 2.0 * std::numbers::pi;
  phi = std::fmod(phi, two_pi);
  return phi < 0.0 ? phi + two_pi : phi;
}

}  // namespace

CorrelationFit fit_correlation_length(const CorrelationSeries& series, const FitOptions& options) {
  std::vector<double> rs, ys;
  for (const auto& e : series.entries) {
    if (e.r_um <= 0.0) continue;
    const double r = e.r_um / series.a_um;
    if (options.r_max_over_a && r > *options.r_max_over_a * (1.0 + 1e-9)) continue;
    rs.push_back(r);
    ys.push_back(e.g2);
  }
  if (rs.size() < 6) throw std::invalid_argument("correlation fit needs at least 6 entries with r > 0");
  if (options.kappa_seeds < 1 || options.xi_seeds < 1) throw std::invalid_argument("fit needs at least one seed");

  const Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(rs.data(), static_cast<Eigen::Index>(rs.size()));
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
  const double r_max = r.maxCoeff();

  CorrelationFit fit;
  if (y.cwiseAbs().maxCoeff() == 0.0) {
    fit.xi_over_a = std::numeric_limits<double>::infinity();
    fit.degenerate = true;
    return fit;
  }

  VarProFit vp(r, y);
  auto objective = [&](const Eigen::Vector2d& p) { return vp.solve(p[0], p[1]).rms; };

  // Multistart grid over κ ∈ [0, π] (per a) and log-spaced ξ ∈ [0.3, 30] a,
  // each seed jittered inside its cell.
  std::mt19937_64 rng(options.rng_seed);
  std::uniform_real_distribution<double> jitter(0.0, 1.0);
  const double log_lo = std::log(0.3), log_hi = std::log(30.0);
  std::vector<std::pair<double, Eigen::Vector2d>> seeds;
  for (int i = 0; i < options.kappa_seeds; ++i)
    for (int j = 0; j < options.xi_seeds; ++j) {
      const double kappa = std::numbers::pi * (i + jitter(rng)) / options.kappa_seeds;
      const double log_xi = log_lo + (log_hi - log_lo) * (j + jitter(rng)) / options.xi_seeds;
      const Eigen::Vector2d p(log_xi, kappa);
      seeds.emplace_back(objective(p), p);
    }
  std::sort(seeds.begin(), seeds.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  fit.seed_rms = seeds.front().first;

  Eigen::Vector2d best = seeds.front().second;
  double best_rms = seeds.front().first;
  const Eigen::Vector2d step((log_hi - log_lo) / options.xi_seeds, std::numbers::pi / options.kappa_seeds);
  for (const auto& [rms0, p0] : seeds) {
    auto [p, rms] = nelder_mead(objective, p0, step, options.rel_tol, 4000);
    // restart once from the optimum to shake off a collapsed simplex
    auto [p2, rms2] = nelder_mead(objective, p, 0.1 * step, options.rel_tol, 4000);
    if (rms2 < rms) p = p2, rms = rms2;
    if (rms < best_rms) best = p, best_rms = rms;
  }

  const LinearPart lin = vp.solve(best[0], best[1]);
  double kappa = best[1];
  double phi = std::atan2(-lin.d, lin.c);
  if (kappa < 0.0) kappa = -kappa, phi = -phi;
  fit.A = std::hypot(lin.c, lin.d);
  fit.xi_over_a = std::exp(best[0]);
  fit.kappa_a = kappa;
  fit.phi = wrap_phase(phi);
  fit.B = lin.b;
  fit.rms_residual = lin.rms;
  fit.degenerate = fit.xi_over_a > 100.0 * r_max || fit.A == 0.0;
  return fit;
}

}  // namespace rydqsl
