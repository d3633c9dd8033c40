// SPDX-License-Identifier: Apache-2.0

#include "chaintrick/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <ostream>
#include <sstream>
#include <thread>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "chaintrick/errors.hpp"

namespace chaintrick {

std::vector<double> Axis::values() const {
  std::vector<double> v(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    v[static_cast<std::size_t>(i)] =
        count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (count - 1);
  }
  if (count > 1) v.back() = hi;
  return v;
}

void Axis::validate(const MacroParams& base, const InvestmentParams& inv) const {
  if (count < 1) throw Error(ErrorCode::InvalidParameter, "axis needs at least one point");
  if (!(std::isfinite(lo) && std::isfinite(hi)) || hi < lo) {
    throw Error(ErrorCode::InvalidParameter, "axis bounds must be finite with lo <= hi");
  }
  switch (parameter) {
    case BifurcationParameter::alpha:
      if (!(lo > 0.0)) throw Error(ErrorCode::InvalidParameter, "alpha axis must be > 0");
      break;
    case BifurcationParameter::T:
      if (!(lo > 0.0)) throw Error(ErrorCode::DelayNonPositive, "T axis must be > 0");
      break;
    case BifurcationParameter::g: {
      const auto [g_min, g_max] = admissible_growth(inv, base.delta);
      if (hi < g_min || lo > g_max) {
        std::ostringstream msg;
        msg.precision(10);
        msg << "g axis [" << lo << ", " << hi << "] lies outside (" << g_min << ", " << g_max
            << ")";
        throw Error(ErrorCode::GrowthOutOfRange, msg.str());
      }
      break;
    }
  }
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CHAINTRICK_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned threads) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(n, 1)));
  std::vector<std::exception_ptr> errors(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto run = [&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

CurveFit fit_least_squares(const std::vector<double>& x, const std::vector<double>& y,
                           const std::vector<std::function<double(double)>>& basis,
                           std::string model) {
  if (x.size() != y.size()) throw Error(ErrorCode::InvalidParameter, "fit size mismatch");
  if (x.size() < basis.size()) {
    throw Error(ErrorCode::InvalidParameter, "fewer points than fit coefficients");
  }
  const auto rows = static_cast<Eigen::Index>(x.size());
  const auto cols = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd X(rows, cols);
  Eigen::VectorXd Y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      X(i, j) = basis[static_cast<std::size_t>(j)](x[static_cast<std::size_t>(i)]);
    }
    Y(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(Y);
  CurveFit fit;
  fit.model = std::move(model);
  fit.coefficients.assign(beta.data(), beta.data() + beta.size());
  fit.residual_norm = (X * beta - Y).norm();
  fit.relative_residual = fit.residual_norm / Y.norm();
  fit.points_used = x.size();
  return fit;
}

namespace {

std::vector<CurvePoint> evaluate_curve(const MacroParams& base, const InvestmentParams& inv,
                                       const std::vector<double>& values,
                                       BifurcationParameter which,
                                       const SweepOptions& options) {
  std::vector<CurvePoint> points(values.size());
  parallel_for(
      values.size(),
      [&](std::size_t i) {
        points[i].parameter = values[i];
        points[i].T_bi = critical_delay(with_parameter(base, which, values[i]), inv);
      },
      options.threads);
  return points;
}

void split(const std::vector<CurvePoint>& points, std::vector<double>& x,
           std::vector<double>& y) {
  for (const auto& p : points) {
    if (p.T_bi) {
      x.push_back(p.parameter);
      y.push_back(*p.T_bi);
    }
  }
}

std::string fmt17(double v) { return fmt::format("{:.17g}", v); }

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt17(*v) : "NA"; }

}  // namespace

BifurcationCurve curve_T_vs_alpha(const MacroParams& base, const InvestmentParams& inv,
                                  const Axis& alpha, const SweepOptions& options) {
  if (alpha.parameter != BifurcationParameter::alpha) {
    throw Error(ErrorCode::InvalidParameter, "curve_T_vs_alpha needs an alpha axis");
  }
  base.validate();
  inv.validate();
  alpha.validate(base, inv);

  BifurcationCurve curve;
  curve.axis = alpha;
  curve.fixed = base;
  curve.points = evaluate_curve(base, inv, alpha.values(), BifurcationParameter::alpha, options);

  std::vector<double> x, y;
  split(curve.points, x, y);
  if (x.size() >= 2) {
    curve.fit = fit_least_squares(
        x, y, {[](double) { return 1.0; }, [](double a) { return 1.0 / a; }}, "c0 + c1/alpha");
    const double c0 = curve.fit->coefficients[0];
    const double c1 = curve.fit->coefficients[1];
    if (c0 != 0.0 && -c1 / c0 > 0.0) curve.zero_crossing = -c1 / c0;
  }
  return curve;
}

BifurcationCurve curve_T_vs_g(const MacroParams& base, const InvestmentParams& inv,
                              const Axis& g, const SweepOptions& options) {
  if (g.parameter != BifurcationParameter::g) {
    throw Error(ErrorCode::InvalidParameter, "curve_T_vs_g needs a g axis");
  }
  inv.validate();
  g.validate(base, inv);

  const auto [g_min, g_max] = admissible_growth(inv, base.delta);
  std::vector<double> values;
  for (double v : g.values()) {
    if (v > g_min && v < g_max) values.push_back(v);
  }

  BifurcationCurve curve;
  curve.axis = g;
  curve.fixed = base;
  curve.points = evaluate_curve(base, inv, values, BifurcationParameter::g, options);

  std::vector<double> x, y;
  split(curve.points, x, y);
  if (x.size() >= 3) {
    curve.fit = fit_least_squares(x, y,
                                  {[](double) { return 1.0; }, [](double v) { return v; },
                                   [](double v) { return v * v; }},
                                  "a0 + a1*g + a2*g^2");
  }
  return curve;
}

BifurcationSurface surface_T(const MacroParams& base, const InvestmentParams& inv,
                             const Axis& alpha, const Axis& g, const SweepOptions& options) {
  if (alpha.parameter != BifurcationParameter::alpha || g.parameter != BifurcationParameter::g) {
    throw Error(ErrorCode::InvalidParameter, "surface_T needs an alpha axis and a g axis");
  }
  if (alpha.count < 16 || g.count < 16) {
    throw Error(ErrorCode::InvalidParameter, "surface axes need at least 16 points each");
  }
  inv.validate();
  alpha.validate(base, inv);
  g.validate(base, inv);

  BifurcationSurface surface;
  surface.alpha = alpha;
  surface.g = g;
  surface.fixed = base;
  const auto av = alpha.values();
  const auto gv = g.values();
  const auto [g_min, g_max] = admissible_growth(inv, base.delta);
  surface.T_bi.resize(av.size() * gv.size());
  parallel_for(
      surface.T_bi.size(),
      [&](std::size_t idx) {
        const double a = av[idx / gv.size()];
        const double gg = gv[idx % gv.size()];
        if (!(gg > g_min && gg < g_max)) return;
        MacroParams p = base;
        p.alpha = a;
        p.g = gg;
        surface.T_bi[idx] = critical_delay(p, inv);
      },
      options.threads);
  return surface;
}

std::vector<GBifurcationRow> table_g_bifurcations(const std::vector<int>& orders,
                                                  const MacroParams& base,
                                                  const InvestmentParams& inv,
                                                  const SweepOptions& options) {
  for (int m : orders) {
    if (m < 1) throw Error(ErrorCode::KernelOrderInvalid, "kernel order must be >= 1");
  }
  std::vector<GBifurcationRow> rows(orders.size());
  parallel_for(
      orders.size(),
      [&](std::size_t i) {
        ScanOptions scan;
        scan.tolerance = 1e-11;
        const auto report = hopf_in_g(base, inv, orders[i], scan);
        auto points = report.hopf_points();
        if (points.size() < 2) {
          throw Error(ErrorCode::NoHopf,
                      fmt::format("expected two Hopf points in g for m = {}, found {}",
                                  orders[i], points.size()));
        }
        std::sort(points.begin(), points.end(),
                  [](const HopfPoint& a, const HopfPoint& b) { return a.value < b.value; });
        rows[i] = {orders[i], points[0].value, points[1].value};
      },
      options.threads);
  return rows;
}

void write_curve_csv(std::ostream& os, const BifurcationCurve& curve) {
  os << to_string(curve.axis.parameter) << ",T_bi\n";
  for (const auto& p : curve.points) os << fmt17(p.parameter) << ',' << fmt_opt(p.T_bi) << '\n';
}

void write_surface_csv(std::ostream& os, const BifurcationSurface& surface) {
  os << "alpha,g,T_bi\n";
  const auto av = surface.alpha.values();
  const auto gv = surface.g.values();
  for (std::size_t i = 0; i < av.size(); ++i) {
    for (std::size_t j = 0; j < gv.size(); ++j) {
      os << fmt17(av[i]) << ',' << fmt17(gv[j]) << ','
         << fmt_opt(surface.T_bi[i * gv.size() + j]) << '\n';
    }
  }
}

void write_table_csv(std::ostream& os, const std::vector<GBifurcationRow>& rows) {
  os << "m,g_bi1,g_bi2\n";
  for (const auto& r : rows) os << r.m << ',' << fmt17(r.g_bi1) << ',' << fmt17(r.g_bi2) << '\n';
}

}  // namespace chaintrick
