// SPDX-License-Identifier: Apache-2.0

#include "chaintrick/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "chaintrick/errors.hpp"

namespace chaintrick {

std::string_view to_string(CycleKind k) {
  switch (k) {
    case CycleKind::LimitCycle: return "limit_cycle";
    case CycleKind::Damped: return "damped";
    case CycleKind::Diverged: return "diverged";
  }
  return "?";
}

std::vector<double> Trajectory::y_series() const {
  std::vector<double> ys;
  ys.reserve(states.size());
  for (const auto& s : states) ys.push_back(s.y());
  return ys;
}

namespace {

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

using Vec = std::vector<double>;

ChainState to_state(int m, const Vec& v) {
  ChainState s(m);
  for (std::size_t i = 0; i < v.size(); ++i) s.values()(static_cast<Eigen::Index>(i)) = v[i];
  return s;
}

double error_norm(const Vec& err, const Vec& y0, const Vec& y1, const StepControl& ctl) {
  double acc = 0.0;
  for (std::size_t i = 0; i < err.size(); ++i) {
    const double sc = ctl.atol + ctl.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

}  // namespace

Trajectory integrate(const ChainSystem& sys, const ChainState& s0, double horizon,
                     const StepControl& control) {
  if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidParameter, "horizon must be > 0");
  if (!(control.sample_interval > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "sample interval must be > 0");
  }
  if (s0.m() != sys.m()) throw Error(ErrorCode::KernelOrderInvalid, "initial state order mismatch");
  if (!(s0.k() > 0.0)) throw Error(ErrorCode::CapitalNonPositive, "initial capital k <= 0");

  const std::size_t n = static_cast<std::size_t>(sys.dimension());
  const int m = sys.m();
  auto f = [&sys](const Vec& s, Vec& ds) { return sys.rhs_into(s, ds); };

  Trajectory traj;
  traj.params = sys.params();
  traj.investment = sys.investment();

  Vec y(s0.values().data(), s0.values().data() + n);
  Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n), err(n);
  std::array<Vec, 5> dense{Vec(n), Vec(n), Vec(n), Vec(n), Vec(n)};
  f(y, k1);

  const auto sample_count =
      static_cast<std::size_t>(std::floor(horizon / control.sample_interval + 1e-9));
  traj.times.reserve(sample_count + 2);
  traj.states.reserve(sample_count + 2);
  traj.times.push_back(0.0);
  traj.states.push_back(s0);
  std::size_t next_sample = 1;
  auto sample_time = [&](std::size_t i) {
    return std::min(horizon, static_cast<double>(i) * control.sample_interval);
  };
  const bool ends_on_grid =
      std::abs(sample_time(sample_count) - horizon) <= 1e-9 * control.sample_interval;
  const std::size_t last_sample = ends_on_grid ? sample_count : sample_count + 1;

  // Initial step from the scale of the derivative.
  double h;
  {
    double d0 = 0.0, d1n = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = control.atol + control.rtol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1n += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / n);
    d1n = std::sqrt(d1n / n);
    h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h = std::min({h, horizon, control.sample_interval});
  }

  double t = 0.0;
  constexpr std::size_t kMaxSteps = 50'000'000;
  while (t < horizon) {
    if (traj.accepted_steps + traj.rejected_steps > kMaxSteps) {
      throw Error(ErrorCode::StepFailure, "step budget exhausted");
    }
    const double h_min = 1e-12 * std::max(1.0, std::abs(t));
    if (h < h_min) {
      std::ostringstream msg;
      msg << "step size underflow at t = " << t;
      throw Error(ErrorCode::StepFailure, msg.str());
    }
    if (t + h > horizon) h = horizon - t;

    bool ok = true;
    auto stage = [&](Vec& out, auto&& combine) {
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * combine(i);
      ok = ok && f(tmp, out);
    };
    stage(k2, [&](std::size_t i) { return a21 * k1[i]; });
    if (ok) stage(k3, [&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; });
    if (ok) stage(k4, [&](std::size_t i) { return a41 * k1[i] + a42 * k2[i] + a43 * k3[i]; });
    if (ok) {
      stage(k5, [&](std::size_t i) {
        return a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i];
      });
    }
    if (ok) {
      stage(k6, [&](std::size_t i) {
        return a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i];
      });
    }
    if (ok) {
      for (std::size_t i = 0; i < n; ++i) {
        ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                              a76 * k6[i]);
      }
      ok = f(ynew, k7);
    }
    if (!ok) {
      // A stage left the positive-capital half-space.
      ++traj.rejected_steps;
      h *= 0.5;
      if (h < h_min) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "capital reached k <= 0 near t = " << t;
        throw Error(ErrorCode::CapitalNonPositive, msg.str());
      }
      continue;
    }

    for (std::size_t i = 0; i < n; ++i) {
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                    e7 * k7[i]);
    }
    const double en = error_norm(err, y, ynew, control);
    if (!std::isfinite(en)) {
      ++traj.rejected_steps;
      h *= 0.2;
      continue;
    }
    if (en > 1.0) {
      ++traj.rejected_steps;
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
      continue;
    }

    for (std::size_t i = 0; i < n; ++i) {
      const double ydiff = ynew[i] - y[i];
      const double bspl = h * k1[i] - ydiff;
      dense[0][i] = y[i];
      dense[1][i] = ydiff;
      dense[2][i] = bspl;
      dense[3][i] = ydiff - h * k7[i] - bspl;
      dense[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                         d7 * k7[i]);
    }
    const double t_new = (horizon - (t + h) <= 1e-12 * std::max(1.0, horizon)) ? horizon : t + h;
    while (next_sample <= last_sample) {
      const double ts = next_sample == sample_count + 1 ? horizon : sample_time(next_sample);
      if (ts > t_new) break;
      const double theta = (ts - t) / h;
      const double theta1 = 1.0 - theta;
      Vec out(n);
      for (std::size_t i = 0; i < n; ++i) {
        out[i] = dense[0][i] +
                 theta * (dense[1][i] +
                          theta1 * (dense[2][i] + theta * (dense[3][i] + theta1 * dense[4][i])));
      }
      traj.times.push_back(ts);
      traj.states.push_back(to_state(m, out));
      ++next_sample;
    }

    t = t_new;
    y.swap(ynew);
    k1.swap(k7);
    ++traj.accepted_steps;
    if (std::abs(y[0]) > control.divergence_bound) {
      traj.status = IntegrationStatus::Diverged;
      break;
    }
    const double factor = en == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(en, -0.2)));
    h *= factor;
  }
  return traj;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const int m = traj.states.empty() ? traj.params.m : traj.states.front().m();
  os << "t,y";
  for (int i = 1; i <= m; ++i) os << ",u" << i;
  os << ",k\n";
  std::string line;
  for (std::size_t r = 0; r < traj.size(); ++r) {
    line = fmt::format("{:.17g}", traj.times[r]);
    const auto& v = traj.states[r].values();
    for (Eigen::Index i = 0; i < v.size(); ++i) line += fmt::format(",{:.17g}", v(i));
    line += '\n';
    os << line;
  }
}

namespace {

struct Extremum {
  double t;
  double value;
};

/// Parabolic refinement through three equally spaced samples.
Extremum refine(double t1, double dt, double y0, double y1, double y2) {
  const double denom = y0 - 2.0 * y1 + y2;
  if (denom == 0.0) return {t1, y1};
  const double shift = std::clamp(0.5 * (y0 - y2) / denom, -1.0, 1.0);
  return {t1 + shift * dt, y1 - 0.25 * (y0 - y2) * shift};
}

struct Extrema {
  std::vector<Extremum> maxima;
  std::vector<Extremum> minima;
};

std::size_t transient_start(const Trajectory& traj, double transient_fraction) {
  if (!(transient_fraction >= 0.0 && transient_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "transient fraction must lie in [0, 1)");
  }
  const double t0 = traj.times.front();
  const double cut = t0 + transient_fraction * (traj.times.back() - t0);
  return static_cast<std::size_t>(
      std::lower_bound(traj.times.begin(), traj.times.end(), cut) - traj.times.begin());
}

Extrema find_extrema(const Trajectory& traj, std::size_t start) {
  Extrema out;
  const auto& ts = traj.times;
  for (std::size_t i = std::max<std::size_t>(start, 1); i + 1 < traj.size(); ++i) {
    const double y0 = traj.states[i - 1].y();
    const double y1 = traj.states[i].y();
    const double y2 = traj.states[i + 1].y();
    const double dt = 0.5 * (ts[i + 1] - ts[i - 1]);
    if (y1 > y0 && y1 >= y2) out.maxima.push_back(refine(ts[i], dt, y0, y1, y2));
    if (y1 < y0 && y1 <= y2) out.minima.push_back(refine(ts[i], dt, y0, y1, y2));
  }
  return out;
}

}  // namespace

CycleMetrics cycle_metrics(const Trajectory& traj, double transient_fraction) {
  CycleMetrics cm;
  if (traj.status == IntegrationStatus::Diverged) {
    cm.kind = CycleKind::Diverged;
    return cm;
  }
  if (traj.size() < 3) {
    throw Error(ErrorCode::InsufficientOscillations, "trajectory too short");
  }
  const auto start = transient_start(traj, transient_fraction);
  const auto ext = find_extrema(traj, start);

  // Pair each maximum with the minimum that follows it.
  struct Swing {
    double t;
    double peak;
    double excursion;
  };
  std::vector<Swing> swings;
  double scale = 0.0;
  for (std::size_t i = start; i < traj.size(); ++i) scale = std::max(scale, std::abs(traj.states[i].y()));
  const double noise_floor = 1e-10 * std::max(scale, 1.0);
  std::size_t j = 0;
  for (const auto& mx : ext.maxima) {
    while (j < ext.minima.size() && ext.minima[j].t <= mx.t) ++j;
    if (j == ext.minima.size()) break;
    const double excursion = mx.value - ext.minima[j].value;
    if (excursion <= noise_floor) break;
    swings.push_back({mx.t, mx.value, excursion});
  }

  cm.maxima = static_cast<int>(ext.maxima.size());
  if (ext.maxima.size() < 6 || swings.size() < 5) {
    std::ostringstream msg;
    msg << "found " << ext.maxima.size() << " maxima of y after the transient (need 6)";
    throw Error(ErrorCode::InsufficientOscillations, msg.str());
  }

  const auto& mx = ext.maxima;
  const std::size_t last = mx.size() - 1;
  cm.period = (mx[last].t - mx[last - 4].t) / 4.0;

  const std::size_t s_last = swings.size() - 1;
  double lo = swings[s_last].excursion;
  double hi = lo;
  double mean = 0.0;
  bool decreasing = true;
  bool increasing = true;
  for (std::size_t i = s_last - 4; i <= s_last; ++i) {
    lo = std::min(lo, swings[i].excursion);
    hi = std::max(hi, swings[i].excursion);
    mean += swings[i].excursion / 5.0;
    if (i > s_last - 4) {
      decreasing = decreasing && swings[i].excursion < swings[i - 1].excursion;
      increasing = increasing && swings[i].excursion > swings[i - 1].excursion;
    }
  }
  cm.excursion_spread = (hi - lo) / mean;

  // Log-linear envelope over every swing after the transient.
  double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
  for (const auto& s : swings) {
    const double l = std::log(s.excursion);
    st += s.t;
    sl += l;
    stt += s.t * s.t;
    stl += s.t * l;
  }
  const double count = static_cast<double>(swings.size());
  const double slope = (count * stl - st * sl) / (count * stt - st * st);

  if (cm.excursion_spread < 1e-3) {
    cm.kind = CycleKind::LimitCycle;
  } else if (decreasing || (!increasing && slope < 0.0)) {
    cm.kind = CycleKind::Damped;
    cm.decay_rate = slope;
  } else {
    cm.kind = CycleKind::Diverged;
  }

  if (cm.kind == CycleKind::LimitCycle) {
    const double t_end = traj.times.back();
    const double window = t_end - *cm.period;
    double ymax = -std::numeric_limits<double>::infinity();
    double ymin = std::numeric_limits<double>::infinity();
    for (std::size_t i = start; i < traj.size(); ++i) {
      if (traj.times[i] < window) continue;
      ymax = std::max(ymax, traj.states[i].y());
      ymin = std::min(ymin, traj.states[i].y());
    }
    for (const auto& e : ext.maxima) {
      if (e.t >= window) ymax = std::max(ymax, e.value);
    }
    for (const auto& e : ext.minima) {
      if (e.t >= window) ymin = std::min(ymin, e.value);
    }
    cm.amplitude = ymax - ymin;
    cm.semi_amplitude = 0.5 * (ymax - ymin);
  }
  return cm;
}

double period_from_crossings(const Trajectory& traj, double transient_fraction) {
  const auto start = transient_start(traj, transient_fraction);
  if (traj.size() - start < 3) {
    throw Error(ErrorCode::InsufficientOscillations, "trajectory too short");
  }
  double mean = 0.0;
  for (std::size_t i = start; i < traj.size(); ++i) mean += traj.states[i].y();
  mean /= static_cast<double>(traj.size() - start);

  std::vector<double> crossings;
  for (std::size_t i = start + 1; i < traj.size(); ++i) {
    const double a = traj.states[i - 1].y() - mean;
    const double b = traj.states[i].y() - mean;
    if (a < 0.0 && b >= 0.0) {
      const double w = a / (a - b);
      crossings.push_back(traj.times[i - 1] + w * (traj.times[i] - traj.times[i - 1]));
    }
  }
  if (crossings.size() < 3) {
    throw Error(ErrorCode::InsufficientOscillations, "fewer than three upward crossings");
  }
  return (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
}

namespace {

/// Real part of the complex eigenvalue with largest real part.
double dominant_pair_rate(const MacroParams& p, const InvestmentParams& inv, double& omega) {
  const auto eigs = eigenvalues(equilibrium_jacobian(p, inv));
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& z : eigs) {
    if (z.imag() > 0.0 && z.real() > best) {
      best = z.real();
      omega = z.imag();
    }
  }
  return best;
}

CycleMetrics simulate_side(const MacroParams& p, const InvestmentParams& inv,
                           double perturbation, double fallback_omega) {
  double omega = fallback_omega;
  const double rate = dominant_pair_rate(p, inv, omega);
  const double period = 2.0 * std::numbers::pi / omega;
  // Unstable side: grow out of the perturbation, then converge at ~2|rate|.
  // Stable side: decay for a few e-foldings without reaching round-off.
  const double efolds = rate > 0.0 ? 16.0 : 7.0;
  double horizon = std::isfinite(rate) && rate != 0.0 ? efolds / std::abs(rate) : 4e5;
  horizon = std::clamp(horizon, 16.0 * period, 1e6);

  const auto eq = equilibrium(p, inv);
  const auto sys = ChainSystem::build(p, inv);
  auto s0 = ChainState::at_equilibrium(p.m, eq);
  s0.y() *= 1.0 + perturbation;
  StepControl control;
  control.sample_interval = period / 200.0;
  return cycle_metrics(integrate(sys, s0, horizon, control), 0.5);
}

}  // namespace

HopfCycleCheck check_hopf_cycle(HopfPoint& hp, const MacroParams& base,
                                const InvestmentParams& inv, double offset,
                                double perturbation) {
  const double dir = hp.crossing == Crossing::Destabilizing ? 1.0 : -1.0;
  HopfCycleCheck check;
  check.after = hp.value * (1.0 + dir * offset);
  check.before = hp.value * (1.0 - dir * offset);
  check.metrics_after = simulate_side(with_parameter(base, hp.parameter, check.after), inv,
                                      perturbation, hp.omega);
  check.metrics_before = simulate_side(with_parameter(base, hp.parameter, check.before), inv,
                                       perturbation, hp.omega);
  check.supercritical = check.metrics_after.kind == CycleKind::LimitCycle &&
                        check.metrics_before.kind == CycleKind::Damped;
  hp.supercritical = check.supercritical;
  return check;
}

}  // namespace chaintrick
