// SPDX-License-Identifier: Apache-2.0

#include "chaintrick/hopf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chaintrick/chain_system.hpp"
#include "chaintrick/errors.hpp"

namespace chaintrick {

std::string_view to_string(BifurcationParameter p) {
  switch (p) {
    case BifurcationParameter::T: return "T";
    case BifurcationParameter::g: return "g";
    case BifurcationParameter::alpha: return "alpha";
  }
  return "?";
}

std::string_view to_string(Crossing c) {
  return c == Crossing::Destabilizing ? "destabilizing" : "stabilizing";
}

std::string_view to_string(BoundaryKind k) {
  switch (k) {
    case BoundaryKind::EquilibriumBoundary: return "equilibrium_boundary";
    case BoundaryKind::RealCrossing: return "real_crossing";
    case BoundaryKind::RealComplexTransition: return "real_complex_transition";
    case BoundaryKind::Hopf: return "hopf";
  }
  return "?";
}

MacroParams with_parameter(MacroParams p, BifurcationParameter which, double value) {
  switch (which) {
    case BifurcationParameter::T: p.T = value; break;
    case BifurcationParameter::g: p.g = value; break;
    case BifurcationParameter::alpha: p.alpha = value; break;
  }
  return p;
}

double get_parameter(const MacroParams& p, BifurcationParameter which) {
  switch (which) {
    case BifurcationParameter::T: return p.T;
    case BifurcationParameter::g: return p.g;
    case BifurcationParameter::alpha: return p.alpha;
  }
  return 0.0;
}

Eigen::MatrixXd equilibrium_jacobian(const MacroParams& p, const InvestmentParams& inv) {
  const auto eq = equilibrium(p, inv);
  return ChainSystem::build(p, inv).equilibrium_jacobian(eq);
}

namespace {

// Imaginary parts below this fraction of the spectral radius count as real.
constexpr double kImagTolerance = 1e-8;

double spectral_scale(const std::vector<Complex>& eigs) {
  double scale = 0.0;
  for (const auto& z : eigs) scale = std::max(scale, std::abs(z));
  return std::max(scale, 1e-300);
}

bool is_complex(Complex z, double scale) { return std::abs(z.imag()) > kImagTolerance * scale; }

/// Upper-half-plane eigenvalue nearest to `ref`.
std::optional<Complex> nearest_upper(const std::vector<Complex>& eigs, Complex ref) {
  const double scale = spectral_scale(eigs);
  std::optional<Complex> best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& z : eigs) {
    if (!is_complex(z, scale) || z.imag() < 0.0) continue;
    const double dist = std::abs(z - ref);
    if (dist < best_dist) {
      best_dist = dist;
      best = z;
    }
  }
  return best;
}

struct Sample {
  double param = 0.0;
  std::optional<std::vector<Complex>> eigs;
  EigenSignature sig;
};

class ParameterPath {
 public:
  ParameterPath(MacroParams base, InvestmentParams inv, BifurcationParameter which)
      : base_(base), inv_(inv), which_(which) {}

  MacroParams params_at(double value) const { return with_parameter(base_, which_, value); }

  std::optional<std::vector<Complex>> eigs(double value) const {
    try {
      return eigenvalues(equilibrium_jacobian(params_at(value), inv_));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NonPositiveEquilibrium || e.code() == ErrorCode::GrowthOutOfRange) {
        return std::nullopt;
      }
      throw;
    }
  }

  Sample sample(double value) const {
    Sample s;
    s.param = value;
    s.eigs = eigs(value);
    if (s.eigs) {
      s.sig = signature_of(*s.eigs);
    } else {
      s.sig = EigenSignature{};
      s.sig.valid = false;
    }
    return s;
  }

  /// Sign of the cubic discriminant, for the weak kernel only.
  std::optional<double> discriminant(double value) const {
    if (base_.m != 1) return std::nullopt;
    try {
      const auto p = params_at(value);
      return cubic_discriminant(coeffs_m1(equilibrium(p, inv_), p));
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  BifurcationParameter which() const { return which_; }
  const InvestmentParams& inv() const { return inv_; }

 private:
  MacroParams base_;
  InvestmentParams inv_;
  BifurcationParameter which_;
};

template <typename Pred>
double bisect_predicate(double lo, double hi, double tol, Pred same_as_lo) {
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (same_as_lo(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double fd_step(double value) { return 1e-5 * std::max(1.0, std::abs(value)); }

/// Refines a bracket whose ends have the same number of complex pairs but a
/// different count of pairs in the right half-plane.
std::optional<HopfPoint> refine_hopf(const ParameterPath& path, const Sample& lo_s,
                                     const Sample& hi_s, double tol) {
  // Identify the pair whose real part changes sign across the bracket.
  std::optional<Complex> tracked;
  const double scale = spectral_scale(*lo_s.eigs);
  for (const auto& z : *lo_s.eigs) {
    if (!is_complex(z, scale) || z.imag() < 0.0) continue;
    const auto partner = nearest_upper(*hi_s.eigs, z);
    if (partner && std::signbit(partner->real()) != std::signbit(z.real())) {
      tracked = z;
      break;
    }
  }
  if (!tracked) return std::nullopt;

  double lo = lo_s.param;
  double hi = hi_s.param;
  const bool lo_negative = tracked->real() < 0.0;
  Complex ref = *tracked;
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const auto eigs = path.eigs(mid);
    if (!eigs) return std::nullopt;
    const auto z = nearest_upper(*eigs, ref);
    if (!z) return std::nullopt;
    if ((z->real() < 0.0) == lo_negative) {
      lo = mid;
      ref = *z;
    } else {
      hi = mid;
    }
  }
  const double value = 0.5 * (lo + hi);
  const auto eigs = path.eigs(value);
  if (!eigs) return std::nullopt;
  const auto z = nearest_upper(*eigs, ref);
  if (!z) return std::nullopt;

  HopfPoint hp;
  hp.parameter = path.which();
  hp.value = value;
  hp.omega = z->imag();
  hp.transversality = transversality_fd(path.params_at(value), path.inv(), path.which(), value,
                                        hp.omega, fd_step(value));
  hp.crossing = hp.transversality > 0.0 ? Crossing::Destabilizing : Crossing::Stabilizing;
  return hp;
}

std::vector<double> make_grid(double lo, double hi, int n, bool log_spacing) {
  if (n < 2) throw Error(ErrorCode::InvalidParameter, "scan grid needs at least 2 points");
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    grid[static_cast<std::size_t>(i)] =
        log_spacing ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                    : lo + t * (hi - lo);
  }
  grid.back() = hi;
  return grid;
}

struct ScanResult {
  std::vector<GBoundary> boundaries;
  std::vector<GSubinterval> intervals;
};

ScanResult scan_path(const ParameterPath& path, double lo, double hi, const ScanOptions& opt) {
  if (!(hi > lo)) throw Error(ErrorCode::InvalidParameter, "scan range must satisfy lo < hi");
  const auto grid = make_grid(lo, hi, opt.grid_points, opt.log_spacing);
  std::vector<Sample> samples;
  samples.reserve(grid.size());
  for (double v : grid) samples.push_back(path.sample(v));

  ScanResult out;
  out.intervals.push_back({lo, hi, samples.front().sig});
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const auto& a = samples[i];
    const auto& b = samples[i + 1];
    if (a.sig == b.sig) continue;

    GBoundary boundary;
    if (a.sig.valid != b.sig.valid) {
      boundary.kind = BoundaryKind::EquilibriumBoundary;
      boundary.g = bisect_predicate(a.param, b.param, opt.tolerance, [&](double x) {
        return path.eigs(x).has_value() == a.sig.valid;
      });
    } else if (a.sig.pairs() == b.sig.pairs() && a.sig.pairs_positive != b.sig.pairs_positive) {
      auto hp = refine_hopf(path, a, b, opt.tolerance);
      if (!hp) continue;
      boundary.kind = BoundaryKind::Hopf;
      boundary.g = hp->value;
      boundary.hopf = hp;
    } else if (a.sig.pairs() != b.sig.pairs()) {
      boundary.kind = BoundaryKind::RealComplexTransition;
      const auto disc_a = path.discriminant(a.param);
      const auto disc_b = path.discriminant(b.param);
      if (disc_a && disc_b && std::signbit(*disc_a) != std::signbit(*disc_b)) {
        const bool sign_a = std::signbit(*disc_a);
        boundary.g = bisect_predicate(a.param, b.param, opt.tolerance, [&](double x) {
          const auto d = path.discriminant(x);
          return d && std::signbit(*d) == sign_a;
        });
      } else {
        boundary.g = bisect_predicate(a.param, b.param, opt.tolerance, [&](double x) {
          return path.sample(x).sig.pairs() == a.sig.pairs();
        });
      }
    } else {
      boundary.kind = BoundaryKind::RealCrossing;
      boundary.g = bisect_predicate(a.param, b.param, opt.tolerance,
                                    [&](double x) { return path.sample(x).sig == a.sig; });
    }
    out.intervals.back().hi = boundary.g;
    out.intervals.push_back({boundary.g, hi, b.sig});
    out.boundaries.push_back(boundary);
  }
  return out;
}

std::vector<HopfPoint> hopf_only(const ScanResult& scan) {
  std::vector<HopfPoint> points;
  for (const auto& b : scan.boundaries) {
    if (b.hopf) points.push_back(*b.hopf);
  }
  return points;
}

/// Re(dλ/dT) at λ = iω from implicit differentiation of p(λ; T) = 0.
template <std::size_t N, std::size_t D>
double implicit_transversality(const std::array<double, N>& monic,
                               const std::array<double, D>& dcoeffs, double omega) {
  static_assert(D + 1 == N);
  const Complex lambda(0.0, omega);
  const std::size_t n = N - 1;
  Complex dp{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) dp = dp * lambda + monic[i] * static_cast<double>(n - i);
  Complex dT{0.0, 0.0};
  for (std::size_t i = 0; i < D; ++i) dT = dT * lambda + dcoeffs[i];
  return (-dT / dp).real();
}

std::string describe_params(const MacroParams& p) {
  std::ostringstream os;
  os.precision(10);
  os << "(alpha=" << p.alpha << ", g=" << p.g << ", T=" << p.T << ", m=" << p.m << ")";
  return os.str();
}

}  // namespace

EigenSignature signature_of(const std::vector<Complex>& eigs) {
  EigenSignature sig;
  const double scale = spectral_scale(eigs);
  for (const auto& z : eigs) {
    if (is_complex(z, scale)) {
      if (z.imag() > 0.0) {
        (z.real() < 0.0 ? sig.pairs_negative : sig.pairs_positive) += 1;
      }
    } else {
      (z.real() < 0.0 ? sig.negative_real : sig.positive_real) += 1;
    }
  }
  return sig;
}

EigenSignature eigen_signature(const MacroParams& p, const InvestmentParams& inv) {
  return signature_of(eigenvalues(equilibrium_jacobian(p, inv)));
}

std::string EigenSignature::describe() const {
  if (!valid) return "no positive equilibrium";
  std::ostringstream os;
  bool first = true;
  auto part = [&](int count, const char* one, const char* many) {
    if (count == 0) return;
    if (!first) os << ", ";
    first = false;
    if (count == 1) {
      os << one;
    } else {
      os << count << ' ' << many;
    }
  };
  part(negative_real, "1 negative", "negative");
  part(positive_real, "1 positive", "positive");
  part(pairs_negative, "pair with negative real part", "pairs with negative real part");
  part(pairs_positive, "pair with positive real part", "pairs with positive real part");
  return os.str();
}

std::vector<HopfPoint> GIntervalReport::hopf_points() const {
  std::vector<HopfPoint> points;
  for (const auto& b : boundaries) {
    if (b.hopf) points.push_back(*b.hopf);
  }
  return points;
}

StabilityReport assess_stability(const MacroParams& p, const InvestmentParams& inv) {
  p.validate_for_stability();
  StabilityReport r;
  r.equilibrium = equilibrium(p, inv);
  if (p.m == 1) {
    const auto c = coeffs_m1(r.equilibrium, p);
    const auto mon = c.monic();
    r.monic.assign(mon.begin(), mon.end());
    r.verdict = routh_hurwitz_cubic(c);
    r.discriminant = cubic_discriminant(c.a1, c.a2, c.a3);
  } else if (p.m == 2) {
    const auto c = coeffs_m2(r.equilibrium, p);
    const auto mon = c.monic();
    r.monic.assign(mon.begin(), mon.end());
    r.verdict = routh_hurwitz_quartic(c);
  } else {
    const auto J = ChainSystem::build(p, inv).equilibrium_jacobian(r.equilibrium);
    r.monic = characteristic_polynomial(J);
    r.verdict = routh_hurwitz_general(r.monic);
  }
  r.signature = signature_of(r.verdict.eigenvalues);
  return r;
}

std::vector<HopfPoint> hopf_in_T_m1(const Equilibrium& eq, const MacroParams& p) {
  MacroParams base = p;
  if (!(base.T > 0.0)) base.T = 1.0;  // A, B do not depend on T
  const auto c = coeffs_m1(eq, base);
  if (c.A >= 0.0) {
    std::ostringstream msg;
    msg << "A = " << c.A << " >= 0: unstable for every T " << describe_params(p);
    throw Error(ErrorCode::NoStableRegime, msg.str());
  }

  const auto [qa, qb, qc] = criticality_quadratic(c);
  std::vector<double> candidates;
  if (qa == 0.0) {
    if (qb != 0.0) candidates.push_back(-qc / qb);
  } else {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) {
      const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
      candidates.push_back(q / qa);
      if (q != 0.0) candidates.push_back(qc / q);
    }
  }

  std::vector<HopfPoint> points;
  for (double T : candidates) {
    if (!(T > 0.0) || !std::isfinite(T)) continue;
    for (int iter = 0; iter < 2; ++iter) {
      const double f = (qa * T + qb) * T + qc;
      const double df = 2.0 * qa * T + qb;
      if (df == 0.0) break;
      T -= f / df;
    }
    const auto ck = c.at(T);
    if (!(ck.a2 > 0.0) || !(ck.a1 > 0.0)) continue;
    HopfPoint hp;
    hp.parameter = BifurcationParameter::T;
    hp.value = T;
    hp.omega = std::sqrt(ck.a2);
    hp.transversality = implicit_transversality(ck.monic(), ck.derivatives(), hp.omega);
    hp.crossing = hp.transversality > 0.0 ? Crossing::Destabilizing : Crossing::Stabilizing;
    points.push_back(hp);
  }
  if (points.empty()) {
    throw Error(ErrorCode::NoHopf, "criticality quadratic has no admissible positive root " +
                                       describe_params(p));
  }
  std::sort(points.begin(), points.end(),
            [](const HopfPoint& l, const HopfPoint& r) { return l.value < r.value; });
  return points;
}

std::vector<HopfPoint> hopf_in_T_m2(const Equilibrium& eq, const MacroParams& p) {
  MacroParams base = p;
  if (!(base.T > 0.0)) base.T = 1.0;  // M, N, P do not depend on T
  const auto c = coeffs_m2(eq, base);
  const auto phi_coeffs = phi_quartic_coefficients(c);
  const auto trimmed = trim_leading(phi_coeffs, 1e-14);

  std::vector<HopfPoint> points;
  for (const auto& root : polynomial_roots(trimmed)) {
    if (std::abs(root.imag()) > 1e-9 * std::max(1.0, std::abs(root))) continue;
    double T = root.real();
    if (!(T > 0.0)) continue;
    for (int iter = 0; iter < 3; ++iter) {
      const double dphi = phi_quartic_deriv(c, T);
      if (dphi == 0.0) break;
      T -= phi_quartic(c, T) / dphi;
    }
    if (!(T > 0.0)) continue;
    const auto ck = c.at(T);
    if (!(ck.a1 > 0.0) || !(ck.a3 > 0.0)) continue;
    // Remaining roots: λ3 + λ4 = -a1 < 0 and λ3 λ4 = (a1 a2 - a3)/a1 > 0.
    if (!((ck.a1 * ck.a2 - ck.a3) / ck.a1 > 0.0)) continue;
    // Compare T φ'(T) with the size of φ's terms so the test is scale free.
    double term_scale = 0.0;
    for (std::size_t i = 0; i < trimmed.size(); ++i) {
      term_scale += std::abs(trimmed[i]) * std::pow(T, static_cast<double>(trimmed.size() - 1 - i));
    }
    if (std::abs(T * phi_quartic_deriv(c, T)) <= 1e-10 * term_scale) {
      std::ostringstream msg;
      msg << "phi'(T*) vanishes at T* = " << T;
      throw Error(ErrorCode::DegenerateTransversality, msg.str());
    }
    HopfPoint hp;
    hp.parameter = BifurcationParameter::T;
    hp.value = T;
    hp.omega = std::sqrt(ck.a3 / ck.a1);
    hp.transversality = implicit_transversality(ck.monic(), ck.derivatives(), hp.omega);
    hp.crossing = hp.transversality > 0.0 ? Crossing::Destabilizing : Crossing::Stabilizing;
    points.push_back(hp);
  }
  if (points.empty()) {
    throw Error(ErrorCode::NoHopf, "phi(T) has no admissible positive root " + describe_params(p));
  }
  std::sort(points.begin(), points.end(),
            [](const HopfPoint& l, const HopfPoint& r) { return l.value < r.value; });
  return points;
}

std::vector<HopfPoint> hopf_in_T_numeric(const MacroParams& p, const InvestmentParams& inv,
                                         double T_lo, double T_hi, ScanOptions options) {
  if (!(T_lo > 0.0)) throw Error(ErrorCode::DelayNonPositive, "T scan must start above 0");
  const ParameterPath path(p, inv, BifurcationParameter::T);
  auto points = hopf_only(scan_path(path, T_lo, T_hi, options));
  if (points.empty()) {
    throw Error(ErrorCode::NoHopf, "no complex-pair crossing in T " + describe_params(p));
  }
  return points;
}

std::vector<HopfPoint> hopf_in_T(const MacroParams& p, const InvestmentParams& inv) {
  if (p.m == 1) return hopf_in_T_m1(equilibrium(p, inv), p);
  if (p.m == 2) return hopf_in_T_m2(equilibrium(p, inv), p);
  return hopf_in_T_numeric(p, inv, 1e-3, 200.0);
}

std::optional<double> critical_delay(const MacroParams& p, const InvestmentParams& inv) {
  std::vector<HopfPoint> points;
  try {
    points = hopf_in_T(p, inv);
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::NoHopf:
      case ErrorCode::NoStableRegime:
      case ErrorCode::NonPositiveEquilibrium:
      case ErrorCode::GrowthOutOfRange:
        return std::nullopt;
      default:
        throw;
    }
  }
  for (const auto& hp : points) {
    if (hp.crossing != Crossing::Destabilizing) continue;
    // T_bi bounds a stable regime from above: the equilibrium must be stable
    // at short delays.
    const double probe = std::min(1e-3, 0.5 * hp.value);
    if (!eigen_signature(with_parameter(p, BifurcationParameter::T, probe), inv).stable()) {
      return std::nullopt;
    }
    return hp.value;
  }
  return std::nullopt;
}

GIntervalReport hopf_in_g(const MacroParams& p, const InvestmentParams& inv, int m,
                          ScanOptions options) {
  MacroParams base = p;
  base.m = m;
  base.validate_for_stability();
  inv.validate();
  GIntervalReport report;
  std::tie(report.g_min, report.g_max) = admissible_growth(inv, p.delta);
  constexpr double kMargin = 1e-6;
  const double lo = report.g_min + kMargin;
  const double hi = report.g_max - kMargin;
  if (!(hi > lo)) {
    throw Error(ErrorCode::GrowthOutOfRange, "admissible growth interval is empty");
  }
  const ParameterPath path(base, inv, BifurcationParameter::g);
  auto scan = scan_path(path, lo, hi, options);
  scan.intervals.front().lo = report.g_min;
  scan.intervals.back().hi = report.g_max;
  report.boundaries = std::move(scan.boundaries);
  report.classification = std::move(scan.intervals);
  return report;
}

std::vector<HopfPoint> hopf_in_alpha(const MacroParams& p, const InvestmentParams& inv, int m,
                                     double alpha_lo, double alpha_hi, ScanOptions options) {
  if (!(alpha_lo > 0.0) || !(alpha_hi > alpha_lo)) {
    throw Error(ErrorCode::InvalidParameter, "alpha range must satisfy 0 < lo < hi");
  }
  MacroParams base = p;
  base.m = m;
  base.validate_for_stability();
  const ParameterPath path(base, inv, BifurcationParameter::alpha);
  auto points = hopf_only(scan_path(path, alpha_lo, alpha_hi, options));
  if (points.empty()) {
    throw Error(ErrorCode::NoHopf, "no complex-pair crossing in alpha " + describe_params(base));
  }
  return points;
}

double transversality_fd(const MacroParams& p, const InvestmentParams& inv,
                         BifurcationParameter which, double value, double omega, double step) {
  const ParameterPath path(p, inv, which);
  const Complex ref(0.0, omega);
  const auto plus = path.eigs(value + step);
  const auto minus = path.eigs(value - step);
  if (!plus || !minus) return 0.0;
  const auto zp = nearest_upper(*plus, ref);
  const auto zm = nearest_upper(*minus, ref);
  if (!zp || !zm) return 0.0;
  return (zp->real() - zm->real()) / (2.0 * step);
}

}  // namespace chaintrick
