#include "suris/potentials.hpp"

#include <cmath>
#include <mutex>
#include <sstream>
#include <variant>

#include "suris/errors.hpp"
#include "suris/numerics.hpp"

namespace suris {

using num::cos2pi;
using num::kPi;
using num::kTwoPi;
using num::sin2pi;

namespace {

constexpr double kEccentricityCap = 0.25;
constexpr int kVTableCells = 4096;

struct Trig {
  double s1, c1, s2, c2;  // sin/cos of 2*pi*x and 4*pi*x
};
inline Trig trig_at(double x) {
  return {sin2pi(x), cos2pi(x), sin2pi(2.0 * x), cos2pi(2.0 * x)};
}

inline double e_of(const SurisParams& p, const Trig& t) {
  return p.A * t.s1 + p.B * t.c1 + p.C * t.s2 + p.D * t.c2;
}
inline double f_of(const SurisParams& p, const Trig& t) {
  return -p.A * t.c1 + p.B * t.s1 - p.C * t.c2 + p.D * t.s2;
}

}  // namespace

SurisParams::SurisParams(double a, double b, double c, double d) : A(a), B(b), C(c), D(d) {
  if (!(eccentricity() <= kEccentricityCap + 1e-12))
    throw DomainError("SurisParams: eccentricity exceeds the cap 1/4");
}

double SurisParams::eccentricity() const {
  return std::sqrt(A * A + B * B + C * C + D * D);
}

AlphaBetaGammaD alpha_beta_gamma_d(const SurisParams& p, double x) {
  const Trig t = trig_at(x);
  AlphaBetaGammaD r;
  r.alpha = 1.0 + f_of(p, t);
  r.beta = e_of(p, t);
  r.gamma = p.A * t.c1 - p.B * t.s1;
  r.D = std::hypot(r.alpha, r.beta);
  return r;
}

double suris_vprime(const SurisParams& p, double x) {
  const Trig t = trig_at(x);
  // atan2 on the right half-plane (1 + F >= 1 - 2*eps > 0) equals
  // arctan(E / (1+F)) and is robust near E = 0.
  return std::atan2(e_of(p, t), 1.0 + f_of(p, t)) / kPi;
}

double suris_vsecond(const SurisParams& p, double x) {
  const Trig t = trig_at(x);
  const double E = e_of(p, t);
  const double A1 = 1.0 + f_of(p, t);
  const double Ep = kTwoPi * (p.A * t.c1 - p.B * t.s1 + 2.0 * (p.C * t.c2 - p.D * t.s2));
  const double Fp = kTwoPi * (p.A * t.s1 + p.B * t.c1 + 2.0 * (p.C * t.s2 + p.D * t.c2));
  return (Ep * A1 - E * Fp) / (E * E + A1 * A1) / kPi;
}

double suris_partial_vprime(const SurisParams& p, SurisCoord which, double x) {
  const Trig t = trig_at(x);
  const double E = e_of(p, t);
  const double A1 = 1.0 + f_of(p, t);
  const double den = kPi * (E * E + A1 * A1);
  switch (which) {
    case SurisCoord::A:
      return (A1 * t.s1 + E * t.c1) / den;
    case SurisCoord::B:
      return (A1 * t.c1 - E * t.s1) / den;
    case SurisCoord::C:
      return (A1 * t.s2 + E * t.c2) / den;
    case SurisCoord::D:
      return (A1 * t.c2 - E * t.s2) / den;
  }
  throw DomainError("suris_partial_vprime: bad coordinate");
}

namespace {

/// Cached cumulative-integral tables for one parameter set: V itself and the
/// four parameter derivatives of V.  Immutable once built; shared freely.
struct SurisTables {
  SurisParams params;
  num::CumulativeTable v;
  num::CumulativeTable partial[4];

  explicit SurisTables(const SurisParams& p)
      : params(p),
        v([&p](double x) { return suris_vprime(p, x); }, kVTableCells),
        partial{num::CumulativeTable(
                    [&p](double x) { return suris_partial_vprime(p, SurisCoord::A, x); },
                    kVTableCells),
                num::CumulativeTable(
                    [&p](double x) { return suris_partial_vprime(p, SurisCoord::B, x); },
                    kVTableCells),
                num::CumulativeTable(
                    [&p](double x) { return suris_partial_vprime(p, SurisCoord::C, x); },
                    kVTableCells),
                num::CumulativeTable(
                    [&p](double x) { return suris_partial_vprime(p, SurisCoord::D, x); },
                    kVTableCells)} {}

  double v_at(double x) const {
    const double fl = std::floor(x);
    return v.eval(x - fl) + fl * v.total();
  }
  double partial_at(SurisCoord which, double x) const {
    const auto& tab = partial[static_cast<int>(which)];
    const double fl = std::floor(x);
    return tab.eval(x - fl) + fl * tab.total();
  }
};

/// Most-recently-used table shared by the free functions; Potential nodes
/// hold their own shared_ptr so hot paths never touch the lock.
std::shared_ptr<const SurisTables> tables_for(const SurisParams& p) {
  static std::mutex mu;
  static std::shared_ptr<const SurisTables> last;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (last && last->params == p) return last;
  }
  auto fresh = std::make_shared<const SurisTables>(p);
  std::lock_guard<std::mutex> lock(mu);
  last = fresh;
  return fresh;
}

}  // namespace

double suris_v(const SurisParams& p, double x) { return tables_for(p)->v_at(x); }

double suris_partial(const SurisParams& p, SurisCoord which, double x) {
  return tables_for(p)->partial_at(which, x);
}

// ---------------------------------------------------------------------------
// TrigPerturbation

double TrigPerturbation::value(double x) const { return derivative(x, 0); }

double TrigPerturbation::derivative(double x, int r) const {
  if (r < 0) throw DomainError("TrigPerturbation::derivative: r >= 0 required");
  num::KahanSum acc;
  const int n = degree();
  for (int m = 1; m <= n; ++m) {
    const double a = (m <= static_cast<int>(cos_coeffs.size())) ? cos_coeffs[m - 1] : 0.0;
    const double b = (m <= static_cast<int>(sin_coeffs.size())) ? sin_coeffs[m - 1] : 0.0;
    if (a == 0.0 && b == 0.0) continue;
    const double amp = std::pow(kTwoPi * m, r);
    const double c = cos2pi(m * x), s = sin2pi(m * x);
    // d^r/dx^r cos = (2 pi m)^r * {cos, -sin, -cos, sin}[r mod 4], and the
    // same cycle shifted for sin.
    double ca, sb;
    switch (r & 3) {
      case 0: ca = c; sb = s; break;
      case 1: ca = -s; sb = c; break;
      case 2: ca = -c; sb = -s; break;
      default: ca = s; sb = -c; break;
    }
    acc.add(amp * (a * ca + b * sb));
  }
  double out = acc.value();
  if (r == 0) out += mean;
  return out;
}

int TrigPerturbation::degree() const {
  return static_cast<int>(std::max(cos_coeffs.size(), sin_coeffs.size()));
}

bool TrigPerturbation::is_zero() const {
  if (mean != 0.0) return false;
  for (double a : cos_coeffs)
    if (a != 0.0) return false;
  for (double b : sin_coeffs)
    if (b != 0.0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Potential

struct SurisNode {
  SurisParams params;
  std::shared_ptr<const SurisTables> tables;
};
struct TrigNode {
  TrigPerturbation w;
};
struct SumNode;
struct ScaledNode;

struct Potential::Node {
  std::variant<SurisNode, TrigNode, std::shared_ptr<const SumNode>,
               std::shared_ptr<const ScaledNode>>
      v;
};

struct SumNode {
  Potential a, b;
};
struct ScaledNode {
  double factor;
  Potential a;
};

Potential::Potential() : Potential(zero()) {}

Potential Potential::zero() { return trig(TrigPerturbation{}); }

Potential Potential::suris(const SurisParams& p) {
  auto n = std::make_shared<Node>();
  n->v = SurisNode{p, tables_for(p)};
  return Potential(std::move(n));
}

Potential Potential::trig(TrigPerturbation w) {
  auto n = std::make_shared<Node>();
  n->v = TrigNode{std::move(w)};
  return Potential(std::move(n));
}

Potential Potential::sum(Potential a, Potential b) {
  auto n = std::make_shared<Node>();
  n->v = std::make_shared<const SumNode>(SumNode{std::move(a), std::move(b)});
  return Potential(std::move(n));
}

Potential Potential::scaled(double factor, Potential a) {
  auto n = std::make_shared<Node>();
  n->v = std::make_shared<const ScaledNode>(ScaledNode{factor, std::move(a)});
  return Potential(std::move(n));
}

namespace {

/// 4th-order central stencil for one extra derivative order on top of the
/// closed-form V''; used only for Suris parts with r >= 3 (grid-accurate).
double stencil_derivative(const std::function<double(double)>& f, double x, int order) {
  if (order == 0) return f(x);
  const double h = 1e-3;
  auto lower = [&](double t) { return stencil_derivative(f, t, order - 1); };
  return (lower(x - 2 * h) - 8.0 * lower(x - h) + 8.0 * lower(x + h) - lower(x + 2 * h)) /
         (12.0 * h);
}

}  // namespace

double Potential::v(double x) const { return derivative(x, 0); }
double Potential::vprime(double x) const { return derivative(x, 1); }
double Potential::vsecond(double x) const { return derivative(x, 2); }

double Potential::derivative(double x, int r) const {
  if (r < 0) throw DomainError("Potential::derivative: r >= 0 required");
  if (const auto* s = std::get_if<SurisNode>(&node_->v)) {
    switch (r) {
      case 0: return s->tables->v_at(x);
      case 1: return suris_vprime(s->params, x);
      case 2: return suris_vsecond(s->params, x);
      default:
        if (r > 6)
          throw DomainError(
              "Potential::derivative: orders > 6 unsupported for Suris parts");
        return stencil_derivative(
            [this, s](double t) { return suris_vsecond(s->params, t); }, x, r - 2);
    }
  }
  if (const auto* t = std::get_if<TrigNode>(&node_->v)) return t->w.derivative(x, r);
  if (const auto* sum = std::get_if<std::shared_ptr<const SumNode>>(&node_->v))
    return (*sum)->a.derivative(x, r) + (*sum)->b.derivative(x, r);
  const auto& sc = std::get<std::shared_ptr<const ScaledNode>>(node_->v);
  return sc->factor * sc->a.derivative(x, r);
}

std::string Potential::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (const auto* s = std::get_if<SurisNode>(&node_->v)) {
    os << "suris(A=" << s->params.A << ",B=" << s->params.B << ",C=" << s->params.C
       << ",D=" << s->params.D << ")";
  } else if (const auto* t = std::get_if<TrigNode>(&node_->v)) {
    if (t->w.is_zero())
      os << "zero";
    else
      os << "trig(n=" << t->w.degree() << ")";
  } else if (const auto* sum = std::get_if<std::shared_ptr<const SumNode>>(&node_->v)) {
    os << "sum(" << (*sum)->a.describe() << "," << (*sum)->b.describe() << ")";
  } else {
    const auto& sc = std::get<std::shared_ptr<const ScaledNode>>(node_->v);
    os << "scaled(" << sc->factor << "," << sc->a.describe() << ")";
  }
  return os.str();
}

std::optional<Potential::Parts> Potential::canonical_parts() const {
  Parts parts;
  bool ok = true;
  // Class-wide access lets the recursion read node_ of child potentials.
  auto walk = [&](auto&& self, const Potential& p, double scale) -> void {
    if (!ok) return;
    const Node& n = *p.node_;
    if (const auto* s = std::get_if<SurisNode>(&n.v)) {
      if (scale != 1.0 || parts.suris.has_value()) {
        ok = false;
        return;
      }
      parts.suris = s->params;
      return;
    }
    if (const auto* t = std::get_if<TrigNode>(&n.v)) {
      auto& dst = parts.trig;
      const auto& w = t->w;
      const std::size_t nmax =
          std::max({dst.cos_coeffs.size(), dst.sin_coeffs.size(), w.cos_coeffs.size(),
                    w.sin_coeffs.size()});
      dst.cos_coeffs.resize(nmax, 0.0);
      dst.sin_coeffs.resize(nmax, 0.0);
      for (std::size_t i = 0; i < w.cos_coeffs.size(); ++i)
        dst.cos_coeffs[i] += scale * w.cos_coeffs[i];
      for (std::size_t i = 0; i < w.sin_coeffs.size(); ++i)
        dst.sin_coeffs[i] += scale * w.sin_coeffs[i];
      dst.mean += scale * w.mean;
      return;
    }
    if (const auto* sum = std::get_if<std::shared_ptr<const SumNode>>(&n.v)) {
      self(self, (*sum)->a, scale);
      self(self, (*sum)->b, scale);
      return;
    }
    const auto& sc = std::get<std::shared_ptr<const ScaledNode>>(n.v);
    self(self, sc->a, scale * sc->factor);
  };
  walk(walk, *this, 1.0);
  if (!ok) return std::nullopt;
  return parts;
}

double cr_norm(const Potential& w, int r) {
  if (r < 0) throw DomainError("cr_norm: r >= 0 required");
  constexpr int kGrid = 4096;
  double best = 0.0;
  for (int j = 0; j <= r; ++j) {
    for (int i = 0; i < kGrid; ++i) {
      const double val = std::fabs(w.derivative(static_cast<double>(i) / kGrid, j));
      if (val > best) best = val;
    }
  }
  return best;
}

}  // namespace suris
