#include "mi_ellipse/variation.hpp"

#include <cmath>
#include <sstream>

#include "mi_ellipse/error.hpp"

namespace mie {

namespace {

constexpr double kMinAngle = 1e-6;

void require_transverse(const CrossingSet& cs) {
  if (!cs.touchings.empty()) {
    std::ostringstream msg;
    msg << "boundary touches the circle at theta = " << cs.touchings.front();
    throw Error(Errc::TangencyPresent, msg.str());
  }
  if (cs.empty()) throw Error(Errc::NoCrossings, "boundary does not cross the circle");
  for (const Crossing& c : cs.crossings) {
    if (c.tangency) {
      std::ostringstream msg;
      msg << "tangency at xi = " << c.xi;
      throw Error(Errc::TangencyPresent, msg.str());
    }
  }
}

// (-1)^j for the 1-based index j of vector position k.
double sign_of(std::size_t k) { return k % 2 == 0 ? -1.0 : 1.0; }

}  // namespace

double deriv1(const CrossingSet& cs) {
  require_transverse(cs);
  const std::size_t half = cs.crossings.size() / 2;
  double s = 0.0;
  for (std::size_t k = 0; k < half; ++k) s += sign_of(k) * std::sin(2.0 * cs.crossings[k].xi);
  return 0.5 * s;
}

double deriv1_pairs(const IntersectionProfile& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.sigma.size(); ++i) s += std::sin(p.omega[i]) * std::cos(p.sigma[i]);
  return s;
}

double deriv2(const CrossingSet& cs) {
  // A vanishing angle is also below the tangency threshold; report it first.
  for (const Crossing& c : cs.crossings) {
    if (!(c.alpha >= kMinAngle)) {
      std::ostringstream msg;
      msg << "crossing angle " << c.alpha << " at xi = " << c.xi;
      throw Error(Errc::DegenerateAngle, msg.str());
    }
  }
  require_transverse(cs);
  const std::size_t half = cs.crossings.size() / 2;
  double s = 0.0;
  for (std::size_t k = 0; k < half; ++k) {
    const Crossing& c = cs.crossings[k];
    s += sign_of(k) * std::sin(4.0 * c.xi) + (1.0 + std::cos(4.0 * c.xi)) / std::tan(c.alpha);
  }
  return -0.25 * s;
}

double deriv1_rotated(const CrossingSet& cs, double phi) {
  const std::complex<double> d = residual_d(cs) * std::polar(1.0, 2.0 * phi);
  return -0.25 * d.imag();
}

double deriv2_rotated(const CrossingSet& cs, double phi) { return deriv2(cs.rotated(phi)); }

IntersectionProfile make_profile(const CrossingSet& cs) {
  IntersectionProfile p;
  p.D = residual_d(cs);
  for (int i = 0; i < cs.n; ++i) {
    const double a = cs.crossings[static_cast<std::size_t>(2 * i)].xi;
    const double b = cs.crossings[static_cast<std::size_t>(2 * i + 1)].xi;
    p.sigma.push_back(b + a);
    p.omega.push_back(b - a);
  }
  return p;
}

double f_gap(double omega) {
  if (!(omega > 0.0 && omega < kPi)) {
    std::ostringstream msg;
    msg << "omega = " << omega << " outside (0, pi)";
    throw Error(Errc::DomainError, msg.str());
  }
  return 1.0 / std::tan(0.5 * omega) - std::sin(omega);
}

double g_form(double omega, double sigma) {
  const double s = std::sin(sigma), c = std::cos(sigma);
  return std::sin(omega) * s * s + f_gap(omega) * c * c;
}

double deriv2_lower_bound(const IntersectionProfile& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.sigma.size(); ++i) s += g_form(p.omega[i], p.sigma[i]);
  return s;
}

std::complex<double> residual_d(const CrossingSet& cs) {
  require_transverse(cs);
  std::complex<double> d = 0.0;
  for (std::size_t k = 0; k < cs.crossings.size(); ++k) {
    const std::complex<double> z2 = std::polar(1.0, 2.0 * cs.crossings[k].xi);
    d += k % 2 == 0 ? z2 : -z2;
  }
  return d;
}

KeyCertificate key_certificate(const CrossingSet& cs, double area, double body_area, double eps) {
  KeyCertificate k;
  k.d1 = deriv1(cs);
  k.d2 = deriv2(cs);
  k.bound = deriv2_lower_bound(make_profile(cs));
  k.hypothesis_ok = eps <= area && area <= std::min(kPi, body_area) - eps;
  k.positive = std::max(std::abs(k.d1), -k.d2) > 0.0;
  return k;
}

}  // namespace mie
