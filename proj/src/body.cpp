#include "mi_ellipse/body.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "mi_ellipse/error.hpp"
#include "mi_ellipse/kernels.hpp"
#include "quadrature.hpp"

namespace mie {

struct ConvexBody::Source {
  Kind kind = Kind::Polygon;

  // Polygon: vertices sorted by polar angle; edge k joins vertex k and k+1.
  std::vector<Vec2> vertices;
  std::vector<double> vertex_angles;
  std::vector<Vec2> edge_normals;
  std::vector<double> edge_offsets;

  EvenQuartic polynomial;

  // Radial samples of G on [0, pi) and Fritsch-Carlson slopes.
  std::vector<double> samples;
  std::vector<double> slopes;

  double area = 0.0;

  // t^2 such that t * w lies on the source boundary.
  double scaled_radial(const Vec2& w) const;

  double sample_interp(double psi) const;
};

namespace {

double polar_angle(const Vec2& v) { return wrap(std::atan2(v.y(), v.x()), kTwoPi); }

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

std::vector<double> pchip_periodic_slopes(const std::vector<double>& y, double h) {
  const std::size_t n = y.size();
  std::vector<double> d(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double left = (y[k] - y[(k + n - 1) % n]) / h;
    const double right = (y[(k + 1) % n] - y[k]) / h;
    if (left * right > 0.0) d[k] = 2.0 / (1.0 / left + 1.0 / right);
  }
  return d;
}

}  // namespace

double ConvexBody::Source::sample_interp(double psi) const {
  const std::size_t n = samples.size();
  const double h = kPi / static_cast<double>(n);
  const double x = wrap(psi, kPi) / h;
  std::size_t k = static_cast<std::size_t>(x);
  if (k >= n) k = n - 1;
  const double s = x - static_cast<double>(k);
  const std::size_t k1 = (k + 1) % n;
  const double y0 = samples[k], y1 = samples[k1];
  const double m0 = slopes[k] * h, m1 = slopes[k1] * h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * y1 +
         (s3 - s2) * m1;
}

constexpr double kMinRootDenominator = 2e-12;

double ConvexBody::Source::scaled_radial(const Vec2& w) const {
  switch (kind) {
    case Kind::Polygon: {
      const double psi = polar_angle(w);
      auto it = std::upper_bound(vertex_angles.begin(), vertex_angles.end(), psi);
      const std::size_t k = it == vertex_angles.begin()
                                ? vertices.size() - 1
                                : static_cast<std::size_t>(it - vertex_angles.begin()) - 1;
      const double t = edge_offsets[k] / edge_normals[k].dot(w);
      return t * t;
    }
    case Kind::Implicit: {
      const double q2 = polynomial.quadratic(w.x(), w.y());
      const double q4 = polynomial.quartic(w.x(), w.y());
      const double disc = q2 * q2 + 4.0 * q4;
      const double den = disc >= 0.0 ? q2 + std::sqrt(disc) : -1.0;
      // r <= 1e6 along every ray, as with a bracketed search.
      if (!(den > kMinRootDenominator)) {
        std::ostringstream msg;
        msg << "no bounded level-set crossing along direction angle " << polar_angle(w);
        throw Error(Errc::RayRootNotFound, msg.str());
      }
      return 2.0 / den;
    }
    case Kind::Radial:
      return sample_interp(std::atan2(w.y(), w.x())) / w.squaredNorm();
  }
  return 0.0;
}

ConvexBody::ConvexBody(std::shared_ptr<const Source> src, const Mat2& frame, int grid_size)
    : src_(std::move(src)), frame_(frame), inverse_frame_(frame.inverse()) {
  area_ = src_->area * frame_.determinant();
  grid_.resize(static_cast<std::size_t>(grid_size));
  for (int k = 0; k < grid_size; ++k) {
    grid_[static_cast<std::size_t>(k)] = radial(kPi * k / grid_size);
  }
}

ConvexBody::Kind ConvexBody::kind() const { return src_->kind; }

double ConvexBody::radial(double theta) const {
  const Vec2 w = inverse_frame_ * unit(wrap(theta, kPi));
  return src_->scaled_radial(w);
}

Vec2 ConvexBody::boundary_point(double theta) const {
  return std::sqrt(radial(theta)) * unit(theta);
}

std::span<const Vec2> ConvexBody::source_vertices() const {
  if (src_->kind != Kind::Polygon) throw Error(Errc::InvalidInput, "body is not a polygon");
  return src_->vertices;
}

const EvenQuartic& ConvexBody::source_polynomial() const {
  if (src_->kind != Kind::Implicit) throw Error(Errc::InvalidInput, "body is not implicit");
  return src_->polynomial;
}

std::span<const double> ConvexBody::source_samples() const {
  if (src_->kind != Kind::Radial) throw Error(Errc::InvalidInput, "body is not radial-sampled");
  return src_->samples;
}

std::vector<Vec2> ConvexBody::vertices() const {
  std::vector<Vec2> out;
  for (const Vec2& v : source_vertices()) out.push_back(frame_ * v);
  return out;
}

double ConvexBody::max_radius() const {
  return std::sqrt(*std::max_element(grid_.begin(), grid_.end()));
}

double ConvexBody::min_radius() const {
  return std::sqrt(*std::min_element(grid_.begin(), grid_.end()));
}

std::vector<double> ConvexBody::kinks() const {
  std::vector<double> out;
  if (src_->kind == Kind::Polygon) {
    for (const Vec2& v : src_->vertices) out.push_back(wrap(polar_angle(frame_ * v), kPi));
  } else if (src_->kind == Kind::Radial) {
    const std::size_t n = src_->samples.size();
    for (std::size_t k = 0; k < n; ++k) {
      out.push_back(wrap(polar_angle(frame_ * unit(kPi * static_cast<double>(k) / n)), kPi));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ConvexBody ConvexBody::linear_image(const Mat2& m) const {
  return linear_image(m, static_cast<int>(grid_.size()));
}

ConvexBody ConvexBody::linear_image(const Mat2& m, int grid_size) const {
  if (grid_size < 1) throw Error(Errc::InvalidInput, "grid size must be positive");
  if (!(m.determinant() > 0.0)) {
    throw Error(Errc::InvalidInput, "linear image requires a positive determinant");
  }
  return ConvexBody(src_, m * frame_, grid_size);
}

double shoelace_area(std::span<const Vec2> v) {
  double a = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) a += cross(v[k], v[(k + 1) % v.size()]);
  return 0.5 * a;
}

double radial_area(const ConvexBody& body) {
  const std::vector<double> kinks = body.kinks();
  return detail::integrate_split([&](double t) { return body.radial(t); }, 0.0, kPi, kinks);
}

ConvexBody body_from_polygon(std::vector<Vec2> vertices, double tol) {
  const std::size_t n = vertices.size();
  if (n < 4) throw Error(Errc::TooFewVertices, "a centrally symmetric polygon needs >= 4 vertices");
  if (n % 2 != 0) throw Error(Errc::NotCentrallySymmetric, "odd vertex count");
  double scale = 0.0;
  for (const Vec2& v : vertices) scale = std::max(scale, v.norm());
  if (!(scale > 0.0)) throw Error(Errc::NotConvex, "degenerate polygon");
  const std::size_t m = n / 2;
  for (std::size_t k = 0; k < m; ++k) {
    if ((vertices[k] + vertices[k + m]).norm() > tol * std::max(1.0, scale)) {
      throw Error(Errc::NotCentrallySymmetric, "vertex list violates v[k + m] = -v[k]");
    }
  }
  if (shoelace_area(vertices) <= 0.0) {
    throw Error(Errc::NotConvex, "vertices must be listed counterclockwise");
  }
  double turning = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 e0 = vertices[(k + 1) % n] - vertices[k];
    const Vec2 e1 = vertices[(k + 2) % n] - vertices[(k + 1) % n];
    if (e0.norm() <= tol * scale) throw Error(Errc::NotConvex, "repeated vertex");
    if (cross(e0, e1) < -tol * scale * scale) throw Error(Errc::NotConvex, "reflex vertex");
    turning += std::atan2(cross(e0, e1), e0.dot(e1));
  }
  if (std::abs(turning - kTwoPi) > 1e-6) throw Error(Errc::NotConvex, "polygon winds more than once");

  auto src = std::make_shared<ConvexBody::Source>();
  src->kind = ConvexBody::Kind::Polygon;
  // Rotate so polar angles ascend from the smallest.
  std::vector<double> angles(n);
  for (std::size_t k = 0; k < n; ++k) angles[k] = polar_angle(vertices[k]);
  const auto first = static_cast<std::size_t>(std::min_element(angles.begin(), angles.end()) -
                                              angles.begin());
  std::rotate(vertices.begin(), vertices.begin() + static_cast<std::ptrdiff_t>(first), vertices.end());
  std::rotate(angles.begin(), angles.begin() + static_cast<std::ptrdiff_t>(first), angles.end());
  if (!std::is_sorted(angles.begin(), angles.end())) {
    throw Error(Errc::NotConvex, "origin is not interior to the polygon");
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 e = vertices[(k + 1) % n] - vertices[k];
    Vec2 normal(e.y(), -e.x());
    normal.normalize();
    const double h = normal.dot(vertices[k]);
    if (!(h > 0.0)) throw Error(Errc::NotConvex, "origin is not interior to the polygon");
    src->edge_normals.push_back(normal);
    src->edge_offsets.push_back(h);
  }
  src->vertices = std::move(vertices);
  src->vertex_angles = std::move(angles);
  src->area = shoelace_area(src->vertices);
  return ConvexBody(src, Mat2::Identity(), ConvexBody::kDefaultGrid);
}

namespace {

void require_convex(const ConvexBody& body) {
  const double slack = convexity_slack(body);
  if (slack < -1e-9) {
    std::ostringstream msg;
    msg << "support-line test fails with slack " << slack;
    throw Error(Errc::NotConvex, msg.str());
  }
}

}  // namespace

ConvexBody body_from_implicit(const EvenQuartic& p, int resolution) {
  if (resolution < 16) throw Error(Errc::InvalidInput, "resolution must be >= 16");
  auto src = std::make_shared<ConvexBody::Source>();
  src->kind = ConvexBody::Kind::Implicit;
  src->polynomial = p;
  ConvexBody probe(src, Mat2::Identity(), resolution);
  src->area = radial_area(probe);
  ConvexBody body(src, Mat2::Identity(), resolution);
  require_convex(body);
  return body;
}

ConvexBody body_from_radial_samples(std::vector<double> samples, int resolution) {
  if (samples.size() < 8) throw Error(Errc::InvalidInput, "need at least 8 radial samples");
  for (double g : samples) {
    if (!(g > 0.0) || !std::isfinite(g)) throw Error(Errc::InvalidInput, "radial samples must be > 0");
  }
  auto src = std::make_shared<ConvexBody::Source>();
  src->kind = ConvexBody::Kind::Radial;
  src->slopes = pchip_periodic_slopes(samples, kPi / static_cast<double>(samples.size()));
  src->samples = std::move(samples);
  ConvexBody probe(src, Mat2::Identity(), resolution);
  src->area = radial_area(probe);
  ConvexBody body(src, Mat2::Identity(), resolution);
  require_convex(body);
  return body;
}

ConvexBody apply_unimodular(const ConvexBody& body, const Mat2& l) {
  if (std::abs(l.determinant() - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "det L = " << l.determinant();
    throw Error(Errc::NotUnimodular, msg.str());
  }
  return body.linear_image(l);
}

Mat2 general_position_map(double magnitude, std::uint64_t seed) {
  if (magnitude == 0.0) return Mat2::Identity();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-magnitude, magnitude);
  const double a = u(rng), b = u(rng), c = u(rng);
  Mat2 x;
  x << a, b, c, -a;
  Mat2 l = exp_traceless(x);
  return l / std::sqrt(l.determinant());
}

ConvexBody perturb_general_position(const ConvexBody& body, double magnitude, std::uint64_t seed) {
  return apply_unimodular(body, general_position_map(magnitude, seed));
}

double convexity_slack(const ConvexBody& body, int samples) {
  const int count = 2 * samples;
  std::vector<double> xs(static_cast<std::size_t>(count)), ys(xs.size());
  std::vector<Vec2> normals(xs.size());
  const double h = 1e-6;
  double scale = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double theta = kPi * (i + 0.5) / samples;
    const double g = body.radial(theta);
    const double dg = (body.radial(theta + h) - body.radial(theta - h)) / (2.0 * h);
    const double r = std::sqrt(g);
    const Vec2 u = unit(theta);
    const Vec2 tangent = (dg / (2.0 * r)) * u + r * Vec2(-u.y(), u.x());
    const Vec2 n = Vec2(tangent.y(), -tangent.x()).normalized();
    const auto a = static_cast<std::size_t>(i);
    const auto b = static_cast<std::size_t>(i + samples);
    xs[a] = r * u.x();
    ys[a] = r * u.y();
    xs[b] = -xs[a];
    ys[b] = -ys[a];
    normals[a] = n;
    normals[b] = -n;
    scale = std::max(scale, r);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double support = kernels::max_dot(xs, ys, normals[i].x(), normals[i].y());
    const double own = normals[i].x() * xs[i] + normals[i].y() * ys[i];
    worst = std::min(worst, own - support);
  }
  return worst / scale;
}

}  // namespace mie
