#include "hopflab/constructor.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace hopflab::constructor {

std::string_view law_name(LawKind kind) noexcept {
  switch (kind) {
    case LawKind::Geodesic: return "geodesic";
    case LawKind::Cmc: return "cmc";
    case LawKind::LeviFlat: return "levi-flat";
    case LawKind::AusterePregeodesic: return "austere";
  }
  return "unknown";
}

std::optional<LawKind> parse_law(std::string_view name) noexcept {
  for (LawKind k : {LawKind::Geodesic, LawKind::Cmc, LawKind::LeviFlat, LawKind::AusterePregeodesic}) {
    if (law_name(k) == name) return k;
  }
  return std::nullopt;
}

double CurveLaw::evaluate(const actions::OrbitData& orbit) const {
  const double alpha = orbit.principal[0];
  const double beta = orbit.principal[1];
  const double a = orbit.hopf_components[0];
  const double b = orbit.hopf_components[1];
  switch (kind) {
    case LawKind::Cmc: return eta - alpha - beta;
    case LawKind::LeviFlat: return -b * b * alpha - a * a * beta;
    case LawKind::Geodesic:
    case LawKind::AusterePregeodesic: return 0.0;
  }
  return 0.0;
}

SigmaCurve::SigmaCurve(std::vector<SigmaSample> samples, double step, CurveLaw law)
    : samples_(std::move(samples)), step_(step), law_(law) {
  if (!(step_ > 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma step must be positive");
}

double SigmaCurve::t_min() const {
  if (samples_.empty()) throw Error(ErrorKind::InvalidArgument, "sigma has no samples");
  return samples_.front().t;
}

double SigmaCurve::t_max() const {
  if (samples_.empty()) throw Error(ErrorKind::InvalidArgument, "sigma has no samples");
  return samples_.back().t;
}

namespace {

struct HermiteWeights {
  std::array<double, 6> w;
};

// Quintic Hermite basis for (p0, h v0, h^2 a0, h^2 a1, h v1, p1) and its derivative.
HermiteWeights hermite(double s) {
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  return {{1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5, s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5,
           0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5, 0.5 * s3 - s4 + 0.5 * s5,
           -4.0 * s3 + 7.0 * s4 - 3.0 * s5, 10.0 * s3 - 15.0 * s4 + 6.0 * s5}};
}

HermiteWeights hermite_derivative(double s) {
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
  return {{-30.0 * s2 + 60.0 * s3 - 30.0 * s4, 1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4,
           s - 4.5 * s2 + 6.0 * s3 - 2.5 * s4, 1.5 * s2 - 4.0 * s3 + 2.5 * s4,
           -12.0 * s2 + 28.0 * s3 - 15.0 * s4, 30.0 * s2 - 60.0 * s3 + 30.0 * s4}};
}

}  // namespace

Vec3 SigmaCurve::position(double t) const {
  if (samples_.size() < 2) throw Error(ErrorKind::InvalidArgument, "sigma needs at least two samples");
  const double tol = 1e-9 * step_;
  if (t < t_min() - tol || t > t_max() + tol) {
    throw Error(ErrorKind::Domain, "parameter lies outside the integrated range of sigma");
  }
  const std::size_t last = samples_.size() - 2;
  const auto k = std::min<std::size_t>(last, static_cast<std::size_t>(std::max(0.0, std::floor((t - t_min()) / step_))));
  const SigmaSample& p = samples_[k];
  const SigmaSample& q = samples_[k + 1];
  const double h = q.t - p.t;
  const HermiteWeights w = hermite((t - p.t) / h);
  return w.w[0] * p.x + w.w[1] * h * p.v + w.w[2] * h * h * p.acceleration +
         w.w[3] * h * h * q.acceleration + w.w[4] * h * q.v + w.w[5] * q.x;
}

Vec3 SigmaCurve::velocity(double t) const {
  if (samples_.size() < 2) throw Error(ErrorKind::InvalidArgument, "sigma needs at least two samples");
  const double tol = 1e-9 * step_;
  if (t < t_min() - tol || t > t_max() + tol) {
    throw Error(ErrorKind::Domain, "parameter lies outside the integrated range of sigma");
  }
  const std::size_t last = samples_.size() - 2;
  const auto k = std::min<std::size_t>(last, static_cast<std::size_t>(std::max(0.0, std::floor((t - t_min()) / step_))));
  const SigmaSample& p = samples_[k];
  const SigmaSample& q = samples_[k + 1];
  const double h = q.t - p.t;
  const HermiteWeights w = hermite_derivative((t - p.t) / h);
  return (w.w[0] * p.x + w.w[1] * h * p.v + w.w[2] * h * h * p.acceleration +
          w.w[3] * h * h * q.acceleration + w.w[4] * h * q.v + w.w[5] * q.x) /
         h;
}

namespace {

struct State {
  Vec3 x, v;
};

// Projects (x, v) back to h(x,x) = kappa, h(x,v) = 0, h(v,v) = 1.
State renormalize(const ambient::SectionChart& chart, const State& s) {
  const auto& space = chart.space();
  State out;
  out.x = s.x * std::sqrt(space.kappa() / space.real_form(s.x, s.x));
  out.v = chart.model_tangent(out.x, s.v);
  out.v /= std::sqrt(space.real_form(out.v, out.v));
  return out;
}

actions::OrbitData orbit_at(const actions::PolarActionSpec& spec, const Vec3& x, const Vec3& v) {
  const auto& chart = spec.section;
  const State s = renormalize(chart, {x, v});
  const Vec3 xi = chart.rotate(s.x, s.v);
  const ambient::AmbientPoint p{spec.ambient.normalize(chart.lift(s.x))};
  return actions::orbit_shape_operator_fast(spec, p, chart.lift_tangent(s.x, xi));
}

}  // namespace

double law_curvature(const actions::PolarActionSpec& spec, const CurveLaw& law, const Vec3& x,
                     const Vec3& v) {
  if (law.kind == LawKind::Geodesic || law.kind == LawKind::AusterePregeodesic) return 0.0;
  return law.evaluate(orbit_at(spec, x, v));
}

namespace {

State derivative(const actions::PolarActionSpec& spec, const CurveLaw& law, const State& s) {
  const auto& chart = spec.section;
  const auto& space = chart.space();
  const double gamma = law_curvature(spec, law, s.x, s.v);
  return {s.v, -(space.real_form(s.v, s.v) / space.kappa()) * s.x + gamma * chart.rotate(s.x, s.v)};
}

State rk4_step(const actions::PolarActionSpec& spec, const CurveLaw& law, const State& s, double h) {
  auto axpy = [](const State& a, double t, const State& d) { return State{a.x + t * d.x, a.v + t * d.v}; };
  const State k1 = derivative(spec, law, s);
  const State k2 = derivative(spec, law, axpy(s, 0.5 * h, k1));
  const State k3 = derivative(spec, law, axpy(s, 0.5 * h, k2));
  const State k4 = derivative(spec, law, axpy(s, h, k3));
  return State{s.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
               s.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v)};
}

SigmaSample make_sample(const actions::PolarActionSpec& spec, const CurveLaw& law, double t,
                        const State& s) {
  const auto& chart = spec.section;
  const auto& space = chart.space();
  SigmaSample out;
  out.t = t;
  out.x = s.x;
  out.v = s.v;
  out.xi = chart.rotate(s.x, s.v);
  out.orbit = orbit_at(spec, s.x, s.v);
  out.curvature = law.evaluate(out.orbit);
  out.acceleration = -(space.real_form(s.v, s.v) / space.kappa()) * s.x + out.curvature * out.xi;
  return out;
}

}  // namespace

SigmaCurve integrate_sigma(const actions::PolarActionSpec& spec, const Vec3& x0, const Vec3& w0,
                           const CurveLaw& law, double step, int n_forward, int n_backward) {
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "integration step must be positive");
  if (n_forward < 0 || n_backward < 0) throw Error(ErrorKind::InvalidArgument, "step counts must be non-negative");
  const auto& chart = spec.section;
  const auto& space = chart.space();
  const double q = space.real_form(x0, x0);
  if (!(q * space.kappa() > 0.0) || std::abs(q - space.kappa()) > 1e-6 * std::abs(space.kappa())) {
    throw Error(ErrorKind::InvalidArgument, "initial point is not on the section model");
  }
  if (std::abs(space.real_form(x0, w0)) > 1e-8 || std::abs(space.real_form(w0, w0) - 1.0) > 1e-8) {
    throw Error(ErrorKind::InvalidArgument, "initial direction must be a unit tangent vector");
  }
  if (!actions::is_regular_model(spec, x0)) {
    throw Error(ErrorKind::SingularOrbit, "initial point lies on a singular orbit");
  }

  const State start = renormalize(chart, {x0, w0});
  bool truncated = false;
  std::string reason;
  auto run = [&](double h, int n) {
    std::vector<SigmaSample> out;
    State s = start;
    for (int k = 1; k <= n; ++k) {
      try {
        s = renormalize(chart, rk4_step(spec, law, s, h));
        if (!actions::is_regular_model(spec, s.x)) throw Error(ErrorKind::SingularOrbit, "singular orbit");
        out.push_back(make_sample(spec, law, k * h, s));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularOrbit && e.kind() != ErrorKind::Domain) throw;
        truncated = true;
        reason = "curve reached a singular orbit at t = " + std::to_string(k * h);
        break;
      }
    }
    return out;
  };
  std::vector<SigmaSample> backward = run(-step, n_backward);
  std::vector<SigmaSample> forward = run(step, n_forward);
  if ((n_forward > 0 || n_backward > 0) && forward.empty() && backward.empty()) {
    throw Error(ErrorKind::SingularOrbit, "curve leaves the regular set immediately");
  }

  std::vector<SigmaSample> samples;
  samples.reserve(backward.size() + forward.size() + 1);
  for (auto it = backward.rbegin(); it != backward.rend(); ++it) samples.push_back(*it);
  samples.push_back(make_sample(spec, law, 0.0, start));
  for (auto& s : forward) samples.push_back(std::move(s));

  SigmaCurve curve(std::move(samples), step, law);
  curve.truncated = truncated;
  curve.truncation_reason = reason;
  return curve;
}

Launch make_launch(const actions::PolarActionSpec& spec, const std::optional<Vec2>& chart,
                   std::optional<double> angle) {
  Launch launch;
  const double r = spec.ambient.radius();
  launch.chart = chart ? *chart : Vec2(kDefaultLaunchU * r, kDefaultLaunchV * r);
  launch.point = spec.section.model_point(launch.chart);
  if (!actions::is_regular_model(spec, launch.point)) {
    throw Error(ErrorKind::SingularOrbit, "launch point lies on a singular orbit");
  }
  if (angle) {
    if (!std::isfinite(*angle)) throw Error(ErrorKind::InvalidArgument, "launch angle must be finite");
    launch.angle = *angle;
  } else {
    const actions::HopfDirectionScan scan = actions::scan_hopf_directions(spec, launch.point, 720, 1e-12);
    std::size_t best = 0;
    for (std::size_t k = 1; k < scan.profile.size(); ++k) {
      if (std::abs(scan.profile[k]) > std::abs(scan.profile[best])) best = k;
    }
    launch.angle = scan.angles[best];
  }
  const auto frame = spec.section.tangent_frame(launch.point);
  launch.direction = std::cos(launch.angle) * frame[0] + std::sin(launch.angle) * frame[1];
  return launch;
}

}  // namespace hopflab::constructor
