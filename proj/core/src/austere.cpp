#include "hopflab/constructor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace hopflab::constructor {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr int kBisections = 40;
// |kappa_H| accepted at a bracketed root; larger values mark poles.
constexpr double kRootTol = 1e-6;
constexpr double kNodeZeroTol = 1e-10;
constexpr double kLineTol = 1e-4;
constexpr double kFamilyTol = 1e-6;

struct MeanDirection {
  Vec3 unit;
  double norm = 0.0;
};

class Searcher {
 public:
  Searcher(const actions::PolarActionSpec& spec, const AustereSearchOptions& options)
      : spec_(spec), chart_(spec.section), space_(spec.ambient), options_(options) {}

  std::optional<MeanDirection> mean_direction(const Vec3& x) const {
    if (!actions::is_regular_model(spec_, x)) return std::nullopt;
    const Vec3 h = actions::mean_curvature_model(spec_, x);
    const double n = std::sqrt(std::max(0.0, space_.real_form(h, h)));
    if (!(n > options_.mean_zero_tol)) return MeanDirection{Vec3::Zero(), n};
    return MeanDirection{h / n, n};
  }

  // Geodesic curvature of the integral curve of the unit mean curvature
  // direction through x; zero exactly when that curve is a geodesic.
  double flow_curvature(const Vec3& x) const {
    const auto h = mean_direction(x);
    if (!h || h->norm <= options_.mean_zero_tol) return kNan;
    const double e = 1e-4 * space_.radius();
    const auto hp = mean_direction(chart_.model_exp(x, h->unit, e));
    const auto hm = mean_direction(chart_.model_exp(x, h->unit, -e));
    if (!hp || !hm || hp->norm <= options_.mean_zero_tol || hm->norm <= options_.mean_zero_tol) return kNan;
    const Vec3 d = (hp->unit - hm->unit) / (2.0 * e);
    return space_.real_form(d, chart_.rotate(x, h->unit));
  }

  // max |<H, xi>| / |H| along the geodesic through x with unit velocity v.
  double alignment_residual(const Vec3& x, const Vec3& v) const {
    const double half = options_.line_half_length * space_.radius();
    const int n = std::max(2, options_.line_samples);
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
      const double s = -half + 2.0 * half * k / (n - 1);
      const Vec3 y = chart_.model_exp(x, v, s);
      Vec3 w = chart_.model_exp_velocity(x, v, s);
      w /= std::sqrt(space_.real_form(w, w));
      const auto h = mean_direction(y);
      if (!h || h->norm <= options_.mean_zero_tol) continue;
      worst = std::max(worst, std::abs(space_.real_form(h->unit, chart_.rotate(y, w))));
    }
    return worst;
  }

  // Normal of the plane through the origin containing the geodesic, with a
  // canonical sign.
  Vec3 line_normal(const Vec3& x, const Vec3& v) const {
    Vec3 n = space_.signature().cwiseProduct(x.cross(v));
    n /= std::sqrt(std::abs(space_.real_form(n, n)));
    int k = 0;
    n.cwiseAbs().maxCoeff(&k);
    return n[k] < 0.0 ? Vec3(-n) : n;
  }

  // Distance from the chart origin to the geodesic with the given normal.
  double distance_from_origin(const Vec3& normal) const {
    const Vec3 o = chart_.model_point(Vec2::Zero());
    Vec3 foot = o - (space_.real_form(o, normal) / space_.real_form(normal, normal)) * normal;
    const double q = space_.real_form(foot, foot);
    if (!(q * space_.kappa() > 0.0)) return std::numeric_limits<double>::infinity();
    foot *= std::sqrt(space_.kappa() / q);
    return chart_.model_distance(o, foot);
  }

  // Fixed point e_k of the action lying on the geodesic, or -1.
  int vertex(const Vec3& normal) const {
    const Vec3 sig = space_.signature();
    for (int k = 0; k < 3; ++k) {
      if (sig[k] * space_.kappa() <= 0.0) continue;
      if (std::abs(normal[k]) > 1e-6) continue;
      const Vec3 e = Vec3::Unit(k) * std::sqrt(space_.kappa() / sig[k]);
      const CVec3 z = chart_.lift(e);
      bool fixed = true;
      for (const CMat3& g : spec_.generators) {
        if (space_.horizontal(z, g * z).norm() > 1e-9) fixed = false;
      }
      if (fixed) return k;
    }
    return -1;
  }

  std::string family(double alpha) const {
    if (space_.projective()) return "clifford_cone";
    const double threshold = std::sqrt(-space_.c()) / 2.0;
    if (alpha > threshold + kFamilyTol) return "clifford_cone";
    if (alpha >= threshold - kFamilyTol) return "lohnherr";
    return "bisector";
  }

  // Integrates the geodesic through the most regular point of the segment
  // around x in direction v.
  SigmaCurve representative(const Vec3& x, const Vec3& v) const {
    const double half = options_.line_half_length * space_.radius();
    const int n = std::max(2, options_.line_samples);
    double best = -1.0;
    Vec3 start = x, velocity = v;
    for (int k = 0; k < n; ++k) {
      const double s = -half + 2.0 * half * k / (n - 1);
      const Vec3 y = chart_.model_exp(x, v, s);
      const double det = actions::killing_gram(spec_, ambient::AmbientPoint{space_.normalize(chart_.lift(y))})
                             .determinant();
      if (det > best) {
        best = det;
        start = y;
        velocity = chart_.model_exp_velocity(x, v, s);
      }
    }
    start *= std::sqrt(space_.kappa() / space_.real_form(start, start));
    velocity = chart_.model_tangent(start, velocity);
    velocity /= std::sqrt(space_.real_form(velocity, velocity));
    return integrate_sigma(spec_, start, velocity, CurveLaw::austere_pregeodesic(), options_.curve_step,
                           options_.curve_steps, options_.curve_steps);
  }

  const ambient::SectionChart& chart() const { return chart_; }
  const ambient::SpaceForm& space() const { return space_; }

 private:
  const actions::PolarActionSpec& spec_;
  const ambient::SectionChart& chart_;
  const ambient::SpaceForm& space_;
  AustereSearchOptions options_;
};

struct Line {
  Vec3 point, direction, normal;
  double residual = 0.0;
};

}  // namespace

AustereSearchResult austere_search(const actions::PolarActionSpec& spec, const AustereSearchOptions& options) {
  if (options.grid < 2) throw Error(ErrorKind::InvalidArgument, "austere search grid is empty");
  if (!(options.curve_step > 0.0) || options.curve_steps < 1) {
    throw Error(ErrorKind::InvalidArgument, "curve step and step count must be positive");
  }
  const Searcher search(spec, options);
  const auto& space = search.space();
  const auto& chart = search.chart();
  const double r = space.radius();
  const double extent = (options.extent > 0.0 ? options.extent : (space.projective() ? 1.2 : 1.5)) * r;
  const int n = options.grid;

  auto coordinate = [&](int i) { return -extent + 2.0 * extent * i / (n - 1); };
  auto model = [&](const Vec2& u) { return chart.model_point(u); };

  std::vector<double> curvature(static_cast<std::size_t>(n) * n, kNan);
  std::vector<char> vanishing(static_cast<std::size_t>(n) * n, 0);
  auto at = [&](int i, int j) -> std::size_t { return static_cast<std::size_t>(i) * n + j; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec3 x = model(Vec2(coordinate(i), coordinate(j)));
      const auto h = search.mean_direction(x);
      if (!h) continue;
      if (h->norm <= options.mean_zero_tol) {
        vanishing[at(i, j)] = 1;
        continue;
      }
      curvature[at(i, j)] = search.flow_curvature(x);
    }
  }

  // Candidate points where the mean curvature direction field has a
  // geodesic integral curve.
  std::vector<Vec2> roots;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double k0 = curvature[at(i, j)];
      if (!std::isfinite(k0)) continue;
      if (std::abs(k0) < kNodeZeroTol) {
        roots.emplace_back(coordinate(i), coordinate(j));
        continue;
      }
      for (const auto& [di, dj] : {std::pair{1, 0}, std::pair{0, 1}}) {
        if (i + di >= n || j + dj >= n) continue;
        const double k1 = curvature[at(i + di, j + dj)];
        if (!std::isfinite(k1) || std::abs(k1) < kNodeZeroTol || k0 * k1 > 0.0) continue;
        Vec2 pa(coordinate(i), coordinate(j)), pb(coordinate(i + di), coordinate(j + dj));
        double fa = k0;
        Vec2 pm = 0.5 * (pa + pb);
        double fm = kNan;
        bool ok = true;
        for (int it = 0; it < kBisections; ++it) {
          pm = 0.5 * (pa + pb);
          fm = search.flow_curvature(model(pm));
          if (!std::isfinite(fm)) {
            ok = false;
            break;
          }
          if (fm * fa < 0.0) {
            pb = pm;
          } else {
            pa = pm;
            fa = fm;
          }
        }
        if (ok && std::abs(fm) < kRootTol) roots.push_back(pm);
      }
    }
  }

  std::vector<Line> lines;
  auto add_line = [&](const Vec3& x, const Vec3& v, double residual) {
    const Vec3 normal = search.line_normal(x, v);
    for (const Line& l : lines) {
      if ((l.normal - normal).cwiseAbs().maxCoeff() < kLineTol) return;
    }
    lines.push_back({x, v, normal, residual});
  };
  for (const Vec2& u : roots) {
    const Vec3 x = model(u);
    const auto h = search.mean_direction(x);
    if (!h || h->norm <= options.mean_zero_tol) continue;
    const double residual = search.alignment_residual(x, h->unit);
    if (residual < options.alignment_tol) add_line(x, h->unit, residual);
  }

  // Where H vanishes on an open set the alignment condition is empty: every
  // geodesic is a candidate, filtered by the balance a = b.
  AustereSearchResult result;
  for (int i = 1; i + 1 < n && !result.zero_locus; ++i) {
    for (int j = 1; j + 1 < n; ++j) {
      if (vanishing[at(i, j)] && vanishing[at(i + 1, j)] && vanishing[at(i - 1, j)] &&
          vanishing[at(i, j + 1)] && vanishing[at(i, j - 1)]) {
        result.zero_locus = true;
        const Vec3 x = model(Vec2(coordinate(i), coordinate(j)));
        const auto frame = chart.tangent_frame(x);
        for (int k = 0; k < 8; ++k) {
          const double theta = M_PI * k / 8.0;
          const Vec3 v = std::cos(theta) * frame[0] + std::sin(theta) * frame[1];
          const double residual = search.alignment_residual(x, v);
          if (residual >= options.alignment_tol) continue;
          const Vec3 xi = chart.rotate(x, v);
          const ambient::AmbientPoint p{space.normalize(chart.lift(x))};
          const actions::OrbitData o = actions::orbit_shape_operator_fast(spec, p, chart.lift_tangent(x, xi));
          if (std::abs(o.hopf_components[0] - o.hopf_components[1]) < 1e-6) add_line(x, v, residual);
        }
        break;
      }
    }
  }
  result.lines_found = static_cast<int>(lines.size());

  // One representative per family: the line closest to the chart origin.
  struct Candidate {
    double distance;
    AustereCurve curve;
  };
  std::map<std::string, Candidate> best;
  for (const Line& line : lines) {
    SigmaCurve sigma;
    try {
      sigma = search.representative(line.point, line.direction);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::SingularOrbit) continue;
      throw;
    }
    const SigmaSample* origin = nullptr;
    for (const SigmaSample& s : sigma.samples()) {
      if (s.t == 0.0) origin = &s;
    }
    const double alpha = origin->orbit.principal[0];
    const std::string family = search.family(alpha);
    ++result.family_counts[family];
    const double d = search.distance_from_origin(line.normal);
    auto it = best.find(family);
    if (it == best.end() || d < it->second.distance - 1e-12) {
      best[family] = {d, AustereCurve{family, std::move(sigma), line.normal, line.residual, alpha,
                                      search.vertex(line.normal)}};
    }
  }
  for (auto& [family, candidate] : best) result.curves.push_back(std::move(candidate.curve));
  return result;
}

}  // namespace hopflab::constructor
