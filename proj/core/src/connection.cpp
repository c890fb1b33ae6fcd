#include "hopflab/hypersurface.hpp"

#include <algorithm>
#include <cmath>

namespace hopflab::hypersurface {

namespace {

constexpr int kU = FrameJet::kU;
constexpr int kV = FrameJet::kV;
constexpr int kA = FrameJet::kAField;
constexpr const char* kFieldNames[3] = {"U", "V", "A"};

// Connection in the adapted frame: entries[x][y][z] = <nabla_X Y, Z>.
using ConnectionTable = std::array<std::array<Vec3, 3>, 3>;

ConnectionTable numeric_connection(const FrameJet& jet) {
  ConnectionTable t;
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 3; ++y) {
      const Vec3 n = jet.connection(x, y);
      for (int z = 0; z < 3; ++z) t[x][y][z] = jet.inner(n, jet.coefficients(z));
    }
  }
  return t;
}

class Collector {
 public:
  explicit Collector(ResidualReport& report) : report_(report) {}
  void add(std::string name, double numeric, double expected) {
    const double residual = std::abs(numeric - expected) / std::max(1.0, std::abs(expected));
    report_.max_residual = std::max(report_.max_residual, residual);
    report_.entries.push_back({std::move(name), numeric, expected, residual});
  }
  void add_table(const ConnectionTable& numeric, const ConnectionTable& expected) {
    for (int x = 0; x < 3; ++x) {
      for (int y = 0; y < 3; ++y) {
        for (int z = 0; z < 3; ++z) {
          add(std::string("<nabla_") + kFieldNames[x] + " " + kFieldNames[y] + ", " + kFieldNames[z] + ">",
              numeric[x][y][z], expected[x][y][z]);
        }
      }
    }
  }

 private:
  ResidualReport& report_;
};

struct FrameValues {
  double a, b, alpha, beta, gamma, c;
};

ConnectionTable zero_table() {
  ConnectionTable t;
  for (auto& row : t) {
    for (auto& v : row) v = Vec3::Zero();
  }
  return t;
}

// Closed forms for a hypersurface with h = 2 and three distinct principal
// curvatures; derivatives of the frame functions enter as data.
ConnectionTable generic_table(const FrameValues& f, const FrameJet& jet) {
  const double a = f.a, b = f.b, al = f.alpha, be = f.beta, ga = f.gamma, c = f.c;
  const double v_alpha = jet.derivative(FrameJet::kAlpha, kV);
  const double u_beta = jet.derivative(FrameJet::kBeta, kU);
  const double a_alpha = jet.derivative(FrameJet::kAlpha, kA);
  const double a_beta = jet.derivative(FrameJet::kBeta, kA);
  const double u_gamma = jet.derivative(FrameJet::kGamma, kU);
  const double v_gamma = jet.derivative(FrameJet::kGamma, kV);
  const double a_b = jet.derivative(FrameJet::kB, kA);

  const double uu_a = -(3.0 * a * b * c - 4.0 * a_alpha) / (4.0 * (al - ga));
  const double uv_a = al + (3.0 * a * a * b * c - 4.0 * a * a_alpha) / (4.0 * b * (al - ga));
  const double vv_a = (3.0 * a * b * c + 4.0 * a_beta) / (4.0 * (be - ga));
  const double vu_a = -(be + (3.0 * a * b * b * c + 4.0 * b * a_beta) / (4.0 * a * (be - ga)));
  const double au_v = ga - a_b / a;

  ConnectionTable t = zero_table();
  t[kU][kU] = Vec3(0.0, v_alpha / (al - be), uu_a);
  t[kU][kV] = Vec3(-v_alpha / (al - be), 0.0, uv_a);
  t[kV][kV] = Vec3(-u_beta / (al - be), 0.0, vv_a);
  t[kV][kU] = Vec3(0.0, u_beta / (al - be), vu_a);
  t[kA][kU] = Vec3(0.0, au_v, u_gamma / (al - ga));
  t[kU][kA] = Vec3(-uu_a, -uv_a, 0.0);
  t[kA][kV] = Vec3(-au_v, 0.0, v_gamma / (be - ga));
  t[kV][kA] = Vec3(-vu_a, -vv_a, 0.0);
  t[kA][kA] = Vec3(-u_gamma / (al - ga), -v_gamma / (be - ga), 0.0);
  return t;
}

// Closed forms for a strongly 2-Hopf hypersurface (no derivative data).
ConnectionTable strong_table(const FrameValues& f) {
  const double a = f.a, b = f.b, al = f.alpha, be = f.beta, ga = f.gamma, c = f.c;
  const double d = al - be;
  const double uu = -b * (c - 4.0 * al * d) / (4.0 * a * d);
  const double mixed = c / (4.0 * d);
  const double vv = -a * (c + 4.0 * be * d) / (4.0 * b * d);
  const double au = c * (be - ga) / (4.0 * d * d) - c * (a * a - 2.0 * b * b) / (4.0 * d);

  ConnectionTable t = zero_table();
  t[kU][kU] = Vec3(0.0, 0.0, uu);
  t[kV][kU] = Vec3(0.0, 0.0, mixed);
  t[kU][kV] = Vec3(0.0, 0.0, mixed);
  t[kV][kV] = Vec3(0.0, 0.0, vv);
  t[kU][kA] = Vec3(-uu, -mixed, 0.0);
  t[kV][kA] = Vec3(-mixed, -vv, 0.0);
  t[kA][kU] = Vec3(0.0, au, 0.0);
  t[kA][kV] = Vec3(-au, 0.0, 0.0);
  return t;
}

double max_d_derivative(const FrameJet& jet) {
  double m = 0.0;
  for (int s = 0; s < 5; ++s) {
    for (int f : {kU, kV}) m = std::max(m, std::abs(jet.derivative(s, f)));
  }
  return m;
}

}  // namespace

ResidualReport verify_connection_formulas(const HypersurfacePatch& patch, const Params& q,
                                          ConnectionMode mode, const Tolerances& tol) {
  const FrameJet jet = frame_jet(patch, q, tol);
  const AdaptedFrame& fr = jet.frame;
  const FrameValues f{fr.a, fr.b, fr.alpha, fr.beta, fr.gamma, patch.space().c()};

  if (mode == ConnectionMode::Auto) {
    mode = max_d_derivative(jet) < tol.derivative ? ConnectionMode::Strong : ConnectionMode::Generic;
  }

  ResidualReport report;
  Collector out(report);
  const ConnectionTable numeric = numeric_connection(jet);
  const double spread = std::max({f.alpha, f.beta, f.gamma}) - std::min({f.alpha, f.beta, f.gamma});
  const double min_gap = std::min({std::abs(f.alpha - f.beta), std::abs(f.beta - f.gamma),
                                   std::abs(f.alpha - f.gamma)});
  auto d = [&](int scalar, int field) { return jet.derivative(scalar, field); };

  if (mode == ConnectionMode::Generic) {
    report.mode = "generic";
    if (min_gap < 10.0 * tol.tau_mult * std::max(1.0, spread)) {
      report.skipped = true;
      report.reason = "principal curvatures are not pairwise distinct at this point";
      return report;
    }
    out.add_table(numeric, generic_table(f, jet));

    const double a = f.a, b = f.b, al = f.alpha, be = f.beta, ga = f.gamma, c = f.c;
    const double v_alpha = d(FrameJet::kAlpha, kV);
    const double u_beta = d(FrameJet::kBeta, kU);
    const double a_alpha = d(FrameJet::kAlpha, kA);
    const double a_b = d(FrameJet::kB, kA);
    out.add("Ua", d(FrameJet::kA, kU), b * v_alpha / (al - be));
    out.add("Va", d(FrameJet::kA, kV), b * u_beta / (al - be));
    out.add("Aa", d(FrameJet::kA, kA), -b * a_b / a);
    out.add("Ub", d(FrameJet::kB, kU), -a * v_alpha / (al - be));
    out.add("Vb", d(FrameJet::kB, kV), -a * u_beta / (al - be));
    out.add("Vgamma", d(FrameJet::kGamma, kV),
            a * (ga - be) * d(FrameJet::kGamma, kU) / (b * (al - ga)));
    const double ab_expected = a * ga + a * c * (a * a - 2.0 * b * b) / (4.0 * (al - be)) -
                               3.0 * a * a * a * c * (be - ga) / (4.0 * (al - be) * (al - ga)) -
                               al * a * (be - ga) / (al - be) +
                               a * a * (be - ga) / (b * (al - be) * (al - ga)) * a_alpha;
    out.add("Ab", a_b, ab_expected);
    const double bg = be - ga;
    const double ag = al - ga;
    const double abeta_expected = -3.0 * a * b * c / 4.0 - a * be * bg / b - a * c * bg / (4.0 * b * ag) -
                                  a * al * bg * bg / (b * ag) -
                                  3.0 * a * a * a * c * bg * bg / (4.0 * b * ag * ag) +
                                  a * a * bg * bg / (b * b * ag * ag) * a_alpha;
    out.add("Abeta", d(FrameJet::kBeta, kA), abeta_expected);
    return report;
  }

  report.mode = "strong";
  if (std::abs(f.alpha - f.beta) < 10.0 * tol.tau_mult * std::max(1.0, spread)) {
    report.skipped = true;
    report.reason = "the two Hopf principal curvatures coincide at this point";
    return report;
  }
  out.add_table(numeric, strong_table(f));
  const char* scalar_names[5] = {"alpha", "beta", "gamma", "a", "b"};
  for (int s = 0; s < 5; ++s) {
    for (int field : {kU, kV}) {
      out.add(std::string(kFieldNames[field]) + scalar_names[s], d(s, field), 0.0);
    }
  }
  const double a = f.a, b = f.b, al = f.alpha, be = f.beta, ga = f.gamma, c = f.c;
  out.add("Aalpha", d(FrameJet::kAlpha, kA),
          al * b * (al - ga) / a + b * c * (al - ga) / (4.0 * a * (be - al)) + 3.0 * a * b * c / 4.0);
  out.add("Abeta", d(FrameJet::kBeta, kA),
          -be * a * (be - ga) / b - a * c * (be - ga) / (4.0 * b * (al - be)) - 3.0 * a * b * c / 4.0);
  out.add("Ab", d(FrameJet::kB, kA),
          a * (c * (a * a - 2.0 * b * b) / (4.0 * (al - be)) - c * (be - ga) / (4.0 * (al - be) * (al - be)) +
               ga));
  return report;
}

}  // namespace hopflab::hypersurface
