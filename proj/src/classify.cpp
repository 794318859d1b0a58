#include "circ4/classify.hpp"

#include <cmath>
#include <random>

namespace circ4 {

namespace {

constexpr double kScaleFloor = 1e-300;

T3 t3_add(const T3& a, const T3& b) {
  T3 out;
  for (std::size_t i = 0; i < 64; ++i) out.a[i] = a.a[i] + b.a[i];
  return out;
}

double max_abs_diff(const T3& a, const T3& b) {
  double n = 0.0;
  for (std::size_t i = 0; i < 64; ++i) n = std::max(n, std::abs(a.a[i] - b.a[i]));
  return n;
}

double max_abs_diff(const T4& a, const T4& b) {
  double n = 0.0;
  for (std::size_t i = 0; i < 256; ++i) n = std::max(n, std::abs(a.a[i] - b.a[i]));
  return n;
}

double scale_f(const PointTensors& t) {
  return std::max(kScaleFloor, inf_norm(t.frame.g) * inf_norm(t.frame.nablaP));
}

double scale_fbar(const PointTensors& t) {
  return std::max(kScaleFloor, inf_norm(t.frame.g) * inf_norm(t.frame.nablaQ));
}

double scale_mixed(const PointTensors& t) {
  return std::max(kScaleFloor, inf_norm(t.frame.g) *
                                   std::max(inf_norm(t.frame.nablaP),
                                            inf_norm(t.frame.nablaQ)));
}

/// F(x,y,z) reconstructed through the Q-route: Fbar(x,y,Q^3 z) + Fbar(x,Qy,z).
T3 f_via_fbar(const PointTensors& t, const Mat4& q, const Mat4& q3) {
  return t3_add(compose_slot(t.Fbar, q3, 2), compose_slot(t.Fbar, q, 1));
}

/// Right-hand side of the W1 condition; `p_sign` is -1 for the condition
/// itself and +1 for the sign variant.
T3 w1_rhs(const PointTensors& t, double p_sign) {
  const Mat4 gp = mat_mul(t.frame.g, t.frame.P);
  Vec4 alpha_p{};
  for (int k = 0; k < 4; ++k) {
    double s = 0.0;
    for (int l = 0; l < 4; ++l)
      s += t.alpha[static_cast<std::size_t>(l)] * t.frame.P(l, k);
    alpha_p[static_cast<std::size_t>(k)] = s;
  }
  T3 rhs;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        rhs(i, j, k) = 0.25 * (t.frame.g(i, j) * t.alpha[static_cast<std::size_t>(k)] +
                               t.frame.g(i, k) * t.alpha[static_cast<std::size_t>(j)] +
                               p_sign * (gp(i, j) * alpha_p[static_cast<std::size_t>(k)] +
                                         gp(i, k) * alpha_p[static_cast<std::size_t>(j)]));
  return rhs;
}

/// alpha_bar(Q^3 z) + g^ij Fbar(e_i, Q e_j, z) - alpha(z); identically zero.
Vec4 lee_transfer_residual(const PointTensors& t, const Mat4& q, const Mat4& q3) {
  const Vec4 mixed = contract_lee(compose_slot(t.Fbar, q, 1), t.frame.ginv);
  Vec4 out{};
  for (int k = 0; k < 4; ++k) {
    double s = mixed[static_cast<std::size_t>(k)] - t.alpha[static_cast<std::size_t>(k)];
    for (int a = 0; a < 4; ++a)
      s += t.alpha_bar[static_cast<std::size_t>(a)] * q3(a, k);
    out[static_cast<std::size_t>(k)] = s;
  }
  return out;
}

/// Fbar(x,y,Qz) + Fbar(x,Qy,Q^2 z); equals F(x,y,Pz).
T3 fbar_p_slot(const PointTensors& t, const Mat4& q, const Mat4& q2) {
  return t3_add(compose_slot(t.Fbar, q, 2),
                compose_slot(compose_slot(t.Fbar, q2, 2), q, 1));
}

}  // namespace

PointTensors point_tensors(const ManifoldSpec& spec, const Vec4& p) {
  PointTensors t;
  t.frame = frame_at(spec, p);
  t.F = lower(t.frame.nablaP, t.frame.g);
  t.Fbar = lower(t.frame.nablaQ, t.frame.g);
  t.alpha = contract_lee(t.F, t.frame.ginv);
  t.alpha_bar = contract_lee(t.Fbar, t.frame.ginv);
  return t;
}

double residual_scale(const PointTensors& t) { return scale_f(t); }

double residual_w0(const PointTensors& t) { return inf_norm(t.F) / scale_f(t); }

double residual_w1(const PointTensors& t) {
  return max_abs_diff(t.F, w1_rhs(t, -1.0)) / scale_f(t);
}

double residual_w2(const PointTensors& t) {
  const T3 cyc = cyclic_sum(compose_slot(t.F, t.frame.P, 2));
  return std::max(inf_norm(cyc), inf_norm(t.alpha)) / scale_f(t);
}

double residual_w3(const PointTensors& t) {
  return inf_norm(cyclic_sum(t.F)) / scale_f(t);
}

double residual_fs(const PointTensors& t) {
  const T3& nq = t.frame.nablaQ;
  const Mat4& q = t.frame.Q;
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        double s = 0.0;
        for (int l = 0; l < 4; ++l) s += nq(i, l, k) * q(l, j) + q(k, l) * nq(i, j, l);
        worst = std::max(worst, std::abs(s));
      }
  return worst / std::max(kScaleFloor, inf_norm(nq));
}

double residual_w1_bar(const PointTensors& t) {
  const Mat4& q = t.frame.Q;
  const Mat4 q2 = mat_mul(q, q);
  const Mat4 q3 = mat_mul(q2, q);
  const double tensor_part = max_abs_diff(f_via_fbar(t, q, q3), w1_rhs(t, -1.0));
  const double trace_part = inf_norm(lee_transfer_residual(t, q, q3));
  return std::max(tensor_part, trace_part) / scale_f(t);
}

double residual_w1_bar_variant(const PointTensors& t) {
  const Mat4& q = t.frame.Q;
  const Mat4 q2 = mat_mul(q, q);
  const Mat4 q3 = mat_mul(q2, q);
  const double tensor_part = max_abs_diff(f_via_fbar(t, q, q3), w1_rhs(t, +1.0));
  const double trace_part = inf_norm(lee_transfer_residual(t, q, q3));
  return std::max(tensor_part, trace_part) / scale_f(t);
}

double residual_w2_bar(const PointTensors& t) {
  const Mat4& q = t.frame.Q;
  const Mat4 q2 = mat_mul(q, q);
  const T3 cyc = cyclic_sum(fbar_p_slot(t, q, q2));
  return std::max(inf_norm(cyc), inf_norm(t.alpha)) / scale_f(t);
}

double residual_w3_bar(const PointTensors& t) {
  const Mat4& q = t.frame.Q;
  const Mat4 q3 = mat_mul(mat_mul(q, q), q);
  return inf_norm(cyclic_sum(f_via_fbar(t, q, q3))) / scale_f(t);
}

double residual_w3_bar_variant(const PointTensors& t) {
  const Mat4& q = t.frame.Q;
  const Mat4 q3 = mat_mul(mat_mul(q, q), q);
  const T3 a1 = compose_slot(t.Fbar, q3, 2);   // Fbar(x, y, Q^3 z)
  const T3 a2 = compose_slot(t.Fbar, q, 1);    // Fbar(x, Qy, z)
  const T3 b = compose_slot(a2, q, 2);         // Fbar(x, Qy, Qz)
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        const double s = a1(i, j, k) + a2(i, j, k) + a1(j, k, i) + a2(j, k, i) +
                         a1(k, i, j) + b(k, i, j);
        worst = std::max(worst, std::abs(s));
      }
  return worst / scale_f(t);
}

IdentityReport identity_suite(const PointTensors& t) {
  const Mat4& q = t.frame.Q;
  const Mat4& p = t.frame.P;
  const Mat4 q2 = mat_mul(q, q);
  const Mat4 q3 = mat_mul(q2, q);
  const double sf = scale_f(t);
  const double sb = scale_fbar(t);
  const double sm = scale_mixed(t);

  IdentityReport out;

  // F is symmetric in its last two slots.
  {
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          worst = std::max(worst, std::abs(t.F(i, j, k) - t.F(i, k, j)));
    out["f_last_two_symmetry"] = worst / sf;
  }

  // F(x,Py,Pz) = -F(x,y,z)
  {
    const T3 fpp = compose_slot(compose_slot(t.F, p, 1), p, 2);
    double worst = 0.0;
    for (std::size_t i = 0; i < 64; ++i)
      worst = std::max(worst, std::abs(fpp.a[i] + t.F.a[i]));
    out["f_p_anti_invariance"] = worst / sf;
  }

  // Fbar(x,y,z) + Fbar(x,Qy,Qz) = F(x,y,Qz)
  {
    const T3 lhs = t3_add(t.Fbar, compose_slot(compose_slot(t.Fbar, q, 2), q, 1));
    out["f_qz_from_fbar"] = max_abs_diff(lhs, compose_slot(t.F, q, 2)) / sm;
  }

  // Fbar(x,y,Q^3z) + Fbar(x,Qy,z) = F(x,y,z)
  out["f_from_fbar"] = max_abs_diff(f_via_fbar(t, q, q3), t.F) / sm;

  // Fbar(x,y,Qz) + Fbar(x,Qy,Q^2z) = F(x,y,Pz)
  out["f_pz_from_fbar"] =
      max_abs_diff(fbar_p_slot(t, q, q2), compose_slot(t.F, p, 2)) / sm;

  // Fbar(x,y,Q^3z) + Fbar(x,Qy,z) is symmetric in (y,z)
  {
    const T3 pair = f_via_fbar(t, q, q3);
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          worst = std::max(worst, std::abs(pair(i, j, k) - pair(i, k, j)));
    out["fbar_pair_swap"] = worst / sb;
  }

  // Sum of Fbar over the Q-orbit of the last two slots vanishes.
  {
    T3 s = t3_add(t.Fbar, compose_slot(compose_slot(t.Fbar, q, 2), q, 1));
    s = t3_add(s, compose_slot(compose_slot(t.Fbar, q2, 2), q2, 1));
    s = t3_add(s, compose_slot(compose_slot(t.Fbar, q3, 2), q3, 1));
    out["fbar_q_orbit_sum"] = inf_norm(s) / sb;
  }

  // Fbar(x,y,Qz) = -Fbar(x,z,Qy)
  {
    const T3 fq = compose_slot(t.Fbar, q, 2);
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          worst = std::max(worst, std::abs(fq(i, j, k) + fq(i, k, j)));
    out["fbar_q_antisymmetry"] = worst / sb;
  }

  // Fbar(x,y,Q^3z) = -Fbar(x,Q^2z,Qy)
  {
    const T3 fq3 = compose_slot(t.Fbar, q3, 2);
    const T3 m = compose_slot(compose_slot(t.Fbar, q2, 1), q, 2);
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          worst = std::max(worst, std::abs(fq3(i, j, k) + m(i, k, j)));
    out["fbar_q3_antisymmetry"] = worst / sb;
  }

  // alpha_bar(Q^3 z) + g^ij Fbar(e_i, Qe_j, z) = alpha(z)
  out["lee_form_transfer"] = inf_norm(lee_transfer_residual(t, q, q3)) / sm;

  // Curvature invariance under Q (and under P) holds where nablaQ = 0.
  if (inf_norm(t.frame.nablaQ) <= kDegeneracyFloor) {
    const double rs = std::max(kScaleFloor, inf_norm(t.frame.R));
    const T4 rq = compose_slot(compose_slot(t.frame.R, q, 2), q, 3);
    out["curvature_q_invariance"] = max_abs_diff(rq, t.frame.R) / rs;
    const T4 rp = compose_slot(compose_slot(t.frame.R, p, 2), p, 3);
    out["curvature_p_invariance"] = max_abs_diff(rp, t.frame.R) / rs;
  }

  return out;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    default: return "indeterminate";
  }
}

ClassReport classify(const ManifoldSpec& spec, int n_points, std::uint64_t seed,
                     double tol, bool check_identities) {
  if (n_points < 1) throw std::invalid_argument("n_points must be >= 1");

  std::mt19937_64 rng(seed);
  // Explicit bit mapping keeps the stream independent of the standard
  // library's distribution implementations.
  const auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const auto draw = [&]() {
    Vec4 p{};
    for (int i = 0; i < 4; ++i) {
      const Interval& iv = spec.domain()[static_cast<std::size_t>(i)];
      p[static_cast<std::size_t>(i)] = iv.lo + (iv.hi - iv.lo) * unit();
    }
    return p;
  };

  ClassReport report;
  report.tol = tol;
  report.seed = seed;
  report.identities_checked = check_identities;
  report.points.reserve(static_cast<std::size_t>(n_points));

  bool all_degenerate = true;
  double max_w0 = 0.0, max_w1 = 0.0, max_w2 = 0.0, max_w3 = 0.0;

  for (int idx = 0; idx < n_points; ++idx) {
    PointTensors t;
    bool accepted = false;
    for (int attempt = 0; attempt < 100 && !accepted; ++attempt) {
      const Vec4 p = draw();
      try {
        t = point_tensors(spec, p);
        accepted = true;
      } catch (const PointError&) {
        // rejected; resample
      }
    }
    if (!accepted)
      throw SamplingError("no admissible point found in the domain (retry cap reached)");

    PointRecord rec;
    rec.point = t.frame.point;
    rec.scale = residual_scale(t);
    rec.degenerate = inf_norm(t.frame.nablaP) < kDegeneracyFloor;
    all_degenerate = all_degenerate && rec.degenerate;

    rec.residuals["w0"] = residual_w0(t);
    rec.residuals["w1"] = residual_w1(t);
    rec.residuals["w2"] = residual_w2(t);
    rec.residuals["w3"] = residual_w3(t);
    rec.residuals["fs"] = residual_fs(t);
    rec.residuals["w1_bar"] = residual_w1_bar(t);
    rec.residuals["w2_bar"] = residual_w2_bar(t);
    rec.residuals["w3_bar"] = residual_w3_bar(t);
    rec.residuals["w1_bar_variant"] = residual_w1_bar_variant(t);
    rec.residuals["w3_bar_variant"] = residual_w3_bar_variant(t);
    if (check_identities)
      for (const auto& [name, value] : identity_suite(t)) rec.residuals[name] = value;

    max_w0 = std::max(max_w0, rec.residuals["w0"]);
    max_w1 = std::max(max_w1, rec.residuals["w1"]);
    max_w2 = std::max(max_w2, rec.residuals["w2"]);
    max_w3 = std::max(max_w3, rec.residuals["w3"]);
    report.fs_equivalent = report.fs_equivalent &&
                           ((rec.residuals["w0"] <= tol) == (rec.residuals["fs"] <= tol));

    report.points.push_back(std::move(rec));
  }

  for (const PointRecord& rec : report.points)
    for (const auto& [name, value] : rec.residuals) {
      ResidualStats& st = report.aggregates[name];
      st.max = std::max(st.max, value);
      st.mean += value;  // finalized below
      st.count += 1;
    }
  for (auto& [name, st] : report.aggregates) st.mean /= st.count;

  const auto basic = [tol](double worst) {
    return worst <= tol ? Verdict::holds : Verdict::fails;
  };
  report.verdicts["W0"] = basic(max_w0);
  report.verdicts["W1"] = all_degenerate ? Verdict::indeterminate : basic(max_w1);
  report.verdicts["W2"] = all_degenerate ? Verdict::indeterminate : basic(max_w2);
  report.verdicts["W3"] = all_degenerate ? Verdict::indeterminate : basic(max_w3);
  return report;
}

}  // namespace circ4
