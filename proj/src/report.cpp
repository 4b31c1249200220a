#include "exo/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "json.hpp"

namespace exo {

namespace {

using Json = nlohmann::ordered_json;

Json num(double x) { return round15(x); }

Json complex_entry(Complex z) { return Json{{"re", num(z.real())}, {"im", num(z.imag())}}; }

template <typename Derived>
Json matrix_json(const Eigen::MatrixBase<Derived>& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_entry(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json checks_json(const std::vector<NamedCheck>& checks) {
  Json out = Json::object();
  for (const auto& c : checks) {
    out[c.name] = Json{{"pass", c.pass}, {"residual", num(c.residual)}, {"tol", num(c.tolerance)}};
  }
  return out;
}

Json stats_json(const SequenceStats& s) {
  return Json{
      {"swap", s.n_swap},         {"sqrt", s.n_sqrt},   {"invsqrt", s.n_invsqrt},
      {"nontrivial", s.n_nontrivial}, {"parity", s.parity}, {"total", s.total}};
}

Json vector3_json(const Vector3& v) { return Json{num(v.x()), num(v.y()), num(v.z())}; }

Json gate_json(const GateReport& g) {
  Json out{{"matrix", matrix_json(g.gate)}, {"leakage", num(g.leakage)}};
  if (g.makhlin) {
    out["G1_re"] = num(g.makhlin->g1.real());
    out["G1_im"] = num(g.makhlin->g1.imag());
    out["G2"] = num(g.makhlin->g2);
  }
  out["class"] = to_string(g.classification);
  out["nhat"] = g.nhat ? vector3_json(*g.nhat) : Json(nullptr);
  return out;
}

Json makhlin_json(const std::optional<MakhlinInvariants>& m) {
  if (!m) return nullptr;
  return Json{{"G1_re", num(m->g1.real())}, {"G1_im", num(m->g1.imag())}, {"G2", num(m->g2)}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

double round15(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", round15(x));
  return buf;
}

std::string checks_report(const std::vector<NamedCheck>& checks, bool ok) {
  return dump(Json{{"ok", ok}, {"checks", checks_json(checks)}});
}

std::string gate_report(const GateReport& gate, const SequenceStats& stats) {
  return dump(Json{{"stats", stats_json(stats)}, {"gate", gate_json(gate)}});
}

std::string derivation_report(const DerivationReport& rep) {
  const auto& c = rep.coefficients;
  Json coefficients{
      {"alpha_re", num(c.alpha.real())}, {"alpha_im", num(c.alpha.imag())},
      {"beta_re", num(c.beta.real())},   {"beta_im", num(c.beta.imag())},
      {"gamma_re", num(c.gamma.real())}, {"gamma_im", num(c.gamma.imag())},
      {"delta_re", num(c.delta.real())}, {"delta_im", num(c.delta.imag())},
      {"F", num(c.F)}};
  Json solutions = Json::array();
  for (const auto& s : rep.solutions) solutions.push_back(Json{s.t1.str(), s.t2.str()});
  Json minimality = Json::array();
  for (const auto& p : rep.minimality.pairs) {
    minimality.push_back(Json{
        {"pair", Json{p.i, p.j}}, {"abs_a", num(std::abs(p.a))}, {"abs_b", num(std::abs(p.b))},
        {"gap", num(p.gap)}});
  }
  Json r{
      {"m", matrix_json(rep.r_report.m)},
      {"nhat", vector3_json(rep.r_report.nhat)},
      {"c32_eigenvalue", complex_entry(rep.r_report.c32_eigenvalue)}};
  Json elevated{
      {"m", matrix_json(rep.elevated.m)},
      {"b33", matrix_json(rep.elevated.b33)},
      {"leakage", num(rep.elevated.leakage)}};
  Json all = Json::array();
  for (const auto& sg : rep.all_gates) {
    all.push_back(Json{
        {"solution", Json{sg.solution.t1.str(), sg.solution.t2.str()}},
        {"gate", gate_json(sg.gate)}});
  }
  Json doc{
      {"ok", rep.ok},
      {"coefficients", coefficients},
      {"solutions", solutions},
      {"chosen", Json{rep.chosen.t1.str(), rep.chosen.t2.str()}},
      {"minimality", minimality},
      {"r", r},
      {"stats", stats_json(rep.stats)},
      {"gate", gate_json(rep.gate)},
      {"elevated", elevated},
      {"all_solutions", all},
      {"checks", checks_json(rep.checks)}};
  return dump(doc);
}

std::string comparison_report(const ComparisonReport& rep) {
  return dump(Json{
      {"phase_equal", rep.phase_equal},
      {"phase", complex_entry(rep.phase)},
      {"residual", num(rep.residual)},
      {"makhlin_a", makhlin_json(rep.makhlin_a)},
      {"makhlin_b", makhlin_json(rep.makhlin_b)},
      {"locally_equivalent", rep.locally_equivalent},
      {"makhlin_distance", num(rep.makhlin_distance)},
      {"parity_a", rep.parity_a},
      {"parity_b", rep.parity_b}});
}

std::string unitary_report(const Matrix& u, int n_spins) {
  return dump(Json{{"nspins", n_spins}, {"dimension", u.rows()}, {"matrix", matrix_json(u)}});
}

}  // namespace exo
