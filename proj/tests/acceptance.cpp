// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "geodr/experiment.hpp"
#include "geodr/problems.hpp"
#include "support.hpp"

using namespace geodr;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string counts(const TableReport& rep, const std::string& c) {
  std::string s;
  for (const auto& r : rep.rows) {
    if (r.case_name != c) continue;
    s += fmt::format("{}{}={} (ref {}{})", s.empty() ? "" : ", ", r.label, r.iterations, r.reference,
                     r.in_band ? "" : ", out of band");
  }
  return s;
}

// Runs the listed tables; every case must be in band with exact ordering,
// and each case (or the whole set when per_case is false) within the budget.
Outcome table_criterion(const std::vector<std::string>& tables, double budget_s, bool per_case) {
  Outcome o;
  std::vector<std::string> parts;
  double total = 0.0;
  for (const auto& t : tables) {
    const auto t0 = Clock::now();
    const auto rep = reproduce(t, default_data_dir());
    const double secs = seconds_since(t0);
    total += secs;
    const double per = secs / static_cast<double>(rep.cases.size());
    for (const auto& c : rep.cases) {
      bool in_band = true;
      for (const auto& r : rep.rows) {
        if (r.case_name == c) in_band &= r.in_band && r.converged;
      }
      const bool ordered = rep.ordering_ok(c);
      o.pass &= in_band && ordered;
      if (per_case && per > budget_s) o.pass = false;
      parts.push_back(fmt::format("{}/{}: {}; ordering {}", t, c, counts(rep, c), ordered ? "ok" : "violated"));
    }
  }
  if (!per_case && total > budget_s) o.pass = false;
  parts.push_back(fmt::format("runtime {:.3f} s", total));
  for (std::size_t i = 0; i < parts.size(); ++i) o.detail += (i ? " | " : "") + parts[i];
  return o;
}

Vector phi(const Vector& x) { return Vector{{x[0], x[0] * x[0] - x[1]}}; }
Vector phi_inv(const Vector& z) { return Vector{{z[0], z[0] * z[0] - z[1]}}; }

Outcome isometry_criterion() {
  const RosenbrockInstance inst{1, 2, 1};
  const auto rp = build_rosenbrock(inst);
  Point x = rp.plane->point({1, 2});
  Vector z = phi(x.coords);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    x = step_mann(*rp.plane, rp.fp.T, x, 0.5);
    z = 0.5 * z + 0.5 * rosenbrock_euclidean_T(inst, z);
    worst = std::max(worst, (x.coords - phi_inv(z)).norm());
  }
  return {worst <= 1e-9, fmt::format("max deviation over 100 iterates {:.3e}", worst)};
}

Outcome oracle_criterion() {
  const auto cfg = load_config(default_data_dir() + "/configs/ex51_case2_dr.cfg");
  const auto rep = oracle_compare(cfg);
  const double gap = std::abs(rep.solver_objective - rep.oracle_objective);
  const double dist = rep.point_distance.value_or(NAN);
  const bool pass = gap <= 1e-6 && rep.point_distance && dist <= 1e-5;
  return {pass, fmt::format("objective gap {:.3e}, point distance {:.3e}, verdict {}", gap, dist, to_string(rep.verdict))};
}

// Property suites --------------------------------------------------------------

struct Tally {
  long samples = 0;
  long failures = 0;
  void check(bool ok) {
    ++samples;
    failures += !ok;
  }
};

Tally nonexpansive_reflections() {
  Tally t;
  const auto plane = make_rosenbrock_plane();
  const auto lo = make_log_orthant(3);
  const Point c = lo->point({1.0, 2.0, 0.5});
  using Map = std::function<Point(const Point&)>;
  const std::vector<std::pair<const Manifold*, Map>> maps = {
      {plane.get(), [](const Point& x) { return rosenbrock_reflect_phi(1.0, 1.0, x); }},
      {plane.get(), [](const Point& x) { return rosenbrock_reflect_psi(2.0, 1.0, x); }},
      {lo.get(), [&](const Point& x) { return reflect_through(*lo, project_ball(*lo, c, 0.7, x), x); }},
      {lo.get(), [&](const Point& x) { return reflect_through(*lo, prox_dist_point(*lo, c, 0.5, x), x); }},
  };
  for (const auto& [m, R] : maps) {
    for (int s = 0; s < testing::kSamples; ++s) {
      const Point x = testing::random_point(*m, 2.0), y = testing::random_point(*m, 2.0);
      const double d = m->dist(x, y);
      t.check(m->dist(R(x), R(y)) <= d + 1e-12 * (1.0 + d));
    }
  }
  return t;
}

std::vector<ManifoldPtr> bases() { return {make_euclidean(3), make_rosenbrock_plane(), make_log_orthant(3)}; }

Tally comparison_inequality() {
  Tally t;
  for (const auto& m : bases()) {
    for (int s = 0; s < testing::kSamples; ++s) {
      const Point x = testing::random_point(*m, 2.0), y = testing::random_point(*m, 2.0);
      const Point z = testing::random_point(*m, 2.0);
      const double th = testing::uniform(0.0, 0.999);
      const double lhs = std::pow(m->dist(inertial_extrapolate(*m, x, y, th), z), 2);
      const double dxz = m->dist(x, z), dyz = m->dist(y, z), dxy = m->dist(x, y);
      const double rhs = (1 + th) * dxz * dxz - th * dyz * dyz + th * (1 + th) * dxy * dxy;
      t.check(lhs <= rhs + 1e-9 * (1.0 + rhs));
    }
  }
  return t;
}

Tally roundtrips_and_geodesics() {
  Tally t;
  for (const auto& m : bases()) {
    for (int s = 0; s < testing::kSamples; ++s) {
      const Point x = testing::random_point(*m, 2.0), y = testing::random_point(*m, 2.0);
      const double scale = 1.0 + x.coords.norm() + y.coords.norm();
      const Point back = m->exp(x, m->log(x, y));
      t.check((back.coords - y.coords).norm() <= 1e-10 * scale);
      const double d = m->dist(x, y);
      t.check(std::abs(m->norm(m->log(x, y)) - d) <= 1e-10 * (1.0 + d));
      const double tt = testing::uniform(0.0, 1.0);
      const Point g = m->geodesic(x, y, tt);
      t.check(std::abs(m->dist(x, g) - tt * d) <= 1e-10 * (1.0 + d));
      t.check(std::abs(m->dist(g, y) - (1.0 - tt) * d) <= 1e-10 * (1.0 + d));
    }
  }
  return t;
}

// pacc_dr runs of every table experiment.
Tally pacc_rate(std::string& note) {
  Tally t;
  std::vector<ExperimentConfig> cfgs;
  auto ros = parse_config("[problem]\ntype = rosenbrock\n[solver]\nmethod = pacc_dr\nalpha = 0.5\nx0 = 1 2\n");
  cfgs.push_back(ros);
  for (const char* name : {"ex51_case1", "ex51_case2", "ex52_case1", "ex52_case2", "ex53_case1", "ex53_case2"}) {
    auto c = parse_config(fmt::format("[problem]\ntype = heron\ninstance = {}.inst\n[solver]\nmethod = pacc_dr\n"
                                      "alpha = 0.7\ntol = 1e-10\nx0 = fill 1\n",
                                      name),
                          default_data_dir() + "/instances");
    cfgs.push_back(c);
  }
  for (const auto& cfg : cfgs) {
    const auto prep = prepare(cfg);
    const auto tr = solve(prep.problem, prep.solver);
    const Manifold& M = *prep.problem.manifold;
    const double d0 = M.dist(prep.solver.x0, *tr.fixed_point);
    for (std::size_t i = 0; i < tr.records.size(); ++i) {
      const auto& r = tr.records[i];
      if (i) t.check(r.residual <= tr.records[i - 1].residual + 1e-12);
      t.check(r.residual <= rate_certificate_pacc(prep.solver.alpha, d0, r.n) + 1e-12);
    }
  }
  note = fmt::format("{} configs", cfgs.size());
  return t;
}

Tally inertial_rate() {
  Tally t;
  const auto rp = build_rosenbrock({1, 2, 1});
  SolverConfig c;
  c.method = Method::inertial_dr;
  c.alpha = Schedule::constant(0.5);
  c.theta = Schedule::constant(0.3);
  c.x0 = rp.plane->point({1, 2});
  c.x1 = c.x0;
  const auto tr = solve(rp.fp, c);
  const double d0 = rp.plane->dist(c.x0, *tr.fixed_point);
  for (const auto& r : tr.records) {
    t.check(r.min_residual * r.min_residual <= rate_certificate_inertial(0.5, 0.5, 0.3, d0, r.n) + 1e-12);
  }
  return t;
}

Outcome property_criterion() {
  Outcome o;
  std::string pacc_note;
  const std::vector<std::pair<std::string, Tally>> suites = {
      {"reflections nonexpansive", nonexpansive_reflections()},
      {"comparison inequality", comparison_inequality()},
      {"exp/log and geodesics", roundtrips_and_geodesics()},
      {"pacc monotone + rate", pacc_rate(pacc_note)},
      {"inertial rate", inertial_rate()},
  };
  for (const auto& [name, t] : suites) {
    o.pass &= t.failures == 0;
    o.detail += fmt::format("{}{} {}/{}", o.detail.empty() ? "" : ", ", name, t.samples - t.failures, t.samples);
  }
  o.detail += " (pacc over " + pacc_note + ")";
  return o;
}

Outcome reduction_criterion() {
  const auto rp = build_rosenbrock({1, 2, 1});
  SolverConfig a;
  a.method = Method::dr_mann;
  a.alpha = Schedule::constant(0.5);
  a.x0 = rp.plane->point({1, 2});
  SolverConfig b = a;
  b.method = Method::inertial_dr;
  b.theta = Schedule::constant(0.0);
  b.x1 = a.x0;
  const auto ta = solve(rp.fp, a), tb = solve(rp.fp, b);
  bool same = ta.records.size() == tb.records.size();
  for (std::size_t i = 0; same && i < ta.records.size(); ++i) {
    same = ta.records[i].point.coords == tb.records[i].point.coords;
  }
  return {same, fmt::format("{} vs {} iterates, bitwise {}", ta.records.size(), tb.records.size(),
                            same ? "equal" : "different")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Rosenbrock table", [] { return table_criterion({"table1"}, 1.0, false); }},
      {"Heron 2-d table", [] { return table_criterion({"table2"}, 1.0, true); }},
      {"Heron higher-dim and ball tables", [] { return table_criterion({"table3", "table4"}, 5.0, false); }},
      {"isometry oracle", isometry_criterion},
      {"Heron oracle agreement", oracle_criterion},
      {"property suites", property_criterion},
      {"theta = 0 reduction", reduction_criterion},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %zu: %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed ? 1 : 0;
}
