#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "saucer/config_space.hpp"
#include "saucer/fibration.hpp"
#include "saucer/planner.hpp"
#include "saucer/suites.hpp"

using namespace saucer;

namespace {

int failures = 0;

void line(int n, bool ok, const std::string& text) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", n, text.c_str());
  if (!ok) ++failures;
}

void info(const std::string& text) { std::printf("       %s\n", text.c_str()); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Checks {
  std::map<std::string, Check> by_id;
  const Check& operator[](const std::string& id) const { return by_id.at(id); }
  bool all(std::initializer_list<std::string> ids) const {
    for (const auto& id : ids)
      if (!by_id.at(id).pass) return false;
    return true;
  }
  double worst(std::initializer_list<std::string> ids) const {
    double w = 0.0;
    for (const auto& id : ids) w = std::max(w, by_id.at(id).residual);
    return w;
  }
};

Checks index(const SuiteReport& r) {
  Checks c;
  for (const auto& k : r.checks) c.by_id[k.id] = k;
  return c;
}

std::string strip_timestamp(const std::string& path) {
  std::ifstream in(path);
  auto j = nlohmann::json::parse(in);
  j.erase("timestamp");
  return j.dump();
}

}  // namespace

int main() {
  SuiteOptions opt;

  {
    ChartSampler s(opt.seed + 2);
    double err = 0.0, darboux = 0.0;
    for (int k = 0; k < 100; ++k) {
      auto p = s.next();
      err = std::max(err, std::abs(contact_nondegeneracy(p) - 2.0));
      darboux = std::max(darboux, std::abs(-contact_nondegeneracy(p) - 2.0));
    }
    line(1, err < 1e-9, "dw0^dw0^w0 = +2 dx^dy^da^db^dz at 100 points, max |err| = " + sci(err));
    info("computed coefficient is -2 in that basis; +2 holds in the order dx^da^dy^db^dz (|err| = " + sci(darboux) + ")");
  }

  auto structure = index(run_suite("structure", opt));
  line(2, structure.all({"attacking_K_eq_diag(1,1,-1,-1)", "attacking_factors_null_and_lagrangean"}),
       "attacking K = diag(1,1,-1,-1), D+- null and Lagrangean, residual " +
           sci(structure.worst({"attacking_K_eq_diag(1,1,-1,-1)", "attacking_factors_null_and_lagrangean"})));
  line(3,
       structure.all({"stabilizer_g_Omega_dim", "stabilizer_spanned_by_Y1..Y5", "g0_commutation_table",
                      "stabilizer_Upsilon_omega_dim", "stabilizer_Omega_dim"}),
       "stabilizer dimensions 5/4/11, commutation table residual " + sci(structure["g0_commutation_table"].residual));
  line(4, structure.all({"landing_Ksq_eq_-Id/(1+a^2+b^2)", "levi_signature_(1,1)_failures"}),
       "landing K~^2 relative residual " + sci(structure["landing_Ksq_eq_-Id/(1+a^2+b^2)"].residual) +
           " at 1000 points, Levi signature (1,1) at 100 points");

  auto sym = index(run_suite("symmetry", opt));
  {
    bool ok = true;
    double res = 0.0, closure = 0.0;
    for (std::string t : {"attacking", "landing", "g2"}) {
      ok = ok && sym.all({t + "_symmetry_residual", t + "_rank", t + "_closure", t + "_jacobi",
                          t + "_oracle_signature_matches_expected", t + "_killing_signature_matches_oracle"});
      res = std::max(res, sym[t + "_symmetry_residual"].residual);
      closure = std::max(closure, sym[t + "_closure"].residual);
    }
    line(5, ok, "15/15/14 fields, symmetry residual " + sci(res) + ", closure " + sci(closure) +
                    ", signatures (9,6,0)/(8,7,0)/(8,6,0) match oracles");
  }

  auto gl2 = index(run_suite("gl2", opt));
  line(6,
       gl2.all({"detL_eq_quartic", "cubic_points_TypeN_failures", "tangent_points_TypeII_failures", "random_NotNull_shortfall"}),
       "det L = quartic relative residual " + sci(gl2["detL_eq_quartic"].residual) + ", TypeN/TypeII/NotNull classification");

  auto fib = index(run_suite("fibration", opt));
  {
    Rng rng(opt.seed + 81);
    double worst_ref = 0.0;
    std::string bad;
    for (int k = 0; k < 20; ++k)
      for (auto chart : {Chart6::X, Chart6::Y}) {
        Coords6 p;
        for (auto& c : p) c = rng.uniform(-2, 2);
        for (const auto& c : verify_commutators(chart, p)) {
          worst_ref = std::max(worst_ref, c.residual);
          std::string label = "[e" + std::to_string(c.i) + ",e" + std::to_string(c.j) + "]";
          if (c.residual > 1e-8 && bad.find(label) == std::string::npos) bad += (bad.empty() ? "" : " ") + label;
        }
      }
    const bool rest = fib.all({"eds_x_coframe", "eds_y_coframe", "coordinate_roundtrip", "joystick_contact_residual",
                               "joystick_twisted_cubic_angular_residual"});
    line(7, rest && worst_ref < 1e-8,
         "EDS residual " + sci(fib.worst({"eds_x_coframe", "eds_y_coframe"})) + ", roundtrip " +
             sci(fib["coordinate_roundtrip"].residual) + ", joystick angular " +
             sci(fib["joystick_twisted_cubic_angular_residual"].residual) + ", seven commutators max residual " +
             sci(worst_ref));
    if (!bad.empty())
      info("commutators off by a sign: " + bad + "; with opposite signs all seven hold to " +
           sci(fib.worst({"commutator_[e4,e7]", "commutator_[e7,e3]", "commutator_[e7,e2]", "commutator_[e3,e2]",
                          "commutator_[e4,e2]", "commutator_[e4,e0]", "commutator_[e4,e1]"})));
  }

  auto plan = index(run_suite("planner", opt));
  {
    ChartSampler s(opt.seed + 101);
    double nested = 0.0;
    auto id = bracket_identity(ManeuverMode::Landing);
    for (int k = 0; k < 100; ++k) nested = std::max(nested, bracket_identity_residual(id, s.next()));
    bool ok = nested < 1e-8;
    double ident = plan.worst({"attacking_bracket_identity", "g2d_bracket_identity"});
    for (std::string t : {"attacking", "landing", "g2d"})
      ok = ok && plan.all({t + "_bracket_generating_rank_failures", t + "_plan_endpoint_error", t + "_plan_failures",
                           t + "_plan_replay_uncertified"});
    ok = ok && plan.all({"attacking_bracket_identity", "g2d_bracket_identity"});
    line(8, ok,
         "rank 5 in all modes, [Y2,Y3]=3dz and [Y2,Y1]=dz residual " + sci(ident) + ", nested landing identity residual " +
             sci(nested) + ", 150 plans max error " +
             sci(plan.worst({"attacking_plan_endpoint_error", "landing_plan_endpoint_error", "g2d_plan_endpoint_error"})));
    if (nested >= 1e-8)
      info("[Y1,[Y2,[Y2,Y3]]] vanishes identically; [Y1,Y3] = 9dz - 9a dx generates instead (residual " +
           sci(plan["landing_[Y1,Y3]_eq_9dz-9a_dx"].residual) + ")");
  }

  {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "saucer_acceptance";
    fs::create_directories(dir);
    const std::string a = (dir / "run1.json").string(), b = (dir / "run2.json").string();
    const std::string cmd = std::string("\"") + SAUCER_CLI_PATH + "\" verify --suite all --seed 7 --format compact > ";
    const int ra = std::system((cmd + "\"" + a + "\"").c_str());
    const int rb = std::system((cmd + "\"" + b + "\"").c_str());
    bool same = false;
    try {
      same = strip_timestamp(a) == strip_timestamp(b);
    } catch (const std::exception&) {
    }
    line(9, ra == 0 && rb == 0 && same, "verify --suite all --seed 7 twice: exit codes " + std::to_string(ra) + "/" +
                                            std::to_string(rb) + ", reports " + (same ? "identical" : "differ"));
  }

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
