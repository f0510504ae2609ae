#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "saucer/fibration.hpp"
#include "saucer/gl2_rep.hpp"
#include "saucer/maneuvers.hpp"
#include "saucer/planner.hpp"
#include "saucer/suites.hpp"

using namespace saucer;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& s, std::size_t n, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError(std::string(what) + ": cannot parse '" + tok + "'");
    }
  }
  if (out.size() != n) throw UsageError(std::string(what) + ": expected " + std::to_string(n) + " comma-separated numbers");
  return out;
}

ChartPoint5 parse_point(const std::string& s, const char* what) {
  auto v = parse_list(s, 5, what);
  return {v[0], v[1], v[2], v[3], v[4]};
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::map<std::string, std::string> kv;
  if (path.empty()) return kv;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw UsageError("config " + key + ": not a number '" + v + "'");
  }
}

std::uint64_t to_seed(const std::string& v, const char* where) {
  try {
    std::size_t used = 0;
    auto s = std::stoull(v, &used, 0);
    if (used != v.size()) throw std::invalid_argument(v);
    return s;
  } catch (const std::exception&) {
    throw UsageError(std::string(where) + ": invalid seed '" + v + "'");
  }
}

struct Common {
  std::string format = "pretty";
  std::string config;
  std::optional<std::uint64_t> seed;
  std::map<std::string, std::string> kv;

  std::uint64_t resolve_seed() const {
    if (seed) return *seed;
    if (auto it = kv.find("seed"); it != kv.end()) return to_seed(it->second, "config");
    if (const char* env = std::getenv("SAUCER_SEED")) return to_seed(env, "SAUCER_SEED");
    return kDefaultSeed;
  }
  double tol(const std::string& key, double fallback) const {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : to_double(key, it->second);
  }
};

void emit(const Common& c, const nlohmann::json& j) {
  std::cout << (c.format == "compact" ? j.dump() : j.dump(2)) << "\n";
}

void write_csv(const std::string& path, const std::string& header, const std::function<void(std::ostream&)>& rows) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << std::setprecision(17) << header << "\n";
  rows(out);
}

void trajectory_csv(const std::string& path, const Trajectory& tr) {
  write_csv(path, "t,x,y,z,a,b,vx,vy,vz,va,vb,u1,u2,u3", [&](std::ostream& o) {
    for (const auto& s : tr.samples) {
      o << s.t;
      for (double c : s.state) o << ',' << c;
      for (int i = 0; i < 5; ++i) o << ',' << (s.velocity ? (*s.velocity)[i] : 0.0);
      for (double u : s.controls) o << ',' << u;
      o << "\n";
    }
  });
}

nlohmann::json residual_json(const ResidualReport& r, const Trajectory& tr) {
  return {{"mode", to_string(r.mode)},
          {"samples", r.samples.size()},
          {"max_contact", r.max_contact},
          {"max_nullity", r.max_nullity},
          {"nullity", nullity_names(r.mode)},
          {"certified", r.certified},
          {"chart_escape", tr.chart_escape},
          {"escape_time", tr.escape_time}};
}

void add_common(CLI::App* sub, Common& c, bool with_seed) {
  sub->add_option("--format", c.format, "JSON layout")->check(CLI::IsMember({"pretty", "compact"}));
  sub->add_option("--config", c.config, "key=value file overriding tolerances")->check(CLI::ExistingFile);
  if (with_seed) sub->add_option("--seed", c.seed, "random seed (falls back to config, then SAUCER_SEED)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contact-geometry maneuver toolkit"};
  app.require_subcommand(1);

  Common verify_c, sim_c, cls_c, lift_c, plan_c;

  auto* verify = app.add_subcommand("verify", "run verification suites");
  std::string suite = "all";
  std::optional<std::string> catalog_name;
  std::vector<std::string> suites{"all"};
  for (const auto& s : suite_names()) suites.push_back(s);
  verify->add_option("--suite", suite, "suite name")->check(CLI::IsMember(suites));
  verify->add_option("--catalog", catalog_name, "symmetry catalog")->check(CLI::IsMember({"attacking", "landing", "g2"}));
  add_common(verify, verify_c, true);

  auto* simulate = app.add_subcommand("simulate", "integrate a control program");
  std::string sim_mode, sim_controls, sim_from = "0,0,0,0,0", sim_csv = "trajectory.csv";
  std::optional<double> sim_duration, sim_dt;
  simulate->add_option("--mode", sim_mode, "attacking|landing|g2s|g2d")->required()->check(CLI::IsMember({"attacking", "landing", "g2s", "g2d"}));
  simulate->add_option("--controls", sim_controls, "control program JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--from", sim_from, "initial point x,y,z,a,b");
  simulate->add_option("--duration", sim_duration, "override program duration");
  simulate->add_option("--dt", sim_dt, "override step size");
  simulate->add_option("--csv", sim_csv, "trajectory CSV path");
  add_common(simulate, sim_c, false);

  auto* classify = app.add_subcommand("classify", "classify a direction of the binary-cubic space");
  std::string cls_vector;
  classify->add_option("--vector", cls_vector, "X1,X2,X3,X4")->required();
  add_common(classify, cls_c, false);

  auto* lift = app.add_subcommand("lift", "joystick curve, lift and twisted-cubic certification");
  std::string lift_controls, lift_t = "0:2:0.001", lift_from = "0,0,0,0,0", lift_dir = ".";
  lift->add_option("--controls", lift_controls, "{\"u\":signal,\"w\":signal}")->required()->check(CLI::ExistingFile);
  lift->add_option("--t", lift_t, "start:end:step");
  lift->add_option("--from", lift_from, "initial y0,y1,y2,y3,y4");
  lift->add_option("--out-dir", lift_dir, "directory for the CSV files");
  add_common(lift, lift_c, false);

  auto* plan = app.add_subcommand("plan", "steer between two chart points");
  std::string plan_mode, plan_from, plan_to, plan_csv = "plan_replay.csv";
  std::optional<double> plan_tol;
  plan->add_option("--mode", plan_mode, "attacking|landing|g2d")->required()->check(CLI::IsMember({"attacking", "landing", "g2s", "g2d"}));
  plan->add_option("--from", plan_from, "x,y,z,a,b")->required();
  plan->add_option("--to", plan_to, "x,y,z,a,b")->required();
  plan->add_option("--tol", plan_tol, "endpoint tolerance (default 1e-3)");
  plan->add_option("--csv", plan_csv, "replay CSV path");
  add_common(plan, plan_c, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (*verify) {
      verify_c.kv = read_config(verify_c.config);
      SuiteOptions opt;
      opt.seed = verify_c.resolve_seed();
      opt.catalog = catalog_name;
      for (const auto& [k, v] : verify_c.kv)
        if (k != "seed") opt.thresholds[k] = to_double(k, v);
      if (suite == "all") {
        auto reports = run_all(opt);
        auto j = combined_report(reports, opt.seed);
        emit(verify_c, j);
        return j.at("pass").get<bool>() ? kOk : kFail;
      }
      auto r = run_suite(suite, opt);
      emit(verify_c, r.to_json(true));
      return r.pass ? kOk : kFail;
    }

    if (*simulate) {
      sim_c.kv = read_config(sim_c.config);
      auto prog = ControlProgram::from_json(read_json(sim_controls));
      prog.mode = parse_mode(sim_mode);
      if (sim_duration) prog.duration = *sim_duration;
      if (sim_dt) prog.dt = *sim_dt;
      if (!(prog.dt > 0.0) || !(prog.duration >= 0.0)) throw UsageError("need dt > 0 and duration >= 0");
      auto tr = integrate_trajectory(prog, parse_point(sim_from, "--from"));
      ResidualTolerances tol{sim_c.tol("contact_tol", 1e-9), sim_c.tol("nullity_tol", 1e-8)};
      auto rep = constraint_residuals(tr, prog.mode, tol);
      trajectory_csv(sim_csv, tr);
      auto j = residual_json(rep, tr);
      j["csv"] = sim_csv;
      emit(sim_c, j);
      return rep.certified ? kOk : kFail;
    }

    if (*classify) {
      auto v = parse_list(cls_vector, 4, "--vector");
      Vector4 X(v[0], v[1], v[2], v[3]);
      cls_c.kv = read_config(cls_c.config);
      auto g = bilinears(X, X);
      NullClass c;
      try {
        c = classify_direction(X, cls_c.tol("classify_tol", kClassifyTol));
      } catch (const ZeroVector& e) {
        throw UsageError(e.what());
      }
      emit(cls_c, {{"class", to_string(c)}, {"g1", g.g1}, {"g2", g.g2}, {"g3", g.g3}, {"upsilon", quartic_upsilon(X)}});
      return kOk;
    }

    if (*lift) {
      lift_c.kv = read_config(lift_c.config);
      std::vector<double> range;
      {
        std::string s = lift_t;
        std::replace(s.begin(), s.end(), ':', ',');
        range = parse_list(s, 3, "--t");
      }
      if (!(range[2] > 0.0) || !(range[1] > range[0])) throw UsageError("--t needs start < end and step > 0");
      auto q = parse_list(lift_from, 5, "--from");
      auto ctl = D2Controls::from_json(read_json(lift_controls));
      auto curve = integrate_d2_curve({q[0], q[1], q[2], q[3], q[4]}, ctl, range[1] - range[0], range[2], range[0]);
      fs::create_directories(lift_dir);
      nlohmann::json j;
      j["d2_residual"] = d2_constraint_residual(curve);
      write_csv((fs::path(lift_dir) / "d2_curve.csv").string(), "t,y0,y1,y2,y3,y4,u,w", [&](std::ostream& o) {
        for (const auto& s : curve.samples) {
          o << s.t;
          for (double c : s.y) o << ',' << c;
          o << ',' << s.u << ',' << s.w << "\n";
        }
      });
      LiftedCurve lc;
      try {
        lc = lift_curve(curve, lift_c.tol("lift_epsilon", kLiftEpsilon));
      } catch (const LiftSingular& e) {
        j["error"] = e.what();
        emit(lift_c, j);
        return kFail;
      }
      write_csv((fs::path(lift_dir) / "lifted_curve.csv").string(),
                "t,y0,y1,y2,y3,y4,y5,dy0,dy1,dy2,dy3,dy4,dy5", [&](std::ostream& o) {
                  for (const auto& s : lc.samples) {
                    o << s.t;
                    for (double c : s.y) o << ',' << c;
                    for (double c : s.ydot) o << ',' << c;
                    o << "\n";
                  }
                });
      auto pc = project_to_contact(lc);
      write_csv((fs::path(lift_dir) / "projected_curve.csv").string(), "t,x0,x1,x2,x3,x4,x5,v0,v1,v2,v3,v4,y4",
                [&](std::ostream& o) {
                  for (const auto& s : pc.samples) {
                    o << s.t;
                    for (double c : s.x) o << ',' << c;
                    o << ',' << s.fiber;
                    for (int i = 0; i < 5; ++i) o << ',' << s.velocity[i];
                    o << ',' << s.y4 << "\n";
                  }
                });
      auto rep = certify_twisted_cubic_tangency(pc);
      const double contact_tol = lift_c.tol("contact_tol", 1e-7), angular_tol = lift_c.tol("angular_tol", 1e-5);
      j["certification"] = rep.to_json();
      j["certified"] = rep.max_contact <= contact_tol && rep.max_angular <= angular_tol;
      j["out_dir"] = lift_dir;
      emit(lift_c, j);
      return j["certified"].get<bool>() ? kOk : kFail;
    }

    if (*plan) {
      plan_c.kv = read_config(plan_c.config);
      const double tol = plan_tol ? *plan_tol : plan_c.tol("tol", 1e-3);
      if (!(tol > 0.0)) throw UsageError("--tol must be positive");
      const auto mode = parse_mode(plan_mode);
      const auto a = parse_point(plan_from, "--from"), b = parse_point(plan_to, "--to");
      Plan p;
      int code = kOk;
      try {
        p = plan_path(mode, a, b, tol);
      } catch (const OutsideChart& e) {
        throw UsageError(e.what());
      } catch (const NoConvergence& e) {
        p = e.best();
        code = kFail;
      }
      trajectory_csv(plan_csv, replay(p));
      auto j = p.to_json();
      j["converged"] = code == kOk;
      j["csv"] = plan_csv;
      emit(plan_c, j);
      return code;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  } catch (const ControlFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
