#include "robin_plap_cli/runner.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <fstream>
#include <functional>
#include <random>
#include <system_error>

#include "robin_plap/experiments.hpp"
#include "robin_plap/homotopy.hpp"
#include "robin_plap/io.hpp"
#include "robin_plap/shooting.hpp"
#include "robin_plap/subsuper.hpp"

namespace robin_plap::cli {

void Stage::set(const std::string& key, double v) { values.emplace_back(key, format_double(v)); }
void Stage::set(const std::string& key, long long v) { values.emplace_back(key, std::to_string(v)); }
void Stage::set(const std::string& key, bool v) { values.emplace_back(key, v ? "true" : "false"); }
void Stage::set(const std::string& key, std::string v) { values.emplace_back(key, std::move(v)); }

bool RunReport::all_pass() const {
  return !stages.empty() && std::all_of(stages.begin(), stages.end(), [](const Stage& s) { return s.pass; });
}

namespace {

class Pipeline {
 public:
  explicit Pipeline(RunReport& report) : report_(report) {}

  /// Runs one stage unless an earlier gating stage failed.
  bool stage(const std::string& name, const std::function<bool(Stage&)>& body, bool gate = true) {
    if (stopped_) return false;
    Stage s;
    s.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      s.pass = body(s);
    } catch (const std::exception& e) {
      s.pass = false;
      s.message = e.what();
    }
    s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = s.pass;
    report_.stages.push_back(std::move(s));
    if (!ok && gate) stopped_ = true;
    return ok;
  }

  bool stopped() const { return stopped_; }

 private:
  RunReport& report_;
  bool stopped_ = false;
};

MeshPtr build_mesh(const MeshBlock& m) {
  if (m.kind == "interval") return share(Mesh::interval(m.a, m.b, m.n, m.quadrature_order));
  return share(Mesh::rectangle(m.lx, m.ly, m.nx, m.ny, m.quadrature_order));
}

std::array<RobinOperatorSpec, 2> build_ops(const ScenarioConfig& cfg, const MeshPtr& mesh) {
  std::array<RobinOperatorSpec, 2> ops;
  for (int i = 0; i < 2; ++i) {
    ops[i] = RobinOperatorSpec::make(mesh, cfg.op->p[i], cfg.op->beta[i]);
    if (cfg.op->eps_reg) ops[i].grad_regularization = *cfg.op->eps_reg;
    ops[i].validate();
  }
  return ops;
}

ReactionSpec build_reaction(const ScenarioConfig& cfg) {
  const ReactionBlock& r = *cfg.reaction;
  try {
    if (r.name == "bump" || r.name == "bump-coupled")
      return make_bump_reaction(r.shape, cfg.op->p, r.name == "bump-coupled");
    ReactionSpec spec = r.name == "zero" ? make_zero_reaction(r.k_plus, r.k_minus)
                                         : make_expression_reaction(r.f1, r.f2, r.constants);
    spec.k_plus = r.k_plus;
    spec.k_minus = r.k_minus;
    spec.eta = r.eta;
    spec.theta = r.theta;
    spec.validate();
    return spec;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[reaction] ") + e.what());
  }
}

Forcing build_forcing(const ScenarioConfig& cfg) {
  try {
    const Expression e = Expression::parse(cfg.solve.forcing);
    return [e](Point x) { return e(x, 0.0, 0.0); };
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string("[solve] forcing: ") + ex.what());
  }
}

class Outputs {
 public:
  Outputs(const std::filesystem::path& dir, RunReport& report) : dir_(dir), report_(report) {}

  template <class Fn>
  void write(const std::string& name, Fn&& fn) {
    std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
    fn(out);
    report_.files.push_back(name);
  }

  void solution(const std::string& stem, const FieldPair& u) {
    write(stem + ".csv", [&](std::ostream& o) { write_solution_csv(o, u); });
    if (u[0].mesh->dimension() == 2) write(stem + ".vtk", [&](std::ostream& o) { write_solution_vtk(o, u); });
  }

 private:
  std::filesystem::path dir_;
  RunReport& report_;
};

std::string indexed(const std::string& base, int i) { return base + std::to_string(i + 1); }

double min_of(const FeField& u) { return u.coeffs.minCoeff(); }
double max_of(const FeField& u) { return u.coeffs.maxCoeff(); }

// State shared by the constant-sign, third-solution and verify-all pipelines.
struct SystemRun {
  SystemSpec sys;
  std::array<EigenPair, 2> eig;
  HypothesisReport h2;
  ConstructedRegion pos, neg;
  FieldPair up, un;
};

void run_system(const ScenarioConfig& cfg, const MeshPtr& mesh, Pipeline& pipe, Outputs& out, bool third,
                bool full) {
  SystemRun s;
  s.sys = SystemSpec{build_ops(cfg, mesh), build_reaction(cfg)};
  const auto exps = s.sys.exponents();
  const SamplingGrid grid = SamplingGrid::from_mesh(*mesh);
  std::mt19937_64 master(cfg.seed);
  SubsuperOptions sopts;
  sopts.probe_count = cfg.subsuper.probe_count;
  sopts.max_halvings = cfg.subsuper.max_halvings;

  auto put_hyp = [](Stage& st, const HypothesisReport& h) {
    st.set("worst_violation", h.worst_violation);
    st.set("worst_component", h.worst_at.component + 1);
    st.set("worst_x", h.worst_at.x.x);
    st.set("worst_s1", h.worst_at.s1);
    st.set("worst_s2", h.worst_at.s2);
    if (!h.note.empty()) st.set("note", h.note);
    return h.pass;
  };

  pipe.stage("check_H1", [&](Stage& st) { return put_hyp(st, check_H1(s.sys.reactions, grid)); });
  pipe.stage("eigen", [&](Stage& st) {
    for (int i = 0; i < 2; ++i) {
      s.eig[i] = first_eigenpair(s.sys.ops[i]);
      st.set(indexed("lambda", i), s.eig[i].lambda);
      st.set(indexed("phi_min", i), min_of(s.eig[i].phi));
    }
    return true;
  });
  pipe.stage("check_H2", [&](Stage& st) {
    s.h2 = check_H2(s.sys.reactions, exps, {s.eig[0].lambda, s.eig[1].lambda}, grid);
    for (int i = 0; i < 2; ++i) {
      st.set(indexed("eta", i), s.sys.reactions.eta[i]);
      st.set(indexed("delta_plus", i), s.h2.delta_plus[i]);
      st.set(indexed("delta_minus", i), s.h2.delta_minus[i]);
    }
    return put_hyp(st, s.h2);
  });
  pipe.stage("check_H3", [&](Stage& st) {
    double rho = 0.0;
    for (int i = 0; i < 2; ++i)
      rho = std::max({rho, s.sys.reactions.k_plus[i], -s.sys.reactions.k_minus[i]});
    const HypothesisReport h3 = check_H3(s.sys.reactions, rho, grid);
    st.set("rho", rho);
    st.set("mu1", h3.mu[0]);
    st.set("mu2", h3.mu[1]);
    return put_hyp(st, h3);
  });
  pipe.stage("check_H4", [&](Stage& st) {
    for (int i = 0; i < 2; ++i) st.set(indexed("theta", i), s.sys.reactions.theta[i]);
    return put_hyp(st, check_H4(s.sys.reactions, exps, grid, std::array<double, 2>{s.eig[0].lambda, s.eig[1].lambda}));
  });

  auto put_region = [](Stage& st, const ConstructedRegion& r) {
    st.set("epsilon", r.epsilon);
    st.set("halvings", r.halvings);
    st.set("worst_margin", r.verification.worst_margin);
    st.set("worst_inequality", r.verification.worst_inequality);
    st.set("probes", r.verification.probes_checked);
    st.set("monotone_detected", r.verification.monotone_detected);
    return r.verification.pass;
  };
  pipe.stage("positive_region", [&](Stage& st) {
    sopts.seed = master();
    s.pos = construct_positive_pair(s.sys, s.eig, s.h2, sopts);
    st.set("probe_seed", std::to_string(sopts.seed));
    return put_region(st, s.pos);
  });
  pipe.stage("negative_region", [&](Stage& st) {
    sopts.seed = master();
    s.neg = construct_negative_pair(s.sys, s.eig, s.h2, sopts);
    st.set("probe_seed", std::to_string(sopts.seed));
    return put_region(st, s.neg);
  });
  if (full) {
    pipe.stage("oversized_region_rejected", [&](Stage& st) {
      sopts.seed = master();
      const double eps = 10.0 * s.pos.epsilon;
      const SubsuperReport r = verify_subsuper(s.sys, positive_region(s.sys, s.eig, eps), sopts);
      st.set("epsilon", eps);
      st.set("worst_margin", r.worst_margin);
      st.set("worst_inequality", r.worst_inequality);
      return !r.pass;
    });
  }

  PicardOptions popts;
  popts.tol = cfg.subsuper.picard_tol;
  popts.max_outer = cfg.subsuper.max_outer;
  auto solve_side = [&](Stage& st, const ConstructedRegion& region, bool positive, FieldPair& u) {
    auto [sol, rep] = solve_in_region(s.sys, region.region, popts);
    u = sol;
    st.set("converged", rep.converged);
    st.set("iterations", rep.iterations);
    st.set("omega", rep.omega);
    st.set("residual", rep.residual_norm);
    st.set("truncation_inactive", rep.truncation_inactive);
    bool sign_ok = true;
    for (int i = 0; i < 2; ++i) {
      const double lo = min_of(u[i]);
      const double hi = max_of(u[i]);
      st.set(indexed("min_u", i), lo);
      st.set(indexed("max_u", i), hi);
      sign_ok = sign_ok && (positive ? lo > 0.0 && hi <= s.sys.reactions.k_plus[i]
                                     : hi < 0.0 && lo >= s.sys.reactions.k_minus[i]);
    }
    st.set("sign_and_bounds", sign_ok);
    if (!rep.converged) st.message = rep.diagnostics;
    out.solution(positive ? "positive" : "negative", u);
    return rep.converged && sign_ok && rep.residual_norm <= 1e-8;
  };
  pipe.stage("positive_solution", [&](Stage& st) { return solve_side(st, s.pos, true, s.up); });
  pipe.stage("negative_solution", [&](Stage& st) { return solve_side(st, s.neg, false, s.un); });

  if (!third) return;
  ThirdSolutionReport tr;
  pipe.stage("third_solution", [&](Stage& st) {
    ThirdSolutionOptions o;
    o.scales = cfg.third.scales;
    o.xi = cfg.third.xi;
    o.use_continuation = cfg.third.continuation;
    o.tol = cfg.third.tol;
    tr = find_third_solution(s.sys, s.un, s.up, s.eig, o);
    st.set("starts", tr.starts_tried);
    st.set("converged_runs", tr.converged_runs);
    st.set("candidates", static_cast<long long>(tr.candidates.size()));
    st.set("outside_hull", static_cast<long long>(tr.outside_count()));
    st.set("r_hat", tr.r_hat);
    st.set("r_tilde", tr.r_tilde);
    bool found = false;
    for (std::size_t k = 0; k < tr.candidates.size(); ++k) {
      const Candidate& c = tr.candidates[k];
      const std::string p = "candidate" + std::to_string(k) + ".";
      st.set(p + "start", c.start_label);
      st.set(p + "inside_hull", c.inside_hull);
      st.set(p + "hull_excursion", c.hull_excursion);
      st.set(p + "norm", c.norm);
      st.set(p + "residual", c.residual_norm);
      found = found || (!c.inside_hull && c.hull_excursion > 1e-3 && c.residual_norm <= 1e-8);
    }
    out.write("candidates.csv", [&](std::ostream& o) { write_candidates_csv(o, tr.candidates); });
    for (std::size_t b = 0; b < tr.branches.size(); ++b) {
      st.set("branch" + std::to_string(b) + ".reached_end", tr.branches[b].reached_end);
      st.set("branch" + std::to_string(b) + ".max_norm", tr.branches[b].max_norm);
      if (!tr.branches[b].t.empty())
        out.write("branch" + std::to_string(b) + ".csv", [&](std::ostream& o) { write_branch_csv(o, tr.branches[b]); });
    }
    return found;
  });

  if (!full) return;
  pipe.stage("distinct_solutions", [&](Stage& st) {
    auto matches = [&](const FieldPair& u) {
      return std::any_of(tr.candidates.begin(), tr.candidates.end(), [&](const Candidate& c) {
        return std::max(sup_distance(c.u[0], u[0]), sup_distance(c.u[1], u[1])) < 1e-6;
      });
    };
    const bool pos_found = matches(s.up);
    const bool neg_found = matches(s.un);
    st.set("count", static_cast<long long>(tr.candidates.size()));
    st.set("positive_matched", pos_found);
    st.set("negative_matched", neg_found);
    return pos_found && neg_found && tr.outside_count() >= 1 && tr.candidates.size() >= 3;
  });
}

void run_eigen(const ScenarioConfig& cfg, const MeshPtr& mesh, Pipeline& pipe, Outputs& out) {
  const auto ops = build_ops(cfg, mesh);
  std::array<EigenPair, 2> eig;
  for (int i = 0; i < 2; ++i) {
    pipe.stage(indexed("eigen", i), [&](Stage& st) {
      eig[i] = first_eigenpair(ops[i]);
      const double res = eigen_residual_norm(ops[i], eig[i]);
      st.set("p", ops[i].p);
      st.set("beta", ops[i].beta);
      st.set("lambda", eig[i].lambda);
      st.set("residual", res);
      st.set("phi_min", min_of(eig[i].phi));
      return min_of(eig[i].phi) > 0.0 && res <= 1e-6;
    });
    if (mesh->dimension() == 1) {
      pipe.stage(indexed("second_eigen", i), [&](Stage& st) {
        const double l2 = second_eigenvalue_1d(ops[i]);
        st.set("lambda_hat", l2);
        return l2 > eig[i].lambda;
      }, false);
    }
  }
  if (!pipe.stopped()) out.solution("eigenfunctions", {eig[0].phi, eig[1].phi});
}

void run_solve(const ScenarioConfig& cfg, const MeshPtr& mesh, Pipeline& pipe, Outputs& out) {
  const auto ops = build_ops(cfg, mesh);
  const Forcing g = build_forcing(cfg);
  FieldPair u{FeField::zero(mesh), FeField::zero(mesh)};
  SolverOptions so;
  so.tol_residual = cfg.solve.tol;
  so.max_iters = cfg.solve.max_iters;
  for (int i = 0; i < 2; ++i) {
    pipe.stage(indexed("solve", i), [&](Stage& st) {
      auto [sol, rep] = solve_Ap(ops[i], load(ops[i], g), so);
      u[i] = sol;
      st.set("converged", rep.converged);
      st.set("iterations", rep.iterations);
      st.set("residual", rep.final_residual_norm);
      st.set("energy", rep.energy_value);
      st.set("min_u", min_of(sol));
      st.set("max_u", max_of(sol));
      return rep.converged;
    }, false);
  }
  out.solution("solution", u);
}

void run_resonance(const ScenarioConfig& cfg, const MeshPtr& mesh, Pipeline& pipe) {
  const auto ops = build_ops(cfg, mesh);
  const Forcing h = build_forcing(cfg);
  for (int i = 0; i < 2; ++i) {
    pipe.stage(indexed("resonance", i), [&](Stage& st) {
      const ResonanceReport r = experiment_resonance(ops[i], h);
      st.set("p", ops[i].p);
      st.set("lambda", r.lambda);
      st.set("non_solvable", r.non_solvable);
      if (r.linear) {
        st.set("ls_residual", r.ls_residual);
        st.set("off_resonance_residual", r.off_resonance_residual);
        st.set("solvable_off_resonance", r.solvable_off_resonance);
        return r.non_solvable && r.solvable_off_resonance;
      }
      st.set("starts", r.starts);
      st.set("diverged", r.diverged);
      st.set("stalled", r.stalled);
      st.set("smallest_residual", r.smallest_residual);
      return r.non_solvable;
    }, false);
  }
}

void run_antimax(const ScenarioConfig& cfg, const MeshPtr& mesh, Pipeline& pipe) {
  const auto ops = build_ops(cfg, mesh);
  const Forcing h = build_forcing(cfg);
  AntimaxOptions o;
  o.delta_grid = cfg.antimax.delta_grid;
  o.below_factor = cfg.antimax.below_factor;
  for (int i = 0; i < 2; ++i) {
    pipe.stage(indexed("antimax", i), [&](Stage& st) {
      const AntimaxReport r = experiment_antimax(ops[i], h, o);
      st.set("p", ops[i].p);
      st.set("lambda", r.lambda);
      bool ok = true;
      for (std::size_t k = 0; k < r.entries.size(); ++k) {
        const auto& e = r.entries[k];
        const std::string p = "delta" + std::to_string(k) + ".";
        st.set(p + "value", e.delta);
        st.set(p + "mu", e.mu);
        st.set(p + "solutions", e.solutions_found);
        st.set(p + "all_negative", e.all_negative);
        st.set(p + "max_u", e.max_value);
        if (e.delta <= cfg.antimax.assert_below) ok = ok && e.all_negative;
      }
      st.set("threshold", r.threshold);
      st.set("monotone_onset", r.monotone_onset);
      st.set("below.mu", r.below.mu);
      st.set("below.positive", r.below_positive);
      return ok && r.below_positive;
    }, false);
  }
}

}  // namespace

RunReport run(const ScenarioConfig& cfg) {
  cfg.validate();
  RunReport report;
  report.command = cfg.command;
  report.seed = cfg.seed;
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + cfg.out_dir.string() + "': " + ec.message());

  MeshPtr mesh;
  try {
    mesh = build_mesh(*cfg.mesh);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[mesh] ") + e.what());
  }
  try {
    build_ops(cfg, mesh);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[operator] ") + e.what());
  }
  if (cfg.reaction) build_reaction(cfg);
  if (cfg.command == "solve" || cfg.command == "resonance" || cfg.command == "antimax") build_forcing(cfg);

  Pipeline pipe(report);
  Outputs out(cfg.out_dir, report);
  const std::string& c = cfg.command;
  if (c == "eigen") run_eigen(cfg, mesh, pipe, out);
  else if (c == "solve") run_solve(cfg, mesh, pipe, out);
  else if (c == "resonance") run_resonance(cfg, mesh, pipe);
  else if (c == "antimax") run_antimax(cfg, mesh, pipe);
  else run_system(cfg, mesh, pipe, out, c != "subsuper", c == "verify-all");
  return report;
}

void write_report_txt(std::ostream& out, const RunReport& report) {
  out << "robin-plap " << report.command << "  seed " << report.seed << "\n";
  out << "status: " << (report.all_pass() ? "PASS" : "FAIL") << "\n\n";
  for (const Stage& s : report.stages) {
    char head[160];
    std::snprintf(head, sizeof head, "[%s] %-28s %9.3f s\n", s.pass ? "PASS" : "FAIL", s.name.c_str(), s.seconds);
    out << head;
    for (const auto& [k, v] : s.values) out << "    " << k << " = " << v << "\n";
    if (!s.message.empty()) out << "    message: " << s.message << "\n";
  }
  if (!report.files.empty()) {
    out << "\nfiles:\n";
    for (const auto& f : report.files) out << "    " << f << "\n";
  }
}

void write_report_kv(std::ostream& out, const RunReport& report) {
  out << "command=" << report.command << "\n";
  out << "seed=" << report.seed << "\n";
  out << "status=" << (report.all_pass() ? "pass" : "fail") << "\n";
  for (const Stage& s : report.stages) {
    out << "stage." << s.name << ".pass=" << (s.pass ? 1 : 0) << "\n";
    for (const auto& [k, v] : s.values) out << "stage." << s.name << "." << k << "=" << v << "\n";
    if (!s.message.empty()) out << "stage." << s.name << ".message=" << s.message << "\n";
  }
  for (const auto& f : report.files) out << "file=" << f << "\n";
}

OutputLock::OutputLock(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto path = (dir / ".robin-plap.lock").string();
  fd_ = ::open(path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
  if (fd_ < 0) throw std::runtime_error("cannot open lock file " + path + ": " + std::strerror(errno));
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw LockBusyError("another robin-plap instance is using " + dir.string());
  }
}

OutputLock::~OutputLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

}  // namespace robin_plap::cli
