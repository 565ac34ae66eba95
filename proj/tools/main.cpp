#include "rigidity/config.hpp"
#include "rigidity/errors.hpp"
#include "rigidity/experiment.hpp"
#include "rigidity/geometry.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <iostream>

using namespace rigidity;
namespace fs = std::filesystem;

namespace {

struct Globals {
  int precision = 256;
  int workers = 1;
  bool json = false;
  std::string out;
};

Globals g;

void emit(const std::string& command, Document doc) {
  Document head;
  head["schema_version"] = kSchemaVersion;
  head["command"] = command;
  head["precision"] = g.precision;
  for (auto it = doc.begin(); it != doc.end(); ++it) head[it.key()] = it.value();
  if (g.json)
    std::cout << head.dump(2) << "\n";
  else
    std::cout << render_text(head);
}

void save(const std::string& name, const std::string& content) {
  if (g.out.empty()) return;
  fs::create_directories(g.out);
  write_file((fs::path(g.out) / name).string(), content);
}

SymbolicWord word_arg(const std::string& s, bool cyclic = true) {
  return SymbolicWord::parse(trim(s), cyclic);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic-orbit and suspension-entropy diagnostics for dispersing billiards"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--precision", g.precision, "working precision in bits")
      ->check(CLI::Range(64, 1 << 16));
  app.add_option("--workers", g.workers, "worker count (stages run serially)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--json", g.json, "machine-readable output");
  app.add_option("--out", g.out, "directory for data files");

  std::function<void()> action;

  // table validate
  auto* table_cmd = app.add_subcommand("table", "billiard tables")->require_subcommand(1);
  std::string table_path;
  auto* tv = table_cmd->add_subcommand("validate", "check disjointness and non-eclipse");
  tv->add_option("--table", table_path)->required()->check(CLI::ExistingFile);
  tv->callback([&] {
    action = [&] {
      BilliardTable raw = load_table(table_path);
      NonEclipseReport ne = non_eclipse_check(raw);
      ClearanceReport cl = clearance_check(raw);
      Document d;
      d["table"] = raw.name();
      d["obstacles"] = raw.size();
      d["clearance"] = cl.clearance;
      d["non_eclipse_margin"] = ne.margin;
      d["valid"] = ne.pass && cl.pass;
      emit("table validate", d);
    };
  });

  // orbit find | step
  auto* orbit_cmd = app.add_subcommand("orbit", "periodic orbits and single steps")->require_subcommand(1);
  std::string word;
  auto* of = orbit_cmd->add_subcommand("find", "periodic orbit of a symbolic word");
  of->add_option("--table", table_path)->required()->check(CLI::ExistingFile);
  of->add_option("--word", word)->required();
  of->callback([&] {
    action = [&] {
      BilliardTable t = load_table(table_path);
      PeriodicOrbit o = find_periodic_orbit(t, word_arg(word));
      Document d = orbit_document(o);
      d["table"] = t.name();
      emit("orbit find", d);
    };
  });
  int obstacle = 1, steps = 1;
  std::string s_text, phi_text;
  auto* os = orbit_cmd->add_subcommand("step", "iterate the billiard map");
  os->add_option("--table", table_path)->required()->check(CLI::ExistingFile);
  os->add_option("--obstacle", obstacle, "1-based obstacle label")->required();
  os->add_option("--s", s_text, "arclength")->required();
  os->add_option("--phi", phi_text, "reflection angle")->required();
  os->add_option("--steps", steps)->check(CLI::PositiveNumber);
  os->callback([&] {
    action = [&] {
      BilliardTable t = load_table(table_path);
      require(obstacle >= 1 && obstacle <= t.size(), "obstacle label out of range");
      PhasePoint x{obstacle - 1, eval_expression(s_text), eval_expression(phi_text)};
      Document pts = Document::array();
      for (int k = 0; k < steps; ++k) {
        StepResult r = billiard_step(t, x);
        Document p;
        p["obstacle"] = r.next.obstacle + 1;
        p["s"] = real_string(r.next.s);
        p["phi"] = real_string(r.next.phi);
        p["flight"] = real_string(r.flight);
        pts.push_back(p);
        x = r.next;
      }
      Document d;
      d["table"] = t.name();
      d["step"] = pts;
      emit("orbit step", d);
    };
  });

  // nf extract
  int invariants = 3, order = 8, depth = 20;
  std::string connector;
  auto* nf_cmd = app.add_subcommand("nf", "Birkhoff normal forms")->require_subcommand(1);
  auto* nx = nf_cmd->add_subcommand("extract", "normal form at a periodic orbit");
  nx->add_option("--table", table_path)->required()->check(CLI::ExistingFile);
  nx->add_option("--word", word)->required();
  nx->add_option("--invariants", invariants)->check(CLI::PositiveNumber);
  nx->add_option("--order", order)->check(CLI::PositiveNumber);
  nx->add_option("--connector", connector, "also build the homoclinic frame");
  nx->add_option("--depth", depth)->check(CLI::PositiveNumber);
  nx->callback([&] {
    action = [&] {
      BilliardTable t = load_table(table_path);
      PeriodicOrbit o = find_periodic_orbit(t, word_arg(word));
      NormalForm nf = orbit_normal_form(t, o, invariants, order);
      Document d;
      d["table"] = t.name();
      d["word"] = o.word.str();
      d["normal_form"] = normal_form_document(nf);
      if (!connector.empty()) {
        HomoclinicSegment hs = find_homoclinic_segment(t, o, word_arg(connector, false), depth);
        d["frame"] = frame_document(mirror_normalize(t, nf, hs));
      }
      emit("nf extract", d);
    };
  });

  // horseshoe scan
  std::string block, fits = "period,trace,series:P=2";
  int nmax = 30;
  auto* hs_cmd = app.add_subcommand("horseshoe", "horseshoe families")->require_subcommand(1);
  auto* scan = hs_cmd->add_subcommand("scan", "family h_n and expansion fits");
  scan->add_option("--table", table_path)->required()->check(CLI::ExistingFile);
  scan->add_option("--block", block)->required();
  scan->add_option("--connector", connector)->required();
  scan->add_option("--nmax", nmax)->check(CLI::NonNegativeNumber);
  scan->add_option("--fit", fits, "comma list of period, trace, series:P=<order>");
  scan->callback([&] {
    action = [&] {
      std::vector<FitSpec> specs = parse_fit_list(fits);
      BilliardTable t = load_table(table_path);
      HorseshoeFamily fam = horseshoe_family(t, word_arg(block), word_arg(connector, false), nmax);
      std::string csv = family_csv(fam);
      save("horseshoe.csv", csv);
      Document d;
      d["table"] = t.name();
      d["block"] = fam.block.str();
      d["connector"] = fam.connector.str();
      d["lambda"] = real_string(fam.lambda);
      d["rows"] = static_cast<int>(fam.rows.size());
      Document out = Document::array();
      for (const auto& spec : specs) out.push_back(fit_document(apply_fit(fam, spec)));
      d["fit"] = out;
      if (g.json) {
        Document rows = Document::array();
        for (const auto& r : fam.rows) {
          Document x;
          x["n"] = r.n;
          x["map_period"] = r.map_period;
          x["flow_period"] = real_string(r.flow_period);
          x["le"] = real_string(r.le);
          x["trace"] = real_string(r.trace);
          rows.push_back(x);
        }
        d["row"] = rows;
      } else if (g.out.empty()) {
        std::cout << csv << "\n";
      }
      emit("horseshoe scan", d);
    };
  });

  // rigidity report
  std::string words;
  double tolerance = 1e-30;
  auto* rig = app.add_subcommand("rigidity", "MME = SRB diagnostics")->require_subcommand(1);
  auto* rep = rig->add_subcommand("report", "verdict over an orbit ensemble");
  rep->add_option("--table", table_path)->required()->check(CLI::ExistingFile);
  rep->add_option("--words", words, "comma list of words")->required();
  rep->add_option("--tolerance", tolerance, "dispersion tolerance");
  rep->callback([&] {
    action = [&] {
      BilliardTable t = load_table(table_path);
      std::vector<SymbolicWord> ws;
      for (const auto& w : split_list(words)) ws.push_back(word_arg(w));
      RigidityReport r = rigidity_report(t, ws, {}, tolerance);
      Document d = rigidity_document(r);
      d["table"] = t.name();
      save("rigidity.txt", render_text(d));
      emit("rigidity report", d);
    };
  });

  // entropy suspension
  std::string sft_path, roof_path;
  auto* ent = app.add_subcommand("entropy", "shift entropies")->require_subcommand(1);
  auto* sus = ent->add_subcommand("suspension", "topological entropy of a suspension flow");
  sus->add_option("--sft", sft_path)->required()->check(CLI::ExistingFile);
  sus->add_option("--roof", roof_path)->check(CLI::ExistingFile);
  sus->callback([&] {
    action = [&] {
      SftConfig sft = load_sft(sft_path);
      MarkovSystem sys = sft.system;
      const int m = sys.size();
      if (!roof_path.empty()) sys = sys.with_roof(load_roof(roof_path, m));
      if (!sys.has_roof()) sys = sys.with_roof(Matrix64::Ones(m, m));
      double s = suspension_htop(sys);
      MarkovMeasure mme = equilibrium_measure(sys, -s * sys.roof);
      MarkovMeasure parry = parry_measure(sys);
      Document d;
      d["shift"] = sft.name;
      d["sft_entropy"] = sft_entropy(sys);
      d["suspension_htop"] = s;
      d["abramov_parry"] = abramov(parry, sys);
      d["abramov_flow_mme"] = abramov(mme, sys);
      d["roof"] = matrix_document(sys.roof);
      d["flow_mme"] = measure_document(mme);
      emit("entropy suspension", d);
    };
  });

  // flexibility sample | sweep
  std::string target, region = "II", family = "e-proof";
  int grid = 100;
  auto* flex = app.add_subcommand("flexibility", "entropy flexibility")->require_subcommand(1);
  auto* sample = flex->add_subcommand("sample", "realize a target (c_mu, c_top)");
  sample->add_option("--sft", sft_path)->required()->check(CLI::ExistingFile);
  sample->add_option("--target", target, "c_mu,c_top")->required();
  sample->add_option("--region", region)->check(CLI::IsMember({"I", "II"}));
  sample->callback([&] {
    action = [&] {
      SftConfig sft = load_sft(sft_path);
      std::vector<Real> t = eval_list(target);
      require(t.size() == 2, "target must be c_mu,c_top");
      FlexibilityResult r = solve_flexibility(sft.system, to_double(t[0]), to_double(t[1]),
                                              region == "I" ? FlexRegion::I : FlexRegion::II);
      Document d;
      d["shift"] = sft.name;
      d["sft_entropy"] = sft_entropy(sft.system);
      d["region"] = region;
      d["target"] = {to_double(t[0]), to_double(t[1])};
      d["result"] = flexibility_document(r);
      emit("flexibility sample", d);
    };
  });
  auto* sweep = flex->add_subcommand("sweep", "roof family over the boundary of the unit square");
  sweep->add_option("--sft", sft_path, "shift with measures mu and rho and gamma")
      ->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--family", family)->check(CLI::IsMember({"e-proof"}));
  sweep->add_option("--grid", grid)->check(CLI::PositiveNumber);
  sweep->callback([&] {
    action = [&] {
      SftConfig sft = load_sft(sft_path);
      require(sft.measures.count("mu") && sft.measures.count("rho"),
              "sweep needs [measure] sections named mu and rho");
      require(sft.gamma.has_value(), "sweep needs gamma in the preamble");
      auto pts = roof_family_sweep(sft.system, sft.measures.at("mu"), sft.measures.at("rho"),
                                   *sft.gamma, grid);
      std::string csv = sweep_csv(pts);
      save("sweep.csv", csv);
      std::string dat;
      for (const auto& p : pts) dat += double_string(p.h_mu_flow) + " " + double_string(p.h_top_flow) + "\n";
      save("sweep.dat", dat);
      Document side;
      side["schema_version"] = kSchemaVersion;
      side["columns"] = {"h_mu_flow", "h_top_flow"};
      side["family"] = family;
      side["grid"] = grid;
      side["path"] = "s: 0 -> 1 at t = 0, t: 0 -> 1 at s = 1, s: 1 -> 0 at t = 1, t: 1 -> 0 at s = 0";
      save("sweep.json", side.dump(2) + "\n");
      if (g.json) {
        Document d;
        d["shift"] = sft.name;
        d["family"] = family;
        Document rows = Document::array();
        for (const auto& p : pts) rows.push_back({p.s, p.t, p.h_mu_flow, p.h_top_flow});
        d["columns"] = {"s", "t", "h_mu_flow", "h_top_flow"};
        d["rows"] = rows;
        emit("flexibility sweep", d);
      } else {
        std::cout << csv;
      }
    };
  });

  // pipeline run | validate
  std::string config_path;
  auto* pipe = app.add_subcommand("pipeline", "experiment pipelines")->require_subcommand(1);
  auto* prun = pipe->add_subcommand("run", "run every stage of an experiment config");
  prun->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
  auto* pval = pipe->add_subcommand("validate", "check an experiment config without running it");
  pval->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
  int pipeline_code = 0;
  prun->callback([&] {
    action = [&] {
      ExperimentConfig c = load_experiment(config_path);
      std::string out = !g.out.empty() ? g.out : !c.out_dir.empty() ? c.out_dir : "out/" + c.name;
      PipelineResult r = run_pipeline(c, out);
      Document d = r.summary;
      d["out"] = out;
      emit("pipeline run", d);
      for (const auto& s : r.stages)
        if (s.status == "failed")
          std::cerr << "error [stage " << s.name << "] " << s.error_kind << ": " << s.message << "\n";
      pipeline_code = r.exit_code;
    };
  });
  pval->callback([&] {
    action = [&] {
      ExperimentConfig c = load_experiment(config_path);
      validate_experiment(c);
      Document d;
      d["name"] = c.name;
      d["valid"] = true;
      emit("pipeline validate", d);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    PrecisionScope scope(g.precision);
    action();
  } catch (const Error& e) {
    if (g.json) {
      Document d;
      d["schema_version"] = kSchemaVersion;
      d["error"] = e.kind_name();
      d["message"] = e.what();
      std::cout << d.dump(2) << "\n";
    }
    std::cerr << "error [" << e.kind_name() << "]: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error [internal]: " << e.what() << "\n";
    return 3;
  }
  return pipeline_code;
}
