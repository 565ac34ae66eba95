#include "rigidity/experiment.hpp"

#include "rigidity/config.hpp"
#include "rigidity/errors.hpp"
#include "rigidity/geometry.hpp"

#include <filesystem>
#include <sstream>

namespace fs = std::filesystem;

namespace rigidity {

namespace {

std::string resolve(const std::string& base_file, const std::string& rel) {
  fs::path p(rel);
  if (p.is_absolute()) return p.string();
  return (fs::path(base_file).parent_path() / p).lexically_normal().string();
}

Matrix64 parse_rows(const ConfigSection& sec, const std::string& what) {
  auto rows = sec.find_all("row");
  if (rows.empty()) fail(ErrorKind::validation, what + " has no rows");
  const long m = static_cast<long>(rows.size());
  Matrix64 out(m, m);
  for (long i = 0; i < m; ++i) {
    std::vector<Real> v = eval_list(rows[i]->value);
    if (static_cast<long>(v.size()) != m)
      fail(ErrorKind::validation, what + " row at line " + std::to_string(rows[i]->line) +
                                      " has " + std::to_string(v.size()) + " entries, expected " +
                                      std::to_string(m));
    for (long j = 0; j < m; ++j) out(i, j) = to_double(v[j]);
  }
  return out;
}

int parse_int(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(text, &used);
    if (used == trim(text).size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::validation, what + " is not an integer: " + text);
}

double parse_double(const std::string& text) { return to_double(eval_expression(text)); }

FlexRegion parse_region(const std::string& text) {
  std::string t = trim(text);
  if (t == "I" || t == "1") return FlexRegion::I;
  if (t == "II" || t == "2") return FlexRegion::II;
  fail(ErrorKind::validation, "region must be I or II, got " + text);
}

Document string_list(const std::vector<Real>& v) {
  Document a = Document::array();
  for (const auto& x : v) a.push_back(real_string(x));
  return a;
}

}  // namespace

// ---- shift configs

SftConfig load_sft(const std::string& path) {
  ConfigFile cfg = load_config(path);
  SftConfig out;
  out.path = path;
  const ConfigSection* pre = cfg.first("");
  out.name = pre ? pre->get("name", fs::path(path).stem().string()) : fs::path(path).stem().string();
  const ConfigSection* shift = cfg.first("shift");
  if (!shift) fail(ErrorKind::validation, path + ": missing [shift] section");
  Matrix64 a = parse_rows(*shift, "[shift]");
  Eigen::MatrixXi adj = a.cast<int>();
  Matrix64 roof, potential;
  if (const ConfigSection* r = cfg.first("roof")) roof = parse_rows(*r, "[roof]");
  if (const ConfigSection* p = cfg.first("potential")) potential = parse_rows(*p, "[potential]");
  out.system = MarkovSystem::make(adj, roof, potential);
  for (const ConfigSection* sec : cfg.named("measure")) {
    std::string name = sec->require("name");
    MarkovMeasure mu = MarkovMeasure::from_transition(parse_rows(*sec, "[measure] " + name));
    require(mu.compatible(out.system), "measure " + name + " is not supported on the shift");
    out.measures.emplace(name, mu);
  }
  if (pre && pre->find("gamma")) out.gamma = parse_double(pre->require("gamma"));
  return out;
}

Matrix64 load_roof(const std::string& path, int m) {
  ConfigFile cfg = load_config(path);
  const ConfigSection* r = cfg.first("roof");
  if (!r) fail(ErrorKind::validation, path + ": missing [roof] section");
  Matrix64 roof = parse_rows(*r, "[roof]");
  require(roof.rows() == m, path + ": roof size does not match the shift");
  return roof;
}

// ---- experiment configs

std::vector<FitSpec> parse_fit_list(const std::string& text) {
  std::vector<FitSpec> out;
  for (const auto& item : split_list(text)) {
    std::string t = trim(item);
    FitSpec spec;
    auto colon = t.find(':');
    spec.model = trim(t.substr(0, colon));
    if (spec.model == "series") {
      spec.order = 2;
      if (colon != std::string::npos) {
        std::string opt = trim(t.substr(colon + 1));
        if (opt.rfind("P=", 0) != 0) fail(ErrorKind::validation, "series option must be P=<order>");
        spec.order = parse_int(opt.substr(2), "series order");
        if (spec.order < 1) fail(ErrorKind::validation, "series order must be at least 1");
      }
    } else if (spec.model != "period" && spec.model != "trace") {
      fail(ErrorKind::validation, "unknown fit model " + spec.model);
    } else if (colon != std::string::npos) {
      fail(ErrorKind::validation, "fit model " + spec.model + " takes no options");
    }
    out.push_back(spec);
  }
  return out;
}

ExperimentConfig load_experiment(const std::string& path) {
  ConfigFile cfg = load_config(path);
  ExperimentConfig c;
  c.path = path;
  const ConfigSection* pre = cfg.first("");
  if (!pre) fail(ErrorKind::validation, path + ": missing preamble with name and table");
  c.name = pre->get("name", fs::path(path).stem().string());
  c.table_path = resolve(path, pre->require("table"));
  c.precision = parse_int(pre->get("precision", "256"), "precision");
  if (const ConfigSection* s = cfg.first("orbits")) {
    for (const auto& w : split_list(s->require("words"))) c.words.push_back(SymbolicWord::parse(trim(w)));
    c.dispersion_tolerance = parse_double(s->get("tolerance", "1e-30"));
  }
  if (const ConfigSection* s = cfg.first("normal_form")) {
    c.invariants = parse_int(s->get("invariants", "3"), "invariants");
    c.nf_order = parse_int(s->get("order", "8"), "order");
    c.depth = parse_int(s->get("depth", "20"), "depth");
  }
  const ConfigSection* h = cfg.first("horseshoe");
  if (!h) fail(ErrorKind::validation, path + ": missing [horseshoe] section");
  c.block = SymbolicWord::parse(trim(h->require("block")));
  c.connector = SymbolicWord::parse(trim(h->require("connector")), false);
  c.n_max = parse_int(h->get("n_max", "30"), "n_max");
  c.fits = parse_fit_list(h->get("fits", "period, trace, series:P=2"));
  if (const ConfigSection* s = cfg.first("suspension")) {
    c.sft_path = resolve(path, s->require("sft"));
    std::vector<Real> t = eval_list(s->require("target"));
    require(t.size() == 2, "suspension target must be c_mu, c_top");
    c.c_mu = to_double(t[0]);
    c.c_top = to_double(t[1]);
    c.region = parse_region(s->get("region", "II"));
  }
  if (const ConfigSection* s = cfg.first("output")) c.out_dir = resolve(path, s->require("dir"));
  return c;
}

void validate_experiment(const ExperimentConfig& c) {
  require(c.precision >= 64, "precision must be at least 64 bits");
  require(fs::exists(c.table_path), "table file not found: " + c.table_path);
  PrecisionScope scope(c.precision);
  BilliardTable table = load_table(c.table_path);
  require(!c.words.empty(), "[orbits] words must not be empty");
  for (const auto& w : c.words) require_admissible(w, table.size());
  require_admissible(horseshoe_word(c.block, c.connector, 0), table.size());
  require(c.invariants >= 1 && c.nf_order >= 2 * c.invariants + 1,
          "normal form order must be at least 2 invariants + 1");
  require(c.depth >= 4, "homoclinic depth must be at least 4");
  int need = 0;
  for (const auto& f : c.fits) {
    if (f.model == "period") need = std::max(need, 2 + 8 - 1);
    if (f.model == "trace") need = std::max(need, 2 + 10 - 1);
    if (f.model == "series") need = std::max(need, 2 + (f.order + 1) * (f.order + 2) / 2 + 5 - 1);
  }
  require(c.n_max >= need, "n_max " + std::to_string(c.n_max) + " leaves too few rows for the fits (need " +
                               std::to_string(need) + ")");
  PeriodicOrbit core = find_periodic_orbit(table, c.block);
  int ceiling = horseshoe_n_ceiling(core.lambda);
  require(c.n_max <= ceiling, "n_max " + std::to_string(c.n_max) + " exceeds the ceiling " +
                                  std::to_string(ceiling) + " at " + std::to_string(c.precision) +
                                  " bits");
  if (c.has_suspension()) {
    require(fs::exists(c.sft_path), "shift file not found: " + c.sft_path);
    load_sft(c.sft_path);
    require(c.c_mu > 0 && c.c_top > 0, "suspension targets must be positive");
  }
}

// ---- documents

Document orbit_document(const PeriodicOrbit& orbit) {
  Document d;
  d["word"] = orbit.word.str();
  d["period"] = orbit.period();
  d["flow_period"] = real_string(orbit.flow_period);
  d["lambda"] = real_string(orbit.lambda);
  d["le"] = real_string(orbit.le);
  d["flow_exponent"] = real_string(orbit_flow_exponent(orbit));
  d["stationarity"] = real_string(orbit.stationarity);
  Document pts = Document::array();
  for (const auto& p : orbit.points) {
    Document x;
    x["obstacle"] = p.obstacle + 1;
    x["s"] = real_string(p.s);
    x["phi"] = real_string(p.phi);
    pts.push_back(x);
  }
  d["point"] = pts;
  return d;
}

Document normal_form_document(const NormalForm& nf) {
  Document d;
  d["lambda"] = real_string(nf.lambda);
  d["a"] = string_list(nf.a);
  d["anosov_cocycle"] = real_string(anosov_cocycle_value(nf));
  d["residual"] = real_string(nf.residual);
  d["order"] = nf.order;
  return d;
}

Document frame_document(const HomoclinicFrame& f) {
  Document d;
  d["xi_inf"] = real_string(f.xi_inf);
  d["xi_inf_sq"] = real_string(f.xi_inf_sq);
  d["gamma"] = string_list(f.gamma);
  d["g"] = string_list(f.g);
  d["w1"] = real_string(f.w1);
  d["a_bar"] = string_list(f.a_bar);
  d["gamma_bar"] = string_list(f.gamma_bar);
  d["g_bar"] = string_list(f.g_bar);
  d["deep_blocks"] = f.deep_blocks;
  d["frame_identity"] = real_string(f.frame_identity);
  d["structure_residual"] = real_string(f.structure_residual);
  d["mirror_residual"] = real_string(f.mirror_residual);
  return d;
}

Document fit_document(const FitReport& fit) {
  Document d;
  d["model"] = fit.model;
  d["residual_floor"] = real_string(fit.residual_floor);
  d["n"] = fit.ns;
  d["residuals"] = string_list(fit.residuals);
  d["decay_ratios"] = string_list(fit.decay_ratios);
  Document cs = Document::array();
  for (const auto& c : fit.coefficients) {
    Document x;
    x["name"] = c.name;
    x["value"] = real_string(c.value);
    x["uncertainty"] = real_string(c.uncertainty);
    cs.push_back(x);
  }
  d["coefficient"] = cs;
  return d;
}

Document rigidity_document(const RigidityReport& r) {
  Document d;
  d["verdict"] = r.verdict;
  d["h_ref"] = real_string(r.h_ref);
  d["dispersion"] = real_string(r.dispersion);
  d["dispersion_tolerance"] = real_string(r.dispersion_tolerance);
  d["reasons"] = r.reasons;
  Document os = Document::array();
  for (const auto& o : r.orbits) {
    Document x;
    x["word"] = o.word;
    x["flow_exponent"] = real_string(o.flow_exponent);
    x["lambda"] = real_string(o.lambda);
    x["flow_period"] = real_string(o.flow_period);
    x["a1"] = real_string(o.a1);
    x["a1_uncertainty"] = real_string(o.a1_uncertainty);
    x["cohomology_defect"] = real_string(o.cohomology_defect);
    os.push_back(x);
  }
  d["orbit"] = os;
  return d;
}

Document matrix_document(const Matrix64& m) {
  Document rows = Document::array();
  for (long i = 0; i < m.rows(); ++i) {
    std::ostringstream os;
    for (long j = 0; j < m.cols(); ++j) os << (j ? " " : "") << double_string(m(i, j));
    rows.push_back(os.str());
  }
  return rows;
}

Document measure_document(const MarkovMeasure& mu) {
  Document d;
  d["P"] = matrix_document(mu.P);
  Document pi = Document::array();
  for (long i = 0; i < mu.pi.size(); ++i) pi.push_back(mu.pi(i));
  d["pi"] = pi;
  d["entropy"] = markov_entropy(mu);
  d["stationarity_residual"] = mu.stationarity_residual();
  return d;
}

Document flexibility_document(const FlexibilityResult& r) {
  Document d;
  d["c_mu"] = r.c_mu;
  d["c_top"] = r.c_top;
  d["residual"] = r.residual;
  d["measure_parameter"] = r.measure_parameter;
  d["roof_parameter"] = r.roof_parameter;
  d["block_length"] = r.block_length;
  if (r.avoided_state >= 0) {
    std::string w;
    for (int x : r.avoided_word) w += std::to_string(x + 1);
    d["distinguished_cylinder"] = w;
  }
  d["roof"] = matrix_document(r.roof);
  d["measure"] = measure_document(r.measure);
  return d;
}

std::string family_csv(const HorseshoeFamily& family) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : family.rows)
    rows.push_back({std::to_string(r.n), std::to_string(r.map_period), real_string(r.flow_period),
                    real_string(r.le), real_string(r.trace), real_string(r.stationarity)});
  return render_csv({"n", "map_period", "flow_period", "le", "trace", "stationarity"}, rows);
}

std::string orbits_csv(const std::vector<PeriodicOrbit>& orbits) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& o : orbits)
    rows.push_back({o.word.str(), std::to_string(o.period()), real_string(o.flow_period),
                    real_string(o.lambda), real_string(o.le),
                    real_string(orbit_flow_exponent(o)), real_string(o.stationarity)});
  return render_csv(
      {"word", "period", "flow_period", "lambda", "le", "flow_exponent", "stationarity"}, rows);
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& p : points)
    rows.push_back({double_string(p.s), double_string(p.t), double_string(p.h_mu_flow),
                    double_string(p.h_top_flow)});
  return render_csv({"s", "t", "h_mu_flow", "h_top_flow"}, rows);
}

FitReport apply_fit(const HorseshoeFamily& family, const FitSpec& spec) {
  if (spec.model == "period") return fit_period_expansion(family);
  if (spec.model == "trace") return fit_trace_expansion(family, family.lambda);
  if (spec.model == "series") return fit_series(family, family.lambda, spec.order);
  fail(ErrorKind::validation, "unknown fit model " + spec.model);
}

// ---- pipeline

namespace {

struct Runner {
  std::string out;
  PipelineResult result;
  bool failed = false;

  template <class F>
  void stage(const std::string& name, F&& body) {
    StageRecord rec;
    rec.name = name;
    if (failed) {
      rec.status = "skipped";
      result.stages.push_back(rec);
      return;
    }
    try {
      body(rec);
      rec.status = "complete";
    } catch (const Error& e) {
      rec.status = "failed";
      rec.error_kind = e.kind_name();
      rec.message = e.what();
      result.exit_code = e.exit_code();
      failed = true;
    } catch (const std::exception& e) {
      rec.status = "failed";
      rec.error_kind = "internal";
      rec.message = e.what();
      result.exit_code = 3;
      failed = true;
    }
    result.stages.push_back(rec);
  }

  void write(StageRecord& rec, const std::string& file, const std::string& content) {
    write_file((fs::path(out) / file).string(), content);
    rec.files.push_back(file);
  }
};

}  // namespace

PipelineResult run_pipeline(const ExperimentConfig& c, const std::string& out_dir) {
  fs::create_directories(out_dir);
  Runner run;
  run.out = out_dir;
  Document& summary = run.result.summary;
  summary["schema_version"] = kSchemaVersion;
  summary["name"] = c.name;
  summary["precision"] = c.precision;

  run.stage("validate", [&](StageRecord&) { validate_experiment(c); });
  PrecisionScope scope(c.precision);

  std::optional<BilliardTable> table;
  run.stage("table", [&](StageRecord& rec) {
    table = load_table(c.table_path);
    Document d;
    d["name"] = table->name();
    d["obstacles"] = table->size();
    d["non_eclipse_margin"] = table->non_eclipse_margin();
    d["total_perimeter"] = real_string(table->total_perimeter());
    run.write(rec, "table.txt", render_text(d));
  });

  run.stage("orbits", [&](StageRecord& rec) {
    std::vector<PeriodicOrbit> orbits;
    for (const auto& w : c.words) orbits.push_back(find_periodic_orbit(*table, w));
    run.write(rec, "orbits.csv", orbits_csv(orbits));
  });

  std::optional<NormalForm> nf;
  std::optional<HomoclinicFrame> frame;
  run.stage("normal_form", [&](StageRecord& rec) {
    PeriodicOrbit core = find_periodic_orbit(*table, c.block);
    nf = orbit_normal_form(*table, core, c.invariants, c.nf_order);
    HomoclinicSegment hs = find_homoclinic_segment(*table, core, c.connector, c.depth);
    frame = mirror_normalize(*table, *nf, hs);
    Document d;
    d["block"] = c.block.str();
    d["connector"] = c.connector.str();
    d["transversality_angle"] = real_string(hs.transversality_angle);
    d["normal_form"] = normal_form_document(*nf);
    d["frame"] = frame_document(*frame);
    run.write(rec, "normal_form.txt", render_text(d));
  });

  run.stage("asymptotics", [&](StageRecord& rec) {
    HorseshoeFamily fam = horseshoe_family(*table, c.block, c.connector, c.n_max);
    run.write(rec, "horseshoe.csv", family_csv(fam));
    Document d;
    d["block"] = c.block.str();
    d["connector"] = c.connector.str();
    d["lambda"] = real_string(fam.lambda);
    Document fits = Document::array();
    for (const auto& spec : c.fits) {
      FitReport fit = apply_fit(fam, spec);
      fits.push_back(fit_document(fit));
      if (fit.model == "trace") {
        const Real c0 = fit.get("C0").value, b = fit.get("B").value;
        Real predicted = -2 / fam.lambda * frame->xi_inf_sq * nf->a[1];
        Document chk;
        chk["C0"] = real_string(c0);
        chk["g0"] = real_string(frame->g[0]);
        chk["C0_over_g0"] = real_string(c0 / frame->g[0]);
        chk["B_over_C0"] = real_string(b / c0);
        chk["predicted_B_over_C0"] = real_string(predicted);
        d["trace_check"] = chk;
        summary["C0"] = real_string(c0);
        summary["g0"] = real_string(frame->g[0]);
        summary["B_over_C0"] = real_string(b / c0);
        summary["predicted_B_over_C0"] = real_string(predicted);
        std::ostringstream dat;
        for (std::size_t i = 0; i < fit.ns.size(); ++i)
          dat << fit.ns[i] << " " << to_string(fit.residuals[i], 20) << "\n";
        run.write(rec, "trace_residuals.dat", dat.str());
        Document side;
        side["schema_version"] = kSchemaVersion;
        side["columns"] = {"n", "trace residual"};
        side["model"] = "C0 lambda^-n + B n + C";
        run.write(rec, "trace_residuals.json", side.dump(2) + "\n");
      }
      if (fit.model == "period") summary["L0"] = real_string(fit.get("L0").value);
    }
    d["fit"] = fits;
    run.write(rec, "fits.txt", render_text(d));
  });

  run.stage("report", [&](StageRecord& rec) {
    RigidityReport r = rigidity_report(*table, c.words, {}, c.dispersion_tolerance);
    run.write(rec, "rigidity.txt", render_text(rigidity_document(r)));
    summary["verdict"] = r.verdict;
    summary["dispersion"] = real_string(r.dispersion);
    Document a1;
    for (const auto& o : r.orbits) a1[o.word] = real_string(o.a1);
    summary["a1"] = a1;
  });

  if (c.has_suspension()) {
    run.stage("suspension", [&](StageRecord& rec) {
      SftConfig sft = load_sft(c.sft_path);
      FlexibilityResult f = solve_flexibility(sft.system, c.c_mu, c.c_top, c.region);
      Document d;
      d["shift"] = sft.name;
      d["entropy"] = sft_entropy(sft.system);
      d["region"] = c.region == FlexRegion::I ? "I" : "II";
      d["result"] = flexibility_document(f);
      run.write(rec, "suspension.txt", render_text(d));
      summary["flexibility_residual"] = f.residual;
    });
  }

  bool complete = !run.failed;
  summary["status"] = complete ? "complete" : "incomplete";
  Document stages = Document::array();
  for (const auto& s : run.result.stages) {
    Document x;
    x["name"] = s.name;
    x["status"] = s.status;
    if (!s.error_kind.empty()) {
      x["error"] = s.error_kind;
      x["message"] = s.message;
    }
    stages.push_back(x);
  }
  summary["stage"] = stages;
  write_file((fs::path(out_dir) / "summary.txt").string(), render_text(summary));
  write_file((fs::path(out_dir) / "summary.json").string(), summary.dump(2) + "\n");

  std::ostringstream man;
  man << "pipeline " << c.name << "\n";
  man << "status " << (complete ? "complete" : "incomplete") << "\n";
  for (const auto& s : run.result.stages) {
    man << "stage " << s.name << " " << s.status;
    if (!s.error_kind.empty()) man << " " << s.error_kind;
    man << "\n";
    for (const auto& f : s.files) man << "file " << f << "\n";
  }
  man << "file summary.txt\nfile summary.json\n";
  write_file((fs::path(out_dir) / "MANIFEST").string(), man.str());
  return run.result;
}

}  // namespace rigidity
