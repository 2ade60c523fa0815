// Command-line entry points: validators, the two worked-example demos, and
// file-driven wrappers around deformation, the co-slicing metric, and
// co-heart filtrations.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "costab/demos.hpp"
#include "costab/par.hpp"

using namespace costab;

namespace {

struct ContextArgs {
  std::string algebra_file;
  std::string builtin;  // "ka2" | "dual-numbers"
  std::vector<int> window{-2, 2};
  int width = 2;
  std::string field = "Q";

  void attach(CLI::App* cmd) {
    cmd->add_option("--algebra", algebra_file, "algebra presentation file");
    cmd->add_option("--builtin", builtin, "built-in algebra: ka2 or dual-numbers");
    cmd->add_option("--window", window, "shift window: LO HI")->expected(2);
    cmd->add_option("--width", width, "width bound for indecomposables");
    cmd->add_option("--field", field, "ground field: Q or F32003");
  }

  Category build() const {
    AlgebraPresentation pres;
    if (!algebra_file.empty()) pres = load_algebra(algebra_file);
    else if (builtin == "ka2") pres = make_ka2();
    else if (builtin == "dual-numbers") pres = make_dual_numbers();
    else throw CLI::ValidationError("--algebra or --builtin required");
    pres.field = field_from_name(field);
    BuildOptions bo;
    bo.window_lo = window.at(0);
    bo.window_hi = window.at(1);
    bo.width_bound = width;
    bo.parallel = par::enabled();
    return build_category(pres, bo);
  }
};

std::string sniff_type(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    auto pos = line.find_first_not_of(" \t\r\n");
    if (pos == std::string::npos || line[pos] == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) break;
    std::string key = line.substr(0, colon);
    if (key == "algebra-version") return "algebra";
    if (key == "snapshot-version") return "snapshot";
    if (key == "coslicing-version") return "coslicing";
    if (key == "cotstruct-version") return "cotstruct";
    if (key == "condition-version") return "condition";
    if (key == "charge-version") return "charge";
    break;
  }
  throw std::runtime_error(path + ": unrecognized file type");
}

void emit(const Report& rep, const std::string& out) {
  if (out.empty()) rep.write(std::cout);
  else {
    rep.save(out);
    std::cout << "report written to " << out << "\n";
  }
}

int run(int argc, char** argv) {
  CLI::App app{"co-slicings and co-stability conditions on bounded homotopy "
               "categories of quiver algebras"};
  app.require_subcommand(1);
  bool serial = false;
  app.add_flag("--serial", serial, "disable the OpenMP kernels (reference path)");

  // ------------------------------------------------------------ validate
  auto* cmd_validate = app.add_subcommand("validate", "validate data files");
  ContextArgs vctx;
  std::vector<std::string> validate_files;
  vctx.attach(cmd_validate);
  cmd_validate->add_option("files", validate_files, "files to validate")->required();

  // ------------------------------------------------------- build-snapshot
  auto* cmd_snap = app.add_subcommand("build-snapshot", "build and save a snapshot");
  ContextArgs sctx;
  std::string snap_out;
  sctx.attach(cmd_snap);
  cmd_snap->add_option("--out", snap_out, "output snapshot file")->required();

  // -------------------------------------------------------------- demos
  auto* cmd_thb = app.add_subcommand("demo-theorem-b",
                                     "co-stability chart of the dual numbers");
  TheoremBOptions thb;
  std::string thb_out;
  std::vector<int> thb_window{-2, 2};
  cmd_thb->add_option("--window", thb_window, "shift window: LO HI")->expected(2);
  cmd_thb->add_option("--width", thb.width, "width bound");
  cmd_thb->add_option("--samples", thb.samples, "number of sampled conditions");
  cmd_thb->add_option("--seed", thb.seed, "random seed");
  std::string thb_field = "Q";
  cmd_thb->add_option("--field", thb_field, "ground field: Q or F32003");
  cmd_thb->add_option("--out", thb_out, "output directory for report + CSV");

  auto* cmd_cex = app.add_subcommand("demo-counterexample",
                                     "why the slice-separation condition is needed");
  CounterexampleOptions cex;
  std::string cex_out;
  std::string cex_field = "Q";
  cmd_cex->add_option("--eps", cex.eps, "deformation size in (0, 1/2)");
  cmd_cex->add_option("--seed", cex.seed, "random seed");
  cmd_cex->add_option("--field", cex_field, "ground field: Q or F32003");
  cmd_cex->add_option("--out", cex_out, "output directory");

  // -------------------------------------------------------------- deform
  auto* cmd_deform = app.add_subcommand("deform", "deform a condition by a new charge");
  ContextArgs dctx;
  std::string d_condition, d_charge, d_out;
  double d_eps = 0.0;
  dctx.attach(cmd_deform);
  cmd_deform->add_option("--condition", d_condition, "condition file")->required();
  cmd_deform->add_option("--charge", d_charge, "deformed charge file")->required();
  cmd_deform->add_option("--eps", d_eps, "deformation size (0 = eps0/2)");
  cmd_deform->add_option("--out", d_out, "write the deformed condition here");

  // -------------------------------------------------------------- metric
  auto* cmd_metric = app.add_subcommand("metric", "distance between two co-slicings");
  ContextArgs mctx;
  std::vector<std::string> m_files;
  mctx.attach(cmd_metric);
  cmd_metric->add_option("files", m_files, "two co-slicing files")->expected(2);

  // ------------------------------------------------------------------ hn
  auto* cmd_hn = app.add_subcommand("hn", "co-heart filtration of an object");
  ContextArgs hctx;
  std::string h_cot, h_obj;
  hctx.attach(cmd_hn);
  cmd_hn->add_option("--cotstruct", h_cot, "co-t-structure file")->required();
  cmd_hn->add_option("--object", h_obj, "object, e.g. 'M1@0' or 'P1@0 + 2*P2@1'")
      ->required();

  // ------------------------------------------------- enumerate-cohearts
  auto* cmd_enum = app.add_subcommand("enumerate-cohearts",
                                      "presilting generating subsets in-window");
  ContextArgs ectx;
  std::string e_out;
  ectx.attach(cmd_enum);
  cmd_enum->add_option("--out", e_out, "report file");

  CLI11_PARSE(app, argc, argv);
  par::set_enabled(!serial);

  if (cmd_validate->parsed()) {
    Report rep("validate");
    bool any_context_needed = false;
    std::optional<Category> cat;
    auto need_cat = [&]() -> Category& {
      if (!cat) cat = vctx.build();
      return *cat;
    };
    for (const auto& f : validate_files) {
      try {
        std::string type = sniff_type(f);
        if (type == "algebra") {
          AlgebraPresentation p = load_algebra(f);
          rep.check(f, true, "algebra '" + p.name + "' is admissible");
        } else if (type == "snapshot") {
          Snapshot s = load_snapshot(f);
          rep.check(f, true,
                    "snapshot valid; catalog " +
                        std::string(s.catalog_closed ? "closed" : "not closed"));
        } else if (type == "coslicing") {
          Category& c = need_cat();
          any_context_needed = true;
          CoSlicing q = load_coslicing(c.snapshot, f);
          AxiomReport ar = check_axioms(*c.engine, q);
          rep.check(f, ar.all_passed(), ar.all_passed() ? "co-slicing axioms hold"
                                                        : ar.summary());
        } else if (type == "cotstruct") {
          Category& c = need_cat();
          any_context_needed = true;
          CoTStructure p = load_cotstructure(c.snapshot, f);
          AxiomReport ar = check_cotstructure(*c.engine, p);
          rep.check(f, ar.all_passed(), ar.all_passed() ? "co-t-structure axioms hold"
                                                        : ar.summary());
        } else if (type == "condition") {
          Category& c = need_cat();
          any_context_needed = true;
          CoStabilityCondition cond = load_condition(c.snapshot, f);
          AxiomReport ar = validate_condition_full(*c.engine, cond);
          rep.check(f, ar.all_passed(), ar.all_passed() ? "co-stability condition valid"
                                                        : ar.summary());
        } else if (type == "charge") {
          Category& c = need_cat();
          any_context_needed = true;
          load_charge(c.snapshot, f);
          rep.check(f, true, "charge parses against the K0 basis");
        }
      } catch (const std::exception& e) {
        rep.check(f, false, e.what());
      }
    }
    (void)any_context_needed;
    rep.write(std::cout);
    return rep.all_passed() ? 0 : 1;
  }

  if (cmd_snap->parsed()) {
    Category cat = sctx.build();
    save_snapshot(cat.snapshot, snap_out);
    std::cout << "snapshot written to " << snap_out << " (" << cat.snapshot.all_ids().size()
              << " ids, " << cat.snapshot.catalog.size() << " catalog triangles)\n";
    for (const auto& n : cat.build_notes) std::cout << "note: " << n << "\n";
    return 0;
  }

  if (cmd_thb->parsed()) {
    thb.out_dir = thb_out;
    thb.window_lo = thb_window.at(0);
    thb.window_hi = thb_window.at(1);
    thb.field = field_from_name(thb_field);
    Report rep = demo_theorem_b(thb);
    emit(rep, thb_out.empty() ? "" : thb_out + "/theorem_b.report");
    if (!thb_out.empty()) rep.write(std::cout);
    return rep.all_passed() ? 0 : 1;
  }

  if (cmd_cex->parsed()) {
    cex.out_dir = cex_out;
    cex.field = field_from_name(cex_field);
    Report rep = demo_counterexample(cex);
    emit(rep, cex_out.empty() ? "" : cex_out + "/counterexample.report");
    if (!cex_out.empty()) rep.write(std::cout);
    return rep.all_passed() ? 0 : 1;
  }

  if (cmd_deform->parsed()) {
    Category cat = dctx.build();
    CoStabilityCondition c = load_condition(cat.snapshot, d_condition);
    CentralCharge w = load_charge(cat.snapshot, d_charge);
    double eps = d_eps > 0.0 ? d_eps : epsilon0(c.q) / 2.0;
    Report rep("deform");
    rep.window(cat.snapshot);
    DeformOutcome out = deform(*cat.engine, c, w, eps);
    rep.field("eps", out.eps);
    rep.field("eps0", out.eps0);
    if (out.refused) {
      rep.check("deform", false, out.refusal);
    } else {
      rep.check("deform", true, "d(Q,R) = " + std::to_string(out.distance));
      rep.check("axioms", out.axioms_ok);
      rep.check("condition-S", out.condition_s_ok);
      rep.check("pairing", out.validity_ok);
      rep.field("swaps", static_cast<long>(out.swaps_performed));
      rep.field("coalesces", static_cast<long>(out.coalesces_performed));
      if (!d_out.empty()) {
        save_condition(cat.snapshot, out.result, d_out,
                       std::filesystem::path(d_out).filename().string() + ".coslicing");
        rep.field("deformed-condition", d_out);
      }
    }
    rep.write(std::cout);
    return rep.all_passed() ? 0 : 1;
  }

  if (cmd_metric->parsed()) {
    Category cat = mctx.build();
    CoSlicing q = load_coslicing(cat.snapshot, m_files[0]);
    CoSlicing r = load_coslicing(cat.snapshot, m_files[1]);
    MetricResult d = metric(cat.snapshot, q, r);
    Report rep("metric");
    rep.window(cat.snapshot);
    if (d.infinite) rep.field("distance", ">= 1/2 (no finite per-object bound)");
    else if (d.ge_half)
      rep.field("distance", ">= 1/2 (upper bound " + std::to_string(d.value) + ")");
    else {
      rep.field("distance", d.value);
      if (d.exact_value) rep.field("distance-exact", d.exact_value->str());
    }
    rep.write(std::cout);
    return 0;
  }

  if (cmd_hn->parsed()) {
    Category cat = hctx.build();
    CoTStructure p = load_cotstructure(cat.snapshot, h_cot);
    FormalObject t = cat.snapshot.parse_formal(h_obj);
    Tower tw = heart_filtration(*cat.engine, p, t);
    Report rep("hn");
    rep.window(cat.snapshot);
    rep.field("object", cat.snapshot.formal_name(t));
    for (std::size_t i = 0; i < tw.size(); ++i) {
      std::string note = i < tw.step_notes.size() && !tw.step_notes[i].empty()
                             ? "; witness " + tw.step_notes[i]
                             : "";
      rep.field("factor " + std::to_string(i + 1),
                cat.snapshot.formal_name(tw.factors[i]) + "  (suspension " +
                    std::to_string(static_cast<int>(tw.tags[i])) + note + ")");
    }
    rep.write(std::cout);
    return 0;
  }

  if (cmd_enum->parsed()) {
    Category cat = ectx.build();
    CoheartEnumeration ce = enumerate_cohearts(cat.snapshot);
    Report rep("enumerate-cohearts");
    rep.window(cat.snapshot);
    rep.field("count", static_cast<long>(ce.items.size()));
    rep.check("complete", ce.complete);
    int i = 0;
    for (const auto& item : ce.items) {
      std::string ids;
      for (const auto& id : item.coheart)
        ids += (ids.empty() ? "" : ", ") + cat.snapshot.id_name(id);
      rep.field("coheart " + std::to_string(++i), ids);
    }
    if (!e_out.empty()) rep.save(e_out);
    rep.write(std::cout);
    return rep.all_passed() ? 0 : 1;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
