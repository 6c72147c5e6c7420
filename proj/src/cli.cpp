#include "jewel/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "jewel/io.hpp"
#include "jewel/scan.hpp"

namespace jewel {

namespace {

SdpOptions solver_options_from_env() {
  SdpOptions opts;
  if (const char* tol = std::getenv("JEWEL_SOLVER_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(tol, &end);
    if (end != tol && v > 0.0) {
      opts.eps_gap = v;
      opts.eps_feas = v;
    }
  }
  return opts;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

MeasurementSet load_set(const std::string& path) {
  const Json j = load_json_file(path);
  if (j.contains("povms")) return set_from_json(j);
  // A single POVM file is accepted as a one-member set.
  std::vector<Povm> one;
  one.push_back(povm_from_json(j));
  return MeasurementSet(std::move(one));
}

Eigen::VectorXd parse_direction(const std::vector<double>& v, int g) {
  if (v.empty()) return Eigen::VectorXd::Ones(g);
  if (static_cast<int>(v.size()) != g)
    throw std::invalid_argument("--direction needs one entry per POVM");
  Eigen::VectorXd a(g);
  for (int i = 0; i < g; ++i) a(i) = v[i];
  return a;
}

std::string csv_points(const std::vector<Eigen::VectorXd>& pts) {
  std::string out;
  for (const Eigen::VectorXd& p : pts) {
    for (int i = 0; i < p.size(); ++i) {
      if (i) out += ",";
      out += fmt("%.17g", p(i));
    }
    out += "\n";
  }
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"POVM joint measurability, noise robustness, free spectrahedra, "
               "incompatibility witnesses, and analytic compatibility bounds"};
  app.require_subcommand(1);
  const SdpOptions sdp = solver_options_from_env();

  std::function<int()> action;

  // validate FILE
  {
    auto* cmd = app.add_subcommand("validate", "Validate a POVM or set file");
    auto file = std::make_shared<std::string>();
    cmd->add_option("file", *file, "POVM or MeasurementSet JSON")->required();
    cmd->callback([&action, file, &out]() {
      action = [file, &out]() {
        const MeasurementSet set = load_set(*file);
        const ValidationReport rep = validate(set);
        out << (rep.valid() ? "valid" : "invalid: " + rep.describe()) << "\n";
        return rep.valid() ? 0 : 1;
      };
    });
  }

  // compat check / compat robustness
  {
    auto* compat = app.add_subcommand("compat", "Joint measurability queries");
    compat->require_subcommand(1);

    auto* check = compat->add_subcommand("check", "Decide joint measurability");
    auto cfile = std::make_shared<std::string>();
    auto ctol = std::make_shared<double>(1e-7);
    auto emit_joint = std::make_shared<bool>(false);
    check->add_option("file", *cfile, "MeasurementSet JSON")->required();
    check->add_option("--tol", *ctol, "margin tolerance");
    check->add_flag("--emit-joint", *emit_joint, "print the joint POVM as JSON");
    check->callback([&action, cfile, ctol, emit_joint, sdp, &out]() {
      action = [cfile, ctol, emit_joint, sdp, &out]() {
        const CompatVerdict v = joint_feasibility(load_set(*cfile), *ctol, sdp);
        out << "margin = " << fmt("%.9g", v.margin) << "\n";
        out << "compatible: " << (v.compatible ? "yes" : "no") << "\n";
        if (*emit_joint && v.joint)
          out << canonical_dump(to_json(*v.joint)) << "\n";
        return v.compatible ? 0 : 1;
      };
    });

    auto* rob = compat->add_subcommand("robustness", "Directional noise robustness");
    auto rfile = std::make_shared<std::string>();
    auto model = std::make_shared<std::string>();
    auto dir = std::make_shared<std::vector<double>>();
    rob->add_option("file", *rfile, "MeasurementSet JSON")->required();
    rob->add_option("--model", *model, "balanced|linear")->required();
    rob->add_option("--direction", *dir, "comma-separated ray direction")
        ->delimiter(',');
    rob->callback([&action, rfile, model, dir, sdp, &out]() {
      action = [rfile, model, dir, sdp, &out]() {
        if (*model != "balanced" && *model != "linear")
          throw std::invalid_argument("--model must be balanced or linear");
        const MeasurementSet set = load_set(*rfile);
        const auto kind = *model == "balanced" ? NoiseModel::Kind::kBalanced
                                               : NoiseModel::Kind::kLinear;
        const double t =
            robustness(set, kind, parse_direction(*dir, set.size()), 1e-7, sdp);
        out << "t* = " << fmt("%.5f", t) << "\n";
        return 0;
      };
    });
  }

  // zhu FILE
  {
    auto* cmd = app.add_subcommand("zhu", "Zhu's incompatibility criterion");
    auto file = std::make_shared<std::string>();
    cmd->add_option("file", *file, "MeasurementSet JSON")->required();
    cmd->callback([&action, file, sdp, &out]() {
      action = [file, sdp, &out]() {
        const MeasurementSet set = load_set(*file);
        const ZhuResult r = zhu_check(set, 1e-7, sdp);
        out << "zhu value = " << fmt("%.6f", r.value) << "\n";
        out << "certified incompatible: "
            << (r.incompatible_certified ? "yes" : "no") << "\n";
        return r.incompatible_certified ? 0 : 1;
      };
    });
  }

  // witness check / witness apply
  {
    auto* wit = app.add_subcommand("witness", "Incompatibility witnesses");
    wit->require_subcommand(1);

    auto* check = wit->add_subcommand("check", "Classify a witness candidate");
    auto wfile = std::make_shared<std::string>();
    auto method = std::make_shared<std::string>("both");
    auto theta = std::make_shared<double>(0.0);
    check->add_option("file", *wfile, "WitnessCandidate JSON")->required();
    check->add_option("--method", *method, "exact|sdp|both");
    check->add_option("--theta", *theta, "inclusion constant override");
    check->callback([&action, wfile, method, theta, sdp, &out]() {
      action = [wfile, method, theta, sdp, &out]() {
        if (*method != "exact" && *method != "sdp" && *method != "both")
          throw std::invalid_argument("--method must be exact, sdp, or both");
        const WitnessCandidate w = witness_from_json(load_json_file(*wfile));
        int code = 0;
        if (*method == "exact" || *method == "both") {
          const bool ok = is_witness_exact(w);
          out << "exact: " << (ok ? "witness" : "not a witness") << "\n";
          code = ok ? 0 : 1;
        }
        if (*method == "sdp" || *method == "both") {
          std::optional<double> th;
          if (*theta > 0.0) th = *theta;
          const WitnessClassification c = classify(w, th, 1e-7, sdp);
          out << "sdp: rho = " << fmt("%.6f", c.rho)
              << ", theta = " << fmt("%.6f", c.theta_used) << ", verdict "
              << to_string(c.verdict) << "\n";
          if (*method == "sdp")
            code = c.verdict == WitnessVerdict::kNotWitness ? 1 : 0;
        }
        return code;
      };
    });

    auto* apply = wit->add_subcommand("apply", "Apply a witness to a set");
    auto awit = std::make_shared<std::string>();
    auto aset = std::make_shared<std::string>();
    apply->add_option("witness", *awit, "WitnessCandidate JSON")->required();
    apply->add_option("set", *aset, "MeasurementSet JSON")->required();
    apply->callback([&action, awit, aset, &out]() {
      action = [awit, aset, &out]() {
        const WitnessCandidate w = witness_from_json(load_json_file(*awit));
        const WitnessApplication r = apply_witness(w, load_set(*aset));
        out << "max eigenvalue = " << fmt("%.9f", r.max_eig) << "\n";
        out << "certified incompatible: "
            << (r.certified_incompatible ? "yes" : "no") << "\n";
        return r.certified_incompatible ? 0 : 1;
      };
    });
  }

  // bounds --g --d --k
  {
    auto* cmd = app.add_subcommand("bounds", "Analytic compatibility bounds");
    auto g = std::make_shared<int>(0);
    auto d = std::make_shared<int>(0);
    auto k = std::make_shared<std::vector<int>>();
    auto as_json = std::make_shared<bool>(false);
    cmd->add_option("--g", *g, "number of POVMs")->required();
    cmd->add_option("--d", *d, "Hilbert space dimension")->required();
    cmd->add_option("--k", *k, "outcome counts")->required()->delimiter(',');
    cmd->add_flag("--json", *as_json, "emit JSON instead of a table");
    cmd->callback([&action, g, d, k, as_json, &out]() {
      action = [g, d, k, as_json, &out]() {
        std::vector<int> shape = *k;
        if (static_cast<int>(shape.size()) == 1 && *g > 1)
          shape.assign(*g, shape[0]);
        const BoundReport rep = bound_report(*g, *d, shape);
        if (*as_json)
          out << canonical_dump(to_json(rep)) << "\n";
        else
          out << bound_table(rep);
        return 0;
      };
    });
  }

  // region scan FILE --model --directions --out
  {
    auto* region = app.add_subcommand("region", "Compatibility region scans");
    region->require_subcommand(1);
    auto* cmd = region->add_subcommand("scan", "Robustness along random rays");
    auto file = std::make_shared<std::string>();
    auto model = std::make_shared<std::string>();
    auto n = std::make_shared<int>(16);
    auto out_path = std::make_shared<std::string>();
    auto seed = std::make_shared<std::uint64_t>(1);
    cmd->add_option("file", *file, "MeasurementSet JSON")->required();
    cmd->add_option("--model", *model, "balanced|linear")->required();
    cmd->add_option("--directions", *n, "number of random directions");
    cmd->add_option("--out", *out_path, "CSV output path")->required();
    cmd->add_option("--seed", *seed, "random seed");
    cmd->callback([&action, file, model, n, out_path, seed, sdp, &out]() {
      action = [file, model, n, out_path, seed, sdp, &out]() {
        if (*model != "balanced" && *model != "linear")
          throw std::invalid_argument("--model must be balanced or linear");
        ScanOptions opts;
        opts.kind = *model == "balanced" ? NoiseModel::Kind::kBalanced
                                         : NoiseModel::Kind::kLinear;
        opts.n_random = *n;
        opts.seed = *seed;
        opts.sdp = sdp;
        RegionScan scan = region_scan(load_set(*file), opts);
        scan.set_label = *file;
        std::ostringstream csv;
        write_csv(scan, csv);
        save_text_file(*out_path, csv.str());
        out << "wrote " << scan.rows.size() << " rows to " << *out_path << "\n";
        return 0;
      };
    });
  }

  // jewel vertices / cuboid vertices
  {
    auto* jewel_cmd = app.add_subcommand("jewel", "Matrix jewel geometry");
    jewel_cmd->require_subcommand(1);
    auto* v = jewel_cmd->add_subcommand("vertices", "Level-1 extremal points");
    auto k = std::make_shared<std::vector<int>>();
    v->add_option("--k", *k, "outcome counts")->required()->delimiter(',');
    v->callback([&action, k, &out]() {
      action = [k, &out]() {
        std::vector<Eigen::VectorXd> pts;
        if (k->size() == 1) {
          pts = jewel_vertices((*k)[0]);
        } else {
          // Direct sum polytope: each group's vertices embedded, zero elsewhere.
          JewelShape shape(*k);
          int off = 0;
          for (int i = 0; i < shape.groups(); ++i) {
            for (const Eigen::VectorXd& p : jewel_vertices(shape.k()[i])) {
              Eigen::VectorXd q = Eigen::VectorXd::Zero(shape.blocks());
              q.segment(off, p.size()) = p;
              pts.push_back(q);
            }
            off += shape.k()[i] - 1;
          }
        }
        out << csv_points(pts);
        return 0;
      };
    });

    auto* cuboid_cmd = app.add_subcommand("cuboid", "Matrix cuboid geometry");
    cuboid_cmd->require_subcommand(1);
    auto* cv = cuboid_cmd->add_subcommand("vertices", "Level-1 extremal points");
    auto ck = std::make_shared<std::vector<int>>();
    cv->add_option("--k", *ck, "outcome counts")->required()->delimiter(',');
    cv->callback([&action, ck, &out]() {
      action = [ck, &out]() {
        out << csv_points(cuboid_vertices(JewelShape(*ck)));
        return 0;
      };
    });
  }

  // mub --d --count --out
  {
    auto* cmd = app.add_subcommand("mub", "Generate mutually unbiased bases");
    auto d = std::make_shared<int>(0);
    auto count = std::make_shared<int>(2);
    auto out_path = std::make_shared<std::string>();
    cmd->add_option("--d", *d, "dimension")->required();
    cmd->add_option("--count", *count, "number of bases");
    cmd->add_option("--out", *out_path, "output file")->required();
    cmd->callback([&action, d, count, out_path, &out]() {
      action = [d, count, out_path, &out]() {
        const MeasurementSet set = mub_povms(*d, *count);
        save_text_file(*out_path, canonical_dump(to_json(set)) + "\n");
        out << "wrote " << *out_path << "\n";
        return 0;
      };
    });
  }

  // gen random --g --d --k --seed --out
  {
    auto* gen = app.add_subcommand("gen", "Generate measurement sets");
    gen->require_subcommand(1);
    auto* cmd = gen->add_subcommand("random", "Seeded random POVM set");
    auto g = std::make_shared<int>(1);
    auto d = std::make_shared<int>(0);
    auto k = std::make_shared<std::vector<int>>();
    auto seed = std::make_shared<std::uint64_t>(1);
    auto out_path = std::make_shared<std::string>();
    cmd->add_option("--g", *g, "number of POVMs");
    cmd->add_option("--d", *d, "dimension")->required();
    cmd->add_option("--k", *k, "outcome counts")->required()->delimiter(',');
    cmd->add_option("--seed", *seed, "random seed");
    cmd->add_option("--out", *out_path, "output file")->required();
    cmd->callback([&action, g, d, k, seed, out_path, &out]() {
      action = [g, d, k, seed, out_path, &out]() {
        std::vector<int> shape = *k;
        if (static_cast<int>(shape.size()) == 1 && *g > 1)
          shape.assign(*g, shape[0]);
        const MeasurementSet set = random_set(*d, shape, *seed);
        save_text_file(*out_path, canonical_dump(to_json(set)) + "\n");
        out << "wrote " << *out_path << " (seed " << *seed << ")\n";
        return 0;
      };
    });
  }

  std::vector<const char*> argv;
  argv.push_back("jewel");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    return action ? action() : 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace jewel
