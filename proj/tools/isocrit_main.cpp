// Command-line front end: every subcommand prints one machine-readable
// report (JSON with sorted keys and 17-significant-digit floats, or CSV
// with an LF header row), so identical invocations produce identical bytes.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "isocrit/components.hpp"
#include "isocrit/degree.hpp"
#include "isocrit/errors.hpp"
#include "isocrit/expr.hpp"
#include "isocrit/field.hpp"
#include "isocrit/gallery.hpp"
#include "isocrit/hadamard.hpp"
#include "isocrit/implicit.hpp"
#include "isocrit/winding.hpp"

using json = nlohmann::json;
using namespace isocrit;

namespace {

// ---------------------------------------------------------------------------
// canonical serialization

void dump_escaped(const std::string& s, std::string& out) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void dump_canonical(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.cbegin(); it != j.cend(); ++it) {
        if (!first) out += ',';
        first = false;
        dump_escaped(it.key(), out);
        out += ':';
        dump_canonical(it.value(), out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        dump_canonical(v, out);
      }
      out += ']';
      break;
    }
    case json::value_t::string:
      dump_escaped(j.get<std::string>(), out);
      break;
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        break;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      break;
    }
    case json::value_t::number_integer:
      out += std::to_string(j.get<long long>());
      break;
    case json::value_t::number_unsigned:
      out += std::to_string(j.get<unsigned long long>());
      break;
    case json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      break;
    default:
      out += "null";
  }
}

std::string canonical(const json& j) {
  std::string out;
  dump_canonical(j, out);
  out += '\n';
  return out;
}

json vec_json(std::span<const double> v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

// ---------------------------------------------------------------------------
// argument parsing helpers

Vec parse_doubles(const std::string& s) {
  Vec out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad number '" + item + "' in '" + s + "'");
    }
  }
  if (out.empty()) throw UsageError("empty number list '" + s + "'");
  return out;
}

std::vector<Vec> parse_points(const std::string& s) {
  std::vector<Vec> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) out.push_back(parse_doubles(item));
  if (out.empty()) throw UsageError("empty point list");
  return out;
}

Box parse_box(const std::string& s, int dim) {
  const Vec v = parse_doubles(s);
  if (static_cast<int>(v.size()) != 2 * dim)
    throw UsageError("box needs " + std::to_string(2 * dim) +
                     " numbers (lo,hi per axis), got " + std::to_string(v.size()));
  Box b;
  for (int i = 0; i < dim; ++i) {
    if (!(v[2 * i] < v[2 * i + 1])) throw UsageError("box interval is empty");
    b.side.push_back({v[2 * i], v[2 * i + 1]});
  }
  return b;
}

struct FieldArgs {
  std::string gallery_id;
  std::string expr;
  std::string expr_file;
  std::string dims;

  void attach(CLI::App* cmd) {
    cmd->add_option("--gallery", gallery_id, "gallery id (see `gallery --list`)");
    cmd->add_option("--field", expr, "inline field expression");
    cmd->add_option("--field-file", expr_file, "file containing a field expression");
    cmd->add_option("--dims", dims, "input,output dimensions for --field");
  }

  VectorField resolve() const {
    const int sources = static_cast<int>(!gallery_id.empty()) +
                        static_cast<int>(!expr.empty()) +
                        static_cast<int>(!expr_file.empty());
    if (sources != 1)
      throw UsageError("pass exactly one of --gallery, --field, --field-file");
    if (!gallery_id.empty()) return builtin(gallery_id).field;
    std::string src = expr;
    if (!expr_file.empty()) {
      std::ifstream in(expr_file);
      if (!in) throw UsageError("cannot read " + expr_file);
      std::stringstream buf;
      buf << in.rdbuf();
      src = buf.str();
    }
    if (dims.empty()) throw UsageError("--field needs --dims in,out");
    const Vec d = parse_doubles(dims);
    if (d.size() != 2) throw UsageError("--dims needs two integers");
    return VectorField::from_ast(
        parse_field(src, static_cast<int>(d[0]), static_cast<int>(d[1])));
  }
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + out_path);
  out << text;
}

json certificate_json(const DegreeCertificate& cert) {
  json j;
  j["degree"] = cert.degree;
  j["boundary_margin"] = cert.boundary_margin;
  j["grid_res"] = cert.grid_res;
  j["target"] = vec_json(cert.target);
  json pre = json::array();
  for (const Preimage& p : cert.preimages) {
    json e;
    e["x"] = vec_json(p.x);
    e["sign"] = p.sign;
    e["residual"] = p.residual;
    pre.push_back(e);
  }
  j["preimages"] = pre;
  return j;
}

const char* cert_name(CertKind k) {
  switch (k) {
    case CertKind::winding: return "winding";
    case CertKind::degree: return "degree";
    case CertKind::bisection: return "bisection";
    default: return "none";
  }
}

// ---------------------------------------------------------------------------
// driver

int run(int argc, char** argv) {
  CLI::App app{"isocrit: topological invariants of vector fields at isolated critical points"};
  app.require_subcommand(1);

  std::string out_path;
  app.add_option("--out", out_path, "write the report to this file instead of stdout");
  long long seed = 0;
  app.add_option("--seed", seed, "random seed for seeded scans (default 0)");

  auto* cmd_gallery = app.add_subcommand("gallery", "list builtin fields");
  bool list_flag = false;
  cmd_gallery->add_flag("--list", list_flag, "print the gallery ids");

  auto* cmd_parse = app.add_subcommand("parse-check", "parse a field expression and echo it");
  FieldArgs parse_args;
  parse_args.attach(cmd_parse);

  auto* cmd_index = app.add_subcommand("index", "local index at an isolated preimage");
  FieldArgs index_args;
  index_args.attach(cmd_index);
  std::string center_s = "0,0";
  double radius = 0.5;
  cmd_index->add_option("--center", center_s, "center point x,y");
  cmd_index->add_option("--radius", radius, "circle radius");

  auto* cmd_winding = app.add_subcommand("winding", "winding of H - H(center) on a circle");
  FieldArgs winding_args;
  winding_args.attach(cmd_winding);
  std::string wcenter_s = "0,0";
  double wradius = 0.5;
  int wsamples = 256;
  cmd_winding->add_option("--center", wcenter_s, "center point x,y");
  cmd_winding->add_option("--radius", wradius, "circle radius");
  cmd_winding->add_option("--samples", wsamples, "loop sample count");

  auto* cmd_degree = app.add_subcommand("degree", "preimage-counting degree certificate");
  FieldArgs degree_args;
  degree_args.attach(cmd_degree);
  std::string target_s;
  std::string dbox_s;
  int dres = 32;
  cmd_degree->add_option("--target", target_s, "target value y1,y2,...")->required();
  cmd_degree->add_option("--box", dbox_s, "search box lo,hi per axis")->required();
  cmd_degree->add_option("--res", dres, "grid resolution per axis");

  auto* cmd_zero = app.add_subcommand("certify-zero", "zero-existence certificate on a box");
  FieldArgs zero_args;
  zero_args.attach(cmd_zero);
  std::string zbox_s;
  int zres = 32;
  cmd_zero->add_option("--box", zbox_s, "search box lo,hi per axis")->required();
  cmd_zero->add_option("--res", zres, "grid resolution per axis");

  auto* cmd_comp = app.add_subcommand("components", "sublevel component labeling at one radius");
  FieldArgs comp_args;
  comp_args.attach(cmd_comp);
  std::string cy0_s, cbox_s, cseeds_s;
  double cr = 0.1;
  int cres = 128;
  cmd_comp->add_option("--y0", cy0_s, "target value")->required();
  cmd_comp->add_option("--box", cbox_s, "grid box")->required();
  cmd_comp->add_option("--seeds", cseeds_s, "seed points p1:p2:...")->required();
  cmd_comp->add_option("--r", cr, "sublevel radius");
  cmd_comp->add_option("--res", cres, "grid resolution");

  auto* cmd_xcurve = app.add_subcommand("xcurve", "counting function X(r)");
  FieldArgs xc_args;
  xc_args.attach(cmd_xcurve);
  std::string xy0_s = "0,0", xbox_s, xseeds_s, xformat = "csv";
  double rmin = 0.05, rmax = 0.5;
  int xsteps = 20, xres = 256;
  cmd_xcurve->add_option("--y0", xy0_s, "target value");
  cmd_xcurve->add_option("--box", xbox_s, "grid box")->required();
  cmd_xcurve->add_option("--seeds", xseeds_s, "seed points p1:p2:...")->required();
  cmd_xcurve->add_option("--rmin", rmin, "smallest radius");
  cmd_xcurve->add_option("--rmax", rmax, "largest radius");
  cmd_xcurve->add_option("--steps", xsteps, "number of radii");
  cmd_xcurve->add_option("--res", xres, "grid resolution");
  cmd_xcurve->add_option("--format", xformat, "csv or json");

  auto* cmd_implicit = app.add_subcommand("implicit", "solve F(x,y) = F(x0,y0) for y = g(x)");
  FieldArgs imp_args;
  imp_args.attach(cmd_implicit);
  std::string anchor_s, xsamples_s, mode_s = "existence", radius_expr, ybox_s, deltas_s;
  double imp_radius = 0.5, imp_tol = 1e-10;
  int imp_scan_res = 33;
  std::string imp_format = "json";
  cmd_implicit->add_option("--anchor", anchor_s, "anchor point x0...,y0...")->required();
  cmd_implicit->add_option("--xsamples", xsamples_s, "x samples p1:p2:...")->required();
  cmd_implicit->add_option("--mode", mode_s, "unique or existence");
  cmd_implicit->add_option("--search-radius", imp_radius, "y search radius (existence mode)");
  cmd_implicit->add_option("--search-radius-expr", radius_expr,
                           "y search radius as an expression in x1..xn");
  cmd_implicit->add_option("--ybox", ybox_s, "restrict root picking to this y box");
  cmd_implicit->add_option("--deltas", deltas_s, "deltas for the continuity profile");
  cmd_implicit->add_option("--tol", imp_tol, "residual tolerance");
  cmd_implicit->add_option("--scan-res", imp_scan_res, "y grid resolution");
  cmd_implicit->add_option("--format", imp_format, "json or csv (sample table)");

  auto* cmd_had = app.add_subcommand("hadamard", "global diffeomorphism screen");
  FieldArgs had_args;
  had_args.attach(cmd_had);
  std::string hbox_s, hradii_s;
  int hres = 64, hpairs = 400;
  cmd_had->add_option("--box", hbox_s, "scan box")->required();
  cmd_had->add_option("--radii", hradii_s, "increasing sphere radii r1,r2,...")->required();
  cmd_had->add_option("--res", hres, "grid resolution");
  cmd_had->add_option("--pairs", hpairs, "random pair samples for the collision scan");

  // --out and --seed live on the parent; let them appear after the
  // subcommand name as well
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (cmd_gallery->parsed()) {
    json j;
    j["ids"] = gallery_ids();
    (void)list_flag;
    emit(canonical(j), out_path);
    return 0;
  }

  if (cmd_parse->parsed()) {
    const VectorField f = parse_args.resolve();
    json j;
    j["ok"] = true;
    j["input_dim"] = f.input_dim();
    j["output_dim"] = f.output_dim();
    if (f.ast() != nullptr) j["printed"] = print_field(*f.ast());
    emit(canonical(j), out_path);
    return 0;
  }

  if (cmd_index->parsed()) {
    const VectorField f = index_args.resolve();
    const Vec c = parse_doubles(center_s);
    if (c.size() != 2) throw UsageError("--center needs two coordinates");
    const IndexResult r = local_index(f, {c[0], c[1]}, radius);
    json j;
    j["center"] = vec_json(r.center);
    j["radius"] = r.radius;
    j["index_magnitude"] = r.magnitude;
    j["sign"] = r.sign;
    j["samples_used"] = r.samples_used;
    j["min_modulus"] = r.min_modulus;
    j["valid"] = r.valid;
    j["local_homeomorphism"] = homeomorphism_verdict(r);
    emit(canonical(j), out_path);
    return 0;
  }

  if (cmd_winding->parsed()) {
    const VectorField f = winding_args.resolve();
    const Vec c = parse_doubles(wcenter_s);
    if (c.size() != 2) throw UsageError("--center needs two coordinates");
    const LoopSample loop = sample_circle_map(f, {c[0], c[1]}, wradius, wsamples);
    const AngleLift lift = angle_lift(loop);
    double min_mod = std::numeric_limits<double>::infinity();
    for (const Vec2& v : loop.values)
      min_mod = std::min(min_mod, std::hypot(v[0], v[1]));
    json j;
    j["winding"] = winding_number(lift);
    j["base"] = lift.base;
    j["samples"] = wsamples;
    j["min_modulus"] = min_mod;
    j["lift_end"] = lift.lift_values.back();
    emit(canonical(j), out_path);
    return 0;
  }

  if (cmd_degree->parsed()) {
    const VectorField f = degree_args.resolve();
    const Vec y = parse_doubles(target_s);
    const Box box = parse_box(dbox_s, f.input_dim());
    const DegreeCertificate cert = preimage_degree(f, y, box, dres);
    emit(canonical(certificate_json(cert)), out_path);
    return 0;
  }

  if (cmd_zero->parsed()) {
    const VectorField f = zero_args.resolve();
    const Box box = parse_box(zbox_s, f.input_dim());
    const auto cert = certify_zero(f, box, zres);
    json j;
    j["certified"] = cert.has_value();
    if (cert) j["certificate"] = certificate_json(*cert);
    emit(canonical(j), out_path);
    return 0;
  }

  if (cmd_comp->parsed()) {
    const VectorField f = comp_args.resolve();
    const Vec y0 = parse_doubles(cy0_s);
    const Box box = parse_box(cbox_s, f.input_dim());
    const std::vector<Vec> seeds = parse_points(cseeds_s);
    const ModulusGrid grid = rasterize(f, y0, box, cres);
    const ComponentLabeling lab = sublevel_components(grid, cr, seeds);
    json j;
    j["r"] = lab.r;
    j["res"] = lab.res;
    j["count"] = lab.count;
    json sm = json::array();
    for (const auto& [seed_pt, label] : lab.seed_map) {
      json e;
      e["seed"] = vec_json(seed_pt);
      e["label"] = label;
      sm.push_back(e);
    }
    j["seed_labels"] = sm;
    if (lab.count >= 2) j["min_component_distance"] = min_component_distance(lab);
    emit(canonical(j), out_path);
    return 0;
  }

  if (cmd_xcurve->parsed()) {
    const VectorField f = xc_args.resolve();
    const Vec y0 = parse_doubles(xy0_s);
    const Box box = parse_box(xbox_s, f.input_dim());
    const std::vector<Vec> seeds = parse_points(xseeds_s);
    if (xsteps < 2) throw UsageError("--steps must be at least 2");
    const CountingCurve curve =
        counting_curve(f, y0, seeds, box, xres, linspace(rmin, rmax, xsteps));
    if (xformat == "json") {
      json j;
      j["r"] = curve.r_values;
      j["x"] = curve.x_values;
      emit(canonical(j), out_path);
    } else if (xformat == "csv") {
      std::string csv = "r,X\n";
      char buf[64];
      for (std::size_t i = 0; i < curve.r_values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%d\n", curve.r_values[i],
                      curve.x_values[i]);
        csv += buf;
      }
      emit(csv, out_path);
    } else {
      throw UsageError("--format must be csv or json");
    }
    return 0;
  }

  if (cmd_implicit->parsed()) {
    const VectorField F = imp_args.resolve();
    const int m = F.output_dim();
    const int n = F.input_dim() - m;
    if (n < 1) throw UsageError("field has no x variables");
    const Vec anchor = parse_doubles(anchor_s);
    if (static_cast<int>(anchor.size()) != n + m)
      throw UsageError("--anchor needs n + m coordinates");
    const Vec x0(anchor.begin(), anchor.begin() + n);
    const Vec y0(anchor.begin() + n, anchor.end());
    const std::vector<Vec> xs = parse_points(xsamples_s);

    SolveMode mode;
    if (mode_s == "unique") mode = SolveMode::unique;
    else if (mode_s == "existence" || mode_s == "existence_only")
      mode = SolveMode::existence_only;
    else throw UsageError("--mode must be unique or existence");

    ImplicitOptions opts;
    opts.tol = imp_tol;
    opts.scan_res = imp_scan_res;
    opts.default_radius = imp_radius;
    if (!radius_expr.empty()) {
      const FieldAst rad_ast = parse_field(radius_expr, n, 1);
      opts.search_radius = [rad_ast](std::span<const double> x) {
        return eval_ast(rad_ast, x)[0];
      };
    }
    if (!ybox_s.empty()) opts.y_box = parse_box(ybox_s, m);

    const ImplicitReport rep = solve_implicit(F, x0, y0, xs, mode, opts);

    if (imp_format == "csv") {
      std::string csv;
      for (int i = 1; i <= n; ++i) csv += "x" + std::to_string(i) + ",";
      csv += "solved,";
      for (int i = 1; i <= m; ++i) csv += "y" + std::to_string(i) + ",";
      csv += "residual\n";
      char buf[64];
      for (const auto& s : rep.samples) {
        for (double v : s.x) {
          std::snprintf(buf, sizeof buf, "%.17g,", v);
          csv += buf;
        }
        csv += s.solved ? "1," : "0,";
        for (int i = 0; i < m; ++i) {
          if (s.solved) std::snprintf(buf, sizeof buf, "%.17g,", s.y[i]);
          else std::snprintf(buf, sizeof buf, "nan,");
          csv += buf;
        }
        if (s.solved) std::snprintf(buf, sizeof buf, "%.17g\n", s.residual);
        else std::snprintf(buf, sizeof buf, "nan\n");
        csv += buf;
      }
      emit(csv, out_path);
      return 0;
    }
    if (imp_format != "json") throw UsageError("--format must be json or csv");

    json j;
    j["anchor_x"] = vec_json(rep.x0);
    j["anchor_y"] = vec_json(rep.y0);
    j["mode"] = mode == SolveMode::unique ? "unique" : "existence_only";
    j["tol"] = rep.tol;
    if (rep.calibration) {
      json c;
      c["s1"] = rep.calibration->s1;
      c["wall"] = rep.calibration->wall;
      c["r1"] = rep.calibration->r1;
      c["k"] = rep.calibration->k;
      c["s2"] = rep.calibration->s2;
      c["r2"] = rep.calibration->r2;
      j["calibration"] = c;
    } else {
      j["calibration"] = nullptr;
    }
    json samples = json::array();
    for (const auto& s : rep.samples) {
      json e;
      e["x"] = vec_json(s.x);
      e["solved"] = s.solved;
      if (s.solved) {
        e["y"] = vec_json(s.y);
        e["residual"] = s.residual;
      }
      e["certificate"] = cert_name(s.certificate);
      samples.push_back(e);
    }
    j["samples"] = samples;
    j["solved_count"] = rep.solved_count();
    if (!deltas_s.empty()) {
      const Vec deltas = parse_doubles(deltas_s);
      json prof = json::array();
      for (const auto& [d, sup] : continuity_profile(rep, deltas)) {
        json e;
        e["delta"] = d;
        e["sup"] = sup;
        prof.push_back(e);
      }
      j["continuity_profile"] = prof;
    }
    emit(canonical(j), out_path);
    return 0;
  }

  if (cmd_had->parsed()) {
    const VectorField f = had_args.resolve();
    const Box box = parse_box(hbox_s, f.input_dim());
    const Vec radii = parse_doubles(hradii_s);
    HadamardOptions opts;
    opts.seed = static_cast<unsigned long long>(seed);
    const HadamardReport rep = hadamard_check(f, box, hres, radii, hpairs, opts);
    json j;
    j["min_abs_det"] = rep.min_abs_det;
    switch (rep.verdict) {
      case HadamardVerdict::consistent_with_diffeo:
        j["verdict"] = "consistent_with_diffeo";
        break;
      case HadamardVerdict::critical_point_found:
        j["verdict"] = "critical_point_found";
        break;
      case HadamardVerdict::properness_doubtful:
        j["verdict"] = "properness_doubtful";
        break;
      case HadamardVerdict::injectivity_violated:
        j["verdict"] = "injectivity_violated";
        break;
    }
    json props = json::array();
    for (const auto& [R, mod] : rep.properness_samples) {
      json e;
      e["radius"] = R;
      e["min_modulus"] = mod;
      props.push_back(e);
    }
    j["properness_samples"] = props;
    if (rep.collision) {
      json c;
      c["x"] = vec_json(rep.collision->first);
      c["x_prime"] = vec_json(rep.collision->second);
      j["collision"] = c;
    }
    j["seed"] = seed;
    emit(canonical(j), out_path);
    return 0;
  }

  throw UsageError("no subcommand given");
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "isocrit: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "isocrit: internal error: " << e.what() << "\n";
    return 1;
  }
}
