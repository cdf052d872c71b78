// lamelab: exponent-region geometry, Lame-operator symbol evaluation, and
// the scaling-law experiment harnesses, as one reproducible CLI.

#include <CLI11.hpp>

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <thread>

#include "lamelab/carleman.hpp"
#include "lamelab/eigen_lab.hpp"
#include "lamelab/errors.hpp"
#include "lamelab/exponent_geometry.hpp"
#include "lamelab/field_io.hpp"
#include "lamelab/sharpness.hpp"

using namespace lamelab;
using nlohmann::json;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 0;
  int threads = 1;
  bool json_out = false;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// "a+bi", "a-bi", "bi", or "a".
Cplx parse_complex(const std::string& text) {
  if (text.empty()) throw DomainError("empty complex literal");
  std::string s = text;
  bool has_i = s.back() == 'i' || s.back() == 'I';
  if (!has_i) return Cplx(std::stod(s), 0.0);
  s.pop_back();
  // split at the last +/- that is not an exponent sign or leading sign
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  try {
    if (split == std::string::npos) {
      if (s.empty() || s == "+" ) return Cplx(0.0, 1.0);
      if (s == "-") return Cplx(0.0, -1.0);
      return Cplx(0.0, std::stod(s));
    }
    double re = std::stod(s.substr(0, split));
    std::string imtxt = s.substr(split);
    double im = (imtxt == "+") ? 1.0 : (imtxt == "-") ? -1.0 : std::stod(imtxt);
    return Cplx(re, im);
  } catch (const std::exception&) {
    throw DomainError("cannot parse complex literal: " + text);
  }
}

// "2^-4..2^-10" (dyadic range), or a comma list of numbers / powers.
std::vector<double> parse_sweep(const std::string& text) {
  auto parse_one = [](const std::string& t) -> double {
    auto caret = t.find('^');
    if (caret != std::string::npos) {
      double base = std::stod(t.substr(0, caret));
      double expo = std::stod(t.substr(caret + 1));
      return std::pow(base, expo);
    }
    return std::stod(t);
  };
  auto dots = text.find("..");
  std::vector<double> out;
  try {
    if (dots != std::string::npos) {
      std::string lo = text.substr(0, dots), hi = text.substr(dots + 2);
      auto c1 = lo.find('^'), c2 = hi.find('^');
      if (c1 != std::string::npos && c2 != std::string::npos &&
          lo.substr(0, c1) == hi.substr(0, c2)) {
        double base = std::stod(lo.substr(0, c1));
        long e1 = std::lround(std::stod(lo.substr(c1 + 1)));
        long e2 = std::lround(std::stod(hi.substr(c2 + 1)));
        long step = e2 >= e1 ? 1 : -1;
        for (long e = e1;; e += step) {
          out.push_back(std::pow(base, static_cast<double>(e)));
          if (e == e2) break;
        }
        return out;
      }
      throw DomainError("range sweep needs matching bases, like 2^-4..2^-10");
    }
    std::size_t pos = 0;
    while (pos < text.size()) {
      auto comma = text.find(',', pos);
      std::string piece = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
      if (!piece.empty()) out.push_back(parse_one(piece));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception&) {
    throw DomainError("cannot parse sweep: " + text);
  }
  if (out.empty()) throw DomainError("empty sweep: " + text);
  return out;
}

Eigen::VectorXd parse_vector(const std::string& text) {
  std::vector<double> vals;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto comma = text.find(',', pos);
    std::string piece = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    if (!piece.empty()) vals.push_back(std::stod(piece));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (vals.empty()) throw DomainError("empty vector literal: " + text);
  Eigen::VectorXd v(static_cast<long>(vals.size()));
  for (std::size_t k = 0; k < vals.size(); ++k) v[static_cast<long>(k)] = vals[k];
  return v;
}

double parse_exponent(const std::string& text) {
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  Rat r = parse_rational(text);
  return to_double(r);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot open output file " + path);
  return out;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepPoint>& pts) {
  auto out = open_out(path);
  out << "delta,ratio,norm_f,norm_Tf,slope_running\n";
  std::vector<double> xs, ys;
  for (const auto& pt : pts) {
    xs.push_back(pt.delta);
    ys.push_back(pt.ratio);
    std::string running = "nan";
    if (xs.size() >= 2) running = fmt(fit_loglog(xs, ys).slope);
    out << fmt(pt.delta) << ',' << fmt(pt.ratio) << ',' << fmt(pt.norm_f) << ','
        << fmt(pt.norm_tf) << ',' << running << '\n';
  }
}

void write_polyline_csv(const std::string& path, const RegionPolyline& poly) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
    out << "# vertex " << i << ": " << (poly.vertex_in_region[i] ? "in" : "out")
        << ", edge " << i << "->" << (i + 1) % poly.vertices.size() << ": "
        << (poly.edge_in_region[i] ? "closed" : "open") << '\n';
  }
  out << "x,y\n";
  for (const auto& v : poly.vertices)
    out << to_string(v.x) << ',' << to_string(v.y) << '\n';
}

json symbol_matrix_json(const SymbolMatrix& m) {
  json rows = json::array();
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j)
      rows.push_back({m(i, j).real(), m(i, j).imag()});
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries_row_major", rows}};
}

void print_matrix(const SymbolMatrix& m, bool as_json) {
  if (as_json) {
    std::cout << symbol_matrix_json(m).dump(2) << '\n';
    return;
  }
  for (long i = 0; i < m.rows(); ++i) {
    for (long j = 0; j < m.cols(); ++j)
      std::cout << (j ? " " : "") << '(' << fmt(m(i, j).real()) << ',' << fmt(m(i, j).imag())
                << ')';
    std::cout << '\n';
  }
}

// --- subcommand setups -----------------------------------------------------

void setup_regions(CLI::App& app, GlobalOpts& g) {
  auto* regions = app.add_subcommand("regions", "exact exponent-square geometry");
  regions->require_subcommand(1);
  (void)g;

  auto* cls = regions->add_subcommand(
      "classify", "classify (1/p,1/q) into the resolvent-estimate regions");
  auto dim = std::make_shared<int>(3);
  auto xs = std::make_shared<std::string>("1/2");
  auto ys = std::make_shared<std::string>("1/2");
  cls->add_option("--dim", *dim, "space dimension d >= 2")->required();
  cls->add_option("--x", *xs, "1/p as an exact rational")->required();
  cls->add_option("--y", *ys, "1/q as an exact rational")->required();
  cls->callback([dim, xs, ys]() {
    ExponentPair p(parse_rational(*xs), parse_rational(*ys));
    RegionTag tag = classify(*dim, p);
    BoundProfile prof = bound_profile(*dim, p);
    std::cout << to_string(tag) << " gamma=" << to_string(prof.gamma)
              << " z_power=" << to_string(prof.kappa_exponent) << '\n';
  });

  auto* poly = regions->add_subcommand("polyline", "region boundary polygon as CSV");
  auto pd = std::make_shared<int>(3);
  auto tag = std::make_shared<std::string>("R1");
  auto out = std::make_shared<std::string>("");
  poly->add_option("--dim", *pd)->required();
  poly->add_option("--tag", *tag, "R1 | R2tilde | R3tilde | R3tildePrime")->required();
  poly->add_option("--out", *out, "output CSV path")->required();
  poly->callback([pd, tag, out]() {
    auto p = region_polyline(*pd, region_tag_from_string(*tag));
    write_polyline_csv(*out, p);
    std::cout << "polyline vertices=" << p.vertices.size() << " -> " << *out << '\n';
  });

  auto* zb = regions->add_subcommand(
      "zboundary", "sampled boundary of the spectral region Z_{p,q}(ell)");
  auto zd = std::make_shared<int>(3);
  auto zx = std::make_shared<std::string>("4/5");
  auto zy = std::make_shared<std::string>("1/5");
  auto ell = std::make_shared<double>(1.0);
  auto samples = std::make_shared<int>(720);
  auto zout = std::make_shared<std::string>("");
  zb->add_option("--dim", *zd)->required();
  zb->add_option("--x", *zx)->required();
  zb->add_option("--y", *zy)->required();
  zb->add_option("--ell", *ell, "level of kappa");
  zb->add_option("--samples", *samples, "boundary sample count");
  zb->add_option("--out", *zout)->required();
  zb->callback([zd, zx, zy, ell, samples, zout]() {
    ExponentPair p(parse_rational(*zx), parse_rational(*zy));
    auto pts = zregion_boundary(*zd, p, *ell, *samples);
    auto out = open_out(*zout);
    out << "re,im\n";
    for (auto z : pts) out << fmt(z.real()) << ',' << fmt(z.imag()) << '\n';
    std::cout << "zboundary samples=" << pts.size() << " -> " << *zout << '\n';
  });
}

void setup_symbol(CLI::App& app, GlobalOpts& g) {
  auto* sym = app.add_subcommand("symbol", "evaluate one Fourier symbol at one frequency");
  auto* eval = sym->add_subcommand("eval", "kinds: lame resolvent leray riesz imag carleman conjugated reduced");
  auto kind = std::make_shared<std::string>("resolvent");
  auto xi = std::make_shared<std::string>("1,0,0");
  auto z = std::make_shared<std::string>("-1");
  auto mu = std::make_shared<double>(1.0);
  auto lambda = std::make_shared<double>(2.0);
  auto delta = std::make_shared<double>(0.0625);
  auto rho = std::make_shared<double>(2.0);
  auto variant = std::make_shared<std::string>("raw");
  auto comp = std::make_shared<int>(0);
  auto vdir = std::make_shared<std::string>("");
  auto tau = std::make_shared<double>(0.0);
  eval->add_option("--kind", *kind)->required();
  eval->add_option("--xi", *xi, "frequency, comma separated");
  eval->add_option("--z", *z, "spectral parameter, e.g. -1+0.5i");
  eval->add_option("--mu", *mu);
  eval->add_option("--lambda", *lambda);
  eval->add_option("--delta", *delta, "imag/reduced sharpness scale");
  eval->add_option("--rho", *rho, "(lambda+2mu)/mu for the reduced symbols");
  eval->add_option("--variant", *variant, "imag symbol variant: raw | normalized");
  eval->add_option("--j", *comp, "riesz component (0-based)");
  eval->add_option("--v", *vdir, "conjugation direction (default e_1)");
  eval->add_option("--tau", *tau, "slab variable for the reduced symbols");
  auto gj = std::make_shared<bool>(false);
  eval->add_flag("--json", *gj, "JSON output");
  eval->callback([=, &g]() {
    bool as_json = *gj || g.json_out;
    Eigen::VectorXd f = parse_vector(*xi);
    FrequencyPoint fq(f);
    LameParameters par(*mu, *lambda);
    if (*kind == "lame") return print_matrix(lame_matrix(fq, parse_complex(*z), par), as_json);
    if (*kind == "resolvent")
      return print_matrix(resolvent_symbol(fq, parse_complex(*z), par), as_json);
    if (*kind == "leray") return print_matrix(leray_projector(fq), as_json);
    if (*kind == "conjugated") {
      Eigen::VectorXd v;
      if (vdir->empty()) {
        v = Eigen::VectorXd::Zero(f.size());
        v[0] = 1.0;
      } else {
        v = parse_vector(*vdir);
      }
      return print_matrix(conjugated_inverse(fq, v, par), as_json);
    }
    if (*kind == "riesz") {
      Cplx r = riesz_symbol(*comp, fq);
      if (as_json)
        std::cout << json{{"value", {r.real(), r.imag()}}}.dump(2) << '\n';
      else
        std::cout << '(' << fmt(r.real()) << ',' << fmt(r.imag()) << ")\n";
      return;
    }
    if (*kind == "carleman") {
      Cplx r = carleman_symbol(fq);
      if (as_json)
        std::cout << json{{"value", {r.real(), r.imag()}}}.dump(2) << '\n';
      else
        std::cout << '(' << fmt(r.real()) << ',' << fmt(r.imag()) << ")\n";
      return;
    }
    if (*kind == "imag") {
      auto v = imag_symbol(fq, *delta, *rho,
                           *variant == "normalized" ? ImagVariant::Normalized
                                                    : ImagVariant::Raw);
      if (as_json)
        std::cout << json{{"total", v.total}, {"sphere", v.sphere}, {"shifted", v.shifted}}
                         .dump(2)
                  << '\n';
      else
        std::cout << "I=" << fmt(v.total) << " M=" << fmt(v.sphere) << " m=" << fmt(v.shifted)
                  << '\n';
      return;
    }
    if (*kind == "reduced") {
      auto rs = reduced_symbols(*tau, f, *delta, *rho);
      if (as_json)
        std::cout << json{{"a", rs.a}, {"b", rs.b}}.dump(2) << '\n';
      else
        std::cout << "a=" << fmt(rs.a) << " b=" << fmt(rs.b) << '\n';
      return;
    }
    throw DomainError("unknown symbol kind: " + *kind);
  });
}

void setup_solve(CLI::App& app, GlobalOpts& g) {
  auto* solve = app.add_subcommand(
      "solve", "apply the resolvent (-Delta^* - z)^{-1} to a source field on a grid");
  auto dim = std::make_shared<int>(2);
  auto n = std::make_shared<int>(256);
  auto box = std::make_shared<double>(32.0);
  auto mu = std::make_shared<double>(1.0);
  auto lambda = std::make_shared<double>(2.0);
  auto z = std::make_shared<std::string>("-1+0.5i");
  auto source = std::make_shared<std::string>("gaussian");
  auto comp = std::make_shared<int>(0);
  auto out = std::make_shared<std::string>("");
  auto offset = std::make_shared<bool>(true);
  solve->add_option("--dim", *dim)->required();
  solve->add_option("--n", *n, "grid points per axis (power of two)");
  solve->add_option("--box", *box, "half length of the periodic box");
  solve->add_option("--mu", *mu);
  solve->add_option("--lambda", *lambda);
  solve->add_option("--z", *z);
  solve->add_option("--source", *source, "gaussian | ring");
  solve->add_option("--source-component", *comp, "component carrying the source");
  solve->add_option("--out", *out, "output LAMF field");
  solve->add_flag("--offset,!--no-offset", *offset, "half-cell frequency offset");
  solve->callback([=, &g]() {
    (void)g;
    PeriodicGrid grid = PeriodicGrid::isotropic(*dim, *n, *box, *offset);
    LameParameters par(*mu, *lambda);
    Cplx zz = parse_complex(*z);
    VectorField f(grid, *dim);
    if (*source == "gaussian") {
      f.fill(*comp, [](const Eigen::VectorXd& x) {
        return Cplx(std::exp(-0.5 * x.squaredNorm()), 0.0);
      });
    } else if (*source == "ring") {
      f.fill(*comp, [](const Eigen::VectorXd& x) {
        double r = x.norm();
        return Cplx(std::exp(-2.0 * (r - 3.0) * (r - 3.0)), 0.0);
      });
    } else {
      throw DomainError("unknown source: " + *source);
    }
    VectorField u = apply_multiplier(f, MatrixSymbol([par, zz](const FrequencyPoint& fq) {
                                       return resolvent_symbol(fq, zz, par);
                                     }));
    if (!out->empty()) write_field(*out, u);
    std::cout << "solve |u|_2=" << fmt(lp_norm(u, 2.0)) << " |f|_2=" << fmt(lp_norm(f, 2.0))
              << (out->empty() ? "" : " -> " + *out) << '\n';
  });
}

void setup_sharpness(CLI::App& app, GlobalOpts& g) {
  auto* sh = app.add_subcommand("sharpness", "lower-bound exponent experiments");
  sh->require_subcommand(1);

  auto* knapp = sh->add_subcommand(
      "knapp", "slab lower bound; slope target -1 + (d+1)/2 (1/p - 1/q)");
  auto kd = std::make_shared<int>(2);
  auto kp = std::make_shared<std::string>("2");
  auto kq = std::make_shared<std::string>("2");
  auto kdelta = std::make_shared<std::string>("2^-4..2^-10");
  auto krho = std::make_shared<double>(2.0);
  auto kmethod = std::make_shared<std::string>("quad");
  auto kout = std::make_shared<std::string>("");
  knapp->add_option("--dim", *kd)->required();
  knapp->add_option("--p", *kp, "Lebesgue exponent p (rational or inf)");
  knapp->add_option("--q", *kq, "Lebesgue exponent q (rational or inf)");
  knapp->add_option("--delta", *kdelta, "dyadic sweep, e.g. 2^-4..2^-10");
  knapp->add_option("--rho", *krho, "(lambda+2mu)/mu");
  knapp->add_option("--method", *kmethod, "quad | grid");
  knapp->add_option("--out", *kout, "CSV output");
  knapp->callback([=, &g]() {
    double p = parse_exponent(*kp), q = parse_exponent(*kq);
    auto deltas = parse_sweep(*kdelta);
    auto res = knapp_exponent(*kd, p, q, deltas, *krho,
                              *kmethod == "grid" ? KnappMethod::GridTransform
                                                 : KnappMethod::SpectralQuadrature,
                              g.threads);
    if (!kout->empty()) write_sweep_csv(*kout, res.points);
    std::cout << "knapp d=" << *kd << " slope=" << fmt(res.fit.slope)
              << " target=" << fmt(res.target_slope)
              << " max_resid=" << fmt(res.fit.max_residual) << '\n';
  });

  auto* foc = sh->add_subcommand(
      "focusing", "shifted-sphere focusing bound; slope target (d-1)/2 - d/q");
  auto fd = std::make_shared<int>(2);
  auto fq = std::make_shared<std::string>("2");
  auto frho = std::make_shared<double>(2.0);
  auto fnu = std::make_shared<double>(100.0);
  auto fdelta = std::make_shared<std::string>("2^-20..2^-26");
  auto fout = std::make_shared<std::string>("");
  foc->add_option("--dim", *fd)->required();
  foc->add_option("--q", *fq);
  foc->add_option("--rho", *frho);
  foc->add_option("--nu", *fnu, "cone-slab focal parameter");
  foc->add_option("--delta", *fdelta);
  foc->add_option("--out", *fout, "CSV output");
  foc->callback([=, &g]() {
    double q = parse_exponent(*fq);
    auto deltas = parse_sweep(*fdelta);
    auto res = focusing_exponent(*fd, q, *frho, deltas, *fnu, g.threads);
    if (!fout->empty()) {
      // the source field norm is delta-free; normalize the reported ratio by
      // ||f||_q computed once on a moderate grid
      double eps = default_eps_circ(*frho);
      PeriodicGrid grid = PeriodicGrid::isotropic(*fd, *fd == 2 ? 512 : 128,
                                                  *fd == 2 ? 128.0 : 64.0, true);
      double nf = lp_norm(focusing_field(*fd, *frho, eps, grid), q);
      std::vector<SweepPoint> pts;
      for (const auto& fpt : res.points) {
        SweepPoint sp;
        sp.delta = fpt.delta;
        sp.norm_f = nf;
        sp.norm_tf = fpt.main_norm;
        sp.ratio = fpt.main_norm / nf;
        pts.push_back(sp);
      }
      write_sweep_csv(*fout, pts);
    }
    std::cout << "focusing d=" << *fd << " slope=" << fmt(res.main_fit.slope)
              << " target=" << fmt(res.target_slope)
              << " background_slope=" << fmt(res.background_fit.slope) << '\n';
  });

  auto* osc = sh->add_subcommand(
      "stationary", "quadrature vs calibrated leading term of the focusing integral");
  auto od = std::make_shared<int>(3);
  auto odelta = std::make_shared<double>(0.25);
  auto ox1 = std::make_shared<std::string>("2^4..2^10");
  auto oout = std::make_shared<std::string>("");
  osc->add_option("--dim", *od)->required();
  osc->add_option("--delta", *odelta);
  osc->add_option("--x1", *ox1, "dyadic x_1 sweep");
  osc->add_option("--out", *oout, "CSV output");
  osc->callback([=]() {
    auto x1s = parse_sweep(*ox1);
    std::ofstream out;
    if (!oout->empty()) out = open_out(*oout);
    if (out.is_open()) out << "x1,quad_abs,leading_abs,rel_err\n";
    std::vector<double> xs, errs;
    Eigen::VectorXd x(*od);
    for (double x1 : x1s) {
      x.setZero();
      x[0] = x1;
      Cplx q = oscillatory_integral(*od, x, 0.0, *odelta, OscMethod::Quadrature);
      Cplx l = oscillatory_integral(*od, x, 0.0, *odelta, OscMethod::LeadingAsymptotic);
      double rel = std::abs(q - l) / std::abs(q);
      if (rel > 1e-12) {
        xs.push_back(x1);
        errs.push_back(rel);
      }
      if (out.is_open())
        out << fmt(x1) << ',' << fmt(std::abs(q)) << ',' << fmt(std::abs(l)) << ','
            << fmt(rel) << '\n';
    }
    double slope = xs.size() >= 2 ? fit_loglog(xs, errs).slope
                                  : -std::numeric_limits<double>::infinity();
    std::cout << "stationary d=" << *od << " err_slope=" << fmt(slope)
              << " (decay target <= -0.9)\n";
  });

  auto* der = sh->add_subcommand(
      "derivatives", "uniformity of the reduced-symbol derivative envelopes");
  auto dd = std::make_shared<int>(2);
  auto ddelta = std::make_shared<std::string>("2^-4..2^-10");
  auto drho = std::make_shared<double>(2.0);
  auto dout = std::make_shared<std::string>("");
  der->add_option("--dim", *dd)->required();
  der->add_option("--delta", *ddelta);
  der->add_option("--rho", *drho);
  der->add_option("--out", *dout, "CSV output");
  der->callback([=]() {
    auto table = derivative_bound_check(*dd, parse_sweep(*ddelta), *drho);
    if (!dout->empty()) {
      auto out = open_out(*dout);
      out << "delta";
      for (const auto& name : table.alpha_names) out << ",sup_" << name;
      out << ",b_sup_over_delta\n";
      for (const auto& row : table.rows) {
        out << fmt(row.delta);
        for (double rs : row.ratio_sup) out << ',' << fmt(rs);
        out << ',' << fmt(row.b_sup_over_delta) << '\n';
      }
    }
    double worst = table.b_spread;
    for (double s : table.ratio_spread) worst = std::max(worst, s);
    std::cout << "derivatives d=" << *dd << " max_spread=" << fmt(worst)
              << " (uniformity target <= 10)\n";
  });
}

void setup_carleman(CLI::App& app, GlobalOpts& g) {
  auto* ca = app.add_subcommand("carleman", "weighted-estimate failure experiments");
  ca->require_subcommand(1);

  auto* probe = ca->add_subcommand(
      "probe", "concentration sweep; slope target -2 + (d+2)/2 (1/p - 1/q)");
  auto pd = std::make_shared<int>(2);
  auto pp = std::make_shared<std::string>("2");
  auto pq = std::make_shared<std::string>("2");
  auto pdelta = std::make_shared<std::string>("2^-4..2^-10");
  auto pout = std::make_shared<std::string>("");
  probe->add_option("--dim", *pd)->required();
  probe->add_option("--p", *pp);
  probe->add_option("--q", *pq);
  probe->add_option("--delta", *pdelta);
  probe->add_option("--out", *pout, "CSV output (delta,ratio)");
  probe->callback([=, &g]() {
    auto res = carleman_exponent(*pd, parse_exponent(*pp), parse_exponent(*pq),
                                 parse_sweep(*pdelta), g.threads);
    if (!pout->empty()) {
      auto out = open_out(*pout);
      out << "delta,ratio\n";
      for (const auto& pt : res.sweep.points)
        out << fmt(pt.delta) << ',' << fmt(pt.ratio) << '\n';
    }
    std::cout << "carleman d=" << *pd << " slope=" << fmt(res.sweep.fit.slope)
              << " target=" << fmt(res.sweep.target_slope) << " verdict="
              << (res.estimate_impossible ? "estimate impossible (diverges)"
                                          : "no divergence at this pair")
              << '\n';
  });

  auto* div = ca->add_subcommand("diverge", "log-divergence tables in ln(1/eps)");
  auto kind = std::make_shared<std::string>("log");
  auto mu = std::make_shared<double>(1.0);
  auto lambda = std::make_shared<double>(2.0);
  auto eps = std::make_shared<std::string>("2^-3..2^-9");
  auto zz = std::make_shared<std::string>("-1");
  auto rho = std::make_shared<double>(2.0);
  auto dout = std::make_shared<std::string>("");
  div->add_option("--kind", *kind, "log (conjugated system) | admissibility");
  div->add_option("--mu", *mu);
  div->add_option("--lambda", *lambda);
  div->add_option("--eps", *eps);
  div->add_option("--z", *zz, "spectral parameter on the unit circle (admissibility)");
  div->add_option("--rho", *rho, "wave-speed ratio (admissibility)");
  div->add_option("--out", *dout);
  div->callback([=]() {
    DivergenceResult res;
    std::string value_col;
    if (*kind == "log") {
      res = log_divergence(LameParameters(*mu, *lambda), parse_sweep(*eps));
      value_col = "re_u2_0";
    } else if (*kind == "admissibility") {
      res = admissibility_divergence(parse_complex(*zz), *rho, parse_sweep(*eps));
      value_col = "re_Tz0";
    } else {
      throw DomainError("unknown divergence kind: " + *kind);
    }
    if (!dout->empty()) {
      auto out = open_out(*dout);
      out << "eps," << value_col << ",ln_inv_eps\n";
      for (const auto& pt : res.points)
        out << fmt(pt.eps) << ',' << fmt(pt.value) << ',' << fmt(pt.ln_inv_eps) << '\n';
    }
    std::cout << "diverge kind=" << *kind << " slope=" << fmt(res.fit.slope)
              << " r2=" << fmt(res.fit.r_squared)
              << " monotone=" << (res.monotone ? "yes" : "no") << '\n';
  });

  auto* sc = ca->add_subcommand("scaling", "dilation-invariance exponent d(1/p-1/q) - 2");
  auto sd = std::make_shared<int>(3);
  auto sp = std::make_shared<std::string>("2");
  auto sq = std::make_shared<std::string>("2");
  auto smu = std::make_shared<double>(1.0);
  auto slam = std::make_shared<double>(2.0);
  auto scales = std::make_shared<std::string>("0.5,0.707,1,1.414,2");
  sc->add_option("--dim", *sd)->required();
  sc->add_option("--p", *sp);
  sc->add_option("--q", *sq);
  sc->add_option("--mu", *smu);
  sc->add_option("--lambda", *slam);
  sc->add_option("--scales", *scales);
  sc->callback([=]() {
    auto res = scaling_necessity_check(*sd, parse_exponent(*sp), parse_exponent(*sq),
                                       parse_sweep(*scales), LameParameters(*smu, *slam));
    std::cout << "scaling d=" << *sd << " exponent=" << fmt(res.fit.slope)
              << " target=" << fmt(res.target_exponent)
              << " verdict=" << (res.bounded ? "scaling-admissible" : "ratio blows up")
              << '\n';
  });
}

void setup_eigen(CLI::App& app, GlobalOpts& g) {
  auto* eig = app.add_subcommand("eigen", "spectrum of -Delta^* + V against Z_{p,q}(ell)");
  auto* rep = eig->add_subcommand("report", "flag grid eigenvalues against the spectral region");
  auto d = std::make_shared<int>(2);
  auto n = std::make_shared<int>(32);
  auto box = std::make_shared<double>(4.0);
  auto mu = std::make_shared<double>(1.0);
  auto lambda = std::make_shared<double>(2.0);
  auto px = std::make_shared<std::string>("3/5");
  auto qy = std::make_shared<std::string>("2/5");
  auto ell = std::make_shared<double>(1.0);
  auto t = std::make_shared<double>(0.5);
  auto c = std::make_shared<double>(1.0);
  auto pot = std::make_shared<std::string>("");
  auto random_scale = std::make_shared<double>(-1.0);
  auto out = std::make_shared<std::string>("");
  auto cap = std::make_shared<std::int64_t>(6000);
  rep->add_option("--dim", *d)->required();
  rep->add_option("--n", *n, "grid points per axis");
  rep->add_option("--box", *box, "half length of the box");
  rep->add_option("--mu", *mu);
  rep->add_option("--lambda", *lambda);
  rep->add_option("--p", *px, "1/p as a rational (or p via p/1 notation: use --x-form)");
  rep->add_option("--q", *qy, "1/q as a rational");
  rep->add_option("--ell", *ell);
  rep->add_option("--t", *t, "contraction factor in (0,1)");
  rep->add_option("--c", *c, "user-supplied resolvent constant C");
  rep->add_option("--potential", *pot, "LAMF potential file (d^2 components)");
  rep->add_option("--random-potential", *random_scale,
                  "draw a seeded random potential scaled to this fraction of the threshold");
  rep->add_option("--dense-cap", *cap);
  rep->add_option("--out", *out, "JSON report path");
  rep->callback([=, &g]() {
    PeriodicGrid grid = PeriodicGrid::isotropic(*d, *n, *box, true);
    LameParameters par(*mu, *lambda);
    // exponents arrive as (1/p, 1/q) rationals, matching the regions CLI
    ExponentPair pq(parse_rational(*px), parse_rational(*qy));
    std::unique_ptr<PotentialField> v;
    if (!pot->empty() && *random_scale > 0.0)
      throw DomainError("--potential and --random-potential are mutually exclusive");
    if (!pot->empty()) {
      VectorField raw = read_field(*pot);
      if (raw.components() != *d * *d)
        throw DomainError("potential file must carry d^2 components");
      if (!(raw.grid() == grid))
        throw DomainError("potential grid does not match --n/--box");
      v = std::make_unique<PotentialField>(grid, *d);
      for (int j = 0; j < *d; ++j)
        for (int k = 0; k < *d; ++k) v->entry(j, k) = raw.component(j * *d + k);
    } else if (*random_scale > 0.0) {
      double pinv = to_double(pq.x), qinv = to_double(pq.y);
      double s = pinv - qinv > 1e-15 ? 1.0 / (pinv - qinv)
                                     : std::numeric_limits<double>::infinity();
      double p_exp = pinv > 0 ? 1.0 / pinv : std::numeric_limits<double>::infinity();
      double q_exp = qinv > 0 ? 1.0 / qinv : std::numeric_limits<double>::infinity();
      double thr = smallness_threshold(*d, p_exp, q_exp, *ell, *c, *t);
      v = std::make_unique<PotentialField>(
          random_potential(grid, *d, g.seed, s, *random_scale * thr));
    }
    auto report = eigen_region_report(grid, par, v.get(), pq, *ell, *t, *c, *cap);
    json j;
    j["d"] = report.d;
    j["mu"] = report.mu;
    j["lambda"] = report.lambda;
    j["x"] = to_string(report.exponents.x);
    j["y"] = to_string(report.exponents.y);
    j["ell"] = report.ell;
    j["t"] = report.t;
    j["c_user"] = report.c_user;
    j["seed"] = g.seed;
    j["potential_norm"] = report.potential_norm_s;
    j["threshold"] = report.threshold;
    j["hypothesis_satisfied"] = report.hypothesis_satisfied;
    j["on_ray_tolerance"] = report.on_ray_tolerance;
    j["note"] = report.note;
    json arr = json::array();
    for (const auto& e : report.entries) {
      json je;
      je["value"] = {e.value.real(), e.value.imag()};
      je["flag"] = e.flag;
      if (e.kappa_value)
        je["kappa"] = *e.kappa_value;
      else
        je["kappa"] = nullptr;
      arr.push_back(je);
    }
    j["eigenvalues"] = arr;
    std::string text = j.dump(2);
    if (!out->empty()) {
      auto f = open_out(*out);
      f << text << '\n';
    } else {
      std::cout << text << '\n';
    }
    int on_ray = 0, in_z = 0, outside = 0;
    for (const auto& e : report.entries) {
      if (e.flag == "on_ray") ++on_ray;
      else if (e.flag == "in_Z") ++in_z;
      else ++outside;
    }
    std::cout << "eigen report entries=" << report.entries.size() << " on_ray=" << on_ray
              << " in_Z=" << in_z << " outside_Z=" << outside
              << " hypothesis=" << (report.hypothesis_satisfied ? "satisfied" : "not satisfied")
              << '\n';
  });
}

void setup_figures(CLI::App& app, GlobalOpts& g) {
  (void)g;
  auto* fig = app.add_subcommand("figures", "plot-ready CSV bundles");
  auto kind = std::make_shared<std::string>("regions_d3");
  auto outdir = std::make_shared<std::string>("figures_out");
  auto fx = std::make_shared<std::string>("4/5");
  auto fy = std::make_shared<std::string>("1/5");
  auto fd = std::make_shared<int>(3);
  auto fell = std::make_shared<double>(1.0);
  auto fin = std::make_shared<std::string>("");
  fig->add_option("--kind", *kind, "regions_d3 | regions_d4 | zregion | loglog");
  fig->add_option("--out-dir", *outdir);
  fig->add_option("--dim", *fd, "dimension for zregion");
  fig->add_option("--x", *fx, "1/p for zregion");
  fig->add_option("--y", *fy, "1/q for zregion");
  fig->add_option("--ell", *fell, "level for zregion");
  fig->add_option("--in", *fin, "finished sweep CSV for loglog");
  fig->callback([=]() {
    std::filesystem::create_directories(*outdir);
    if (*kind == "regions_d3" || *kind == "regions_d4") {
      int d = *kind == "regions_d3" ? 3 : 4;
      for (auto tag : {RegionTag::R1, RegionTag::R2Tilde, RegionTag::R3Tilde,
                       RegionTag::R3TildePrime}) {
        std::string path = *outdir + "/" + to_string(tag) + ".csv";
        write_polyline_csv(path, region_polyline(d, tag));
      }
      auto pts = canonical_points(d);
      auto out = open_out(*outdir + "/points.csv");
      out << "name,x,y\n";
      for (const auto& [name, pt] : pts) {
        out << name << ',' << to_string(pt.x) << ',' << to_string(pt.y) << '\n';
        ExponentPair dp = dual_point(pt);
        out << name << "',"  << to_string(dp.x) << ',' << to_string(dp.y) << '\n';
      }
      std::cout << "figures " << *kind << " -> " << *outdir << '\n';
      return;
    }
    if (*kind == "zregion") {
      ExponentPair p(parse_rational(*fx), parse_rational(*fy));
      auto pts = zregion_boundary(*fd, p, *fell, 720);
      auto out = open_out(*outdir + "/zboundary.csv");
      out << "re,im\n";
      for (auto z : pts) out << fmt(z.real()) << ',' << fmt(z.imag()) << '\n';
      std::cout << "figures zregion -> " << *outdir << "/zboundary.csv\n";
      return;
    }
    if (*kind == "loglog") {
      if (fin->empty()) throw DomainError("loglog needs --in sweep.csv");
      std::ifstream in(*fin);
      if (!in) throw DomainError("cannot open " + *fin);
      std::string line;
      std::getline(in, line);  // header
      std::vector<double> xs, ys;
      while (std::getline(in, line)) {
        auto c1 = line.find(',');
        if (c1 == std::string::npos) continue;
        auto c2 = line.find(',', c1 + 1);
        std::string second =
            c2 == std::string::npos ? line.substr(c1 + 1) : line.substr(c1 + 1, c2 - c1 - 1);
        xs.push_back(std::stod(line.substr(0, c1)));
        ys.push_back(std::stod(second));
      }
      if (xs.size() < 2) throw DomainError("sweep CSV has fewer than two rows");
      auto fit = fit_loglog(xs, ys);
      auto out = open_out(*outdir + "/loglog.csv");
      out << "x,y,fit\n";
      for (std::size_t i = 0; i < xs.size(); ++i) {
        double f = std::pow(2.0, fit.intercept + fit.slope * std::log2(xs[i]));
        out << fmt(xs[i]) << ',' << fmt(ys[i]) << ',' << fmt(f) << '\n';
      }
      std::cout << "figures loglog slope=" << fmt(fit.slope) << " -> " << *outdir
                << "/loglog.csv\n";
      return;
    }
    throw DomainError("unknown figure kind: " + *kind);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lamelab: elastic-resolvent multiplier formulas, exponent-region "
               "geometry, and scaling-law experiment harnesses"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read flags from a TOML/INI config file");

  GlobalOpts g;
  app.add_option("--seed", g.seed, "seed for every random draw");
  app.add_option("--threads", g.threads, "worker threads for sweep fan-out");
  app.add_flag("--json", g.json_out, "prefer JSON output where applicable");

  setup_regions(app, g);
  setup_symbol(app, g);
  setup_solve(app, g);
  setup_sharpness(app, g);
  setup_carleman(app, g);
  setup_eigen(app, g);
  setup_figures(app, g);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const ComputeError& e) {
    std::cerr << "compute error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
