#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "perigen/embedding.hpp"
#include "perigen/error.hpp"
#include "perigen/io.hpp"
#include "perigen/operators.hpp"
#include "perigen/regularity.hpp"

namespace perigen::cli {

using io::json;
using io::number;

SchwartzDemo schwartz_demo(std::size_t n_max) {
  const auto ws = WeightSequence::gevrey(1.0);
  const auto cls = UltraClass::kRoumieu;
  const auto m = Mollifier::dirichlet();
  const Net sin_n = embed(CoefDistribution::from_trig(TrigPoly::sin(), "sin"), m, n_max);
  const Net cos_n = embed(CoefDistribution::from_trig(TrigPoly::cos(), "cos"), m, n_max);
  const Net delta_n = embed(CoefDistribution::delta(), m, n_max);
  const Net cot_n = embed(CoefDistribution::cot_reg(), m, n_max);

  const Net u = net_mul(sin_n, delta_n);
  const Net v = net_mul(u, cot_n);
  const Net w = net_mul(cos_n, delta_n);
  const Net w_delta = net_sub(w, delta_n);

  SchwartzDemo d;
  d.n_max = n_max;
  u.materialize();
  d.sup_u.resize(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) d.sup_u[n] = sup_norm(u(n));
  d.sup_in_band = n_max >= d.band_from;
  for (std::size_t n = d.band_from; n <= n_max; ++n)
    d.sup_in_band = d.sup_in_band && d.sup_u[n] >= d.band_lo && d.sup_u[n] <= d.band_hi;
  d.u_negligible = classify_negligible(u, ws, cls);
  d.v_minus_w_negligible = classify_negligible(net_sub(v, w), ws, cls);
  d.w_minus_delta_negligible = classify_negligible(w_delta, ws, cls);
  for (cplx c : w_delta(n_max).coefficients())
    d.w_minus_delta_edge = std::max(d.w_minus_delta_edge, std::abs(c));
  return d;
}

namespace {

struct Common {
  std::string weights = "gevrey:1";
  std::string cls = "roumieu";
  std::size_t n_max = 64;
  std::string out;
  bool assert_ = false;
  double tau = kDefaultTau;
  bool csv = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--weights", c.weights, "gevrey:<s> or file:<path>");
  sub->add_option("--class", c.cls, "beurling or roumieu");
  sub->add_option("--nmax", c.n_max, "largest net index")->check(CLI::Range(8, 1 << 16));
  sub->add_option("--out", c.out, "write the report here instead of stdout");
  sub->add_flag("--assert", c.assert_, "exit 1 on a negative verdict");
  sub->add_option("--tau", c.tau, "tail tolerance")->check(CLI::PositiveNumber);
  sub->add_flag("--csv", c.csv, "print the growth table as CSV");
}

struct Result {
  json report;
  bool ok = true;
  std::string csv;
};

void emit(const Common& c, const Result& r, std::ostream& out) {
  const std::string text = c.csv && !r.csv.empty() ? r.csv : r.report.dump(2) + "\n";
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw ParseError("cannot write " + c.out);
  f << text;
}

json weights_json(const WeightSequence& ws) {
  json j = {{"label", ws.label()}, {"A", number(ws.A())}, {"H", number(ws.H())}, {"p_max", ws.p_max()}};
  if (ws.kind() == WeightSequence::Kind::kGevrey) {
    j["kind"] = "gevrey";
    j["s"] = number(ws.gevrey_exponent());
  } else {
    j["kind"] = "table";
  }
  return j;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  std::vector<double> t(count);
  for (std::size_t i = 0; i < count; ++i)
    t[i] = lo * std::pow(hi / lo, double(i) / double(count - 1));
  return t;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"periodic ultradistribution algebra toolkit", "perigen"};
  app.require_subcommand(1);
  Common c;
  std::function<Result()> action;

  // weights
  auto* sw = app.add_subcommand("weights", "associated function and (M.2) certification");
  add_common(sw, c);
  std::optional<double> gevrey;
  std::string table_path;
  std::vector<double> ts;
  sw->add_option("--gevrey", gevrey, "Gevrey exponent s");
  sw->add_option("--table", table_path, "weight file");
  sw->add_option("--t", ts, "evaluation points");
  sw->callback([&] {
    action = [&] {
      WeightSequence ws = !table_path.empty() ? io::weights_from_json(io::read_json_file(table_path))
                          : gevrey            ? WeightSequence::gevrey(*gevrey)
                                              : io::parse_weights(c.weights);
      json values = json::array();
      for (double t : ts) {
        const AssocValue a = associated_detail(WeightView(ws), t);
        values.push_back({{"t", number(t)},
                          {"M", number(a.value)},
                          {"argmax_p", a.argmax_p},
                          {"truncated", a.truncated}});
      }
      auto grid = ts.empty() ? log_grid(1e-2, 1e4, 40) : ts;
      const Lemma2MReport lemma = check_lemma_2M(ws, grid);
      Result r;
      r.report = {{"weights", weights_json(ws)}, {"values", values}, {"lemma_2M", io::to_json(lemma)}};
      r.ok = lemma.pass;
      return r;
    };
  });

  // classify
  auto* sc = app.add_subcommand("classify", "moderate / negligible verdict for a net");
  add_common(sc, c);
  std::string net_desc, mode = "moderate", method = "full";
  sc->add_option("--net", net_desc, "net descriptor")->required();
  sc->add_option("--mode", mode, "moderate or negligible");
  sc->add_option("--method", method, "full or sup (negligible only)");
  sc->callback([&] {
    action = [&] {
      const auto ws = io::parse_weights(c.weights);
      const auto cls = io::parse_class(c.cls);
      const Net net = io::parse_net(net_desc, ws, cls, c.n_max);
      const Mode md = io::parse_mode(mode);
      net.materialize();
      GrowthVerdict v;
      if (method == "full") {
        v = md == Mode::kModerate
                ? classify_moderate(net, ws, cls, default_grids(cls, md), c.tau)
                : classify_negligible(net, ws, cls, default_grids(cls, md), c.tau);
      } else if (method == "sup") {
        if (md != Mode::kNegligible) throw ParseError("--method sup applies to --mode negligible");
        const auto mod = classify_moderate(net, ws, cls, default_grids(cls, Mode::kModerate), c.tau);
        const auto grid = core_grid();
        v = classify_negligible_supnorm(net, ws, cls, mod, grid, c.tau);
      } else {
        throw ParseError("unknown method '" + method + "'");
      }
      Result r;
      r.report = io::to_json(v);
      r.report["net"] = net.label();
      r.report["class"] = to_string(cls);
      r.ok = v.bounded;
      r.csv = io::grid_csv(v);
      return r;
    };
  });

  // embed
  auto* se = app.add_subcommand("embed", "coefficient rows of iota(f)_n");
  add_common(se, c);
  std::string dist, moll = "dirichlet";
  se->add_option("--dist", dist, "distribution")->required();
  se->add_option("--mollifier", moll, "mollifier descriptor");
  se->callback([&] {
    action = [&] {
      const auto ws = io::parse_weights(c.weights);
      const Net net = embed(io::parse_distribution(dist, ws), io::parse_mollifier(moll), c.n_max);
      net.materialize();
      json rows = json::array();
      for (std::size_t n = 0; n <= c.n_max; ++n)
        rows.push_back({{"n", n}, {"coef", io::coefficients_to_json(net(n))}});
      Result r;
      r.report = {{"distribution", dist}, {"mollifier", moll}, {"n_max", c.n_max}, {"rows", rows}};
      return r;
    };
  });

  // product
  auto* sp = app.add_subcommand("product", "sigma(fg) against iota(f) iota(g)");
  add_common(sp, c);
  std::string fdesc, gdesc;
  sp->add_option("--f", fdesc, "first function")->required();
  sp->add_option("--g", gdesc, "second function")->required();
  sp->add_option("--mollifier", moll, "mollifier descriptor");
  sp->callback([&] {
    action = [&] {
      const auto ws = io::parse_weights(c.weights);
      const auto cls = io::parse_class(c.cls);
      const ProductReport rep =
          check_product_preservation(io::parse_distribution(fdesc, ws),
                                     io::parse_distribution(gdesc, ws), io::parse_mollifier(moll),
                                     ws, cls, c.n_max);
      Result r;
      r.report = io::to_json(rep);
      r.ok = rep.negligible.bounded && (!rep.band_limited || rep.exact_zero);
      r.csv = io::grid_csv(rep.negligible);
      return r;
    };
  });

  // apply
  auto* sa = app.add_subcommand("apply", "P(D) as a Fourier multiplier");
  add_common(sa, c);
  std::string op_desc, commute_moll;
  long k_show = 16;
  sa->add_option("--operator", op_desc, "D<p>, structure_beurling:<lambda>, structure_roumieu or file:<path>")
      ->required();
  sa->add_option("--dist", dist, "distribution")->required();
  sa->add_option("--kmax", k_show, "largest |k| listed")->check(CLI::NonNegativeNumber);
  sa->add_option("--mollifier", commute_moll, "also check commutation with iota");
  sa->callback([&] {
    action = [&] {
      const auto ws = io::parse_weights(c.weights);
      const auto cls = io::parse_class(c.cls);
      const auto P = io::parse_operator(op_desc, ws, cls);
      const auto f = io::parse_distribution(dist, ws);
      const auto Pf = apply_operator(P, f);
      json rows = json::array();
      for (long k = -k_show; k <= k_show; ++k) {
        const LogCoef p = log_eval_ultrapoly(P, double(k));
        const LogCoef a = f.log_coef(k), b = Pf.log_coef(k);
        rows.push_back({{"k", k},
                        {"log_abs_P", number(p.log_abs)},
                        {"log_abs_f", number(a.log_abs)},
                        {"log_abs_Pf", number(b.log_abs)},
                        {"re", number(b.is_zero() ? 0.0 : b.value().real())},
                        {"im", number(b.is_zero() ? 0.0 : b.value().imag())}});
      }
      Result r;
      r.report = {{"operator", P.describe()}, {"distribution", f.label()}, {"rows", rows}};
      if (!commute_moll.empty()) {
        const auto rep = check_operator_commutes(P, f, io::parse_mollifier(commute_moll), c.n_max);
        r.report["commute"] = io::to_json(rep);
        r.ok = rep.pass;
      }
      return r;
    };
  });

  // factorize
  auto* sf = app.add_subcommand("factorize", "c = P(D) g");
  add_common(sf, c);
  double lambda = 1.0;
  std::string r_prime = "linear", k_prime = "linear", target;
  long k_max = kDefaultFactorKMax;
  sf->add_option("--dist", dist, "distribution")->required();
  auto* lambda_opt =
      sf->add_option("--lambda", lambda, "Beurling growth parameter; implies --class beurling unless given")
          ->check(CLI::PositiveNumber);
  sf->add_option("--r-prime", r_prime, "Roumieu r' sequence");
  sf->add_option("--k-prime", k_prime, "Roumieu k' sequence");
  sf->add_option("--target", target, "target weights (default gevrey:<s+1>)");
  sf->add_option("--kmax", k_max, "largest |k|")->check(CLI::PositiveNumber);
  sf->callback([&] {
    action = [&] {
      const auto ws = io::parse_weights(c.weights);
      const bool beurling_default = lambda_opt->count() > 0 && sf->get_option("--class")->count() == 0;
      const auto cls = beurling_default ? UltraClass::kBeurling : io::parse_class(c.cls);
      std::string tdesc = target;
      if (tdesc.empty()) {
        if (ws.kind() != WeightSequence::Kind::kGevrey)
          throw ParseError("--target is required for tabulated weights");
        std::ostringstream os;
        os << "gevrey:" << ws.gevrey_exponent() + 1.0;
        tdesc = os.str();
      }
      const auto tw = io::parse_weights(tdesc);
      FactorParams params;
      params.lambda = lambda;
      params.r_prime = io::parse_rsequence(r_prime);
      params.k_prime = io::parse_rsequence(k_prime);
      const auto f = io::parse_distribution(dist, ws);
      const Factorization fac = structure_factorize(f, ws, cls, params, tw, k_max, c.tau);
      const auto xs = log_grid(1.0, 100.0, 40);
      const LowerBoundReport lb = lower_bound_check(fac.P, lambda, xs, c.tau);
      Result r;
      r.report = io::to_json(fac);
      r.report["target"] = tdesc;
      r.report["class"] = cls == UltraClass::kBeurling ? "beurling" : "roumieu";
      r.report["lower_bound"] = io::to_json(lb);
      r.ok = fac.reconstruction_error <= 1e-12 && fac.g_decay_m.bounded && fac.g_decay_n.bounded &&
             lb.pass;
      r.csv = io::grid_csv(fac.g_decay_n);
      return r;
    };
  });

  // regularity
  auto* sr = app.add_subcommand("regularity", "regular embedding against coefficient decay");
  add_common(sr, c);
  sr->add_option("--dist", dist, "distribution")->required();
  sr->add_option("--mollifier", moll, "mollifier descriptor");
  sr->callback([&] {
    action = [&] {
      const auto ws = io::parse_weights(c.weights);
      const auto cls = io::parse_class(c.cls);
      const RegularityReport rep = regularity_theorem_check(
          io::parse_distribution(dist, ws), io::parse_mollifier(moll), ws, cls, c.n_max);
      Result r;
      r.report = io::to_json(rep);
      r.ok = rep.consistent;
      r.csv = io::grid_csv(rep.regularity.verdict);
      return r;
    };
  });

  // demo
  auto* sd = app.add_subcommand("demo", "products of delta with smooth functions");
  add_common(sd, c);
  sd->callback([&] {
    action = [&] {
      const SchwartzDemo d = schwartz_demo(c.n_max);
      json sup = json::array();
      for (std::size_t n = 0; n <= d.n_max; ++n) sup.push_back({{"n", n}, {"sup", number(d.sup_u[n])}});
      Result r;
      r.report = {{"weights", "gevrey:1"},
                  {"class", "roumieu"},
                  {"mollifier", "dirichlet"},
                  {"sup_u", sup},
                  {"sup_limit", 1.0 / std::numbers::pi},
                  {"sup_band", {{"from", d.band_from}, {"lo", d.band_lo}, {"hi", d.band_hi}, {"pass", d.sup_in_band}}},
                  {"u_negligible", io::to_json(d.u_negligible)},
                  {"v_minus_w_negligible", io::to_json(d.v_minus_w_negligible)},
                  {"w_minus_delta_negligible", io::to_json(d.w_minus_delta_negligible)},
                  {"w_minus_delta_edge", number(d.w_minus_delta_edge)},
                  {"phi_0", "constant 1/(2 pi)"}};
      r.ok = d.sup_in_band && !d.u_negligible.bounded && !d.v_minus_w_negligible.bounded;
      return r;
    };
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    const Result r = action();
    emit(c, r, out);
    return c.assert_ && !r.ok ? 1 : 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace perigen::cli
