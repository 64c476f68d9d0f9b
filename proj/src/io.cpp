#include "perigen/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "perigen/error.hpp"

namespace perigen::io {

namespace {

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

double parse_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError("expected a number for " + what + ", got '" + s + "'");
  }
  if (used != s.size()) throw ParseError("trailing characters in " + what + ": '" + s + "'");
  return v;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

cplx complex_entry(const json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2) return {to_double(e[0]), to_double(e[1])};
  if (e.is_object()) return {to_double(e.value("re", json(0.0))), to_double(e.value("im", json(0.0)))};
  throw ParseError("expected a complex number: " + e.dump());
}

std::string quantifier(Quantifier q) { return q == Quantifier::kForAll ? "forall" : "exists"; }

}  // namespace

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double to_double(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ParseError("expected a number: " + j.dump());
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

WeightSequence parse_weights(const std::string& desc) {
  if (starts_with(desc, "gevrey:")) return WeightSequence::gevrey(parse_number(desc.substr(7), "gevrey exponent"));
  if (starts_with(desc, "file:")) return weights_from_json(read_json_file(desc.substr(5)));
  throw ParseError("unknown weight descriptor '" + desc + "'");
}

WeightSequence weights_from_json(const json& j) {
  try {
    const auto kind = field(j, "kind").get<std::string>();
    if (kind == "gevrey") {
      const double s = to_double(field(j, "s"));
      return j.contains("p_max") ? WeightSequence::gevrey(s, j.at("p_max").get<std::size_t>())
                                 : WeightSequence::gevrey(s);
    }
    if (kind == "table") {
      std::vector<double> log_m;
      for (const auto& v : field(j, "logM")) log_m.push_back(to_double(v));
      std::optional<double> A, H;
      if (j.contains("A")) A = to_double(j.at("A"));
      if (j.contains("H")) H = to_double(j.at("H"));
      return WeightSequence::table(std::move(log_m), A, H, j.value("label", std::string("table")));
    }
    throw ParseError("unknown weight kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ParseError(std::string("weight file: ") + e.what());
  }
}

RSequence parse_rsequence(const std::string& desc) {
  if (desc == "linear") return RSequence::linear();
  if (starts_with(desc, "power:")) return RSequence::power(parse_number(desc.substr(6), "power exponent"));
  if (starts_with(desc, "file:")) return rsequence_from_json(read_json_file(desc.substr(5)));
  throw ParseError("unknown r-sequence descriptor '" + desc + "'");
}

RSequence rsequence_from_json(const json& j) {
  std::vector<double> r;
  for (const auto& v : field(j, "r")) r.push_back(to_double(v));
  return RSequence::table(std::move(r));
}

UltraClass parse_class(const std::string& s) {
  if (s == "beurling") return UltraClass::kBeurling;
  if (s == "roumieu") return UltraClass::kRoumieu;
  throw ParseError("class must be beurling or roumieu, got '" + s + "'");
}

Mode parse_mode(const std::string& s) {
  if (s == "moderate") return Mode::kModerate;
  if (s == "negligible") return Mode::kNegligible;
  throw ParseError("mode must be moderate or negligible, got '" + s + "'");
}

TrigPoly coefficients_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("coefficient table must be an array");
  std::vector<std::pair<int, cplx>> entries;
  int degree = 0;
  for (const auto& e : j) {
    const int k = field(e, "k").get<int>();
    entries.emplace_back(k, complex_entry(e));
    degree = std::max(degree, std::abs(k));
  }
  TrigPoly out(degree);
  for (const auto& [k, c] : entries) out.at(k) += c;
  return out;
}

json coefficients_to_json(const TrigPoly& f) {
  json out = json::array();
  for (int k = -f.degree(); k <= f.degree(); ++k) {
    const cplx c = f.coef(k);
    if (c == cplx{}) continue;
    out.push_back({{"k", k}, {"re", number(c.real())}, {"im", number(c.imag())}});
  }
  return out;
}

CoefDistribution parse_distribution(const std::string& desc, const WeightSequence& ws) {
  if (desc == "delta") return CoefDistribution::delta();
  if (desc == "cot_reg") return CoefDistribution::cot_reg();
  if (desc == "sin") return CoefDistribution::from_trig(TrigPoly::sin(), "sin");
  if (desc == "cos") return CoefDistribution::from_trig(TrigPoly::cos(), "cos");
  if (desc == "zero") return CoefDistribution::zero();
  if (starts_with(desc, "exp_decay:")) return CoefDistribution::exp_decay(parse_number(desc.substr(10), "exp_decay rate"));
  if (starts_with(desc, "exp_growth:"))
    return CoefDistribution::exp_growth(parse_number(desc.substr(11), "exp_growth rate"), ws);
  if (starts_with(desc, "file:")) {
    const std::string path = desc.substr(5);
    return CoefDistribution::from_trig(coefficients_from_json(read_json_file(path)), path);
  }
  throw ParseError("unknown distribution '" + desc + "'");
}

Mollifier parse_mollifier(const std::string& desc) {
  if (desc == "dirichlet") return Mollifier::dirichlet();
  if (starts_with(desc, "cutoff:trapezoid")) {
    double r = 1.0, R = 2.0;
    std::stringstream ss(desc.substr(16));
    std::string part;
    while (std::getline(ss, part, ':')) {
      if (part.empty()) continue;
      if (starts_with(part, "r=")) r = parse_number(part.substr(2), "r");
      else if (starts_with(part, "R=")) R = parse_number(part.substr(2), "R");
      else throw ParseError("unknown trapezoid parameter '" + part + "'");
    }
    return Mollifier::trapezoid(r, R);
  }
  if (starts_with(desc, "file:")) return mollifier_from_json(read_json_file(desc.substr(5)));
  throw ParseError("unknown mollifier '" + desc + "'");
}

Mollifier mollifier_from_json(const json& j) {
  std::map<std::size_t, std::vector<cplx>> rows;
  for (const auto& row : field(j, "rows")) {
    std::vector<cplx> c;
    for (const auto& e : field(row, "coef")) c.push_back(complex_entry(e));
    rows[field(row, "n").get<std::size_t>()] = std::move(c);
  }
  return Mollifier::table(std::move(rows), to_double(field(j, "C")), to_double(field(j, "R")),
                          to_double(field(j, "r")));
}

Ultrapolynomial parse_operator(const std::string& desc, const WeightSequence& ws,
                               UltraClass cls) {
  if (starts_with(desc, "file:")) return operator_from_json(read_json_file(desc.substr(5)), ws, cls);
  if (starts_with(desc, "structure_beurling:"))
    return Ultrapolynomial::structure_beurling(parse_number(desc.substr(19), "lambda"), ws);
  if (desc == "structure_roumieu")
    return Ultrapolynomial::structure_roumieu(RSequence::linear(), RSequence::linear(), ws);
  if (desc.size() > 1 && desc[0] == 'D') {
    const double p = parse_number(desc.substr(1), "operator order");
    if (p < 0 || p != std::floor(p)) throw ParseError("operator order must be a natural number");
    std::vector<cplx> a(std::size_t(p) + 1);
    a.back() = 1.0;
    return Ultrapolynomial::table(std::move(a), ws, cls);
  }
  throw ParseError("unknown operator '" + desc + "'");
}

Ultrapolynomial operator_from_json(const json& j, const WeightSequence& ws, UltraClass cls) {
  if (j.contains("form")) {
    const auto form = j.at("form").get<std::string>();
    if (form == "structure_beurling")
      return Ultrapolynomial::structure_beurling(to_double(field(j, "lambda")), ws);
    if (form == "structure_roumieu")
      return Ultrapolynomial::structure_roumieu(parse_rsequence(j.value("r_prime", std::string("linear"))),
                                                parse_rsequence(j.value("k_prime", std::string("linear"))), ws);
    throw ParseError("unknown operator form '" + form + "'");
  }
  if (j.contains("class")) cls = parse_class(j.at("class").get<std::string>());
  std::vector<std::pair<std::size_t, cplx>> entries;
  std::size_t degree = 0;
  for (const auto& e : field(j, "a")) {
    const auto n = field(e, "n").get<std::size_t>();
    entries.emplace_back(n, complex_entry(e));
    degree = std::max(degree, n);
  }
  std::vector<cplx> a(degree + 1);
  for (const auto& [n, c] : entries) a[n] += c;
  std::optional<std::pair<double, double>> blc;
  std::vector<std::pair<double, double>> rlc;
  if (j.contains("L") && j.contains("C")) {
    const std::pair<double, double> lc{to_double(j.at("L")), to_double(j.at("C"))};
    if (cls == UltraClass::kBeurling) blc = lc;
    else rlc.push_back(lc);
  }
  return Ultrapolynomial::table(std::move(a), ws, cls, blc, rlc);
}

namespace {

TrigPoly trig_preset(const std::string& name) {
  if (name == "sin") return TrigPoly::sin();
  if (name == "cos") return TrigPoly::cos();
  if (name == "one") return TrigPoly::constant(1.0);
  throw ParseError("unknown function preset '" + name + "'");
}

Net constant_preset(const std::string& name, const WeightSequence& ws, UltraClass cls,
                    std::size_t n_max) {
  if (name == "sin" || name == "cos" || name == "one")
    return constant_net(trig_preset(name), n_max, name);
  return const_embed(parse_distribution(name, ws), ws, cls, n_max).net;
}

Net single_net(const std::string& desc, const WeightSequence& ws, UltraClass cls,
               std::size_t n_max) {
  if (desc == "dirichlet") return dirichlet_net(n_max);
  if (desc == "zero") return constant_net(TrigPoly::zero(), n_max, "zero");
  if (starts_with(desc, "const:")) return constant_preset(desc.substr(6), ws, cls, n_max);
  if (starts_with(desc, "scaled:")) {
    const std::string rest = desc.substr(7);
    const auto cut = rest.rfind(':');
    if (cut == std::string::npos) throw ParseError("scaled needs <preset>:<rate>");
    const double rate = parse_number(rest.substr(cut + 1), "rate");
    const Net base = constant_preset(rest.substr(0, cut), ws, cls, n_max);
    return net_scale(base, [rate](std::size_t n) { return cplx{std::exp(-rate * double(n))}; },
                     "e^{-" + rest.substr(cut + 1) + "n}");
  }
  if (starts_with(desc, "embed:")) {
    const std::string rest = desc.substr(6);
    for (std::size_t i = rest.find(':'); i != std::string::npos; i = rest.find(':', i + 1)) {
      const std::string moll = rest.substr(i + 1);
      if (!(moll == "dirichlet" || starts_with(moll, "cutoff:") || starts_with(moll, "file:")))
        continue;
      std::optional<CoefDistribution> dist;
      try {
        dist = parse_distribution(rest.substr(0, i), ws);
      } catch (const ParseError&) {
        continue;
      }
      return embed(*dist, parse_mollifier(moll), n_max);
    }
    throw ParseError("embed needs <dist>:<mollifier>, got '" + rest + "'");
  }
  throw ParseError("unknown net '" + desc + "'");
}

}  // namespace

Net parse_net(const std::string& desc, const WeightSequence& ws, UltraClass cls,
              std::size_t n_max) {
  std::optional<Net> out;
  std::stringstream ss(desc);
  std::string part;
  while (std::getline(ss, part, '*')) {
    Net n = single_net(part, ws, cls, n_max);
    out = out ? net_mul(*out, n) : n;
  }
  if (!out) throw ParseError("empty net descriptor");
  return *out;
}

json to_json(const TailTest& t) {
  return {{"bounded", t.bounded}, {"margin", number(t.margin)}, {"witness", t.witness}};
}

json to_json(const GrowthVerdict& v) {
  json grid = json::array();
  const std::string a = v.outer_name.empty() ? "outer" : v.outer_name;
  const std::string b = v.inner_name.empty() ? "inner" : v.inner_name;
  for (const auto& p : v.grid)
    grid.push_back({{a, number(p.a)},
                    {b, number(p.b)},
                    {"margin", number(p.margin)},
                    {"witness_n", p.witness_n},
                    {"bounded", p.bounded}});
  return {{"bounded", v.bounded},
          {"margin", number(v.margin)},
          {"witness_n", v.witness_n},
          {"test", v.test},
          {"quantifiers", quantifier(v.outer) + " " + a + ", " + quantifier(v.inner) + " " + b},
          {"grid", grid},
          {"decisive", v.decisive},
          {"method", to_string(v.method)},
          {"tau", number(v.tau)},
          {"desk_scale", true}};
}

json to_json(const Lemma2MReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"t", number(row.t)}, {"lhs", number(row.lhs)}, {"rhs", number(row.rhs)}});
  return {{"pass", r.pass},
          {"max_excess", number(r.max_excess)},
          {"argmax_t", number(r.argmax_t)},
          {"rows", rows}};
}

json to_json(const Factorization& f) {
  return {{"operator", f.P.describe()},
          {"input_growth", to_json(f.input_growth)},
          {"g_decay_m", to_json(f.g_decay_m)},
          {"g_decay_n", to_json(f.g_decay_n)},
          {"relation", to_json(f.relation)},
          {"reconstruction_error", number(f.reconstruction_error)},
          {"k_max", f.k_max}};
}

json to_json(const LowerBoundReport& r) {
  json rows = json::array();
  for (std::size_t i = 0; i < r.x.size(); ++i)
    rows.push_back({{"x", number(r.x[i])},
                    {"log_p", number(r.log_p[i])},
                    {"log_target", number(r.log_target[i])}});
  return {{"pass", r.pass},
          {"log_c_prime", number(r.log_c_prime)},
          {"margin", number(r.margin)},
          {"witness", r.witness},
          {"rows", rows}};
}

json to_json(const ProductReport& r) {
  json bounds = json::array();
  for (const auto& b : r.bounds)
    bounds.push_back({{"function", b.name},
                      {"lambda", number(b.lambda)},
                      {"log_K", number(b.log_k)},
                      {"log_fitted", number(b.log_fitted)},
                      {"log_allowed", number(b.log_allowed)},
                      {"ratio", number(b.ratio)}});
  json out = {{"negligible", to_json(r.negligible)},
              {"bounds", bounds},
              {"worst_ratio", number(r.worst_ratio)},
              {"band_limited", r.band_limited}};
  if (r.band_limited) {
    out["exact_from"] = r.exact_from;
    out["exact_zero"] = r.exact_zero;
  }
  return out;
}

json to_json(const CommuteReport& r) {
  return {{"pass", r.pass}, {"max_residual", number(r.max_residual)}, {"n_max", r.n_max}};
}

json to_json(const RegularityVerdict& v) {
  return {{"regular", v.regular},
          {"pattern", v.pattern},
          {"verdict", to_json(v.verdict)},
          {"moderate", to_json(v.moderate)}};
}

json to_json(const LemmaRegReport& r) {
  return {{"pass", r.pass},
          {"lambda", number(r.lambda)},
          {"H", number(r.H)},
          {"log_fitted", number(r.log_fitted)},
          {"log_allowed", number(r.log_allowed)},
          {"ratio", number(r.ratio)},
          {"verdict", to_json(r.verdict)}};
}

json to_json(const RegularityReport& r) {
  json out = {{"moderate", r.moderate},
              {"regular", r.regular},
              {"member", r.member},
              {"consistent", r.consistent},
              {"regularity", to_json(r.regularity)},
              {"decay", to_json(r.decay)},
              {"note", r.note}};
  if (r.lemma) out["lemma"] = to_json(*r.lemma);
  return out;
}

std::string grid_csv(const GrowthVerdict& v) {
  std::ostringstream os;
  os.precision(17);
  os << (v.outer_name.empty() ? "outer" : v.outer_name) << ','
     << (v.inner_name.empty() ? "inner" : v.inner_name) << ",margin,witness_n,bounded\n";
  for (const auto& p : v.grid)
    os << p.a << ',' << p.b << ',' << p.margin << ',' << p.witness_n << ','
       << (p.bounded ? "true" : "false") << '\n';
  return os.str();
}

}  // namespace perigen::io
