#include "qsector/io.hpp"

#include <fstream>
#include <sstream>

namespace qsector::io {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw SpecError(where.empty() ? what : where + ": " + what);
}

const Json& field(const Json& j, const char* name, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto it = j.find(name);
  if (it == j.end()) fail(where, std::string("missing field '") + name + "'");
  return *it;
}

double number(const Json& j, const char* name, const std::string& where) {
  const Json& v = field(j, name, where);
  if (!v.is_number()) fail(where + "." + name, "expected a number");
  return v.get<double>();
}

std::string join(const std::string& where, const std::string& leaf) {
  return where.empty() ? leaf : where + "." + leaf;
}

}  // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(where, "expected a complex number as [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json to_json(const MassSpec& m) {
  Json comps = Json::array();
  for (const auto& c : m.components()) {
    comps.push_back(std::visit(overloaded{
                                   [](const Gaussian& g) {
                                     Json mean = Json::array();
                                     for (const auto& z : g.mean) mean.push_back(to_json(z));
                                     return Json{{"type", "gaussian"},
                                                 {"mean", mean},
                                                 {"sigma", g.sigma},
                                                 {"weight", g.weight}};
                                   },
                                   [](const Disk& d) {
                                     return Json{{"type", "disk"},
                                                 {"center", to_json(d.center)},
                                                 {"radius", d.radius},
                                                 {"weight", d.weight}};
                                   },
                               },
                               c));
  }
  return Json{{"dim", m.dim()}, {"components", comps}};
}

Json to_json(const PlanarMassSpec& p) { return to_json(p.as_mass()); }

MassSpec mass_from_json(const Json& j, const std::string& where) {
  const Json& dim_field = field(j, "dim", where);
  if (!dim_field.is_number_integer()) fail(join(where, "dim"), "expected a positive integer");
  const int dim = dim_field.get<int>();
  const Json& comps = field(j, "components", where);
  if (!comps.is_array()) fail(join(where, "components"), "expected an array");
  std::vector<Component> out;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::string at = join(where, "components[" + std::to_string(i) + "]");
    const Json& c = comps[i];
    const Json& type = field(c, "type", at);
    if (!type.is_string()) fail(at + ".type", "expected \"gaussian\" or \"disk\"");
    const std::string kind = type.get<std::string>();
    if (kind == "gaussian") {
      const Json& mean = field(c, "mean", at);
      ComplexVector mu;
      // A bare [re, im] pair is accepted for dim = 1.
      if (dim == 1 && mean.is_array() && mean.size() == 2 && mean[0].is_number()) {
        mu.push_back(complex_from_json(mean, at + ".mean"));
      } else {
        if (!mean.is_array()) fail(at + ".mean", "expected an array of [re, im] pairs");
        for (std::size_t k = 0; k < mean.size(); ++k)
          mu.push_back(complex_from_json(mean[k], at + ".mean[" + std::to_string(k) + "]"));
      }
      out.emplace_back(Gaussian{std::move(mu), number(c, "sigma", at), number(c, "weight", at)});
    } else if (kind == "disk") {
      out.emplace_back(Disk{complex_from_json(field(c, "center", at), at + ".center"), number(c, "radius", at),
                            number(c, "weight", at)});
    } else {
      fail(at + ".type", "unknown component type '" + kind + "'");
    }
  }
  try {
    return MassSpec(dim, std::move(out));
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

Json to_json(const Configuration& x) {
  Json a = Json::array();
  for (const auto& z : x.a()) a.push_back(to_json(z));
  return Json{{"a", a}, {"b", to_json(x.b())}, {"degenerate", x.degenerate()}};
}

Json to_json(const HyperplaneDesc& h) {
  Json a = Json::array(), point = Json::array();
  for (const auto& z : h.a) a.push_back(to_json(z));
  for (const auto& z : h.point) point.push_back(to_json(z));
  Json out{{"a", a}, {"b", to_json(h.b)}, {"point", point}};
  if (h.apex) out["apex"] = to_json(*h.apex);
  return out;
}

Json to_json(const DeviationReport& r) {
  return Json{{"l2", r.l2},
              {"l2_spectral", r.l2_spectral},
              {"linf", r.linf},
              {"variation", r.variation},
              {"acceleration", r.acceleration},
              {"acceleration_reliable", r.acceleration_reliable},
              {"annihilated", r.annihilated},
              {"bound_l2", r.bound_l2},
              {"bound_linf", r.bound_linf}};
}

Json to_json(const SixFan& fan) {
  Json lines = Json::array();
  for (std::size_t k = 0; k < 3; ++k) {
    lines.push_back(Json{{"direction", fan.lines[k].direction},
                         {"offset", fan.lines[k].offset},
                         {"bisection_error", fan.bisection_errors[k]},
                         {"center_offset", fan.center_offsets[k]}});
  }
  return Json{{"center", to_json(fan.center)},
              {"base_angle", fan.base_angle},
              {"lines", lines},
              {"discontinuous", fan.discontinuous}};
}

Json to_json(const SolveResult& r, const SolveProblem& p) {
  Json coeffs = Json::array();
  for (std::size_t j = 0; j < r.coefficients.size(); ++j) {
    coeffs.push_back(Json{{"mass", j},
                          {"m", p.exponents[j]},
                          {"c", to_json(r.coefficients[j])},
                          {"abs", std::abs(r.coefficients[j])}});
  }
  Json reports = Json::array();
  for (const auto& d : r.per_mass) reports.push_back(to_json(d));
  Json witnesses = Json::array();
  for (const auto& w : r.witnesses) witnesses.push_back(to_json(w));
  Json trace = Json::array();
  for (const auto& s : r.trace) {
    trace.push_back(Json{{"start", s.index},
                         {"initial_residual", s.initial_residual},
                         {"simplex_residual", s.simplex_residual},
                         {"final_residual", s.final_residual},
                         {"evaluations", s.evaluations},
                         {"converged", s.converged},
                         {"x", to_json(s.end)}});
  }
  Json out{{"converged", r.converged},
           {"residual", r.residual},
           {"threshold", r.threshold},
           {"q", p.q},
           {"grid", p.grid},
           {"exponents", p.exponents},
           {"x", to_json(r.x)}};
  if (!r.x.degenerate()) {
    out["hyperplane"] = to_json(r.hyperplane);
    if (r.hyperplane.apex) out["apex"] = to_json(*r.hyperplane.apex);
  }
  out["coefficients"] = coeffs;
  out["deviation"] = reports;
  out["witnesses"] = witnesses;
  out["trace"] = trace;
  return out;
}

std::vector<MassSpec> parse_masses(const std::string& text, const std::string& source) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SpecError(source + ": " + e.what());
  }
  std::vector<MassSpec> out;
  const Json* list = nullptr;
  if (j.is_array()) {
    list = &j;
  } else if (j.is_object() && j.contains("masses")) {
    list = &j["masses"];
    if (!list->is_array()) fail(source + ": masses", "expected an array");
  }
  if (list) {
    for (std::size_t i = 0; i < list->size(); ++i)
      out.push_back(mass_from_json((*list)[i], source + ": masses[" + std::to_string(i) + "]"));
  } else {
    out.push_back(mass_from_json(j, source));
  }
  if (out.empty()) fail(source, "no masses found");
  return out;
}

std::vector<MassSpec> load_masses(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_masses(buf.str(), path.string());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace qsector::io
