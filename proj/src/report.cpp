#include "cvent/report.hpp"

#include <cmath>

namespace cvent {

namespace {

using nlohmann::json;

double number_field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw MalformedInput(std::string("missing field \"") + key + "\"");
  }
  const json& v = obj.at(key);
  if (!v.is_number()) throw MalformedInput(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

Matrix4<double> parse_matrix(const json& rows) {
  if (!rows.is_array() || rows.size() != 4) throw MalformedInput("\"cm\" must be a 4x4 array");
  Matrix4<double> m;
  for (int i = 0; i < 4; ++i) {
    const json& row = rows.at(std::size_t(i));
    if (!row.is_array() || row.size() != 4) throw MalformedInput("\"cm\" must be a 4x4 array");
    for (int j = 0; j < 4; ++j) {
      const json& v = row.at(std::size_t(j));
      if (!v.is_number()) throw MalformedInput("\"cm\" entries must be numbers");
      m(i, j) = v.get<double>();
    }
  }
  return m;
}

const char* log_base_name(LogBase base) { return base == LogBase::two ? "2" : "e"; }

bool near(double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); }

ClosedFormBlock closed_form_for(const ExtremalParams<double>& p,
                                const SymplecticSpectrum<double>& spectrum, double m_oracle) {
  ClosedFormBlock block;
  block.params = p;
  block.m_oracle = m_oracle;
  block.modes_swapped = p.d < 0;
  if (near(p.g, 2.0 * std::abs(p.d) + 1.0)) {
    block.family = "gmemms";
    const double nu = spectrum.nu_tilde_minus;
    block.m_closed = nu < 1.0 ? m_opt_gmemms(p.s, nu) : 1.0;
  } else if (p.lambda == 1.0) {
    block.family = "gmems";
    block.m_closed = m_opt_gmems(p);
  } else if (p.lambda == -1.0) {
    block.family = "glems";
    block.m_closed = m_opt_glems(p);
  } else {
    block.family = "generic";
  }
  return block;
}

}  // namespace

StateInput parse_state_json(const json& doc) {
  if (!doc.is_object()) throw MalformedInput("input must be a JSON object");
  if (doc.contains("cm")) return CovarianceMatrix<double>(parse_matrix(doc.at("cm")));
  if (doc.contains("standard_form")) {
    const json& sf = doc.at("standard_form");
    StandardForm<double> out{number_field(sf, "a"), number_field(sf, "b"),
                             number_field(sf, "c_plus"), number_field(sf, "c_minus")};
    for (const double v : {out.a, out.b, out.c_plus, out.c_minus}) {
      if (!std::isfinite(v)) throw MalformedInput("standard form has non-finite entries");
    }
    return out;
  }
  if (doc.contains("extremal")) {
    const json& p = doc.at("extremal");
    return ExtremalParams<double>{number_field(p, "s"), number_field(p, "d"), number_field(p, "g"),
                                  number_field(p, "lambda")};
  }
  throw MalformedInput("input needs one of \"cm\", \"standard_form\" or \"extremal\"");
}

StateInput parse_state_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MalformedInput(std::string("invalid JSON: ") + e.what());
  }
  return parse_state_json(doc);
}

MeasureReport measure(const StateInput& input, const MeasureOptions& opts) {
  const double tol = opts.physicality_tol;
  MeasureReport r;
  std::optional<ExtremalParams<double>> params;
  if (const auto* cm = std::get_if<CovarianceMatrix<double>>(&input)) {
    r.input_kind = "cm";
    detail::require_physical(*cm, tol);
    r.standard_form = to_standard_form(*cm, tol);
  } else if (const auto* sf = std::get_if<StandardForm<double>>(&input)) {
    r.input_kind = "standard_form";
    r.standard_form = canonical(*sf);
    detail::require_physical(r.standard_form, tol);
  } else {
    r.input_kind = "extremal";
    params = std::get<ExtremalParams<double>>(input);
    r.standard_form = build_state(*params);
    detail::require_physical(r.standard_form, tol);
  }

  r.invariants = invariants(r.standard_form);
  r.purity = global_purity(r.invariants);
  std::tie(r.purity_mode1, r.purity_mode2) = local_purities(r.invariants);
  r.spectrum = symplectic_spectrum(r.invariants, tol);
  r.negativity = negativity_report(r.standard_form, opts.em.log_base, tol);
  r.gem = minimize_m(r.standard_form, opts.em);
  if (params) r.closed_form = closed_form_for(*params, r.spectrum, r.gem.m_opt);
  return r;
}

json to_json(const StandardForm<double>& sf) {
  return {{"a", sf.a}, {"b", sf.b}, {"c_plus", sf.c_plus}, {"c_minus", sf.c_minus}};
}

json to_json(const GemResult<double>& gem) {
  return {{"m_opt", gem.m_opt},
          {"theta_opt", gem.theta_opt},
          {"nu_tilde_opt", gem.nu_tilde_opt},
          {"gaussian_eof", gem.gaussian_eof},
          {"extrema_found", gem.extrema_found}};
}

json to_json(const MeasureReport& r) {
  json out;
  out["input_kind"] = r.input_kind;
  out["standard_form"] = to_json(r.standard_form);
  out["purities"] = {{"global", r.purity}, {"mode1", r.purity_mode1}, {"mode2", r.purity_mode2}};
  out["invariants"] = {{"det_alpha", r.invariants.det_alpha},
                       {"det_beta", r.invariants.det_beta},
                       {"det_gamma", r.invariants.det_gamma},
                       {"det_sigma", r.invariants.det_sigma},
                       {"delta", r.invariants.delta},
                       {"delta_tilde", r.invariants.delta_tilde}};
  out["spectrum"] = {{"nu_minus", r.spectrum.nu_minus},
                     {"nu_plus", r.spectrum.nu_plus},
                     {"nu_tilde_minus", r.spectrum.nu_tilde_minus},
                     {"nu_tilde_plus", r.spectrum.nu_tilde_plus}};
  json neg = {{"separable", r.negativity.separable},
              {"negativity", r.negativity.negativity},
              {"log_negativity", r.negativity.log_negativity},
              {"log_base", log_base_name(r.negativity.log_base)}};
  neg["eof_symmetric"] = r.negativity.eof_symmetric ? json(*r.negativity.eof_symmetric) : json(nullptr);
  out["negativity"] = neg;
  out["gem"] = to_json(r.gem);
  if (r.closed_form) {
    const auto& c = *r.closed_form;
    json block = {{"family", c.family},
                  {"params", {{"s", c.params.s}, {"d", c.params.d}, {"g", c.params.g}, {"lambda", c.params.lambda}}},
                  {"m_oracle", c.m_oracle},
                  {"modes_swapped", c.modes_swapped}};
    block["m_closed"] = c.m_closed ? json(*c.m_closed) : json(nullptr);
    out["closed_form"] = block;
  }
  return out;
}

}  // namespace cvent
