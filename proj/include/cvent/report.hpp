#pragma once
// Single-state measurement report and its JSON form.

#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "cvent/bounds.hpp"
#include "cvent/covariance.hpp"
#include "cvent/extremal.hpp"
#include "cvent/gaussian_em.hpp"
#include "cvent/negativity.hpp"

namespace cvent {

using StateInput = std::variant<CovarianceMatrix<double>, StandardForm<double>, ExtremalParams<double>>;

/// Accepts {"cm": [[4x4]]}, {"standard_form": {"a", "b", "c_plus", "c_minus"}} or
/// {"extremal": {"s", "d", "g", "lambda"}}. Throws MalformedInput on anything else.
StateInput parse_state_json(const nlohmann::json& doc);
StateInput parse_state_text(const std::string& text);

struct MeasureOptions {
  double physicality_tol = defaults::physicality_tol;
  EmOptions em;
};

struct ClosedFormBlock {
  std::string family;  // gmems, glems, gmemms or generic
  ExtremalParams<double> params;
  std::optional<double> m_closed;
  double m_oracle{1};
  bool modes_swapped{false};
};

struct MeasureReport {
  std::string input_kind;
  StandardForm<double> standard_form;
  double purity{1};
  double purity_mode1{1};
  double purity_mode2{1};
  SymplecticInvariants<double> invariants;
  SymplecticSpectrum<double> spectrum;
  NegativityReport<double> negativity;
  GemResult<double> gem;
  std::optional<ClosedFormBlock> closed_form;
};

/// Throws DomainError (naming the violated inequality) for unphysical input.
MeasureReport measure(const StateInput& input, const MeasureOptions& opts = {});

nlohmann::json to_json(const StandardForm<double>& sf);
nlohmann::json to_json(const GemResult<double>& gem);
nlohmann::json to_json(const MeasureReport& report);

}  // namespace cvent
