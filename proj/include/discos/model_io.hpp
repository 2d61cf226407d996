#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "discos/charfn_models.hpp"

namespace discos {

/// A distribution model read from JSON. `pb` documents load as GpbSpec with
/// a = 0, b = 1.
using Model = std::variant<DiscreteDist, DiscreteDist2D, GpbSpec, HawkesModel>;

/// Parses a model document. Malformed JSON, unknown types and missing or
/// ill-typed fields raise ValidationError naming the field.
Model parse_model(std::string_view json_text);

/// Reads and parses a model file.
Model load_model(const std::string& path);

/// "discrete", "discrete2d", "gpb" or "hawkes".
std::string model_type(const Model& model);

/// Characteristic function of a univariate model (the count N_T for hawkes).
/// Bivariate models raise ValidationError.
CharFn1D model_charfn(const Model& model, int hawkes_steps = kDefaultHawkesSteps);

}  // namespace discos
