#include "discos/model_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "discos/errors.hpp"

namespace discos {

namespace {

using nlohmann::json;

const json& require(const json& doc, const char* field) {
  auto it = doc.find(field);
  if (it == doc.end()) throw ValidationError(std::string("model.") + field + ": missing required field");
  return *it;
}

double number_field(const json& doc, const char* field) {
  const json& v = require(doc, field);
  if (!v.is_number()) throw ValidationError(std::string("model.") + field + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError(std::string("model.") + field + ": not finite");
  return d;
}

std::vector<double> array_field(const json& doc, const char* field) {
  const json& v = require(doc, field);
  if (!v.is_array()) throw ValidationError(std::string("model.") + field + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      throw ValidationError(std::string("model.") + field + "[" + std::to_string(i) + "]: expected a number");
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

int count_field(const json& doc, const char* field) {
  const json& v = require(doc, field);
  if (!v.is_number_integer()) {
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d == std::floor(d) && std::abs(d) < 1e9) return static_cast<int>(d);
    }
    throw ValidationError(std::string("model.") + field + ": expected an integer");
  }
  return v.get<int>();
}

template <typename F>
auto with_prefix(F&& build) {
  try {
    return build();
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    if (msg.rfind("model.", 0) == 0) throw;
    throw ValidationError("model." + msg);
  }
}

}  // namespace

Model parse_model(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("model: malformed JSON (") + e.what() + ")");
  }
  if (!doc.is_object()) throw ValidationError("model: top level must be a JSON object");
  const json& type_v = require(doc, "type");
  if (!type_v.is_string()) throw ValidationError("model.type: expected a string");
  const std::string type = type_v.get<std::string>();

  if (type == "discrete") {
    return with_prefix([&]() -> Model { return DiscreteDist(array_field(doc, "points"), array_field(doc, "probs")); });
  }
  if (type == "discrete2d") {
    return with_prefix([&]() -> Model {
      DiscreteDist2D d{array_field(doc, "x1"), array_field(doc, "x2"), array_field(doc, "probs")};
      d.validate();
      return d;
    });
  }
  if (type == "gpb") {
    return with_prefix([&]() -> Model {
      GpbSpec s{array_field(doc, "a"), array_field(doc, "b"), array_field(doc, "p")};
      s.validate();
      return s;
    });
  }
  if (type == "pb") {
    return with_prefix([&]() -> Model {
      GpbSpec s = GpbSpec::poisson_binomial(array_field(doc, "p"));
      s.validate();
      return s;
    });
  }
  if (type == "hawkes") {
    return with_prefix([&]() -> Model {
      HawkesModel m;
      m.kappa = number_field(doc, "kappa");
      m.c = number_field(doc, "c");
      m.delta = number_field(doc, "delta");
      m.loss_rate = number_field(doc, "loss_rate");
      m.t = number_field(doc, "t");
      m.T = number_field(doc, "T");
      m.lambda_t = number_field(doc, "lambda_t");
      m.L_t = doc.contains("L_t") ? number_field(doc, "L_t") : 0.0;
      m.N_t = count_field(doc, "N_t");
      m.validate();
      return m;
    });
  }
  throw ValidationError("model.type: unknown type '" + type + "' (expected discrete|discrete2d|gpb|pb|hawkes)");
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("model: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

std::string model_type(const Model& model) {
  struct Visitor {
    std::string operator()(const DiscreteDist&) const { return "discrete"; }
    std::string operator()(const DiscreteDist2D&) const { return "discrete2d"; }
    std::string operator()(const GpbSpec&) const { return "gpb"; }
    std::string operator()(const HawkesModel&) const { return "hawkes"; }
  };
  return std::visit(Visitor{}, model);
}

CharFn1D model_charfn(const Model& model, int hawkes_steps) {
  struct Visitor {
    int steps;
    CharFn1D operator()(const DiscreteDist& d) const { return charfn_discrete(d); }
    CharFn1D operator()(const DiscreteDist2D&) const {
      throw ValidationError("model.type: discrete2d is bivariate; use cdf2d");
    }
    CharFn1D operator()(const GpbSpec& s) const { return charfn_gpb(s); }
    CharFn1D operator()(const HawkesModel& m) const { return hawkes_count_charfn(m, steps); }
  };
  return std::visit(Visitor{hawkes_steps}, model);
}

}  // namespace discos
