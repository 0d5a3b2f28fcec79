#include "mafl/model.hpp"

#include <cmath>

#include "mafl/errors.hpp"

namespace mafl {

void check_finite(const ModelParams& m, const char* context) {
  for (double v : m.values) {
    if (!std::isfinite(v))
      throw NumericError(std::string(context) + ": non-finite parameter value");
  }
}

static void check_shapes(const ModelParams& a, const ModelParams& b,
                         const char* context) {
  if (!a.combinable_with(b))
    throw NumericError(std::string(context) + ": shape mismatch ('" +
                       a.shape_tag + "' vs '" + b.shape_tag + "')");
}

ModelParams scale(const ModelParams& m, double factor) {
  ModelParams out;
  out.shape_tag = m.shape_tag;
  out.values.reserve(m.values.size());
  for (double v : m.values) out.values.push_back(v * factor);
  check_finite(out, "scale");
  return out;
}

ModelParams add(const ModelParams& a, const ModelParams& b) {
  check_shapes(a, b, "add");
  ModelParams out;
  out.shape_tag = a.shape_tag;
  out.values.reserve(a.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i)
    out.values.push_back(a.values[i] + b.values[i]);
  check_finite(out, "add");
  return out;
}

ModelParams axpby(double a, const ModelParams& x, double b,
                  const ModelParams& y) {
  check_shapes(x, y, "axpby");
  ModelParams out;
  out.shape_tag = x.shape_tag;
  out.values.reserve(x.values.size());
  for (std::size_t i = 0; i < x.values.size(); ++i)
    out.values.push_back(a * x.values[i] + b * y.values[i]);
  check_finite(out, "axpby");
  return out;
}

}  // namespace mafl
