#pragma once

#include <string>
#include <vector>

namespace mafl {

// Flat parameter vector exchanged between vehicles and the RSU. Two
// instances are combinable only when their shape tags match exactly; every
// arithmetic op checks finiteness of the result.
struct ModelParams {
  std::vector<double> values;
  std::string shape_tag;  // e.g. "softmax:784x10", "mlp:784x64x10"

  bool combinable_with(const ModelParams& other) const {
    return shape_tag == other.shape_tag && values.size() == other.values.size();
  }
};

// out-of-place elementwise ops; throw NumericError on shape mismatch or
// non-finite result
ModelParams scale(const ModelParams& m, double factor);
ModelParams add(const ModelParams& a, const ModelParams& b);

// a*x + b*y, the aggregation primitive
ModelParams axpby(double a, const ModelParams& x, double b,
                  const ModelParams& y);

void check_finite(const ModelParams& m, const char* context);

}  // namespace mafl
