#include "mafl/metrics.hpp"

#include <cmath>

#include "mafl/errors.hpp"

namespace mafl {

EvalResult evaluate(const TrainerModel& model, const DatasetView& test) {
  if (test.size() == 0) throw NumericError("evaluate: empty test set");
  std::vector<double> probs = predict_probs(model, test);
  const int c = model.n_classes;
  std::size_t correct = 0;
  double total_loss = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const double* row = probs.data() + i * c;
    int best = 0;
    for (int j = 1; j < c; ++j)
      if (row[j] > row[best]) best = j;  // strict >: ties go to lowest index
    if (best == test.label(i)) ++correct;
    double q = row[test.label(i)];
    total_loss -= std::log(q < 1e-12 ? 1e-12 : q);
  }
  EvalResult r;
  r.accuracy_pct = 100.0 * static_cast<double>(correct) /
                   static_cast<double>(test.size());
  r.per_sample_loss = total_loss / static_cast<double>(test.size());
  return r;
}

EvalResult evaluate(const ModelParams& global, const SimConfig& cfg,
                    const Dataset& test) {
  TrainerModel m = model_from_params(cfg.model_kind, test.feature_dim,
                                     test.num_classes, cfg.hidden_width,
                                     global);
  DatasetView v = view_all(test);
  return evaluate(m, v);
}

}  // namespace mafl
