#pragma once

#include <memory>
#include <span>
#include <vector>

#include "pmdep/matrix.hpp"
#include "pmdep/regress.hpp"

namespace pmdep::detail {

struct GbtPredictor;

// Trains the boosted-tree ensemble. Deterministic: identical inputs give an
// identical model.
std::shared_ptr<const Predictor> fit_gbt(const GbtSpec& spec, const Matrix& features,
                                         std::span<const double> targets);

const std::vector<double>* gbt_mse_path(const Predictor& p);

} // namespace pmdep::detail
