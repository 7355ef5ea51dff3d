#include "expdist/errors.hpp"

namespace expdist {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::malformed_row: return "MalformedRow";
    case Errc::missing_header: return "MissingHeader";
    case Errc::non_contiguous_classes: return "NonContiguousClasses";
    case Errc::frequency_sum_mismatch: return "FrequencySumMismatch";
    case Errc::mean_outside_class: return "MeanOutsideClass";
    case Errc::too_few_classes: return "TooFewClasses";
    case Errc::missing_deflator: return "MissingDeflator";
    case Errc::missing_class_means: return "MissingClassMeans";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::mixed_families: return "MixedFamilies";
    case Errc::invalid_config: return "InvalidConfig";
    case Errc::bad_input: return "BadInput";
    case Errc::invalid_params: return "InvalidParams";
    case Errc::degenerate_prediction: return "DegeneratePrediction";
    case Errc::optimizer_failure: return "OptimizerFailure";
    case Errc::singular_regression: return "SingularRegression";
    case Errc::grid_mismatch: return "GridMismatch";
    case Errc::degenerate_sample: return "DegenerateSample";
    case Errc::undefined_mean: return "UndefinedMean";
    case Errc::insufficient_tail: return "InsufficientTail";
    case Errc::degenerate_design: return "DegenerateDesign";
    case Errc::io_error: return "IoError";
  }
  return "Error";
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::malformed_row:
    case Errc::missing_header:
    case Errc::non_contiguous_classes:
    case Errc::frequency_sum_mismatch:
    case Errc::mean_outside_class:
    case Errc::too_few_classes:
    case Errc::missing_deflator:
    case Errc::missing_class_means:
    case Errc::length_mismatch:
    case Errc::mixed_families:
    case Errc::invalid_config:
    case Errc::bad_input:
      return 1;
    case Errc::io_error:
      return 3;
    default:
      return 2;
  }
}

}  // namespace expdist
