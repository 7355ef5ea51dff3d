#pragma once

#include <stdexcept>
#include <string>

namespace expdist {

enum class Errc {
  // input / data errors
  malformed_row,
  missing_header,
  non_contiguous_classes,
  frequency_sum_mismatch,
  mean_outside_class,
  too_few_classes,
  missing_deflator,
  missing_class_means,
  length_mismatch,
  mixed_families,
  invalid_config,
  bad_input,
  // numeric errors
  invalid_params,
  degenerate_prediction,
  optimizer_failure,
  singular_regression,
  grid_mismatch,
  degenerate_sample,
  undefined_mean,
  insufficient_tail,
  degenerate_design,
  // i/o
  io_error,
};

const char* errc_name(Errc code);

// CLI exit codes: 1 = input, 2 = numeric, 3 = I/O.
int exit_code_for(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace expdist
