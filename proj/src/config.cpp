#include "blesskit/config.hpp"

#include <cmath>

#include "blesskit/error.hpp"

namespace blesskit {

std::string to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::bless: return "bless";
    case Algorithm::bless_r: return "bless-r";
    case Algorithm::two_pass: return "two-pass";
    case Algorithm::uniform: return "uniform";
    case Algorithm::exact_rls: return "exact-rls";
    case Algorithm::full: return "full";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  for (Algorithm a : {Algorithm::bless, Algorithm::bless_r, Algorithm::two_pass,
                      Algorithm::uniform, Algorithm::exact_rls, Algorithm::full}) {
    if (to_string(a) == name) return a;
  }
  throw InvalidArgument("unknown algorithm '" + name +
                        "' (expected bless, bless-r, two-pass, uniform, exact-rls or full)");
}

namespace {

void require_lambda(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidArgument(std::string(name) + " must be finite and > 0");
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  const KernelFamily family = parse_kernel_family(kernel);
  if (family == KernelFamily::gaussian && (!(sigma > 0.0) || !std::isfinite(sigma))) {
    throw InvalidArgument("sigma must be finite and > 0");
  }
  if (label_column < kNoLabel) throw InvalidArgument("label column must be >= 0 (or -1 for none)");
  require_lambda(lambda, "lambda");
  if (lambda_bless) require_lambda(*lambda_bless, "lambda_bless");
  if (lambda_falkon) require_lambda(*lambda_falkon, "lambda_falkon");
  if (bless_lambda() < falkon_lambda()) {
    throw InvalidArgument("lambda_bless must be >= lambda_falkon");
  }
  bless.validate();
  if (dictionary_size < 0 || first_pass_size < 0) {
    throw InvalidArgument("dictionary sizes must be >= 0 (0 = automatic)");
  }
  if (cg_iters < 1) throw InvalidArgument("cg_iters must be >= 1");
  if (seeds.empty()) throw InvalidArgument("at least one seed is required");
  if (oracle_cap < 1) throw InvalidArgument("oracle_cap must be >= 1");
  if (!(split > 0.0 && split < 1.0)) throw InvalidArgument("split must lie in (0, 1)");
  for (Index n : n_grid) {
    if (n < 1) throw InvalidArgument("n_grid entries must be >= 1");
  }
  if (repeats < 1) throw InvalidArgument("repeats must be >= 1");
  if (!(single_run_seconds >= 0.0)) throw InvalidArgument("single_run_seconds must be >= 0");
  if (out_format != "json" && out_format != "csv") {
    throw InvalidArgument("out_format must be json or csv");
  }
}

}  // namespace blesskit
